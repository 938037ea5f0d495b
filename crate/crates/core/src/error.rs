use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An entity violates one of its construction invariants.
    InvalidEntity {
        entity: &'static str,
        id: usize,
        reason: &'static str,
    },
    InvalidScenario(&'static str),
    InvalidConfig(&'static str),
    /// The HAP does not sit above the UAV, so the U2H distance is not positive.
    DegenerateGeometry { uav: usize, hap: usize },
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// Offloading flags of an IoT violate flow conservation.
    InconsistentFlags { iot: usize },
    /// The solvers handle exactly one HAP.
    UnsupportedHapCount(usize),
    InstanceTooLarge { n_iot: usize, limit: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidEntity { entity, id, reason } => {
                write!(f, "invalid {entity} {id}: {reason}")
            }
            Error::InvalidScenario(reason) => write!(f, "invalid scenario: {reason}"),
            Error::InvalidConfig(reason) => write!(f, "invalid generator config: {reason}"),
            Error::DegenerateGeometry { uav, hap } => {
                write!(f, "HAP {hap} is not above UAV {uav}")
            }
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "dimension mismatch in {what}: expected {expected}, found {found}"),
            Error::InconsistentFlags { iot } => {
                write!(f, "offloading flags of IoT {iot} violate flow conservation")
            }
            Error::UnsupportedHapCount(n) => {
                write!(f, "solvers require exactly one HAP, scenario has {n}")
            }
            Error::InstanceTooLarge { n_iot, limit } => {
                write!(f, "instance has {n_iot} IoT devices, exact search limit is {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}
