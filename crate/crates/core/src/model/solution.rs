use alloc::vec;
use alloc::vec::Vec;

use super::{feasibility, Scenario};
use crate::error::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Where the task of one IoT device ends up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Route {
    #[default]
    Unserved,
    /// Uploaded to the UAV and computed there.
    Uav(usize),
    /// Uploaded to the UAV, forwarded to the HAP and computed there.
    Relay { uav: usize, hap: usize },
    /// Uploaded straight to the HAP and computed there (HAP-only mode).
    Direct { hap: usize },
}

impl Route {
    pub fn is_served(&self) -> bool {
        !matches!(self, Route::Unserved)
    }

    /// UAV whose uplink and quota the route uses.
    pub fn uav(&self) -> Option<usize> {
        match *self {
            Route::Uav(u) | Route::Relay { uav: u, .. } => Some(u),
            _ => None,
        }
    }

    /// HAP that computes the task.
    pub fn hap(&self) -> Option<usize> {
        match *self {
            Route::Relay { hap, .. } | Route::Direct { hap } => Some(hap),
            _ => None,
        }
    }
}

/// Per-IoT delays and per-node energies of a solution.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Derived {
    pub delays_s: Vec<f64>,
    pub iot_energy_j: Vec<f64>,
    pub uav_energy_j: Vec<f64>,
    pub hap_energy_j: Vec<f64>,
}

/// Binary offloading decisions.
///
/// `x[i][u]`: IoT `i` uploads to UAV `u`; `beta[i][u]`: UAV `u` computes it;
/// `y[i][u][h]`: UAV `u` forwards it to HAP `h`; `gamma[i][h]`: HAP `h`
/// computes it; `direct[i][h]`: IoT `i` uploads straight to HAP `h`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Solution {
    pub x: Vec<Vec<bool>>,
    pub beta: Vec<Vec<bool>>,
    pub gamma: Vec<Vec<bool>>,
    pub y: Vec<Vec<Vec<bool>>>,
    pub direct: Vec<Vec<bool>>,
    pub derived: Derived,
}

impl Solution {
    /// All-zero decisions with empty derived values.
    pub fn empty(n_iot: usize, n_uav: usize, n_hap: usize) -> Self {
        Solution {
            x: vec![vec![false; n_uav]; n_iot],
            beta: vec![vec![false; n_uav]; n_iot],
            gamma: vec![vec![false; n_hap]; n_iot],
            y: vec![vec![vec![false; n_hap]; n_uav]; n_iot],
            direct: vec![vec![false; n_hap]; n_iot],
            derived: Derived::default(),
        }
    }

    /// Builds the flag matrices for `routes` and fills in derived values.
    pub fn from_routes(routes: &[Route], scenario: &Scenario) -> Result<Self> {
        let mut sol = Self::flags_from_routes(routes, scenario)?;
        sol.refresh_derived(scenario)?;
        Ok(sol)
    }

    pub(crate) fn flags_from_routes(routes: &[Route], scenario: &Scenario) -> Result<Self> {
        let (n_iot, n_uav, n_hap) = (scenario.n_iot(), scenario.n_uav(), scenario.n_hap());
        if routes.len() != n_iot {
            return Err(Error::DimensionMismatch {
                what: "routes",
                expected: n_iot,
                found: routes.len(),
            });
        }
        let mut sol = Self::empty(n_iot, n_uav, n_hap);
        for (i, route) in routes.iter().enumerate() {
            let in_range = route.uav().is_none_or(|u| u < n_uav)
                && route.hap().is_none_or(|h| h < n_hap);
            if !in_range {
                return Err(Error::DimensionMismatch {
                    what: "route target",
                    expected: n_uav.max(n_hap),
                    found: route.uav().or(route.hap()).unwrap_or(0),
                });
            }
            match *route {
                Route::Unserved => {}
                Route::Uav(u) => {
                    sol.x[i][u] = true;
                    sol.beta[i][u] = true;
                }
                Route::Relay { uav, hap } => {
                    sol.x[i][uav] = true;
                    sol.y[i][uav][hap] = true;
                    sol.gamma[i][hap] = true;
                }
                Route::Direct { hap } => {
                    sol.direct[i][hap] = true;
                    sol.gamma[i][hap] = true;
                }
            }
        }
        Ok(sol)
    }

    /// Recovers one route per IoT. Fails for flag patterns no route
    /// produces (split flows, relayed-but-uncomputed tasks, ...).
    pub fn routes(&self) -> Result<Vec<Route>> {
        let mut routes = Vec::with_capacity(self.x.len());
        for i in 0..self.x.len() {
            let bad = Error::InconsistentFlags { iot: i };
            let uavs: Vec<usize> = (0..self.x[i].len()).filter(|&u| self.x[i][u]).collect();
            let directs: Vec<usize> = (0..self.direct[i].len())
                .filter(|&h| self.direct[i][h])
                .collect();
            let gammas: Vec<usize> = (0..self.gamma[i].len()).filter(|&h| self.gamma[i][h]).collect();
            let route = match (uavs.as_slice(), directs.as_slice()) {
                ([], []) => {
                    let stray = self.beta[i].iter().any(|&b| b)
                        || self.y[i].iter().flatten().any(|&f| f)
                        || !gammas.is_empty();
                    if stray {
                        return Err(bad);
                    }
                    Route::Unserved
                }
                (&[u], []) => {
                    let relays: Vec<usize> =
                        (0..self.y[i][u].len()).filter(|&h| self.y[i][u][h]).collect();
                    let other_flags = (0..self.x[i].len())
                        .filter(|&v| v != u)
                        .any(|v| self.beta[i][v] || self.y[i][v].iter().any(|&f| f));
                    if other_flags {
                        return Err(bad);
                    }
                    match (self.beta[i][u], relays.as_slice(), gammas.as_slice()) {
                        (true, [], []) => Route::Uav(u),
                        (false, &[h], &[g]) if h == g => Route::Relay { uav: u, hap: h },
                        _ => return Err(bad),
                    }
                }
                ([], &[h]) => {
                    let stray = self.beta[i].iter().any(|&b| b)
                        || self.y[i].iter().flatten().any(|&f| f);
                    if stray || gammas.as_slice() != [h] {
                        return Err(bad);
                    }
                    Route::Direct { hap: h }
                }
                _ => return Err(bad),
            };
            routes.push(route);
        }
        Ok(routes)
    }

    /// Recomputes delays and energies from the flags.
    pub fn refresh_derived(&mut self, scenario: &Scenario) -> Result<()> {
        self.derived = feasibility::derive(self, scenario)?;
        Ok(())
    }

    /// Checks that every flag matrix matches the scenario's entity counts.
    pub fn check_dims(&self, scenario: &Scenario) -> Result<()> {
        let (n_iot, n_uav, n_hap) = (scenario.n_iot(), scenario.n_uav(), scenario.n_hap());
        let mismatch = |what, expected, found| {
            Err(Error::DimensionMismatch {
                what,
                expected,
                found,
            })
        };
        for (what, rows) in [("x", &self.x), ("beta", &self.beta)] {
            if rows.len() != n_iot {
                return mismatch(what, n_iot, rows.len());
            }
            if let Some(r) = rows.iter().find(|r| r.len() != n_uav) {
                return mismatch(what, n_uav, r.len());
            }
        }
        for (what, rows) in [("gamma", &self.gamma), ("direct", &self.direct)] {
            if rows.len() != n_iot {
                return mismatch(what, n_iot, rows.len());
            }
            if let Some(r) = rows.iter().find(|r| r.len() != n_hap) {
                return mismatch(what, n_hap, r.len());
            }
        }
        if self.y.len() != n_iot {
            return mismatch("y", n_iot, self.y.len());
        }
        for per_uav in &self.y {
            if per_uav.len() != n_uav {
                return mismatch("y", n_uav, per_uav.len());
            }
            if let Some(r) = per_uav.iter().find(|r| r.len() != n_hap) {
                return mismatch("y", n_hap, r.len());
            }
        }
        Ok(())
    }

    /// Number of IoT devices with an active compute flag.
    pub fn served_count(&self) -> usize {
        (0..self.x.len())
            .filter(|&i| self.beta[i].iter().any(|&b| b) || self.gamma[i].iter().any(|&g| g))
            .count()
    }
}
