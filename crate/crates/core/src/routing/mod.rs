// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Qubit mapping and SWAP insertion.
//!
//! [`route`] runs the layered SWAP search with either the distance-only SABRE cost or the
//! optimization-aware NASSC cost. [`full_pipeline`] wraps it with the logical pre-passes, the
//! reverse-traversal initial mapping, label-driven SWAP decomposition and physical post-passes.

mod pipeline;
mod router;

use serde::{Deserialize, Serialize};

use crate::topology::NoiseProfile;

pub use pipeline::{
    decompose_swaps, full_pipeline, initial_mapping, optimize, unroll, RoutingResult, RoutingStats,
};
pub use router::{annotate, cost, rng_for, enumerate_candidates, route, RoutedCircuit, RoutingState, SwapCandidate};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RoutingError {
    #[error("circuit needs {needed} qubits but the coupling map has {available}")]
    TooFewPhysicalQubits { needed: usize, available: usize },
    #[error("routing did not finish within {0} iterations")]
    NonTermination(usize),
    #[error("front layer has no unsatisfied two-qubit gate")]
    EmptyFront,
}

/// Bijection between logical and physical qubits. Both sides have the device width.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitMapping {
    log_to_phys: Vec<usize>,
    phys_to_log: Vec<usize>,
}

impl QubitMapping {
    pub fn identity(n: usize) -> QubitMapping {
        QubitMapping {
            log_to_phys: (0..n).collect(),
            phys_to_log: (0..n).collect(),
        }
    }

    /// Build from `log_to_phys`, or `None` if it is not a permutation.
    pub fn from_log_to_phys(log_to_phys: Vec<usize>) -> Option<QubitMapping> {
        let n = log_to_phys.len();
        let mut phys_to_log = vec![usize::MAX; n];
        for (l, &p) in log_to_phys.iter().enumerate() {
            if p >= n || phys_to_log[p] != usize::MAX {
                return None;
            }
            phys_to_log[p] = l;
        }
        Some(QubitMapping {
            log_to_phys,
            phys_to_log,
        })
    }

    pub fn len(&self) -> usize {
        self.log_to_phys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_to_phys.is_empty()
    }

    #[inline]
    pub fn phys(&self, logical: usize) -> usize {
        self.log_to_phys[logical]
    }

    #[inline]
    pub fn logical(&self, physical: usize) -> usize {
        self.phys_to_log[physical]
    }

    pub fn log_to_phys(&self) -> &[usize] {
        &self.log_to_phys
    }

    pub fn phys_to_log(&self) -> &[usize] {
        &self.phys_to_log
    }

    /// Exchange the logical qubits sitting on physical `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.phys_to_log[a], self.phys_to_log[b]);
        self.phys_to_log.swap(a, b);
        self.log_to_phys[la] = b;
        self.log_to_phys[lb] = a;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sabre,
    Nassc,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sabre" => Ok(Algorithm::Sabre),
            "nassc" => Ok(Algorithm::Nassc),
            other => Err(format!("unknown router {other:?}")),
        }
    }
}

/// Which predicted reductions enter the NASSC cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OptFlags {
    pub b_2q: bool,
    pub b_commute1: bool,
    pub b_commute2: bool,
}

impl OptFlags {
    pub const ALL: OptFlags = OptFlags {
        b_2q: true,
        b_commute1: true,
        b_commute2: true,
    };
    pub const NONE: OptFlags = OptFlags {
        b_2q: false,
        b_commute1: false,
        b_commute2: false,
    };

    /// The eight on/off combinations, all-disabled first.
    pub fn all_combinations() -> [OptFlags; 8] {
        std::array::from_fn(|i| OptFlags {
            b_2q: i & 1 != 0,
            b_commute1: i & 2 != 0,
            b_commute2: i & 4 != 0,
        })
    }

    pub fn any(&self) -> bool {
        self.b_2q || self.b_commute1 || self.b_commute2
    }
}

impl Default for OptFlags {
    fn default() -> Self {
        OptFlags::ALL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum DistanceKind {
    #[default]
    Hops,
    Noise { profile: NoiseProfile },
}

/// How the starting placement is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LayoutMethod {
    /// Random placement refined by forward and reverse routing passes.
    #[default]
    Sabre,
    /// Logical `i` on physical `i`.
    Trivial,
}

impl std::str::FromStr for LayoutMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sabre" => Ok(LayoutMethod::Sabre),
            "trivial" => Ok(LayoutMethod::Trivial),
            other => Err(format!("unknown layout {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RouterConfig {
    pub algorithm: Algorithm,
    pub extended_size: usize,
    pub extended_weight: f64,
    pub opts: OptFlags,
    pub seed: u64,
    pub distance: DistanceKind,
    pub traversals: usize,
    pub layout: LayoutMethod,
}

impl Default for RouterConfig {
    fn default() -> Self {
        RouterConfig {
            algorithm: Algorithm::Nassc,
            extended_size: 20,
            extended_weight: 0.5,
            opts: OptFlags::ALL,
            seed: 0,
            distance: DistanceKind::Hops,
            traversals: 3,
            layout: LayoutMethod::Sabre,
        }
    }
}

impl RouterConfig {
    pub fn sabre(seed: u64) -> RouterConfig {
        RouterConfig {
            algorithm: Algorithm::Sabre,
            seed,
            ..RouterConfig::default()
        }
    }

    pub fn nassc(seed: u64) -> RouterConfig {
        RouterConfig {
            seed,
            ..RouterConfig::default()
        }
    }

    /// Flags that actually apply: none for SABRE.
    pub fn effective_opts(&self) -> OptFlags {
        match self.algorithm {
            Algorithm::Sabre => OptFlags::NONE,
            Algorithm::Nassc => self.opts,
        }
    }
}
