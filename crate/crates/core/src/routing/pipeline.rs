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

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{metrics, Circuit, Gate, GateKind, Layouts};
use crate::commutation::{commutative_cancellation, DecompositionLabel};
use crate::synthesis::{merge_1q_runs, resynthesize_blocks};
use crate::topology::{all_pairs_distance, noise_distance, CouplingMap, DistanceMatrix};
use crate::Error;

use super::router::{random_mapping, rng_for, route};
use super::{Algorithm, DistanceKind, LayoutMethod, QubitMapping, RouterConfig, RoutingError};

const MAX_POST_ROUNDS: usize = 10;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RoutingStats {
    pub swaps_inserted: usize,
    pub cnot_total_orig: usize,
    pub cnot_total: usize,
    pub cnot_add: i64,
    pub depth_orig: usize,
    pub depth_total: usize,
    pub depth_add: i64,
    pub swaps_opt_by_2q: usize,
    pub swaps_opt_by_commute: usize,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutingResult {
    /// Physical circuit over every qubit of the coupling map, CX and single-qubit gates only.
    pub circuit: Circuit,
    pub initial_mapping: QubitMapping,
    pub final_mapping: QubitMapping,
    pub stats: RoutingStats,
}

impl RoutingResult {
    /// Placements to check the routed circuit against the logical one.
    pub fn layouts(&self) -> Layouts {
        Layouts::new(
            self.initial_mapping.log_to_phys().to_vec(),
            self.final_mapping.log_to_phys().to_vec(),
        )
    }
}

/// Expand CY, CZ, CRX and SWAP into CX and single-qubit gates.
pub fn unroll(c: &Circuit) -> Circuit {
    let mut out = c.empty_like();
    for g in c.gates() {
        let (a, b) = (g.qubits.first().copied(), g.qubits.get(1).copied());
        match g.kind {
            GateKind::CZ => {
                let (a, b) = (a.unwrap(), b.unwrap());
                out.push_unchecked(Gate::h(b));
                out.push_unchecked(Gate::cx(a, b));
                out.push_unchecked(Gate::h(b));
            }
            GateKind::CY => {
                let (a, b) = (a.unwrap(), b.unwrap());
                out.push_unchecked(Gate::rz(-FRAC_PI_2, b));
                out.push_unchecked(Gate::cx(a, b));
                out.push_unchecked(Gate::rz(FRAC_PI_2, b));
            }
            GateKind::CRX => {
                let (a, b) = (a.unwrap(), b.unwrap());
                let t = g.params[0];
                out.push_unchecked(Gate::h(b));
                out.push_unchecked(Gate::rz(t / 2.0, b));
                out.push_unchecked(Gate::cx(a, b));
                out.push_unchecked(Gate::rz(-t / 2.0, b));
                out.push_unchecked(Gate::cx(a, b));
                out.push_unchecked(Gate::h(b));
            }
            GateKind::Swap => {
                let (a, b) = (a.unwrap(), b.unwrap());
                out.push_unchecked(Gate::cx(a, b));
                out.push_unchecked(Gate::cx(b, a));
                out.push_unchecked(Gate::cx(a, b));
            }
            _ => out.push_unchecked(g.clone()),
        }
    }
    out
}

/// Expand every SWAP into three CX, oriented by its label.
///
/// `labels` runs parallel to the gates of `c`.
pub fn decompose_swaps(c: &Circuit, labels: &[DecompositionLabel]) -> Circuit {
    let mut out = c.empty_like();
    for (i, g) in c.gates().iter().enumerate() {
        if g.kind != GateKind::Swap {
            out.push_unchecked(g.clone());
            continue;
        }
        let (a, b) = (g.qubits[0], g.qubits[1]);
        let label = labels.get(i).copied().unwrap_or(DecompositionLabel::UNLABELED);
        let ctl = label.first_control(a, b);
        let tgt = if ctl == a { b } else { a };
        out.push_unchecked(Gate::cx(ctl, tgt));
        out.push_unchecked(Gate::cx(tgt, ctl));
        out.push_unchecked(Gate::cx(ctl, tgt));
    }
    out
}

fn pre_passes(c: &Circuit) -> Result<Circuit, Error> {
    Ok(merge_1q_runs(&resynthesize_blocks(c)?))
}

/// Block re-synthesis, commutative cancellation and single-qubit merging until nothing changes,
/// for at most ten rounds. The input is unrolled first.
pub fn optimize(c: &Circuit) -> Result<Circuit, Error> {
    let mut cur = unroll(c);
    for _ in 0..MAX_POST_ROUNDS {
        let next = merge_1q_runs(&commutative_cancellation(&resynthesize_blocks(&cur)?));
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(cur)
}

fn distance_for(map: &CouplingMap, cfg: &RouterConfig) -> Result<DistanceMatrix, Error> {
    Ok(match &cfg.distance {
        DistanceKind::Hops => all_pairs_distance(map)?,
        DistanceKind::Noise { profile } => noise_distance(map, profile)?,
    })
}

fn reversed(c: &Circuit) -> Circuit {
    let mut out = c.empty_like();
    for g in c.gates().iter().rev() {
        out.push_unchecked(g.clone());
    }
    out
}

fn initial_mapping_with(
    c: &Circuit,
    map: &CouplingMap,
    dist: &DistanceMatrix,
    cfg: &RouterConfig,
    rng: &mut ChaCha8Rng,
) -> Result<QubitMapping, Error> {
    let n = map.num_physical_qubits();
    if c.num_qubits > n {
        return Err(RoutingError::TooFewPhysicalQubits {
            needed: c.num_qubits,
            available: n,
        }
        .into());
    }
    if cfg.layout == LayoutMethod::Trivial {
        return Ok(QubitMapping::identity(n));
    }
    let mut mapping = random_mapping(n, rng);
    if c.two_qubit_count() == 0 {
        return Ok(mapping);
    }
    let refine = RouterConfig {
        algorithm: Algorithm::Sabre,
        ..cfg.clone()
    };
    let back = reversed(c);
    let passes = cfg.traversals.saturating_sub(1);
    for i in 0..passes {
        let forward = (passes - 1 - i) % 2 == 1;
        let circ = if forward { c } else { &back };
        mapping = route(circ, map, dist, &mapping, &refine, rng)?.final_mapping;
    }
    Ok(mapping)
}

/// Starting placement: a seeded random bijection refined by `traversals - 1` alternating routing
/// passes that end on a reverse pass, so the next forward pass starts from their result.
pub fn initial_mapping(
    c: &Circuit,
    map: &CouplingMap,
    cfg: &RouterConfig,
) -> Result<QubitMapping, Error> {
    let dist = distance_for(map, cfg)?;
    initial_mapping_with(c, map, &dist, cfg, &mut rng_for(cfg.seed))
}

/// Transpile `c` for `map`: pre-passes, placement, routing, SWAP decomposition and post-passes.
pub fn full_pipeline(
    c: &Circuit,
    map: &CouplingMap,
    cfg: &RouterConfig,
) -> Result<RoutingResult, Error> {
    let baseline = metrics(&optimize(&pre_passes(c)?)?)?;
    let start = Instant::now();
    let dist = distance_for(map, cfg)?;
    let mut rng = rng_for(cfg.seed);
    let logical = pre_passes(c)?;
    let init = initial_mapping_with(&logical, map, &dist, cfg, &mut rng)?;
    let routed = route(&logical, map, &dist, &init, cfg, &mut rng)?;
    let physical = optimize(&decompose_swaps(&routed.circuit, &routed.labels))?;
    let wall = start.elapsed().as_secs_f64();
    let m = metrics(&physical)?;
    Ok(RoutingResult {
        circuit: physical,
        initial_mapping: routed.initial_mapping,
        final_mapping: routed.final_mapping,
        stats: RoutingStats {
            swaps_inserted: routed.swaps_inserted,
            cnot_total_orig: baseline.cnot_count,
            cnot_total: m.cnot_count,
            cnot_add: m.cnot_count as i64 - baseline.cnot_count as i64,
            depth_orig: baseline.depth,
            depth_total: m.depth,
            depth_add: m.depth as i64 - baseline.depth as i64,
            swaps_opt_by_2q: routed.swaps_opt_by_2q,
            swaps_opt_by_commute: routed.swaps_opt_by_commute,
            wall_time_s: wall,
        },
    })
}
