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

mod common;

use nassc::circuit::{equivalent_up_to_permutation, CircuitDag, Circuit, Gate, GateKind};
use nassc::commutation::LabelReason;
use nassc::routing::{
    annotate, cost, decompose_swaps, enumerate_candidates, full_pipeline, initial_mapping, rng_for,
    route, unroll, Algorithm, LayoutMethod, OptFlags, QubitMapping, RouterConfig, RoutingState,
};
use nassc::synthesis::pair_unitary;
use nassc::topology::{all_pairs_distance, CouplingMap};

use common::{three_rotations, lookahead_circuit, random_circuit};

fn compliant(c: &Circuit, map: &CouplingMap) -> bool {
    c.gates()
        .iter()
        .filter(|g| g.is_2q())
        .all(|g| map.contains(g.qubits[0], g.qubits[1]))
}

fn trivial(cfg: RouterConfig) -> RouterConfig {
    RouterConfig {
        layout: LayoutMethod::Trivial,
        ..cfg
    }
}

#[test]
fn unroll_preserves_unitaries() {
    for g in [
        Gate::two(GateKind::CZ, 0, 1),
        Gate::two(GateKind::CY, 1, 0),
        Gate::crx(0.83, 0, 1),
        Gate::crx(-2.1, 1, 0),
        Gate::swap(0, 1),
    ] {
        let c = Circuit::from_gates(2, vec![g.clone()]).unwrap();
        let u = unroll(&c);
        assert!(u.gates().iter().all(|x| !x.is_2q() || x.kind == GateKind::CX));
        let d = nassc::linalg::phase_distance(
            &pair_unitary(c.gates(), 0, 1),
            &pair_unitary(u.gates(), 0, 1),
        );
        assert!(d < 1e-12, "{g}: {d}");
    }
}

#[test]
fn swap_decomposition_follows_labels() {
    use nassc::commutation::DecompositionLabel;
    let c = Circuit::from_gates(3, vec![Gate::swap(2, 1), Gate::swap(0, 1)]).unwrap();
    let labels = [
        DecompositionLabel::with_control(2, 2, LabelReason::Commute1),
        DecompositionLabel::UNLABELED,
    ];
    let out = decompose_swaps(&c, &labels);
    assert_eq!(
        out.gates(),
        &[
            Gate::cx(2, 1),
            Gate::cx(1, 2),
            Gate::cx(2, 1),
            Gate::cx(0, 1),
            Gate::cx(1, 0),
            Gate::cx(0, 1)
        ]
    );
    let sw = Circuit::from_gates(3, vec![Gate::swap(2, 1), Gate::swap(0, 1)]).unwrap();
    assert!(equivalent_up_to_permutation(&sw, &out, &nassc::circuit::Layouts::identity(3)).unwrap());
}

#[test]
fn lookahead_candidates_and_predictions() {
    let map = CouplingMap::linear(4).unwrap();
    let dist = all_pairs_distance(&map).unwrap();
    let mut dag = CircuitDag::new(&lookahead_circuit());
    annotate(&mut dag);
    let mut state = RoutingState::new(&dag, &map, &dist, QubitMapping::identity(4));
    assert_eq!(state.execute_ready(), 3);
    assert_eq!(state.front, vec![3]);
    assert_eq!(enumerate_candidates(&state).unwrap(), vec![(0, 1), (1, 2), (2, 3)]);
    state.refill_extended(20);
    assert_eq!(state.extended, vec![4, 5]);
    let cfg = RouterConfig::nassc(0);
    let c01 = cost(&mut state, (0, 1), &cfg);
    let c12 = cost(&mut state, (1, 2), &cfg);
    let c23 = cost(&mut state, (2, 3), &cfg);
    assert_eq!((c01.c2q, c01.ccommute1), (2, 0));
    assert_eq!((c12.c2q, c12.ccommute1), (0, 2));
    assert_eq!(c12.label.rationale, LabelReason::Commute1);
    // the cancelled CX is CX(2,1), so the SWAP opens with control on physical 2
    assert_eq!(c12.label.first_control(1, 2), 2);
    assert!(c23.cost > c12.cost);
    assert!((c01.cost - c12.cost).abs() < 1e-12);
    let sabre = RouterConfig::sabre(0);
    assert_eq!(cost(&mut state, (1, 2), &sabre).cost, 3.0 + 0.25 * 3.0);
}

#[test]
fn cost_degenerates_to_three_times_distance() {
    let map = CouplingMap::linear(4).unwrap();
    let dist = all_pairs_distance(&map).unwrap();
    let c = Circuit::from_gates(4, vec![Gate::cx(0, 3)]).unwrap();
    let dag = CircuitDag::new(&c);
    let mut state = RoutingState::new(&dag, &map, &dist, QubitMapping::identity(4));
    state.execute_ready();
    let cfg = RouterConfig {
        opts: OptFlags::NONE,
        extended_size: 0,
        ..RouterConfig::nassc(0)
    };
    assert_eq!(cost(&mut state, (0, 1), &cfg).cost, 6.0);
}

#[test]
fn empty_front_is_an_error() {
    let map = CouplingMap::linear(3).unwrap();
    let dist = all_pairs_distance(&map).unwrap();
    let c = Circuit::from_gates(3, vec![Gate::cx(0, 1), Gate::h(2)]).unwrap();
    let dag = CircuitDag::new(&c);
    let mut state = RoutingState::new(&dag, &map, &dist, QubitMapping::identity(3));
    state.execute_ready();
    assert!(enumerate_candidates(&state).is_err());
}

#[test]
fn three_rotations_nassc_adds_one_cx() {
    let map = CouplingMap::linear(3).unwrap();
    for seed in 0..10 {
        let r = full_pipeline(&three_rotations(), &map, &trivial(RouterConfig::nassc(seed))).unwrap();
        assert_eq!(r.stats.cnot_add, 1, "seed {seed}");
        assert_eq!(r.stats.swaps_inserted, 1);
        assert_eq!(r.stats.swaps_opt_by_2q, 1);
        assert!(equivalent_up_to_permutation(&three_rotations(), &r.circuit, &r.layouts()).unwrap());
    }
}

#[test]
fn three_rotations_sabre_picks_either_swap() {
    let map = CouplingMap::linear(3).unwrap();
    let mut seen = Vec::new();
    for seed in 0..10 {
        let r = full_pipeline(&three_rotations(), &map, &trivial(RouterConfig::sabre(seed))).unwrap();
        assert!(r.stats.cnot_add == 1 || r.stats.cnot_add == 3);
        seen.push(r.stats.cnot_add);
        assert!(equivalent_up_to_permutation(&three_rotations(), &r.circuit, &r.layouts()).unwrap());
    }
    assert!(seen.contains(&1) && seen.contains(&3), "{seen:?}");
}

#[test]
fn compliant_circuit_needs_no_swaps() {
    let map = CouplingMap::linear(4).unwrap();
    let c = Circuit::from_gates(4, vec![Gate::cx(0, 1), Gate::cx(1, 2), Gate::cx(2, 3)]).unwrap();
    let dist = all_pairs_distance(&map).unwrap();
    for cfg in [RouterConfig::sabre(3), RouterConfig::nassc(3)] {
        let r = route(&c, &map, &dist, &QubitMapping::identity(4), &cfg, &mut rng_for(3)).unwrap();
        assert_eq!(r.swaps_inserted, 0);
        assert_eq!(r.circuit.gates(), c.gates());
    }
}

#[test]
fn empty_circuit() {
    let map = CouplingMap::montreal();
    let r = full_pipeline(&Circuit::new(5, 0), &map, &RouterConfig::nassc(1)).unwrap();
    assert!(r.circuit.is_empty());
    assert_eq!(r.stats.swaps_inserted, 0);
    assert_eq!(r.stats.cnot_total, 0);
    assert_eq!(r.stats.cnot_add, 0);
    assert_eq!(r.stats.depth_total, 0);
}

#[test]
fn too_wide_circuit() {
    let map = CouplingMap::linear(3).unwrap();
    assert!(full_pipeline(&Circuit::new(4, 0), &map, &RouterConfig::sabre(0)).is_err());
}

#[test]
fn initial_mapping_cases() {
    let map = CouplingMap::linear(4).unwrap();
    let first = initial_mapping(&lookahead_circuit(), &map, &RouterConfig::nassc(42)).unwrap();
    for _ in 0..10 {
        assert_eq!(initial_mapping(&lookahead_circuit(), &map, &RouterConfig::nassc(42)).unwrap(), first);
    }
    // no two-qubit gates: the random placement comes back untouched
    let idle = Circuit::from_gates(4, vec![Gate::h(0)]).unwrap();
    let one = RouterConfig { traversals: 1, ..RouterConfig::nassc(5) };
    assert_eq!(
        initial_mapping(&idle, &map, &RouterConfig::nassc(5)).unwrap(),
        initial_mapping(&idle, &map, &one).unwrap()
    );
    // a single gate routes with no SWAP from the refined placement
    let single = Circuit::from_gates(4, vec![Gate::cx(0, 3)]).unwrap();
    for seed in 0..5 {
        let r = full_pipeline(&single, &map, &RouterConfig::sabre(seed)).unwrap();
        assert_eq!(r.stats.swaps_inserted, 0, "seed {seed}");
    }
}

#[test]
fn random_circuits_route_correctly() {
    let maps = [
        CouplingMap::linear(6).unwrap(),
        CouplingMap::grid(2, 3).unwrap(),
        CouplingMap::montreal(),
    ];
    for (k, map) in maps.iter().enumerate() {
        for seed in 0..6u64 {
            let c = random_circuit(6, 25, 100 * k as u64 + seed);
            for alg in [Algorithm::Sabre, Algorithm::Nassc] {
                let cfg = RouterConfig { algorithm: alg, seed, ..RouterConfig::default() };
                let r = full_pipeline(&c, map, &cfg).unwrap();
                assert!(compliant(&r.circuit, map));
                assert!(r.circuit.gates().iter().all(|g| !g.is_2q() || g.kind == GateKind::CX));
                assert!(
                    equivalent_up_to_permutation(&c, &r.circuit, &r.layouts()).unwrap(),
                    "map {k} seed {seed} {alg:?}"
                );
            }
        }
    }
}

#[test]
fn nassc_without_flags_matches_sabre() {
    let map = CouplingMap::grid(3, 3).unwrap();
    let dist = all_pairs_distance(&map).unwrap();
    for seed in 0..5 {
        let c = random_circuit(9, 40, seed);
        let init = initial_mapping(&c, &map, &RouterConfig::sabre(seed)).unwrap();
        let off = RouterConfig { opts: OptFlags::NONE, ..RouterConfig::nassc(seed) };
        let a = route(&c, &map, &dist, &init, &RouterConfig::sabre(seed), &mut rng_for(seed)).unwrap();
        let b = route(&c, &map, &dist, &init, &off, &mut rng_for(seed)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn routing_is_deterministic() {
    let map = CouplingMap::montreal();
    let c = random_circuit(8, 40, 77);
    let a = full_pipeline(&c, &map, &RouterConfig::nassc(9)).unwrap();
    let b = full_pipeline(&c, &map, &RouterConfig::nassc(9)).unwrap();
    assert_eq!(a.circuit, b.circuit);
    assert_eq!(a.final_mapping, b.final_mapping);
}
