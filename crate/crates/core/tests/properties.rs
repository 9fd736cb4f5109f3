//! Invariants of the circuit IR, simulator, serializer and depth analysis.

mod common;

use proptest::prelude::*;

use common::{random_assignment, random_circuit, rng};
use revq::analysis::{build_dag, build_dag_full, depth_by_class, metrics};
use revq::circuit::{Circuit, Gate, GateKind, WireId, WireRole};
use revq::io::{parse, serialize};
use revq::ladder::{build_l1_log, build_l2_polylog, l1_spec, l2_spec};
use revq::sim::{apply_gate, run, run_batch, Assignment, BatchAssignment};

const ALL_KINDS: [GateKind; 4] = [GateKind::X, GateKind::Cnot, GateKind::Toffoli, GateKind::Mcx];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_gate_is_an_involution(seed in any::<u64>(), width in 1usize..12) {
        let c = random_circuit(seed, width, 8);
        let mut r = rng(seed ^ 1);
        for g in c.gates() {
            let s = random_assignment(&mut r, width);
            prop_assert_eq!(apply_gate(&apply_gate(&s, g), g), s);
        }
    }

    #[test]
    fn dagger_undoes_the_circuit(seed in any::<u64>(), width in 1usize..16, gates in 0usize..60) {
        let c = random_circuit(seed, width, gates);
        let d = c.dagger();
        let dd = d.dagger();
        prop_assert_eq!(dd.gates(), c.gates());
        let mut r = rng(seed ^ 2);
        for _ in 0..16 {
            let s = random_assignment(&mut r, width);
            prop_assert_eq!(run(&d, &run(&c, &s).unwrap()).unwrap(), s);
        }
    }

    #[test]
    fn batch_matches_scalar(seed in any::<u64>(), width in 1usize..20, gates in 0usize..40) {
        let c = random_circuit(seed, width, gates);
        let mut r = rng(seed ^ 3);
        let lanes: Vec<Assignment> = (0..64).map(|_| random_assignment(&mut r, width)).collect();
        let out = run_batch(&c, &BatchAssignment::from_lanes(&lanes)).unwrap();
        for (i, s) in lanes.iter().enumerate() {
            prop_assert_eq!(out.lane(i), run(&c, s).unwrap());
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), width in 1usize..16, gates in 0usize..40) {
        let c = random_circuit(seed, width, gates);
        let back = parse(&serialize(&c)).unwrap();
        prop_assert_eq!(back.wires(), c.wires());
        prop_assert_eq!(back.gates(), c.gates());
    }

    #[test]
    fn embedding_acts_on_mapped_wires_only(seed in any::<u64>(), sub_width in 1usize..6, extra in 0usize..6) {
        let sub = random_circuit(seed, sub_width, 12);
        let width = sub_width + extra;
        let mut r = rng(seed ^ 4);
        let map: Vec<WireId> = rand::seq::index::sample(&mut r, width, sub_width)
            .into_iter()
            .map(WireId)
            .collect();
        let mut host = Circuit::new((0..width).map(|i| (format!("h{i}"), WireRole::Data))).unwrap();
        host.embed(&sub, &map).unwrap();
        for _ in 0..16 {
            let s = random_assignment(&mut r, width);
            let out = run(&host, &s).unwrap();
            let inner = Assignment::from_bits(map.iter().map(|w| s.get(*w)).collect());
            let inner_out = run(&sub, &inner).unwrap();
            for w in 0..width {
                let expected = match map.iter().position(|m| m.0 == w) {
                    Some(j) => inner_out.get(WireId(j)),
                    None => s.get(WireId(w)),
                };
                prop_assert_eq!(out.get(WireId(w)), expected);
            }
        }
    }

    #[test]
    fn depth_never_drops_when_appending(seed in any::<u64>(), width in 2usize..10, gates in 1usize..40) {
        let c = random_circuit(seed, width, gates);
        let mut prefix = Circuit::new((0..width).map(|i| (format!("w{i}"), WireRole::Data))).unwrap();
        let mut last = metrics(&prefix);
        for g in c.gates() {
            prefix.push(g.clone()).unwrap();
            let m = metrics(&prefix);
            prop_assert!(m.total_depth >= last.total_depth);
            prop_assert!(m.toffoli_depth >= last.toffoli_depth);
            prop_assert!(m.cnot_depth >= last.cnot_depth);
            prop_assert!(m.mcx_layers >= last.mcx_layers);
            prop_assert!(m.total_depth <= prefix.len());
            last = m;
        }
    }

    #[test]
    fn reduced_dag_gives_full_dag_depths(seed in any::<u64>(), width in 2usize..10, gates in 0usize..50) {
        let c = random_circuit(seed, width, gates);
        let (reduced, full) = (build_dag(&c), build_dag_full(&c));
        for kind in ALL_KINDS {
            prop_assert_eq!(depth_by_class(&reduced, &[kind]), depth_by_class(&full, &[kind]));
        }
        prop_assert_eq!(depth_by_class(&reduced, &ALL_KINDS), depth_by_class(&full, &ALL_KINDS));
    }

    #[test]
    fn polylog_ladder_matches_oracle(n in 1usize..80, seed in any::<u64>()) {
        let c = build_l2_polylog(n);
        let mut r = rng(seed);
        for _ in 0..8 {
            let s = random_assignment(&mut r, 2 * n + 1);
            let out = run(&c, &s).unwrap();
            let (x, y) = s.bits().split_at(n + 1);
            let expected = l2_spec(x, y);
            prop_assert_eq!(&out.bits()[..=n], expected.as_slice());
            prop_assert_eq!(&out.bits()[n + 1..], y);
        }
    }

    #[test]
    fn log_l1_matches_oracle(n in 1usize..200, seed in any::<u64>()) {
        let c = build_l1_log(n);
        let mut r = rng(seed);
        for _ in 0..8 {
            let s = random_assignment(&mut r, n + 1);
            let out = run(&c, &s).unwrap();
            prop_assert_eq!(out.bits().to_vec(), l1_spec(s.bits()));
        }
    }
}

#[test]
fn gates_reject_self_control() {
    assert!(Gate::new([WireId(1)], WireId(1)).is_err());
    assert!(Gate::new([WireId(0), WireId(0)], WireId(1)).is_err());
}
