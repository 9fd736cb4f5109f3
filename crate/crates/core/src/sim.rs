//! Classical simulation of reversible circuits.
//!
//! The gate set is classical-reversible, so basis-state simulation is exact.
//! [`BatchAssignment`] packs 64 independent inputs into one `u64` per wire and
//! runs them together; lane `i` of a batch run always equals the scalar run of
//! lane `i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, WireId, WireRole};

pub const LANES: usize = 64;

/// Largest free-wire count accepted by exhaustive checking.
pub const EXHAUSTIVE_WIRE_CAP: usize = 24;

/// Largest circuit width accepted by [`truth_table`].
pub const TRUTH_TABLE_WIRE_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("assignment has {got} bits, circuit has {expected} wires")]
    WidthMismatch { expected: usize, got: usize },
    #[error("exhaustive check over {0} free wires exceeds the cap of {EXHAUSTIVE_WIRE_CAP}; use random mode")]
    ExhaustiveCap(usize),
    #[error("truth table over {0} wires exceeds the cap of {TRUTH_TABLE_WIRE_CAP}")]
    TruthTableCap(usize),
    #[error("free wire {0} out of range")]
    FreeWireOutOfRange(usize),
}

/// One bit per wire.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn zeros(width: usize) -> Self {
        Assignment { bits: vec![false; width] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, w: WireId) -> bool {
        self.bits[w.0]
    }

    pub fn set(&mut self, w: WireId, v: bool) {
        self.bits[w.0] = v;
    }

    /// Reads `wires` as a little-endian integer (at most 128 wires).
    pub fn read_uint(&self, wires: &[WireId]) -> u128 {
        wires
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, w)| acc | (u128::from(self.get(*w)) << i))
    }

    pub fn write_uint(&mut self, wires: &[WireId], value: u128) {
        for (i, w) in wires.iter().enumerate() {
            self.set(*w, (value >> i) & 1 == 1);
        }
    }

    /// Bit string, wire 0 first.
    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }

    pub fn apply(&mut self, gate: &Gate) {
        if gate.controls().iter().all(|c| self.bits[c.0]) {
            let t = gate.target().0;
            self.bits[t] = !self.bits[t];
        }
    }
}

/// Up to 64 assignments, bit-sliced: `words[w]` bit `i` is wire `w` of lane `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchAssignment {
    words: Vec<u64>,
}

impl BatchAssignment {
    pub fn zeros(width: usize) -> Self {
        BatchAssignment { words: vec![0; width] }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        BatchAssignment { words }
    }

    /// Packs at most [`LANES`] assignments of equal width.
    pub fn from_lanes(lanes: &[Assignment]) -> Self {
        assert!(lanes.len() <= LANES, "at most {LANES} lanes");
        let width = lanes.first().map_or(0, Assignment::len);
        let mut words = vec![0u64; width];
        for (lane, a) in lanes.iter().enumerate() {
            assert_eq!(a.len(), width, "lanes must share a width");
            for (w, bit) in a.bits.iter().enumerate() {
                words[w] |= u64::from(*bit) << lane;
            }
        }
        BatchAssignment { words }
    }

    pub fn width(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn word(&self, w: WireId) -> u64 {
        self.words[w.0]
    }

    pub fn set_word(&mut self, w: WireId, word: u64) {
        self.words[w.0] = word;
    }

    pub fn lane(&self, lane: usize) -> Assignment {
        Assignment { bits: self.words.iter().map(|w| (w >> lane) & 1 == 1).collect() }
    }

    pub fn apply(&mut self, gate: &Gate) {
        let mask = gate.controls().iter().fold(!0u64, |m, c| m & self.words[c.0]);
        self.words[gate.target().0] ^= mask;
    }
}

fn check_width(c: &Circuit, got: usize) -> Result<(), SimError> {
    if c.width() != got {
        return Err(SimError::WidthMismatch { expected: c.width(), got });
    }
    Ok(())
}

pub fn apply_gate(s: &Assignment, g: &Gate) -> Assignment {
    let mut out = s.clone();
    out.apply(g);
    out
}

pub fn run(c: &Circuit, s: &Assignment) -> Result<Assignment, SimError> {
    check_width(c, s.len())?;
    let mut out = s.clone();
    for g in c.gates() {
        out.apply(g);
    }
    Ok(out)
}

pub fn run_batch(c: &Circuit, b: &BatchAssignment) -> Result<BatchAssignment, SimError> {
    check_width(c, b.width())?;
    let mut out = b.clone();
    for g in c.gates() {
        out.apply(g);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum CheckMode {
    Exhaustive,
    Random { samples: usize, seed: u64 },
}

/// Outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub equivalent: bool,
    /// The distinguishing input, lowest enumeration index first.
    pub counterexample: Option<Assignment>,
    pub cases_checked: u64,
    pub seed: Option<u64>,
}

/// Wires of `c` that are not ancillas, i.e. the input space of an exhaustive check.
pub fn non_ancilla_wires(c: &Circuit) -> Vec<WireId> {
    (0..c.width())
        .map(WireId)
        .filter(|w| c.wires()[w.0].role != WireRole::Ancilla)
        .collect()
}

const CHUNK_BATCHES: u64 = 64;

/// Compares `run(c, ·)` with `oracle` over inputs whose `free_wires` vary and
/// whose remaining wires are 0.
///
/// Exhaustive mode enumerates all `2^|free_wires|` inputs, input index bit `j`
/// driving `free_wires[j]`. Random mode draws `samples` inputs from a ChaCha8
/// stream seeded with `seed`. Work is split across threads; the reported
/// counterexample is always the one with the lowest index.
pub fn check_equivalence<F>(
    c: &Circuit,
    oracle: F,
    mode: CheckMode,
    free_wires: &[WireId],
) -> Result<Verdict, SimError>
where
    F: Fn(&Assignment) -> Assignment + Sync,
{
    for w in free_wires {
        if w.0 >= c.width() {
            return Err(SimError::FreeWireOutOfRange(w.0));
        }
    }
    match mode {
        CheckMode::Exhaustive => {
            let k = free_wires.len();
            if k > EXHAUSTIVE_WIRE_CAP {
                return Err(SimError::ExhaustiveCap(k));
            }
            let total = 1u64 << k;
            let inputs = |start: u64, end: u64| -> Vec<Assignment> {
                (start..end)
                    .map(|idx| {
                        let mut a = Assignment::zeros(c.width());
                        for (j, w) in free_wires.iter().enumerate() {
                            a.set(*w, (idx >> j) & 1 == 1);
                        }
                        a
                    })
                    .collect()
            };
            let found = search(c, &oracle, total, inputs);
            Ok(verdict(found, total, None))
        }
        CheckMode::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let all: Vec<Assignment> = (0..samples)
                .map(|_| {
                    let mut a = Assignment::zeros(c.width());
                    for w in free_wires {
                        a.set(*w, rng.gen());
                    }
                    a
                })
                .collect();
            let found = search(c, &oracle, samples as u64, |s, e| all[s as usize..e as usize].to_vec());
            Ok(verdict(found, samples as u64, Some(seed)))
        }
    }
}

fn verdict(found: Option<(u64, Assignment)>, total: u64, seed: Option<u64>) -> Verdict {
    match found {
        None => Verdict { equivalent: true, counterexample: None, cases_checked: total, seed },
        Some((idx, a)) => Verdict {
            equivalent: false,
            counterexample: Some(a),
            cases_checked: idx + 1,
            seed,
        },
    }
}

fn search<F, G>(c: &Circuit, oracle: &F, total: u64, inputs: G) -> Option<(u64, Assignment)>
where
    F: Fn(&Assignment) -> Assignment + Sync,
    G: Fn(u64, u64) -> Vec<Assignment> + Sync,
{
    let chunk = LANES as u64 * CHUNK_BATCHES;
    let chunks = total.div_ceil(chunk);
    (0..chunks).into_par_iter().find_map_first(|ci| {
        let start = ci * chunk;
        let end = (start + chunk).min(total);
        let mut base = start;
        while base < end {
            let stop = (base + LANES as u64).min(end);
            let lanes = inputs(base, stop);
            let out = run_batch(c, &BatchAssignment::from_lanes(&lanes)).expect("width checked");
            for (i, input) in lanes.into_iter().enumerate() {
                if out.lane(i) != oracle(&input) {
                    return Some((base + i as u64, input));
                }
            }
            base = stop;
        }
        None
    })
}

/// Exhaustive check of two circuits against each other over `free_wires`.
pub fn check_circuits(
    c1: &Circuit,
    c2: &Circuit,
    mode: CheckMode,
    free_wires: &[WireId],
) -> Result<Verdict, SimError> {
    check_width(c2, c1.width())?;
    check_equivalence(c1, |a| run(c2, a).expect("width checked"), mode, free_wires)
}

/// Full input -> output map; input bit `i` is wire `i`. Always a permutation.
pub fn truth_table(c: &Circuit) -> Result<Vec<u32>, SimError> {
    let k = c.width();
    if k > TRUTH_TABLE_WIRE_CAP {
        return Err(SimError::TruthTableCap(k));
    }
    let total = 1usize << k;
    let mut table = vec![0u32; total];
    table.par_chunks_mut(LANES).enumerate().for_each(|(ci, slot)| {
        let base = ci * LANES;
        let mut words = vec![0u64; k];
        for (lane, _) in slot.iter().enumerate() {
            let idx = base + lane;
            for (w, word) in words.iter_mut().enumerate() {
                *word |= (((idx >> w) & 1) as u64) << lane;
            }
        }
        let mut b = BatchAssignment::from_words(words);
        for g in c.gates() {
            b.apply(g);
        }
        for (lane, out) in slot.iter_mut().enumerate() {
            *out = b
                .words()
                .iter()
                .enumerate()
                .fold(0u32, |acc, (w, word)| acc | ((((word >> lane) & 1) as u32) << w));
        }
    });
    Ok(table)
}

/// First input index at which two truth tables disagree.
pub fn first_difference(t1: &[u32], t2: &[u32]) -> Option<usize> {
    t1.iter().zip(t2).position(|(a, b)| a != b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shell(k: usize) -> Circuit {
        Circuit::new((0..k).map(|i| (format!("w{i}"), WireRole::Data))).unwrap()
    }

    fn bits(s: &str) -> Assignment {
        Assignment::from_bits(s.chars().map(|c| c == '1').collect())
    }

    #[test]
    fn gate_truth_tables() {
        let t = Gate::new([WireId(0), WireId(1)], WireId(2)).unwrap();
        assert_eq!(apply_gate(&bits("110"), &t), bits("111"));
        let m = Gate::new([WireId(0), WireId(1), WireId(2), WireId(3)], WireId(4)).unwrap();
        assert_eq!(apply_gate(&bits("11101"), &m), bits("11101"));
        assert_eq!(apply_gate(&bits("0"), &Gate::x(WireId(0))), bits("1"));
    }

    #[test]
    fn run_empty_is_identity_and_checks_width() {
        let c = shell(3);
        assert_eq!(run(&c, &bits("101")).unwrap(), bits("101"));
        assert_eq!(run(&c, &bits("10")), Err(SimError::WidthMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn single_lane_batch_matches_scalar() {
        let mut c = shell(3);
        c.ccx(WireId(0), WireId(1), WireId(2)).unwrap();
        c.x(WireId(0)).unwrap();
        let input = bits("110");
        let out = run_batch(&c, &BatchAssignment::from_lanes(std::slice::from_ref(&input))).unwrap();
        assert_eq!(out.lane(0), run(&c, &input).unwrap());
    }

    #[test]
    fn uint_round_trip() {
        let mut a = Assignment::zeros(6);
        let wires = [WireId(5), WireId(1), WireId(3)];
        a.write_uint(&wires, 0b110);
        assert_eq!(a.read_uint(&wires), 0b110);
        assert!(a.get(WireId(1)) && a.get(WireId(3)) && !a.get(WireId(5)));
    }

    #[test]
    fn identity_vs_identity() {
        let c = shell(5);
        let free: Vec<_> = (0..5).map(WireId).collect();
        let v = check_equivalence(&c, |a| a.clone(), CheckMode::Exhaustive, &free).unwrap();
        assert!(v.equivalent);
        assert_eq!(v.cases_checked, 32);
    }

    #[test]
    fn counterexample_is_lowest_index() {
        let mut c = shell(4);
        c.ccx(WireId(2), WireId(3), WireId(0)).unwrap();
        let free: Vec<_> = (0..4).map(WireId).collect();
        let v = check_equivalence(&c, |a| a.clone(), CheckMode::Exhaustive, &free).unwrap();
        assert!(!v.equivalent);
        // index 12 = wires 2 and 3 high
        assert_eq!(v.counterexample, Some(bits("0011")));
        assert_eq!(v.cases_checked, 13);
    }

    #[test]
    fn exhaustive_cap() {
        let c = shell(25);
        let free: Vec<_> = (0..25).map(WireId).collect();
        assert_eq!(
            check_equivalence(&c, |a| a.clone(), CheckMode::Exhaustive, &free),
            Err(SimError::ExhaustiveCap(25))
        );
    }

    #[test]
    fn random_mode_is_reproducible() {
        let mut c = shell(40);
        c.append((0..20).map(WireId), WireId(39)).unwrap();
        let free: Vec<_> = (0..39).map(WireId).collect();
        let mode = CheckMode::Random { samples: 500, seed: 7 };
        let a = check_equivalence(&c, |a| a.clone(), mode, &free).unwrap();
        let b = check_equivalence(&c, |a| a.clone(), mode, &free).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn truth_table_of_not() {
        let mut c = shell(1);
        c.x(WireId(0)).unwrap();
        assert_eq!(truth_table(&c).unwrap(), vec![1, 0]);
        assert_eq!(truth_table(&shell(23)), Err(SimError::TruthTableCap(23)));
    }

    #[test]
    fn truth_table_is_permutation() {
        let mut c = shell(7);
        c.ccx(WireId(0), WireId(4), WireId(6)).unwrap();
        c.append([WireId(1), WireId(2), WireId(3)], WireId(5)).unwrap();
        c.cx(WireId(6), WireId(2)).unwrap();
        let mut t = truth_table(&c).unwrap();
        t.sort_unstable();
        assert!(t.iter().enumerate().all(|(i, v)| *v as usize == i));
    }
}
