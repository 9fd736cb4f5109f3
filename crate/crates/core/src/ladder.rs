//! Ladder operators and their circuit implementations.
//!
//! `L1^(n)` acts on `x_0..x_n` as `x_i ^= x_{i-1}` (original values) for
//! `i >= 1`. `L2^(n)` acts on `x_0..x_n, y_0..y_{n-1}` as
//! `x_{i+1} ^= x_i & y_i`, again on original values.
//!
//! Builders lay wires out register by register: `x0..xn`, then `y0..y{n-1}`,
//! then ancillas `c0..`. [`l2_layout`] and [`l1_layout`] describe that layout.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, WireId, WireRole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("ladder parameter {n} below minimum {min}")]
    ParameterTooSmall { n: usize, min: usize },
    #[error("layout needs {expected} control sets for {x} chain wires, got {got}")]
    LayoutShape { x: usize, expected: usize, got: usize },
    #[error("wire {0} appears more than once in the ladder layout")]
    OverlappingWires(usize),
    #[error("carry ladder n={n}: ancilla index {index} outside 0..{count}")]
    AncillaIndex { n: usize, index: i64, count: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Which `L2` implementation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderImpl {
    /// `n` Toffolis in a chain.
    Linear,
    /// Ancilla-free recursion over multi-controlled gates.
    Polylog,
    /// Carry-lookahead style with a bank of clean ancillas.
    CarryLog,
}

impl LadderImpl {
    pub const ALL: [LadderImpl; 3] = [LadderImpl::Linear, LadderImpl::Polylog, LadderImpl::CarryLog];

    pub fn as_str(self) -> &'static str {
        match self {
            LadderImpl::Linear => "linear",
            LadderImpl::Polylog => "polylog",
            LadderImpl::CarryLog => "carrylog",
        }
    }
}

impl std::str::FromStr for LadderImpl {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(LadderImpl::Linear),
            "polylog" => Ok(LadderImpl::Polylog),
            "carrylog" => Ok(LadderImpl::CarryLog),
            other => Err(format!("unknown ladder `{other}` (expected linear, polylog or carrylog)")),
        }
    }
}

// ---------------------------------------------------------------------------
// index helpers

pub fn hamming_weight(k: u64) -> u32 {
    k.count_ones()
}

/// `floor(log2(n))` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n >= 1, "log of zero");
    63 - n.leading_zeros()
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "log of zero");
    if n == 1 {
        0
    } else {
        floor_log2(n - 1) + 1
    }
}

/// `floor(log2(num / den))` for positive `num`, `den`; negative when `num < den`.
pub fn floor_log2_ratio(num: u64, den: u64) -> i64 {
    assert!(num >= 1 && den >= 1);
    let (num, den) = (u128::from(num), u128::from(den));
    let mut i: i64 = 0;
    if num >= den {
        while den << (i + 1) <= num {
            i += 1;
        }
    } else {
        while num << (-i) < den {
            i -= 1;
        }
    }
    i
}

/// Ancilla offset `n - i - 2*floor(n / 2^i) - w(n mod 2^i)` of the carry ladder.
pub fn sigma(n: u64, i: u32) -> i64 {
    let pow = 1u64 << i;
    n as i64 - i as i64 - 2 * (n / pow) as i64 - hamming_weight(n % pow) as i64
}

/// Ancilla count `n - w(n) - floor(log n)` of the carry ladder with parameter `n`.
pub fn carry_ancillas(n: u64) -> u64 {
    n - u64::from(hamming_weight(n)) - u64::from(floor_log2(n))
}

/// Toffoli count `4n - 3w(n) - 3 floor(log n) - 1` of the carry ladder.
pub fn carry_toffolis(n: u64) -> u64 {
    4 * n - 3 * u64::from(hamming_weight(n)) - 3 * u64::from(floor_log2(n)) - 1
}

/// Depth `floor(log n) + floor(log(n/3)) + 3` of the carry ladder.
pub fn carry_depth_bound(n: u64) -> i64 {
    i64::from(floor_log2(n)) + floor_log2_ratio(n, 3) + 3
}

// ---------------------------------------------------------------------------
// semantic oracles

pub fn l1_spec(x: &[bool]) -> Vec<bool> {
    let mut out = x.to_vec();
    for i in 1..x.len() {
        out[i] = x[i] ^ x[i - 1];
    }
    out
}

/// Returns the new `x` register; `y` is unchanged by the operator.
pub fn l2_spec(x: &[bool], y: &[bool]) -> Vec<bool> {
    assert_eq!(x.len(), y.len() + 1, "L2 needs |x| = |y| + 1");
    let mut out = x.to_vec();
    for i in 0..y.len() {
        out[i + 1] = x[i + 1] ^ (x[i] & y[i]);
    }
    out
}

// ---------------------------------------------------------------------------
// layouts

/// Wires of one ladder: chain `x_0..x_m`, one control set per step, ancillas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderLayout {
    pub x_wires: Vec<WireId>,
    pub y_controls: Vec<Vec<WireId>>,
    pub ancilla_wires: Vec<WireId>,
}

impl LadderLayout {
    /// Number of ladder steps `m` (the chain has `m + 1` wires).
    pub fn steps(&self) -> usize {
        self.y_controls.len()
    }

    pub fn validate(&self) -> Result<(), LadderError> {
        if self.x_wires.len() != self.y_controls.len() + 1 {
            return Err(LadderError::LayoutShape {
                x: self.x_wires.len(),
                expected: self.x_wires.len().saturating_sub(1),
                got: self.y_controls.len(),
            });
        }
        let mut seen = HashSet::new();
        let all = self
            .x_wires
            .iter()
            .chain(self.y_controls.iter().flatten())
            .chain(&self.ancilla_wires);
        for w in all {
            if !seen.insert(*w) {
                return Err(LadderError::OverlappingWires(w.0));
            }
        }
        Ok(())
    }

    /// Single y-wire per step (an `L2` ladder), when that is the shape.
    pub fn y_wires(&self) -> Option<Vec<WireId>> {
        self.y_controls
            .iter()
            .map(|s| if s.len() == 1 { Some(s[0]) } else { None })
            .collect()
    }

    fn max_wire(&self) -> Option<usize> {
        self.x_wires
            .iter()
            .chain(self.y_controls.iter().flatten())
            .chain(&self.ancilla_wires)
            .map(|w| w.0)
            .max()
    }
}

/// Layout used by every `L2^(n)` builder: `x0..xn, y0..y{n-1}, c0..c{ancillas-1}`.
pub fn l2_layout(n: usize, ancillas: usize) -> LadderLayout {
    LadderLayout {
        x_wires: (0..=n).map(WireId).collect(),
        y_controls: (0..n).map(|i| vec![WireId(n + 1 + i)]).collect(),
        ancilla_wires: (0..ancillas).map(|i| WireId(2 * n + 1 + i)).collect(),
    }
}

/// Layout used by the `L1^(n)` builders: `x0..xn`.
pub fn l1_layout(n: usize) -> LadderLayout {
    LadderLayout {
        x_wires: (0..=n).map(WireId).collect(),
        y_controls: vec![Vec::new(); n],
        ancilla_wires: Vec::new(),
    }
}

fn l2_shell(n: usize, ancillas: usize) -> Circuit {
    let specs = (0..=n)
        .map(|i| (format!("x{i}"), WireRole::Data))
        .chain((0..n).map(|i| (format!("y{i}"), WireRole::Data)))
        .chain((0..ancillas).map(|i| (format!("c{i}"), WireRole::Ancilla)));
    Circuit::new(specs).expect("generated labels are unique")
}

fn l1_shell(n: usize) -> Circuit {
    Circuit::new((0..=n).map(|i| (format!("x{i}"), WireRole::Data))).expect("generated labels are unique")
}

// ---------------------------------------------------------------------------
// builders

/// `L2^(n)` as a descending chain of `n` Toffolis, `x_{n-1}, y_{n-1} -> x_n` first.
pub fn build_l2_linear(n: usize) -> Circuit {
    let mut c = l2_shell(n, 0);
    let layout = l2_layout(n, 0);
    for i in (0..n).rev() {
        c.ccx(layout.x_wires[i], layout.y_controls[i][0], layout.x_wires[i + 1])
            .expect("layout wires are distinct");
    }
    c
}

/// `L1^(n)` as a descending chain of `n` CNOTs.
pub fn build_l1_linear(n: usize) -> Circuit {
    let mut c = l1_shell(n);
    for i in (1..=n).rev() {
        c.cx(WireId(i - 1), WireId(i)).expect("distinct wires");
    }
    c
}

/// Emits the ancilla-free ladder recursion for `layout` into `c`.
///
/// Per level: the odd steps `x_k & Y_k -> x_{k+1}`, then the recursion on the
/// odd-indexed chain `x_1, x_3, ..` with merged control sets
/// `Y_{2j+1} | Y_{2j+2}`, then the even steps. Gates within one level touch
/// disjoint wires.
pub fn emit_generalized_ladder(c: &mut Circuit, layout: &LadderLayout) -> Result<(), LadderError> {
    layout.validate()?;
    emit_recursive(c, &layout.x_wires, &layout.y_controls)
}

fn emit_recursive(c: &mut Circuit, xs: &[WireId], ys: &[Vec<WireId>]) -> Result<(), LadderError> {
    let m = ys.len();
    if m == 0 {
        return Ok(());
    }
    let step = |c: &mut Circuit, k: usize| -> Result<(), LadderError> {
        let controls = std::iter::once(xs[k]).chain(ys[k].iter().copied());
        c.append(controls, xs[k + 1])?;
        Ok(())
    };
    for k in (1..m).step_by(2) {
        step(c, k)?;
    }
    let sub_x: Vec<WireId> = (1..=m).step_by(2).map(|k| xs[k]).collect();
    let sub_y: Vec<Vec<WireId>> = (0..sub_x.len().saturating_sub(1))
        .map(|j| ys[2 * j + 1].iter().chain(&ys[2 * j + 2]).copied().collect())
        .collect();
    emit_recursive(c, &sub_x, &sub_y)?;
    for k in (0..m).step_by(2) {
        step(c, k)?;
    }
    Ok(())
}

/// Stand-alone circuit for an arbitrary layout. Wires are labelled `x*`, `y*`,
/// `c*` by their layout role and `w*` when unused.
pub fn build_generalized_ladder(layout: &LadderLayout) -> Result<Circuit, LadderError> {
    if layout.steps() == 0 {
        return Err(LadderError::ParameterTooSmall { n: 0, min: 1 });
    }
    layout.validate()?;
    let width = layout.max_wire().map_or(0, |m| m + 1);
    let mut labels: Vec<(String, WireRole)> = (0..width).map(|i| (format!("w{i}"), WireRole::Data)).collect();
    for (k, w) in layout.x_wires.iter().enumerate() {
        labels[w.0].0 = format!("x{k}");
    }
    for (k, w) in layout.y_controls.iter().flatten().enumerate() {
        labels[w.0].0 = format!("y{k}");
    }
    for (k, w) in layout.ancilla_wires.iter().enumerate() {
        labels[w.0] = (format!("c{k}"), WireRole::Ancilla);
    }
    let mut c = Circuit::new(labels)?;
    emit_generalized_ladder(&mut c, layout)?;
    Ok(c)
}

/// Ancilla-free `L2^(n)` with `O(log^2 n)` multi-controlled layers.
pub fn build_l2_polylog(n: usize) -> Circuit {
    let mut c = l2_shell(n, 0);
    emit_generalized_ladder(&mut c, &l2_layout(n, 0)).expect("standard layout is valid");
    c
}

/// `L1^(n)` in logarithmic CNOT depth.
pub fn build_l1_log(n: usize) -> Circuit {
    let mut c = l1_shell(n);
    emit_generalized_ladder(&mut c, &l1_layout(n)).expect("standard layout is valid");
    c
}

/// Carry-lookahead realisation of `L2^(n-1)`: `A = x0..x{n-1}`,
/// `B = y0..y{n-2}` and `n - w(n) - floor(log n)` clean ancillas.
///
/// Slice 1 computes block propagates into the ancillas, slice 2 the generate
/// tree, slice 3 the carry tree followed by the last ladder rung, slice 4
/// undoes slice 1.
pub fn build_l2_carry_log(n: usize) -> Result<Circuit, LadderError> {
    if n < 2 {
        return Err(LadderError::ParameterTooSmall { n, min: 2 });
    }
    let nn = n as u64;
    let k = carry_ancillas(nn) as usize;
    let mut c = l2_shell(n - 1, k);
    let a = |i: u64| WireId(i as usize);
    let b = |i: u64| WireId(n + i as usize);
    let ci = |idx: i64| -> Result<WireId, LadderError> {
        if idx < 0 || idx as usize >= k {
            return Err(LadderError::AncillaIndex { n, index: idx, count: k });
        }
        Ok(WireId(2 * n - 1 + idx as usize))
    };
    let log_n = u64::from(floor_log2(nn));
    let sig = |i: u64| sigma(nn, i as u32);

    c.begin_slice(1);
    for j in 1..nn / 2 {
        c.ccx(b(2 * j - 1), b(2 * j), ci(j as i64 - 1)?)?;
    }
    for i in 2..log_n {
        for j in 1..nn >> i {
            let j = j as i64;
            c.ccx(ci(2 * j + sig(i - 1))?, ci(2 * j + 1 + sig(i - 1))?, ci(j + sig(i))?)?;
        }
    }
    let slice1: Vec<_> = c.gates().to_vec();

    c.begin_slice(2);
    for j in 1..=(nn - 1) / 2 {
        c.ccx(a(2 * j - 1), b(2 * j - 1), a(2 * j))?;
    }
    let g_levels = floor_log2_ratio(2 * nn, 3);
    for i in 2..=g_levels.max(1) as u64 {
        let half = 1u64 << (i - 1);
        for j in 1..=(nn - half) >> i {
            c.ccx(a((j << i) - 1), ci(2 * j as i64 + sig(i - 1))?, a((j << i) + half - 1))?;
        }
    }

    c.begin_slice(3);
    for i in (2..=log_n).rev() {
        let half = 1u64 << (i - 1);
        for j in 1..=nn >> i {
            c.ccx(a((j << i) - half - 1), ci(2 * j as i64 - 1 + sig(i - 1))?, a((j << i) - 1))?;
        }
    }
    for j in 1..=nn / 2 {
        c.ccx(a(2 * j - 2), b(2 * j - 2), a(2 * j - 1))?;
    }

    c.begin_slice(4);
    for g in slice1.into_iter().rev() {
        c.push(g)?;
    }
    c.end_slice();
    Ok(c)
}

/// `L2^(m)` in the standard layout for the chosen implementation; `m = 0`
/// gives the one-wire empty circuit.
pub fn build_l2(imp: LadderImpl, m: usize) -> Circuit {
    match imp {
        LadderImpl::Linear => build_l2_linear(m),
        LadderImpl::Polylog => build_l2_polylog(m),
        LadderImpl::CarryLog if m == 0 => l2_shell(0, 0),
        LadderImpl::CarryLog => build_l2_carry_log(m + 1).expect("parameter >= 2"),
    }
}

/// Ancillas used by [`build_l2`] for `L2^(m)`.
pub fn l2_ancillas(imp: LadderImpl, m: usize) -> usize {
    match imp {
        LadderImpl::CarryLog if m >= 1 => carry_ancillas(m as u64 + 1) as usize,
        _ => 0,
    }
}
