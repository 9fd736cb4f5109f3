//! In-place adders `|a>|b>|z> -> |a>|a+b mod 2^n>|z ^ carry>` built from
//! ladder subcircuits.
//!
//! Two structures share the same skeleton and differ in where carries live:
//!
//! * [`Structure::Original`] keeps the carries in `n - 1` ancillas plus the
//!   carry-out wire, and runs `L2^(n-1)†` then `L2^(n-2)` over them.
//! * [`Structure::Optimized`] folds the carries into the `a` register with two
//!   `L1` ladders, and runs `L2^(n)†` then `L2^(n-1)` over `a`.
//!
//! Either structure takes any of the three [`LadderImpl`]s, giving six adders.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, WireId, WireRole};
use crate::ladder::{build_l1_linear, build_l1_log, build_l2, l2_ancillas, LadderImpl};
use crate::sim::{check_circuits, non_ancilla_wires, Assignment, CheckMode, SimError, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdderError {
    #[error("adder width must be at least 1")]
    ZeroWidth,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Original,
    Optimized,
}

impl Structure {
    pub const ALL: [Structure; 2] = [Structure::Original, Structure::Optimized];

    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Original => "original",
            Structure::Optimized => "optimized",
        }
    }
}

impl std::str::FromStr for Structure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(Structure::Original),
            "optimized" => Ok(Structure::Optimized),
            other => Err(format!("unknown structure `{other}` (expected original or optimized)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdderConfig {
    pub n: usize,
    pub structure: Structure,
    pub ladder: LadderImpl,
}

impl AdderConfig {
    pub fn new(n: usize, structure: Structure, ladder: LadderImpl) -> Self {
        AdderConfig { n, structure, ladder }
    }

    /// All six structure/ladder combinations at width `n`.
    pub fn all(n: usize) -> impl Iterator<Item = AdderConfig> {
        Structure::ALL
            .into_iter()
            .flat_map(move |s| LadderImpl::ALL.into_iter().map(move |l| AdderConfig::new(n, s, l)))
    }

    /// Literature cell of the structure/ladder grid this adder occupies.
    pub fn provenance(&self) -> &'static str {
        provenance(self.structure, self.ladder)
    }

    /// `structure/ladder`, e.g. `optimized/carrylog`.
    pub fn descriptor(&self) -> String {
        format!("{}/{}", self.structure.as_str(), self.ladder.as_str())
    }
}

impl fmt::Display for AdderConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.descriptor(), self.n)
    }
}

pub fn provenance(structure: Structure, ladder: LadderImpl) -> &'static str {
    match (structure, ladder) {
        (Structure::Original, LadderImpl::Linear) => "≈[VBE96]",
        (Structure::Original, LadderImpl::Polylog) => "Remark 1",
        (Structure::Original, LadderImpl::CarryLog) => "[DKR06]",
        (Structure::Optimized, LadderImpl::Linear) => "≈[TTK10]",
        (Structure::Optimized, LadderImpl::Polylog) => "[RV25]",
        (Structure::Optimized, LadderImpl::CarryLog) => "Theorem 1",
    }
}

/// Register placement inside an adder circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderLayout {
    pub a: Vec<WireId>,
    pub b: Vec<WireId>,
    pub z: WireId,
    /// Carry ancillas of the original structure (`n - 1` wires; the carry
    /// register is these followed by `z`). Empty for the optimized structure.
    pub carries: Vec<WireId>,
    /// Ancillas shared by the embedded carry-lookahead ladders.
    pub ladder_ancillas: Vec<WireId>,
}

impl AdderLayout {
    pub fn ancillas(&self) -> impl Iterator<Item = WireId> + '_ {
        self.carries.iter().chain(&self.ladder_ancillas).copied()
    }
}

#[derive(Debug, Clone)]
pub struct Adder {
    pub config: AdderConfig,
    pub circuit: Circuit,
    pub layout: AdderLayout,
}

impl Adder {
    /// Wires driven by inputs: `a`, `b` and `z`.
    pub fn data_wires(&self) -> Vec<WireId> {
        non_ancilla_wires(&self.circuit)
    }

    /// Expected output for `input` according to [`add_spec`].
    pub fn expected(&self, input: &Assignment) -> Assignment {
        adder_oracle(&self.layout, input)
    }

    pub fn verify(&self, mode: CheckMode) -> Result<Verdict, SimError> {
        crate::sim::check_equivalence(&self.circuit, |a| self.expected(a), mode, &self.data_wires())
    }
}

/// Result of the addition contract on integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddOutput {
    pub a: u128,
    pub sum: u128,
    pub z: bool,
}

/// `(a, b, z) -> (a, (a+b) mod 2^n, z ^ bit_n(a+b))` for `1 <= n <= 128`.
pub fn add_spec(n: u32, a: u128, b: u128, z: bool) -> AddOutput {
    assert!((1..=128).contains(&n), "width {n} outside 1..=128");
    let mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    assert!(a <= mask && b <= mask, "operands exceed {n} bits");
    let (raw, overflow) = a.overflowing_add(b);
    let carry = if n == 128 { overflow } else { (raw >> n) & 1 == 1 };
    AddOutput { a, sum: raw & mask, z: z ^ carry }
}

/// Multi-limb form of [`add_spec`] over assignments of any width.
fn adder_oracle(layout: &AdderLayout, input: &Assignment) -> Assignment {
    let n = layout.a.len();
    let limbs = |wires: &[WireId]| -> Vec<u64> {
        wires
            .chunks(64)
            .map(|chunk| chunk.iter().enumerate().fold(0u64, |acc, (i, w)| acc | (u64::from(input.get(*w)) << i)))
            .collect()
    };
    let (a, b) = (limbs(&layout.a), limbs(&layout.b));
    let mut sum = Vec::with_capacity(a.len());
    let mut carry = false;
    for (x, y) in a.iter().zip(&b) {
        let (s1, c1) = x.overflowing_add(*y);
        let (s2, c2) = s1.overflowing_add(u64::from(carry));
        sum.push(s2);
        carry = c1 || c2;
    }
    // carry into bit n: either past the top limb or the bit just above n
    let top_bits = n % 64;
    let carry_out = if top_bits == 0 { carry } else { (sum[sum.len() - 1] >> top_bits) & 1 == 1 };

    let mut out = input.clone();
    for (i, w) in layout.b.iter().enumerate() {
        out.set(*w, (sum[i / 64] >> (i % 64)) & 1 == 1);
    }
    out.set(layout.z, input.get(layout.z) ^ carry_out);
    for w in layout.ancillas() {
        out.set(w, false);
    }
    out
}

fn shell(config: &AdderConfig) -> (Circuit, AdderLayout) {
    let n = config.n;
    let mut specs: Vec<(String, WireRole)> = Vec::new();
    specs.extend((0..n).map(|i| (format!("a{i}"), WireRole::Data)));
    specs.extend((0..n).map(|i| (format!("b{i}"), WireRole::Data)));
    let (carry_count, ladder_count) = if n == 1 {
        (0, 0)
    } else {
        match config.structure {
            Structure::Original => (
                n - 1,
                l2_ancillas(config.ladder, n - 1).max(l2_ancillas(config.ladder, n - 2)),
            ),
            Structure::Optimized => (0, l2_ancillas(config.ladder, n).max(l2_ancillas(config.ladder, n - 1))),
        }
    };
    specs.extend((0..carry_count).map(|i| (format!("c{i}"), WireRole::Ancilla)));
    specs.push(("z".to_string(), WireRole::CarryOut));
    let prefix = if carry_count > 0 { "d" } else { "c" };
    specs.extend((0..ladder_count).map(|i| (format!("{prefix}{i}"), WireRole::Ancilla)));

    let circuit = Circuit::new(specs).expect("generated labels are unique");
    let layout = AdderLayout {
        a: (0..n).map(WireId).collect(),
        b: (n..2 * n).map(WireId).collect(),
        carries: (2 * n..2 * n + carry_count).map(WireId).collect(),
        z: WireId(2 * n + carry_count),
        ladder_ancillas: (0..ladder_count).map(|i| WireId(2 * n + carry_count + 1 + i)).collect(),
    };
    (circuit, layout)
}

/// Embeds a standard-layout ladder (`x.., y.., c..`) onto the given wires.
fn embed_ladder(
    parent: &mut Circuit,
    ladder: &Circuit,
    x: &[WireId],
    y: &[WireId],
    ancillas: &[WireId],
) -> Result<(), CircuitError> {
    let used = ladder.width() - x.len() - y.len();
    let map: Vec<WireId> = x.iter().chain(y).chain(&ancillas[..used]).copied().collect();
    parent.embed(ladder, &map)
}

fn build_degenerate(config: AdderConfig) -> Result<Adder, AdderError> {
    let (mut c, layout) = shell(&config);
    c.ccx(layout.a[0], layout.b[0], layout.z)?;
    c.cx(layout.a[0], layout.b[0])?;
    c.set_provenance(config.provenance());
    Ok(Adder { config, circuit: c, layout })
}

/// Adder with `n - 1` carry ancillas.
pub fn build_adder_original(n: usize, ladder: LadderImpl) -> Result<Adder, AdderError> {
    let config = AdderConfig::new(n, Structure::Original, ladder);
    match n {
        0 => return Err(AdderError::ZeroWidth),
        1 => return build_degenerate(config),
        _ => {}
    }
    let (mut c, layout) = shell(&config);
    let (a, b) = (&layout.a, &layout.b);
    let carry: Vec<WireId> = layout.carries.iter().copied().chain([layout.z]).collect();

    c.begin_slice(1);
    for i in 0..n {
        c.ccx(a[i], b[i], carry[i])?;
        c.cx(a[i], b[i])?;
    }

    c.begin_slice(2);
    let l2 = build_l2(ladder, n - 1).dagger();
    embed_ladder(&mut c, &l2, &carry, &b[1..], &layout.ladder_ancillas)?;

    c.begin_slice(3);
    for i in 0..n - 1 {
        c.cx(carry[i], b[i + 1])?;
        c.cx(a[i], b[i])?;
        c.x(b[i])?;
    }

    c.begin_slice(4);
    let l2 = build_l2(ladder, n - 2);
    embed_ladder(&mut c, &l2, &carry[..n - 1], &b[1..n - 1], &layout.ladder_ancillas)?;

    c.begin_slice(5);
    for i in 0..n - 1 {
        c.cx(a[i], b[i])?;
        c.ccx(a[i], b[i], carry[i])?;
        c.x(b[i])?;
    }
    c.end_slice();
    c.set_provenance(config.provenance());
    Ok(Adder { config, circuit: c, layout })
}

/// Adder without carry ancillas; only the carry-lookahead ladder needs scratch wires.
pub fn build_adder_optimized(n: usize, ladder: LadderImpl) -> Result<Adder, AdderError> {
    let config = AdderConfig::new(n, Structure::Optimized, ladder);
    match n {
        0 => return Err(AdderError::ZeroWidth),
        1 => return build_degenerate(config),
        _ => {}
    }
    let (mut c, layout) = shell(&config);
    let (a, b, z) = (&layout.a, &layout.b, layout.z);
    let l1 = |m: usize| match ladder {
        LadderImpl::Linear => build_l1_linear(m),
        LadderImpl::Polylog | LadderImpl::CarryLog => build_l1_log(m),
    };
    let a_then_z: Vec<WireId> = a.iter().copied().chain([z]).collect();

    c.begin_slice(1);
    for i in 1..n {
        c.cx(a[i], b[i])?;
    }

    c.begin_slice(2);
    embed_ladder(&mut c, &l1(n - 1), &a_then_z[1..], &[], &[])?;

    c.begin_slice(3);
    let l2 = build_l2(ladder, n).dagger();
    embed_ladder(&mut c, &l2, &a_then_z, b, &layout.ladder_ancillas)?;

    c.begin_slice(4);
    for i in 1..n {
        c.cx(a[i], b[i])?;
    }
    for &w in &b[1..n - 1] {
        c.x(w)?;
    }

    c.begin_slice(5);
    let l2 = build_l2(ladder, n - 1);
    embed_ladder(&mut c, &l2, a, &b[..n - 1], &layout.ladder_ancillas)?;

    c.begin_slice(6);
    embed_ladder(&mut c, &l1(n - 2).dagger(), &a[1..], &[], &[])?;

    c.begin_slice(7);
    for i in 0..n {
        c.cx(a[i], b[i])?;
    }
    for &w in &b[1..n - 1] {
        c.x(w)?;
    }
    c.end_slice();
    c.set_provenance(config.provenance());
    Ok(Adder { config, circuit: c, layout })
}

pub fn build_adder(config: AdderConfig) -> Result<Adder, AdderError> {
    match config.structure {
        Structure::Original => build_adder_original(config.n, config.ladder),
        Structure::Optimized => build_adder_optimized(config.n, config.ladder),
    }
}

/// Two circuits claimed to act identically.
#[derive(Debug, Clone)]
pub struct IdentityFixture {
    pub name: &'static str,
    pub left: Circuit,
    pub right: Circuit,
}

impl IdentityFixture {
    /// Exhaustive comparison over every non-ancilla wire; ancillas start at 0.
    pub fn check(&self) -> Verdict {
        check_circuits(&self.left, &self.right, CheckMode::Exhaustive, &non_ancilla_wires(&self.left))
            .expect("fixture pairs share a width")
    }
}

fn fixture_circuit(labels: &[(&str, WireRole)], gates: &[(&[usize], usize)]) -> Circuit {
    let mut c = Circuit::new(labels.iter().map(|(l, r)| (*l, *r))).expect("static labels");
    for (controls, target) in gates {
        c.push(Gate::new(controls.iter().map(|i| WireId(*i)), WireId(*target)).expect("static gate"))
            .expect("static gate in range");
    }
    c
}

/// Gate-for-gate transcriptions of the rewrite identities relating the
/// ladder-based adders to their classic forms.
///
/// * `vbe-carry`: the carry subroutine on `(c_{i-1}, a_i, b_i, c_i)` versus
///   the form used by the original structure.
/// * `ttk-rung`: the ripple rung on `(a_i, b_i, a_{i+1})` versus the form used
///   by the optimized structure.
/// * `propagate-substitution`: computing a propagate bit into a clean ancilla,
///   consuming it, and uncomputing it equals one 3-control gate. The middle
///   wire is an ancilla; with it set to 1 the two sides differ.
pub fn identity_fixtures() -> Vec<IdentityFixture> {
    use WireRole::{Ancilla, Data};
    let vbe_wires = [("c_prev", Data), ("a", Data), ("b", Data), ("c", Data)];
    let ttk_wires = [("a", Data), ("b", Data), ("a_next", Data)];
    let sub_wires = [("w1", Data), ("w2", Data), ("w3", Ancilla), ("w4", Data), ("w5", Data)];
    vec![
        IdentityFixture {
            name: "vbe-carry",
            left: fixture_circuit(
                &vbe_wires,
                &[(&[0, 2], 3), (&[1], 2), (&[1, 2], 3), (&[1], 2), (&[0], 2)],
            ),
            right: fixture_circuit(
                &vbe_wires,
                &[(&[0], 2), (&[1], 2), (&[], 2), (&[0, 2], 3), (&[1], 2), (&[1, 2], 3), (&[], 2)],
            ),
        },
        IdentityFixture {
            name: "ttk-rung",
            left: fixture_circuit(&ttk_wires, &[(&[0, 1], 2), (&[0], 1)]),
            right: fixture_circuit(&ttk_wires, &[(&[0], 1), (&[], 1), (&[0, 1], 2), (&[], 1)]),
        },
        IdentityFixture {
            name: "propagate-substitution",
            left: fixture_circuit(&sub_wires, &[(&[1, 3], 2), (&[0, 2], 4), (&[1, 3], 2)]),
            right: fixture_circuit(&sub_wires, &[(&[0, 1, 3], 4)]),
        },
    ]
}
