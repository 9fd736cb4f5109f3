//! Reversible circuit IR over the gate set {X, CNOT, Toffoli, MCX}.
//!
//! A [`Gate`] is a sorted control set plus a target wire. Its kind is derived
//! from the number of controls. Every gate is an involution, so the inverse of
//! a circuit is its gate list reversed.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Index of a wire inside a [`Circuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireId(pub usize);

impl WireId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for WireId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireRole {
    Data,
    /// Must enter at 0 and leave at 0.
    Ancilla,
    CarryOut,
}

impl WireRole {
    pub fn as_str(self) -> &'static str {
        match self {
            WireRole::Data => "data",
            WireRole::Ancilla => "ancilla",
            WireRole::CarryOut => "carryout",
        }
    }
}

impl std::str::FromStr for WireRole {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "data" => Ok(WireRole::Data),
            "ancilla" => Ok(WireRole::Ancilla),
            "carryout" => Ok(WireRole::CarryOut),
            other => Err(CircuitError::UnknownRole(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wire {
    pub label: String,
    pub role: WireRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("duplicate wire label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid wire label `{0}`: labels must be non-empty and contain no whitespace")]
    InvalidLabel(String),
    #[error("unknown wire role `{0}`")]
    UnknownRole(String),
    #[error("wire {wire} out of range for a circuit with {width} wires")]
    WireOutOfRange { wire: usize, width: usize },
    #[error("target wire {0} is also a control")]
    TargetInControls(usize),
    #[error("control wire {0} listed twice")]
    DuplicateControl(usize),
    #[error("wire map sends two wires onto parent wire {0}")]
    NonInjectiveMap(usize),
    #[error("wire map has {got} entries, subcircuit has {expected} wires")]
    MapLength { expected: usize, got: usize },
    #[error("gate {index}: {source}")]
    InvalidGate {
        index: usize,
        #[source]
        source: Box<CircuitError>,
    },
}

/// Gate class derived from the control count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    X,
    Cnot,
    Toffoli,
    /// Three or more controls.
    Mcx,
}

/// A multi-controlled NOT: `target ^= AND(controls)`.
///
/// Controls are kept sorted, so two gates with the same control set compare
/// equal regardless of the order they were written in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    controls: Vec<WireId>,
    target: WireId,
}

impl Gate {
    pub fn new(controls: impl IntoIterator<Item = WireId>, target: WireId) -> Result<Self, CircuitError> {
        let mut controls: Vec<WireId> = controls.into_iter().collect();
        controls.sort_unstable();
        for pair in controls.windows(2) {
            if pair[0] == pair[1] {
                return Err(CircuitError::DuplicateControl(pair[0].0));
            }
        }
        if controls.binary_search(&target).is_ok() {
            return Err(CircuitError::TargetInControls(target.0));
        }
        Ok(Gate { controls, target })
    }

    pub fn x(target: WireId) -> Self {
        Gate { controls: Vec::new(), target }
    }

    pub fn controls(&self) -> &[WireId] {
        &self.controls
    }

    pub fn target(&self) -> WireId {
        self.target
    }

    pub fn kind(&self) -> GateKind {
        match self.controls.len() {
            0 => GateKind::X,
            1 => GateKind::Cnot,
            2 => GateKind::Toffoli,
            _ => GateKind::Mcx,
        }
    }

    /// All wires touched by the gate, controls first.
    pub fn wires(&self) -> impl Iterator<Item = WireId> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }

    fn check(&self, width: usize) -> Result<(), CircuitError> {
        for w in self.wires() {
            if w.0 >= width {
                return Err(CircuitError::WireOutOfRange { wire: w.0, width });
            }
        }
        for pair in self.controls.windows(2) {
            if pair[0] >= pair[1] {
                return Err(CircuitError::DuplicateControl(pair[1].0));
            }
        }
        if self.controls.contains(&self.target) {
            return Err(CircuitError::TargetInControls(self.target.0));
        }
        Ok(())
    }

    fn remapped(&self, map: &[WireId]) -> Gate {
        let mut controls: Vec<WireId> = self.controls.iter().map(|c| map[c.0]).collect();
        controls.sort_unstable();
        Gate { controls, target: map[self.target.0] }
    }

    /// Unchecked constructor for tests that need to build malformed gates.
    #[doc(hidden)]
    pub fn raw(controls: Vec<WireId>, target: WireId) -> Self {
        Gate { controls, target }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind() {
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Toffoli => "ccx",
            GateKind::Mcx => "mcx",
        };
        write!(f, "{name}")?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Ordered gate list over a labelled wire set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    wires: Vec<Wire>,
    gates: Vec<Gate>,
    /// gate index -> slice number, documentation only.
    slice_tags: BTreeMap<usize, u32>,
    current_slice: Option<u32>,
    provenance: Option<String>,
}

impl Circuit {
    pub fn new<S: Into<String>>(wire_specs: impl IntoIterator<Item = (S, WireRole)>) -> Result<Self, CircuitError> {
        let mut seen = HashSet::new();
        let mut wires = Vec::new();
        for (label, role) in wire_specs {
            let label = label.into();
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(CircuitError::InvalidLabel(label));
            }
            if !seen.insert(label.clone()) {
                return Err(CircuitError::DuplicateLabel(label));
            }
            wires.push(Wire { label, role });
        }
        Ok(Circuit { wires, ..Default::default() })
    }

    pub fn width(&self) -> usize {
        self.wires.len()
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn wire_by_label(&self, label: &str) -> Option<WireId> {
        self.wires.iter().position(|w| w.label == label).map(WireId)
    }

    pub fn wires_with_role(&self, role: WireRole) -> impl Iterator<Item = WireId> + '_ {
        self.wires
            .iter()
            .enumerate()
            .filter(move |(_, w)| w.role == role)
            .map(|(i, _)| WireId(i))
    }

    pub fn ancilla_count(&self) -> usize {
        self.wires_with_role(WireRole::Ancilla).count()
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn set_provenance(&mut self, tag: impl Into<String>) {
        self.provenance = Some(tag.into());
    }

    /// Tags every gate appended from now on with `slice`.
    pub fn begin_slice(&mut self, slice: u32) {
        self.current_slice = Some(slice);
    }

    pub fn end_slice(&mut self) {
        self.current_slice = None;
    }

    pub fn slice_of(&self, gate_index: usize) -> Option<u32> {
        self.slice_tags.get(&gate_index).copied()
    }

    /// Gates carrying slice tag `slice`, in order.
    pub fn slice_gates(&self, slice: u32) -> Vec<&Gate> {
        self.slice_tags
            .iter()
            .filter(|(_, s)| **s == slice)
            .map(|(i, _)| &self.gates[*i])
            .collect()
    }

    /// Appends `controls -> target`; the kind follows from the control count.
    pub fn append(&mut self, controls: impl IntoIterator<Item = WireId>, target: WireId) -> Result<(), CircuitError> {
        let gate = Gate::new(controls, target)?;
        self.push(gate)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check(self.width())?;
        self.push_unchecked(gate);
        Ok(())
    }

    fn push_unchecked(&mut self, gate: Gate) {
        if let Some(slice) = self.current_slice {
            self.slice_tags.insert(self.gates.len(), slice);
        }
        self.gates.push(gate);
    }

    pub fn x(&mut self, target: WireId) -> Result<(), CircuitError> {
        self.append([], target)
    }

    pub fn cx(&mut self, control: WireId, target: WireId) -> Result<(), CircuitError> {
        self.append([control], target)
    }

    pub fn ccx(&mut self, c1: WireId, c2: WireId, target: WireId) -> Result<(), CircuitError> {
        self.append([c1, c2], target)
    }

    /// The inverse circuit: same gates, reverse order.
    pub fn dagger(&self) -> Circuit {
        let last = self.gates.len().saturating_sub(1);
        Circuit {
            wires: self.wires.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
            slice_tags: self.slice_tags.iter().map(|(i, s)| (last - i, *s)).collect(),
            current_slice: None,
            provenance: self.provenance.clone(),
        }
    }

    /// Appends every gate of `sub`, sending sub-wire `i` to `wire_map[i]`.
    pub fn embed(&mut self, sub: &Circuit, wire_map: &[WireId]) -> Result<(), CircuitError> {
        if wire_map.len() != sub.width() {
            return Err(CircuitError::MapLength { expected: sub.width(), got: wire_map.len() });
        }
        let mut seen = HashSet::new();
        for w in wire_map {
            if w.0 >= self.width() {
                return Err(CircuitError::WireOutOfRange { wire: w.0, width: self.width() });
            }
            if !seen.insert(*w) {
                return Err(CircuitError::NonInjectiveMap(w.0));
            }
        }
        for gate in &sub.gates {
            self.push_unchecked(gate.remapped(wire_map));
        }
        Ok(())
    }

    /// Checks every gate against the circuit width and the gate invariants.
    pub fn validate(&self) -> Result<(), CircuitError> {
        for (index, gate) in self.gates.iter().enumerate() {
            gate.check(self.width())
                .map_err(|e| CircuitError::InvalidGate { index, source: Box::new(e) })?;
        }
        Ok(())
    }

    #[doc(hidden)]
    pub fn push_raw(&mut self, gate: Gate) {
        self.gates.push(gate);
    }
}
