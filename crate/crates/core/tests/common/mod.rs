//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use revq::circuit::{Circuit, Gate, WireId, WireRole};
use revq::sim::Assignment;

/// Circuit on `width` data wires with `gates` gates of 0 to 4 controls.
pub fn random_circuit(seed: u64, width: usize, gates: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new((0..width).map(|i| (format!("w{i}"), WireRole::Data))).unwrap();
    for _ in 0..gates {
        let k = rng.gen_range(1..=width.min(5));
        let picked = sample(&mut rng, width, k).into_vec();
        let (target, controls) = picked.split_last().unwrap();
        c.push(Gate::new(controls.iter().map(|i| WireId(*i)), WireId(*target)).unwrap())
            .unwrap();
    }
    c
}

pub fn random_assignment(rng: &mut ChaCha8Rng, width: usize) -> Assignment {
    Assignment::from_bits((0..width).map(|_| rng.gen()).collect())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random value of `bits` bits as a `u128`.
pub fn random_uint(rng: &mut ChaCha8Rng, bits: usize) -> u128 {
    let v: u128 = rng.gen();
    if bits >= 128 {
        v
    } else {
        v & ((1u128 << bits) - 1)
    }
}
