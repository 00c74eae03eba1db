#![allow(dead_code)]

use deligne_lab::simplicial::builders::{circle, cone, disjoint_union, point, product, simplex, sphere};
use deligne_lab::simplicial::SimplicialComplex;
use num_bigint::BigInt;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = (String, SimplicialComplex)> {
    prop_oneof![
        Just(("point".to_string(), point())),
        (1usize..=3).prop_map(|n| (format!("sphere({n})"), sphere(n))),
        (3usize..=5).prop_map(|m| (format!("circle({m})"), circle(m).unwrap())),
        (1usize..=2).prop_map(|n| (format!("simplex({n})"), simplex(n))),
    ]
}

/// Builder spaces of dimension at most `max_dim` with at most `max_simplices`.
pub fn space(max_dim: usize, max_simplices: usize) -> impl Strategy<Value = (String, SimplicialComplex)> {
    (leaf(), leaf(), 0u8..4)
        .prop_map(|((a, k), (b, l), op)| match op {
            0 => (a, k),
            1 => (format!("cone({a})"), cone(&k)),
            2 => (format!("union({a}, {b})"), disjoint_union(&k, &l)),
            _ => (format!("product({a}, {b})"), product(&k, &l)),
        })
        .prop_filter("too large", move |(_, k)| k.dim() <= max_dim && k.total_simplices() <= max_simplices)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// A deterministic integer cochain of length `n` drawn from `seed`.
pub fn cochain(n: usize, seed: &[i64]) -> Vec<BigInt> {
    (0..n)
        .map(|i| {
            BigInt::from(if seed.is_empty() { 0 } else { seed[i % seed.len()] * (1 + (i / seed.len()) as i64 % 2) })
        })
        .collect()
}
