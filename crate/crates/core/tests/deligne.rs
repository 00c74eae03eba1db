mod common;

use deligne_lab::abelian::linalg::Q;
use deligne_lab::abelian::DiffCohGroup;
use deligne_lab::deligne::{
    check_diamond, db_cup, diamond, diff_cohomology, periodic_deligne_direct, periodic_deligne_split,
    periodic_deligne_weights, DiffCochain, Parity, PeriodicDeligne,
};
use deligne_lab::simplicial::builders::{point, product, sphere};
use deligne_lab::simplicial::{integral_cohomology, SimplicialComplex};
use deligne_lab::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn g(v: usize, t: usize, l: usize, f: &[u64]) -> DiffCohGroup {
    DiffCohGroup::from_u64(v, t, l, f)
}

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn torus() -> SimplicialComplex {
    product(&sphere(1), &sphere(1))
}

#[test]
fn point_weights() {
    assert_eq!(diff_cohomology(&point(), 0), g(0, 0, 1, &[]));
    assert_eq!(diff_cohomology(&point(), 1), g(0, 1, 0, &[]));
    assert_eq!(periodic_deligne_direct(&point(), Parity::Ev), g(0, 0, 1, &[]));
    assert_eq!(periodic_deligne_direct(&point(), Parity::Odd), g(0, 1, 0, &[]));
}

#[test]
fn weight_groups_of_small_spaces() {
    // vector parts are cochains modulo closed cochains, so they depend on the triangulation
    let cases: [(&str, SimplicialComplex, Vec<DiffCohGroup>); 4] = [
        ("S^1", sphere(1), vec![g(0, 0, 1, &[]), g(2, 1, 1, &[]), g(0, 1, 0, &[])]),
        ("S^2", sphere(2), vec![g(0, 0, 1, &[]), g(3, 1, 0, &[]), g(3, 0, 1, &[]), g(0, 1, 0, &[])]),
        ("S^3", sphere(3), vec![g(0, 0, 1, &[]), g(4, 1, 0, &[]), g(6, 0, 0, &[]), g(4, 0, 1, &[]), g(0, 1, 0, &[])]),
        ("T^2", torus(), vec![g(0, 0, 1, &[]), g(8, 1, 2, &[]), g(17, 2, 1, &[]), g(0, 1, 0, &[])]),
    ];
    for (name, k, want) in cases {
        for (n, w) in want.iter().enumerate() {
            assert_eq!(diff_cohomology(&k, n), *w, "{name} weight {n}");
        }
    }
}

#[test]
fn top_weight_is_flat() {
    // one past the dimension only H^dim(Q/Z) survives
    for k in [point(), sphere(1), sphere(2), sphere(3), torus()] {
        let h = integral_cohomology(&k);
        let top = &h[k.dim()];
        assert_eq!(diff_cohomology(&k, k.dim() + 1), g(0, top.free_rank(), 0, &[]));
    }
}

#[test]
fn periodic_groups_of_spheres() {
    let cases = [
        (1, g(0, 1, 1, &[]), g(2, 1, 1, &[])),
        (2, g(3, 0, 2, &[]), g(3, 2, 0, &[])),
        (3, g(6, 1, 1, &[]), g(8, 1, 1, &[])),
        (4, g(15, 0, 2, &[]), g(15, 2, 0, &[])),
    ];
    for (n, ev, odd) in cases {
        let k = sphere(n);
        assert_eq!(periodic_deligne_direct(&k, Parity::Ev), ev, "S^{n} ev");
        assert_eq!(periodic_deligne_direct(&k, Parity::Odd), odd, "S^{n} odd");
    }
}

#[test]
fn even_spheres_shape() {
    // ev: lattice Z ⊕ Z from degrees 0 and n, odd: no lattice at all
    for n in [2, 4] {
        let k = sphere(n);
        let ev = periodic_deligne_direct(&k, Parity::Ev);
        let odd = periodic_deligne_direct(&k, Parity::Odd);
        assert_eq!((ev.lattice_rank(), ev.torus_rank()), (2, 0));
        assert_eq!((odd.lattice_rank(), odd.finite_factors().len()), (0, 0));
        assert!(ev.finite_factors().is_empty());
    }
}

#[test]
fn weights_used_by_the_splitting() {
    let ws: Vec<usize> = periodic_deligne_weights(&sphere(3), Parity::Ev).into_iter().map(|(n, _)| n).collect();
    assert_eq!(ws, vec![0, 2, 4]);
    let ws: Vec<usize> = periodic_deligne_weights(&sphere(3), Parity::Odd).into_iter().map(|(n, _)| n).collect();
    assert_eq!(ws, vec![1, 3]);
}

#[test]
fn curvature_below_weight_is_rejected() {
    let k = sphere(1);
    let bad = DiffCochain::new(&k, 2, 1, vec![BigInt::from(0); 3], vec![q(0); 3], vec![q(1), q(0), q(0)]);
    assert!(matches!(bad, Err(Error::WeightMismatch(_))));
    let short = DiffCochain::new(&k, 0, 1, vec![BigInt::from(0); 2], vec![q(0); 3], vec![q(0); 3]);
    assert!(matches!(short, Err(Error::DegreeMismatch(_))));
}

#[test]
fn db_product_unit_and_degree_zero() {
    let k = sphere(2);
    let one = DiffCochain::new(&k, 0, 0, vec![BigInt::from(1); 4], vec![], vec![q(1); 4]).unwrap();
    assert!(one.is_cocycle(&k));
    let x = DiffCochain::new(
        &k,
        1,
        1,
        (0..6).map(|i| BigInt::from(i % 3 - 1)).collect(),
        (0..4).map(|i| q(i - 2)).collect(),
        (0..6).map(|i| q(2 * i - 5)).collect(),
    )
    .unwrap();
    let ox = db_cup(&k, &one, &x).unwrap();
    assert_eq!((ox.c, ox.omega), (x.c.clone(), x.omega.clone()));
    let xo = db_cup(&k, &x, &one).unwrap();
    assert_eq!(xo, x);
    // past the top degree the product vanishes
    let top = DiffCochain::zero(&k, 2, 2);
    let z = db_cup(&k, &top, &top).unwrap();
    assert!(z.is_zero() && z.degree == 4 && z.weight == 4);
}

#[test]
fn twist_of_wrong_shape_is_rejected() {
    let k = sphere(3);
    let even = DiffCochain::zero(&k, 2, 2);
    assert!(matches!(PeriodicDeligne::twisted(&k, Parity::Ev, even), Err(Error::DegreeMismatch(_))));
    let wrong_weight = DiffCochain::zero(&k, 1, 3);
    assert!(matches!(PeriodicDeligne::twisted(&k, Parity::Ev, wrong_weight), Err(Error::WeightMismatch(_))));
    let mut open = DiffCochain::zero(&k, 3, 1);
    open.weight = 1;
    open.c[0] = BigInt::from(1);
    assert!(matches!(PeriodicDeligne::twisted(&k, Parity::Ev, open), Err(Error::NotACocycle(_))));
}

#[test]
fn diamond_on_two_sphere() {
    for p in [Parity::Ev, Parity::Odd] {
        let r = check_diamond(&diamond(&sphere(2), p).unwrap()).unwrap();
        assert!(r.passed(), "{p}: {r:?}");
    }
    let r = check_diamond(&diamond(&sphere(2), Parity::Ev).unwrap()).unwrap();
    assert!(!r.r_onto_closed);
    assert!(r.image_of_r_is_integral_periods);
}

fn rat_pattern(n: usize, seed: &[i64]) -> Vec<Q> {
    common::cochain(n, seed).into_iter().map(Q::from_integer).collect()
}

fn diff_cochain(k: &SimplicialComplex, weight: usize, m: usize, seed: &[i64]) -> DiffCochain {
    let kk = if m == 0 { vec![] } else { rat_pattern(k.count(m - 1), &seed[1..]) };
    let omega =
        if m < weight { vec![Q::from_integer(0.into()); k.count(m)] } else { rat_pattern(k.count(m), &seed[2..]) };
    DiffCochain::new(k, weight, m, common::cochain(k.count(m), seed), kk, omega).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn splitting_matches_direct((_, k) in common::space(2, 40)) {
        for p in [Parity::Ev, Parity::Odd] {
            prop_assert_eq!(periodic_deligne_direct(&k, p), periodic_deligne_split(&k, p));
        }
    }

    #[test]
    fn db_product_leibniz(
        (_, k) in common::space(3, 80),
        m1 in 0usize..4,
        m2 in 0usize..4,
        full1 in any::<bool>(),
        full2 in any::<bool>(),
        s1 in proptest::collection::vec(-3i64..=3, 3..6),
        s2 in proptest::collection::vec(-3i64..=3, 3..6),
    ) {
        prop_assume!(m1 <= k.dim() && m2 <= k.dim());
        // weight equal to the degree, or weight 0 with every curvature allowed
        let x = diff_cochain(&k, if full1 { m1 } else { 0 }, m1, &s1);
        let y = diff_cochain(&k, if full2 { m2 } else { 0 }, m2, &s2);
        let lhs = db_cup(&k, &x, &y).unwrap().differential(&k);
        let a = db_cup(&k, &x.differential(&k), &y).unwrap();
        let b = db_cup(&k, &x, &y.differential(&k)).unwrap();
        let b = if m1 % 2 == 1 { b.neg() } else { b };
        prop_assert_eq!(lhs, a.add(&b).unwrap());
    }

    #[test]
    fn products_of_cocycles_are_cocycles(
        (_, k) in common::space(3, 80),
        s in proptest::collection::vec(-3i64..=3, 3..6),
    ) {
        let x = diff_cochain(&k, 0, 0, &s);
        let y = diff_cochain(&k, 1, 0, &s);
        let (dx, dy) = (x.differential(&k), y.differential(&k));
        prop_assert!(db_cup(&k, &dx, &dy).unwrap().is_cocycle(&k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn diamond_holds((name, k) in common::space(2, 24)) {
        for p in [Parity::Ev, Parity::Odd] {
            let r = check_diamond(&diamond(&k, p).unwrap()).unwrap();
            prop_assert!(r.passed(), "{} {}: {:?}", name, p, r);
        }
    }
}
