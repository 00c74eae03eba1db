mod common;

use deligne_lab::abelian::linalg::Q;
use deligne_lab::abelian::{DiffCohGroup, FgAbGroup};
use deligne_lab::deligne::{periodic_deligne_direct, DiffCochain, Parity};
use deligne_lab::simplicial::builders::{circle, hemispheres, point, product, simplex, sphere};
use deligne_lab::simplicial::{coboundary, parse_space, SimplicialComplex, SimplicialMap};
use deligne_lab::twisted::{
    additivity_check, builtin_twist, gauge_deligne, gauge_integral, mayer_vietoris_check, obstruction, parse_twist,
    pullback_map, twisted_deligne_cohomology, twisted_periodic_cohomology, untwist_deligne, Obstruction, Twist,
    TwistedComplex,
};
use deligne_lab::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn twist(name: &str, k: &SimplicialComplex) -> Twist {
    builtin_twist(name, k).unwrap().unwrap()
}

fn torus() -> SimplicialComplex {
    product(&sphere(1), &sphere(1))
}

fn triangle() -> SimplicialComplex {
    parse_space("vertices: [a, b, c]\nfacets: [[a, b, c]]\n").unwrap()
}

#[test]
fn square_zero_for_top_degree_twists() {
    for n in [3, 5] {
        let k = sphere(n);
        let ob = obstruction(&k, &twist(&format!("h{n}_scale7"), &k)).unwrap();
        assert!(ob.is_zero());
        let ob = obstruction(&k, &twist(&format!("dh{n}_scale7"), &k)).unwrap();
        assert!(ob.is_zero());
    }
    assert!(obstruction(&circle(6).unwrap(), &twist("sign_edge", &circle(6).unwrap())).is_none());
}

#[test]
fn obstructed_degree_one_twist() {
    let k = triangle();
    let h = parse_twist("kind: integral\ndegree: 1\ncochain: {[a, b]: 1, [b, c]: -1}\n", &k).unwrap();
    let Some(Obstruction::Integral { degree, cochain }) = obstruction(&k, &h) else { panic!("integral obstruction") };
    assert_eq!(degree, 2);
    assert_eq!(cochain, vec![BigInt::from(-1)]);
    assert!(matches!(twisted_periodic_cohomology(&k, &h), Err(Error::ObstructionNonzero { nonzero: 1 })));
}

#[test]
fn zero_twist_on_torus() {
    let t2 = torus();
    let z2 = FgAbGroup::free(2);
    assert_eq!(twisted_periodic_cohomology(&t2, &twist("h3_scale0", &t2)).unwrap(), (z2.clone(), z2));
}

#[test]
fn twisted_odd_spheres() {
    for n in [3, 5] {
        let k = sphere(n);
        for h in [1u64, 2, 3, 5] {
            let got = twisted_periodic_cohomology(&k, &twist(&format!("h{n}_scale{h}"), &k)).unwrap();
            assert_eq!(got, (FgAbGroup::zero(), FgAbGroup::cyclic(h)), "S^{n}, h = {h}");
        }
    }
}

#[test]
fn twisted_deligne_odd_spheres() {
    // the forms part is pinned by the triangulation
    for (n, ev, odd) in [(3, 6, 9), (5, 30, 33)] {
        let k = sphere(n);
        for h in [1u64, 2, 3, 5] {
            let got = twisted_deligne_cohomology(&k, &twist(&format!("dh{n}_scale{h}"), &k)).unwrap();
            let torsion: Vec<u64> = if h == 1 { vec![] } else { vec![h] };
            assert_eq!(got, (DiffCohGroup::from_u64(ev, 0, 0, &[]), DiffCohGroup::from_u64(odd, 0, 0, &torsion)));
        }
    }
}

#[test]
fn file_twist_matches_builtin() {
    let k = sphere(3);
    let file =
        parse_twist("kind: differential\ndegree: 3\nc: {[0, 1, 2, 3]: 2}\nomega: {[0, 1, 2, 3]: 2}\n", &k).unwrap();
    // a different top simplex than the builtin, so equal only in cohomology
    assert_eq!(
        twisted_deligne_cohomology(&k, &file).unwrap(),
        twisted_deligne_cohomology(&k, &twist("dh3_scale2", &k)).unwrap()
    );
}

#[test]
fn topologically_trivial_twist_on_even_spheres() {
    for n in [2, 4] {
        let k = sphere(n);
        let t = twist(&format!("dh{}_scale3", n + 1), &k);
        let (ev, odd) = twisted_deligne_cohomology(&k, &t).unwrap();
        assert_eq!(ev, periodic_deligne_direct(&k, Parity::Ev));
        assert_eq!(odd, periodic_deligne_direct(&k, Parity::Odd));
        let r = untwist_deligne(&k, &t).unwrap();
        assert!(r.chain_level && r.induced_isomorphism, "{r:?}");
    }
}

#[test]
fn wrong_twist_kind() {
    let k = sphere(3);
    assert!(matches!(twisted_deligne_cohomology(&k, &twist("h3_scale2", &k)), Err(Error::TwistKind(_))));
    assert!(matches!(twisted_periodic_cohomology(&k, &twist("dh3_scale2", &k)), Err(Error::TwistKind(_))));
    assert!(matches!(builtin_twist("h2_scale1", &k), Err(Error::DegreeMismatch(_))));
    assert!(builtin_twist("nonsense", &k).unwrap().is_none());
}

#[test]
fn mayer_vietoris_on_spheres() {
    for n in [2, 3] {
        let k = sphere(n);
        let (u, v) = hemispheres(&k);
        let top = if n % 2 == 1 { n } else { n + 1 };
        for (t, deligne) in [
            (None, false),
            (Some(format!("h{top}_scale2")), false),
            (None, true),
            (Some(format!("dh{top}_scale3")), true),
        ] {
            let t = t.map(|name| twist(&name, &k));
            let r = mayer_vietoris_check(&k, &u, &v, t.as_ref(), deligne).unwrap();
            assert!(r.is_exact(), "S^{n} {t:?}: {r:?}");
        }
    }
}

#[test]
fn additivity_over_disjoint_unions() {
    for (k, l) in [(point(), sphere(1)), (sphere(2), sphere(1)), (torus(), point())] {
        assert!(additivity_check(&k, &l, false).unwrap());
        assert!(additivity_check(&k, &l, true).unwrap());
    }
}

#[test]
fn parity_shift_swaps_and_is_an_involution() {
    let k = sphere(3);
    for tc in [
        TwistedComplex::integral(&k, Some(&twist("h3_scale4", &k))).unwrap(),
        TwistedComplex::deligne(&k, Some(&twist("dh3_scale3", &k))).unwrap(),
        TwistedComplex::deligne(&torus(), None).unwrap(),
    ] {
        let (ev, odd) = tc.cohomology();
        let once = tc.parity_shift();
        assert!(once.is_shifted() != tc.is_shifted());
        assert_eq!(once.cohomology(), (odd, ev));
        assert_eq!(once.parity_shift().cohomology(), tc.cohomology());
    }
}

/// Folds `circle(4)` onto an edge, keeping the vertex order.
fn fold() -> SimplicialMap {
    SimplicialMap::new(circle(4).unwrap(), simplex(1), vec![0, 0, 1, 1]).unwrap()
}

fn compose(f: &SimplicialMap, g: &SimplicialMap) -> SimplicialMap {
    let n = f.source.labels().len();
    SimplicialMap::new(f.source.clone(), g.target.clone(), (0..n).map(|v| g.vertex_image(f.vertex_image(v))).collect())
        .unwrap()
}

#[test]
fn pullbacks_compose() {
    let c = circle(4).unwrap();
    let t = product(&c, &c);
    let f = SimplicialMap::product_projection(&t, &c, &c, true).unwrap();
    let g = fold();
    let gf = compose(&f, &g);
    for deligne in [false, true] {
        for p in [Parity::Ev, Parity::Odd] {
            let two_steps =
                pullback_map(&g, None, deligne, p).unwrap().then(&pullback_map(&f, None, deligne, p).unwrap()).unwrap();
            assert!(two_steps.agrees_with(&pullback_map(&gf, None, deligne, p).unwrap()), "deligne {deligne}, {p}");
        }
    }
}

#[test]
fn pullback_of_a_twisted_circle_to_the_torus() {
    let c = sphere(1);
    let t = product(&c, &c);
    let f = SimplicialMap::product_projection(&t, &c, &c, true).unwrap();
    let h = twist("h1_scale2", &c);
    assert_eq!(twisted_periodic_cohomology(&c, &h).unwrap(), (FgAbGroup::zero(), FgAbGroup::cyclic(2)));
    let pulled = h.pullback(&f);
    assert!(obstruction(&t, &pulled).unwrap().is_zero());
    assert_eq!(twisted_periodic_cohomology(&t, &pulled).unwrap(), (FgAbGroup::cyclic(2), FgAbGroup::cyclic(2)));
    let odd = pullback_map(&f, Some(&h), false, Parity::Odd).unwrap();
    assert!(odd.is_injective());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn integral_gauge_invariance(scale in 0i64..6, b in proptest::collection::vec(-3i64..=3, 1..5)) {
        let k = sphere(3);
        let h = twist(&format!("h3_scale{scale}"), &k);
        let Twist::Integral { cochain, .. } = &h else { unreachable!() };
        let db = coboundary(&k, 2).apply(&common::cochain(k.count(2), &b));
        let h2 = Twist::integral(&k, 3, cochain.iter().zip(&db).map(|(x, y)| x + y).collect()).unwrap();
        let r = gauge_integral(&k, &h, &h2).unwrap();
        prop_assert!(r.chain_level && r.induced_isomorphism && r.descriptors_equal());
    }

    #[test]
    fn deligne_gauge_invariance(
        scale in 1i64..5,
        b in proptest::collection::vec(-3i64..=3, 1..5),
        beta in proptest::collection::vec(-3i64..=3, 1..5),
    ) {
        let k = sphere(3);
        let h = twist(&format!("dh3_scale{scale}"), &k);
        let Twist::Differential(x) = &h else { unreachable!() };
        let beta: Vec<Q> = common::cochain(k.count(1), &beta).into_iter().map(Q::from_integer).collect();
        let zero = vec![Q::from_integer(0.into()); k.count(2)];
        let shift = DiffCochain::new(&k, 3, 2, common::cochain(k.count(2), &b), beta, zero).unwrap().differential(&k);
        let h2 = Twist::differential(&k, x.add(&shift).unwrap()).unwrap();
        let r = gauge_deligne(&k, &h, &h2).unwrap();
        prop_assert!(r.chain_level && r.induced_isomorphism && r.descriptors_equal());
    }

    #[test]
    fn untwisted_additivity((_, k) in common::space(2, 40), (_, l) in common::space(2, 40)) {
        prop_assert!(additivity_check(&k, &l, false).unwrap());
        prop_assert!(additivity_check(&k, &l, true).unwrap());
    }
}
