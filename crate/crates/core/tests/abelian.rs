use deligne_lab::abelian::matrix::{int, rat};
use deligne_lab::abelian::snf::determinant;
use deligne_lab::abelian::{
    check_exact, resolve_extension, smith_normal_form, DiffCohGroup, Extension, FgAbGroup, GroupMap, IntMatrix,
    RatMatrix, ScalarKind, Subgroup, Subquotient,
};
use deligne_lab::simplicial::builders::sphere;
use deligne_lab::simplicial::{cohomology_at, integral_cohomology};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

#[test]
fn smith_examples() {
    let f = smith_normal_form(&m(&[&[0]]));
    assert_eq!(f.s, m(&[&[0]]));
    assert_eq!(f.u, m(&[&[1]]));
    assert_eq!(f.v, m(&[&[1]]));
    let f = smith_normal_form(&m(&[&[2, 4], &[6, 8]]));
    assert_eq!(f.s, m(&[&[2, 0], &[0, 4]]));
    for n in 1..6 {
        assert_eq!(smith_normal_form(&IntMatrix::identity(n)).s, IntMatrix::identity(n));
    }
}

#[test]
fn cohomology_at_examples() {
    let zero = IntMatrix::zeros(1, 0);
    assert_eq!(cohomology_at(&zero, &IntMatrix::zeros(0, 1), ScalarKind::Integer).unwrap(), FgAbGroup::free(1));
    assert_eq!(cohomology_at(&m(&[&[2]]), &IntMatrix::zeros(0, 1), ScalarKind::Integer).unwrap(), FgAbGroup::cyclic(2));
    // degree 2 of the boundary of the 3-simplex
    let k = sphere(2);
    let d1 = deligne_lab::simplicial::coboundary(&k, 1);
    let d2 = deligne_lab::simplicial::coboundary(&k, 2);
    assert_eq!(cohomology_at(&d1, &d2, ScalarKind::Integer).unwrap(), FgAbGroup::free(1));
}

#[test]
fn sphere_boundaries_up_to_seven() {
    for n in 1..=7 {
        let h = integral_cohomology(&sphere(n));
        assert_eq!(h.len(), n + 1);
        for (d, g) in h.iter().enumerate() {
            let want = if d == 0 || d == n { FgAbGroup::free(1) } else { FgAbGroup::zero() };
            assert_eq!(*g, want, "S^{n}, degree {d}");
        }
    }
}

#[test]
fn extension_examples() {
    let sub = DiffCohGroup::from_u64(3, 1, 0, &[]);
    let quot = DiffCohGroup::from_u64(0, 0, 0, &[5]);
    assert_eq!(resolve_extension(&sub, &quot), Extension::Resolved { group: DiffCohGroup::from_u64(3, 1, 0, &[5]) });
    let g = DiffCohGroup::from_u64(0, 0, 2, &[6]);
    assert_eq!(resolve_extension(&DiffCohGroup::zero(), &g), Extension::Resolved { group: g });
    let z2 = DiffCohGroup::from_u64(0, 0, 0, &[2]);
    match resolve_extension(&z2, &z2) {
        Extension::Ambiguous { mut candidates, exhaustive } => {
            candidates.sort();
            let mut want = vec![DiffCohGroup::from_u64(0, 0, 0, &[4]), DiffCohGroup::from_u64(0, 0, 0, &[2, 2])];
            want.sort();
            assert_eq!(candidates, want);
            assert!(exhaustive);
        }
        e => panic!("{e:?}"),
    }
}

fn z() -> Subquotient {
    Subquotient::whole(Subgroup::full_integral(1))
}

fn zn(n: i64) -> Subquotient {
    Subquotient::presented(&m(&[&[n]]))
}

fn scalar(x: i64) -> RatMatrix {
    RatMatrix::from_rows(vec![vec![rat(x)]], 1)
}

#[test]
fn exactness_examples() {
    let zero = || Subquotient::whole(Subgroup::zero(0));
    let into = |t: Subquotient| GroupMap::zero_from(zero(), t);
    let onto = |s: Subquotient| GroupMap::zero_from(s, zero());
    // 0 -> Z -> Z -> 0
    let r = check_exact(&[into(z()), GroupMap::new(z(), z(), scalar(1)).unwrap(), onto(z())]).unwrap();
    assert!(r.is_exact());
    // 0 -> Z -2-> Z -> Z/2 -> 0
    let seq = |n| {
        vec![
            into(z()),
            GroupMap::new(z(), z(), scalar(2)).unwrap(),
            GroupMap::new(z(), zn(n), scalar(1)).unwrap(),
            onto(zn(n)),
        ]
    };
    assert!(check_exact(&seq(2)).unwrap().is_exact());
    // with Z/3 at the end exactness fails at the third node
    let r = check_exact(&seq(3)).unwrap();
    assert_eq!(r.failures(), vec![3]);
}

/// gcd of all k×k minors.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = choose(n - 1, k);
        for mut c in choose(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }
    let mut g = BigInt::zero();
    for rows in choose(a.rows(), k) {
        for cols in choose(a.cols(), k) {
            let sub = IntMatrix::from_fn(k, k, |i, j| a.get(rows[i], cols[j]).clone());
            g = g.gcd(&determinant(&sub));
        }
    }
    g
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| int(v[i * c + j])))
    })
}

fn descriptor() -> impl Strategy<Value = DiffCohGroup> {
    (0usize..5, 0usize..3, 0usize..3, proptest::collection::vec(2u64..40, 0..4))
        .prop_map(|(v, t, l, f)| DiffCohGroup::from_u64(v, t, l, &f))
}

proptest! {
    #[test]
    fn smith_reconstructs(a in small_matrix()) {
        let f = smith_normal_form(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.s.clone());
        prop_assert!(determinant(&f.u).abs().is_one());
        prop_assert!(determinant(&f.v).abs().is_one());
        prop_assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(a.cols()));
        let d = f.diagonal();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        // products of leading invariant factors are the determinantal divisors
        let mut prod = BigInt::one();
        for k in 1..=a.rows().min(a.cols()) {
            prod *= d.get(k - 1).cloned().unwrap_or_else(BigInt::zero);
            prop_assert_eq!(prod.abs(), determinantal_divisor(&a, k));
        }
    }

    #[test]
    fn divisible_sub_keeps_quotient_parts(sub in descriptor(), quot in descriptor()) {
        let sub = DiffCohGroup::new(sub.vector_dim(), sub.torus_rank(), 0, &[]);
        let quot = DiffCohGroup::new(0, 0, quot.lattice_rank(), quot.finite_factors());
        let e = resolve_extension(&sub, &quot);
        let g = e.resolved().expect("divisible subgroups split off");
        prop_assert_eq!(g.finite_factors(), quot.finite_factors());
        prop_assert_eq!(g.lattice_rank(), quot.lattice_rank());
    }

    #[test]
    fn descriptors_round_trip_through_json(g in descriptor()) {
        let s = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<DiffCohGroup>(&s).unwrap(), g.clone());
        let fg = FgAbGroup::new(g.lattice_rank(), g.finite_factors());
        let s = serde_json::to_string(&fg).unwrap();
        prop_assert_eq!(serde_json::from_str::<FgAbGroup>(&s).unwrap(), fg);
    }
}

#[test]
fn descriptor_json_shape() {
    let g = DiffCohGroup::from_u64(9, 0, 1, &[3]);
    assert_eq!(
        serde_json::to_string(&g).unwrap(),
        r#"{"vector_dim":9,"torus_rank":0,"lattice_rank":1,"finite_factors":[3]}"#
    );
    assert!(serde_json::from_str::<DiffCohGroup>(
        r#"{"vector_dim":1,"torus_rank":0,"lattice_rank":0,"finite_factors":[0]}"#
    )
    .is_err());
    // huge factors travel as strings
    let big = r#"{"free_rank":0,"torsion":["123456789012345678901234567890"]}"#;
    let fg: FgAbGroup = serde_json::from_str(big).unwrap();
    assert!(serde_json::to_string(&fg).unwrap().contains("123456789012345678901234567890"));
}
