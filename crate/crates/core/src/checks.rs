//! Invariant suites run by `deligne-lab check` and the acceptance test.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::linalg::Q;
use crate::abelian::{FgAbGroup, ScalarKind};
use crate::cdga::{parse_cdga, sullivan_sphere};
use crate::deligne::{
    check_diamond, db_cup, diamond, periodic_deligne_direct, periodic_deligne_split, DiffCochain, Parity,
    PeriodicDeligne,
};
use crate::error::Result;
use crate::simplicial::builders::{circle, cone, disjoint_union, hemispheres, point, product, simplex, sphere};
use crate::simplicial::{
    cech_double_complex, coboundary, cup, integral_cohomology, CochainComplex, SignCocycle, SimplicialComplex,
};
use crate::twisted::{builtin_twist, gauge_deligne, gauge_integral, mayer_vietoris_check, Twist, TwistedComplex};

pub const SUITES: [&str; 8] = ["d2", "leibniz", "mv", "gauge", "parity-shift", "cech", "splitting", "diamond"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub suite: String,
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(suite: &str, case: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome { suite: suite.into(), case: case.into(), passed, detail: detail.into() }
}

/// Builder spaces of dimension at most 3.
pub fn builder_spaces() -> Vec<(&'static str, SimplicialComplex)> {
    let s1 = sphere(1);
    vec![
        ("point", point()),
        ("circle(4)", circle(4).expect("circle")),
        ("sphere(1)", s1.clone()),
        ("sphere(2)", sphere(2)),
        ("sphere(3)", sphere(3)),
        ("simplex(3)", simplex(3)),
        ("cone(circle(6))", cone(&circle(6).expect("circle"))),
        ("product(sphere(1), sphere(1))", product(&s1, &s1)),
        ("product(sphere(1), sphere(2))", product(&s1, &sphere(2))),
        ("union(sphere(1), point)", disjoint_union(&s1, &point())),
    ]
}

/// Spaces of the splitting and diamond checks.
pub fn deligne_spaces() -> Vec<(&'static str, SimplicialComplex)> {
    let s1 = sphere(1);
    vec![
        ("point", point()),
        ("sphere(1)", s1.clone()),
        ("sphere(2)", sphere(2)),
        ("sphere(3)", sphere(3)),
        ("product(sphere(1), sphere(1))", product(&s1, &s1)),
        ("product(sphere(1), sphere(2))", product(&s1, &sphere(2))),
    ]
}

/// A fixed integer pattern, so that runs are reproducible.
fn pattern(n: usize, seed: i64) -> Vec<BigInt> {
    (0..n as i64).map(|i| BigInt::from((i * 7 + seed * 3) % 5 - 2)).collect()
}

fn pattern_q(n: usize, seed: i64) -> Vec<Q> {
    pattern(n, seed).into_iter().map(Q::from_integer).collect()
}

fn periodic_square_zero(p: &PeriodicDeligne) -> bool {
    let s = p.base();
    (s - 2..=s + 1).all(|t| p.differential(t + 1).mul(&p.differential(t)).is_zero())
}

fn twist(name: &str, k: &SimplicialComplex) -> Twist {
    builtin_twist(name, k).expect("builtin twist").expect("known name")
}

fn suite_d2() -> Result<Vec<CheckOutcome>> {
    let mut out: Vec<CheckOutcome> = builder_spaces()
        .into_par_iter()
        .map(|(name, k)| -> Result<Vec<CheckOutcome>> {
            let mut v = vec![
                outcome(
                    "d2",
                    format!("{name}: simplicial"),
                    CochainComplex::simplicial(&k, ScalarKind::Integer).is_square_zero(),
                    "",
                ),
                outcome(
                    "d2",
                    format!("{name}: Čech double complex"),
                    cech_double_complex(&k, ScalarKind::Integer)?.is_square_zero(),
                    "",
                ),
            ];
            for p in [Parity::Ev, Parity::Odd] {
                v.push(outcome(
                    "d2",
                    format!("{name}: periodic Deligne {p}"),
                    periodic_square_zero(&PeriodicDeligne::new(&k, p)),
                    "",
                ));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let s3 = sphere(3);
    let hex = circle(6)?;
    let twisted = [
        ("sphere(3), h3_scale2", TwistedComplex::integral(&s3, Some(&twist("h3_scale2", &s3)))?),
        ("sphere(3), dh3_scale2", TwistedComplex::deligne(&s3, Some(&twist("dh3_scale2", &s3)))?),
        ("sphere(2), dh3_scale5", TwistedComplex::deligne(&sphere(2), Some(&twist("dh3_scale5", &sphere(2))))?),
        ("circle(6), sign", TwistedComplex::sign(&hex, &SignCocycle::from_negative_edges(&hex, &[[0, 5]])?)?),
    ];
    for (name, tc) in twisted {
        out.push(outcome("d2", format!("{name}: twisted"), tc.is_square_zero(), ""));
    }
    Ok(out)
}

fn suite_leibniz() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (name, k) in builder_spaces() {
        let n = k.dim();
        let mut ok = true;
        let mut ok_db = true;
        for p in 0..=n {
            for q in 0..=n - p {
                let (a, b) = (pattern(k.count(p), p as i64), pattern(k.count(q), 11 + q as i64));
                let lhs = if p + q < n { coboundary(&k, p + q).apply(&cup(&k, &a, p, &b, q)) } else { vec![] };
                if p + q < n {
                    let da = coboundary(&k, p).apply(&a);
                    let db = coboundary(&k, q).apply(&b);
                    let x = cup(&k, &da, p + 1, &b, q);
                    let y = cup(&k, &a, p, &db, q + 1);
                    let sign = if p % 2 == 1 { -1 } else { 1 };
                    ok &= lhs.iter().zip(x.iter().zip(&y)).all(|(l, (x, y))| *l == x + y * sign);
                }
                // Deligne-Beilinson product: weights 0 so that every curvature is allowed
                let kk = |m: usize, s: i64| {
                    if m == 0 {
                        vec![]
                    } else {
                        pattern_q(k.count(m - 1), s)
                    }
                };
                let x = DiffCochain::new(&k, 0, p, a.clone(), kk(p, 3), pattern_q(k.count(p), 5))?;
                let y = DiffCochain::new(&k, 0, q, b.clone(), kk(q, 7), pattern_q(k.count(q), 2))?;
                let lhs = db_cup(&k, &x, &y)?.differential(&k);
                let l = db_cup(&k, &x.differential(&k), &y)?;
                let r = db_cup(&k, &x, &y.differential(&k))?;
                let r = if p % 2 == 1 { r.neg() } else { r };
                ok_db &= lhs == l.add(&r)?;
            }
        }
        out.push(outcome("leibniz", format!("{name}: cup"), ok, ""));
        out.push(outcome("leibniz", format!("{name}: Deligne-Beilinson product"), ok_db, ""));
    }
    let models = [
        ("sullivan_sphere(2), cap 12", sullivan_sphere(2)?.with_cap(12)),
        ("sullivan_sphere(3), cap 12", sullivan_sphere(3)?.with_cap(12)),
        ("u:2, v:2, s:3, t:5", parse_cdga("generators: u:2, v:2, s:3, t:5\nd(s) = u*v\nd(t) = u^2*v\ncap: 10\n")?),
    ];
    for (name, a) in models {
        out.push(outcome("leibniz", format!("cdga {name}"), a.check_leibniz() && a.check_graded_commutativity(), ""));
    }
    Ok(out)
}

fn suite_mv() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let k = sphere(n);
        let (u, v) = hemispheres(&k);
        let top = if n % 2 == 1 { n } else { n + 1 };
        let cases: [(String, Option<Twist>, bool); 4] = [
            ("integral, untwisted".into(), None, false),
            (format!("integral, h{top}_scale3"), Some(twist(&format!("h{top}_scale3"), &k)), false),
            ("Deligne, untwisted".into(), None, true),
            (format!("Deligne, dh{top}_scale2"), Some(twist(&format!("dh{top}_scale2"), &k)), true),
        ];
        for (label, t, deligne) in cases {
            let r = mayer_vietoris_check(&k, &u, &v, t.as_ref(), deligne)?;
            let failures: Vec<String> = r
                .sequences
                .iter()
                .filter(|(_, s)| !s.is_exact())
                .map(|(n, s)| format!("{n} at {:?}", s.failures()))
                .collect();
            out.push(outcome("mv", format!("sphere({n}) {label}"), r.is_exact(), failures.join("; ")));
        }
    }
    Ok(out)
}

fn shifted_integral(k: &SimplicialComplex, h: &Twist, seed: i64) -> Result<Twist> {
    let Twist::Integral { degree, cochain } = h else { unreachable!("integral twist") };
    let b = pattern(k.count(degree - 1), seed);
    let db = coboundary(k, degree - 1).apply(&b);
    Twist::integral(k, *degree, cochain.iter().zip(&db).map(|(x, y)| x + y).collect())
}

fn suite_gauge() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (name, k, t) in [
        ("sphere(3)", sphere(3), "h3_scale2"),
        ("sphere(3)", sphere(3), "h3_scale5"),
        ("sphere(2)", sphere(2), "h3_scale1"),
    ] {
        let h = twist(t, &k);
        let h2 = shifted_integral(&k, &h, 4)?;
        let r = gauge_integral(&k, &h, &h2)?;
        out.push(outcome(
            "gauge",
            format!("{name}: {t} vs {t} + δb"),
            r.chain_level && r.induced_isomorphism && r.descriptors_equal(),
            format!("{} / {}", r.source.1, r.target.1),
        ));
    }
    let s3 = sphere(3);
    let h = twist("dh3_scale2", &s3);
    let Twist::Differential(x) = &h else { unreachable!() };
    let b = pattern(s3.count(2), 1);
    let beta = pattern_q(s3.count(1), 2);
    let shift = DiffCochain::new(&s3, 3, 2, b, beta, vec![Q::from_integer(0.into()); s3.count(2)])?.differential(&s3);
    let h2 = Twist::differential(&s3, x.add(&shift)?)?;
    let r = gauge_deligne(&s3, &h, &h2)?;
    out.push(outcome(
        "gauge",
        "sphere(3): dh3_scale2 vs dh3_scale2 + D(b, β, 0)",
        r.chain_level && r.induced_isomorphism && r.descriptors_equal(),
        format!("{} / {}", r.source.1, r.target.1),
    ));
    Ok(out)
}

fn suite_parity_shift() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let s3 = sphere(3);
    let hex = circle(6)?;
    let cases = [
        ("sphere(3), h3_scale3", TwistedComplex::integral(&s3, Some(&twist("h3_scale3", &s3)))?),
        ("sphere(2), untwisted Deligne", TwistedComplex::deligne(&sphere(2), None)?),
        ("sphere(3), dh3_scale2", TwistedComplex::deligne(&s3, Some(&twist("dh3_scale2", &s3)))?),
        ("circle(6), sign", TwistedComplex::sign(&hex, &SignCocycle::from_negative_edges(&hex, &[[0, 5]])?)?),
    ];
    for (name, tc) in cases {
        let (ev, odd) = tc.cohomology();
        let once = tc.parity_shift();
        let twice = once.parity_shift();
        let swapped = once.cohomology() == (odd, ev);
        let involution = twice.cohomology() == tc.cohomology() && twice.is_shifted() == tc.is_shifted();
        out.push(outcome(
            "parity-shift",
            name,
            swapped && involution,
            format!("swapped {swapped}, involution {involution}"),
        ));
    }
    Ok(out)
}

fn suite_cech() -> Result<Vec<CheckOutcome>> {
    builder_spaces()
        .into_par_iter()
        .map(|(name, k)| {
            let direct = integral_cohomology(&k);
            let cech = cech_double_complex(&k, ScalarKind::Integer)?.all_total_cohomology();
            let n = direct.len();
            let agree = cech.len() >= n && cech[..n] == direct[..] && cech[n..].iter().all(FgAbGroup::is_trivial);
            Ok(outcome("cech", name, agree, format!("{direct:?}")))
        })
        .collect()
}

fn suite_splitting() -> Result<Vec<CheckOutcome>> {
    Ok(deligne_spaces()
        .into_par_iter()
        .flat_map_iter(|(name, k)| {
            [Parity::Ev, Parity::Odd].map(|p| {
                let (d, s) = (periodic_deligne_direct(&k, p), periodic_deligne_split(&k, p));
                outcome("splitting", format!("{name} {p}"), d == s, format!("{d} / {s}"))
            })
        })
        .collect())
}

fn suite_diamond() -> Result<Vec<CheckOutcome>> {
    let mut out = deligne_spaces()
        .into_par_iter()
        .map(|(name, k)| -> Result<Vec<CheckOutcome>> {
            let mut v = Vec::new();
            for p in [Parity::Ev, Parity::Odd] {
                let r = check_diamond(&diamond(&k, p)?)?;
                let bad: Vec<&str> = r
                    .sequences
                    .iter()
                    .filter(|(_, s)| !s.is_exact())
                    .map(|(n, _)| n.as_str())
                    .chain(r.squares.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()))
                    .collect();
                v.push(outcome("diamond", format!("{name} {p}"), r.passed(), bad.join(", ")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let r = check_diamond(&diamond(&sphere(2), Parity::Ev)?)?;
    out.push(outcome(
        "diamond",
        "sphere(2) ev: R misses some closed cochains, hits exactly those with integral periods",
        !r.r_onto_closed && r.image_of_r_is_integral_periods,
        format!("onto closed {}, integral periods {}", r.r_onto_closed, r.image_of_r_is_integral_periods),
    ));
    Ok(out)
}

/// Runs one suite by name, or every suite for `all`.
pub fn run_suite(name: &str) -> Result<Option<Vec<CheckOutcome>>> {
    let out = match name {
        "d2" => suite_d2()?,
        "leibniz" => suite_leibniz()?,
        "mv" => suite_mv()?,
        "gauge" => suite_gauge()?,
        "parity-shift" => suite_parity_shift()?,
        "cech" => suite_cech()?,
        "splitting" => suite_splitting()?,
        "diamond" => suite_diamond()?,
        "all" => {
            let mut v = Vec::new();
            for s in SUITES {
                v.extend(run_suite(s)?.expect("known suite"));
            }
            v
        }
        _ => return Ok(None),
    };
    Ok(Some(out))
}
