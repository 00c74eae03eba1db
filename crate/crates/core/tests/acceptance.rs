//! One pass/fail line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use deligne_lab::abelian::{DiffCohGroup, FgAbGroup};
use deligne_lab::ahss::{assemble_abutment, differential_ahss, integral_ahss, Abutment, Convergence, SpectralSequence};
use deligne_lab::cdga::{
    parse_cdga, parse_element, sullivan_sphere, twisted_cohomology, verify_cs_homotopy, verify_gauge, Element,
};
use deligne_lab::checks::{deligne_spaces, run_suite};
use deligne_lab::deligne::{check_diamond, diamond, periodic_deligne_direct, periodic_deligne_split, Parity};
use deligne_lab::simplicial::builders::{circle, sphere};
use deligne_lab::simplicial::{twisted_coboundary, SignCocycle, SimplicialComplex};
use deligne_lab::twisted::{
    builtin_twist, twisted_deligne_cohomology, twisted_periodic_cohomology, twisted_sign_cohomology, Twist,
};
use num_bigint::BigInt;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn twist(name: &str, k: &SimplicialComplex) -> Result<Twist, String> {
    builtin_twist(name, k).map_err(|e| e.to_string())?.ok_or_else(|| format!("no builtin {name}"))
}

fn abutment(ss: &SpectralSequence, p: Parity) -> Result<DiffCohGroup, String> {
    match assemble_abutment(ss, p).map_err(|e| e.to_string())? {
        Abutment::Resolved { group } => Ok(group),
        a => Err(format!("unresolved abutment {a:?}")),
    }
}

fn odd_sphere_integral() -> Check {
    for n in [3, 5] {
        let k = sphere(n);
        for h in [1u64, 2, 3, 5] {
            let t = twist(&format!("h{n}_scale{h}"), &k)?;
            let want = (FgAbGroup::zero(), FgAbGroup::cyclic(h));
            let direct = twisted_periodic_cohomology(&k, &t).map_err(|e| e.to_string())?;
            ensure!(direct == want, "S^{n}, h = {h}: direct gives {direct:?}");
            let ss = integral_ahss(&k, &t).map_err(|e| e.to_string())?;
            ensure!(ss.report.convergence == Convergence::Converged, "S^{n}, h = {h}: AHSS did not converge");
            let via = (abutment(&ss, Parity::Ev)?, abutment(&ss, Parity::Odd)?);
            ensure!(via == (want.0.to_diff(), want.1.to_diff()), "S^{n}, h = {h}: AHSS gives {via:?}");
        }
    }
    Ok(())
}

fn even_sphere_degeneration() -> Check {
    for n in [2, 4] {
        let k = sphere(n);
        for h in [0u64, 1, 2, 3, 5] {
            let ss = integral_ahss(&k, &twist(&format!("h{}_scale{h}", n + 1), &k)?).map_err(|e| e.to_string())?;
            ensure!(ss.e2.convergence == Convergence::Converged, "S^{n}, h = {h}: not converged at E2");
            let (ev, odd) = (abutment(&ss, Parity::Ev)?, abutment(&ss, Parity::Odd)?);
            ensure!(
                ev == DiffCohGroup::from_u64(0, 0, 2, &[]) && odd == DiffCohGroup::zero(),
                "S^{n}, h = {h}: {ev} / {odd}"
            );
        }
    }
    Ok(())
}

fn splitting() -> Check {
    for (name, k) in deligne_spaces() {
        for p in [Parity::Ev, Parity::Odd] {
            let (d, s) = (periodic_deligne_direct(&k, p), periodic_deligne_split(&k, p));
            ensure!(d == s, "{name} {p}: direct {d}, split {s}");
        }
    }
    Ok(())
}

fn diamonds() -> Check {
    for (name, k) in deligne_spaces() {
        for p in [Parity::Ev, Parity::Odd] {
            let r = check_diamond(&diamond(&k, p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure!(r.passed(), "{name} {p}: {r:?}");
        }
    }
    let r = check_diamond(&diamond(&sphere(2), Parity::Ev).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(!r.r_onto_closed, "S^2: R hits every closed cochain");
    ensure!(r.image_of_r_is_integral_periods, "S^2: image of R is not the integral-period cochains");
    Ok(())
}

fn even_sphere_deligne() -> Check {
    // vector parts are pinned for the boundary-of-simplex triangulations
    for (n, v) in [(2usize, 3usize), (4, 15)] {
        let k = sphere(n);
        let ev = periodic_deligne_direct(&k, Parity::Ev);
        let odd = periodic_deligne_direct(&k, Parity::Odd);
        ensure!(ev == DiffCohGroup::from_u64(v, 0, 2, &[]), "S^{n} ev: {ev}");
        // flat classes from H^0 and H^n with Q/Z coefficients ride along the forms
        ensure!(odd == DiffCohGroup::from_u64(v, 2, 0, &[]), "S^{n} odd: {odd}");
        for h in [1, 2, 3, 7] {
            let t = twist(&format!("dh{}_scale{h}", n + 1), &k)?;
            let got = twisted_deligne_cohomology(&k, &t).map_err(|e| e.to_string())?;
            ensure!(got == (ev.clone(), odd.clone()), "S^{n}, h = {h}: twisted {got:?}");
        }
    }
    Ok(())
}

fn odd_sphere_deligne() -> Check {
    for (n, forms) in [(3usize, 9usize), (5, 33)] {
        let k = sphere(n);
        for h in [1u64, 2, 3, 5] {
            let t = twist(&format!("dh{n}_scale{h}"), &k)?;
            let ss = differential_ahss(&k, Some(&t), Parity::Odd).map_err(|e| e.to_string())?;
            let g = abutment(&ss, Parity::Odd)?;
            let want: Vec<BigInt> = if h == 1 { vec![] } else { vec![BigInt::from(h)] };
            ensure!(g.finite_factors() == &want[..], "S^{n}, h = {h}: torsion {:?}", g.finite_factors());
            ensure!(
                g == DiffCohGroup::from_u64(forms, 0, 0, &want.iter().map(|_| h).collect::<Vec<_>>()),
                "S^{n}, h = {h}: {g}"
            );
            let fe = ss.forms_extension.as_ref().ok_or("no forms extension")?;
            ensure!(fe.forms == DiffCohGroup::from_u64(forms, 0, 0, &[]), "S^{n}, h = {h}: forms {}", fe.forms);
            ensure!(fe.extension.resolved() == Some(&g), "S^{n}, h = {h}: extension {:?}", fe.extension);
            let (_, direct) = twisted_deligne_cohomology(&k, &t).map_err(|e| e.to_string())?;
            ensure!(direct == g, "S^{n}, h = {h}: direct {direct}, AHSS {g}");
        }
    }
    Ok(())
}

fn cdga_identities() -> Check {
    let err = |e: deligne_lab::Error| e.to_string();
    for cap in 3..=12 {
        let s2 = sullivan_sphere(2).map_err(err)?.with_cap(cap.max(5));
        for x in ["y", "y + x*y"] {
            let r = verify_cs_homotopy(&s2, &parse_element(&s2, x).map_err(err)?).map_err(err)?;
            ensure!(r.passed(), "S^2 cap {cap}, CS({x}): {r:?}");
        }
        let r = verify_gauge(&s2, &Element::zero(), &parse_element(&s2, "x - 2*x^2").map_err(err)?).map_err(err)?;
        ensure!(r.passed(), "S^2 cap {cap}, gauge: {r:?}");
        let s3 = sullivan_sphere(3).map_err(err)?.with_cap(cap);
        let r = verify_cs_homotopy(&s3, &parse_element(&s3, "x").map_err(err)?).map_err(err)?;
        ensure!(r.passed(), "S^3 cap {cap}, CS(x): {r:?}");
    }
    for (da, db) in [(1, 2), (3, 4), (5, 6)] {
        let a = parse_cdga(&format!("generators: a:{da}, f:{db}\nd(a) = f\ncap: 12\n")).map_err(err)?;
        let r = verify_cs_homotopy(&a, &parse_element(&a, "a").map_err(err)?).map_err(err)?;
        ensure!(r.passed(), "free a:{da}: {r:?}");
        let b = parse_cdga(&format!("generators: b:{db}, H:{}\nd(b) = H\ncap: 12\n", db + 1)).map_err(err)?;
        let r = verify_gauge(&b, &parse_element(&b, "H").map_err(err)?, &parse_element(&b, "b").map_err(err)?)
            .map_err(err)?;
        ensure!(r.passed() && r.trivializes, "free b:{db}: {r:?}");
    }
    let s3 = sullivan_sphere(3).map_err(err)?;
    for h in 1..=7 {
        let c = twisted_cohomology(&s3, &parse_element(&s3, &format!("{h}*x")).map_err(err)?).map_err(err)?;
        ensure!((c.ev_dim, c.odd_dim) == (0, 0), "Λ(x3), h = {h}: ({}, {})", c.ev_dim, c.odd_dim);
    }
    Ok(())
}

fn property_suites() -> Check {
    let out = run_suite("all").map_err(|e| e.to_string())?.ok_or("suite `all` missing")?;
    let failed: Vec<String> =
        out.iter().filter(|c| !c.passed).map(|c| format!("[{}] {} {}", c.suite, c.case, c.detail)).collect();
    ensure!(failed.is_empty(), "{}", failed.join("; "));
    ensure!(out.len() > 50, "only {} checks ran", out.len());
    Ok(())
}

fn circle_sign_twist() -> Check {
    let hex = circle(6).map_err(|e| e.to_string())?;
    let eps = SignCocycle::from_negative_edges(&hex, &[[0, 5]]).map_err(|e| e.to_string())?;
    let brute = FgAbGroup::presented(&twisted_coboundary(&hex, &eps, 0).transpose());
    ensure!(brute == FgAbGroup::cyclic(2), "brute force H^1 = {brute:?}");
    let got = twisted_sign_cohomology(&hex, &eps).map_err(|e| e.to_string())?;
    ensure!(got == (FgAbGroup::zero(), FgAbGroup::cyclic(2)), "got {got:?}");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("odd spheres, twisted integral, direct and AHSS", odd_sphere_integral),
        ("even spheres, AHSS degenerates at E2", even_sphere_degeneration),
        ("periodic Deligne splitting", splitting),
        ("diamond exactness", diamonds),
        ("even spheres, untwisted and twisted Deligne", even_sphere_deligne),
        ("odd spheres, twisted Deligne via AHSS", odd_sphere_deligne),
        ("CDGA identities", cdga_identities),
        ("property suites", property_suites),
        ("circle sign twist", circle_sign_twist),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
