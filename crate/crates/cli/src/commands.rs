use std::path::Path;

use deligne_lab::abelian::{DiffCohGroup, FgAbGroup, ScalarKind};
use deligne_lab::ahss::{assemble_abutment, differential_ahss, integral_ahss, Abutment, SpectralSequence};
use deligne_lab::cdga::{parse_cdga, parse_element, sullivan_sphere, twisted_cohomology, Cdga, TwistForm};
use deligne_lab::checks::{run_suite, CheckOutcome, SUITES};
use deligne_lab::deligne::{
    check_diamond, diamond, diff_cohomology, periodic_deligne_direct, periodic_deligne_split, Parity, PeriodicDeligne,
};
use deligne_lab::simplicial::{
    integral_cohomology, parse_builder, parse_space, u1_cohomology, CochainComplex, SimplicialComplex,
};
use deligne_lab::twisted::{obstruction, parse_twist, twisted_sign_cohomology, Obstruction, Twist, TwistedComplex};
use serde_json::{json, Value};

use crate::report::{entry, Entry, Failure, FailureKind, Outcome};
use crate::{AhssArgs, CdgaArgs, CheckArgs, Coeff, CohomologyArgs, DeligneArgs, ParityArg, TwistedArgs, Via};

type Res = Result<Outcome, Failure>;

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Ev => Parity::Ev,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

fn read_file(path: &str) -> Result<Option<String>, Failure> {
    let p = Path::new(path);
    if !p.is_file() {
        return Ok(None);
    }
    std::fs::read_to_string(p).map(Some).map_err(|e| Failure::new(FailureKind::Parse, format!("{path}: {e}")))
}

fn located(source: &str, e: deligne_lab::error::Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{source}: {}", f.message);
    f
}

/// A space file, or a builder expression such as `product(sphere(1), sphere(2))`.
pub fn load_space(arg: &str) -> Result<SimplicialComplex, Failure> {
    match read_file(arg)? {
        Some(text) => parse_space(&text).map_err(|e| located(arg, e)),
        None => parse_builder(arg).map_err(|e| located(arg, e)),
    }
}

pub fn load_twist(arg: &str, k: &SimplicialComplex) -> Result<Twist, Failure> {
    match read_file(arg)? {
        Some(text) => parse_twist(&text, k).map_err(|e| located(arg, e)),
        None => parse_twist(arg, k).map_err(|e| located(arg, e)),
    }
}

fn outcome(suite: &str, case: impl Into<String>, passed: bool) -> CheckOutcome {
    CheckOutcome { suite: suite.into(), case: case.into(), passed, detail: String::new() }
}

fn space_echo(arg: &str, k: &SimplicialComplex) -> Value {
    json!({ "space": arg, "f_vector": k.f_vector() })
}

fn rational(g: &FgAbGroup) -> DiffCohGroup {
    DiffCohGroup::new(g.free_rank(), 0, 0, &[])
}

pub fn cohomology(a: &CohomologyArgs) -> Res {
    let k = load_space(&a.space)?;
    let mut out = Outcome { request: space_echo(&a.space, &k), ..Default::default() };
    out.request["coeff"] = json!(a.coeff);
    out.request["degree"] = json!(a.degree);
    out.request["periodic"] = json!(a.periodic);
    let groups: Vec<DiffCohGroup> = match a.coeff {
        Coeff::Z => {
            let c = CochainComplex::simplicial(&k, ScalarKind::Integer);
            out.checks.push(outcome("d2", "simplicial coboundary", c.is_square_zero()));
            integral_cohomology(&k).iter().map(FgAbGroup::to_diff).collect()
        }
        Coeff::Q => {
            let c = CochainComplex::simplicial(&k, ScalarKind::Rational);
            out.checks.push(outcome("d2", "simplicial coboundary", c.is_square_zero()));
            c.all_cohomology().iter().map(rational).collect()
        }
        Coeff::Qz => (0..=k.dim()).map(|n| u1_cohomology(&k, n)).collect(),
    };
    let label = match a.coeff {
        Coeff::Z => "Z",
        Coeff::Q => "Q",
        Coeff::Qz => "Q/Z",
    };
    out.results = match (a.degree, a.periodic) {
        (Some(n), _) => vec![entry(format!("H^{n}"), groups.get(n).cloned().unwrap_or_else(DiffCohGroup::zero))],
        (None, Some(p)) => {
            let p = Parity::from(p);
            let sum = groups.iter().skip(p.offset()).step_by(2).fold(DiffCohGroup::zero(), |a, g| a.direct_sum(g));
            vec![entry(format!("H^{p}"), sum)]
        }
        (None, None) => groups.into_iter().enumerate().map(|(n, g)| entry(format!("H^{n}"), g)).collect(),
    };
    out.provenance.push(format!("simplicial cochains with {label} coefficients"));
    Ok(out)
}

pub fn deligne(a: &DeligneArgs) -> Res {
    let k = load_space(&a.space)?;
    let mut out = Outcome { request: space_echo(&a.space, &k), ..Default::default() };
    out.request["weight"] = json!(a.weight);
    out.request["periodic"] = json!(a.periodic);
    out.request["check_diamond"] = json!(a.check_diamond);
    if let Some(n) = a.weight {
        out.results.push(entry(format!("weight {n}"), diff_cohomology(&k, n)));
        out.provenance.push("Deligne complex (c, k, ω) of one weight".into());
        return Ok(out);
    }
    let p = Parity::from(a.periodic.expect("clap requires --weight or --periodic"));
    let pd = PeriodicDeligne::new(&k, p);
    let s = pd.base();
    let sq = (s - 1..=s).all(|t| pd.differential(t + 1).mul(&pd.differential(t)).is_zero());
    out.checks.push(outcome("d2", format!("periodic Deligne complex {p}"), sq));
    let (direct, split) = (periodic_deligne_direct(&k, p), periodic_deligne_split(&k, p));
    out.checks.push(outcome("splitting", "direct sum over weights equals the periodic complex", direct == split));
    out.results.push(entry(p.to_string(), direct));
    out.provenance.push("periodic Deligne complex, cross-checked against the sum over weights".into());
    if a.check_diamond {
        let r = check_diamond(&diamond(&k, p)?)?;
        for (name, seq) in &r.sequences {
            out.checks.push(outcome("diamond", format!("{name} exact"), seq.is_exact()));
        }
        for (name, ok) in &r.squares {
            out.checks.push(outcome("diamond", format!("{name} commutes"), *ok));
        }
        out.checks.push(outcome(
            "diamond",
            "image of R is the closed cochains with integral periods",
            r.image_of_r_is_integral_periods,
        ));
        out.details = Some(json!({
            "diamond_groups": r.groups.iter().map(|(n, g)| json!({"label": n, "group": g})).collect::<Vec<_>>(),
            "r_onto_closed": r.r_onto_closed,
        }));
        if !r.passed() {
            return Err(Failure::new(FailureKind::CheckFailed, "the diamond check failed").with_partial(out));
        }
    }
    Ok(out)
}

fn obstruction_certificate(k: &SimplicialComplex, ob: &Obstruction) -> Value {
    let list = |d: usize, vals: Vec<String>| -> Vec<Value> {
        vals.into_iter()
            .enumerate()
            .filter(|(_, v)| v != "0")
            .map(|(i, v)| json!({"simplex": k.label_of(&k.simplices(d)[i]), "value": v}))
            .collect()
    };
    match ob {
        Obstruction::Integral { degree, cochain } => json!({
            "square": "h ∪ h",
            "degree": degree,
            "nonzero": list(*degree, cochain.iter().map(|x| x.to_string()).collect()),
        }),
        Obstruction::Differential(x) => json!({
            "square": "ĥ · ĥ",
            "degree": x.degree,
            "c": list(x.degree, x.c.iter().map(|v| v.to_string()).collect()),
            "k": list(x.degree - 1, x.k.iter().map(|v| v.to_string()).collect()),
            "omega": list(x.degree, x.omega.iter().map(|v| v.to_string()).collect()),
        }),
    }
}

fn obstructed(k: &SimplicialComplex, h: &Twist) -> Option<Failure> {
    let ob = obstruction(k, h)?;
    if ob.is_zero() {
        return None;
    }
    Some(
        Failure::new(
            FailureKind::Precondition,
            format!(
                "the twist squares to a nonzero cochain ({} nonzero {}), so d + h does not square to zero",
                ob.nonzero_count(),
                if ob.nonzero_count() == 1 { "entry" } else { "entries" }
            ),
        )
        .with_certificate(obstruction_certificate(k, &ob)),
    )
}

fn ahss_failure(e: deligne_lab::error::Error, k: &SimplicialComplex, h: &Twist) -> Failure {
    if let deligne_lab::error::Error::ObstructionNonzero { .. } = e {
        if let Some(f) = obstructed(k, h) {
            return f;
        }
    }
    Failure::from(e)
}

fn abutment_group(ss: &SpectralSequence, p: Parity) -> Result<DiffCohGroup, Failure> {
    match assemble_abutment(ss, p)? {
        Abutment::Resolved { group } => Ok(group),
        Abutment::Ambiguous { graded, candidates, exhaustive } => {
            Err(Failure::new(FailureKind::Ambiguous, format!("the {p} abutment is an unresolved extension"))
                .with_certificate(json!({
                    "graded": graded.iter().map(|(q, g)| json!({"p": q, "group": g})).collect::<Vec<_>>(),
                    "candidates": candidates,
                    "exhaustive": exhaustive,
                })))
        }
    }
}

/// Runs the AHSS for `h` and returns `(ev, odd)` abutments plus the sequences.
fn via_ahss(k: &SimplicialComplex, h: &Twist) -> Result<(Vec<Entry>, Vec<SpectralSequence>), Failure> {
    let seqs = match h {
        Twist::Integral { .. } => vec![integral_ahss(k, h)?],
        Twist::Differential(_) => [Parity::Ev, Parity::Odd]
            .into_iter()
            .map(|p| differential_ahss(k, Some(h), p).map_err(|e| ahss_failure(e, k, h)))
            .collect::<Result<_, _>>()?,
        Twist::Sign(_) => {
            return Err(Failure::new(
                FailureKind::Precondition,
                "the spectral sequences take integral or differential twists",
            )
            .with_hint("sign twists are computed directly: drop `--via ahss`"))
        }
    };
    let mut groups = Vec::new();
    for p in [Parity::Ev, Parity::Odd] {
        let ss = seqs.iter().find(|s| s.total_of(p).is_some()).expect("one sequence per parity");
        groups.push(entry(p.to_string(), abutment_group(ss, p)?));
    }
    Ok((groups, seqs))
}

fn via_direct(k: &SimplicialComplex, h: &Twist) -> Result<(Vec<Entry>, CheckOutcome), Failure> {
    if let Some(f) = obstructed(k, h) {
        return Err(f.with_hint("use `--via ahss` to compute from the spectral sequence"));
    }
    let (tc, (ev, odd)) = match h {
        Twist::Sign(eps) => {
            let tc = TwistedComplex::sign(k, eps)?;
            let (ev, odd) = twisted_sign_cohomology(k, eps)?;
            (tc, (ev.to_diff(), odd.to_diff()))
        }
        Twist::Integral { .. } => {
            let tc = TwistedComplex::integral(k, Some(h))?;
            let (ev, odd) = tc.integral_groups().expect("integral complex");
            (tc, (ev.to_diff(), odd.to_diff()))
        }
        Twist::Differential(_) => {
            let tc = TwistedComplex::deligne(k, Some(h))?;
            let g = tc.cohomology();
            (tc, g)
        }
    };
    let d2 = outcome("d2", format!("twisted complex ({} twist)", h.kind()), tc.is_square_zero());
    Ok((vec![entry("ev", ev), entry("odd", odd)], d2))
}

fn ahss_checks(seqs: &[SpectralSequence]) -> Vec<CheckOutcome> {
    seqs.iter()
        .map(|ss| {
            let label = ss.report.abutments.iter().map(|(p, _)| p.to_string()).collect::<Vec<_>>().join("/");
            outcome("d2", format!("AHSS page differentials ({label})"), ss.report.d_squared_zero)
        })
        .collect()
}

pub fn twisted(a: &TwistedArgs) -> Res {
    let k = load_space(&a.space)?;
    let h = load_twist(&a.twist, &k)?;
    let mut out = Outcome { request: space_echo(&a.space, &k), ..Default::default() };
    out.request["twist"] = json!({"source": a.twist, "kind": h.kind(), "degree": h.degree()});
    out.request["via"] = json!(a.via);
    let via = match a.via {
        Via::Auto if obstructed(&k, &h).is_some() => {
            out.provenance.push("the twist does not square to zero on cochains; routed to the AHSS".into());
            Via::Ahss
        }
        Via::Auto => Via::Direct,
        v => v,
    };
    match via {
        Via::Direct => {
            let (groups, d2) = via_direct(&k, &h)?;
            out.results = groups;
            out.checks.push(d2);
            out.provenance.push("direct twisted complex".into());
        }
        Via::Ahss => {
            let (groups, seqs) = via_ahss(&k, &h)?;
            out.results = groups;
            out.checks = ahss_checks(&seqs);
            out.provenance.push(format!("AHSS abutment, converged at E_{}", seqs[0].last.r));
        }
        Via::Both => {
            let (direct, d2) = via_direct(&k, &h)?;
            let (spectral, seqs) = via_ahss(&k, &h)?;
            out.checks.push(d2);
            out.checks.extend(ahss_checks(&seqs));
            let agree = direct.iter().zip(&spectral).all(|(x, y)| x.group == y.group);
            out.checks.push(outcome("cross-validation", "direct and AHSS descriptors agree", agree));
            out.provenance.push("direct twisted complex".into());
            out.provenance.push(format!("AHSS abutment, converged at E_{}", seqs[0].last.r));
            if !agree {
                let cert = json!({"direct": direct, "ahss": spectral});
                out.results = direct;
                return Err(Failure::new(FailureKind::Mismatch, "the direct and AHSS paths disagree")
                    .with_certificate(cert)
                    .with_partial(out));
            }
            out.results = direct;
        }
        Via::Auto => unreachable!("resolved above"),
    }
    Ok(out)
}

pub fn ahss(a: &AhssArgs) -> Res {
    let k = load_space(&a.space)?;
    let h = load_twist(&a.twist, &k)?;
    let mut out = Outcome { request: space_echo(&a.space, &k), ..Default::default() };
    out.request["twist"] = json!({"source": a.twist, "kind": h.kind(), "degree": h.degree()});
    out.request["pages"] = json!(a.pages);
    let seqs = match &h {
        Twist::Integral { .. } => vec![integral_ahss(&k, &h)?],
        Twist::Differential(_) => [Parity::Ev, Parity::Odd]
            .into_iter()
            .map(|p| differential_ahss(&k, Some(&h), p).map_err(|e| ahss_failure(e, &k, &h)))
            .collect::<Result<_, _>>()?,
        Twist::Sign(_) => {
            return Err(Failure::new(
                FailureKind::Precondition,
                "the spectral sequences take integral or differential twists",
            ))
        }
    };
    out.checks = ahss_checks(&seqs);
    let details: Vec<Value> = seqs
        .iter()
        .map(|ss| {
            let mut d = json!({ "report": ss.report, "forms_extension": ss.forms_extension });
            if a.pages {
                d["e2"] = json!(ss.e2.summary());
                d["last"] = json!(ss.last.summary());
            }
            d
        })
        .collect();
    out.details = Some(json!(details));
    out.provenance.push(format!("skeletal filtration, pages through E_{}", seqs[0].last.r));
    for p in [Parity::Ev, Parity::Odd] {
        let ss = seqs.iter().find(|s| s.total_of(p).is_some()).expect("one sequence per parity");
        match abutment_group(ss, p) {
            Ok(g) => out.results.push(entry(p.to_string(), g)),
            Err(f) => return Err(f.with_partial(out)),
        }
    }
    Ok(out)
}

fn load_model(arg: &str) -> Result<(Cdga, bool), Failure> {
    if let Some(text) = read_file(arg)? {
        let explicit_cap = text.lines().any(|l| l.trim_start().starts_with("cap:"));
        return Ok((parse_cdga(&text).map_err(|e| located(arg, e))?, explicit_cap));
    }
    let n = arg
        .trim()
        .strip_prefix("sphere(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|n| n.trim().parse::<usize>().ok())
        .ok_or_else(|| Failure::new(FailureKind::Parse, format!("`{arg}` is neither a model file nor `sphere(n)`")))?;
    Ok((sullivan_sphere(n)?, false))
}

pub fn cdga(a: &CdgaArgs) -> Res {
    let (mut alg, explicit_cap) = load_model(&a.model)?;
    let mut out = Outcome { request: json!({ "model": a.model, "twist_form": a.twist_form }), ..Default::default() };
    let h = match &a.twist_form {
        Some(expr) => {
            let h = TwistForm::new(&alg, parse_element(&alg, expr)?)?;
            if !explicit_cap {
                let top = h.degrees.iter().copied().max().unwrap_or(0);
                alg = alg.with_cap(alg.cap() + 2 * top);
            }
            Some(parse_element(&alg, expr)?)
        }
        None => None,
    };
    out.checks.push(outcome("d2", "d² = 0 on the basis", alg.check_square_zero()));
    out.checks.push(outcome("leibniz", "Leibniz rule on products", alg.check_leibniz()));
    out.checks.push(outcome("leibniz", "graded commutativity", alg.check_graded_commutativity()));
    let untwisted = twisted_cohomology(&alg, &deligne_lab::cdga::Element::zero())?;
    let q = |n: usize| DiffCohGroup::new(n, 0, 0, &[]);
    match &h {
        Some(h) => {
            let c = twisted_cohomology(&alg, h)?;
            out.results = vec![entry("ev", q(c.ev_dim)), entry("odd", q(c.odd_dim))];
        }
        None => out.results = vec![entry("ev", q(untwisted.ev_dim)), entry("odd", q(untwisted.odd_dim))],
    }
    out.details = Some(json!({
        "cap": alg.cap(),
        "generators": alg.generators().iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect::<Vec<_>>(),
        "untwisted": untwisted,
    }));
    out.provenance.push(format!("rational model truncated above degree {}", alg.cap()));
    Ok(out)
}

pub fn check(a: &CheckArgs) -> Res {
    let Some(outcomes) = run_suite(&a.suite)? else {
        return Err(Failure::usage(format!(
            "unknown suite `{}`; expected one of {} or all",
            a.suite,
            SUITES.join(", ")
        )));
    };
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let out = Outcome {
        request: json!({ "suite": a.suite }),
        checks: outcomes,
        provenance: vec!["built-in invariant suites".into()],
        ..Outcome::default()
    };
    if failed > 0 {
        return Err(Failure::new(FailureKind::CheckFailed, format!("{failed} checks failed")).with_partial(out));
    }
    Ok(out)
}
