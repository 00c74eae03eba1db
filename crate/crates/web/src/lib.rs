//! Browser bindings. Each export takes plain strings or numbers and returns a
//! JSON string; the page in `www/` renders it.

use deligne_lab::abelian::DiffCohGroup;
use deligne_lab::ahss::{assemble_abutment, integral_ahss};
use deligne_lab::deligne::{check_diamond, diamond, periodic_deligne_direct, periodic_deligne_split, Parity};
use deligne_lab::simplicial::{parse_builder, SimplicialComplex};
use deligne_lab::twisted::{builtin_twist, twisted_periodic_cohomology};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest space the page accepts, in simplices. The dense rational
/// linear algebra gets slow in a browser tab beyond this.
const MAX_SIMPLICES: usize = 400;

fn space(expr: &str) -> Result<SimplicialComplex, String> {
    let k = parse_builder(expr).map_err(|e| e.to_string())?;
    let n: usize = k.f_vector().iter().sum();
    if n > MAX_SIMPLICES {
        return Err(format!("{expr} has {n} simplices; the demo stops at {MAX_SIMPLICES}"));
    }
    Ok(k)
}

fn parity(p: &str) -> Result<Parity, String> {
    p.parse().map_err(|_| format!("parity must be `ev` or `odd`, got `{p}`"))
}

fn text(g: &DiffCohGroup) -> String {
    g.to_string()
}

pub fn periodic_deligne_json(expr: &str, p: &str) -> Result<String, String> {
    let k = space(expr)?;
    let p = parity(p)?;
    let direct = periodic_deligne_direct(&k, p);
    let split = periodic_deligne_split(&k, p);
    Ok(json!({
        "space": expr,
        "f_vector": k.f_vector(),
        "parity": p.to_string(),
        "group": direct,
        "text": text(&direct),
        "split_agrees": direct == split,
    })
    .to_string())
}

/// Twisted periodic integral cohomology of `S^n` (n odd) twisted by `h`
/// times the top class, through the twisted complex and through the AHSS.
pub fn twisted_sphere_json(n: usize, h: i64) -> Result<String, String> {
    if n.is_multiple_of(2) || n > 5 {
        return Err("choose n = 1, 3 or 5".into());
    }
    let k = deligne_lab::simplicial::builders::sphere(n);
    let t = builtin_twist(&format!("h{n}_scale{h}"), &k).map_err(|e| e.to_string())?.expect("builtin name");
    let direct = twisted_periodic_cohomology(&k, &t).map_err(|e| e.to_string())?;
    let ss = integral_ahss(&k, &t).map_err(|e| e.to_string())?;
    let mut ahss = Vec::new();
    for p in [Parity::Ev, Parity::Odd] {
        let a = assemble_abutment(&ss, p).map_err(|e| e.to_string())?;
        ahss.push(a.resolved().map(text).unwrap_or_else(|| "ambiguous".into()));
    }
    let (ev, odd) = (direct.0.to_string(), direct.1.to_string());
    Ok(json!({
        "n": n,
        "h": h,
        "ev": ev,
        "odd": odd,
        "ahss_ev": ahss[0],
        "ahss_odd": ahss[1],
        "agree": ahss[0] == ev && ahss[1] == odd,
        "page": ss.last.r,
    })
    .to_string())
}

pub fn diamond_json(expr: &str, p: &str) -> Result<String, String> {
    let k = space(expr)?;
    let p = parity(p)?;
    let r = check_diamond(&diamond(&k, p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(json!({
        "space": expr,
        "parity": p.to_string(),
        "passed": r.passed(),
        "groups": r.groups.iter().map(|(n, g)| json!({"node": n, "text": text(g)})).collect::<Vec<_>>(),
        "sequences": r.sequences.iter().map(|(n, s)| json!({"name": n, "exact": s.is_exact()})).collect::<Vec<_>>(),
        "squares": r.squares.iter().map(|(n, ok)| json!({"name": n, "commutes": ok})).collect::<Vec<_>>(),
        "r_onto_closed": r.r_onto_closed,
        "r_onto_integral_periods": r.image_of_r_is_integral_periods,
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = periodicDeligne)]
pub fn periodic_deligne(expr: &str, parity: &str) -> Result<String, JsValue> {
    js(periodic_deligne_json(expr, parity))
}

#[wasm_bindgen(js_name = twistedSphere)]
pub fn twisted_sphere(n: u32, h: i32) -> Result<String, JsValue> {
    js(twisted_sphere_json(n as usize, h.into()))
}

#[wasm_bindgen(js_name = diamondCheck)]
pub fn diamond_check(expr: &str, parity: &str) -> Result<String, JsValue> {
    js(diamond_json(expr, parity))
}
