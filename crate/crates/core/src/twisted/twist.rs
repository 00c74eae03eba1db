//! Twist data and the twist description format.
//!
//! ```text
//! kind: integral
//! degree: 3
//! cochain: {[a, b, c, d]: 2}
//! ```
//!
//! Differential twists give `c:`, `k:` and `omega:` maps instead of `cochain:`;
//! sign twists list the edges carrying `-1` in `cochain:`. Simplices are
//! written with vertex labels; a non-increasing vertex order flips the sign of
//! the coefficient.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::linalg::Q;
use crate::deligne::cochain::delta_q;
use crate::deligne::{db_cup, DiffCochain};
use crate::error::{Error, Result};
use crate::simplicial::parser::{logical_lines, split_list};
use crate::simplicial::{coboundary, cup, SignCocycle, SimplicialComplex, SimplicialMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Sign(SignCocycle),
    /// Integral cocycle of odd degree.
    Integral {
        degree: usize,
        cochain: Vec<BigInt>,
    },
    /// Deligne cocycle of odd degree and equal weight.
    Differential(DiffCochain),
}

/// `h ∪ h` or `ĥ · ĥ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Integral { degree: usize, cochain: Vec<BigInt> },
    Differential(DiffCochain),
}

impl Obstruction {
    pub fn nonzero_count(&self) -> usize {
        match self {
            Obstruction::Integral { cochain, .. } => cochain.iter().filter(|x| !x.is_zero()).count(),
            Obstruction::Differential(x) => {
                x.c.iter().filter(|v| !v.is_zero()).count()
                    + x.k.iter().filter(|v| !v.is_zero()).count()
                    + x.omega.iter().filter(|v| !v.is_zero()).count()
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }
}

fn first_nonzero_simplex(k: &SimplicialComplex, d: usize, v: &[Q]) -> Option<String> {
    v.iter().position(|x| !x.is_zero()).map(|i| k.label_of(&k.simplices(d)[i]))
}

impl Twist {
    pub fn integral(k: &SimplicialComplex, degree: usize, cochain: Vec<BigInt>) -> Result<Self> {
        if degree.is_multiple_of(2) {
            return Err(Error::DegreeMismatch(format!("integral twist of even degree {degree}")));
        }
        if cochain.len() != k.count(degree) {
            return Err(Error::DegreeMismatch(format!(
                "{} coefficients for {} simplices of dimension {degree}",
                cochain.len(),
                k.count(degree)
            )));
        }
        let dc = coboundary(k, degree).apply(&cochain);
        if let Some(i) = dc.iter().position(|x| !x.is_zero()) {
            return Err(Error::NotACocycle(format!(
                "coboundary of the twist is nonzero on {}",
                k.label_of(&k.simplices(degree + 1)[i])
            )));
        }
        Ok(Twist::Integral { degree, cochain })
    }

    pub fn differential(k: &SimplicialComplex, h: DiffCochain) -> Result<Self> {
        if h.degree.is_multiple_of(2) {
            return Err(Error::DegreeMismatch(format!("differential twist of even degree {}", h.degree)));
        }
        if h.weight != h.degree {
            return Err(Error::WeightMismatch(format!("twist of degree {} has weight {}", h.degree, h.weight)));
        }
        let d = h.differential(k);
        if let Some(i) = d.c.iter().position(|x| !x.is_zero()) {
            let s = k.label_of(&k.simplices(h.degree + 1)[i]);
            return Err(Error::NotACocycle(format!("δc is nonzero on {s}")));
        }
        if let Some(s) = first_nonzero_simplex(k, h.degree, &d.k) {
            return Err(Error::NotACocycle(format!("ω - c - δk is nonzero on {s}")));
        }
        if let Some(s) = first_nonzero_simplex(k, h.degree + 1, &d.omega) {
            return Err(Error::NotACocycle(format!("δω is nonzero on {s}")));
        }
        Ok(Twist::Differential(h))
    }

    pub fn degree(&self) -> usize {
        match self {
            Twist::Sign(_) => 1,
            Twist::Integral { degree, .. } => *degree,
            Twist::Differential(h) => h.degree,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Twist::Sign(_) => "sign",
            Twist::Integral { .. } => "integral",
            Twist::Differential(_) => "differential",
        }
    }

    /// Underlying topological twist of a differential twist; integral twists are returned as is.
    pub fn underlying_integral(&self) -> Option<Twist> {
        match self {
            Twist::Sign(_) => None,
            Twist::Integral { .. } => Some(self.clone()),
            Twist::Differential(h) => Some(Twist::Integral { degree: h.degree, cochain: h.c.clone() }),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Twist::Sign(e) => e.is_trivial(),
            Twist::Integral { cochain, .. } => cochain.iter().all(|x| x.is_zero()),
            Twist::Differential(h) => h.is_zero(),
        }
    }

    /// Pullback along a simplicial map into the base of the twist.
    pub fn pullback(&self, f: &SimplicialMap) -> Twist {
        match self {
            Twist::Sign(e) => {
                let values = f
                    .source
                    .simplices(1)
                    .iter()
                    .map(|s| {
                        let (a, b) = (f.vertex_image(s[0]), f.vertex_image(s[1]));
                        if a == b {
                            1
                        } else {
                            e.sign(&f.target, a, b)
                        }
                    })
                    .collect();
                Twist::Sign(SignCocycle::new(&f.source, values).expect("pullback of a cocycle"))
            }
            Twist::Integral { degree, cochain } => {
                Twist::Integral { degree: *degree, cochain: f.pullback(cochain, *degree) }
            }
            Twist::Differential(h) => {
                let m = h.degree;
                let pr = |v: &[Q], d: usize| f.pullback_matrix(d).to_rational().apply(v);
                Twist::Differential(DiffCochain {
                    weight: h.weight,
                    degree: m,
                    c: f.pullback(&h.c, m),
                    k: if m == 0 { Vec::new() } else { pr(&h.k, m - 1) },
                    omega: pr(&h.omega, m),
                })
            }
        }
    }

    pub fn restrict(&self, k: &SimplicialComplex, sub: &SimplicialComplex) -> Result<Twist> {
        Ok(self.pullback(&SimplicialMap::inclusion(sub, k)?))
    }
}

/// `h ∪ h` (integral) or `ĥ ·_DB ĥ` (differential); `None` for sign twists.
pub fn obstruction(k: &SimplicialComplex, h: &Twist) -> Option<Obstruction> {
    match h {
        Twist::Sign(_) => None,
        Twist::Integral { degree, cochain } => {
            let d = *degree;
            let sq = if 2 * d > k.dim() { Vec::new() } else { cup(k, cochain, d, cochain, d) };
            Some(Obstruction::Integral { degree: 2 * d, cochain: sq })
        }
        Twist::Differential(x) => Some(Obstruction::Differential(db_cup(k, x, x).expect("validated twist"))),
    }
}

fn top_indicator(k: &SimplicialComplex, d: usize, scale: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); k.count(d)];
    if let Some(last) = v.last_mut() {
        *last = BigInt::from(scale);
    }
    v
}

/// Builtin twists: `h{d}_scale{n}` (integral), `dh{d}_scale{n}` (differential)
/// and `sign_edge` (last edge negative). Integral data of degree `d = dim K`
/// is `n` times the indicator of the last `d`-simplex; above the dimension
/// the integral part vanishes and the differential twist carries
/// `n` times the indicator of the last `(d-1)`-simplex as its `k`.
pub fn builtin_twist(name: &str, k: &SimplicialComplex) -> Result<Option<Twist>> {
    if name == "sign_edge" {
        let n = k.count(1);
        if n == 0 {
            return Err(Error::InvalidSimplex("`sign_edge` needs an edge".into()));
        }
        let mut values = vec![1i8; n];
        values[n - 1] = -1;
        return Ok(Some(Twist::Sign(SignCocycle::new(k, values)?)));
    }
    let (diff, rest) = match name.strip_prefix("dh") {
        Some(r) => (true, r),
        None => match name.strip_prefix('h') {
            Some(r) => (false, r),
            None => return Ok(None),
        },
    };
    let Some((d, n)) = rest.split_once("_scale") else {
        return Ok(None);
    };
    let (Ok(d), Ok(n)) = (d.parse::<usize>(), n.parse::<i64>()) else {
        return Ok(None);
    };
    if d % 2 == 0 {
        return Err(Error::DegreeMismatch(format!("twist degree {d} is even")));
    }
    if d < k.dim() {
        return Err(Error::DegreeMismatch(format!(
            "builtin twists live in the top degree {}; give degree-{d} data in a twist file",
            k.dim()
        )));
    }
    let c = if d == k.dim() { top_indicator(k, d, n) } else { vec![BigInt::zero(); k.count(d)] };
    if !diff {
        return Ok(Some(Twist::integral(k, d, c)?));
    }
    let (kk, omega) = if d == k.dim() {
        (vec![Q::zero(); k.count(d - 1)], c.iter().map(|x| Q::from_integer(x.clone())).collect())
    } else {
        let kk: Vec<Q> = top_indicator(k, d - 1, n).into_iter().map(Q::from_integer).collect();
        let om = if d - 1 <= k.dim() { delta_q(k, &kk, d - 1) } else { Vec::new() };
        (kk, om)
    };
    let omega = if omega.len() == k.count(d) { omega } else { vec![Q::zero(); k.count(d)] };
    Ok(Some(Twist::differential(k, DiffCochain { weight: d, degree: d, c, k: kk, omega })?))
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses `{[a, b]: 2, [b, c]: -1/2}` into simplices of `k` with coefficients.
fn parse_cochain_map<T: FromStr + Zero + Clone + std::ops::Neg<Output = T>>(
    k: &SimplicialComplex,
    text: &str,
    degree: usize,
    line: usize,
) -> Result<Vec<T>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| perr(line, format!("expected a `{{simplex: value}}` map, found `{t}`")))?;
    let pos: HashMap<&str, usize> = k.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut out = vec![T::zero(); k.count(degree)];
    for item in split_list(&format!("[{inner}]"), line)? {
        let (key, val) = item.rsplit_once(':').ok_or_else(|| perr(line, format!("missing `:` in `{item}`")))?;
        let labels = split_list(key, line)?;
        if labels.len() != degree + 1 {
            return Err(perr(line, format!("simplex {key} does not have dimension {degree}")));
        }
        let mut verts = Vec::with_capacity(labels.len());
        for l in &labels {
            verts.push(*pos.get(l.as_str()).ok_or_else(|| perr(line, format!("unknown vertex `{l}` in {key}")))?);
        }
        // sort, tracking the permutation sign
        let mut odd = false;
        for i in 0..verts.len() {
            for j in 0..verts.len() - 1 - i {
                if verts[j] > verts[j + 1] {
                    verts.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        let idx = k
            .index_of(&verts)
            .ok_or_else(|| Error::InvalidSimplex(format!("{key} is not a simplex of the space (line {line})")))?;
        let v: T = val.trim().parse().map_err(|_| perr(line, format!("bad coefficient `{}`", val.trim())))?;
        out[idx] = if odd { -v } else { v };
    }
    Ok(out)
}

/// Parses a twist description (or a builtin twist name) for the space `k`.
pub fn parse_twist(text: &str, k: &SimplicialComplex) -> Result<Twist> {
    let trimmed = text.trim();
    if !trimmed.contains(':') {
        return builtin_twist(trimmed, k)?.ok_or_else(|| perr(1, format!("unknown builtin twist `{trimmed}`")));
    }
    let mut fields: HashMap<String, (usize, String)> = HashMap::new();
    for (n, line) in logical_lines(text)? {
        let (key, val) =
            line.split_once(':').ok_or_else(|| perr(n, format!("expected `key: value`, found `{line}`")))?;
        let key = key.trim().to_string();
        if !["kind", "degree", "cochain", "c", "k", "omega"].contains(&key.as_str()) {
            return Err(perr(n, format!("unknown field `{key}`")));
        }
        if fields.insert(key.clone(), (n, val.trim().to_string())).is_some() {
            return Err(perr(n, format!("duplicate field `{key}`")));
        }
    }
    let (kl, kind) = fields.get("kind").cloned().ok_or_else(|| perr(1, "missing `kind:`"))?;
    let degree = match fields.get("degree") {
        Some((n, d)) => Some(d.parse::<usize>().map_err(|_| perr(*n, format!("bad degree `{d}`")))?),
        None => None,
    };
    let need = |name: &str| fields.get(name).cloned().ok_or_else(|| perr(kl, format!("missing `{name}:`")));
    match kind.as_str() {
        "sign" => {
            if degree.is_some_and(|d| d != 1) {
                return Err(perr(kl, "sign twists have degree 1"));
            }
            let (n, m) = need("cochain")?;
            let vals: Vec<BigInt> = parse_cochain_map(k, &m, 1, n)?;
            let values = vals
                .iter()
                .map(|v| {
                    if v.is_zero() {
                        Ok(1i8)
                    } else if *v == -BigInt::one() || v.is_one() {
                        Ok(if v.is_one() { 1 } else { -1 })
                    } else {
                        Err(perr(n, format!("sign values must be 1 or -1, found {v}")))
                    }
                })
                .collect::<Result<Vec<i8>>>()?;
            Ok(Twist::Sign(SignCocycle::new(k, values)?))
        }
        "integral" => {
            let d = degree.ok_or_else(|| perr(kl, "missing `degree:`"))?;
            let (n, m) = need("cochain")?;
            Twist::integral(k, d, parse_cochain_map(k, &m, d, n)?)
        }
        "differential" => {
            let d = degree.ok_or_else(|| perr(kl, "missing `degree:`"))?;
            if d == 0 {
                return Err(perr(kl, "differential twists have positive degree"));
            }
            let get = |name: &str, deg: usize| -> Result<Vec<Q>> {
                match fields.get(name) {
                    Some((n, m)) => parse_cochain_map(k, m, deg, *n),
                    None => Ok(vec![Q::zero(); k.count(deg)]),
                }
            };
            let c: Vec<BigInt> = match fields.get("c") {
                Some((n, m)) => parse_cochain_map(k, m, d, *n)?,
                None => vec![BigInt::zero(); k.count(d)],
            };
            let h = DiffCochain { weight: d, degree: d, c, k: get("k", d - 1)?, omega: get("omega", d)? };
            Twist::differential(k, h)
        }
        other => Err(perr(kl, format!("unknown twist kind `{other}`"))),
    }
}
