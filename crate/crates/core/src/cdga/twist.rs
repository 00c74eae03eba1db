use num_traits::{One, Zero};
use serde::Serialize;

use super::algebra::{Cdga, Element, Generator, Monomial};
use crate::abelian::linalg::{rank, rref, Q};
use crate::abelian::RatMatrix;
use crate::error::{Error, Result};

/// Minimal model of `S^n`: `Λ(x_n)` for odd `n`, `Λ(x_n, y_{2n-1})` with
/// `dy = x²` for even `n`. The cap is the sum of the generator degrees.
pub fn sullivan_sphere(n: usize) -> Result<Cdga> {
    if n == 0 {
        return Err(Error::InvalidCdga("sphere dimension must be positive".into()));
    }
    if n % 2 == 1 {
        return Cdga::new(vec![Generator::new("x", n)], vec![Element::zero()], n);
    }
    let gens = vec![Generator::new("x", n), Generator::new("y", 2 * n - 1)];
    let x2 = Element::monomial(vec![2, 0], Q::one());
    Cdga::new(gens, vec![Element::zero(), x2], 3 * n - 1)
}

/// Closed element of odd degree acting by multiplication in `d_H = d + H·`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistForm {
    pub element: Element,
    pub degrees: Vec<usize>,
}

impl TwistForm {
    pub fn new(a: &Cdga, h: Element) -> Result<Self> {
        if !a.is_odd(&h) {
            return Err(Error::NotOdd(format!("{} has degrees {:?}", a.show(&h), a.degrees(&h))));
        }
        let dh = a.d(&h);
        if !dh.is_zero() {
            return Err(Error::NotClosed(format!("d({}) = {}", a.show(&h), a.show(&dh))));
        }
        assert!(a.mul(&h, &h).is_zero(), "odd elements square to zero");
        Ok(TwistForm { degrees: a.degrees(&h), element: h })
    }

    pub fn zero() -> Self {
        TwistForm { element: Element::zero(), degrees: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CdgaCohomology {
    pub ev_dim: usize,
    pub odd_dim: usize,
}

/// `A` modulo the elements of degree above the cap and a complement of the
/// cocycles in the cap degree. This quotient complex has the cohomology of
/// `A` in all degrees up to the cap and nothing above, and it is a quotient
/// for `d + H·` as well since `H` has positive degree.
struct Truncation {
    basis: Vec<(usize, Element)>,
    index: std::collections::HashMap<Monomial, usize>,
}

impl Truncation {
    fn new(a: &Cdga) -> Self {
        let n = a.cap();
        let mut basis = Vec::new();
        let mut index = std::collections::HashMap::new();
        for deg in 0..n {
            for m in a.basis(deg) {
                index.insert(m.clone(), basis.len());
                basis.push((deg, Element::monomial(m, Q::one())));
            }
        }
        let top = a.basis(n);
        let above = a.basis(n + 1);
        let col = |m: &Monomial| -> Vec<Q> {
            let dm = a.d(&Element::monomial(m.clone(), Q::one()));
            above.iter().map(|b| dm.coefficient(b)).collect()
        };
        let cols: Vec<Vec<Q>> = top.iter().map(col).collect();
        let dtop = RatMatrix::from_cols(&cols, above.len());
        let cycles = rref(&crate::abelian::linalg::nullspace(&dtop), top.len());
        for (row, &p) in cycles.rows.iter().zip(&cycles.pivots) {
            index.insert(top[p].clone(), basis.len());
            let mut z = Element::zero();
            for (m, c) in top.iter().zip(row) {
                z = z.add(&Element::monomial(m.clone(), c.clone()));
            }
            basis.push((n, z));
        }
        Truncation { basis, index }
    }

    /// Coordinates of the image of `x` in the quotient.
    fn project(&self, x: &Element) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.basis.len()];
        for (m, c) in x.terms() {
            if let Some(&i) = self.index.get(m) {
                v[i] += c;
            }
        }
        v
    }

    fn matrix(&self, f: impl Fn(&Element) -> Element) -> RatMatrix {
        let cols: Vec<Vec<Q>> = self.basis.iter().map(|(_, b)| self.project(&f(b))).collect();
        RatMatrix::from_cols(&cols, self.basis.len())
    }
}

fn twisted_differential(a: &Cdga, h: &Element, x: &Element) -> Element {
    a.d(x).add(&a.mul(h, x))
}

/// Dimensions of the even and odd cohomology of `(A, d + H·)` over `Q`,
/// computed on the truncation of `A` at its cap. Fails unless `H` is odd and
/// closed.
pub fn twisted_cohomology(a: &Cdga, h: &Element) -> Result<CdgaCohomology> {
    let h = TwistForm::new(a, h.clone())?;
    let t = Truncation::new(a);
    let dh = t.matrix(|x| twisted_differential(a, &h.element, x));
    assert!(dh.mul(&dh).is_zero(), "d_H squares to zero for closed odd H");
    let ev: Vec<usize> = (0..t.basis.len()).filter(|&i| t.basis[i].0.is_multiple_of(2)).collect();
    let odd: Vec<usize> = (0..t.basis.len()).filter(|&i| t.basis[i].0 % 2 == 1).collect();
    let sub = |rows: &[usize], cols: &[usize]| {
        RatMatrix::from_fn(rows.len(), cols.len(), |r, c| dh.get(rows[r], cols[c]).clone())
    };
    let (r_eo, r_oe) = (rank(&sub(&odd, &ev)), rank(&sub(&ev, &odd)));
    Ok(CdgaCohomology { ev_dim: ev.len() - r_eo - r_oe, odd_dim: odd.len() - r_eo - r_oe })
}

/// `Σ x^j / j!`, truncated at the cap. `x` must have no constant term.
fn exp_series(a: &Cdga, x: &Element) -> Element {
    assert!(x.coefficient(&a.unit()).is_zero());
    let mut out = a.one();
    let mut term = a.one();
    let mut j = 1u64;
    loop {
        term = a.truncate(&a.mul(&term, x)).scale(&Q::new(1.into(), j.into()));
        if term.is_zero() {
            return out;
        }
        out = out.add(&term);
        j += 1;
    }
}

/// `e^B`, acting by multiplication. `B` must be even without constant term.
pub fn exp_gauge(a: &Cdga, b: &Element) -> Result<Element> {
    if !a.is_even(b) {
        return Err(Error::NotEven(format!("{} has degrees {:?}", a.show(b), a.degrees(b))));
    }
    if !b.coefficient(&a.unit()).is_zero() {
        return Err(Error::NotEven(format!("{} has a constant term", a.show(b))));
    }
    Ok(exp_series(a, b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeReport {
    /// `e^B · e^{-B} = 1`.
    pub inverse: bool,
    /// `e^B ∘ d_H ∘ e^{-B} = d_{H - dB}` on every basis element.
    pub conjugation: bool,
    /// `dB = H`.
    pub trivializes: bool,
    /// `d ∘ e^B = e^B ∘ d_H` on every basis element.
    pub chain_map: bool,
    /// Twisted cohomology of `H` and `H - dB` agree.
    pub cohomology_invariant: bool,
}

impl GaugeReport {
    /// The identities that hold for every `B`, and the chain map exactly when `dB = H`.
    pub fn passed(&self) -> bool {
        self.inverse && self.conjugation && self.cohomology_invariant && self.chain_map == self.trivializes
    }
}

fn all_basis(a: &Cdga) -> Vec<Element> {
    (0..=a.cap()).flat_map(|n| a.basis(n)).map(|m| Element::monomial(m, Q::one())).collect()
}

pub fn verify_gauge(a: &Cdga, h: &Element, b: &Element) -> Result<GaugeReport> {
    let h = TwistForm::new(a, h.clone())?.element;
    let e = exp_gauge(a, b)?;
    let e_inv = exp_gauge(a, &b.neg())?;
    let db = a.d(b);
    let shifted = h.sub(&db);
    let basis = all_basis(a);
    let tr = |x: &Element| a.truncate(x);
    let inverse = tr(&a.mul(&e, &e_inv)) == a.one();
    let conjugation = basis.iter().all(|w| {
        let lhs = a.mul(&e, &twisted_differential(a, &h, &tr(&a.mul(&e_inv, w))));
        tr(&lhs) == tr(&twisted_differential(a, &shifted, w))
    });
    let chain_map = basis.iter().all(|w| tr(&a.d(&a.mul(&e, w))) == tr(&a.mul(&e, &twisted_differential(a, &h, w))));
    let trivializes = tr(&db) == tr(&h);
    let cohomology_invariant = twisted_cohomology(a, &h)? == twisted_cohomology(a, &shifted)?;
    Ok(GaugeReport { inverse, conjugation, trivializes, chain_map, cohomology_invariant })
}

/// `CS(a) = a + a·da/2! + a·da·da/3! + ...`, truncated at the cap.
pub fn cs_series(alg: &Cdga, a: &Element) -> Result<Element> {
    if !alg.is_odd(a) {
        return Err(Error::NotOdd(format!("{} has degrees {:?}", alg.show(a), alg.degrees(a))));
    }
    let da = alg.d(a);
    let mut out = Element::zero();
    let mut term = alg.truncate(a);
    let mut n = 1u64;
    while !term.is_zero() {
        out = out.add(&term);
        n += 1;
        term = alg.truncate(&alg.mul(&term, &da)).scale(&Q::new(1.into(), n.into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsReport {
    /// `d CS(a) = e^{da} - 1`.
    pub series: bool,
    /// `d(CS·ω) + CS·dω = (e^{da} - 1)·ω` on every basis element.
    pub homotopy: bool,
    /// Nonzero homogeneous pieces of `CS(a)` below the cap.
    pub terms: usize,
}

impl CsReport {
    pub fn passed(&self) -> bool {
        self.series && self.homotopy
    }
}

pub fn verify_cs_homotopy(alg: &Cdga, a: &Element) -> Result<CsReport> {
    let cs = cs_series(alg, a)?;
    let e = exp_series(alg, &alg.d(a)).sub(&alg.one());
    let tr = |x: &Element| alg.truncate(x);
    let series = tr(&alg.d(&cs)) == e;
    let homotopy = all_basis(alg)
        .iter()
        .all(|w| tr(&alg.d(&alg.mul(&cs, w)).add(&alg.mul(&cs, &alg.d(w)))) == tr(&alg.mul(&e, w)));
    Ok(CsReport { series, homotopy, terms: alg.degrees(&cs).len() })
}
