use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::abelian::linalg::Q;
use crate::error::{Error, Result};

/// Exponents of the generators, in generator order. Odd generators have
/// exponent at most one.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Generator { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Rational combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Monomial, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }
}

/// Free graded-commutative algebra on finitely many generators of positive
/// degree with a differential given on generators. Computations that need a
/// finite basis work modulo the ideal of elements of degree above `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdga {
    gens: Vec<Generator>,
    d: Vec<Element>,
    cap: usize,
}

impl Cdga {
    /// Checks that `d` raises degree by one and squares to zero on generators.
    pub fn new(gens: Vec<Generator>, d: Vec<Element>, cap: usize) -> Result<Self> {
        if d.len() != gens.len() {
            return Err(Error::InvalidCdga(format!("{} differentials for {} generators", d.len(), gens.len())));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::InvalidCdga(format!("generator {} has degree 0", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidCdga(format!("generator {} declared twice", g.name)));
            }
        }
        let a = Cdga { gens, d, cap };
        for (i, g) in a.gens.iter().enumerate() {
            for (m, _) in a.d[i].terms() {
                if m.len() != a.gens.len() || a.gens.iter().zip(m).any(|(h, &e)| h.is_odd() && e > 1) {
                    return Err(Error::InvalidCdga(format!("d{} is not an element of the algebra", g.name)));
                }
                if a.degree(m) != g.degree + 1 {
                    return Err(Error::InvalidCdga(format!(
                        "d{} has a term of degree {}, expected {}",
                        g.name,
                        a.degree(m),
                        g.degree + 1
                    )));
                }
            }
            if !a.d(&a.d[i]).is_zero() {
                return Err(Error::InvalidCdga(format!("d(d{}) = {} is not zero", g.name, a.show(&a.d(&a.d[i])))));
            }
        }
        Ok(a)
    }

    pub fn with_cap(&self, cap: usize) -> Cdga {
        Cdga { cap, ..self.clone() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_differential(&self, i: usize) -> &Element {
        &self.d[i]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn unit(&self) -> Monomial {
        vec![0; self.gens.len()]
    }

    pub fn one(&self) -> Element {
        Element::monomial(self.unit(), Q::one())
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut m = self.unit();
        m[i] = 1;
        Element::monomial(m, Q::one())
    }

    pub fn degree(&self, m: &Monomial) -> usize {
        m.iter().zip(&self.gens).map(|(&e, g)| e as usize * g.degree).sum()
    }

    /// Degrees occurring in `x`.
    pub fn degrees(&self, x: &Element) -> Vec<usize> {
        let mut v: Vec<usize> = x.terms().map(|(m, _)| self.degree(m)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_even(&self, x: &Element) -> bool {
        self.degrees(x).iter().all(|d| d % 2 == 0)
    }

    pub fn is_odd(&self, x: &Element) -> bool {
        self.degrees(x).iter().all(|d| d % 2 == 1)
    }

    /// Product of monomials with its Koszul sign, or `None` if an odd
    /// generator repeats.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut out = a.clone();
        let mut negative = false;
        let mut odd_in_a_after = 0u32;
        // walk generators from the last one so that odd factors of `b` pass odd factors of `a` with larger index
        for i in (0..self.gens.len()).rev() {
            if self.gens[i].is_odd() {
                if a[i] + b[i] > 1 {
                    return None;
                }
                if b[i] == 1 && odd_in_a_after % 2 == 1 {
                    negative = !negative;
                }
                odd_in_a_after += a[i];
            }
            out[i] += b[i];
        }
        Some((out, negative))
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                if let Some((m, neg)) = self.mul_monomials(a, b) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &Element, n: u32) -> Element {
        (0..n).fold(self.one(), |acc, _| self.truncate(&self.mul(&acc, x)))
    }

    /// Drops the terms of degree above the cap.
    pub fn truncate(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            if self.degree(m) <= self.cap {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// `d` on a monomial, by the Leibniz rule over its factors in generator order.
    fn d_monomial(&self, m: &Monomial) -> Element {
        let mut factors = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                factors.push(i);
            }
        }
        let mut out = Element::zero();
        let mut prefix = self.one();
        let mut prefix_degree = 0;
        for (k, &i) in factors.iter().enumerate() {
            let suffix = factors[k + 1..].iter().fold(self.one(), |acc, &j| self.mul(&acc, &self.generator(j)));
            let term = self.mul(&self.mul(&prefix, &self.d[i]), &suffix);
            out = if prefix_degree % 2 == 1 { out.sub(&term) } else { out.add(&term) };
            prefix = self.mul(&prefix, &self.generator(i));
            prefix_degree += self.gens[i].degree;
        }
        out
    }

    /// The differential, computed exactly (no truncation).
    pub fn d(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out = out.add(&self.d_monomial(m).scale(c));
        }
        out
    }

    /// Monomials of degree `n`, in lexicographic exponent order.
    pub fn basis(&self, n: usize) -> Vec<Monomial> {
        fn rec(a: &Cdga, i: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if i == a.gens.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let g = &a.gens[i];
            let max = if g.is_odd() { 1 } else { left / g.degree };
            for e in 0..=max.min(left / g.degree) {
                cur[i] = e as u32;
                rec(a, i + 1, left - e * g.degree, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        rec(self, 0, n, &mut self.unit(), &mut out);
        out.sort();
        out
    }

    /// `x·y = (-1)^{|x||y|} y·x` on all pairs of basis monomials up to the cap.
    pub fn check_graded_commutativity(&self) -> bool {
        let all: Vec<Monomial> = (0..=self.cap).flat_map(|n| self.basis(n)).collect();
        all.iter().all(|a| {
            all.iter().all(|b| {
                let (x, y) = (Element::monomial(a.clone(), Q::one()), Element::monomial(b.clone(), Q::one()));
                let lhs = self.mul(&x, &y);
                let rhs = self.mul(&y, &x);
                if self.degree(a) * self.degree(b) % 2 == 1 {
                    lhs == rhs.neg()
                } else {
                    lhs == rhs
                }
            })
        })
    }

    /// `d(xy) = dx·y + (-1)^{|x|} x·dy` on pairs of basis monomials with
    /// product degree at most the cap.
    pub fn check_leibniz(&self) -> bool {
        let all: Vec<Monomial> = (0..=self.cap).flat_map(|n| self.basis(n)).collect();
        all.iter().all(|a| {
            all.iter().filter(|b| self.degree(a) + self.degree(b) <= self.cap).all(|b| {
                let (x, y) = (Element::monomial(a.clone(), Q::one()), Element::monomial(b.clone(), Q::one()));
                let lhs = self.d(&self.mul(&x, &y));
                let t = self.mul(&x, &self.d(&y));
                let rhs = self.mul(&self.d(&x), &y).add(&if self.degree(a) % 2 == 1 { t.neg() } else { t });
                lhs == rhs
            })
        })
    }

    /// `d² = 0` on all basis monomials up to the cap.
    pub fn check_square_zero(&self) -> bool {
        (0..=self.cap).flat_map(|n| self.basis(n)).all(|m| self.d(&self.d(&Element::monomial(m, Q::one()))).is_zero())
    }

    pub fn show(&self, x: &Element) -> String {
        Shown(self, x).to_string()
    }
}

struct Shown<'a>(&'a Cdga, &'a Element);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Shown(a, x) = self;
        if x.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in x.terms().enumerate() {
            let neg = c < &Q::zero();
            let c = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .iter()
                .zip(&a.gens)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
                .collect();
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn two_odd() -> Cdga {
        Cdga::new(vec![Generator::new("a", 1), Generator::new("b", 3)], vec![Element::zero(), Element::zero()], 6)
            .unwrap()
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = two_odd();
        let (x, y) = (a.generator(0), a.generator(1));
        assert_eq!(a.mul(&x, &y), a.mul(&y, &x).neg());
        assert!(a.mul(&x, &x).is_zero());
    }

    #[test]
    fn basis_counts() {
        let a =
            Cdga::new(vec![Generator::new("x", 2), Generator::new("y", 3)], vec![Element::zero(), Element::zero()], 8)
                .unwrap();
        let counts: Vec<usize> = (0..=8).map(|n| a.basis(n).len()).collect();
        assert_eq!(counts, vec![1, 0, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn differential_must_raise_degree() {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let mut bad = Element::zero();
        bad.add_term(vec![1, 0], q(1));
        assert!(matches!(Cdga::new(gens, vec![Element::zero(), bad], 6), Err(Error::InvalidCdga(_))));
    }

    #[test]
    fn leibniz_on_even_power() {
        // d(x²) = 2 x dx for x even
        let gens = vec![Generator::new("x", 2), Generator::new("z", 3)];
        let a = Cdga::new(gens, vec![Element::monomial(vec![0, 1], q(1)), Element::zero()], 9).unwrap();
        let x2 = a.pow(&a.generator(0), 2);
        assert_eq!(a.d(&x2), Element::monomial(vec![1, 1], q(2)));
        assert!(a.check_leibniz());
        assert!(a.check_graded_commutativity());
    }
}
