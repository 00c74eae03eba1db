use super::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn point() -> SimplicialComplex {
    SimplicialComplex::from_facets(numbered(1), &[vec![0]]).expect("point")
}

/// The full `n`-simplex.
pub fn simplex(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_facets(numbered(n + 1), &[(0..=n).collect()]).expect("simplex")
}

/// The boundary of the `(n+1)`-simplex.
pub fn sphere(n: usize) -> SimplicialComplex {
    let facets: Vec<Simplex> = (0..=n + 1).map(|skip| (0..=n + 1).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::from_facets(numbered(n + 2), &facets).expect("sphere")
}

/// Polygon with `m >= 3` vertices.
pub fn circle(m: usize) -> Result<SimplicialComplex> {
    if m < 3 {
        return Err(Error::InvalidSimplex(format!("a circle needs at least 3 vertices, got {m}")));
    }
    let facets: Vec<Simplex> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    SimplicialComplex::from_facets(numbered(m), &facets)
}

/// Cone with a new apex placed last in the vertex order.
pub fn cone(k: &SimplicialComplex) -> SimplicialComplex {
    let apex = k.labels().len();
    let mut labels = k.labels().to_vec();
    labels.push("apex".into());
    let facets: Vec<Simplex> = k
        .facets()
        .into_iter()
        .map(|mut f| {
            f.push(apex);
            f
        })
        .collect();
    SimplicialComplex::from_facets(labels, &facets).expect("cone")
}

/// Staircase triangulation of `K × L`. Vertex `(i, j)` has index `i * |L| + j`,
/// so the vertex order is lexicographic.
pub fn product(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let nl = l.labels().len();
    let mut labels = Vec::with_capacity(k.labels().len() * nl);
    for a in k.labels() {
        for b in l.labels() {
            labels.push(format!("({a},{b})"));
        }
    }
    let mut facets = Vec::new();
    for s in k.facets() {
        for t in l.facets() {
            staircases(&s, &t, nl, &mut facets);
        }
    }
    SimplicialComplex::from_facets(labels, &facets).expect("product")
}

fn staircases(s: &[usize], t: &[usize], nl: usize, out: &mut Vec<Simplex>) {
    fn walk(s: &[usize], t: &[usize], i: usize, j: usize, nl: usize, cur: &mut Vec<usize>, out: &mut Vec<Simplex>) {
        cur.push(s[i] * nl + t[j]);
        if i + 1 == s.len() && j + 1 == t.len() {
            out.push(cur.clone());
        }
        if i + 1 < s.len() {
            walk(s, t, i + 1, j, nl, cur, out);
        }
        if j + 1 < t.len() {
            walk(s, t, i, j + 1, nl, cur, out);
        }
        cur.pop();
    }
    walk(s, t, 0, 0, nl, &mut Vec::new(), out);
}

pub fn disjoint_union(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let off = k.labels().len();
    let mut labels: Vec<String> = k.labels().iter().map(|a| format!("{a}.0")).collect();
    labels.extend(l.labels().iter().map(|b| format!("{b}.1")));
    let mut facets = k.facets();
    facets.extend(l.facets().into_iter().map(|f| f.into_iter().map(|v| v + off).collect()));
    SimplicialComplex::from_facets(labels, &facets).expect("disjoint union")
}

/// Closed stars of the first two vertices of a sphere `∂Δ^{n+1}`: two
/// contractible pieces covering it, meeting in a copy of `S^{n-1}`.
pub fn hemispheres(k: &SimplicialComplex) -> (SimplicialComplex, SimplicialComplex) {
    (k.closed_star(&[0]), k.closed_star(&[1]))
}
