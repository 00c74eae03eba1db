//! Space descriptions.
//!
//! ```text
//! # explicit complex
//! vertices: [a, b, c, d]
//! facets: [[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
//! ```
//!
//! or a single builder expression such as `product(circle(3), sphere(2))`.
//! Builders: `point`, `simplex(n)`, `sphere(n)`, `circle(m)`, `cone(X)`,
//! `product(X, Y)`, `union(X, Y)` (disjoint).

use std::collections::HashMap;

use super::builders;
use super::complex::SimplicialComplex;
use crate::error::{Error, Result};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses `[x, y, ...]` into trimmed items; nested brackets are kept intact.
pub(crate) fn split_list(s: &str, line: usize) -> Result<Vec<String>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr(line, format!("expected a bracketed list, found `{s}`")))?;
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' | '(' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ']' | ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(line, "unbalanced brackets"));
                }
                cur.push(ch);
            }
            ',' if depth == 0 => {
                items.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(perr(line, "unbalanced brackets"));
    }
    if !cur.trim().is_empty() {
        items.push(cur.trim().to_string());
    } else if !items.is_empty() {
        return Err(perr(line, "trailing comma"));
    }
    Ok(items)
}

/// Removes comments and joins continuation lines until brackets balance.
/// Returns `(first line number, logical line)`.
pub(crate) fn logical_lines(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let mut cur: Option<(usize, String, i32)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let delta: i32 = line
            .chars()
            .map(|c| match c {
                '[' | '(' | '{' => 1,
                ']' | ')' | '}' => -1,
                _ => 0,
            })
            .sum();
        match cur.as_mut() {
            Some((_, s, depth)) => {
                s.push(' ');
                s.push_str(line);
                *depth += delta;
            }
            None => cur = Some((i + 1, line.to_string(), delta)),
        }
        if let Some((n, s, depth)) = cur.take() {
            if depth > 0 {
                cur = Some((n, s, depth));
            } else if depth < 0 {
                return Err(perr(n, "unbalanced brackets"));
            } else {
                out.push((n, s));
            }
        }
    }
    if let Some((n, _, _)) = cur {
        return Err(perr(n, "unterminated bracket"));
    }
    Ok(out)
}

pub fn parse_builder(expr: &str) -> Result<SimplicialComplex> {
    parse_builder_at(expr.trim(), 1)
}

fn parse_builder_at(expr: &str, line: usize) -> Result<SimplicialComplex> {
    let expr = expr.trim();
    if expr == "point" || expr == "point()" {
        return Ok(builders::point());
    }
    let open = expr.find('(').ok_or_else(|| perr(line, format!("unknown builder `{expr}`")))?;
    let name = expr[..open].trim();
    let args_s = expr[open..].trim();
    if !args_s.ends_with(')') {
        return Err(perr(line, format!("missing `)` in `{expr}`")));
    }
    let args = split_list(&format!("[{}]", &args_s[1..args_s.len() - 1]), line)?;
    let int_arg = |args: &[String]| -> Result<usize> {
        if args.len() != 1 {
            return Err(perr(line, format!("`{name}` takes one integer argument")));
        }
        args[0].parse::<usize>().map_err(|_| perr(line, format!("`{}` is not a nonnegative integer", args[0])))
    };
    let two = |args: &[String]| -> Result<(SimplicialComplex, SimplicialComplex)> {
        if args.len() != 2 {
            return Err(perr(line, format!("`{name}` takes two spaces")));
        }
        Ok((parse_builder_at(&args[0], line)?, parse_builder_at(&args[1], line)?))
    };
    match name {
        "sphere" => {
            let n = int_arg(&args)?;
            if n == 0 {
                return Err(perr(line, "sphere(n) needs n >= 1"));
            }
            Ok(builders::sphere(n))
        }
        "simplex" => Ok(builders::simplex(int_arg(&args)?)),
        "circle" => builders::circle(int_arg(&args)?).map_err(|e| perr(line, e.to_string())),
        "cone" => {
            if args.len() != 1 {
                return Err(perr(line, "`cone` takes one space"));
            }
            Ok(builders::cone(&parse_builder_at(&args[0], line)?))
        }
        "product" => {
            let (a, b) = two(&args)?;
            Ok(builders::product(&a, &b))
        }
        "union" => {
            let (a, b) = two(&args)?;
            Ok(builders::disjoint_union(&a, &b))
        }
        _ => Err(perr(line, format!("unknown builder `{name}`"))),
    }
}

/// Parses a space description file.
pub fn parse_space(text: &str) -> Result<SimplicialComplex> {
    let lines = logical_lines(text)?;
    let mut vertices: Option<(usize, Vec<String>)> = None;
    let mut facets: Option<(usize, Vec<String>)> = None;
    let mut builder: Option<(usize, String)> = None;
    for (n, line) in lines {
        if let Some(rest) = line.strip_prefix("vertices:") {
            if vertices.is_some() {
                return Err(perr(n, "duplicate `vertices:`"));
            }
            vertices = Some((n, split_list(rest, n)?));
        } else if let Some(rest) = line.strip_prefix("facets:") {
            if facets.is_some() {
                return Err(perr(n, "duplicate `facets:`"));
            }
            facets = Some((n, split_list(rest, n)?));
        } else if let Some(rest) = line.strip_prefix("space:") {
            builder = Some((n, rest.trim().to_string()));
        } else if builder.is_none() && vertices.is_none() && facets.is_none() {
            builder = Some((n, line));
        } else {
            return Err(perr(n, format!("unexpected line `{line}`")));
        }
    }
    match (builder, vertices, facets) {
        (Some((n, b)), None, None) => parse_builder_at(&b, n),
        (Some((n, _)), _, _) => Err(perr(n, "a builder expression cannot be combined with vertices/facets")),
        (None, Some((vn, vs)), Some((fln, fs))) => {
            let mut pos = HashMap::new();
            for (i, v) in vs.iter().enumerate() {
                if v.is_empty() {
                    return Err(perr(vn, "empty vertex label"));
                }
                if pos.insert(v.clone(), i).is_some() {
                    return Err(perr(vn, format!("duplicate vertex `{v}`")));
                }
            }
            let mut idx_facets = Vec::with_capacity(fs.len());
            for f in fs {
                let items = split_list(&f, fln)?;
                if items.is_empty() {
                    return Err(perr(fln, "empty facet"));
                }
                let mut idx = Vec::with_capacity(items.len());
                for it in items {
                    let i = pos.get(&it).ok_or_else(|| perr(fln, format!("facet uses undeclared vertex `{it}`")))?;
                    idx.push(*i);
                }
                idx_facets.push(idx);
            }
            SimplicialComplex::from_facets(vs, &idx_facets).map_err(|e| perr(fln, e.to_string()))
        }
        (None, Some((n, _)), None) => Err(perr(n, "missing `facets:`")),
        (None, None, Some((n, _))) => Err(perr(n, "missing `vertices:`")),
        (None, None, None) => Err(perr(0, "empty space description")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_tetrahedron_boundary() {
        let k = parse_space("vertices: [a, b, c, d]\nfacets: [[a,b,c],[a,b,d],\n  [a,c,d],[b,c,d]]\n").unwrap();
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn builder_expression() {
        let k = parse_space("# torus\nproduct(circle(3), circle(4))").unwrap();
        assert_eq!(k.euler_characteristic(), 0);
    }

    #[test]
    fn rejects_undeclared_vertex() {
        assert!(matches!(parse_space("vertices: [a, b]\nfacets: [[a, c]]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rejects_unbalanced() {
        assert!(parse_space("vertices: [a, b]\nfacets: [[a, b]").is_err());
        assert!(parse_space("sphere(2").is_err());
    }
}
