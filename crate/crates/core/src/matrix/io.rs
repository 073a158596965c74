//! Text format for matrix bundles.
//!
//! ```text
//! size 2
//! fiber s
//! 0 1
//! 0 0
//!
//! u s
//! 0 1+0i
//! 0 0
//! ```
//!
//! `fiber <name>` is followed by one or more blank-line-separated matrix
//! blocks spanning `A_name`; `u <name>` by exactly one block. Entries are
//! complex numbers such as `1`, `-0.5`, `2i` or `1-2i`. Fibers not listed
//! are zero. Regularity data is present iff some `u` section is.

use std::fmt::Write;

use num_complex::Complex64;

use super::fell::{ConcreteFellBundle, RegularityData};
use super::models::MatrixModel;
use super::subspace::{CMatrix, MatrixSubspace, MAX_AMBIENT};
use crate::error::{Error, Result};
use crate::semigroup::InverseSemigroup;

enum Section {
    Fiber(usize),
    U(usize),
}

struct Block {
    section: Section,
    line: usize,
    rows: Vec<Vec<Complex64>>,
}

fn parse_entry(tok: &str, line: usize) -> Result<Complex64> {
    tok.parse::<Complex64>().map_err(|_| Error::parse(line, format!("bad matrix entry `{tok}`")))
}

fn to_matrix(n: usize, b: &Block) -> Result<CMatrix> {
    if b.rows.len() != n || b.rows.iter().any(|r| r.len() != n) {
        return Err(Error::parse(b.line, format!("matrix block is not {n}x{n}")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| b.rows[i][j]))
}

/// Parses a bundle over `g` with subspace tolerance `tol`.
pub fn parse_bundle(text: &str, g: InverseSemigroup, tol: f64) -> Result<MatrixModel> {
    let mut n: Option<usize> = None;
    let mut blocks: Vec<Block> = Vec::new();
    let mut current: Option<Section> = None;
    let mut open = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            open = false;
            continue;
        }
        let mut words = body.split_whitespace();
        let head = words.next().unwrap_or_default();
        let header = match head {
            "size" | "fiber" | "u" => Some(head),
            _ => None,
        };
        if let Some(kind) = header {
            let arg = words.next().ok_or_else(|| Error::parse(line, format!("`{kind}` needs an argument")))?;
            if words.next().is_some() {
                return Err(Error::parse(line, format!("trailing input after `{kind} {arg}`")));
            }
            open = false;
            match kind {
                "size" => {
                    if n.is_some() {
                        return Err(Error::parse(line, "duplicate `size`"));
                    }
                    let v: usize = arg.parse().map_err(|_| Error::parse(line, format!("bad size `{arg}`")))?;
                    if v == 0 || v > MAX_AMBIENT {
                        return Err(Error::parse(line, format!("size must be in 1..={MAX_AMBIENT}")));
                    }
                    n = Some(v);
                }
                _ => {
                    let s = g.find(arg).ok_or_else(|| Error::UnknownElement(arg.to_string()))?;
                    current = Some(if kind == "fiber" { Section::Fiber(s) } else { Section::U(s) });
                }
            }
            continue;
        }
        let Some(section) = &current else {
            return Err(Error::parse(line, "matrix row outside a `fiber` or `u` section"));
        };
        let row = body.split_whitespace().map(|t| parse_entry(t, line)).collect::<Result<Vec<_>>>()?;
        if !open {
            let section = match section {
                Section::Fiber(s) => Section::Fiber(*s),
                Section::U(s) => Section::U(*s),
            };
            blocks.push(Block { section, line, rows: Vec::new() });
            open = true;
        }
        blocks.last_mut().expect("just pushed").rows.push(row);
    }
    let n = n.ok_or_else(|| Error::parse(1, "missing `size` line"))?;
    let mut fibers: Vec<Vec<CMatrix>> = vec![Vec::new(); g.len()];
    let mut u: Vec<Option<CMatrix>> = vec![None; g.len()];
    for b in &blocks {
        let m = to_matrix(n, b)?;
        match b.section {
            Section::Fiber(s) => fibers[s].push(m),
            Section::U(s) => {
                if u[s].replace(m).is_some() {
                    return Err(Error::parse(b.line, format!("second `u` block for {}", g.name(s))));
                }
            }
        }
    }
    let fibers =
        fibers.iter().map(|mats| MatrixSubspace::from_matrices(n, mats, tol)).collect::<Result<Vec<_>>>()?;
    let bundle = ConcreteFellBundle::new(&g, fibers)?;
    let u = u
        .iter()
        .any(Option::is_some)
        .then(|| RegularityData { u: u.into_iter().map(|m| m.unwrap_or_else(|| CMatrix::zeros(n, n))).collect() });
    Ok(MatrixModel { semigroup: g, bundle, u })
}

fn fmt_entry(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn write_matrix(out: &mut String, m: &CMatrix) {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_entry(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

/// Writes a model in the format read by [`parse_bundle`]. Fibers are
/// written as their orthonormal bases.
pub fn to_doc_string(model: &MatrixModel) -> String {
    let g = &model.semigroup;
    let mut out = format!("size {}\n", model.bundle.n());
    for s in g.elements() {
        let f = model.bundle.fiber(s);
        if f.is_zero() {
            continue;
        }
        let _ = writeln!(out, "fiber {}", g.name(s));
        for (i, m) in f.basis().iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            write_matrix(&mut out, m);
        }
        out.push('\n');
    }
    if let Some(u) = &model.u {
        for s in g.elements() {
            let _ = writeln!(out, "u {}", g.name(s));
            write_matrix(&mut out, &u.u[s]);
            out.push('\n');
        }
    }
    out
}
