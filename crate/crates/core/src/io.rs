//! Plain-text point-set files.
//!
//! ```text
//! PG <n> <q> <p> <k> <irreducible coefficients, constant first>
//! <x_0> <x_1> ... <x_n>
//! ...
//! ```
//! Each point line holds n+1 decimal field-element encodings; points must be
//! normalized, may appear in any order, and may not repeat.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTable};
use crate::pointset::PointSet;
use crate::space::ProjSpace;

pub fn header(space: &ProjSpace) -> String {
    let f = space.field();
    let mut s = format!("PG {} {} {} {}", space.dim(), f.order(), f.prime(), f.degree());
    for c in f.irreducible() {
        write!(s, " {c}").unwrap();
    }
    s
}

/// Serializes the set with points in index order.
pub fn write_point_set(space: &ProjSpace, set: &PointSet) -> String {
    let mut out = header(space);
    out.push('\n');
    for i in set.iter() {
        let coords: Vec<String> = space.point(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected an integer, found {tok:?}")))
}

pub fn read_point_set(text: &str) -> Result<(ProjSpace, PointSet)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, head) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() < 5 || toks[0] != "PG" {
        return Err(parse_err(hline, "header must read `PG n q p k <coeffs>`"));
    }
    let n: usize = parse_num(toks[1], hline)?;
    let q: u32 = parse_num(toks[2], hline)?;
    let p: u64 = parse_num(toks[3], hline)?;
    let k: u32 = parse_num(toks[4], hline)?;
    let coeffs: Vec<u32> = toks[5..].iter().map(|t| parse_num(t, hline)).collect::<Result<_>>()?;
    let field = FieldTable::new(p, k).map_err(|e| parse_err(hline, e.to_string()))?;
    if field.order() != q {
        return Err(parse_err(hline, format!("q = {q} but p^k = {}", field.order())));
    }
    if coeffs != field.irreducible() {
        return Err(parse_err(
            hline,
            format!(
                "irreducible {:?} differs from the canonical {:?}",
                coeffs,
                field.irreducible()
            ),
        ));
    }
    let space = ProjSpace::new(n, field).map_err(|e| parse_err(hline, e.to_string()))?;

    let mut set = space.empty_set();
    for (lno, line) in lines {
        let v: Vec<FieldElement> = line
            .split_whitespace()
            .map(|t| {
                let x: u32 = parse_num(t, lno)?;
                if x >= q {
                    return Err(parse_err(lno, format!("element {x} not in GF({q})")));
                }
                Ok(x as FieldElement)
            })
            .collect::<Result<_>>()?;
        if v.len() != n + 1 {
            return Err(parse_err(
                lno,
                format!("expected {} coordinates, found {}", n + 1, v.len()),
            ));
        }
        if !ProjSpace::is_normalized(&v) {
            return Err(parse_err(lno, "point is not normalized"));
        }
        if !set.insert(space.index_of_normalized(&v)) {
            return Err(parse_err(lno, "duplicate point"));
        }
    }
    Ok((space, set))
}
