//! Line-type hypothesis checks and the Shult-space axioms.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::pointset::PointSet;
use crate::polar::{line_types, singular_points};
use crate::profiles::Histogram;
use crate::space::ProjSpace;

const CHUNK: usize = 1024;

fn in_scope(dim: usize, base_q: u32) -> bool {
    dim >= 4 && base_q > 2
}

fn isqrt(v: u32) -> Option<u32> {
    let r = (v as f64).sqrt().round() as u32;
    (r * r == v).then_some(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HermitianLineReport {
    pub line_types: Histogram,
    /// The middle value when the type is exactly {1, r, q²+1}.
    pub r: Option<u64>,
    pub r_in_range: bool,
    pub nonsingular: bool,
    /// Rank (in the plane family) of a plane all of whose lines meet K in
    /// r or q²+1 points.
    pub violating_plane: Option<usize>,
    pub in_theorem_scope: bool,
}

impl HermitianLineReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.r.is_some() && self.r_in_range && self.nonsingular && self.violating_plane.is_none()
    }
}

/// Returns the vectors spanning every line of a plane with the given basis.
pub(crate) fn plane_lines(space: &ProjSpace) -> Result<Vec<[Vec<FieldElement>; 2]>> {
    let plane = ProjSpace::new(2, space.field().clone())?;
    Ok(plane
        .lines()
        .iter()
        .map(|l| {
            let b = plane.flat_basis(&l);
            [b[0].clone(), b[1].clone()]
        })
        .collect())
}

pub(crate) fn combine(space: &ProjSpace, basis: &[Vec<FieldElement>], coef: &[FieldElement]) -> Vec<FieldElement> {
    let f = space.field();
    let mut v = vec![0; space.dim() + 1];
    for (c, b) in coef.iter().zip(basis) {
        if *c == 0 {
            continue;
        }
        for (vi, &bi) in v.iter_mut().zip(b) {
            *vi = f.add(*vi, f.mul(*c, bi));
        }
    }
    v
}

/// Whether every line of the plane meets K in one of the allowed sizes.
pub(crate) fn plane_lines_all_in(
    space: &ProjSpace,
    k: &PointSet,
    basis: &[Vec<FieldElement>],
    lines: &[[Vec<FieldElement>; 2]],
    allowed: &[u64],
) -> bool {
    lines.iter().all(|[a, b]| {
        let span = [combine(space, basis, a), combine(space, basis, b)];
        let mut c = 0;
        space.for_each_span_point(&span, |p| c += k.contains(p) as u64);
        allowed.contains(&c)
    })
}

/// A plane lying in K has only full lines but carries no r-line, so it is
/// not a witness against the Hermitian hypotheses.
fn plane_inside(space: &ProjSpace, k: &PointSet, basis: &[Vec<FieldElement>]) -> bool {
    let mut all = true;
    space.for_each_span_point(basis, |p| all &= k.contains(p));
    all
}

pub fn check_hermitian_line_conditions(space: &ProjSpace, k: &PointSet) -> Result<HermitianLineReport> {
    let order = space.q();
    let q = isqrt(order).ok_or(Error::NotSquareOrder(order))?;
    let big = order as u64 + 1;
    let types = line_types(space, k)?;
    let keys: Vec<u64> = types.keys().copied().collect();
    let r = match keys.as_slice() {
        [1, r, top] if *top == big => Some(*r),
        _ => None,
    };
    let r_in_range = r.is_some_and(|r| r >= 3 && r < order as u64);
    let nonsingular = singular_points(space, k)?.is_empty();

    let violating_plane = match r {
        Some(r) if space.dim() >= 2 => {
            let lines = plane_lines(space)?;
            let allowed = [r, big];
            if space.dim() == 2 {
                let id: Vec<Vec<FieldElement>> = (0..3)
                    .map(|i| (0..3).map(|j| (i == j) as FieldElement).collect())
                    .collect();
                (plane_lines_all_in(space, k, &id, &lines, &allowed) && !plane_inside(space, k, &id)).then_some(0)
            } else {
                let fam = space.flats(space.dim() - 2)?;
                let chunks = fam.len().div_ceil(CHUNK);
                (0..chunks).into_par_iter().find_map_first(|ci| {
                    let start = ci * CHUNK;
                    let end = (start + CHUNK).min(fam.len());
                    let mut hit = None;
                    fam.visit(start..end, |idx, fl| {
                        if hit.is_none() {
                            let basis = space.flat_basis(fl);
                            if plane_lines_all_in(space, k, &basis, &lines, &allowed) && !plane_inside(space, k, &basis)
                            {
                                hit = Some(idx);
                            }
                        }
                    });
                    hit
                })
            }
        }
        _ => None,
    };

    Ok(HermitianLineReport {
        line_types: types,
        r,
        r_in_range,
        nonsingular,
        violating_plane,
        in_theorem_scope: in_scope(space.dim(), q),
    })
}

/// Which conclusion of the quadric line-type theorem the size selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadricCase {
    /// n even, |K| = (qⁿ−1)/(q−1): parabolic quadric.
    Parabolic,
    /// n odd, |K| = (qⁿ−1)/(q−1) + q^{(n−1)/2}: hyperbolic quadric.
    Hyperbolic,
    /// q even, |K| = (qⁿ−1)/(q−1) + 1: cone with nucleus (size only).
    Nucleus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadricLineReport {
    pub line_types: Histogram,
    pub type_ok: bool,
    pub nonsingular: bool,
    pub size: u64,
    pub window_ok: bool,
    pub case: Option<QuadricCase>,
    pub in_theorem_scope: bool,
}

impl QuadricLineReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.type_ok && self.nonsingular && self.window_ok && self.case.is_some()
    }
}

pub fn check_quadric_line_conditions(space: &ProjSpace, k: &PointSet) -> Result<QuadricLineReport> {
    let q = space.q() as u64;
    let n = space.dim() as u32;
    let types = line_types(space, k)?;
    let type_ok = types.keys().all(|t| [0, 1, 2, q + 1].contains(t));
    let nonsingular = singular_points(space, k)?.is_empty();
    let size = k.len() as u64;
    let low = (q.pow(n) - 1) / (q - 1);
    let high = (q.pow(n + 1) - 1) / (q - 1);
    let window_ok = size >= low && size < high;
    let case = if size == low && n.is_multiple_of(2) {
        Some(QuadricCase::Parabolic)
    } else if n % 2 == 1 && size == low + q.pow((n - 1) / 2) {
        Some(QuadricCase::Hyperbolic)
    } else if q.is_multiple_of(2) && size == low + 1 {
        Some(QuadricCase::Nucleus)
    } else {
        None
    };
    Ok(QuadricLineReport {
        line_types: types,
        type_ok,
        nonsingular,
        size,
        window_ok,
        case,
        in_theorem_scope: in_scope(space.dim(), space.q()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShultReport {
    pub points: usize,
    pub lines: usize,
    pub antiflags: u64,
    /// Antiflags where p is collinear with neither one nor all points of L.
    pub violations: u64,
    pub some_all_collinear: bool,
    pub no_point_collinear_with_all: bool,
    /// The number of lines per point, if constant.
    pub lines_per_point: Option<u64>,
    pub thick: bool,
}

impl ShultReport {
    /// The axioms needed for a fully embedded Shult space to be classical.
    /// An antiflag with all points collinear only exists in rank ≥ 3, so
    /// `some_all_collinear` is reported but not required.
    pub fn passes(&self) -> bool {
        self.violations == 0 && self.no_point_collinear_with_all && self.lines_per_point.is_some() && self.thick
    }
}

/// Checks the Shult-space axioms for the geometry whose points are K and
/// whose lines are the ambient lines contained in K.
pub fn check_shult(space: &ProjSpace, k: &PointSet) -> Result<ShultReport> {
    let q = space.q() as u64;
    let pts: Vec<usize> = k.iter().collect();
    let local = |p: usize| pts.binary_search(&p).expect("point of K");
    let sizes = crate::profiles::flat_sizes(space, k, space.dim() - 1)?;
    let fam = space.lines();
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for (idx, &s) in sizes.iter().enumerate() {
        if s as u64 == q + 1 {
            let mut l = Vec::with_capacity(s as usize);
            space.for_each_flat_point(&fam.get(idx), |p| l.push(local(p)));
            l.sort_unstable();
            lines.push(l);
        }
    }
    let np = pts.len();
    let mut through = vec![Vec::new(); np];
    for (li, l) in lines.iter().enumerate() {
        for &p in l {
            through[p].push(li);
        }
    }
    let collinear: Vec<PointSet> = (0..np)
        .map(|p| {
            let mut s = PointSet::empty(np);
            for &li in &through[p] {
                for &x in &lines[li] {
                    if x != p {
                        s.insert(x);
                    }
                }
            }
            s
        })
        .collect();

    let (antiflags, violations, some_all) = (0..np)
        .into_par_iter()
        .map(|p| {
            let mut a = 0u64;
            let mut v = 0u64;
            let mut all = false;
            for l in lines.iter().filter(|l| l.binary_search(&p).is_err()) {
                a += 1;
                let c = l.iter().filter(|&&x| collinear[p].contains(x)).count();
                if c == l.len() {
                    all = true;
                } else if c != 1 {
                    v += 1;
                }
            }
            (a, v, all)
        })
        .reduce(|| (0, 0, false), |x, y| (x.0 + y.0, x.1 + y.1, x.2 || y.2));

    let no_point_collinear_with_all = collinear.iter().all(|s| s.len() + 1 < np);
    let per_point: BTreeSet<usize> = through.iter().map(Vec::len).collect();
    let lines_per_point = match per_point.iter().collect::<Vec<_>>().as_slice() {
        [c] => Some(**c as u64),
        _ => None,
    };
    let thick = q + 1 >= 3 && np > 0 && through.iter().all(|t| t.len() >= 3);

    Ok(ShultReport {
        points: np,
        lines: lines.len(),
        antiflags,
        violations,
        some_all_collinear: some_all,
        no_point_collinear_with_all,
        lines_per_point,
        thick,
    })
}
