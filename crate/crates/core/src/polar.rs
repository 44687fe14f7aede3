//! Classical polar spaces from canonical forms, cones, the Suzuki-Tits
//! ovoid, and line-based structure of arbitrary point sets.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTable};
use crate::pointset::PointSet;
use crate::profiles::{self, Histogram};
use crate::space::{Flat, ProjSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PolarKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Hermitian,
}

impl PolarKind {
    pub const ALL: [PolarKind; 4] = [
        PolarKind::Hyperbolic,
        PolarKind::Parabolic,
        PolarKind::Elliptic,
        PolarKind::Hermitian,
    ];

    pub fn is_quadric(self) -> bool {
        !matches!(self, PolarKind::Hermitian)
    }
}

impl fmt::Display for PolarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PolarKind::Hyperbolic => "Hyperbolic",
            PolarKind::Parabolic => "Parabolic",
            PolarKind::Elliptic => "Elliptic",
            PolarKind::Hermitian => "Hermitian",
        };
        f.write_str(s)
    }
}

/// A non-singular polar space: kind, ambient projective dimension and base
/// field order. For Hermitian varieties the ambient field has order `q²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolarSpec {
    pub kind: PolarKind,
    pub dim: usize,
    pub q: u32,
}

impl PolarSpec {
    pub fn new(kind: PolarKind, dim: usize, q: u32) -> Result<Self> {
        let (ok, needed) = match kind {
            PolarKind::Hyperbolic | PolarKind::Elliptic => (dim % 2 == 1, "an odd"),
            PolarKind::Parabolic => (dim.is_multiple_of(2) && dim >= 2, "an even"),
            PolarKind::Hermitian => (dim >= 1, "a positive"),
        };
        if !ok {
            return Err(Error::DimensionParity {
                kind: match kind {
                    PolarKind::Hyperbolic => "hyperbolic",
                    PolarKind::Parabolic => "parabolic",
                    PolarKind::Elliptic => "elliptic",
                    PolarKind::Hermitian => "Hermitian",
                },
                needed,
                dim,
            });
        }
        crate::field::prime_power(q as u64).ok_or(Error::NotPrime(q as u64))?;
        Ok(Self { kind, dim, q })
    }

    /// Spec for a polar space living in PG(dim, field_order).
    pub fn in_space(kind: PolarKind, dim: usize, field_order: u32) -> Result<Self> {
        let q = match kind {
            PolarKind::Hermitian => {
                let r = (field_order as f64).sqrt().round() as u32;
                if r * r != field_order {
                    return Err(Error::NotSquareOrder(field_order));
                }
                r
            }
            _ => field_order,
        };
        Self::new(kind, dim, q)
    }

    pub fn ambient_order(&self) -> u32 {
        match self.kind {
            PolarKind::Hermitian => self.q * self.q,
            _ => self.q,
        }
    }

    /// The rank parameter used by the intersection formulas: m with
    /// ambient dimension 2m+1 (hyperbolic, elliptic) or 2m (parabolic);
    /// the ambient dimension itself for Hermitian varieties.
    pub fn rank_param(&self) -> u32 {
        match self.kind {
            PolarKind::Hyperbolic | PolarKind::Elliptic => (self.dim as u32 - 1) / 2,
            PolarKind::Parabolic => self.dim as u32 / 2,
            PolarKind::Hermitian => self.dim as u32,
        }
    }

    /// Closed-form number of points.
    pub fn size(&self) -> u128 {
        let q = self.q as i128;
        let m = self.rank_param();
        let v = match self.kind {
            PolarKind::Hyperbolic => (q.pow(m) + 1) * (q.pow(m + 1) - 1) / (q - 1),
            PolarKind::Elliptic => (q.pow(m) - 1) * (q.pow(m + 1) + 1) / (q - 1),
            PolarKind::Parabolic => (q.pow(2 * m) - 1) / (q - 1),
            PolarKind::Hermitian => {
                let s = if m.is_multiple_of(2) { 1 } else { -1 };
                (q.pow(m + 1) + s) * (q.pow(m) - s) / (q * q - 1)
            }
        };
        v as u128
    }

    pub fn space(&self) -> Result<ProjSpace> {
        ProjSpace::with_order(self.dim, self.ambient_order())
    }

    /// Whether the characterization theorem covers this instance (n ≥ 4, q > 2).
    pub fn in_theorem_scope(&self) -> bool {
        self.dim >= 4 && self.q > 2
    }
}

impl fmt::Display for PolarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, q) = (self.dim, self.q);
        match self.kind {
            PolarKind::Hyperbolic => write!(f, "Q+({n},{q})"),
            PolarKind::Parabolic => write!(f, "Q({n},{q})"),
            PolarKind::Elliptic => write!(f, "Q-({n},{q})"),
            PolarKind::Hermitian => write!(f, "H({n},{})", q * q),
        }
    }
}

/// A quadratic or Hermitian form on GF(q)^(dim+1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Form {
    /// Upper-triangular coefficients c_ij (i ≤ j), row-major (dim+1)²,
    /// evaluated as Σ_{i≤j} c_ij x_i x_j. Works in every characteristic.
    Quadratic { dim: usize, coeffs: Vec<FieldElement> },
    /// Matrix A with A = conj(A)ᵀ, evaluated as Σ conj(x_i) a_ij x_j.
    Hermitian { dim: usize, matrix: Vec<FieldElement> },
}

impl Form {
    pub fn dim(&self) -> usize {
        match self {
            Form::Quadratic { dim, .. } | Form::Hermitian { dim, .. } => *dim,
        }
    }

    pub fn evaluate(&self, f: &FieldTable, x: &[FieldElement]) -> FieldElement {
        let w = self.dim() + 1;
        let mut acc = 0;
        match self {
            Form::Quadratic { coeffs, .. } => {
                for i in 0..w {
                    if x[i] == 0 {
                        continue;
                    }
                    for j in i..w {
                        let c = coeffs[i * w + j];
                        if c != 0 && x[j] != 0 {
                            acc = f.add(acc, f.mul(c, f.mul(x[i], x[j])));
                        }
                    }
                }
            }
            Form::Hermitian { matrix, .. } => {
                for i in 0..w {
                    if x[i] == 0 {
                        continue;
                    }
                    let ci = f.frobenius(x[i]);
                    for j in 0..w {
                        let a = matrix[i * w + j];
                        if a != 0 && x[j] != 0 {
                            acc = f.add(acc, f.mul(ci, f.mul(a, x[j])));
                        }
                    }
                }
            }
        }
        acc
    }
}

/// Smallest c (by encoding) with x² + x + c irreducible over GF(q).
pub fn elliptic_constant(f: &FieldTable) -> FieldElement {
    f.elements()
        .find(|&c| f.elements().all(|x| f.add(f.add(f.mul(x, x), x), c) != 0))
        .expect("an irreducible monic quadratic x^2+x+c exists")
}

/// Canonical forms: hyperbolic Σ x_{2i}x_{2i+1}; parabolic x_0² + Σ x_{2i−1}x_{2i};
/// elliptic x_0² + x_0x_1 + c x_1² + Σ_{i≥1} x_{2i}x_{2i+1}; Hermitian Σ x_i^{q+1}.
pub fn canonical_form(spec: &PolarSpec, field: &FieldTable) -> Result<Form> {
    if field.order() != spec.ambient_order() {
        return Err(Error::SpaceMismatch);
    }
    let dim = spec.dim;
    let w = dim + 1;
    let m = spec.rank_param() as usize;
    let mut c = vec![0 as FieldElement; w * w];
    match spec.kind {
        PolarKind::Hyperbolic => {
            for i in 0..=m {
                c[2 * i * w + 2 * i + 1] = 1;
            }
        }
        PolarKind::Parabolic => {
            c[0] = 1;
            for i in 1..=m {
                c[(2 * i - 1) * w + 2 * i] = 1;
            }
        }
        PolarKind::Elliptic => {
            c[0] = 1;
            c[1] = 1;
            c[w + 1] = elliptic_constant(field);
            for i in 1..=m {
                c[2 * i * w + 2 * i + 1] = 1;
            }
        }
        PolarKind::Hermitian => {
            for i in 0..w {
                c[i * w + i] = 1;
            }
            return Ok(Form::Hermitian { dim, matrix: c });
        }
    }
    Ok(Form::Quadratic { dim, coeffs: c })
}

/// Zero set of the form, by evaluation at every point.
pub fn polar_point_set(space: &ProjSpace, form: &Form) -> Result<PointSet> {
    if form.dim() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    let f = space.field();
    let zeros: Vec<usize> = (0..space.num_points())
        .into_par_iter()
        .filter(|&i| form.evaluate(f, space.point(i)) == 0)
        .collect();
    Ok(PointSet::from_indices(space.num_points(), zeros))
}

pub fn construct(spec: &PolarSpec) -> Result<(ProjSpace, PointSet)> {
    let space = spec.space()?;
    let form = canonical_form(spec, space.field())?;
    let set = polar_point_set(&space, &form)?;
    Ok((space, set))
}

/// Exact projective zero count of the canonical form without enumerating
/// PG(n,q): the form is a sum of blocks in disjoint variables, so the value
/// distribution on GF(q)^(n+1) is the additive convolution of the blocks'
/// brute-force value distributions.
pub fn count_zeros_by_blocks(spec: &PolarSpec) -> Result<u128> {
    let field = FieldTable::with_order(spec.ambient_order())?;
    let f = &field;
    let q = f.order() as usize;
    let form = canonical_form(spec, f)?;
    let w = spec.dim + 1;

    // partition variables into connected blocks of the form's support
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let coupled = |i: usize, j: usize| match &form {
        Form::Quadratic { coeffs, .. } => coeffs[i.min(j) * w + i.max(j)] != 0,
        Form::Hermitian { matrix, .. } => matrix[i * w + j] != 0 || matrix[j * w + i] != 0,
    };
    for v in 0..w {
        match blocks.iter_mut().find(|b| b.iter().any(|&u| coupled(u, v))) {
            Some(b) => b.push(v),
            None => blocks.push(vec![v]),
        }
    }

    let mut dist = vec![0u128; q];
    dist[0] = 1;
    let mut x = vec![0 as FieldElement; w];
    for block in &blocks {
        let mut local = vec![0u128; q];
        for code in 0..q.pow(block.len() as u32) {
            x.iter_mut().for_each(|e| *e = 0);
            let mut c = code;
            for &v in block {
                x[v] = (c % q) as FieldElement;
                c /= q;
            }
            local[form.evaluate(f, &x) as usize] += 1;
        }
        let mut next = vec![0u128; q];
        for (a, &da) in dist.iter().enumerate() {
            for (b, &db) in local.iter().enumerate() {
                next[f.add(a as FieldElement, b as FieldElement) as usize] += da * db;
            }
        }
        dist = next;
    }
    Ok((dist[0] - 1) / (q as u128 - 1))
}

/// Union of the lines joining vertex points to base points, plus the vertex.
pub fn cone(space: &ProjSpace, vertex: &Flat, base_flat: &Flat, base: &PointSet) -> Result<PointSet> {
    if base.universe() != space.num_points() {
        return Err(Error::SpaceMismatch);
    }
    let vertex_pts = space.flat_points(vertex);
    let base_span = space.flat_points(base_flat);
    if vertex_pts.intersection_len(&base_span) != 0 || !base.is_subset(&base_span) {
        return Err(Error::NotSkew);
    }
    let f = space.field();
    let mut out = vertex_pts.clone();
    let mut v = vec![0; space.dim() + 1];
    for b in base.iter() {
        out.insert(b);
        for a in vertex_pts.iter() {
            for lambda in 1..f.order() as FieldElement {
                for ((vi, &ai), &bi) in v.iter_mut().zip(space.point(a)).zip(space.point(b)) {
                    *vi = f.add(f.mul(lambda, ai), bi);
                }
                out.insert(space.index_of(&v).expect("skew"));
            }
        }
    }
    Ok(out)
}

/// The Suzuki-Tits ovoid of PG(3,8):
/// {(1, x, y, x^σ + xy + y^(σ+2))} ∪ {(0,0,0,1)} with σ: x ↦ x⁴.
pub fn tits_ovoid(q: u32) -> Result<(ProjSpace, PointSet)> {
    if q != 8 {
        return Err(Error::UnsupportedOvoidOrder(q));
    }
    let space = ProjSpace::with_order(3, q)?;
    let f = space.field();
    let sigma = 4;
    let mut set = space.empty_set();
    for x in f.elements() {
        for y in f.elements() {
            let z = f.add(f.add(f.pow(x, sigma), f.mul(x, y)), f.pow(y, sigma + 2));
            set.insert(space.index_of_normalized(&[1, x, y, z]));
        }
    }
    set.insert(space.index_of_normalized(&[0, 0, 0, 1]));
    Ok((space, set))
}

/// Histogram of |L ∩ K| over all lines L; its support is the type of K.
pub fn line_types(space: &ProjSpace, k: &PointSet) -> Result<Histogram> {
    Ok(profiles::profile(space, k, space.dim() - 1)?.histogram)
}

/// Points of K all of whose lines meet K in 1 or q+1 points.
pub fn singular_points(space: &ProjSpace, k: &PointSet) -> Result<PointSet> {
    if k.universe() != space.num_points() {
        return Err(Error::SpaceMismatch);
    }
    let lines = space.lines();
    let full = space.q() as usize + 1;
    let chunk = 4096;
    let n_chunks = lines.len().div_ceil(chunk);
    let marks: Vec<PointSet> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let mut marked = space.empty_set();
            let mut on = Vec::with_capacity(full);
            lines.visit(ci * chunk..(ci + 1) * chunk, |_, line| {
                on.clear();
                space.for_each_flat_point(line, |p| {
                    if k.contains(p) {
                        on.push(p);
                    }
                });
                if on.len() != 1 && on.len() != full {
                    for &p in &on {
                        marked.insert(p);
                    }
                }
            });
            marked
        })
        .collect();
    let mut nonsingular = space.empty_set();
    for m in &marks {
        nonsingular.union_with(m);
    }
    Ok(k.difference(&nonsingular))
}
