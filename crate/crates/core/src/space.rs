//! Points and flats of PG(n,q).
//!
//! Points are normalized coordinate vectors (first nonzero coordinate 1),
//! indexed in lexicographic order of their encodings. Flats are stored by
//! their dual generators: a `codim x (n+1)` matrix in reduced row-echelon
//! form whose rows are the linear forms vanishing on the flat.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTable};
use crate::linalg;
use crate::pointset::PointSet;

const MAX_POINTS: u128 = 1 << 24;

/// Number of k-dimensional subspaces of an n-dimensional vector space over GF(q).
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

#[derive(Debug, Clone)]
pub struct ProjSpace {
    n: usize,
    field: FieldTable,
    coords: Vec<FieldElement>,
    num_points: usize,
    /// `offsets[i]` = number of points whose first nonzero coordinate is after `i`.
    offsets: Vec<usize>,
}

impl ProjSpace {
    pub fn new(n: usize, field: FieldTable) -> Result<Self> {
        if n < 1 {
            return Err(Error::DimensionTooSmall(n));
        }
        let q = field.order() as u128;
        let points = (q.pow(n as u32 + 1) - 1) / (q - 1);
        if points > MAX_POINTS {
            return Err(Error::SpaceTooLarge {
                n,
                q: field.order(),
                points,
            });
        }
        let num_points = points as usize;
        let q = q as usize;
        let offsets: Vec<usize> = (0..=n).map(|i| (q.pow((n - i) as u32) - 1) / (q - 1)).collect();

        let dim = n + 1;
        let mut coords = vec![0 as FieldElement; num_points * dim];
        for lead in (0..=n).rev() {
            let tail = n - lead;
            for value in 0..q.pow(tail as u32) {
                let idx = offsets[lead] + value;
                let row = &mut coords[idx * dim..(idx + 1) * dim];
                row[lead] = 1;
                let mut v = value;
                for j in (lead + 1..=n).rev() {
                    row[j] = (v % q) as FieldElement;
                    v /= q;
                }
            }
        }
        Ok(Self {
            n,
            field,
            coords,
            num_points,
            offsets,
        })
    }

    pub fn with_order(n: usize, q: u32) -> Result<Self> {
        Self::new(n, FieldTable::with_order(q)?)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    #[inline]
    pub fn point(&self, idx: usize) -> &[FieldElement] {
        let d = self.n + 1;
        &self.coords[idx * d..(idx + 1) * d]
    }

    /// Index of an already normalized vector.
    #[inline]
    pub fn index_of_normalized(&self, v: &[FieldElement]) -> usize {
        let lead = v.iter().position(|&x| x != 0).expect("zero vector");
        let q = self.q() as usize;
        let tail = v[lead + 1..].iter().fold(0usize, |acc, &x| acc * q + x as usize);
        self.offsets[lead] + tail
    }

    /// Index of the projective point spanned by `v`, or `None` for the zero vector.
    #[inline]
    pub fn index_of(&self, v: &[FieldElement]) -> Option<usize> {
        let lead = v.iter().position(|&x| x != 0)?;
        let f = &self.field;
        let inv = f.inv_nonzero(v[lead]);
        let q = self.q() as usize;
        let tail = v[lead + 1..]
            .iter()
            .fold(0usize, |acc, &x| acc * q + f.mul(x, inv) as usize);
        Some(self.offsets[lead] + tail)
    }

    pub fn is_normalized(v: &[FieldElement]) -> bool {
        v.iter().find(|&&x| x != 0) == Some(&1)
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.num_points)
    }

    /// Builds the flat annihilated by the row space of `rows`.
    pub fn flat_from_rows(&self, rows: &[Vec<FieldElement>]) -> Result<Flat> {
        let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
        if m.iter().any(|r| r.len() != self.n + 1) {
            return Err(Error::SpaceMismatch);
        }
        linalg::rref(&self.field, &mut m);
        let codim = m.len();
        if codim == 0 || codim > self.n {
            return Err(Error::InvalidCodim { codim, n: self.n });
        }
        Ok(Flat {
            codim,
            rows: m.concat(),
        })
    }

    /// The flat spanned by the given points (as coordinate vectors).
    pub fn flat_spanned_by(&self, points: &[Vec<FieldElement>]) -> Result<Flat> {
        let dual = linalg::kernel(&self.field, points, self.n + 1);
        self.flat_from_rows(&dual)
    }

    pub fn flats(&self, codim: usize) -> Result<FlatFamily<'_>> {
        FlatFamily::new(self, codim)
    }

    pub fn hyperplanes(&self) -> FlatFamily<'_> {
        FlatFamily::new(self, 1).expect("n >= 1")
    }

    pub fn lines(&self) -> FlatFamily<'_> {
        FlatFamily::new(self, self.n - 1).expect("n >= 1")
    }

    #[inline]
    pub fn incident(&self, point: usize, flat: &Flat) -> bool {
        let p = self.point(point);
        flat.rows(self.n + 1).all(|r| linalg::dot(&self.field, r, p) == 0)
    }

    /// Basis of the vector subspace underlying the flat: one vector per free
    /// (non-pivot) column of the dual generator matrix.
    pub fn flat_basis(&self, flat: &Flat) -> Vec<Vec<FieldElement>> {
        let width = self.n + 1;
        let pivots = flat.pivots(width);
        let mut basis = Vec::with_capacity(width - flat.codim);
        for c in (0..width).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; width];
            v[c] = 1;
            for (row, &pc) in flat.rows(width).zip(&pivots) {
                v[pc] = self.field.neg(row[c]);
            }
            basis.push(v);
        }
        basis
    }

    /// Calls `f` with the index of every projective point in the span of `basis`.
    pub fn for_each_span_point(&self, basis: &[Vec<FieldElement>], mut f: impl FnMut(usize)) {
        let d = basis.len();
        let dim = self.n + 1;
        let q = self.q() as usize;
        let field = &self.field;
        let mut coef = vec![0 as FieldElement; d];
        let mut v = vec![0 as FieldElement; dim];
        for lead in 0..d {
            let tail = d - lead - 1;
            for value in 0..q.pow(tail as u32) {
                coef.iter_mut().for_each(|c| *c = 0);
                coef[lead] = 1;
                let mut x = value;
                for j in (lead + 1..d).rev() {
                    coef[j] = (x % q) as FieldElement;
                    x /= q;
                }
                v.copy_from_slice(&basis[lead]);
                for j in lead + 1..d {
                    let c = coef[j];
                    if c == 0 {
                        continue;
                    }
                    for (vi, &bi) in v.iter_mut().zip(&basis[j]) {
                        *vi = field.add(*vi, field.mul(c, bi));
                    }
                }
                f(self.index_of(&v).expect("basis is independent"));
            }
        }
    }

    pub fn for_each_flat_point(&self, flat: &Flat, f: impl FnMut(usize)) {
        let basis = self.flat_basis(flat);
        self.for_each_span_point(&basis, f);
    }

    pub fn flat_points(&self, flat: &Flat) -> PointSet {
        let mut s = self.empty_set();
        self.for_each_flat_point(flat, |i| {
            s.insert(i);
        });
        s
    }

    /// Number of points of `k` on the flat.
    pub fn flat_meet_count(&self, flat: &Flat, k: &PointSet) -> u64 {
        let mut c = 0;
        self.for_each_flat_point(flat, |i| c += k.contains(i) as u64);
        c
    }

    /// Number of points on a flat of the given codimension.
    pub fn flat_size(&self, codim: usize) -> u64 {
        let q = self.q() as u64;
        (q.pow((self.n + 1 - codim) as u32) - 1) / (q - 1)
    }

    /// The dual point of a hyperplane (the duality is the identity on
    /// coordinate vectors, so this is its single normalized row).
    pub fn dualize_hyperplane(&self, flat: &Flat) -> Result<usize> {
        if flat.codim != 1 {
            return Err(Error::InvalidCodim {
                codim: flat.codim,
                n: self.n,
            });
        }
        Ok(self.index_of_normalized(&flat.rows))
    }

    pub fn dualize_point(&self, point: usize) -> Flat {
        Flat {
            codim: 1,
            rows: self.point(point).to_vec(),
        }
    }

    /// Indices of the hyperplanes (equivalently their dual points) containing
    /// the flat: the projective points of its dual row space.
    pub fn hyperplanes_through(&self, flat: &Flat, f: impl FnMut(usize)) {
        let rows: Vec<Vec<FieldElement>> = flat.rows(self.n + 1).map(<[_]>::to_vec).collect();
        self.for_each_span_point(&rows, f);
    }
}

/// A flat of PG(n,q) given by its canonical dual generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flat {
    codim: usize,
    rows: Vec<FieldElement>,
}

impl Flat {
    pub fn codim(&self) -> usize {
        self.codim
    }

    /// Row-major dual generators.
    pub fn matrix(&self) -> &[FieldElement] {
        &self.rows
    }

    pub fn rows(&self, width: usize) -> impl Iterator<Item = &[FieldElement]> {
        self.rows.chunks(width)
    }

    pub fn pivots(&self, width: usize) -> Vec<usize> {
        self.rows(width)
            .map(|r| r.iter().position(|&x| x != 0).expect("full rank"))
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Pattern {
    pivots: Vec<usize>,
    /// (row, column) of each free entry, row-major.
    free: Vec<(usize, usize)>,
    start: usize,
    count: usize,
}

/// All flats of one codimension, in canonical order: pivot tuples in
/// descending lexicographic order, then free entries as a base-q odometer
/// (last free entry fastest). For hyperplanes this is the point order.
#[derive(Debug, Clone)]
pub struct FlatFamily<'a> {
    space: &'a ProjSpace,
    codim: usize,
    patterns: Vec<Pattern>,
    total: usize,
}

impl<'a> FlatFamily<'a> {
    fn new(space: &'a ProjSpace, codim: usize) -> Result<Self> {
        let n = space.n;
        if codim < 1 || codim > n {
            return Err(Error::InvalidCodim { codim, n });
        }
        let width = n + 1;
        let q = space.q() as usize;
        let mut tuples = Vec::new();
        combinations(width, codim, &mut Vec::new(), 0, &mut tuples);
        tuples.sort_unstable_by(|a, b| b.cmp(a));
        let mut patterns = Vec::with_capacity(tuples.len());
        let mut start = 0;
        for pivots in tuples {
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..width {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let count = q.pow(free.len() as u32);
            patterns.push(Pattern {
                pivots,
                free,
                start,
                count,
            });
            start += count;
        }
        Ok(Self {
            space,
            codim,
            patterns,
            total: start,
        })
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn pattern_of(&self, idx: usize) -> usize {
        self.patterns.partition_point(|p| p.start + p.count <= idx)
    }

    fn fill(&self, pat: &Pattern, mut value: usize, rows: &mut [FieldElement]) {
        let width = self.space.n + 1;
        let q = self.space.q() as usize;
        rows.iter_mut().for_each(|x| *x = 0);
        for (r, &p) in pat.pivots.iter().enumerate() {
            rows[r * width + p] = 1;
        }
        for &(r, c) in pat.free.iter().rev() {
            rows[r * width + c] = (value % q) as FieldElement;
            value /= q;
        }
    }

    pub fn get(&self, idx: usize) -> Flat {
        assert!(idx < self.total, "flat index {idx} out of range");
        let pat = &self.patterns[self.pattern_of(idx)];
        let mut rows = vec![0; self.codim * (self.space.n + 1)];
        self.fill(pat, idx - pat.start, &mut rows);
        Flat {
            codim: self.codim,
            rows,
        }
    }

    /// Position of a flat in the canonical order.
    pub fn rank(&self, flat: &Flat) -> Result<usize> {
        if flat.codim != self.codim {
            return Err(Error::InvalidCodim {
                codim: flat.codim,
                n: self.space.n,
            });
        }
        let width = self.space.n + 1;
        let q = self.space.q() as usize;
        let pivots = flat.pivots(width);
        let pat = self
            .patterns
            .iter()
            .find(|p| p.pivots == pivots)
            .ok_or_else(|| Error::Internal("flat not in RREF".into()))?;
        let value = pat
            .free
            .iter()
            .fold(0usize, |acc, &(r, c)| acc * q + flat.rows[r * width + c] as usize);
        Ok(pat.start + value)
    }

    /// Visits the flats with indices in `range`, passing the row-major
    /// generator matrix in a reused buffer.
    pub fn visit(&self, range: Range<usize>, mut f: impl FnMut(usize, &Flat)) {
        let end = range.end.min(self.total);
        if range.start >= end {
            return;
        }
        let q = self.space.q() as FieldElement;
        let width = self.space.n + 1;
        let mut pi = self.pattern_of(range.start);
        let mut flat = Flat {
            codim: self.codim,
            rows: vec![0; self.codim * width],
        };
        let mut pat = &self.patterns[pi];
        self.fill(pat, range.start - pat.start, &mut flat.rows);
        for idx in range.start..end {
            if idx == pat.start + pat.count {
                pi += 1;
                pat = &self.patterns[pi];
                self.fill(pat, 0, &mut flat.rows);
            }
            f(idx, &flat);
            // odometer step on the free entries
            for &(r, c) in pat.free.iter().rev() {
                let e = &mut flat.rows[r * width + c];
                *e += 1;
                if *e < q {
                    break;
                }
                *e = 0;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Flat> + '_ {
        (0..self.total).map(move |i| self.get(i))
    }
}

fn combinations(n: usize, k: usize, cur: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..n {
        cur.push(i);
        combinations(n, k, cur, i + 1, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn point_counts() {
        assert_eq!(ProjSpace::with_order(4, 3).unwrap().num_points(), 121);
        assert_eq!(ProjSpace::with_order(3, 8).unwrap().num_points(), 585);
        assert_eq!(ProjSpace::with_order(1, 2).unwrap().num_points(), 3);
    }

    #[test]
    fn brute_force_normalization_count() {
        // every nonzero vector of GF(3)^5 normalizes to one of 121 points,
        // each hit by exactly q-1 = 2 vectors
        let s = ProjSpace::with_order(4, 3).unwrap();
        let mut hits = vec![0; s.num_points()];
        for code in 1..3usize.pow(5) {
            let v: Vec<FieldElement> = (0..5).map(|j| (code / 3usize.pow(4 - j) % 3) as FieldElement).collect();
            hits[s.index_of(&v).unwrap()] += 1;
        }
        assert!(hits.iter().all(|&h| h == 2));
    }

    #[test]
    fn guard_and_dimension_errors() {
        assert!(matches!(ProjSpace::with_order(6, 16), Err(Error::SpaceTooLarge { .. })));
        assert!(matches!(ProjSpace::with_order(0, 3), Err(Error::DimensionTooSmall(0))));
    }

    #[test]
    fn points_are_normalized_and_sorted() {
        let s = ProjSpace::with_order(3, 4).unwrap();
        for i in 0..s.num_points() {
            let p = s.point(i);
            assert!(ProjSpace::is_normalized(p));
            assert_eq!(s.index_of(p), Some(i));
            if i > 0 {
                assert!(s.point(i - 1) < p);
            }
        }
    }

    #[test]
    fn flat_counts_match_gaussian_binomials() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (3, 4), (5, 2)] {
            let s = ProjSpace::with_order(n, q).unwrap();
            for codim in 1..=n {
                let fam = s.flats(codim).unwrap();
                let expected = gaussian_binomial(n as u32 + 1, codim as u32, q as u64);
                assert_eq!(fam.len() as u128, expected, "PG({n},{q}) codim {codim}");
            }
        }
        let s = ProjSpace::with_order(4, 3).unwrap();
        assert_eq!(s.flats(1).unwrap().len(), 121);
        assert_eq!(s.flats(2).unwrap().len(), 1210);
        let s = ProjSpace::with_order(5, 3).unwrap();
        assert_eq!(s.flats(2).unwrap().len(), 11011);
    }

    #[test]
    fn incidence_double_count_for_codim2() {
        // (point, codim-2 flat) incidences: 1210 * 13 = 121 * #flats through a point
        let s = ProjSpace::with_order(4, 3).unwrap();
        let fam = s.flats(2).unwrap();
        let mut per_point = vec![0u64; s.num_points()];
        fam.visit(0..fam.len(), |_, fl| {
            let mut c = 0;
            s.for_each_flat_point(fl, |i| {
                per_point[i] += 1;
                c += 1;
            });
            assert_eq!(c, 13);
        });
        let through = gaussian_binomial(4, 2, 3) as u64;
        assert!(per_point.iter().all(|&c| c == through));
        assert_eq!(1210 * 13, 121 * through);
    }

    #[test]
    fn enumeration_is_unique_and_rank_inverts_get() {
        let s = ProjSpace::with_order(4, 2).unwrap();
        for codim in 1..=4 {
            let fam = s.flats(codim).unwrap();
            let mut seen = HashSet::new();
            fam.visit(0..fam.len(), |idx, fl| {
                assert_eq!(fam.get(idx), *fl);
                assert_eq!(fam.rank(fl).unwrap(), idx);
                let rows: Vec<Vec<FieldElement>> = fl.rows(5).map(<[_]>::to_vec).collect();
                assert_eq!(s.flat_from_rows(&rows).unwrap(), *fl);
                assert!(seen.insert(s.flat_points(fl).iter().collect::<Vec<_>>()));
            });
        }
    }

    #[test]
    fn hyperplane_order_matches_point_order() {
        let s = ProjSpace::with_order(4, 3).unwrap();
        let fam = s.hyperplanes();
        for i in 0..fam.len() {
            let h = fam.get(i);
            assert_eq!(s.dualize_hyperplane(&h).unwrap(), i);
            assert_eq!(s.dualize_point(i), h);
        }
    }

    #[test]
    fn incidence_examples() {
        let s = ProjSpace::with_order(4, 3).unwrap();
        let h = s.flat_from_rows(&[vec![0, 0, 0, 0, 1]]).unwrap();
        let e0 = s.index_of(&[1, 0, 0, 0, 0]).unwrap();
        let e4 = s.index_of(&[0, 0, 0, 0, 1]).unwrap();
        assert!(s.incident(e0, &h));
        assert!(!s.incident(e4, &h));
        assert_eq!(s.flat_points(&h).len(), 40);
        let x0 = s.flat_from_rows(&[vec![1, 0, 0, 0, 0]]).unwrap();
        assert_eq!(s.dualize_hyperplane(&x0).unwrap(), e0);
        let s8 = ProjSpace::with_order(3, 8).unwrap();
        assert_eq!(s8.flat_points(&s8.hyperplanes().get(17)).len(), 73);
    }

    #[test]
    fn codim_zero_is_rejected() {
        let s = ProjSpace::with_order(4, 3).unwrap();
        assert!(matches!(s.flats(0), Err(Error::InvalidCodim { .. })));
        assert!(s.flat_from_rows(&[vec![0; 5]]).is_err());
    }

    #[test]
    fn duality_reverses_incidence_in_pg23() {
        let s = ProjSpace::with_order(2, 3).unwrap();
        for p in 0..13 {
            for h in 0..13 {
                let hyper = s.dualize_point(h);
                let dual_of_p = s.dualize_point(p);
                // p in H  iff  delta(H) in delta(p)
                assert_eq!(s.incident(p, &hyper), s.incident(h, &dual_of_p));
            }
        }
    }

    #[test]
    fn every_point_on_expected_number_of_hyperplanes() {
        let s = ProjSpace::with_order(4, 3).unwrap();
        let mut counts = vec![0; s.num_points()];
        for h in s.hyperplanes().iter() {
            s.for_each_flat_point(&h, |i| counts[i] += 1);
        }
        assert!(counts.iter().all(|&c| c == 40));
    }

    #[test]
    fn hyperplanes_through_codim2_flat() {
        let s = ProjSpace::with_order(3, 4).unwrap();
        let fam = s.flats(2).unwrap();
        let hyps = s.hyperplanes();
        for idx in (0..fam.len()).step_by(7) {
            let fl = fam.get(idx);
            let pts = s.flat_points(&fl);
            let mut through = Vec::new();
            s.hyperplanes_through(&fl, |h| through.push(h));
            assert_eq!(through.len(), 5);
            for h in through {
                assert!(pts.is_subset(&s.flat_points(&hyps.get(h))));
            }
        }
    }

    #[test]
    fn flat_spanned_by_points() {
        let s = ProjSpace::with_order(3, 3).unwrap();
        let line = s.flat_spanned_by(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(line.codim(), 2);
        assert_eq!(s.flat_points(&line).len(), 4);
    }
}
