//! Intersection-number statistics of a point set against flat families.
//!
//! The expensive step is always the same: stream the flats of one
//! codimension and count how many of their points lie in K. That step runs in
//! parallel over fixed index chunks; everything downstream is a deterministic
//! fold over the resulting per-flat size array.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{gaussian_binomial, Flat, ProjSpace};

const CHUNK: usize = 2048;

pub type Histogram = BTreeMap<u64, u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    pub codim: usize,
    pub histogram: Histogram,
}

impl IntersectionProfile {
    pub fn support(&self) -> Vec<u64> {
        self.histogram.keys().copied().collect()
    }

    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }
}

fn check_universe(space: &ProjSpace, k: &PointSet) -> Result<()> {
    if k.universe() != space.num_points() {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// |F ∩ K| for every flat F of the given codimension, indexed by flat rank.
pub fn flat_sizes(space: &ProjSpace, k: &PointSet, codim: usize) -> Result<Vec<u32>> {
    check_universe(space, k)?;
    let fam = space.flats(codim)?;
    let mut sizes = vec![0u32; fam.len()];
    sizes.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, out)| {
        let start = ci * CHUNK;
        fam.visit(start..start + out.len(), |idx, fl| {
            let mut c = 0u32;
            space.for_each_flat_point(fl, |p| c += k.contains(p) as u32);
            out[idx - start] = c;
        });
    });
    Ok(sizes)
}

/// Hyperplane sizes, indexed by hyperplane rank (= index of the dual point).
pub fn hyperplane_sizes(space: &ProjSpace, k: &PointSet) -> Result<Vec<u32>> {
    flat_sizes(space, k, 1)
}

pub fn histogram_of(sizes: &[u32]) -> Histogram {
    let mut h = Histogram::new();
    for &s in sizes {
        *h.entry(s as u64).or_default() += 1;
    }
    h
}

pub fn profile(space: &ProjSpace, k: &PointSet, codim: usize) -> Result<IntersectionProfile> {
    let sizes = flat_sizes(space, k, codim)?;
    Ok(IntersectionProfile {
        codim,
        histogram: histogram_of(&sizes),
    })
}

/// One side-by-side evaluation of an incidence double count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCount {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
}

impl DoubleCount {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Σ|F∩K| = |K|·#(flats through a point) and
/// Σ|F∩K|(|F∩K|−1) = |K|(|K|−1)·#(flats through two points).
pub fn double_counts(space: &ProjSpace, prof: &IntersectionProfile, k_size: u64) -> [DoubleCount; 2] {
    let n = space.dim() as u32;
    let q = space.q() as u64;
    let c = prof.codim as u32;
    let k = k_size as u128;
    let through_one = gaussian_binomial(n, c, q);
    let through_two = gaussian_binomial(n - 1, c, q);
    let (mut s1, mut s2) = (0u128, 0u128);
    for (&size, &count) in &prof.histogram {
        let (size, count) = (size as u128, count as u128);
        s1 += size * count;
        s2 += size * size.saturating_sub(1) * count;
    }
    [
        DoubleCount {
            name: "points".into(),
            lhs: s1,
            rhs: k * through_one,
        },
        DoubleCount {
            name: "pairs".into(),
            lhs: s2,
            rhs: k * k.saturating_sub(1) * through_two,
        },
    ]
}

/// n·Σa² − (Σa)² over the given values; zero iff all values are equal.
pub fn variance_defect(values: impl IntoIterator<Item = u64>) -> i128 {
    let (mut n, mut s, mut s2) = (0i128, 0i128, 0i128);
    for v in values {
        let v = v as i128;
        n += 1;
        s += v;
        s2 += v * v;
    }
    n * s2 - s * s
}

/// Number of hyperplanes H ⊇ flat with |H ∩ K| = tangent_size.
pub fn tangents_through_flat(space: &ProjSpace, k: &PointSet, flat: &Flat, tangent_size: u64) -> Result<u64> {
    check_universe(space, k)?;
    if flat.codim() != 2 {
        return Err(Error::InvalidCodim {
            codim: flat.codim(),
            n: space.dim(),
        });
    }
    let mut count = 0;
    space.hyperplanes_through(flat, |h| {
        let hyp = space.dualize_point(h);
        if space.flat_meet_count(&hyp, k) == tangent_size {
            count += 1;
        }
    });
    Ok(count)
}

/// Tally of |Π ∩ K| over the codimension-2 flats Π contained in H.
///
/// Every Π ⊂ H is H ∩ H' for exactly q hyperplanes H' ≠ H, so the tally
/// over H' is divided by q.
pub fn codim2_types_within_hyperplane(space: &ProjSpace, k: &PointSet, hyperplane: &Flat) -> Result<Histogram> {
    check_universe(space, k)?;
    if hyperplane.codim() != 1 {
        return Err(Error::InvalidCodim {
            codim: hyperplane.codim(),
            n: space.dim(),
        });
    }
    let h_idx = space.dualize_hyperplane(hyperplane)?;
    let mut on_h = Vec::new();
    space.for_each_flat_point(hyperplane, |p| {
        if k.contains(p) {
            on_h.push(p);
        }
    });
    let f = space.field();
    let mut raw = Histogram::new();
    for other in (0..space.num_points()).filter(|&i| i != h_idx) {
        let form = space.point(other);
        let c = on_h
            .iter()
            .filter(|&&p| crate::linalg::dot(f, form, space.point(p)) == 0)
            .count() as u64;
        *raw.entry(c).or_default() += 1;
    }
    let q = space.q() as u64;
    Ok(raw.into_iter().map(|(s, c)| (s, c / q)).collect())
}

/// For every point of the space, the number of hyperplanes of the given
/// size through it.
pub fn tangent_count_per_point(space: &ProjSpace, hyp_sizes: &[u32], tangent_size: u64) -> Vec<u64> {
    let mut counts = vec![0u64; space.num_points()];
    for (h, &s) in hyp_sizes.iter().enumerate() {
        if s as u64 == tangent_size {
            space.for_each_flat_point(&space.dualize_point(h), |p| counts[p] += 1);
        }
    }
    counts
}

/// Per-flat and per-point tangent statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentStats {
    pub tangent_size: u64,
    /// Number of tangent hyperplanes through each codimension-2 flat.
    pub per_flat: Vec<u16>,
    /// Number of tangent hyperplanes through each point.
    pub per_point: Vec<u64>,
}

pub fn tangent_stats(space: &ProjSpace, hyp_sizes: &[u32], tangent_size: u64) -> Result<TangentStats> {
    let fam = space.flats(2)?;
    let mut per_flat = vec![0u16; fam.len()];
    per_flat.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, out)| {
        let start = ci * CHUNK;
        fam.visit(start..start + out.len(), |idx, fl| {
            let mut t = 0;
            space.hyperplanes_through(fl, |h| t += (hyp_sizes[h] as u64 == tangent_size) as u16);
            out[idx - start] = t;
        });
    });
    Ok(TangentStats {
        tangent_size,
        per_flat,
        per_point: tangent_count_per_point(space, hyp_sizes, tangent_size),
    })
}

/// Multiset of hyperplane sizes through a flat, as sorted (size, count) pairs.
pub type Configuration = Vec<(u64, u64)>;

/// Everything the lemma battery needs from one pass over codimension-2 flats.
#[derive(Debug, Clone, Serialize)]
pub struct Codim2Scan {
    /// |Π ∩ K| per codimension-2 flat, by flat rank.
    pub sizes: Vec<u32>,
    pub histogram: Histogram,
    /// For each flat size, how often each configuration of hyperplane sizes
    /// through the flat occurs.
    pub configurations: BTreeMap<u64, BTreeMap<Configuration, u64>>,
    /// Per hyperplane, the tally of sizes of the codimension-2 flats inside it.
    pub within: Vec<Histogram>,
}

impl Codim2Scan {
    pub fn profile(&self) -> IntersectionProfile {
        IntersectionProfile {
            codim: 2,
            histogram: self.histogram.clone(),
        }
    }
}

pub fn scan_codim2(space: &ProjSpace, k: &PointSet, hyp_sizes: &[u32]) -> Result<Codim2Scan> {
    let sizes = flat_sizes(space, k, 2)?;
    let fam = space.flats(2)?;
    let mut configurations: BTreeMap<u64, BTreeMap<Configuration, u64>> = BTreeMap::new();
    let mut within = vec![Histogram::new(); space.num_points()];
    let mut through = Vec::with_capacity(space.q() as usize + 1);
    fam.visit(0..fam.len(), |idx, fl| {
        let s = sizes[idx] as u64;
        through.clear();
        space.hyperplanes_through(fl, |h| {
            through.push(hyp_sizes[h] as u64);
            *within[h].entry(s).or_default() += 1;
        });
        through.sort_unstable();
        let mut cfg: Configuration = Vec::new();
        for &t in &through {
            match cfg.last_mut() {
                Some((v, c)) if *v == t => *c += 1,
                _ => cfg.push((t, 1)),
            }
        }
        *configurations.entry(s).or_default().entry(cfg).or_default() += 1;
    });
    Ok(Codim2Scan {
        histogram: histogram_of(&sizes),
        sizes,
        configurations,
        within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{construct, PolarKind, PolarSpec};

    fn q43() -> (ProjSpace, PointSet) {
        construct(&PolarSpec::new(PolarKind::Parabolic, 4, 3).unwrap()).unwrap()
    }

    #[test]
    fn parabolic_hyperplane_profile() {
        let (s, k) = q43();
        let p = profile(&s, &k, 1).unwrap();
        assert_eq!(p.histogram, Histogram::from([(10, 36), (13, 40), (16, 45)]));
        for dc in double_counts(&s, &p, k.len() as u64) {
            assert!(dc.pass(), "{dc:?}");
        }
    }

    #[test]
    fn double_counts_hold_for_arbitrary_sets() {
        let s = ProjSpace::with_order(3, 3).unwrap();
        let k = PointSet::from_indices(s.num_points(), [0, 3, 7, 8, 19, 22, 31, 39]);
        for codim in 1..=3 {
            let p = profile(&s, &k, codim).unwrap();
            assert_eq!(p.total() as u128, gaussian_binomial(4, codim as u32, 3));
            for dc in double_counts(&s, &p, k.len() as u64) {
                assert!(dc.pass(), "codim {codim}: {dc:?}");
            }
        }
    }

    #[test]
    fn codim2_sizes_agree_with_hyperplane_identity() {
        // every point off Π lies on exactly one hyperplane through Π
        let (s, k) = q43();
        let hs = hyperplane_sizes(&s, &k).unwrap();
        let scan = scan_codim2(&s, &k, &hs).unwrap();
        let fam = s.flats(2).unwrap();
        let q = s.q() as u64;
        fam.visit(0..fam.len(), |idx, fl| {
            let mut sum = 0u64;
            s.hyperplanes_through(fl, |h| sum += hs[h] as u64);
            assert_eq!((sum - k.len() as u64) / q, scan.sizes[idx] as u64);
        });
    }

    #[test]
    fn within_tallies_match_direct_route() {
        let (s, k) = q43();
        let hs = hyperplane_sizes(&s, &k).unwrap();
        let scan = scan_codim2(&s, &k, &hs).unwrap();
        for h in (0..s.num_points()).step_by(5) {
            let direct = codim2_types_within_hyperplane(&s, &k, &s.dualize_point(h)).unwrap();
            let direct: Histogram = direct.into_iter().filter(|&(_, c)| c > 0).collect();
            assert_eq!(direct, scan.within[h]);
        }
    }

    #[test]
    fn tangent_counts_for_empty_set_are_zero() {
        let s = ProjSpace::with_order(3, 3).unwrap();
        let k = s.empty_set();
        let hs = hyperplane_sizes(&s, &k).unwrap();
        assert!(tangent_count_per_point(&s, &hs, 5).iter().all(|&c| c == 0));
    }

    #[test]
    fn variance_defect_detects_constancy() {
        assert_eq!(variance_defect([4, 4, 4]), 0);
        assert!(variance_defect([4, 5, 4]) > 0);
        assert_eq!(variance_defect([]), 0);
    }

    #[test]
    fn wrong_codim_inputs() {
        let (s, k) = q43();
        let h = s.dualize_point(0);
        assert!(tangents_through_flat(&s, &k, &h, 13).is_err());
        let l = s.flats(2).unwrap().get(0);
        assert!(codim2_types_within_hyperplane(&s, &k, &l).is_err());
        let other = PointSet::empty(10);
        assert_eq!(profile(&s, &other, 1).unwrap_err(), Error::SpaceMismatch);
    }
}
