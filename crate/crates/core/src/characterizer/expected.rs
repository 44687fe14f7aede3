//! Expected intersection data of the classical polar spaces.

use num_traits::{One, Zero};
use serde::Serialize;

use super::rational::{as_natural, int, moment_matrix, qpow, sign, solve, Q};
use crate::error::{Error, Result};
use crate::polar::{PolarKind, PolarSpec};

/// One codimension-2 intersection type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodimTwoType {
    /// 1-based label C_i in the standard numbering.
    pub label: usize,
    pub size: u64,
    /// Tangent hyperplanes through a flat of this type, when constant.
    pub tangents: Option<u64>,
    /// How many flats of this type lie in a tangent hyperplane.
    pub in_tangent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedProfile {
    pub spec: PolarSpec,
    pub size: u64,
    /// Hyperplane intersection sizes H_1, H_2, ...
    pub hyperplane: Vec<u64>,
    /// Number of hyperplanes of each size.
    pub hyperplane_counts: Vec<u64>,
    /// Position of the tangent size in `hyperplane`.
    pub tangent: usize,
    pub codim2: Vec<CodimTwoType>,
    /// Parabolic only: `mij[j][i]` codimension-2 flats of type C_{i+1}
    /// inside a hyperplane of type H_{j+1}.
    pub mij: Option<Vec<Vec<u64>>>,
}

impl ExpectedProfile {
    pub fn tangent_size(&self) -> u64 {
        self.hyperplane[self.tangent]
    }

    pub fn tangent_count(&self) -> u64 {
        self.hyperplane_counts[self.tangent]
    }

    pub fn codim2_sizes(&self) -> Vec<u64> {
        self.codim2.iter().map(|c| c.size).collect()
    }

    /// Number of codimension-2 flats inside one hyperplane.
    pub fn flats_per_hyperplane(&self) -> u64 {
        let q = self.spec.ambient_order() as u64;
        (q.pow(self.spec.dim as u32) - 1) / (q - 1)
    }

    /// Σ A_i over the types equals the number of codimension-2 flats in a
    /// hyperplane; for parabolic spaces additionally (H₁+H₂)/2 = H₃.
    pub fn consistent(&self) -> bool {
        let sum: u64 = self.codim2.iter().map(|c| c.in_tangent).sum();
        let mean_ok = match self.spec.kind {
            PolarKind::Parabolic => self.hyperplane[0] + self.hyperplane[1] == 2 * self.hyperplane[2],
            _ => true,
        };
        let mij_ok = self.mij.as_ref().is_none_or(|m| {
            m.iter()
                .all(|row| row.iter().sum::<u64>() == self.flats_per_hyperplane())
        });
        sum == self.flats_per_hyperplane() && mean_ok && mij_ok
    }
}

/// Closed forms before validity filtering.
#[derive(Debug, Clone)]
pub(crate) struct RawProfile {
    pub size: Q,
    pub hyperplane: Vec<Q>,
    pub tangent: usize,
    pub codim2: Vec<Q>,
    pub tangents: Vec<Option<Q>>,
    pub in_tangent: Vec<Q>,
}

fn frac(num: Q, den: Q) -> Q {
    num / den
}

pub(crate) fn raw_profile(spec: &PolarSpec) -> RawProfile {
    let q = spec.q as u64;
    let qq = Q::from_integer(q.into());
    let one = Q::one;
    let qm1 = &qq - one();
    let m = spec.rank_param() as i64;
    let p = |e: i64| qpow(q, e);
    let size = Q::from_integer(spec.size().into());
    match spec.kind {
        PolarKind::Hermitian => {
            let n = m;
            let s = sign(n);
            let d = p(2) - one();
            let h1 = frac((p(n) - &s) * (p(n - 1) + &s), d.clone());
            let h2 = one() + p(2) * (p(n - 1) + &s) * (p(n - 2) - &s) / &d;
            let c1 = (p(n - 1) + &s) * (p(n - 2) - &s) / &d;
            let c2 = one() + p(2) * (p(n - 2) - &s) * (p(n - 3) + &s) / &d;
            let c3 = one() + p(2) + p(4) * (p(n - 3) + &s) * (p(n - 4) - &s) / &d;
            let a = vec![
                p(2 * n - 2),
                p(n - 2) * (p(n - 1) + &s) / (&qq + one()),
                (p(n - 1) + &s) * (p(n - 2) - &s) / &d,
            ];
            RawProfile {
                size,
                hyperplane: vec![h1, h2],
                tangent: 1,
                codim2: vec![c1, c2, c3],
                tangents: vec![Some(&qq + one()), Some(one()), Some(p(2) + one())],
                in_tangent: a,
            }
        }
        PolarKind::Hyperbolic | PolarKind::Elliptic => {
            // e = +1 hyperbolic, −1 elliptic
            let e = if spec.kind == PolarKind::Hyperbolic {
                int(1)
            } else {
                int(-1)
            };
            let h1 = (p(2 * m) - one()) / &qm1;
            let h2 = one() + &qq * (p(m) - &e) * (p(m - 1) + &e) / &qm1;
            let c1 = (p(m) + &e) * (p(m - 1) - &e) / &qm1;
            let c2 = one() + &qq * (p(2 * m - 2) - one()) / &qm1;
            let c3 = (p(m) - &e) * (p(m - 1) + &e) / &qm1;
            let c4 = one() + &qq + p(2) * (p(m - 1) - &e) * (p(m - 2) + &e) / &qm1;
            let a = vec![
                Q::zero(),
                p(m - 1) * (p(m) - &e),
                p(2 * m),
                (p(m) - &e) * (p(m - 1) + &e) / &qm1,
            ];
            RawProfile {
                size,
                hyperplane: vec![h1, h2],
                tangent: 1,
                codim2: vec![c1, c2, c3, c4],
                tangents: vec![Some(Q::zero()), Some(one()), Some(int(2)), Some(&qq + one())],
                in_tangent: a,
            }
        }
        PolarKind::Parabolic => {
            let h1 = (p(m) - one()) * (p(m - 1) + one()) / &qm1;
            let h2 = (p(m) + one()) * (p(m - 1) - one()) / &qm1;
            let h3 = one() + &qq * (p(2 * m - 2) - one()) / &qm1;
            let c1 = (p(2 * m - 2) - one()) / &qm1;
            let c2 = one() + &qq * (p(m - 1) - one()) * (p(m - 2) + one()) / &qm1;
            let c3 = one() + &qq * (p(m - 1) + one()) * (p(m - 2) - one()) / &qm1;
            let hs = vec![h1, h2, h3];
            let cs = vec![c1, c2, c3];
            let a = within_hyperplane(spec, &hs[2], &cs).unwrap_or_else(|| vec![Q::zero(); 3]);
            RawProfile {
                size,
                hyperplane: hs,
                tangent: 2,
                codim2: cs,
                tangents: vec![None, Some(one()), Some(one())],
                in_tangent: a,
            }
        }
    }
}

/// Solves the pair/triple counts for the tally of codimension-2 types
/// inside a hyperplane of the given size.
pub(crate) fn within_hyperplane(spec: &PolarSpec, h: &Q, cs: &[Q]) -> Option<Vec<Q>> {
    let q = spec.ambient_order() as u64;
    let n = spec.dim as i64;
    let g = |e: i64| (qpow(q, e) - int(1)) / (qpow(q, 1) - int(1));
    let rhs = [g(n), h * g(n - 1), h * (h - int(1)) * g(n - 2)];
    solve(&moment_matrix(cs), &rhs)
}

/// Number of hyperplanes through a point, through two points, and in total.
pub(crate) fn hyperplane_incidences(spec: &PolarSpec) -> (Q, Q, Q) {
    let q = spec.ambient_order() as u64;
    let n = spec.dim as i64;
    let g = |e: i64| (qpow(q, e) - int(1)) / (qpow(q, 1) - int(1));
    (g(n), g(n - 1), g(n + 1))
}

/// Hyperplane type counts h_i from the count, pair and triple equations at
/// the given size (as many equations as there are types).
pub(crate) fn hyperplane_counts(spec: &PolarSpec, hs: &[Q], size: &Q) -> Option<Vec<Q>> {
    let (a, b, n) = hyperplane_incidences(spec);
    let m = moment_matrix(hs);
    let rhs = [n, size * a, size * (size - int(1)) * b];
    let t = hs.len();
    let rows: Vec<Vec<Q>> = m.into_iter().take(t).collect();
    solve(&rows, &rhs[..t])
}

/// Number of tangent hyperplanes through a flat of size `c`, from
/// Σ_{H ⊇ Π} (|H∩K| − c) = |K| − c over the q+1 hyperplanes through Π,
/// when only two hyperplane sizes can occur.
#[cfg(test)]
pub(crate) fn tangents_from_sizes(spec: &PolarSpec, tangent: &Q, other: &Q, c: &Q, size: &Q) -> Q {
    let through = Q::from_integer((spec.ambient_order() as u64 + 1).into());
    (size - c - through * (other - c)) / (tangent - other)
}

fn natural(v: &Q, what: &str) -> Result<u64> {
    as_natural(v).ok_or_else(|| Error::Internal(format!("{what} is not a natural number")))
}

pub fn expected_profile(spec: &PolarSpec) -> Result<ExpectedProfile> {
    PolarSpec::new(spec.kind, spec.dim, spec.q)?;
    let raw = raw_profile(spec);
    let size = natural(&raw.size, "size")?;
    let hyperplane: Vec<u64> = raw
        .hyperplane
        .iter()
        .map(|h| natural(h, "hyperplane size"))
        .collect::<Result<_>>()?;
    let counts = hyperplane_counts(spec, &raw.hyperplane, &raw.size)
        .ok_or_else(|| Error::Internal("singular hyperplane count system".into()))?;
    let hyperplane_counts: Vec<u64> = counts
        .iter()
        .map(|h| natural(h, "hyperplane count"))
        .collect::<Result<_>>()?;

    let q = spec.ambient_order() as u64;
    let flat_points = if spec.dim >= 2 {
        (q.pow(spec.dim as u32 - 1) - 1) / (q - 1)
    } else {
        0
    };
    let mut codim2 = Vec::new();
    for (i, c) in raw.codim2.iter().enumerate() {
        let Some(size) = as_natural(c).filter(|&s| s <= flat_points) else {
            continue;
        };
        let tangents = match &raw.tangents[i] {
            Some(t) => Some(natural(t, "tangent count")?),
            None => None,
        };
        let in_tangent = natural(&raw.in_tangent[i], "tally in tangent hyperplane")?;
        codim2.push(CodimTwoType {
            label: i + 1,
            size,
            tangents,
            in_tangent,
        });
    }

    let mij = if spec.kind == PolarKind::Parabolic {
        Some(
            raw.hyperplane
                .iter()
                .map(|h| {
                    let row = within_hyperplane(spec, h, &raw.codim2)
                        .ok_or_else(|| Error::Internal("singular tally system".into()))?;
                    row.iter().map(|v| natural(v, "m_i^j")).collect()
                })
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };

    Ok(ExpectedProfile {
        spec: *spec,
        size,
        hyperplane,
        hyperplane_counts,
        tangent: raw.tangent,
        codim2,
        mij,
    })
}

/// The 3×3 matrix of tallies m_i^j for Q(2m, q); requires m₃¹ = m₂² = 0.
pub fn parabolic_mij(m: u32, q: u32) -> Result<[[u64; 3]; 3]> {
    let spec = PolarSpec::new(PolarKind::Parabolic, 2 * m as usize, q)?;
    let rows = expected_profile(&spec)?
        .mij
        .ok_or_else(|| Error::Internal("missing tally matrix".into()))?;
    let mut out = [[0u64; 3]; 3];
    for (j, row) in rows.iter().enumerate() {
        out[j].copy_from_slice(row);
    }
    if out[0][2] != 0 || out[1][1] != 0 {
        return Err(Error::Internal("expected m_3^1 = m_2^2 = 0".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::PolarKind::*;

    fn exp(kind: PolarKind, dim: usize, q: u32) -> ExpectedProfile {
        expected_profile(&PolarSpec::new(kind, dim, q).unwrap()).unwrap()
    }

    #[test]
    fn parabolic_q43() {
        let e = exp(Parabolic, 4, 3);
        assert_eq!(e.size, 40);
        assert_eq!(e.hyperplane, vec![16, 10, 13]);
        assert_eq!(e.codim2_sizes(), vec![4, 7, 1]);
        assert_eq!(e.hyperplane_counts, vec![45, 36, 40]);
        assert_eq!(e.tangent_size(), 13);
        assert!(e.consistent());
    }

    #[test]
    fn elliptic_q53() {
        let e = exp(Elliptic, 5, 3);
        assert_eq!(e.size, 112);
        assert_eq!(e.hyperplane, vec![40, 31]);
        assert_eq!(e.codim2_sizes(), vec![16, 13, 10, 4]);
        let t: Vec<_> = e.codim2.iter().map(|c| c.tangents.unwrap()).collect();
        assert_eq!(t, vec![0, 1, 2, 4]);
        let a: Vec<_> = e.codim2.iter().map(|c| c.in_tangent).collect();
        assert_eq!(a, vec![0, 30, 81, 10]);
        assert_eq!(e.tangent_count(), 112);
        assert!(e.consistent());
    }

    #[test]
    fn hermitian_h49() {
        let e = exp(Hermitian, 4, 3);
        assert_eq!(e.size, 2440);
        assert_eq!(e.hyperplane, vec![280, 253]);
        assert_eq!(e.codim2_sizes(), vec![28, 37, 10]);
        let t: Vec<_> = e.codim2.iter().map(|c| c.tangents.unwrap()).collect();
        assert_eq!(t, vec![4, 1, 10]);
        let a: Vec<_> = e.codim2.iter().map(|c| c.in_tangent).collect();
        assert_eq!(a, vec![729, 63, 28]);
        assert_eq!(e.tangent_count(), 2440);
    }

    #[test]
    fn mij_q43() {
        assert_eq!(parabolic_mij(2, 3).unwrap(), [[24, 16, 0], [30, 0, 10], [31, 6, 3]]);
        for (m, q) in [(2, 4), (2, 5), (3, 3), (3, 4)] {
            assert!(parabolic_mij(m, q).is_ok());
        }
    }

    #[test]
    fn low_dimensions_drop_impossible_types() {
        let e = exp(Elliptic, 3, 8);
        assert_eq!(e.codim2_sizes(), vec![2, 1, 0]);
        assert!(e.consistent());
        let h = exp(Hermitian, 3, 3);
        assert_eq!(h.codim2_sizes(), vec![4, 1, 10]);
        assert!(h.consistent());
    }

    #[test]
    fn consistency_across_parameters() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            for dim in 3..=9 {
                for kind in PolarKind::ALL {
                    let Ok(spec) = PolarSpec::new(kind, dim, q) else {
                        continue;
                    };
                    let e = expected_profile(&spec).unwrap();
                    assert!(e.consistent(), "{spec}");
                    if kind != Parabolic {
                        let t: Vec<_> = e.codim2.iter().filter_map(|c| c.tangents).collect();
                        assert!(t.iter().all(|&t| t <= spec.ambient_order() as u64 + 1));
                        assert_eq!(e.tangent_count(), e.size, "{spec}");
                    }
                }
            }
        }
    }

    #[test]
    fn tangent_counts_follow_from_sizes() {
        // The closed-form T_i agree with the single linear count through Π.
        for (kind, dim, q) in [
            (Hermitian, 4, 3),
            (Hyperbolic, 5, 3),
            (Elliptic, 5, 3),
            (Elliptic, 7, 4),
        ] {
            let spec = PolarSpec::new(kind, dim, q).unwrap();
            let raw = raw_profile(&spec);
            for (c, t) in raw.codim2.iter().zip(&raw.tangents) {
                let d = tangents_from_sizes(&spec, &raw.hyperplane[1], &raw.hyperplane[0], c, &raw.size);
                assert_eq!(Some(d), t.clone(), "{spec}");
            }
        }
    }

    #[test]
    fn in_tangent_follows_from_tallies() {
        // Hermitian: three unknowns; quadrics: A_1 = 0, three unknowns remain.
        let spec = PolarSpec::new(Hermitian, 4, 3).unwrap();
        let raw = raw_profile(&spec);
        let a = within_hyperplane(&spec, &raw.hyperplane[1], &raw.codim2).unwrap();
        assert_eq!(a, raw.in_tangent);
        for kind in [Hyperbolic, Elliptic] {
            let spec = PolarSpec::new(kind, 7, 3).unwrap();
            let raw = raw_profile(&spec);
            let a = within_hyperplane(&spec, &raw.hyperplane[1], &raw.codim2[1..]).unwrap();
            assert_eq!(a, raw.in_tangent[1..].to_vec());
        }
    }
}
