//! Exact rationals, univariate polynomials over them, and small linear solves.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// q^e for any integer exponent, exactly.
pub fn qpow(q: u64, e: i64) -> Q {
    let base = Q::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

/// (−1)^e.
pub fn sign(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// The value as a non-negative machine integer, if it is one.
pub fn as_natural(v: &Q) -> Option<u64> {
    (v.is_integer() && !v.is_negative()).then(|| v.to_integer().to_u64())?
}

pub fn display(v: &Q) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Dense polynomial, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn constant(c: Q) -> Self {
        Poly(vec![c]).trim()
    }

    /// The identity polynomial x.
    pub fn x() -> Self {
        Poly(vec![Q::zero(), Q::one()])
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Poly(self.0.iter().map(|a| a * c).collect()).trim()
    }

    /// Quotient and remainder of division by (x − root).
    pub fn div_linear(&self, root: &Q) -> (Poly, Q) {
        let Some(deg) = self.degree() else {
            return (Poly(vec![]), Q::zero());
        };
        let mut quot = vec![Q::zero(); deg];
        let mut carry = Q::zero();
        for i in (0..=deg).rev() {
            let c = &self.0[i] + &carry * root;
            if i == 0 {
                return (Poly(quot).trim(), c);
            }
            quot[i - 1] = c.clone();
            carry = c;
        }
        unreachable!()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect()).trim()
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(vec![]);
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, pv) in row.iter_mut().zip(&pivot) {
                    *x -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves M·y = rhs where the right-hand sides are polynomials.
pub fn solve_poly(m: &[Vec<Q>], rhs: &[Poly]) -> Option<Vec<Poly>> {
    let inv = inverse(m)?;
    Some(
        inv.iter()
            .map(|row| row.iter().zip(rhs).fold(Poly(vec![]), |acc, (c, p)| &acc + &p.scale(c)))
            .collect(),
    )
}

pub fn solve(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let polys: Vec<Poly> = rhs.iter().cloned().map(Poly::constant).collect();
    Some(solve_poly(m, &polys)?.into_iter().map(|p| p.coeff(0)).collect())
}

/// Rows (1, v, v(v−1)) for the count/pair double-counting systems.
pub fn moment_matrix(values: &[Q]) -> Vec<Vec<Q>> {
    vec![
        values.iter().map(|_| int(1)).collect(),
        values.to_vec(),
        values.iter().map(|v| v * (v - int(1))).collect(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_arithmetic() {
        // (x - 2)(x + 3) = x^2 + x - 6
        let a = &Poly::x() - &Poly::constant(int(2));
        let b = &Poly::x() + &Poly::constant(int(3));
        let p = &a * &b;
        assert_eq!(p, Poly(vec![int(-6), int(1), int(1)]));
        assert_eq!(p.eval(&int(2)), int(0));
        let (quot, rem) = p.div_linear(&int(2));
        assert_eq!(quot, b);
        assert_eq!(rem, int(0));
        let (_, rem) = p.div_linear(&int(1));
        assert_eq!(rem, int(-4));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(qpow(3, -2), Q::new(1.into(), 9.into()));
        assert_eq!(qpow(3, 0), int(1));
        assert_eq!(sign(3), int(-1));
    }

    #[test]
    fn linear_solve() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let y = solve(&m, &[int(5), int(10)]).unwrap();
        assert_eq!(y, vec![int(1), int(3)]);
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn naturals() {
        assert_eq!(as_natural(&int(7)), Some(7));
        assert_eq!(as_natural(&int(-1)), None);
        assert_eq!(as_natural(&Q::new(16.into(), 5.into())), None);
        assert_eq!(display(&Q::new(16.into(), 5.into())), "16/5");
    }
}
