//! Arithmetic in GF(p^k) for small prime powers.
//!
//! An element is encoded as the integer whose base-p digits are the
//! coefficients of its polynomial representative, constant digit first.
//! Multiplication and inversion go through log/antilog tables over a fixed
//! primitive element; addition is digit-wise mod p (tabulated for q <= 256).

use crate::error::{Error, Result};

/// Encoded field element, always in `[0, q)`.
pub type FieldElement = u16;

const MAX_ORDER: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone)]
pub struct FieldTable {
    p: u32,
    k: u32,
    q: u32,
    irreducible: Vec<u32>,
    generator: FieldElement,
    exp: Vec<FieldElement>,
    log: Vec<u32>,
    neg: Vec<FieldElement>,
    add: Option<Vec<FieldElement>>,
}

impl FieldTable {
    /// Builds GF(p^k) over the lexicographically smallest monic irreducible
    /// polynomial of degree k (ordered by the integer encoding of its lower
    /// coefficients).
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::FieldTooLarge { p, k });
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, k })?;
        let p32 = p as u32;
        let q32 = q as u32;

        let irreducible = smallest_irreducible(p32, k);
        let modulus = Modulus {
            p: p32,
            k,
            irreducible: &irreducible,
        };

        let generator = (1..q32)
            .find(|&g| multiplicative_order(&modulus, g) == q32 - 1)
            .ok_or_else(|| Error::Internal(format!("no primitive element in GF({q})")))?;

        let mut exp = vec![0 as FieldElement; 2 * (q32 as usize - 1).max(1)];
        let mut log = vec![0u32; q32 as usize];
        let mut x = 1u32;
        for i in 0..(q32 - 1) {
            exp[i as usize] = x as FieldElement;
            log[x as usize] = i;
            x = modulus.mul(x, generator);
        }
        for i in (q32 as usize - 1)..exp.len() {
            exp[i] = exp[i - (q32 as usize - 1)];
        }

        let neg: Vec<FieldElement> = (0..q32)
            .map(|a| digitwise(p32, a, 0, |x, _| (p32 - x) % p32) as FieldElement)
            .collect();

        let add = (q32 <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0 as FieldElement; (q32 * q32) as usize];
            for a in 0..q32 {
                for b in 0..q32 {
                    t[(a * q32 + b) as usize] = digitwise(p32, a, b, |x, y| (x + y) % p32) as FieldElement;
                }
            }
            t
        });

        Ok(Self {
            p: p32,
            k,
            q: q32,
            irreducible,
            generator: generator as FieldElement,
            exp,
            log,
            neg,
            add,
        })
    }

    /// Field of the given prime-power order.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64).ok_or(Error::NotPrime(q as u64))?;
        Self::new(p, k)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first, monic.
    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Order of the subfield fixed by conjugation, when the degree is even.
    pub fn subfield_order(&self) -> Option<u32> {
        self.k.is_multiple_of(2).then(|| self.p.pow(self.k / 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|a| a as FieldElement)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        n.rem_euclid(self.p as i64) as FieldElement
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => {
                let p = self.p;
                digitwise(p, a as u32, b as u32, |x, y| (x + y) % p) as FieldElement
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    /// Inverse of a nonzero element; panics on zero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a != 0);
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    /// x -> x^sqrt(q) on GF(q) when the degree is even (the involution
    /// defining Hermitian conjugation); x -> x^p otherwise.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        let e = self.subfield_order().unwrap_or(self.p);
        self.pow(a, e as u64)
    }

    /// a * conj(a), which lies in the subfield GF(sqrt(q)).
    pub fn hermitian_norm(&self, a: FieldElement) -> FieldElement {
        self.mul(a, self.frobenius(a))
    }

    pub fn in_subfield(&self, a: FieldElement) -> bool {
        self.frobenius(a) == a
    }
}

struct Modulus<'a> {
    p: u32,
    k: u32,
    irreducible: &'a [u32],
}

impl Modulus<'_> {
    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, k) = (self.p, self.k as usize);
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            // x^k = -(lower coefficients)
            for (i, &m) in self.irreducible[..k].iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - m % p) * c) % p;
            }
            prod[deg] = 0;
        }
        self.encode(&prod[..k])
    }
}

fn multiplicative_order(m: &Modulus<'_>, g: u32) -> u32 {
    let mut x = g;
    let mut ord = 1;
    while x != 1 {
        x = m.mul(x, g);
        ord += 1;
        if x == 0 || ord > m.p.pow(m.k) {
            return 0;
        }
    }
    ord
}

fn digitwise(p: u32, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += f(a % p, b % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let lower_count = p.pow(k);
    for lower in 0..lower_count {
        let mut poly = Vec::with_capacity(k as usize + 1);
        let mut x = lower;
        for _ in 0..k {
            poly.push(x % p);
            x /= p;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for lower in 0..p.pow(d as u32) {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = lower;
            for _ in 0..d {
                divisor.push(x % p);
                x /= p;
            }
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(num: &[u32], monic: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let d = monic.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for (i, &m) in monic.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - m) * lead) % p;
            }
        }
        r.pop();
    }
    r
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes q = p^k, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<FieldTable> {
        [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
            .iter()
            .map(|&q| FieldTable::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn canonical_irreducibles() {
        assert_eq!(FieldTable::new(3, 1).unwrap().irreducible(), &[0, 1]);
        assert_eq!(FieldTable::new(2, 2).unwrap().irreducible(), &[1, 1, 1]);
        assert_eq!(FieldTable::new(3, 2).unwrap().irreducible(), &[1, 0, 1]);
        assert_eq!(FieldTable::new(2, 3).unwrap().irreducible(), &[1, 1, 0, 1]);
        assert_eq!(FieldTable::new(2, 4).unwrap().irreducible(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn irreducible_has_no_root() {
        for f in all_fields().into_iter().filter(|f| f.degree() >= 2) {
            let p = f.prime();
            let poly = f.irreducible();
            for x in 0..p {
                let v = poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                assert_ne!(v, 0, "root {x} in GF({})", f.order());
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldTable::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldTable::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(FieldTable::new(2, 16).is_ok());
    }

    #[test]
    fn small_arithmetic() {
        let f3 = FieldTable::new(3, 1).unwrap();
        assert_eq!(f3.add(2, 2), 1);
        let f4 = FieldTable::new(2, 2).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        let f9 = FieldTable::new(3, 2).unwrap();
        // t = 3, 2t = 6
        assert_eq!(f9.inv(3).unwrap(), 6);
        assert_eq!(f9.inv(0), Err(Error::DivisionByZero(9)));
    }

    #[test]
    fn frobenius_and_norm_examples() {
        let f9 = FieldTable::new(3, 2).unwrap();
        assert_eq!(f9.frobenius(3), 6);
        assert_eq!(f9.hermitian_norm(3), 1);
        assert_eq!(f9.hermitian_norm(0), 0);
        let f4 = FieldTable::new(2, 2).unwrap();
        assert_eq!(f4.frobenius(2), 3);
        for a in 1..4 {
            assert_eq!(f4.hermitian_norm(a), 1);
        }
        for f in all_fields() {
            assert_eq!(f.frobenius(1), 1);
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let q = f.order() as FieldElement;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn exp_log_inverse() {
        for f in all_fields() {
            let q = f.order();
            let g = f.generator();
            assert_eq!(f.pow(g, (q - 1) as u64), 1);
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                assert!(seen.insert(x));
                x = f.mul(x, g);
            }
            assert_eq!(x, 1);
        }
    }

    #[test]
    fn conjugation_is_involutive_and_norm_multiplicative() {
        for q in [4, 9, 16] {
            let f = FieldTable::with_order(q).unwrap();
            let mut norms = std::collections::BTreeSet::new();
            for a in f.elements() {
                assert_eq!(f.frobenius(f.frobenius(a)), a);
                let n = f.hermitian_norm(a);
                assert!(f.in_subfield(n));
                norms.insert(n);
                for b in f.elements() {
                    assert_eq!(
                        f.hermitian_norm(f.mul(a, b)),
                        f.mul(f.hermitian_norm(a), f.hermitian_norm(b))
                    );
                }
            }
            assert_eq!(norms.len() as u32, f.subfield_order().unwrap());
        }
    }

    #[test]
    fn large_field_without_add_table() {
        let f = FieldTable::new(2, 9).unwrap();
        assert_eq!(f.order(), 512);
        for a in (0..512).step_by(37) {
            for b in (0..512).step_by(41) {
                assert_eq!(f.add(a, b), a ^ b);
            }
        }
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
