//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored in ascending degree with no trailing zeros. This
//! is the substrate for the rational-function field; only the handful of
//! operations the walk generating functions need are implemented.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    /// The indeterminate.
    pub fn x() -> Poly {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_integers(cs: &[i64]) -> Poly {
        Poly::from_coeffs(
            cs.iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Lowest-degree non-zero coefficient with its degree.
    pub fn lowest(&self) -> Option<(usize, &BigRational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = rem[k].clone() / lead.clone();
            if !c.is_zero() {
                quo[k - dd] = c.clone();
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    let sub = dc * &c;
                    rem[idx] -= sub;
                }
            }
            rem.pop();
            while rem.last().map(Zero::is_zero).unwrap_or(false) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    /// Exact division; panics when the remainder is non-zero.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divmod(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (Euclid); gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) if !l.is_one() => {
                let inv = BigRational::one() / l.clone();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Multiplies by x^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::from_coeffs(coeffs)
    }

    /// Scales both into a common integer form for display: returns the pair
    /// (self * m, other * m) where m clears every denominator of both.
    pub fn clear_denominators(a: &Poly, b: &Poly) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut m = BigInt::one();
        for c in a.coeffs.iter().chain(b.coeffs.iter()) {
            m = lcm(&m, c.denom());
        }
        let ints = |p: &Poly| -> Vec<BigInt> {
            p.coeffs
                .iter()
                .map(|c| c.numer() * (&m / c.denom()))
                .collect()
        };
        let mut ai = ints(a);
        let mut bi = ints(b);
        // Strip shared integer content so the pair is primitive.
        let mut g = BigInt::zero();
        for c in ai.iter().chain(bi.iter()) {
            g = gcd_int(&g, c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in ai.iter_mut().chain(bi.iter_mut()) {
                *c /= &g;
            }
        }
        (ai, bi)
    }
}

fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / gcd_int(a, b)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Formats a coefficient sequence in ascending degree, e.g. `1 - 2z + z^3`.
pub(crate) fn format_int_poly(coeffs: &[BigInt]) -> String {
    if coeffs.iter().all(Zero::is_zero) {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign_neg = c.is_negative();
        if out.is_empty() {
            if sign_neg {
                out.push('-');
            }
        } else {
            out.push_str(if sign_neg { " - " } else { " + " });
        }
        let show_mag = !mag.is_one() || k == 0;
        if show_mag {
            out.push_str(&mag.to_string());
        }
        match k {
            0 => {}
            1 => out.push('z'),
            _ => {
                out.push_str("z^");
                out.push_str(&k.to_string());
            }
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Clear denominators only; the coefficients themselves must survive.
        let mut m = BigInt::one();
        for c in &self.coeffs {
            m = lcm(&m, c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&m / c.denom()))
            .collect();
        if m.is_one() {
            write!(f, "{}", format_int_poly(&ints))
        } else {
            write!(f, "({})/{}", format_int_poly(&ints), m)
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_integers(cs)
    }

    #[test]
    fn ring_ops() {
        let a = p(&[1, 2, 1]); // 1 + 2z + z^2
        let b = p(&[1, 1]); // 1 + z
        assert_eq!(&b * &b, a);
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!((&a + &Poly::zero()), a);
        assert_eq!(a.degree(), Some(2));
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // z^2 - 1
        let b = p(&[1, 1]); // z + 1
        let (q, r) = a.divmod(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b); // monic already
        let c = p(&[2, 2]); // 2 + 2z
        assert_eq!(a.gcd(&c), p(&[1, 1])); // gcd is made monic
        assert_eq!(a.div_exact(&b), p(&[-1, 1]));
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(&[1, -2, 0, -1]).to_string(), "1 - 2z - z^3");
        assert_eq!(p(&[0, 0, 3]).to_string(), "3z^2");
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[-1]).to_string(), "-1");
        assert_eq!(p(&[0, 1]).to_string(), "z");
    }
}
