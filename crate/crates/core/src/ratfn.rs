//! Rational functions in one variable over the rationals.
//!
//! Every value is kept in a canonical form: numerator and denominator are
//! coprime and the lowest-degree non-zero coefficient of the denominator is
//! 1, so the denominator always has a non-zero constant term whenever the
//! function is finite at the origin. Power-series coefficients fall out of a
//! linear recurrence against the denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_int_poly, Poly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFn::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> RationalFn {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFn {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_exact(&g), den.div_exact(&g));
        let (_, low) = den.lowest().expect("non-zero denominator");
        if !low.is_one() {
            let inv = BigRational::one() / low.clone();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFn { num, den }
    }

    pub fn zero() -> RationalFn {
        RationalFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RationalFn {
        RationalFn {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> RationalFn {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    /// The monomial z.
    pub fn z() -> RationalFn {
        RationalFn::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn inverse(&self) -> Result<RationalFn> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFn::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RationalFn) -> Result<RationalFn> {
        Ok(self * &rhs.inverse()?)
    }

    /// Exact evaluation at a point away from the poles.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(x) / d)
    }

    /// First `n` power-series coefficients about the origin.
    pub fn series(&self, n: usize) -> Result<Vec<BigRational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::PoleAtZero);
        }
        let mut out: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = self.num.coeff(k);
            for j in 1..=k {
                let dj = self.den.coeff(j);
                if dj.is_zero() {
                    continue;
                }
                s -= dj * &out[k - j];
            }
            out.push(s / &d0);
        }
        Ok(out)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFn::reduced(num, den)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFn::reduced(num, den)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = Poly::clear_denominators(&self.num, &self.den);
        write!(f, "({}) / ({})", format_int_poly(&n), format_int_poly(&d))
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}
