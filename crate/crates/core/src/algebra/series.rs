//! Truncated power series in the formal parameter with exact scalar
//! coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{AlgebraError, Scalar};

/// `c_0 + c_1 ξ + … + c_N ξ^N`, closed under arithmetic at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSeries {
    coeffs: Vec<Scalar>,
}

impl ScalarSeries {
    pub fn zero(order: usize) -> Self {
        ScalarSeries { coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The formal parameter ξ itself.
    pub fn variable(order: usize) -> Self {
        Self::monomial(Scalar::one(), 1, order)
    }

    /// `c·ξ^power`, silently zero if `power > order`.
    pub fn monomial(c: Scalar, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Builds a series from explicit coefficients, padding with zeros or
    /// truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.resize(order + 1, Scalar::zero());
        ScalarSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Scalar) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Substitutes `ξ → r·ξ`.
    pub fn scale_arg(&self, r: &Scalar) -> Self {
        let mut pow = Scalar::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &pow);
            pow = &pow * r;
        }
        ScalarSeries { coeffs }
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for k in 1..=n {
            out.coeffs[k - 1] = &self.coeffs[k] * &Scalar::from_int(k as i64);
        }
        out
    }

    /// Antiderivative with zero constant term; the top coefficient is lost to
    /// truncation.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for k in 1..=n {
            out.coeffs[k] = &self.coeffs[k - 1] / &Scalar::from_int(k as i64);
        }
        out
    }

    fn check_order(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.order() != other.order() {
            return Err(AlgebraError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        Ok(self * other)
    }

    /// Exact quotient; requires a nonzero constant term in the divisor.
    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        let inv0 = other.coeffs[0].inv().ok_or(AlgebraError::SingularSeries("divisor has zero constant term"))?;
        let n = self.order();
        let mut q = Self::zero(n);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 0..k {
                acc -= &(&q.coeffs[j] * &other.coeffs[k - j]);
            }
            q.coeffs[k] = &acc * &inv0;
        }
        Ok(q)
    }

    /// `self(inner(ξ))`; `inner` must have a zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, AlgebraError> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(AlgebraError::SingularSeries("inner series of a composition must vanish at the origin"));
        }
        let n = self.order();
        // Horner scheme: c_0 + inner·(c_1 + inner·(…)).
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        let n = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::NonzeroConstantTerm);
        }
        // E' = s'·E, solved coefficient by coefficient.
        let ds = self.derivative();
        let mut e = Self::zero(n);
        e.coeffs[0] = Scalar::one();
        for k in 1..=n {
            let mut acc = Scalar::zero();
            for j in 0..k {
                acc += &(&ds.coeffs[j] * &e.coeffs[k - 1 - j]);
            }
            e.coeffs[k] = &acc / &Scalar::from_int(k as i64);
        }
        Ok(e)
    }

    /// Natural logarithm of a series with constant term one.
    pub fn ln(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_one() {
            return Err(AlgebraError::SingularSeries("logarithm needs constant term 1"));
        }
        Ok(self.derivative().div(self)?.integral())
    }

    fn taylor_from(order: usize, f: impl Fn(usize) -> Option<Scalar>) -> Self {
        let mut s = Self::zero(order);
        let mut fact = Scalar::one();
        for k in 0..=order {
            if k > 0 {
                fact = &fact * &Scalar::from_int(k as i64);
            }
            if let Some(num) = f(k) {
                s.coeffs[k] = &num / &fact;
            }
        }
        s
    }

    pub fn sin(order: usize) -> Self {
        Self::taylor_from(order, |k| (k % 2 == 1).then(|| Scalar::from_int(if k % 4 == 1 { 1 } else { -1 })))
    }

    pub fn cos(order: usize) -> Self {
        Self::taylor_from(order, |k| (k % 2 == 0).then(|| Scalar::from_int(if k % 4 == 0 { 1 } else { -1 })))
    }

    pub fn sinh(order: usize) -> Self {
        Self::taylor_from(order, |k| (k % 2 == 1).then(Scalar::one))
    }

    pub fn cosh(order: usize) -> Self {
        Self::taylor_from(order, |k| (k % 2 == 0).then(Scalar::one))
    }

    pub fn tan(order: usize) -> Self {
        Self::sin(order).div(&Self::cos(order)).expect("cos series is invertible")
    }

    pub fn tanh(order: usize) -> Self {
        Self::sinh(order).div(&Self::cosh(order)).expect("cosh series is invertible")
    }

    /// `ln(sech²(ξ)) = −2 ln cosh ξ`.
    pub fn ln_sech2(order: usize) -> Self {
        Self::cosh(order).ln().expect("cosh starts at 1").scale(&Scalar::from_int(-2))
    }

    /// `ln(cos²(ξ)) = 2 ln cos ξ`.
    pub fn ln_cos2(order: usize) -> Self {
        Self::cos(order).ln().expect("cos starts at 1").scale(&Scalar::from_int(2))
    }

    /// Float evaluation at a real point, for consistency checks against
    /// closed forms.
    pub fn eval_f64(&self, x: f64) -> num_complex::Complex64 {
        self.coeffs.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex64())
    }
}

impl<'a> Add<&'a ScalarSeries> for &'a ScalarSeries {
    type Output = ScalarSeries;
    /// Panics on order mismatch; use matching orders.
    fn add(self, rhs: &ScalarSeries) -> ScalarSeries {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        ScalarSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a ScalarSeries> for &'a ScalarSeries {
    type Output = ScalarSeries;
    fn sub(self, rhs: &ScalarSeries) -> ScalarSeries {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        ScalarSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a ScalarSeries> for &'a ScalarSeries {
    type Output = ScalarSeries;
    fn mul(self, rhs: &ScalarSeries) -> ScalarSeries {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        let n = self.order();
        let mut out = ScalarSeries::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }
}

impl Neg for &ScalarSeries {
    type Output = ScalarSeries;
    fn neg(self) -> ScalarSeries {
        ScalarSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn tan_low_order() {
        let t = ScalarSeries::tan(7);
        let expect = [r(0, 1), r(1, 1), r(0, 1), r(1, 3), r(0, 1), r(2, 15), r(0, 1), r(17, 315)];
        assert_eq!(t.coeffs(), &expect);
    }

    #[test]
    fn division_and_product_invert() {
        let a = ScalarSeries::cosh(9);
        let b = &ScalarSeries::one(9) + &ScalarSeries::sin(9);
        let q = a.div(&b).unwrap();
        assert_eq!(&q * &b, a);
        assert!(a.div(&ScalarSeries::sin(9)).is_err());
    }

    #[test]
    fn exp_ln_inverse() {
        let s = &ScalarSeries::sin(10) + &ScalarSeries::monomial(r(3, 7), 2, 10);
        assert_eq!(s.exp().unwrap().ln().unwrap(), s);
        assert!(ScalarSeries::one(4).exp().is_err());
    }

    #[test]
    fn compose_scaled_argument() {
        // tan(ξ/2) two ways.
        let half = ScalarSeries::monomial(r(1, 2), 1, 9);
        let a = ScalarSeries::tan(9).compose(&half).unwrap();
        let b = ScalarSeries::tan(9).scale_arg(&r(1, 2));
        assert_eq!(a, b);
        assert!(ScalarSeries::tan(9).compose(&ScalarSeries::cos(9)).is_err());
    }

    #[test]
    fn pythagoras() {
        let s = ScalarSeries::sin(12);
        let c = ScalarSeries::cos(12);
        assert_eq!(&(&s * &s) + &(&c * &c), ScalarSeries::one(12));
        let sh = ScalarSeries::sinh(12);
        let ch = ScalarSeries::cosh(12);
        assert_eq!(&(&ch * &ch) - &(&sh * &sh), ScalarSeries::one(12));
    }
}
