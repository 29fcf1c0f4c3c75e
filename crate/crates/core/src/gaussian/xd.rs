//! Polynomials `A_n` with `(x d/dx)^n e^{±x²} = A_n(x) e^{±x²}`.

use std::fmt;

use serde::Serialize;

use super::GaussianError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignConvention {
    /// acting on `e^{x²}`
    Plus,
    /// acting on `e^{-x²}`
    Minus,
}

/// Integer polynomial, `coeffs[k]` multiplying `x^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntPolynomial {
    pub coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn from_terms(terms: &[(usize, i128)]) -> Self {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![0; deg + 1];
        for &(k, c) in terms {
            coeffs[k] += c;
        }
        IntPolynomial { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeff(&self, k: usize) -> i128 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}x")?,
                _ => write!(f, "{a}x^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `A_0 … A_{n_max}` from `A_{k+1} = x A_k' + s·2x² A_k`.
pub fn xd_polynomials(n_max: usize, sign: SignConvention) -> Result<Vec<IntPolynomial>, GaussianError> {
    if n_max > 12 {
        return Err(GaussianError::TooManyPolynomials(n_max));
    }
    let s: i128 = match sign {
        SignConvention::Plus => 1,
        SignConvention::Minus => -1,
    };
    let mut out = vec![IntPolynomial { coeffs: vec![1] }];
    for _ in 0..n_max {
        let prev = out.last().expect("nonempty");
        let mut next = vec![0i128; prev.coeffs.len() + 2];
        for (k, &c) in prev.coeffs.iter().enumerate() {
            next[k] += k as i128 * c;
            next[k + 2] += 2 * s * c;
        }
        out.push(IntPolynomial { coeffs: next }.trimmed());
    }
    Ok(out)
}

/// `(degree, coefficient)` lists for `A_0 … A_4` as published.
pub const PAPER_XD_POLYNOMIALS: [&[(usize, i128)]; 5] =
    [&[(0, 1)], &[(2, 2)], &[(4, 4), (2, -4)], &[(6, 8), (4, -24), (2, 8)], &[(8, 16), (6, -96), (4, -112), (2, 16)]];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XdComparison {
    pub n: usize,
    pub paper: String,
    pub plus: String,
    pub minus: String,
    pub matches_plus: bool,
    pub matches_minus: bool,
    /// Every coefficient agrees in absolute value with the plus convention.
    pub magnitudes_match: bool,
    /// Degrees where the published sign differs from the plus convention.
    pub sign_mismatch_degrees_plus: Vec<usize>,
    /// Degrees where the published sign differs from the minus convention.
    pub sign_mismatch_degrees_minus: Vec<usize>,
}

fn sign_mismatches(paper: &IntPolynomial, ours: &IntPolynomial) -> Vec<usize> {
    let deg = paper.degree().max(ours.degree());
    (0..=deg).filter(|&k| paper.coeff(k).signum() != ours.coeff(k).signum()).collect()
}

/// Row-by-row comparison of the recurrence against the published list.
pub fn xd_comparison() -> Vec<XdComparison> {
    let n_max = PAPER_XD_POLYNOMIALS.len() - 1;
    let plus = xd_polynomials(n_max, SignConvention::Plus).expect("n_max <= 12");
    let minus = xd_polynomials(n_max, SignConvention::Minus).expect("n_max <= 12");
    PAPER_XD_POLYNOMIALS
        .iter()
        .enumerate()
        .map(|(n, terms)| {
            let paper = IntPolynomial::from_terms(terms);
            let deg = paper.degree().max(plus[n].degree());
            XdComparison {
                n,
                paper: paper.to_string(),
                plus: plus[n].to_string(),
                minus: minus[n].to_string(),
                matches_plus: paper == plus[n],
                matches_minus: paper == minus[n],
                magnitudes_match: (0..=deg).all(|k| paper.coeff(k).abs() == plus[n].coeff(k).abs()),
                sign_mismatch_degrees_plus: sign_mismatches(&paper, &plus[n]),
                sign_mismatch_degrees_minus: sign_mismatches(&paper, &minus[n]),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_polynomials() {
        let plus = xd_polynomials(4, SignConvention::Plus).unwrap();
        assert_eq!(plus[1].to_string(), "2x^2");
        assert_eq!(plus[2].to_string(), "4x^4 + 4x^2");
        assert_eq!(plus[3].to_string(), "8x^6 + 24x^4 + 8x^2");
        assert_eq!(plus[4].to_string(), "16x^8 + 96x^6 + 112x^4 + 16x^2");
        let minus = xd_polynomials(3, SignConvention::Minus).unwrap();
        assert_eq!(minus[1].to_string(), "-2x^2");
        assert_eq!(minus[2].to_string(), "4x^4 - 4x^2");
        assert_eq!(minus[3].to_string(), "-8x^6 + 24x^4 - 8x^2");
        assert_eq!(xd_polynomials(0, SignConvention::Plus).unwrap()[0].to_string(), "1");
        assert!(xd_polynomials(13, SignConvention::Plus).is_err());
        assert_eq!(xd_polynomials(12, SignConvention::Minus).unwrap()[12].degree(), 24);
    }

    #[test]
    fn recurrence_matches_differentiation() {
        // (x d/dx)(A e^{x²}) at a point, by central differences.
        let polys = xd_polynomials(3, SignConvention::Plus).unwrap();
        let x = 0.7;
        let h = 1e-5;
        let f = |y: f64| polys[2].eval(y) * (y * y).exp();
        let lhs = x * (f(x + h) - f(x - h)) / (2.0 * h);
        let rhs = polys[3].eval(x) * (x * x).exp();
        assert!((lhs - rhs).abs() < 1e-6 * rhs.abs());
    }
}
