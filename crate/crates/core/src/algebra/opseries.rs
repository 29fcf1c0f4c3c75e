use num_traits::{One, Zero};

use super::poly::{poly_mul, OperatorPolynomial, Word};
use super::table::CommutationTable;
use super::{AlgebraError, Scalar, ScalarSeries};

/// `P_0 + P_1 ξ + … + P_N ξ^N` with normal-ordered polynomial coefficients,
/// tagged with the name of the table it was built over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSeries {
    table: String,
    coeffs: Vec<OperatorPolynomial>,
}

impl OperatorSeries {
    pub fn identity(order: usize, table: &CommutationTable) -> Self {
        let mut coeffs = vec![OperatorPolynomial::zero(); order + 1];
        coeffs[0] = OperatorPolynomial::identity();
        OperatorSeries { table: table.name().to_string(), coeffs }
    }

    /// Lifts a scalar series to an operator series (multiples of the identity).
    pub fn from_scalar_series(s: &ScalarSeries, table: &CommutationTable) -> Self {
        OperatorSeries {
            table: table.name().to_string(),
            coeffs: s.coeffs().iter().map(|c| OperatorPolynomial::scalar(c.clone())).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn table_name(&self) -> &str {
        &self.table
    }

    pub fn coeff(&self, k: usize) -> &OperatorPolynomial {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[OperatorPolynomial] {
        &self.coeffs
    }

    /// Replaces one coefficient; used to build deliberately perturbed series.
    pub fn with_coeff(mut self, k: usize, p: OperatorPolynomial) -> Self {
        self.coeffs[k] = p;
        self
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.order() != other.order() {
            return Err(AlgebraError::OrderMismatch { left: self.order(), right: other.order() });
        }
        if self.table != other.table {
            return Err(AlgebraError::TableMismatch);
        }
        Ok(())
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self, table: &CommutationTable) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let n = self.order();
        let mut coeffs = vec![OperatorPolynomial::zero(); n + 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in other.coeffs[..=n - i].iter().enumerate() {
                if !q.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &poly_mul(p, q, table)?;
                }
            }
        }
        Ok(OperatorSeries { table: self.table.clone(), coeffs })
    }

    /// Ordered product of several series, leftmost first.
    pub fn product(factors: &[OperatorSeries], table: &CommutationTable) -> Result<Self, AlgebraError> {
        let (first, rest) = factors.split_first().ok_or(AlgebraError::SingularSeries("empty product"))?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.mul(f, table))
    }
}

/// `Σ_{n=0..N} coeff(ξ)^n · gen^n / n!`, i.e. `exp(coeff(ξ)·gen)` truncated at
/// order `N`. `coeff` must vanish at ξ = 0.
pub fn exp_series(
    coeff: &ScalarSeries,
    gen: &OperatorPolynomial,
    order: usize,
    table: &CommutationTable,
) -> Result<OperatorSeries, AlgebraError> {
    if coeff.order() != order {
        return Err(AlgebraError::OrderMismatch { left: coeff.order(), right: order });
    }
    if !coeff.coeff(0).is_zero() {
        return Err(AlgebraError::NonzeroConstantTerm);
    }
    let mut out = OperatorSeries::identity(order, table);
    let mut coeff_pow = ScalarSeries::one(order);
    let mut gen_pow = OperatorPolynomial::identity();
    let mut fact = Scalar::one();
    for n in 1..=order {
        coeff_pow = &coeff_pow * coeff;
        gen_pow = poly_mul(&gen_pow, gen, table)?;
        fact = &fact * &Scalar::from_int(n as i64);
        let inv_fact = Scalar::one() / fact.clone();
        for k in n..=order {
            let c = coeff_pow.coeff(k);
            if !c.is_zero() {
                out.coeffs[k] = &out.coeffs[k] + &gen_pow.scale(&(c * &inv_fact));
            }
        }
    }
    Ok(out)
}

/// `exp(ξ(a + b))` truncated at order `N`.
pub fn evolution_series(
    a: &OperatorPolynomial,
    b: &OperatorPolynomial,
    order: usize,
    table: &CommutationTable,
) -> Result<OperatorSeries, AlgebraError> {
    exp_series(&ScalarSeries::variable(order), &(a + b), order, table)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub order: usize,
    pub word: Word,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub equal: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Exact coefficient-by-coefficient comparison. A mismatch is reported at the
/// lowest order, and within it at the lexicographically first word.
pub fn verify_identity(lhs: &OperatorSeries, rhs: &OperatorSeries) -> Result<IdentityReport, AlgebraError> {
    lhs.compatible(rhs)?;
    for (k, (p, q)) in lhs.coeffs.iter().zip(&rhs.coeffs).enumerate() {
        if p == q {
            continue;
        }
        for w in p.union_words(q) {
            let (a, b) = (p.coeff(w), q.coeff(w));
            if a != b {
                return Ok(IdentityReport {
                    equal: false,
                    first_mismatch: Some(Mismatch { order: k, word: w.clone(), lhs: a, rhs: b }),
                });
            }
        }
    }
    Ok(IdentityReport { equal: true, first_mismatch: None })
}
