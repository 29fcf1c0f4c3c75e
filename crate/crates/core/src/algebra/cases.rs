//! Ready-made factorization identities.
//!
//! Each [`IdentityCase`] pairs `exp(ξ(a + b))` with an ordered product of
//! single-generator exponentials whose coefficient functions are given by
//! their exact Taylor series. Transcendental coefficients come from the
//! rational sin/cos/tan/tanh/ln series in [`ScalarSeries`]; parameters enter
//! only through exact rational powers, so no square roots are needed even
//! when the closed forms are written with `√γ`.

use num_traits::Zero;

use super::{
    builtin_table, evolution_series, exp_series, verify_identity, AlgebraError, BuiltinTable, CommutationTable,
    IdentityReport, OperatorPolynomial, OperatorSeries, Scalar, ScalarSeries,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityCase {
    /// `e^{ξ(A+B)} = e^{−ξ²δ/2} e^{ξA} e^{ξB}` for `[A,B] = δ`.
    Bch { delta: Scalar },
    /// `e^{ξ(A+B)} = e^{kξ³/3} e^{ξA} e^{ξB} e^{−ξ²C/2}`.
    Case1 { k: Scalar },
    /// `e^{fB} e^{gA} e^{hB}` with `f = h = tan(ξ√γ/2)/√γ`, `g = sin(ξ√γ)/√γ`.
    Case2Bab { gamma: Scalar },
    /// `e^{f₁A} e^{f₂B} e^{f₃A}` with the same coefficient functions.
    Case2Aba { gamma: Scalar },
    /// `e^{hC} e^{fA} e^{gB}` with `f = sin(2ξ√γ)/(2√γ)`, `g = tan(ξ√γ)/√γ`,
    /// `h = ln(cos²(ξ√γ))/(2γ)`.
    Case2Cab { gamma: Scalar },
    /// The hyperbolic coefficients `f = tanh(u)/(√κ sech²u)`,
    /// `g = tanh(u)/√κ`, `h = ln(sech²u)/(2κ)` with `u = ξ√κ`, checked on the
    /// case-2 table with `γ = −κ` (where they hold).
    Case2CabHyperbolic { kappa: Scalar },
    /// Harmonic oscillator on `{X2, XD, D2}`, series variable `t`:
    /// `e^{μD2} e^{−δX2} e^{μD2}`.
    HarmonicBab { m: Scalar, omega: Scalar, hbar: Scalar },
    /// `e^{−αX2} e^{βD2} e^{−αX2}`.
    HarmonicAba { m: Scalar, omega: Scalar, hbar: Scalar },
    /// `e^{c_h (XD + 1/2)} e^{c_f X2} e^{c_g D2}`.
    HarmonicCab { m: Scalar, omega: Scalar, hbar: Scalar },
    /// Constant force on `{D2, X1, D1}`, series variable `t`, in the ordering
    /// phase · e^{D2} · e^{X1} · e^{D1}.
    ForcePxp { m: Scalar, hbar: Scalar, force: Scalar },
    /// phase · e^{X1} · e^{D2} · e^{D1}.
    ForceXpp { m: Scalar, hbar: Scalar, force: Scalar },
}

/// One factor `exp(coeff(ξ)·gen)` of a product.
#[derive(Clone, Debug)]
pub struct Factor {
    pub label: String,
    pub coeff: ScalarSeries,
    pub gen: OperatorPolynomial,
}

/// `exp(ξ(a + b))` against an ordered product of factors.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub table: CommutationTable,
    pub a: OperatorPolynomial,
    pub b: OperatorPolynomial,
    pub factors: Vec<Factor>,
    pub order: usize,
}

impl Factorization {
    pub fn lhs(&self) -> Result<OperatorSeries, AlgebraError> {
        evolution_series(&self.a, &self.b, self.order, &self.table)
    }

    pub fn rhs(&self) -> Result<OperatorSeries, AlgebraError> {
        let series = self
            .factors
            .iter()
            .map(|f| exp_series(&f.coeff, &f.gen, self.order, &self.table))
            .collect::<Result<Vec<_>, _>>()?;
        OperatorSeries::product(&series, &self.table)
    }

    pub fn verify(&self) -> Result<IdentityReport, AlgebraError> {
        verify_identity(&self.lhs()?, &self.rhs()?)
    }
}

/// `Σ c_k · scale^k · γ^{(k−1)/2} ξ^k` for an odd series `c`, i.e. the
/// series of `f(scale·ξ√γ)/√γ`.
pub fn odd_over_sqrt(series: &ScalarSeries, scale: &Scalar, gamma: &Scalar) -> ScalarSeries {
    let n = series.order();
    let mut out = ScalarSeries::zero(n);
    for k in (1..=n).step_by(2) {
        let c = series.coeff(k);
        if !c.is_zero() {
            out.set_coeff(k, &(c * &scale.pow(k as u32)) * &gamma.pow(((k - 1) / 2) as u32));
        }
    }
    debug_assert!((0..=n).step_by(2).all(|k| series.coeff(k).is_zero()), "series must be odd");
    out
}

/// `Σ c_k · scale^k · γ^{k/2 − 1} ξ^k` for an even series with `c_0 = 0`,
/// i.e. the series of `f(scale·ξ√γ)/γ`.
pub fn even_over_gamma(series: &ScalarSeries, scale: &Scalar, gamma: &Scalar) -> ScalarSeries {
    let n = series.order();
    let mut out = ScalarSeries::zero(n);
    for k in (2..=n).step_by(2) {
        let c = series.coeff(k);
        if !c.is_zero() {
            out.set_coeff(k, &(c * &scale.pow(k as u32)) * &gamma.pow((k / 2 - 1) as u32));
        }
    }
    debug_assert!(series.coeff(0).is_zero() && (1..=n).step_by(2).all(|k| series.coeff(k).is_zero()));
    out
}

fn factor(label: &str, coeff: ScalarSeries, gen: OperatorPolynomial) -> Factor {
    Factor { label: label.to_string(), coeff, gen }
}

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}

fn nonzero(name: &'static str, v: &Scalar) -> Result<(), AlgebraError> {
    if v.is_zero() {
        return Err(AlgebraError::SingularSeries(name));
    }
    Ok(())
}

impl IdentityCase {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityCase::Bch { .. } => "bch",
            IdentityCase::Case1 { .. } => "case1",
            IdentityCase::Case2Bab { .. } => "case2-bab",
            IdentityCase::Case2Aba { .. } => "case2-aba",
            IdentityCase::Case2Cab { .. } => "case2-cab",
            IdentityCase::Case2CabHyperbolic { .. } => "case2-cab-hyperbolic",
            IdentityCase::HarmonicBab { .. } => "ho-bab",
            IdentityCase::HarmonicAba { .. } => "ho-aba",
            IdentityCase::HarmonicCab { .. } => "ho-cab",
            IdentityCase::ForcePxp { .. } => "force",
            IdentityCase::ForceXpp { .. } => "force-xpp",
        }
    }

    /// Builds the table, the two operators and the factor list at `order`.
    pub fn factorization(&self, order: usize) -> Result<Factorization, AlgebraError> {
        let xi = ScalarSeries::variable(order);
        let one = Scalar::from_int(1);
        let abstract_ab = |table: CommutationTable| -> Result<(CommutationTable, OperatorPolynomial, OperatorPolynomial), AlgebraError> {
            let a = OperatorPolynomial::generator(table.id("A")?);
            let b = OperatorPolynomial::generator(table.id("B")?);
            Ok((table, a, b))
        };
        let tan = ScalarSeries::tan(order);
        let sin = ScalarSeries::sin(order);

        let (table, a, b, factors) = match self {
            IdentityCase::Bch { delta } => {
                let (t, a, b) = abstract_ab(builtin_table(&BuiltinTable::Bch { delta: delta.clone() })?)?;
                let f1 = ScalarSeries::monomial(Scalar::ratio(-1, 2), 2, order);
                let factors = vec![
                    factor("exp(f1·[A,B])", f1, OperatorPolynomial::scalar(delta.clone())),
                    factor("exp(f2·A)", xi.clone(), a.clone()),
                    factor("exp(f3·B)", xi.clone(), b.clone()),
                ];
                (t, a, b, factors)
            }
            IdentityCase::Case1 { k } => {
                let (t, a, b) = abstract_ab(builtin_table(&BuiltinTable::Case1 { k: k.clone() })?)?;
                let c = OperatorPolynomial::generator(t.id("C")?);
                let r = ScalarSeries::monomial(k * &Scalar::ratio(1, 3), 3, order);
                let h = ScalarSeries::monomial(Scalar::ratio(-1, 2), 2, order);
                let factors = vec![
                    factor("exp(r)", r, OperatorPolynomial::identity()),
                    factor("exp(f·A)", xi.clone(), a.clone()),
                    factor("exp(g·B)", xi.clone(), b.clone()),
                    factor("exp(h·C)", h, c),
                ];
                (t, a, b, factors)
            }
            IdentityCase::Case2Bab { gamma } | IdentityCase::Case2Aba { gamma } => {
                let (t, a, b) = abstract_ab(builtin_table(&BuiltinTable::Case2 { gamma: gamma.clone() })?)?;
                let outer = odd_over_sqrt(&tan, &half(), gamma);
                let middle = odd_over_sqrt(&sin, &one, gamma);
                let factors = if matches!(self, IdentityCase::Case2Bab { .. }) {
                    vec![
                        factor("exp(f·B)", outer.clone(), b.clone()),
                        factor("exp(g·A)", middle, a.clone()),
                        factor("exp(h·B)", outer, b.clone()),
                    ]
                } else {
                    vec![
                        factor("exp(f1·A)", outer.clone(), a.clone()),
                        factor("exp(f2·B)", middle, b.clone()),
                        factor("exp(f3·A)", outer, a.clone()),
                    ]
                };
                (t, a, b, factors)
            }
            IdentityCase::Case2Cab { gamma } => {
                let (t, a, b) = abstract_ab(builtin_table(&BuiltinTable::Case2 { gamma: gamma.clone() })?)?;
                let c = OperatorPolynomial::generator(t.id("C")?);
                let f = odd_over_sqrt(&sin, &Scalar::from_int(2), gamma).scale(&half());
                let g = odd_over_sqrt(&tan, &one, gamma);
                let h = even_over_gamma(&ScalarSeries::ln_cos2(order), &one, gamma).scale(&half());
                let factors =
                    vec![factor("exp(h·C)", h, c), factor("exp(f·A)", f, a.clone()), factor("exp(g·B)", g, b.clone())];
                (t, a, b, factors)
            }
            IdentityCase::Case2CabHyperbolic { kappa } => {
                let (t, a, b) = abstract_ab(builtin_table(&BuiltinTable::Case2 { gamma: -kappa })?)?;
                let c = OperatorPolynomial::generator(t.id("C")?);
                // tanh(u)/sech²(u) = tanh(u)·cosh²(u)
                let cosh = ScalarSeries::cosh(order);
                let tanh = ScalarSeries::tanh(order);
                let f_u = &tanh * &(&cosh * &cosh);
                let f = odd_over_sqrt(&f_u, &one, kappa);
                let g = odd_over_sqrt(&tanh, &one, kappa);
                let h = even_over_gamma(&ScalarSeries::ln_sech2(order), &one, kappa).scale(&half());
                let factors =
                    vec![factor("exp(h·C)", h, c), factor("exp(f·A)", f, a.clone()), factor("exp(g·B)", g, b.clone())];
                (t, a, b, factors)
            }
            IdentityCase::HarmonicBab { m, omega, hbar }
            | IdentityCase::HarmonicAba { m, omega, hbar }
            | IdentityCase::HarmonicCab { m, omega, hbar } => {
                nonzero("mass must be nonzero", m)?;
                nonzero("hbar must be nonzero", hbar)?;
                nonzero("omega must be nonzero", omega)?;
                let t = builtin_table(&BuiltinTable::Sl2Realization)?;
                let (x2, xd, d2) = (t.id("X2")?, t.id("XD")?, t.id("D2")?);
                let i = Scalar::i();
                let two = Scalar::from_int(2);
                // a = −(i m ω² / 2ħ) X2, b = (i ħ / 2m) D2
                let pot = -(&(&(&i * m) * &(omega * omega)) / &(&two * hbar));
                let kin = &(&i * hbar) / &(&two * m);
                let a = OperatorPolynomial::scaled_generator(pot, x2);
                let b = OperatorPolynomial::scaled_generator(kin, d2);
                let x_pref = &(&i * m) * &(omega / &(&two * hbar)); // i m ω / 2ħ
                let d_pref = &(&i * hbar) / &(&(&two * m) * omega); // i ħ / 2mω
                let tan_half = tan.scale_arg(&(omega * &half()));
                let sin_full = sin.scale_arg(omega);
                let factors = match self {
                    IdentityCase::HarmonicBab { .. } => {
                        let mu = tan_half.scale(&d_pref);
                        let neg_delta = sin_full.scale(&-&x_pref);
                        vec![
                            factor("exp(μ·D2)", mu.clone(), OperatorPolynomial::generator(d2)),
                            factor("exp(−δ·X2)", neg_delta, OperatorPolynomial::generator(x2)),
                            factor("exp(μ·D2)", mu, OperatorPolynomial::generator(d2)),
                        ]
                    }
                    IdentityCase::HarmonicAba { .. } => {
                        let neg_alpha = tan_half.scale(&-&x_pref);
                        let beta = sin_full.scale(&d_pref);
                        vec![
                            factor("exp(−α·X2)", neg_alpha.clone(), OperatorPolynomial::generator(x2)),
                            factor("exp(β·D2)", beta, OperatorPolynomial::generator(d2)),
                            factor("exp(−α·X2)", neg_alpha, OperatorPolynomial::generator(x2)),
                        ]
                    }
                    _ => {
                        // −ln cos(ωt) · (XD + 1/2), −(i m ω / 4ħ) sin(2ωt) · X2, (i ħ / 2mω) tan(ωt) · D2
                        let dil = ScalarSeries::ln_cos2(order).scale_arg(omega).scale(&Scalar::ratio(-1, 2));
                        let mut dil_gen = OperatorPolynomial::generator(xd);
                        dil_gen = &dil_gen + &OperatorPolynomial::scalar(half());
                        let quad = sin.scale_arg(&(&two * omega)).scale(&-(&x_pref * &half()));
                        let diff = tan.scale_arg(omega).scale(&d_pref);
                        vec![
                            factor("exp(c_h·(XD+1/2))", dil, dil_gen),
                            factor("exp(c_f·X2)", quad, OperatorPolynomial::generator(x2)),
                            factor("exp(c_g·D2)", diff, OperatorPolynomial::generator(d2)),
                        ]
                    }
                };
                (t, a, b, factors)
            }
            IdentityCase::ForcePxp { m, hbar, force } | IdentityCase::ForceXpp { m, hbar, force } => {
                nonzero("mass must be nonzero", m)?;
                nonzero("hbar must be nonzero", hbar)?;
                let t = builtin_table(&BuiltinTable::HeisenbergForce)?;
                let (d2, x1, d1) = (t.id("D2")?, t.id("X1")?, t.id("D1")?);
                let i = Scalar::i();
                let two = Scalar::from_int(2);
                let kin = &(&i * hbar) / &(&two * m); // i ħ / 2m
                let lin = &(&i * force) / hbar; // i F / ħ
                let a = OperatorPolynomial::scaled_generator(kin.clone(), d2);
                let b = OperatorPolynomial::scaled_generator(lin.clone(), x1);
                let f2_over_mh = &(force * force) / &(m * hbar);
                let drift = force / &(&two * m); // F / 2m
                let diffuse = factor("exp(iħt/2m·D2)", xi.scale(&kin), OperatorPolynomial::generator(d2));
                let push = factor("exp(iFt/ħ·X1)", xi.scale(&lin), OperatorPolynomial::generator(x1));
                let factors = if matches!(self, IdentityCase::ForcePxp { .. }) {
                    let phase = ScalarSeries::monomial(&(&i * &f2_over_mh) * &Scalar::ratio(1, 3), 3, order);
                    let shift = ScalarSeries::monomial(drift, 2, order);
                    vec![
                        factor("phase", phase, OperatorPolynomial::identity()),
                        diffuse,
                        push,
                        factor("exp(Ft²/2m·D1)", shift, OperatorPolynomial::generator(d1)),
                    ]
                } else {
                    let phase = ScalarSeries::monomial(&(&i * &f2_over_mh) * &Scalar::ratio(-1, 6), 3, order);
                    let shift = ScalarSeries::monomial(-drift, 2, order);
                    vec![
                        factor("phase", phase, OperatorPolynomial::identity()),
                        push,
                        diffuse,
                        factor("exp(−Ft²/2m·D1)", shift, OperatorPolynomial::generator(d1)),
                    ]
                };
                (t, a, b, factors)
            }
        };
        Ok(Factorization { table, a, b, factors, order })
    }
}
