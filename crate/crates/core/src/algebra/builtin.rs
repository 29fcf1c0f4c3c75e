use num_traits::Zero;

use super::table::{verify_jacobi, CommutationTable};
use super::{AlgebraError, Scalar};

/// The commutation tables used by the factorization cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinTable {
    /// `{A, B}` with `[A, B] = δ`.
    Bch { delta: Scalar },
    /// `{A, B, C}` with `[A, B] = C`, `[A, C] = 0`, `[C, B] = −k`.
    Case1 { k: Scalar },
    /// `{A, B, C}` with `[A, B] = C`, `[A, C] = 2γA`, `[B, C] = −2γB`.
    Case2 { gamma: Scalar },
    /// `{D2, X1, D1}` realised as `d²/dx²`, `x`, `d/dx`.
    HeisenbergForce,
    /// `{X2, XD, D2}` realised as `x²`, `x·d/dx`, `d²/dx²`.
    Sl2Realization,
}

impl BuiltinTable {
    /// Looks a table up by name; `param` supplies δ, k or γ where needed.
    pub fn from_name(name: &str, param: Option<Scalar>) -> Result<Self, AlgebraError> {
        let need = |p: Option<Scalar>| p.ok_or_else(|| AlgebraError::UnknownTable(format!("{name} needs a parameter")));
        Ok(match name {
            "bch" => BuiltinTable::Bch { delta: need(param)? },
            "case1" => BuiltinTable::Case1 { k: need(param)? },
            "case2" => BuiltinTable::Case2 { gamma: need(param)? },
            "heisenberg_force" => BuiltinTable::HeisenbergForce,
            "sl2_realization" => BuiltinTable::Sl2Realization,
            other => return Err(AlgebraError::UnknownTable(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinTable::Bch { .. } => "bch",
            BuiltinTable::Case1 { .. } => "case1",
            BuiltinTable::Case2 { .. } => "case2",
            BuiltinTable::HeisenbergForce => "heisenberg_force",
            BuiltinTable::Sl2Realization => "sl2_realization",
        }
    }
}

pub fn builtin_table(which: &BuiltinTable) -> Result<CommutationTable, AlgebraError> {
    let z = Scalar::zero;
    let table = match which {
        BuiltinTable::Bch { delta } => {
            let mut t = CommutationTable::new("bch", &["A", "B"])?;
            t.set_named("A", "B", &[], delta.clone())?;
            t
        }
        BuiltinTable::Case1 { k } => {
            let mut t = CommutationTable::new("case1", &["A", "B", "C"])?;
            t.set_named("A", "B", &[("C", Scalar::from_int(1))], z())?;
            t.set_named("C", "B", &[], -k)?;
            t
        }
        BuiltinTable::Case2 { gamma } => {
            let two_gamma = &Scalar::from_int(2) * gamma;
            let mut t = CommutationTable::new("case2", &["A", "B", "C"])?;
            t.set_named("A", "B", &[("C", Scalar::from_int(1))], z())?;
            t.set_named("A", "C", &[("A", two_gamma.clone())], z())?;
            t.set_named("B", "C", &[("B", -two_gamma)], z())?;
            t
        }
        BuiltinTable::HeisenbergForce => {
            let mut t = CommutationTable::new("heisenberg_force", &["D2", "X1", "D1"])?;
            t.set_named("D2", "X1", &[("D1", Scalar::from_int(2))], z())?;
            t.set_named("D1", "X1", &[], Scalar::from_int(1))?;
            t
        }
        BuiltinTable::Sl2Realization => {
            let mut t = CommutationTable::new("sl2_realization", &["X2", "XD", "D2"])?;
            t.set_named("XD", "X2", &[("X2", Scalar::from_int(2))], z())?;
            t.set_named("XD", "D2", &[("D2", Scalar::from_int(-2))], z())?;
            t.set_named("D2", "X2", &[("XD", Scalar::from_int(4))], Scalar::from_int(2))?;
            t
        }
    };
    if !verify_jacobi(&table) {
        return Err(AlgebraError::JacobiViolation(table.name().to_string()));
    }
    Ok(table)
}
