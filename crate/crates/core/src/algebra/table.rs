use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{commutator, OperatorPolynomial};
use super::{AlgebraError, Scalar};

/// Index of a generator inside its table. Declaration order is the normal
/// order: a word is normal-ordered when its indices are non-decreasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub index: GeneratorId,
    pub name: String,
}

/// Right-hand side of `[g_i, g_j]`: a linear combination of generators plus
/// a multiple of the identity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Commutator {
    pub scalar: Scalar,
    pub linear: BTreeMap<GeneratorId, Scalar>,
}

impl Commutator {
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.linear.values().all(Zero::is_zero)
    }

    fn negated(&self) -> Commutator {
        Commutator { scalar: -&self.scalar, linear: self.linear.iter().map(|(g, c)| (*g, -c)).collect() }
    }

    pub fn to_polynomial(&self) -> OperatorPolynomial {
        let mut p = OperatorPolynomial::scalar(self.scalar.clone());
        for (g, c) in &self.linear {
            p.add_term(vec![*g], c.clone());
        }
        p
    }
}

type CacheKey = (Vec<GeneratorId>, GeneratorId);

/// Structure constants for a finite generator set.
///
/// Only pairs `i < j` are stored; `[g_j, g_i] = −[g_i, g_j]` and
/// `[g_i, g_i] = 0`. Every right-hand side has words of length at most one,
/// which bounds the rewriting in [`normal_order`](super::normal_order).
pub struct CommutationTable {
    name: String,
    generators: Vec<String>,
    entries: BTreeMap<(GeneratorId, GeneratorId), Commutator>,
    pub(crate) cache: Mutex<HashMap<CacheKey, OperatorPolynomial>>,
}

impl Clone for CommutationTable {
    fn clone(&self) -> Self {
        CommutationTable {
            name: self.name.clone(),
            generators: self.generators.clone(),
            entries: self.entries.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for CommutationTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CommutationTable")
            .field("name", &self.name)
            .field("generators", &self.generators)
            .field("entries", &self.entries)
            .finish()
    }
}

impl PartialEq for CommutationTable {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.entries == other.entries
    }
}

impl CommutationTable {
    /// A table where every pair commutes.
    pub fn new(name: impl Into<String>, generators: &[&str]) -> Result<Self, AlgebraError> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        for (k, g) in generators.iter().enumerate() {
            if g.is_empty() {
                return Err(AlgebraError::MalformedTable("empty generator name".into()));
            }
            if generators[..k].contains(g) {
                return Err(AlgebraError::MalformedTable(format!("duplicate generator {g}")));
            }
        }
        Ok(CommutationTable {
            name: name.into(),
            generators,
            entries: BTreeMap::new(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.generators.iter().enumerate().map(|(k, n)| Generator { index: GeneratorId(k), name: n.clone() })
    }

    pub fn generator_name(&self, g: GeneratorId) -> &str {
        &self.generators[g.0]
    }

    pub fn id(&self, name: &str) -> Result<GeneratorId, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(GeneratorId)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub(crate) fn check(&self, g: GeneratorId) -> Result<(), AlgebraError> {
        if g.0 < self.generators.len() {
            Ok(())
        } else {
            Err(AlgebraError::UnknownGenerator(format!("#{}", g.0)))
        }
    }

    /// Sets `[lhs, rhs_gen] = value`, storing it in canonical `i < j` form.
    pub fn set(&mut self, lhs: GeneratorId, rhs: GeneratorId, value: Commutator) -> Result<(), AlgebraError> {
        self.check(lhs)?;
        self.check(rhs)?;
        for g in value.linear.keys() {
            self.check(*g)?;
        }
        if lhs == rhs {
            if value.is_zero() {
                return Ok(());
            }
            return Err(AlgebraError::MalformedTable(format!("[{0}, {0}] must vanish", self.generator_name(lhs))));
        }
        let (key, value) = if lhs < rhs { ((lhs, rhs), value) } else { ((rhs, lhs), value.negated()) };
        if self.entries.contains_key(&key) {
            return Err(AlgebraError::MalformedTable(format!(
                "commutator [{}, {}] given twice",
                self.generator_name(key.0),
                self.generator_name(key.1)
            )));
        }
        let mut value = value;
        value.linear.retain(|_, c| !c.is_zero());
        if !value.is_zero() {
            self.entries.insert(key, value);
        }
        self.cache.lock().expect("cache poisoned").clear();
        Ok(())
    }

    /// Convenience for builtin tables: `[a, b] = Σ coeff·gen + scalar`.
    pub(crate) fn set_named(
        &mut self,
        a: &str,
        b: &str,
        linear: &[(&str, Scalar)],
        scalar: Scalar,
    ) -> Result<(), AlgebraError> {
        let mut c = Commutator { scalar, linear: BTreeMap::new() };
        for (name, coeff) in linear {
            c.linear.insert(self.id(name)?, coeff.clone());
        }
        let (a, b) = (self.id(a)?, self.id(b)?);
        self.set(a, b, c)
    }

    /// `[g_i, g_j]` for any ordered pair.
    pub fn commutator(&self, i: GeneratorId, j: GeneratorId) -> Commutator {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Commutator::default(),
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self.entries.get(&(j, i)).map(Commutator::negated).unwrap_or_default(),
        }
    }

    /// Parses the JSON table document
    /// `{"generators": [...], "commutators": [{"lhs": [a, b], "rhs": [{"coeff": "p/q", "word": [...]}]}]}`.
    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let doc: TableDocument = serde_json::from_str(text).map_err(|e| AlgebraError::Json(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &TableDocument) -> Result<Self, AlgebraError> {
        let names: Vec<&str> = doc.generators.iter().map(String::as_str).collect();
        let mut table = CommutationTable::new(doc.name.clone().unwrap_or_else(|| "custom".into()), &names)?;
        for entry in &doc.commutators {
            let [a, b] = entry.lhs.as_slice() else {
                return Err(AlgebraError::MalformedTable(format!("lhs must name two generators, got {:?}", entry.lhs)));
            };
            let mut c = Commutator::default();
            for term in &entry.rhs {
                let coeff: Scalar = term.coeff.parse()?;
                match term.word.as_slice() {
                    [] => c.scalar += &coeff,
                    [g] => {
                        let id = table.id(g)?;
                        let slot = c.linear.entry(id).or_insert_with(Scalar::zero);
                        *slot += &coeff;
                    }
                    longer => {
                        return Err(AlgebraError::MalformedTable(format!(
                            "commutator right-hand side word {longer:?} is longer than one generator"
                        )))
                    }
                }
            }
            let (a, b) = (table.id(a)?, table.id(b)?);
            table.set(a, b, c)?;
        }
        Ok(table)
    }

    pub fn to_document(&self) -> TableDocument {
        let commutators = self
            .entries
            .iter()
            .map(|((i, j), c)| {
                let mut rhs = Vec::new();
                if !c.scalar.is_zero() {
                    rhs.push(TermDocument { coeff: c.scalar.to_string(), word: vec![] });
                }
                for (g, coeff) in &c.linear {
                    rhs.push(TermDocument {
                        coeff: coeff.to_string(),
                        word: vec![self.generator_name(*g).to_string()],
                    });
                }
                CommutatorDocument {
                    lhs: vec![self.generator_name(*i).to_string(), self.generator_name(*j).to_string()],
                    rhs,
                }
            })
            .collect();
        TableDocument { name: Some(self.name.clone()), generators: self.generators.clone(), commutators }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("table document serializes")
    }

    /// Human-readable rendering of a word, `1` for the empty word.
    pub fn format_word(&self, word: &[GeneratorId]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter().map(|g| self.generator_name(*g)).collect::<Vec<_>>().join("·")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TableDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub commutators: Vec<CommutatorDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CommutatorDocument {
    pub lhs: Vec<String>,
    pub rhs: Vec<TermDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermDocument {
    pub coeff: String,
    #[serde(default)]
    pub word: Vec<String>,
}

/// Checks `[g_i,[g_j,g_k]] + [g_j,[g_k,g_i]] + [g_k,[g_i,g_j]] = 0` for every
/// triple, with all brackets evaluated by normal-ordered multiplication.
pub fn verify_jacobi(table: &CommutationTable) -> bool {
    let n = table.n_generators();
    let gen = |k: usize| OperatorPolynomial::generator(GeneratorId(k));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (gi, gj, gk) = (gen(i), gen(j), gen(k));
                let t1 = commutator(&gi, &commutator(&gj, &gk, table).unwrap(), table).unwrap();
                let t2 = commutator(&gj, &commutator(&gk, &gi, table).unwrap(), table).unwrap();
                let t3 = commutator(&gk, &commutator(&gi, &gj, table).unwrap(), table).unwrap();
                if !(&(&t1 + &t2) + &t3).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_antisymmetry() {
        let text = r#"{"generators": ["A","B","C"],
            "commutators": [{"lhs": ["B","A"], "rhs": [{"coeff": "-1", "word": ["C"]}]},
                            {"lhs": ["C","B"], "rhs": [{"coeff": "-2", "word": []}]}]}"#;
        let t = CommutationTable::from_json(text).unwrap();
        let (a, b, c) = (GeneratorId(0), GeneratorId(1), GeneratorId(2));
        assert_eq!(t.commutator(a, b).linear.get(&c), Some(&Scalar::from_int(1)));
        assert_eq!(t.commutator(b, c).scalar, Scalar::from_int(2));
        assert!(t.commutator(a, c).is_zero());
        let again = CommutationTable::from_json(&t.to_json()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn rejects_bad_documents() {
        let long = r#"{"generators": ["A","B"], "commutators": [{"lhs": ["A","B"], "rhs": [{"coeff": "1", "word": ["A","B"]}]}]}"#;
        assert!(matches!(CommutationTable::from_json(long), Err(AlgebraError::MalformedTable(_))));
        let unknown = r#"{"generators": ["A","B"], "commutators": [{"lhs": ["A","Z"], "rhs": []}]}"#;
        assert!(matches!(CommutationTable::from_json(unknown), Err(AlgebraError::UnknownGenerator(_))));
        let twice = r#"{"generators": ["A","B"], "commutators": [
            {"lhs": ["A","B"], "rhs": [{"coeff": "1"}]}, {"lhs": ["B","A"], "rhs": [{"coeff": "-1"}]}]}"#;
        assert!(matches!(CommutationTable::from_json(twice), Err(AlgebraError::MalformedTable(_))));
        let selfc = r#"{"generators": ["A"], "commutators": [{"lhs": ["A","A"], "rhs": [{"coeff": "1"}]}]}"#;
        assert!(CommutationTable::from_json(selfc).is_err());
        assert!(matches!(CommutationTable::from_json("{"), Err(AlgebraError::Json(_))));
        let badscalar = r#"{"generators": ["A","B"], "commutators": [{"lhs": ["A","B"], "rhs": [{"coeff": "x"}]}]}"#;
        assert!(matches!(CommutationTable::from_json(badscalar), Err(AlgebraError::ParseScalar(_))));
    }
}
