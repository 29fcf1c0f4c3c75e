//! Normal-ordered noncommutative polynomials.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::table::{CommutationTable, GeneratorId};
use super::{AlgebraError, Scalar};

/// An ordered product of generators; the empty word is the identity.
pub type Word = Vec<GeneratorId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Scalar,
    pub word: Word,
}

/// A canonical linear combination of normal-ordered words. Words are kept
/// sorted lexicographically (identity first) with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OperatorPolynomial {
    terms: BTreeMap<Word, Scalar>,
}

impl OperatorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn generator(g: GeneratorId) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![g], Scalar::one());
        p
    }

    /// `c·g`.
    pub fn scaled_generator(c: Scalar, g: GeneratorId) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![g], c);
        p
    }

    /// Adds `c·word` without reordering. Callers outside this module should
    /// only pass normal-ordered words; use [`normal_order`] otherwise.
    pub(crate) fn add_term(&mut self, word: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &OperatorPolynomial, c: &Scalar) {
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `word`, zero when absent.
    pub fn coeff(&self, word: &[GeneratorId]) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|(w, c)| Monomial { coeff: c.clone(), word: w.clone() }).collect()
    }

    /// Words appearing in either polynomial, in canonical order.
    pub(crate) fn union_words<'a>(&'a self, other: &'a OperatorPolynomial) -> Vec<&'a Word> {
        let mut words: Vec<&Word> = self.terms.keys().chain(other.terms.keys()).collect();
        words.sort();
        words.dedup();
        words
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| w.windows(2).all(|p| p[0] <= p[1]))
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn format(&self, table: &CommutationTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms.iter().map(|(w, c)| format!("({c})·{}", table.format_word(w))).collect::<Vec<_>>().join(" + ")
    }
}

impl<'a> Add<&'a OperatorPolynomial> for &'a OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn add(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl<'a> Sub<&'a OperatorPolynomial> for &'a OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn sub(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl Neg for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn neg(self) -> OperatorPolynomial {
        self.scale(&Scalar::from_int(-1))
    }
}

/// Normal-ordered form of `word · g` for an already normal-ordered `word`.
///
/// With `word = u·x` and `x > g`, uses `x·g = g·x + [x, g]`, so
/// `u·x·g = (u·g)·x + u·[x, g]`. Each recursive call either shortens the word
/// or lowers the number of letters that sit above the appended generator.
fn mul_sorted_word_gen(word: &[GeneratorId], g: GeneratorId, table: &CommutationTable) -> OperatorPolynomial {
    match word.last() {
        None => return OperatorPolynomial::generator(g),
        Some(&last) if last <= g => {
            let mut w = word.to_vec();
            w.push(g);
            let mut p = OperatorPolynomial::zero();
            p.add_term(w, Scalar::one());
            return p;
        }
        _ => {}
    }
    let key = (word.to_vec(), g);
    if let Some(hit) = table.cache.lock().expect("cache poisoned").get(&key) {
        return hit.clone();
    }

    let (prefix, x) = (&word[..word.len() - 1], *word.last().expect("nonempty"));
    let mut out = OperatorPolynomial::zero();
    for (w, c) in mul_sorted_word_gen(prefix, g, table).terms {
        out.add_scaled(&mul_sorted_word_gen(&w, x, table), &c);
    }
    let corr = table.commutator(x, g);
    if !corr.scalar.is_zero() {
        out.add_term(prefix.to_vec(), corr.scalar.clone());
    }
    for (h, c) in &corr.linear {
        out.add_scaled(&mul_sorted_word_gen(prefix, *h, table), c);
    }

    table.cache.lock().expect("cache poisoned").insert(key, out.clone());
    out
}

fn mul_poly_gen(p: &OperatorPolynomial, g: GeneratorId, table: &CommutationTable) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero();
    for (w, c) in &p.terms {
        out.add_scaled(&mul_sorted_word_gen(w, g, table), c);
    }
    out
}

/// Rewrites an arbitrary word into normal order, every adjacent inversion
/// `g_j g_i` (j > i) becoming `g_i g_j − [g_i, g_j]`.
pub fn normal_order(word: &[GeneratorId], table: &CommutationTable) -> Result<OperatorPolynomial, AlgebraError> {
    for g in word {
        table.check(*g)?;
    }
    let mut acc = OperatorPolynomial::identity();
    for g in word {
        acc = mul_poly_gen(&acc, *g, table);
    }
    Ok(acc)
}

/// Product `p·q` in normal-ordered form.
pub fn poly_mul(
    p: &OperatorPolynomial,
    q: &OperatorPolynomial,
    table: &CommutationTable,
) -> Result<OperatorPolynomial, AlgebraError> {
    for w in p.terms.keys().chain(q.terms.keys()) {
        for g in w {
            table.check(*g)?;
        }
    }
    let mut out = OperatorPolynomial::zero();
    for (v, c) in &q.terms {
        let mut partial = p.clone();
        for g in v {
            partial = mul_poly_gen(&partial, *g, table);
        }
        out.add_scaled(&partial, c);
    }
    Ok(out)
}

/// `[p, q] = p·q − q·p`.
pub fn commutator(
    p: &OperatorPolynomial,
    q: &OperatorPolynomial,
    table: &CommutationTable,
) -> Result<OperatorPolynomial, AlgebraError> {
    Ok(&poly_mul(p, q, table)? - &poly_mul(q, p, table)?)
}
