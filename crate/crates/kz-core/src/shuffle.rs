//! Shuffle algebra on words of one-forms, with exact rational coefficients.
//!
//! Words over an alphabet `L` form the shuffle algebra `S`: the product of
//! two words is the sum of all their interleavings, extended bilinearly. The
//! empty word is the unit. For the two-letter alphabet [`Xi01`] this module
//! also provides the regularization maps `reg⁰` and `reg¹⁰` onto the
//! subalgebras
//!
//! * `S⁰`  — span of words not ending in `ξ₀` (plus the unit), and
//! * `S¹⁰` — span of words neither ending in `ξ₀` nor starting with `ξ₁`,
//!
//! via the unique polynomial decompositions `S = S⁰[ξ₀] = S¹⁰[ξ₁, ξ₀]`.
//!
//! Invariants: no zero coefficients are ever stored; all operations are pure
//! and exact over `BigRational`; weights (word lengths) are preserved by
//! every map in this module, so grading by weight is well defined.

use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Alphabet letter for shuffle words. Tokens must be distinct and stable:
/// they are the serialization syntax.
pub trait Letter:
    Copy + Clone + Ord + Eq + std::hash::Hash + fmt::Debug + Send + Sync + 'static
{
    /// All letters, in canonical order.
    const ALPHABET: &'static [Self];
    /// Separator between letter tokens in a serialized word ("" when all
    /// tokens are single characters).
    const SEPARATOR: &'static str;
    fn token(self) -> &'static str;
    fn from_token(tok: &str) -> Option<Self>;
}

/// Two-letter alphabet `{ξ₀, ξ₁}` of the one-variable theory:
/// `ξ₀ = dz/z`, `ξ₁ = dz/(1−z)`. Serialized as characters `0` / `1`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Xi01 {
    Xi0,
    Xi1,
}

impl Letter for Xi01 {
    const ALPHABET: &'static [Self] = &[Xi01::Xi0, Xi01::Xi1];
    const SEPARATOR: &'static str = "";
    fn token(self) -> &'static str {
        match self {
            Xi01::Xi0 => "0",
            Xi01::Xi1 => "1",
        }
    }
    fn from_token(tok: &str) -> Option<Self> {
        match tok {
            "0" => Some(Xi01::Xi0),
            "1" => Some(Xi01::Xi1),
            _ => None,
        }
    }
}

/// A word is a (possibly empty) sequence of letters; weight = length.
pub type Word<L> = Vec<L>;

/// Render a word with the alphabet's separator; the empty word prints as `∅`.
pub fn word_key<L: Letter>(w: &[L]) -> String {
    w.iter()
        .map(|l| l.token())
        .collect::<Vec<_>>()
        .join(L::SEPARATOR)
}

/// Parse a word serialized by [`word_key`]. The empty string, `∅`, and `1`
/// as a bare unit marker are rejected here: the empty word is spelled "".
pub fn parse_word<L: Letter>(s: &str) -> Option<Word<L>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    if L::SEPARATOR.is_empty() {
        s.chars()
            .map(|c| L::from_token(&c.to_string()))
            .collect::<Option<Vec<_>>>()
    } else {
        s.split(L::SEPARATOR)
            .map(L::from_token)
            .collect::<Option<Vec<_>>>()
    }
}

/// Finite rational linear combination of words — an element of the shuffle
/// algebra. Zero coefficients are pruned eagerly.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ShufflePoly<L: Letter> {
    terms: BTreeMap<Word<L>, BigRational>,
}

impl<L: Letter> ShufflePoly<L> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    /// The unit: the empty word with coefficient 1.
    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    /// A single word with coefficient 1.
    pub fn word(w: Word<L>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigRational::from_integer(1.into()));
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Word<L>, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
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

    pub fn coeff(&self, w: &[L]) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word<L>, &BigRational)> {
        self.terms.iter()
    }

    /// Largest word length present (0 for the zero polynomial).
    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word<L>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            // Re-borrow to remove; BTreeMap has no entry-remove in stable.
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), v * c))
                .collect(),
        }
    }

    /// Restrict to the homogeneous component of the given weight.
    pub fn weight_part(&self, weight: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Shuffle product, extended bilinearly from words.
    ///
    /// Time: O(Σ over term pairs of the number of interleavings); the
    /// interleaving count for lengths (m, n) is C(m+n, m), fine through the
    /// weights (≤ 8) used anywhere in this crate.
    pub fn shuffle(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let c = cu * cv;
                for (w, mult) in shuffle_words(u, v) {
                    out.add_term(w, &c * BigRational::from_integer(mult.into()));
                }
            }
        }
        out
    }

    /// Serialize as a JSON object mapping [`word_key`] strings to exact
    /// `"numerator/denominator"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (w, c) in &self.terms {
            map.insert(
                word_key(w),
                serde_json::Value::String(format!("{}/{}", c.numer(), c.denom())),
            );
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let obj = v.as_object()?;
        let mut p = Self::zero();
        for (k, val) in obj {
            let w = parse_word::<L>(k)?;
            let s = val.as_str()?;
            let (n, d) = s.split_once('/')?;
            let c = BigRational::new(n.parse().ok()?, d.parse().ok()?);
            p.add_term(w, c);
        }
        Some(p)
    }
}

impl<L: Letter> fmt::Display for ShufflePoly<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let key = if w.is_empty() {
                "∅".to_string()
            } else {
                word_key(w)
            };
            if first {
                write!(f, "{c}·{key}")?;
                first = false;
            } else {
                write!(f, " + {c}·{key}")?;
            }
        }
        Ok(())
    }
}

/// All interleavings of two words with multiplicities.
///
/// Recursive on (head of u) ∪ (head of v); the result map groups equal words.
pub fn shuffle_words<L: Letter>(u: &[L], v: &[L]) -> BTreeMap<Word<L>, u64> {
    fn go<L: Letter>(u: &[L], v: &[L], out: &mut BTreeMap<Word<L>, u64>, prefix: &mut Word<L>) {
        if u.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        if v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        prefix.push(u[0]);
        go(&u[1..], v, out, prefix);
        prefix.pop();
        prefix.push(v[0]);
        go(u, &v[1..], out, prefix);
        prefix.pop();
    }
    let mut out = BTreeMap::new();
    go(u, v, &mut out, &mut Vec::new());
    out
}

// ---------------------------------------------------------------------------
// Regularization on the two-letter alphabet.
// ---------------------------------------------------------------------------

use Xi01::{Xi0, Xi1};

/// Decomposition of a word `u` as `Σ_j w_j ⧢ ξ₀^j` with `w_j ∈ S⁰` and
/// `ξ₀^j` the plain word of `j` letters. Returned as the vector `[w_0, w_1,
/// …]` indexed by `j`.
///
/// Algorithm: peel the trailing run `u = v·ξ₀^t`. In `v ⧢ ξ₀^t` the word `u`
/// occurs with coefficient exactly 1 and every other word has a strictly
/// shorter trailing run, so
/// `u = v ⧢ ξ₀^t − Σ_{w≠u} c_w·w` and recursion on the run length
/// terminates. The decomposition of `v ⧢ ξ₀^t` itself is the single
/// component `w_t = v`.
pub fn xi0_components(p: &ShufflePoly<Xi01>) -> Vec<ShufflePoly<Xi01>> {
    let mut out: Vec<ShufflePoly<Xi01>> = Vec::new();
    for (w, c) in p.iter() {
        for (j, comp) in word_xi0_components(w).into_iter().enumerate() {
            if out.len() <= j {
                out.resize(j + 1, ShufflePoly::zero());
            }
            out[j] = out[j].add(&comp.scale(c));
        }
    }
    while out.last().is_some_and(|q| q.is_zero()) {
        out.pop();
    }
    if out.is_empty() {
        out.push(ShufflePoly::zero());
    }
    out
}

fn word_xi0_components(u: &[Xi01]) -> Vec<ShufflePoly<Xi01>> {
    let t = u.iter().rev().take_while(|&&l| l == Xi0).count();
    if t == 0 {
        return vec![ShufflePoly::word(u.to_vec())];
    }
    let v = &u[..u.len() - t];
    let mut comps = vec![ShufflePoly::zero(); t + 1];
    comps[t] = ShufflePoly::word(v.to_vec());
    for (w, mult) in shuffle_words(v, &vec![Xi0; t]) {
        if w == u {
            continue;
        }
        let c = BigRational::from_integer((mult as i64).into());
        for (j, comp) in word_xi0_components(&w).into_iter().enumerate() {
            comps[j] = comps[j].sub(&comp.scale(&c));
        }
    }
    comps
}

/// Mirror of [`xi0_components`] for leading `ξ₁` powers:
/// `u = Σ_i ξ₁^i ⧢ v_i` with every `v_i` not starting with `ξ₁`.
pub fn xi1_components(p: &ShufflePoly<Xi01>) -> Vec<ShufflePoly<Xi01>> {
    let mut out: Vec<ShufflePoly<Xi01>> = Vec::new();
    for (w, c) in p.iter() {
        for (i, comp) in word_xi1_components(w).into_iter().enumerate() {
            if out.len() <= i {
                out.resize(i + 1, ShufflePoly::zero());
            }
            out[i] = out[i].add(&comp.scale(c));
        }
    }
    while out.last().is_some_and(|q| q.is_zero()) {
        out.pop();
    }
    if out.is_empty() {
        out.push(ShufflePoly::zero());
    }
    out
}

fn word_xi1_components(u: &[Xi01]) -> Vec<ShufflePoly<Xi01>> {
    let i = u.iter().take_while(|&&l| l == Xi1).count();
    if i == 0 {
        return vec![ShufflePoly::word(u.to_vec())];
    }
    let v = &u[i..];
    let mut comps = vec![ShufflePoly::zero(); i + 1];
    comps[i] = ShufflePoly::word(v.to_vec());
    for (w, mult) in shuffle_words(&vec![Xi1; i], v) {
        if w == u {
            continue;
        }
        let c = BigRational::from_integer((mult as i64).into());
        for (j, comp) in word_xi1_components(&w).into_iter().enumerate() {
            comps[j] = comps[j].sub(&comp.scale(&c));
        }
    }
    comps
}

/// `reg⁰`: the `j = 0` component of the `S⁰[ξ₀]` decomposition. Algebra
/// homomorphism onto `S⁰`; identity on `S⁰`.
pub fn reg0(p: &ShufflePoly<Xi01>) -> ShufflePoly<Xi01> {
    xi0_components(p).swap_remove(0)
}

/// `reg¹⁰`: the `(i, j) = (0, 0)` component of the `S¹⁰[ξ₁, ξ₀]`
/// decomposition (peel trailing `ξ₀`, then leading `ξ₁`). Algebra
/// homomorphism onto `S¹⁰`; identity on `S¹⁰`.
pub fn reg10(p: &ShufflePoly<Xi01>) -> ShufflePoly<Xi01> {
    xi1_components(&reg0(p)).swap_remove(0)
}

/// Reconstruct `Σ_j comps[j] ⧢ ξ₀^j`; inverse of [`xi0_components`].
pub fn assemble_xi0(comps: &[ShufflePoly<Xi01>]) -> ShufflePoly<Xi01> {
    let mut out = ShufflePoly::zero();
    for (j, comp) in comps.iter().enumerate() {
        out = out.add(&comp.shuffle(&ShufflePoly::word(vec![Xi0; j])));
    }
    out
}

/// The anti-automorphism `τ`: swap `ξ₀ ↔ ξ₁` and reverse the word, extended
/// linearly. An involution; a shuffle-algebra homomorphism.
pub fn tau(p: &ShufflePoly<Xi01>) -> ShufflePoly<Xi01> {
    ShufflePoly::from_terms(p.iter().map(|(w, c)| (tau_word(w), c.clone())))
}

pub fn tau_word(w: &[Xi01]) -> Word<Xi01> {
    w.iter()
        .rev()
        .map(|&l| if l == Xi0 { Xi1 } else { Xi0 })
        .collect()
}

/// Iterator over all `{ξ₀,ξ₁}`-words of the given weight, in binary order.
pub fn words_of_weight(weight: usize) -> impl Iterator<Item = Word<Xi01>> {
    (0..(1u64 << weight)).map(move |bits| {
        (0..weight)
            .map(|i| {
                if (bits >> (weight - 1 - i)) & 1 == 1 {
                    Xi1
                } else {
                    Xi0
                }
            })
            .collect()
    })
}

/// A word is admissible iff it starts with `ξ₀` and ends with `ξ₁` (weight
/// ≥ 2), i.e. lies in `S¹⁰` and indexes a convergent zeta value.
pub fn is_admissible(w: &[Xi01]) -> bool {
    w.len() >= 2 && w[0] == Xi0 && *w.last().unwrap() == Xi1
}

/// Convert a word in `S⁰` (ending in `ξ₁`) to its exponent composition
/// `(k₁, …, k_r)`: `ξ₀^{k₁−1}ξ₁ ⋯ ξ₀^{k_r−1}ξ₁ ↦ (k₁, …, k_r)`.
pub fn word_to_composition(w: &[Xi01]) -> Option<Vec<u32>> {
    if w.is_empty() {
        return Some(Vec::new());
    }
    if *w.last().unwrap() != Xi1 {
        return None;
    }
    let mut comp = Vec::new();
    let mut run = 1u32;
    for &l in w {
        match l {
            Xi0 => run += 1,
            Xi1 => {
                comp.push(run);
                run = 1;
            }
        }
    }
    Some(comp)
}

/// Inverse of [`word_to_composition`].
pub fn composition_to_word(comp: &[u32]) -> Word<Xi01> {
    let mut w = Vec::new();
    for &k in comp {
        assert!(k >= 1, "composition parts must be ≥ 1");
        w.extend(std::iter::repeat(Xi0).take((k - 1) as usize));
        w.push(Xi1);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn w(s: &str) -> Word<Xi01> {
        parse_word(s).unwrap()
    }

    #[test]
    fn unit_laws_and_basic_shuffles() {
        let one = ShufflePoly::<Xi01>::one();
        let p = ShufflePoly::word(w("01"));
        assert_eq!(one.shuffle(&p), p);
        assert_eq!(p.shuffle(&one), p);

        // ξ₀ ⧢ ξ₁ = ξ₀ξ₁ + ξ₁ξ₀
        let s = ShufflePoly::word(w("0")).shuffle(&ShufflePoly::word(w("1")));
        assert_eq!(s.coeff(&w("01")), ratio(1, 1));
        assert_eq!(s.coeff(&w("10")), ratio(1, 1));
        assert_eq!(s.len(), 2);

        // ξ₀ ⧢ ξ₀ = 2 ξ₀ξ₀
        let s = ShufflePoly::word(w("0")).shuffle(&ShufflePoly::word(w("0")));
        assert_eq!(s.coeff(&w("00")), ratio(2, 1));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn shuffle_commutative_associative_small() {
        let a = ShufflePoly::word(w("01")).add(&ShufflePoly::word(w("1")).scale(&ratio(2, 3)));
        let b = ShufflePoly::word(w("10"));
        let c = ShufflePoly::word(w("0")).sub(&ShufflePoly::one());
        assert_eq!(a.shuffle(&b), b.shuffle(&a));
        assert_eq!(a.shuffle(&b).shuffle(&c), a.shuffle(&b.shuffle(&c)));
    }

    #[test]
    fn reg0_examples() {
        // reg⁰(ξ₀) = 0: ξ₀ = 1 ⧢ ξ₀ has no constant component.
        assert!(reg0(&ShufflePoly::word(w("0"))).is_zero());
        // reg⁰ is the identity on S⁰.
        let p = ShufflePoly::word(w("01"));
        assert_eq!(reg0(&p), p);
        // reg⁰(ξ₁ξ₀) = −ξ₀ξ₁ from ξ₁ ⧢ ξ₀ = ξ₁ξ₀ + ξ₀ξ₁.
        let r = reg0(&ShufflePoly::word(w("10")));
        assert_eq!(r.coeff(&w("01")), ratio(-1, 1));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn reg10_examples() {
        assert!(reg10(&ShufflePoly::word(w("1"))).is_zero());
        let p = ShufflePoly::word(w("01"));
        assert_eq!(reg10(&p), p);
        let r = reg10(&ShufflePoly::word(w("10")));
        assert_eq!(r.coeff(&w("01")), ratio(-1, 1));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn decomposition_roundtrip_weight_le_4() {
        for weight in 0..=4 {
            for word in words_of_weight(weight) {
                let p = ShufflePoly::word(word.clone());
                let comps = xi0_components(&p);
                for comp in &comps {
                    // Every component lies in S⁰.
                    for (cw, _) in comp.iter() {
                        assert!(cw.is_empty() || *cw.last().unwrap() == Xi1);
                    }
                }
                assert_eq!(assemble_xi0(&comps), p, "roundtrip failed for {p}");
            }
        }
    }

    #[test]
    fn reg_homomorphism_spot() {
        let p = ShufflePoly::word(w("10"));
        let q = ShufflePoly::word(w("0"));
        assert_eq!(reg0(&p.shuffle(&q)), reg0(&p).shuffle(&reg0(&q)));
        assert_eq!(reg10(&p.shuffle(&q)), reg10(&p).shuffle(&reg10(&q)));
    }

    #[test]
    fn tau_examples_and_involution() {
        assert_eq!(tau(&ShufflePoly::one()), ShufflePoly::one());
        assert_eq!(tau_word(&w("001")), w("011"));
        assert_eq!(tau_word(&w("01")), w("01"));
        for weight in 0..=5 {
            for word in words_of_weight(weight) {
                assert_eq!(tau_word(&tau_word(&word)), word);
            }
        }
        // τ respects the shuffle product.
        let p = ShufflePoly::word(w("01"));
        let q = ShufflePoly::word(w("1"));
        assert_eq!(tau(&p.shuffle(&q)), tau(&p).shuffle(&tau(&q)));
    }

    #[test]
    fn composition_maps() {
        assert_eq!(word_to_composition(&w("011")).unwrap(), vec![2, 1]);
        assert_eq!(word_to_composition(&w("001")).unwrap(), vec![3]);
        assert_eq!(composition_to_word(&[2, 1]), w("011"));
        assert!(word_to_composition(&w("10")).is_none());
        assert!(is_admissible(&w("01")));
        assert!(!is_admissible(&w("10")));
        assert!(!is_admissible(&w("1")));
    }

    #[test]
    fn serialization_roundtrip() {
        let p = ShufflePoly::word(w("01")).scale(&ratio(3, 7)).sub(&ShufflePoly::one());
        let json = p.to_json();
        assert_eq!(ShufflePoly::<Xi01>::from_json(&json).unwrap(), p);
    }
}
