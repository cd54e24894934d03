//! The reduced bar complex of the five logarithmic one-forms on the
//! two-variable configuration space: exact form evaluators, wedge-product
//! coordinates in the 6-dimensional quotient (computed by randomized exact
//! evaluation with re-sampling), integrability kernels in each weight, and
//! the two tensor-splitting maps used to evaluate bar elements as products
//! of one-variable functions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linalg;
use crate::polylog::FormEval;
use crate::shuffle::{shuffle_words, word_key, Letter, ShufflePoly, Word};

/// Default seed for the randomized wedge-coordinate sampling. Any fixed
/// value works; determinism is what matters.
pub const DEFAULT_WEDGE_SEED: u64 = 0x0515_2026;

const SAMPLE_POINTS: usize = 12;
const SAMPLE_DENOM: i64 = 97;

/// Errors from the bar-complex computations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum M05Error {
    /// The wedge-coordinate tables disagreed across re-samples, or a sample
    /// had unexpected rank: the random points were degenerate.
    #[error("wedge sampling produced unstable rank or coordinates; retry with another seed")]
    RankInstability,
    /// A splitting map was applied to an element that does not satisfy the
    /// integrability condition.
    #[error("element does not satisfy the integrability condition")]
    CicNotSatisfied,
    /// A bar element must be supported on the five base letters only.
    #[error("word contains a split letter; bar elements use the five base forms")]
    NotBaseAlphabet,
}

// ---------------------------------------------------------------------------
// One-forms.
// ---------------------------------------------------------------------------

/// The logarithmic one-forms: five base forms spanning the weight-one piece,
/// plus the two split variants of the mixed form used by the tensor
/// splittings (the `dz₁` part and the `dz₂` part).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OneForm {
    /// `dz₁/z₁`
    Xi1,
    /// `dz₁/(1−z₁)`
    Xi11,
    /// `dz₂/z₂`
    Xi2,
    /// `dz₂/(1−z₂)`
    Xi22,
    /// `d(z₁z₂)/(1−z₁z₂)`
    Xi12,
    /// `z₂ dz₁/(1−z₁z₂)` — the `dz₁` component of `Xi12`
    Tilde12A,
    /// `z₁ dz₂/(1−z₁z₂)` — the `dz₂` component of `Xi12`
    Tilde12B,
}

use OneForm::*;

/// The five base forms, in canonical order.
pub const BASE_FORMS: [OneForm; 5] = [Xi1, Xi11, Xi2, Xi22, Xi12];

impl Letter for OneForm {
    const ALPHABET: &'static [Self] = &[Xi1, Xi11, Xi2, Xi22, Xi12, Tilde12A, Tilde12B];
    const SEPARATOR: &'static str = ".";
    fn token(self) -> &'static str {
        match self {
            Xi1 => "1",
            Xi11 => "11",
            Xi2 => "2",
            Xi22 => "22",
            Xi12 => "12",
            Tilde12A => "12~1",
            Tilde12B => "12~2",
        }
    }
    fn from_token(tok: &str) -> Option<Self> {
        match tok {
            "1" => Some(Xi1),
            "11" => Some(Xi11),
            "2" => Some(Xi2),
            "22" => Some(Xi22),
            "12" => Some(Xi12),
            "12~1" => Some(Tilde12A),
            "12~2" => Some(Tilde12B),
            _ => None,
        }
    }
}

impl OneForm {
    pub fn is_base(self) -> bool {
        !matches!(self, Tilde12A | Tilde12B)
    }

    /// Exact components `(coefficient of dz₁, coefficient of dz₂)` at a
    /// rational point off the singular locus
    /// `{z₁ ∈ {0,1}} ∪ {z₂ ∈ {0,1}} ∪ {z₁z₂ = 1}`.
    pub fn eval_rational(
        self,
        z1: &BigRational,
        z2: &BigRational,
    ) -> (BigRational, BigRational) {
        let one = BigRational::one();
        let zero = BigRational::zero();
        match self {
            Xi1 => (&one / z1, zero),
            Xi11 => (&one / &(&one - z1), zero),
            Xi2 => (zero, &one / z2),
            Xi22 => (zero, &one / &(&one - z2)),
            Xi12 => {
                let d = &one - &(z1 * z2);
                (z2 / &d, z1 / &d)
            }
            Tilde12A => {
                let d = &one - &(z1 * z2);
                (z2 / &d, zero)
            }
            Tilde12B => {
                let d = &one - &(z1 * z2);
                (zero, z1 / &d)
            }
        }
    }
}

impl FormEval for OneForm {
    fn components(&self, z1: f64, z2: f64) -> (f64, f64) {
        match self {
            Xi1 => (1.0 / z1, 0.0),
            Xi11 => (1.0 / (1.0 - z1), 0.0),
            Xi2 => (0.0, 1.0 / z2),
            Xi22 => (0.0, 1.0 / (1.0 - z2)),
            Xi12 => (z2 / (1.0 - z1 * z2), z1 / (1.0 - z1 * z2)),
            Tilde12A => (z2 / (1.0 - z1 * z2), 0.0),
            Tilde12B => (0.0, z1 / (1.0 - z1 * z2)),
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// All weight-`s` words over the five base forms, lexicographic in the
/// canonical letter order.
pub fn base_words(s: usize) -> Vec<Word<OneForm>> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        let mut next = Vec::with_capacity(out.len() * 5);
        for w in &out {
            for &l in &BASE_FORMS {
                let mut nw = w.clone();
                nw.push(l);
                next.push(nw);
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Wedge coordinates.
// ---------------------------------------------------------------------------

/// Exact coordinates of the pairwise wedges `ω_a ∧ ω_b` of the five base
/// forms in a 6-dimensional quotient basis. Built by evaluating the
/// `dz₁∧dz₂` coefficients at random rational points and solving exactly;
/// three independent samples must agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeTable {
    /// The six lexicographically-first independent pairs `(a, b)`, `a < b`.
    basis_pairs: Vec<(OneForm, OneForm)>,
    /// Coordinates of every ordered pair `a < b` in the basis.
    coords: BTreeMap<(OneForm, OneForm), Vec<BigRational>>,
}

fn wedge_value(a: OneForm, b: OneForm, z1: &BigRational, z2: &BigRational) -> BigRational {
    let (fa, ga) = a.eval_rational(z1, z2);
    let (fb, gb) = b.eval_rational(z1, z2);
    &(&fa * &gb) - &(&ga * &fb)
}

fn sample_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(BigRational, BigRational)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let n1: i64 = rng.gen_range(2..=SAMPLE_DENOM - 1);
        let n2: i64 = rng.gen_range(2..=SAMPLE_DENOM - 1);
        if seen.insert((n1, n2)) {
            out.push((
                BigRational::new(n1.into(), SAMPLE_DENOM.into()),
                BigRational::new(n2.into(), SAMPLE_DENOM.into()),
            ));
        }
    }
    out
}

fn all_pairs() -> Vec<(OneForm, OneForm)> {
    let mut pairs = Vec::with_capacity(10);
    for i in 0..BASE_FORMS.len() {
        for j in i + 1..BASE_FORMS.len() {
            pairs.push((BASE_FORMS[i], BASE_FORMS[j]));
        }
    }
    pairs
}

fn build_table(
    points: &[(BigRational, BigRational)],
) -> Result<(Vec<(OneForm, OneForm)>, BTreeMap<(OneForm, OneForm), Vec<BigRational>>), M05Error> {
    let pairs = all_pairs();
    // Columns are pairs, rows are sample points.
    let t: linalg::Mat = points
        .iter()
        .map(|(z1, z2)| {
            pairs
                .iter()
                .map(|&(a, b)| wedge_value(a, b, z1, z2))
                .collect()
        })
        .collect();
    let mut red = t.clone();
    let pivots = linalg::rref(&mut red);
    if pivots.len() != 6 {
        return Err(M05Error::RankInstability);
    }
    let column = |p: usize| -> Vec<BigRational> {
        t.iter().map(|row| row[p].clone()).collect()
    };
    let basis_vectors: Vec<Vec<BigRational>> = pivots.iter().map(|&p| column(p)).collect();
    let basis_pairs: Vec<(OneForm, OneForm)> = pivots.iter().map(|&p| pairs[p]).collect();
    let mut coords = BTreeMap::new();
    for (k, &pair) in pairs.iter().enumerate() {
        let c = linalg::coordinates_in_rowspace(&basis_vectors, &column(k))
            .ok_or(M05Error::RankInstability)?;
        coords.insert(pair, c);
    }
    Ok((basis_pairs, coords))
}

impl WedgeTable {
    /// Build the table from three independent random samples; all three must
    /// produce identical bases and coordinates.
    pub fn with_seed(seed: u64) -> Result<WedgeTable, M05Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tables = Vec::with_capacity(3);
        for _ in 0..3 {
            let pts = sample_points(&mut rng, SAMPLE_POINTS);
            tables.push(build_table(&pts)?);
        }
        if tables[0] != tables[1] || tables[1] != tables[2] {
            return Err(M05Error::RankInstability);
        }
        let (basis_pairs, coords) = tables.pop().expect("three tables were built");
        Ok(WedgeTable {
            basis_pairs,
            coords,
        })
    }

    /// Rank of the wedge span (always 6 for these five forms).
    pub fn rank(&self) -> usize {
        self.basis_pairs.len()
    }

    pub fn basis_pairs(&self) -> &[(OneForm, OneForm)] {
        &self.basis_pairs
    }

    /// Coordinates of `ω_a ∧ ω_b` in the quotient basis; antisymmetric in
    /// `(a, b)`, zero on the diagonal. Base forms only.
    pub fn coords(&self, a: OneForm, b: OneForm) -> Vec<BigRational> {
        assert!(a.is_base() && b.is_base(), "wedge table covers base forms");
        if a == b {
            return vec![BigRational::zero(); self.rank()];
        }
        if a < b {
            self.coords[&(a, b)].clone()
        } else {
            self.coords[&(b, a)]
                .iter()
                .map(|c| -c.clone())
                .collect()
        }
    }

    /// The full 10×6 coordinate matrix, rows in lexicographic pair order.
    pub fn matrix(&self) -> linalg::Mat {
        all_pairs()
            .into_iter()
            .map(|(a, b)| self.coords(a, b))
            .collect()
    }
}

/// The process-wide table built from the default seed.
pub fn default_wedge_table() -> &'static WedgeTable {
    static TABLE: OnceLock<WedgeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        WedgeTable::with_seed(DEFAULT_WEDGE_SEED)
            .expect("default-seed wedge sampling is deterministic and stable")
    })
}

/// Coordinates of the 10 pairwise wedges in the 6-dimensional quotient
/// basis, from the default table (rows in lexicographic pair order).
pub fn wedge_coordinates() -> linalg::Mat {
    default_wedge_table().matrix()
}

// ---------------------------------------------------------------------------
// Integrability kernels.
// ---------------------------------------------------------------------------

/// An element of the reduced bar complex: a rational combination of words in
/// the five base forms, with a cached integrability flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarElement {
    poly: ShufflePoly<OneForm>,
    cic_verified: bool,
}

impl BarElement {
    /// Wrap a polynomial over the base alphabet, verifying the adjacent-cut
    /// integrability condition exactly (the flag caches the outcome).
    pub fn new(poly: ShufflePoly<OneForm>) -> Result<BarElement, M05Error> {
        if poly
            .iter()
            .any(|(w, _)| w.iter().any(|l| !l.is_base()))
        {
            return Err(M05Error::NotBaseAlphabet);
        }
        let cic_verified = verify_cic(&poly, default_wedge_table());
        Ok(BarElement { poly, cic_verified })
    }

    pub fn poly(&self) -> &ShufflePoly<OneForm> {
        &self.poly
    }

    pub fn is_cic(&self) -> bool {
        self.cic_verified
    }

    pub fn max_weight(&self) -> usize {
        self.poly.max_weight()
    }
}

impl fmt::Display for BarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Does the combination satisfy the integrability condition — for every
/// weight component, every cut position, and every fixed (prefix, suffix)
/// context, the contracted two-form vanishes in the wedge quotient?
pub fn verify_cic(poly: &ShufflePoly<OneForm>, table: &WedgeTable) -> bool {
    let rank = table.rank();
    // Accumulate the quotient coordinates of the contraction at each
    // (cut, prefix, suffix).
    let mut acc: BTreeMap<(usize, Word<OneForm>, Word<OneForm>), Vec<BigRational>> =
        BTreeMap::new();
    for (w, c) in poly.iter() {
        for cut in 0..w.len().saturating_sub(1) {
            let coords = table.coords(w[cut], w[cut + 1]);
            let key = (cut, w[..cut].to_vec(), w[cut + 2..].to_vec());
            let entry = acc
                .entry(key)
                .or_insert_with(|| vec![BigRational::zero(); rank]);
            for (e, x) in entry.iter_mut().zip(&coords) {
                *e = &*e + &(c * x);
            }
        }
    }
    acc.values().all(|v| v.iter().all(|x| x.is_zero()))
}

/// Exact basis of the weight-`s` integrability kernel — all combinations of
/// weight-`s` base words whose every adjacent contraction vanishes in the
/// wedge quotient. With `end_restricted`, only words whose last letter is
/// not one of the two forms singular at the base point are allowed.
pub fn cic_kernel(s: usize, end_restricted: bool) -> Vec<BarElement> {
    cic_kernel_with(default_wedge_table(), s, end_restricted)
}

/// As [`cic_kernel`], with an explicit wedge table (for seeded runs).
pub fn cic_kernel_with(
    table: &WedgeTable,
    s: usize,
    end_restricted: bool,
) -> Vec<BarElement> {
    assert!(s >= 1);
    let words: Vec<Word<OneForm>> = base_words(s)
        .into_iter()
        .filter(|w| {
            !end_restricted || !matches!(w.last(), Some(&Xi1) | Some(&Xi2))
        })
        .collect();
    let index: BTreeMap<&Word<OneForm>, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let rank = table.rank();
    let mut rows: linalg::Mat = Vec::new();
    if s >= 2 {
        for cut in 0..s - 1 {
            for prefix in base_words(cut) {
                for suffix in base_words(s - 2 - cut) {
                    let mut eqs = vec![vec![BigRational::zero(); words.len()]; rank];
                    let mut nonzero = vec![false; rank];
                    for &a in &BASE_FORMS {
                        for &b in &BASE_FORMS {
                            if a == b {
                                continue;
                            }
                            let mut w = prefix.clone();
                            w.push(a);
                            w.push(b);
                            w.extend_from_slice(&suffix);
                            let Some(&col) = index.get(&w) else {
                                continue;
                            };
                            for (k, x) in table.coords(a, b).into_iter().enumerate() {
                                if !x.is_zero() {
                                    eqs[k][col] = x;
                                    nonzero[k] = true;
                                }
                            }
                        }
                    }
                    for (k, eq) in eqs.into_iter().enumerate() {
                        if nonzero[k] {
                            rows.push(eq);
                        }
                    }
                }
            }
        }
    }
    let kernel = linalg::nullspace(&rows, words.len());
    kernel
        .into_iter()
        .map(|v| {
            let poly = ShufflePoly::from_terms(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (words[i].clone(), c)),
            );
            debug_assert!(verify_cic(&poly, table));
            BarElement {
                poly,
                cic_verified: true,
            }
        })
        .collect()
}

/// The canonical weight-two integrable element used throughout the examples:
/// `ξ₁₁ξ₁₂ + ξ₂₂ξ₁₁ − ξ₂₂ξ₁₂ − ξ₂ξ₁₂`.
pub fn hpr_phi() -> BarElement {
    let one = BigRational::one();
    let poly = ShufflePoly::from_terms([
        (vec![Xi11, Xi12], one.clone()),
        (vec![Xi22, Xi11], one.clone()),
        (vec![Xi22, Xi12], -one.clone()),
        (vec![Xi2, Xi12], -one),
    ]);
    BarElement::new(poly).expect("base alphabet by construction")
}

// ---------------------------------------------------------------------------
// Tensor splittings.
// ---------------------------------------------------------------------------

/// A rational combination of word pairs `u ⊗ v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarTensor {
    terms: BTreeMap<(Word<OneForm>, Word<OneForm>), BigRational>,
}

impl BarTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1 ⊗ 1`.
    pub fn one() -> Self {
        let mut t = Self::zero();
        t.add_term(Vec::new(), Vec::new(), BigRational::one());
        t
    }

    pub fn add_term(&mut self, left: Word<OneForm>, right: Word<OneForm>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((left, right))
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
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

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&(Word<OneForm>, Word<OneForm>), &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, left: &[OneForm], right: &[OneForm]) -> BigRational {
        self.terms
            .get(&(left.to_vec(), right.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Componentwise shuffle product:
    /// `(u⊗v)·(u′⊗v′) = (u ⧢ u′) ⊗ (v ⧢ v′)`, bilinearly.
    pub fn shuffle_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((u, v), c) in &self.terms {
            for ((up, vp), cp) in &other.terms {
                let c2 = c * cp;
                for (lw, lm) in shuffle_words(u, up) {
                    for (rw, rm) in shuffle_words(v, vp) {
                        out.add_term(
                            lw.clone(),
                            rw,
                            &c2 * BigRational::from_integer((lm * rm).into()),
                        );
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for BarTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((u, v), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let lk = if u.is_empty() { "∅".into() } else { word_key(u) };
            let rk = if v.is_empty() { "∅".into() } else { word_key(v) };
            write!(f, "{c}·{lk}⊗{rk}")?;
        }
        Ok(())
    }
}

/// Letters allowed in the prefix/suffix of each splitting.
fn first_block(l: OneForm) -> bool {
    matches!(l, Xi1 | Xi11 | Xi12)
}
fn second_block(l: OneForm) -> bool {
    matches!(l, Xi2 | Xi22)
}

fn iota_generic(
    phi: &BarElement,
    prefix_ok: impl Fn(OneForm) -> bool,
    suffix_ok: impl Fn(OneForm) -> bool,
    tilde: OneForm,
) -> Result<BarTensor, M05Error> {
    if !phi.is_cic() {
        return Err(M05Error::CicNotSatisfied);
    }
    let mut out = BarTensor::zero();
    for (w, c) in phi.poly.iter() {
        let split = w
            .iter()
            .position(|&l| !prefix_ok(l))
            .unwrap_or(w.len());
        if !w[split..].iter().all(|&l| suffix_ok(l)) {
            continue; // not of split shape: projected away
        }
        let left: Word<OneForm> = w[..split]
            .iter()
            .map(|&l| if l == Xi12 { tilde } else { l })
            .collect();
        out.add_term(left, w[split..].to_vec(), c.clone());
    }
    Ok(out)
}

/// Split an integrable element as (first-variable prefix) ⊗ (second-variable
/// suffix): keep exactly the words that are a prefix over `{ξ₁, ξ₁₁, ξ₁₂}`
/// followed by a suffix over `{ξ₂, ξ₂₂}`, split at the boundary, and replace
/// `ξ₁₂` by its `dz₁` component.
pub fn iota_12(phi: &BarElement) -> Result<BarTensor, M05Error> {
    iota_generic(phi, first_block, second_block, Tilde12A)
}

/// The mirror splitting: prefix over `{ξ₂, ξ₂₂, ξ₁₂}`, suffix over
/// `{ξ₁, ξ₁₁}`, with `ξ₁₂` replaced by its `dz₂` component.
pub fn iota_21(phi: &BarElement) -> Result<BarTensor, M05Error> {
    iota_generic(
        phi,
        |l| matches!(l, Xi2 | Xi22 | Xi12),
        |l| matches!(l, Xi1 | Xi11),
        Tilde12B,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::shuffle::parse_word;

    #[test]
    fn tokens_round_trip() {
        for &l in OneForm::ALPHABET {
            assert_eq!(OneForm::from_token(l.token()), Some(l));
        }
        let w = parse_word::<OneForm>("11.12").unwrap();
        assert_eq!(w, vec![Xi11, Xi12]);
        assert_eq!(word_key(&w), "11.12");
        let t = parse_word::<OneForm>("22.12~2").unwrap();
        assert_eq!(t, vec![Xi22, Tilde12B]);
        assert!(parse_word::<OneForm>("13").is_none());
    }

    #[test]
    fn rational_and_float_evaluators_agree() {
        let z1 = ratio(3, 10);
        let z2 = ratio(2, 5);
        let (f1, f2) = (0.3, 0.4);
        for &l in OneForm::ALPHABET {
            let (a, b) = l.eval_rational(&z1, &z2);
            let (fa, fb) = l.components(f1, f2);
            let (ax, bx) = (
                crate::scalar::rational_to_f64(&a),
                crate::scalar::rational_to_f64(&b),
            );
            assert!((ax - fa).abs() < 1e-14, "{l:?} dz1");
            assert!((bx - fb).abs() < 1e-14, "{l:?} dz2");
        }
    }

    #[test]
    fn wedge_table_rank_and_relations() {
        let t = default_wedge_table();
        assert_eq!(t.rank(), 6);
        let zero6 = vec![BigRational::zero(); 6];
        // Vanishing wedges of same-variable pairs.
        assert_eq!(t.coords(Xi1, Xi11), zero6);
        assert_eq!(t.coords(Xi2, Xi22), zero6);
        // (ξ₁ + ξ₂) ∧ ξ₁₂ = 0.
        let sum: Vec<BigRational> = t
            .coords(Xi1, Xi12)
            .iter()
            .zip(t.coords(Xi2, Xi12))
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(sum, zero6);
        // ξ₁₁∧ξ₁₂ + ξ₂₂∧ξ₁₁ − ξ₂₂∧ξ₁₂ − ξ₂∧ξ₁₂ = 0.
        let mut rel = t.coords(Xi11, Xi12);
        for (r, x) in rel.iter_mut().zip(t.coords(Xi22, Xi11)) {
            *r = &*r + &x;
        }
        for (r, x) in rel.iter_mut().zip(t.coords(Xi22, Xi12)) {
            *r = &*r - &x;
        }
        for (r, x) in rel.iter_mut().zip(t.coords(Xi2, Xi12)) {
            *r = &*r - &x;
        }
        assert_eq!(rel, zero6);
        // Antisymmetry and diagonal.
        let ab = t.coords(Xi11, Xi22);
        let ba = t.coords(Xi22, Xi11);
        for (x, y) in ab.iter().zip(&ba) {
            assert_eq!(x, &(-y.clone()));
        }
        assert_eq!(t.coords(Xi12, Xi12), zero6);
        // A different seed reproduces the same table (the quotient is
        // canonical even though the sampling is random).
        let t2 = WedgeTable::with_seed(12345).unwrap();
        assert_eq!(t.basis_pairs(), t2.basis_pairs());
        assert_eq!(t.matrix(), t2.matrix());
    }

    #[test]
    fn kernel_dimensions() {
        assert_eq!(cic_kernel(1, false).len(), 5);
        assert_eq!(cic_kernel(1, true).len(), 3);
        assert_eq!(cic_kernel(2, false).len(), 19);
        assert_eq!(cic_kernel(3, false).len(), 65);
        for s in 1..=3 {
            assert_eq!(
                cic_kernel(s, false).len() as u64,
                super::super::alg::dim_degree(s)
            );
        }
        for e in cic_kernel(2, false) {
            assert!(e.is_cic());
        }
    }

    #[test]
    fn phi_is_integrable_and_in_restricted_kernel() {
        let phi = hpr_phi();
        assert!(phi.is_cic());
        // φ lies in the span of the restricted weight-2 kernel.
        let basis = cic_kernel(2, true);
        assert!(!basis.is_empty());
        let words: Vec<Word<OneForm>> = base_words(2)
            .into_iter()
            .filter(|w| !matches!(w.last(), Some(&Xi1) | Some(&Xi2)))
            .collect();
        let vec_of = |p: &ShufflePoly<OneForm>| -> Vec<BigRational> {
            words.iter().map(|w| p.coeff(w)).collect()
        };
        let rows: Vec<Vec<BigRational>> =
            basis.iter().map(|b| vec_of(b.poly())).collect();
        let target = vec_of(phi.poly());
        assert!(linalg::coordinates_in_rowspace(&rows, &target).is_some());
        // Every restricted basis element ends away from the singular forms.
        for b in &basis {
            for (w, _) in b.poly().iter() {
                assert!(!matches!(w.last(), Some(&Xi1) | Some(&Xi2)));
            }
        }
    }

    #[test]
    fn iota_examples() {
        let phi = hpr_phi();
        let t12 = iota_12(&phi).unwrap();
        assert_eq!(t12.len(), 1);
        assert_eq!(t12.coeff(&[Xi11, Tilde12A], &[]), ratio(1, 1));
        let t21 = iota_21(&phi).unwrap();
        assert_eq!(t21.len(), 3);
        assert_eq!(t21.coeff(&[Xi22], &[Xi11]), ratio(1, 1));
        assert_eq!(t21.coeff(&[Xi22, Tilde12B], &[]), ratio(-1, 1));
        assert_eq!(t21.coeff(&[Xi2, Tilde12B], &[]), ratio(-1, 1));
        // The unit maps to 1 ⊗ 1.
        let unit = BarElement::new(ShufflePoly::one()).unwrap();
        assert_eq!(iota_12(&unit).unwrap(), BarTensor::one());
        assert_eq!(iota_21(&unit).unwrap(), BarTensor::one());
        // A non-integrable element is rejected (ξ₁∧ξ₂ ≠ 0 in the quotient).
        let bad = BarElement::new(ShufflePoly::word(vec![Xi1, Xi2])).unwrap();
        assert!(!bad.is_cic());
        assert_eq!(iota_12(&bad), Err(M05Error::CicNotSatisfied));
    }

    #[test]
    fn iota_shuffle_homomorphism_to_weight3() {
        let b1 = cic_kernel(1, false);
        let b2 = cic_kernel(2, false);
        let mut checked = 0usize;
        for (lhs, rhs) in b1
            .iter()
            .flat_map(|x| b1.iter().map(move |y| (x, y)))
            .chain(b1.iter().flat_map(|x| b2.iter().map(move |y| (x, y))))
        {
            let prod_poly = lhs.poly().shuffle(rhs.poly());
            let prod = BarElement::new(prod_poly).unwrap();
            // The kernel is closed under the shuffle product.
            assert!(prod.is_cic(), "{} ⧢ {}", lhs, rhs);
            type IotaFn = fn(&BarElement) -> Result<BarTensor, M05Error>;
            for (iota, name) in [(iota_12 as IotaFn, "12"), (iota_21 as IotaFn, "21")] {
                let direct = iota(&prod).unwrap();
                let split = iota(lhs).unwrap().shuffle_mul(&iota(rhs).unwrap());
                assert_eq!(direct, split, "splitting {name} on {} ⧢ {}", lhs, rhs);
            }
            checked += 1;
        }
        assert_eq!(checked, 25 + 95);
    }
}
