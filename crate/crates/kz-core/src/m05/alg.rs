//! The five-generator quotient algebra attached to the two-variable KZ
//! system: exact linear coordinates for the residue generators, the induced
//! automorphisms of the five-point configuration space, a PBW-style tensor
//! normal form for the enveloping algebra, truncated series arithmetic in
//! that normal form, and the pentagon check for the associator.
//!
//! Generators are ordered `(X₁, X₁₁, X₂, X₂₂, X₁₂)` throughout; words use
//! the letter indices `0..5` in that order. The "left block" is
//! `{X₁, X₁₁, X₁₂}`, the "right block" `{X₂, X₂₂}`: in normal form every
//! left-block letter precedes every right-block letter, and the commutators
//! needed to push right-block letters rightward land entirely in the left
//! block, so rewriting terminates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linalg;
use crate::connect::CheckReport;
use crate::ncalg::TruncatedSeries;
use crate::scalar::Scalar;

/// Number of degree-one generators.
pub const GEN_COUNT: usize = 5;

/// Generator names in index order.
pub const GEN_NAMES: [&str; 5] = ["X1", "X11", "X2", "X22", "X12"];

pub const L_X1: u8 = 0;
pub const L_X11: u8 = 1;
pub const L_X2: u8 = 2;
pub const L_X22: u8 = 3;
pub const L_X12: u8 = 4;

/// Left-block letters (stay left in normal form).
pub const LEFT_BLOCK: [u8; 3] = [L_X1, L_X11, L_X12];
/// Right-block letters (pushed right in normal form).
pub const RIGHT_BLOCK: [u8; 2] = [L_X2, L_X22];

#[inline]
pub fn is_left_letter(l: u8) -> bool {
    l == L_X1 || l == L_X11 || l == L_X12
}

#[inline]
pub fn is_right_letter(l: u8) -> bool {
    l == L_X2 || l == L_X22
}

// ---------------------------------------------------------------------------
// Degree-one elements.
// ---------------------------------------------------------------------------

/// An exact rational linear combination of the five degree-one generators,
/// in the ordered basis `(X₁, X₁₁, X₂, X₂₂, X₁₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree1Element {
    pub coords: [BigRational; 5],
}

impl Degree1Element {
    pub fn zero() -> Self {
        Degree1Element {
            coords: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn generator(idx: usize) -> Self {
        assert!(idx < GEN_COUNT);
        let mut e = Self::zero();
        e.coords[idx] = BigRational::one();
        e
    }

    pub fn from_coords(coords: [BigRational; 5]) -> Self {
        Degree1Element { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Degree1Element {
            coords: std::array::from_fn(|i| &self.coords[i] + &other.coords[i]),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Degree1Element {
            coords: std::array::from_fn(|i| &self.coords[i] - &other.coords[i]),
        }
    }

    pub fn neg(&self) -> Self {
        Degree1Element {
            coords: std::array::from_fn(|i| -self.coords[i].clone()),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Degree1Element {
            coords: std::array::from_fn(|i| &self.coords[i] * c),
        }
    }
}

impl fmt::Display for Degree1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c < &BigRational::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{}", GEN_NAMES[i])?;
            } else {
                write!(f, "{mag}*{}", GEN_NAMES[i])?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Residue generators Ω_ij and the induced automorphisms.
// ---------------------------------------------------------------------------

/// The ten index pairs `(i, j)` with `1 ≤ i < j ≤ 5`, in lexicographic order.
pub const OMEGA_PAIRS: [(usize, usize); 10] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    OMEGA_PAIRS
        .iter()
        .position(|&(p, q)| (p, q) == (a, b))
        .expect("indices must satisfy 1 <= i != j <= 5")
}

/// The defining linear combinations of the cubic-coordinate generators in
/// terms of the residue generators: `X₁ = Ω₁₂+Ω₁₃+Ω₂₃`, `X₂ = Ω₂₃`,
/// `X₁₁ = −Ω₁₄`, `X₂₂ = −Ω₁₂`, `X₁₂ = −Ω₂₄`.
fn defining_combo(gen: usize) -> Vec<((usize, usize), i64)> {
    match gen {
        0 => vec![((1, 2), 1), ((1, 3), 1), ((2, 3), 1)],
        1 => vec![((1, 4), -1)],
        2 => vec![((2, 3), 1)],
        3 => vec![((1, 2), -1)],
        4 => vec![((2, 4), -1)],
        _ => panic!("generator index out of range"),
    }
}

fn omega_table() -> &'static [Degree1Element; 10] {
    static TABLE: OnceLock<[Degree1Element; 10]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Unknowns: the ten Ω_ij as vectors in the X-basis. Equations: the
        // five vanishing-row-sum relations Σ_{j≠i} Ω_ij = 0 plus the five
        // defining combinations above. The 10×10 system has full rank.
        let zero = || BigRational::zero();
        let mut a: linalg::Mat = vec![vec![zero(); 10]; 10];
        let mut b: linalg::Mat = vec![vec![zero(); 5]; 10];
        for i in 1..=5 {
            for j in 1..=5 {
                if i != j {
                    a[i - 1][pair_index(i, j)] = BigRational::one();
                }
            }
        }
        for gen in 0..5 {
            let row = 5 + gen;
            for ((i, j), c) in defining_combo(gen) {
                a[row][pair_index(i, j)] = BigRational::from_integer(c.into());
            }
            b[row][gen] = BigRational::one();
        }
        let sol = linalg::solve_multi(&a, &b)
            .expect("the residue-generator system must be invertible");
        std::array::from_fn(|k| {
            Degree1Element::from_coords(std::array::from_fn(|g| sol[k][g].clone()))
        })
    })
}

/// Expression of the residue generator `Ω_ij` in the `X`-basis, from the
/// exact linear solve of the five vanishing-row-sum relations together with
/// the five defining combinations.
pub fn omega_to_basis(i: usize, j: usize) -> Degree1Element {
    assert!((1..=5).contains(&i) && (1..=5).contains(&j) && i < j, "need 1 <= i < j <= 5");
    omega_table()[pair_index(i, j)].clone()
}

/// The linear map on degree-one elements induced by a permutation `p` of the
/// five marked points via `Ω_ij ↦ Ω_{p(i) p(j)}`. `perm` is 1-indexed:
/// `perm[i]` is the image of point `i` (entry 0 unused).
pub fn permutation_star(perm: &[usize; 6]) -> [Degree1Element; 5] {
    std::array::from_fn(|gen| {
        let mut image = Degree1Element::zero();
        for ((i, j), c) in defining_combo(gen) {
            let om = omega_to_basis(
                perm[i].min(perm[j]),
                perm[i].max(perm[j]),
            );
            image = image.add(&om.scale(&BigRational::from_integer(c.into())));
        }
        image
    })
}

fn apply_linear(images: &[Degree1Element; 5], x: &Degree1Element) -> Degree1Element {
    let mut out = Degree1Element::zero();
    for (g, c) in x.coords.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&images[g].scale(c));
        }
    }
    out
}

fn sigma_images() -> &'static [Degree1Element; 5] {
    static IMAGES: OnceLock<[Degree1Element; 5]> = OnceLock::new();
    // The five-point rotation 1→5, 2→4, 3→1, 4→3, 5→2.
    IMAGES.get_or_init(|| permutation_star(&[0, 5, 4, 1, 3, 2]))
}

/// The order-five automorphism of the configuration space pulled back to the
/// cubic-coordinate generators: `X₁ ↦ X₂`, `X₂ ↦ −X₁₁`,
/// `X₁₁ ↦ X₁₁+X₂₂+X₁₂`, `X₂₂ ↦ −X₁`, `X₁₂ ↦ X₁−X₁₁−X₁₂`.
pub fn sigma_star_inv(x: &Degree1Element) -> Degree1Element {
    apply_linear(sigma_images(), x)
}

fn tau_images() -> &'static [Degree1Element; 5] {
    static IMAGES: OnceLock<[Degree1Element; 5]> = OnceLock::new();
    IMAGES.get_or_init(|| {
        let r = |v: [i64; 5]| {
            Degree1Element::from_coords(std::array::from_fn(|i| {
                BigRational::from_integer(v[i].into())
            }))
        };
        [
            r([1, 0, 0, 0, 0]),   // X1 ↦ X1
            r([1, -1, -1, 0, 0]), // X11 ↦ X1 − X11 − X2
            r([0, 0, 1, 0, 0]),   // X2 ↦ X2
            r([-1, 0, 1, -1, 0]), // X22 ↦ −X1 + X2 − X22
            r([0, 1, 0, 1, 1]),   // X12 ↦ X11 + X22 + X12
        ]
    })
}

/// The involutive automorphism in cubic coordinates. Explicit table;
/// coincides with the pullback of the point transposition (2 3)(4 5).
pub fn tau_star(x: &Degree1Element) -> Degree1Element {
    apply_linear(tau_images(), x)
}

// ---------------------------------------------------------------------------
// PBW normal form.
// ---------------------------------------------------------------------------

/// A normal-form basis monomial: a free word over the left block
/// `{X₁, X₁₁, X₁₂}` followed by a free word over the right block
/// `{X₂, X₂₂}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBWMonomial {
    pub left: Vec<u8>,
    pub right: Vec<u8>,
}

impl PBWMonomial {
    pub fn degree(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn one() -> Self {
        PBWMonomial {
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    /// Concatenated letter-index key, e.g. `[0, 4, 2]` for `X₁X₁₂X₂`.
    pub fn to_key(&self) -> Vec<u8> {
        let mut k = self.left.clone();
        k.extend_from_slice(&self.right);
        k
    }

    /// Parse a letter-index word; `None` unless it is in normal form.
    pub fn from_key(key: &[u8]) -> Option<Self> {
        let split = key
            .iter()
            .position(|&l| is_right_letter(l))
            .unwrap_or(key.len());
        let (left, right) = key.split_at(split);
        if left.iter().any(|&l| !is_left_letter(l))
            || right.iter().any(|&l| !is_right_letter(l))
        {
            return None;
        }
        Some(PBWMonomial {
            left: left.to_vec(),
            right: right.to_vec(),
        })
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let names: Vec<&str> = self
            .to_key()
            .iter()
            .map(|&l| GEN_NAMES[l as usize])
            .collect();
        write!(f, "{}", names.join("."))
    }
}

/// Is the letter-index word in normal form (no right-block letter followed
/// anywhere later by a left-block letter)?
pub fn is_normal_key(key: &[u8]) -> bool {
    let mut seen_right = false;
    for &l in key {
        if is_right_letter(l) {
            seen_right = true;
        } else if seen_right {
            return false;
        }
    }
    true
}

/// Rewriting rule for an adjacent pair (right-block letter `r`, left-block
/// letter `l`): the replacement two-letter words with integer coefficients.
/// The correction terms lie entirely in the left block:
/// `[X₂,X₁] = [X₂,X₁₁] = [X₂₂,X₁] = 0`, `[X₂₂,X₁₁] = [X₁₁,X₁₂]`,
/// `[X₂₂,X₁₂] = −[X₁₁,X₁₂]`, `[X₂,X₁₂] = [X₁,X₁₂] − [X₁₁,X₁₂]`.
fn rewrite_pair(r: u8, l: u8) -> Vec<([u8; 2], i64)> {
    match (r, l) {
        (L_X2, L_X1) => vec![([L_X1, L_X2], 1)],
        (L_X2, L_X11) => vec![([L_X11, L_X2], 1)],
        (L_X22, L_X1) => vec![([L_X1, L_X22], 1)],
        (L_X22, L_X11) => vec![
            ([L_X11, L_X22], 1),
            ([L_X11, L_X12], 1),
            ([L_X12, L_X11], -1),
        ],
        (L_X22, L_X12) => vec![
            ([L_X12, L_X22], 1),
            ([L_X11, L_X12], -1),
            ([L_X12, L_X11], 1),
        ],
        (L_X2, L_X12) => vec![
            ([L_X12, L_X2], 1),
            ([L_X1, L_X12], 1),
            ([L_X12, L_X1], -1),
            ([L_X11, L_X12], -1),
            ([L_X12, L_X11], 1),
        ],
        _ => panic!("not a reducible pair: ({r}, {l})"),
    }
}

/// Normal form of a free generator word with a pluggable reduction strategy:
/// `pick` returns the index of the adjacent reducible pair to rewrite next.
/// Used to verify confluence; `normal_form_word` fixes the leftmost strategy.
pub fn normal_form_word_with<S: Scalar>(
    word: &[u8],
    pick: &dyn Fn(&[u8]) -> Option<usize>,
) -> BTreeMap<Vec<u8>, S> {
    let mut out: BTreeMap<Vec<u8>, S> = BTreeMap::new();
    let mut stack: Vec<(Vec<u8>, S)> = vec![(word.to_vec(), S::one())];
    while let Some((w, c)) = stack.pop() {
        match pick(&w) {
            None => {
                debug_assert!(is_normal_key(&w));
                let entry = out.entry(w).or_insert_with(S::zero);
                *entry = entry.clone() + c;
            }
            Some(i) => {
                for (repl, rc) in rewrite_pair(w[i], w[i + 1]) {
                    let mut nw = Vec::with_capacity(w.len());
                    nw.extend_from_slice(&w[..i]);
                    nw.extend_from_slice(&repl);
                    nw.extend_from_slice(&w[i + 2..]);
                    stack.push((nw, c.clone() * S::from_i64(rc)));
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn pick_leftmost(w: &[u8]) -> Option<usize> {
    (0..w.len().saturating_sub(1))
        .find(|&i| is_right_letter(w[i]) && is_left_letter(w[i + 1]))
}

pub fn pick_rightmost(w: &[u8]) -> Option<usize> {
    (0..w.len().saturating_sub(1))
        .rev()
        .find(|&i| is_right_letter(w[i]) && is_left_letter(w[i + 1]))
}

/// Normal form of a free generator word: a finite combination of normal
/// monomial keys with scalar coefficients.
pub fn normal_form_word<S: Scalar>(word: &[u8]) -> BTreeMap<Vec<u8>, S> {
    normal_form_word_with(word, &pick_leftmost)
}

/// Dimension of the degree-`s` graded piece of the quotient algebra in the
/// tensor normal form: `Σ_{a+b=s} 3^a·2^b`.
pub fn dim_degree(s: usize) -> u64 {
    (0..=s as u32)
        .map(|a| 3u64.pow(a) * 2u64.pow(s as u32 - a))
        .sum()
}

/// All normal-form monomials of the given degree, in (left, right) length
/// splits with lexicographic words.
pub fn pbw_monomials(degree: usize) -> Vec<PBWMonomial> {
    fn words(letters: &[u8], len: usize) -> Vec<Vec<u8>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for w in words(letters, len - 1) {
            for &l in letters {
                let mut nw = w.clone();
                nw.push(l);
                out.push(nw);
            }
        }
        out
    }
    let mut out = Vec::new();
    for a in 0..=degree {
        for left in words(&LEFT_BLOCK, a) {
            for right in words(&RIGHT_BLOCK, degree - a) {
                out.push(PBWMonomial {
                    left: left.clone(),
                    right,
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Truncated series in the quotient algebra.
// ---------------------------------------------------------------------------

/// A degree-truncated series in the quotient algebra, stored on the normal
/// monomial basis. `terms[d]` maps normal letter-index keys of length `d` to
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct M05Series<S: Scalar> {
    cap: usize,
    terms: Vec<BTreeMap<Vec<u8>, S>>,
}

impl<S: Scalar> M05Series<S> {
    pub fn zero(cap: usize) -> Self {
        M05Series {
            cap,
            terms: vec![BTreeMap::new(); cap + 1],
        }
    }

    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.terms[0].insert(Vec::new(), S::one());
        s
    }

    pub fn generator(idx: u8, cap: usize) -> Self {
        assert!((idx as usize) < GEN_COUNT && cap >= 1);
        let mut s = Self::zero(cap);
        s.terms[1].insert(vec![idx], S::one());
        s
    }

    /// Degree-one series with the element's coordinates as coefficients.
    pub fn from_degree1(e: &Degree1Element, cap: usize) -> Self {
        assert!(cap >= 1);
        let mut s = Self::zero(cap);
        for (g, c) in e.coords.iter().enumerate() {
            if !c.is_zero() {
                s.terms[1].insert(vec![g as u8], S::from_rational(c));
            }
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, key: &[u8]) -> S {
        assert!(is_normal_key(key), "coefficient lookup needs a normal key");
        if key.len() > self.cap {
            return S::zero();
        }
        self.terms[key.len()].get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff_mono(&self, m: &PBWMonomial) -> S {
        self.coeff(&m.to_key())
    }

    pub fn add_assign_coeff(&mut self, key: &[u8], c: S) {
        assert!(is_normal_key(key) && key.len() <= self.cap);
        let entry = self.terms[key.len()]
            .entry(key.to_vec())
            .or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms[key.len()].remove(key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &S)> {
        self.terms.iter().flatten()
    }

    pub fn degree_terms(&self, d: usize) -> impl Iterator<Item = (&Vec<u8>, &S)> {
        self.terms[d].iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.cap, other.cap);
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_assign_coeff(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.cap, other.cap);
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_assign_coeff(k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(self.cap);
        for (d, t) in self.terms.iter().enumerate() {
            for (k, c) in t {
                let nc = f(c);
                if !nc.is_zero() {
                    out.terms[d].insert(k.clone(), nc);
                }
            }
        }
        out
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> M05Series<T> {
        let mut out = M05Series::<T>::zero(self.cap);
        for (d, t) in self.terms.iter().enumerate() {
            for (k, c) in t {
                let nc = f(c);
                if !nc.is_zero() {
                    out.terms[d].insert(k.clone(), nc);
                }
            }
        }
        out
    }

    /// Degree-truncated product; every concatenation is re-expanded on the
    /// normal basis.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cap, other.cap);
        let mut out = Self::zero(self.cap);
        for da in 0..=self.cap {
            if self.terms[da].is_empty() {
                continue;
            }
            for db in 0..=(self.cap - da) {
                if other.terms[db].is_empty() {
                    continue;
                }
                for (ka, ca) in &self.terms[da] {
                    for (kb, cb) in &other.terms[db] {
                        let mut w = ka.clone();
                        w.extend_from_slice(kb);
                        let c = ca.clone() * cb.clone();
                        if w.is_empty() || is_normal_key(&w) {
                            out.add_assign_coeff(&w, c);
                        } else {
                            for (nk, nc) in normal_form_word::<S>(&w) {
                                out.add_assign_coeff(&nk, c.clone() * nc);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(
            self.terms[0].is_empty(),
            "exp needs a zero constant term"
        );
        let mut out = Self::one(self.cap);
        let mut power = Self::one(self.cap);
        for k in 1..=self.cap as i64 {
            power = power.mul(self);
            power = power.map_coeffs(|c| c.div_int(k));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Self {
        assert_eq!(
            self.terms[0].get(&Vec::new()).cloned().unwrap_or_else(S::zero),
            S::one(),
            "inverse needs constant term 1"
        );
        // h = 1 − self; inverse = Σ h^k.
        let mut h = self.neg();
        h.add_assign_coeff(&[], S::one());
        let mut out = Self::one(self.cap);
        let mut power = Self::one(self.cap);
        for _ in 1..=self.cap {
            power = power.mul(&h);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, c)| c.abs_f64()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Per-degree residual against the constant series 1.
    pub fn residual_from_one_per_degree(&self) -> Vec<f64> {
        (0..=self.cap)
            .map(|d| {
                let mut mx: f64 = 0.0;
                for (k, c) in &self.terms[d] {
                    if d == 0 && k.is_empty() {
                        mx = mx.max((c.clone() - S::one()).abs_f64());
                    } else {
                        mx = mx.max(c.abs_f64());
                    }
                }
                if d == 0 && !self.terms[0].contains_key(&Vec::new()) {
                    mx = mx.max(1.0);
                }
                mx
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut terms = serde_json::Map::new();
        for (k, c) in self.iter() {
            let name = if k.is_empty() {
                "1".to_string()
            } else {
                k.iter()
                    .map(|&l| GEN_NAMES[l as usize])
                    .collect::<Vec<_>>()
                    .join(".")
            };
            terms.insert(name, c.to_json());
        }
        serde_json::json!({
            "generators": GEN_NAMES,
            "cap": self.cap,
            "terms": terms,
        })
    }
}

impl<S: Scalar> fmt::Display for M05Series<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k.is_empty() {
                write!(f, "{c:?}")?;
            } else {
                let name: Vec<&str> = k.iter().map(|&l| GEN_NAMES[l as usize]).collect();
                write!(f, "{c:?}*{}", name.join("."))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Substitute degree-one images for the free generators of a truncated
/// series, landing in the quotient algebra. `images[g]` is the image of the
/// free generator with index `g`.
pub fn substitute_series<S: Scalar>(
    ts: &TruncatedSeries<S>,
    images: &[Degree1Element],
) -> M05Series<S> {
    assert_eq!(ts.gens().len(), images.len());
    let mut out = M05Series::zero(ts.cap());
    for (mono, coeff) in ts.iter() {
        // Expand the product of degree-one images letter by letter.
        let mut words: Vec<(Vec<u8>, BigRational)> =
            vec![(Vec::new(), BigRational::one())];
        for &letter in mono {
            let img = &images[letter as usize];
            let mut next = Vec::with_capacity(words.len() * 2);
            for (w, q) in &words {
                for (g, c) in img.coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(g as u8);
                    next.push((nw, q * c));
                }
            }
            words = next;
        }
        for (w, q) in words {
            let c = coeff.clone() * S::from_rational(&q);
            if w.is_empty() || is_normal_key(&w) {
                out.add_assign_coeff(&w, c);
            } else {
                for (nk, nc) in normal_form_word::<S>(&w) {
                    out.add_assign_coeff(&nk, c.clone() * nc);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pentagon check.
// ---------------------------------------------------------------------------

/// The orbit of the pair `(X₁, X₁₁)` under the order-five automorphism:
/// entry `α` holds `(X₁^{(α)}, X₁₁^{(α)})`.
pub fn pentagon_orbit() -> [(Degree1Element, Degree1Element); 5] {
    let mut x1 = Degree1Element::generator(0);
    let mut x11 = Degree1Element::generator(1);
    std::array::from_fn(|_| {
        let cur = (x1.clone(), x11.clone());
        x1 = sigma_star_inv(&cur.0);
        x11 = sigma_star_inv(&cur.1);
        cur
    })
}

/// Verify the pentagon relation `Φ⁽⁴⁾Φ⁽³⁾Φ⁽²⁾Φ⁽¹⁾Φ⁽⁰⁾ = 1` through degree
/// `n`: each factor is the associator with `(X₀, X₁)` replaced by the orbit
/// pair `(X₁^{(α)}, X₁₁^{(α)})`, multiplied in the quotient algebra.
/// Residuals are reported per degree on the normal basis.
pub fn pentagon_check(n: usize, tol: f64) -> CheckReport {
    let started = Instant::now();
    let phi = crate::mzv::associator(n);
    let orbit = pentagon_orbit();
    let factors: Vec<M05Series<f64>> = orbit
        .iter()
        .map(|(a, b)| substitute_series(&phi, &[a.clone(), b.clone()]))
        .collect();
    let mut prod = factors[4].clone();
    for alpha in (0..4).rev() {
        prod = prod.mul(&factors[alpha]);
    }
    let residuals = prod.residual_from_one_per_degree();
    CheckReport::from_residuals(
        "pentagon",
        serde_json::json!({ "degree": n, "tolerance": tol }),
        residuals,
        tol,
        started,
    )
}
