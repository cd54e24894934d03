//! Truncated formal series in non-commuting generators.
//!
//! A [`TruncatedSeries`] stores coefficients on monomials (words in a fixed
//! [`GeneratorSet`]) of degree at most `cap`; every operation truncates at
//! that cap. This models the quotient of the free associative algebra
//! `k⟨X₁,…,X_n⟩` by the ideal of elements of degree > cap, which is where
//! all the series identities in this crate (inversions, connection formulas,
//! the pentagon relation) are certified degree by degree.
//!
//! Monomials are `Vec<u8>` of generator indices; degree = length. The
//! coefficient scalar is generic: exact rationals for structural identities,
//! `f64` once zeta values or polylogarithms enter.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Ordered list of generator names; index = position. Names are used for
/// display and serialization only — all arithmetic is on indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorSet {
    names: Vec<String>,
}

impl GeneratorSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        assert!(!names.is_empty() && names.len() <= u8::MAX as usize);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len(), "generator names must be distinct");
        Self { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: u8) -> &str {
        &self.names[i as usize]
    }

    pub fn index(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    /// All monomials of the given degree, in lexicographic index order.
    pub fn monomials(&self, degree: usize) -> Vec<Vec<u8>> {
        let n = self.len() as u64;
        let count = n.pow(degree as u32);
        (0..count)
            .map(|mut code| {
                let mut m = vec![0u8; degree];
                for slot in m.iter_mut().rev() {
                    *slot = (code % n) as u8;
                    code /= n;
                }
                m
            })
            .collect()
    }

    pub fn monomial_key(&self, m: &[u8]) -> String {
        m.iter()
            .map(|&i| self.name(i))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse_monomial(&self, s: &str) -> Option<Vec<u8>> {
        if s.is_empty() {
            return Some(Vec::new());
        }
        s.split('.').map(|tok| self.index(tok)).collect()
    }
}

/// Formal series truncated at total degree `cap`, with invariant: no exact
/// zeros stored, no monomial of degree > cap stored.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<S: Scalar> {
    gens: GeneratorSet,
    cap: usize,
    /// terms[d] holds the homogeneous degree-d component.
    terms: Vec<BTreeMap<Vec<u8>, S>>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(gens: &GeneratorSet, cap: usize) -> Self {
        Self {
            gens: gens.clone(),
            cap,
            terms: vec![BTreeMap::new(); cap + 1],
        }
    }

    pub fn one(gens: &GeneratorSet, cap: usize) -> Self {
        let mut s = Self::zero(gens, cap);
        s.terms[0].insert(Vec::new(), S::one());
        s
    }

    /// The series consisting of a single generator.
    pub fn generator(gens: &GeneratorSet, cap: usize, idx: u8) -> Self {
        assert!((idx as usize) < gens.len());
        let mut s = Self::zero(gens, cap);
        if cap >= 1 {
            s.terms[1].insert(vec![idx], S::one());
        }
        s
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, mono: &[u8]) -> S {
        if mono.len() > self.cap {
            return S::zero();
        }
        self.terms[mono.len()]
            .get(mono)
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn set_coeff(&mut self, mono: Vec<u8>, c: S) {
        assert!(mono.len() <= self.cap, "monomial exceeds cap");
        if c.is_zero() {
            self.terms[mono.len()].remove(&mono);
        } else {
            self.terms[mono.len()].insert(mono, c);
        }
    }

    pub fn add_assign_coeff(&mut self, mono: &[u8], c: S) {
        if mono.len() > self.cap || c.is_zero() {
            return;
        }
        let d = mono.len();
        match self.terms[d].get_mut(mono) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms[d].remove(mono);
                }
            }
            None => {
                self.terms[d].insert(mono.to_vec(), c);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &S)> {
        self.terms.iter().flat_map(|m| m.iter())
    }

    pub fn degree_terms(&self, d: usize) -> impl Iterator<Item = (&Vec<u8>, &S)> {
        self.terms[d].iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|m| m.is_empty())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        assert_eq!(self.gens, other.gens, "generator sets differ");
        assert_eq!(self.cap, other.cap, "caps differ");
        let mut out = Self::zero(&self.gens, self.cap);
        for (m, c) in self.iter() {
            out.set_coeff(m.clone(), f(c.clone(), S::zero()));
        }
        for (m, c) in other.iter() {
            let cur = out.coeff(m);
            // cur already holds f(self, 0); add the other side's delta:
            // f(a, b) = f(a, 0) + (f(0, b) − f(0, 0)) for linear f with
            // f(0,0)=0, which covers + and −.
            let delta = f(S::zero(), c.clone());
            out.set_coeff(m.clone(), cur + delta);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_coeffs(|v| v.clone() * c.clone())
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(&self.gens, self.cap);
        for (m, c) in self.iter() {
            out.set_coeff(m.clone(), f(c));
        }
        out
    }

    /// Convert the scalar type (e.g. exact rational → f64).
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        let mut out = TruncatedSeries::zero(&self.gens, self.cap);
        for (m, c) in self.iter() {
            out.set_coeff(m.clone(), f(c));
        }
        out
    }

    /// Product, truncated at the cap.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.gens, other.gens, "generator sets differ");
        assert_eq!(self.cap, other.cap, "caps differ");
        let mut out = Self::zero(&self.gens, self.cap);
        for da in 0..=self.cap {
            if self.terms[da].is_empty() {
                continue;
            }
            for db in 0..=(self.cap - da) {
                if other.terms[db].is_empty() {
                    continue;
                }
                for (ma, ca) in &self.terms[da] {
                    for (mb, cb) in &other.terms[db] {
                        let mut m = ma.clone();
                        m.extend_from_slice(mb);
                        out.add_assign_coeff(&m, ca.clone() * cb.clone());
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term 1 (geometric series in the
    /// augmentation part): `(1 + N)⁻¹ = Σ_{k≤cap} (−N)^k`.
    pub fn inverse(&self) -> Self {
        assert!(
            self.coeff(&[]).approx_eq(&S::one(), 0.0) || self.coeff(&[]) == S::one(),
            "inverse requires constant term exactly 1"
        );
        let one = Self::one(&self.gens, self.cap);
        let neg_n = one.sub(self); // −N
        let mut out = one.clone();
        let mut power = one;
        for _ in 1..=self.cap {
            power = power.mul(&neg_n);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    /// Exponential of a series with zero constant term:
    /// `exp(N) = Σ_{k≤cap} N^k / k!`.
    pub fn exp(&self) -> Self {
        assert!(self.coeff(&[]).is_zero(), "exp requires zero constant term");
        let mut out = Self::one(&self.gens, self.cap);
        let mut power = Self::one(&self.gens, self.cap);
        for k in 1..=self.cap as i64 {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            power = power.map_coeffs(|c| c.div_int(k));
            out = out.add(&power);
        }
        out
    }

    /// Logarithm of a series with constant term 1:
    /// `log(1 + N) = Σ_{k≤cap} (−1)^{k+1} N^k / k`.
    pub fn log(&self) -> Self {
        assert!(
            self.coeff(&[]) == S::one(),
            "log requires constant term exactly 1"
        );
        let n = self.sub(&Self::one(&self.gens, self.cap));
        let mut out = Self::zero(&self.gens, self.cap);
        let mut power = Self::one(&self.gens, self.cap);
        for k in 1..=self.cap as i64 {
            power = power.mul(&n);
            if power.is_zero() {
                break;
            }
            let signed = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.map_coeffs(|c| c.div_int(signed * k)));
        }
        out
    }

    /// Apply a linear substitution on generators: generator `i` ↦
    /// `Σ_j images[i][j].0 · (generator images[i][j].1)`, extended as an
    /// algebra homomorphism. The target generator set may differ.
    pub fn subst_linear(&self, target: &GeneratorSet, images: &[Vec<(S, u8)>]) -> Self {
        assert_eq!(images.len(), self.gens.len(), "one image per generator");
        for img in images {
            for (_, j) in img {
                assert!((*j as usize) < target.len(), "image index out of range");
            }
        }
        let mut out = Self::zero(target, self.cap);
        for (m, c) in self.iter() {
            // Expand the product of letter images.
            let mut partial: Vec<(Vec<u8>, S)> = vec![(Vec::new(), c.clone())];
            for &letter in m {
                let mut next = Vec::with_capacity(partial.len() * images[letter as usize].len());
                for (mono, coeff) in &partial {
                    for (ic, ig) in &images[letter as usize] {
                        let mut m2 = mono.clone();
                        m2.push(*ig);
                        next.push((m2, coeff.clone() * ic.clone()));
                    }
                }
                partial = next;
            }
            for (mono, coeff) in partial {
                out.add_assign_coeff(&mono, coeff);
            }
        }
        out
    }

    /// Largest coefficient magnitude (0 for the zero series).
    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, c)| c.abs_f64()).fold(0.0, f64::max)
    }

    /// `max |self − other|` over all monomials.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Distance from the unit series, `max_w |c_w − δ_{w,∅}|`.
    pub fn distance_from_one(&self) -> f64 {
        self.max_diff(&Self::one(&self.gens, self.cap))
    }

    /// Group-likeness residual: a series `Σ c_w w` is group-like when its
    /// coefficient functional is a shuffle homomorphism,
    /// `c_u · c_v = Σ_w ⟨u ⧢ v, w⟩ c_w` for all monomials `u, v`.
    /// Returns the largest violation over all pairs with `|u|+|v| ≤ cap`,
    /// `u, v` nonempty.
    pub fn grouplike_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for du in 1..=self.cap.saturating_sub(1) {
            for dv in 1..=(self.cap - du) {
                for u in self.gens.monomials(du) {
                    for v in self.gens.monomials(dv) {
                        let mut lhs = S::zero();
                        for (w, mult) in shuffle_monomials(&u, &v) {
                            lhs = lhs + self.coeff(&w) * S::from_i64(mult as i64);
                        }
                        let rhs = self.coeff(&u) * self.coeff(&v);
                        worst = worst.max((lhs - rhs).abs_f64());
                    }
                }
            }
        }
        worst
    }

    /// Serialize as `{"generators": […], "cap": N, "terms": {"X0.X1": c}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut terms = serde_json::Map::new();
        for (m, c) in self.iter() {
            terms.insert(self.gens.monomial_key(m), c.to_json());
        }
        serde_json::json!({
            "generators": self.gens.names,
            "cap": self.cap,
            "terms": terms,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let names: Vec<String> = v
            .get("generators")?
            .as_array()?
            .iter()
            .map(|x| x.as_str().map(str::to_string))
            .collect::<Option<_>>()?;
        let gens = GeneratorSet::new(&names);
        let cap = v.get("cap")?.as_u64()? as usize;
        let mut out = Self::zero(&gens, cap);
        for (k, val) in v.get("terms")?.as_object()? {
            let mono = gens.parse_monomial(k)?;
            out.set_coeff(mono, S::from_json(val)?);
        }
        Some(out)
    }
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            let key = if m.is_empty() {
                "1".to_string()
            } else {
                self.gens.monomial_key(m)
            };
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}·{key}")?;
            first = false;
        }
        Ok(())
    }
}

/// Shuffle of two index monomials with multiplicities (the same interleaving
/// combinatorics as `shuffle::shuffle_words`, over raw indices).
pub fn shuffle_monomials(u: &[u8], v: &[u8]) -> BTreeMap<Vec<u8>, u64> {
    fn go(u: &[u8], v: &[u8], out: &mut BTreeMap<Vec<u8>, u64>, prefix: &mut Vec<u8>) {
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

/// Operator role of a letter in the series-expansion maps used by the
/// differential-equation solutions: `Ad` acts on the free algebra as the
/// commutator `p ↦ x·p − p·x`, `Mu` as left multiplication `p ↦ x·p`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AlphaOp {
    Ad,
    Mu,
}

/// Apply an operator word to the unit of the free algebra, rightmost
/// operator first: the result of `[(x, op_x), (y, op_y)]` is
/// `op_x(op_y(1))`. Letters are generator indices of the target algebra;
/// coefficients stay integral.
pub fn alpha_apply(word: &[(u8, AlphaOp)]) -> BTreeMap<Vec<u8>, i64> {
    let mut cur: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
    cur.insert(Vec::new(), 1);
    for &(x, op) in word.iter().rev() {
        let mut next: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
        for (w, c) in &cur {
            let mut left = Vec::with_capacity(w.len() + 1);
            left.push(x);
            left.extend_from_slice(w);
            *next.entry(left).or_insert(0) += c;
            if op == AlphaOp::Ad {
                let mut right = w.clone();
                right.push(x);
                *next.entry(right).or_insert(0) -= c;
            }
        }
        next.retain(|_, c| *c != 0);
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn gens2() -> GeneratorSet {
        GeneratorSet::new(&["X0", "X1"])
    }

    #[test]
    fn alpha_apply_examples() {
        use AlphaOp::{Ad, Mu};
        // μ(x₁)(1) = x₁.
        let r = alpha_apply(&[(1, Mu)]);
        assert_eq!(r, BTreeMap::from([(vec![1u8], 1i64)]));
        // ad(x₀)μ(x₁)(1) = x₀x₁ − x₁x₀.
        let r = alpha_apply(&[(0, Ad), (1, Mu)]);
        assert_eq!(r.len(), 2);
        assert_eq!(r[&vec![0u8, 1]], 1);
        assert_eq!(r[&vec![1u8, 0]], -1);
        // ad applied to the unit vanishes.
        assert!(alpha_apply(&[(0, Ad)]).is_empty());
        // μ(x₂)ad(x₀)μ(x₁)(1) = x₂(x₀x₁ − x₁x₀).
        let r = alpha_apply(&[(2, Mu), (0, Ad), (1, Mu)]);
        assert_eq!(r[&vec![2u8, 0, 1]], 1);
        assert_eq!(r[&vec![2u8, 1, 0]], -1);
    }

    #[test]
    fn mul_truncates_and_is_associative() {
        let g = gens2();
        let x0 = TruncatedSeries::<BigRational>::generator(&g, 3, 0);
        let x1 = TruncatedSeries::<BigRational>::generator(&g, 3, 1);
        let p = x0.add(&x1);
        let q = p.mul(&p).mul(&p).mul(&p); // degree 4 > cap 3 → zero
        assert!(q.is_zero());
        let a = x0.mul(&x1);
        assert_eq!(a.coeff(&[0, 1]), ratio(1, 1));
        assert_eq!(a.coeff(&[1, 0]), ratio(0, 1));
        assert_eq!(
            x0.mul(&x1).mul(&x0),
            x0.mul(&x1.mul(&x0)),
            "associativity"
        );
    }

    #[test]
    fn inverse_and_log_exp_roundtrip() {
        let g = gens2();
        let cap = 5;
        let x0 = TruncatedSeries::<BigRational>::generator(&g, cap, 0);
        let x1 = TruncatedSeries::<BigRational>::generator(&g, cap, 1);
        let n = x0.scale(&ratio(2, 3)).add(&x1.mul(&x0).scale(&ratio(-1, 5)));
        let s = TruncatedSeries::one(&g, cap).add(&n);
        assert!(s.mul(&s.inverse()).distance_from_one() == 0.0);
        assert!(s.inverse().mul(&s).distance_from_one() == 0.0);
        assert_eq!(s.log().exp(), s);
        assert_eq!(n.exp().log(), n);
    }

    #[test]
    fn exp_adds_for_commuting_exponents() {
        let g = gens2();
        let cap = 6;
        let x0 = TruncatedSeries::<BigRational>::generator(&g, cap, 0);
        let a = x0.scale(&ratio(1, 2)).exp();
        let b = x0.scale(&ratio(1, 3)).exp();
        let c = x0.scale(&ratio(5, 6)).exp();
        assert_eq!(a.mul(&b), c);
    }

    #[test]
    fn exp_of_primitive_is_grouplike() {
        let g = gens2();
        // exp of a single generator is group-like; residual is exactly 0
        // over rationals.
        let x1 = TruncatedSeries::<BigRational>::generator(&g, 5, 1);
        assert_eq!(x1.exp().grouplike_residual(), 0.0);
        // A series with an extra non-primitive term is not group-like.
        let mut bad = x1.exp();
        bad.add_assign_coeff(&[0, 0], ratio(1, 1));
        assert!(bad.grouplike_residual() > 0.5);
    }

    #[test]
    fn subst_linear_homomorphism() {
        let g = gens2();
        let cap = 4;
        type T = TruncatedSeries<BigRational>;
        let x0 = T::generator(&g, cap, 0);
        let x1 = T::generator(&g, cap, 1);
        // X0 ↦ −X1, X1 ↦ −X0 (an involution).
        let images = vec![vec![(ratio(-1, 1), 1u8)], vec![(ratio(-1, 1), 0u8)]];
        let p = x0.mul(&x1).add(&x1.scale(&ratio(3, 2)));
        let q = p.subst_linear(&g, &images);
        assert_eq!(q.coeff(&[1, 0]), ratio(1, 1));
        assert_eq!(q.coeff(&[0]), ratio(-3, 2));
        // Applying twice returns the original.
        assert_eq!(q.subst_linear(&g, &images), p);
        // Homomorphism property on a product.
        let a = x0.add(&x1.mul(&x0));
        let b = x1.sub(&x0.mul(&x0));
        assert_eq!(
            a.mul(&b).subst_linear(&g, &images),
            a.subst_linear(&g, &images).mul(&b.subst_linear(&g, &images))
        );
    }

    #[test]
    fn json_roundtrip_f64_and_rational() {
        let g = gens2();
        let x0 = TruncatedSeries::<f64>::generator(&g, 3, 0);
        let s = x0.exp().scale(&1.5);
        let back = TruncatedSeries::<f64>::from_json(&s.to_json()).unwrap();
        assert!(s.max_diff(&back) == 0.0);

        let y = TruncatedSeries::<BigRational>::generator(&g, 3, 1).scale(&ratio(7, 9));
        let back = TruncatedSeries::<BigRational>::from_json(&y.to_json()).unwrap();
        assert_eq!(y, back);
    }

    #[test]
    fn monomial_enumeration_and_keys() {
        let g = gens2();
        assert_eq!(g.monomials(0), vec![Vec::<u8>::new()]);
        assert_eq!(g.monomials(2).len(), 4);
        assert_eq!(g.monomial_key(&[0, 1]), "X0.X1");
        assert_eq!(g.parse_monomial("X0.X1"), Some(vec![0, 1]));
        assert_eq!(g.parse_monomial(""), Some(vec![]));
        assert_eq!(g.parse_monomial("X0.Z"), None);
    }
}
