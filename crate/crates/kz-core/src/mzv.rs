//! Multiple zeta values by two independent routes, the regularized
//! `ζ ∘ reg¹⁰` map, and the truncated Drinfel'd associator.
//!
//! Route one — the **direct-summation oracle** — computes
//! `ζ(k₁,…,k_r) = Σ_{n₁>…>n_r≥1} Π nⱼ^{−kⱼ}` level by level from the
//! innermost index, summing exactly up to a cutoff `M` and carrying the
//! tail symbolically as a bivariate expansion in `(log n, 1/n)` whose
//! Euler–Maclaurin corrections are applied exactly on monomials. It touches
//! no polylogarithm identity, which makes it the independent side of every
//! inversion/duality check (the Hölder route *is* the inversion formula at
//! `z = 1/2`, so it can never falsify it).
//!
//! Route two — **Hölder convolution** — evaluates
//! `ζ(w) = Σ_{uv=w} Li(τ(u); 1/2)·Li(v; 1/2)`, all pieces geometrically
//! convergent series at `1/2`.

use crate::connect::CheckReport;
use crate::ncalg::{GeneratorSet, TruncatedSeries};
use crate::polylog::{mpl, EvalConfig, EvalError, EvalResult, MplIndex};
use crate::shuffle::{
    is_admissible, reg10, tau_word, word_key, word_to_composition, words_of_weight,
    ShufflePoly, Word, Xi01,
};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

// ---------------------------------------------------------------------------
// Direct-summation oracle with symbolic Euler–Maclaurin tails.
// ---------------------------------------------------------------------------

/// Exact-summation cutoff: levels are summed termwise (Kahan-compensated)
/// for n ≤ M and by the tail expansion beyond.
const EM_M: usize = 2000;
/// Maximum power of 1/n kept when re-expanding tails; the dropped terms are
/// O(M⁻¹¹) ≈ 1e−37.
const EM_PMAX: usize = 10;
/// Maximum power of log n kept (weight-8 indices produce log-degree ≤ 8).
const EM_QCAP: usize = 8;
/// Number of Bernoulli corrections in the Euler–Maclaurin tail.
const EM_NEM: usize = 8;
/// Largest single exponent supported.
const EM_KMAX: usize = 20;

const QDIM: usize = EM_QCAP + 2; // antiderivatives raise log-degree by one
const SDIM: usize = EM_PMAX + EM_KMAX + 2 * EM_NEM + 2;

/// B₂, B₄, …, B₁₆.
const BERNOULLI: [f64; EM_NEM] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0f64, |a, i| a * i as f64)
}

/// Bivariate expansion `Σ a[q][s]·u^q·x^s` with `u = log n`, `x = 1/n`,
/// modeling a level's partial-sum asymptotics for `n ≥ M`.
#[derive(Clone)]
struct Expansion {
    a: Vec<f64>, // row-major [q][s]
}

impl Expansion {
    fn zero() -> Self {
        Self {
            a: vec![0.0; QDIM * SDIM],
        }
    }

    fn constant(c: f64) -> Self {
        let mut e = Self::zero();
        e.a[0] = c;
        e
    }

    #[inline]
    fn get(&self, q: usize, s: usize) -> f64 {
        self.a[q * SDIM + s]
    }

    #[inline]
    fn add_at(&mut self, q: usize, s: usize, v: f64) {
        debug_assert!(q < QDIM && s < SDIM, "expansion index overflow");
        self.a[q * SDIM + s] += v;
    }

    fn add_scaled(&mut self, other: &Self, scale: f64) {
        for (t, o) in self.a.iter_mut().zip(other.a.iter()) {
            *t += scale * o;
        }
    }

    /// Truncating product: drops `x`-degree > pmax and `u`-degree > qcap
    /// (used only during tail re-expansion, where dropped terms are
    /// O(M^{−pmax−1})).
    fn mul_capped(&self, other: &Self, pmax: usize, qcap: usize) -> Self {
        let mut out = Self::zero();
        for qa in 0..QDIM {
            for sa in 0..SDIM {
                let va = self.get(qa, sa);
                if va == 0.0 {
                    continue;
                }
                for qb in 0..QDIM {
                    let q = qa + qb;
                    if q > qcap {
                        break;
                    }
                    for sb in 0..SDIM {
                        let vb = other.get(qb, sb);
                        if vb == 0.0 {
                            continue;
                        }
                        let s = sa + sb;
                        if s > pmax {
                            break;
                        }
                        out.add_at(q, s, va * vb);
                    }
                }
            }
        }
        out
    }

    fn pow_capped(&self, n: usize, pmax: usize, qcap: usize) -> Self {
        let mut out = Self::constant(1.0);
        for _ in 0..n {
            out = out.mul_capped(self, pmax, qcap);
        }
        out
    }

    fn eval(&self, u: f64, x: f64) -> f64 {
        // Power tables keep this exact enough at the M-side point.
        let mut upow = [0.0f64; QDIM];
        let mut xpow = [0.0f64; SDIM];
        upow[0] = 1.0;
        for q in 1..QDIM {
            upow[q] = upow[q - 1] * u;
        }
        xpow[0] = 1.0;
        for s in 1..SDIM {
            xpow[s] = xpow[s - 1] * x;
        }
        let mut acc = 0.0;
        for q in 0..QDIM {
            for s in 0..SDIM {
                let v = self.get(q, s);
                if v != 0.0 {
                    acc += v * upow[q] * xpow[s];
                }
            }
        }
        acc
    }

    /// Derivative in the summation variable: `u^q x^s ↦ q·u^{q−1}x^{s+1} −
    /// s·u^q x^{s+1}` (since du = x·dy·…, with y the underlying variable).
    fn deriv(&self) -> Self {
        let mut out = Self::zero();
        for q in 0..QDIM {
            for s in 0..SDIM {
                let v = self.get(q, s);
                if v == 0.0 {
                    continue;
                }
                if q > 0 {
                    out.add_at(q - 1, s + 1, q as f64 * v);
                }
                if s > 0 {
                    out.add_at(q, s + 1, -(s as f64) * v);
                }
            }
        }
        out
    }

    /// Re-express `P(log(m−1), 1/(m−1))` in `(log m, 1/m)` via
    /// `x′ = Σ_{i≥1} x^i` and `u′ = u − Σ_{i≥1} x^i/i`, capped at
    /// `x`-degree pmax.
    fn shift_expand(&self, pmax: usize, qcap: usize) -> Self {
        let mut xp = Expansion::zero(); // x′ − series
        let mut lg = Expansion::zero(); // u′ − u
        for i in 1..=pmax {
            xp.add_at(0, i, 1.0);
            lg.add_at(0, i, -1.0 / i as f64);
        }
        let mut out = Expansion::zero();
        for q in 0..QDIM {
            for s in 0..SDIM {
                let v = self.get(q, s);
                if v == 0.0 {
                    continue;
                }
                // (u + lg)^q expanded binomially, times xp^s, times v.
                let mut acc = Expansion::zero();
                for j in 0..=q {
                    let c = binomial(q, j);
                    let piece = lg.pow_capped(q - j, pmax, qcap);
                    // Multiply by u^j: raise the q-index.
                    for qq in 0..QDIM {
                        if qq + j > qcap {
                            break;
                        }
                        for ss in 0..SDIM {
                            let pv = piece.get(qq, ss);
                            if pv != 0.0 {
                                acc.add_at(qq + j, ss, c * pv);
                            }
                        }
                    }
                }
                let acc = acc.mul_capped(&xp.pow_capped(s, pmax, qcap), pmax, qcap);
                out.add_scaled(&acc, v);
            }
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// One summation level: given the inner level's exact values
/// `exact_prev[n] = G_{j+1}(n)` for `n ≤ M` and tail expansion `p_next`,
/// produce the same pair for `G_j(n) = Σ_{m≤n} G_{j+1}(m−1)·m^{−k}`.
fn em_level(p_next: &Expansion, k: usize, exact_prev: &[f64]) -> (Vec<f64>, Expansion) {
    // Exact part, Kahan-compensated.
    let mut exact = vec![0.0f64; EM_M + 1];
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=EM_M {
        let term = exact_prev[n - 1] / (n as f64).powi(k as i32);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        exact[n] = sum;
    }

    // Summand f(m) = P_next(log(m−1), 1/(m−1))·m^{−k} as an expansion in
    // (log m, 1/m).
    let shifted = p_next.shift_expand(EM_PMAX, EM_QCAP);
    let mut f = Expansion::zero();
    for q in 0..QDIM {
        for s in 0..SDIM {
            let v = shifted.get(q, s);
            if v != 0.0 {
                f.add_at(q, s + k, v);
            }
        }
    }

    // Euler–Maclaurin: Σ_{m=M+1}^{n} f(m) = [T(n) + f(n)/2 + Σᵢ B₂ᵢ/(2i)!·
    // f^{(2i−1)}(n)] − [same at M], with T the antiderivative. Monomial
    // antiderivatives are exact:
    //   ∫ u^q x dy = u^{q+1}/(q+1);
    //   ∫ u^q x^s dy = −Σ_{i=0}^{q} q!/(q−i)!·u^{q−i}·x^{s−1}/(s−1)^{i+1}
    // for s ≥ 2.
    let mut nside = Expansion::zero();
    for q in 0..QDIM {
        for s in 0..SDIM {
            let v = f.get(q, s);
            if v == 0.0 {
                continue;
            }
            debug_assert!(s >= 1, "summand must decay");
            if s == 1 {
                nside.add_at(q + 1, 0, v / (q + 1) as f64);
            } else {
                let sm1 = (s - 1) as f64;
                let mut falling = 1.0f64; // q!/(q−i)!
                let mut denom = sm1;
                for i in 0..=q {
                    nside.add_at(q - i, s - 1, -v * falling / denom);
                    falling *= (q - i) as f64;
                    denom *= sm1;
                }
            }
        }
    }
    nside.add_scaled(&f, 0.5);
    let mut d = f.clone();
    for (i, bern) in BERNOULLI.iter().enumerate() {
        d = d.deriv(); // odd derivative f^{(2i+1−1)} … f^{(2i+1)}
        nside.add_scaled(&d, bern / factorial(2 * (i + 1)));
        d = d.deriv(); // advance past the even derivative
    }

    // Pin the constant so the expansion matches the exact sum at n = M.
    let m_side = nside.eval((EM_M as f64).ln(), 1.0 / EM_M as f64);
    let mut p = nside;
    p.add_at(0, 0, exact[EM_M] - m_side);
    (exact, p)
}

/// Direct-summation zeta oracle: `ζ(k₁,…,k_r)` for an admissible
/// composition (`k₁ ≥ 2`, all `kᵢ ≥ 1`). Absolute accuracy is at the
/// rounding level (validated against independent high-precision values).
pub fn zeta_em(comp: &[u32]) -> f64 {
    assert!(!comp.is_empty(), "empty composition is ζ() = 1; not summed");
    assert!(comp[0] >= 2, "inadmissible composition {comp:?}");
    assert!(
        comp.iter().all(|&k| k >= 1 && (k as usize) <= EM_KMAX),
        "exponent out of range in {comp:?}"
    );
    let mut exact = vec![1.0f64; EM_M + 1]; // G_{r+1} ≡ 1
    let mut p = Expansion::constant(1.0);
    for &k in comp.iter().rev() {
        let (e, pn) = em_level(&p, k as usize, &exact);
        exact = e;
        p = pn;
    }
    // At n → ∞ every x-power vanishes; residual pure-log coefficients are
    // zero analytically for convergent indices.
    p.get(0, 0)
}

// ---------------------------------------------------------------------------
// Caches.
// ---------------------------------------------------------------------------

fn em_cache() -> &'static Mutex<HashMap<Vec<u32>, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u32>, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached [`zeta_em`]; safe for concurrent use (recomputation races are
/// harmless — the value is deterministic).
pub fn zeta_em_cached(comp: &[u32]) -> f64 {
    if let Some(&v) = em_cache().lock().unwrap().get(comp) {
        return v;
    }
    let v = zeta_em(comp);
    em_cache().lock().unwrap().insert(comp.to_vec(), v);
    v
}

fn reg10_cache() -> &'static Mutex<HashMap<Word<Xi01>, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<Word<Xi01>, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ζ(reg¹⁰(w))` for a single word, via the direct-summation oracle on the
/// admissible constituents; cached.
pub fn zeta_reg10_cached(w: &[Xi01]) -> f64 {
    if w.is_empty() {
        return 1.0;
    }
    if let Some(&v) = reg10_cache().lock().unwrap().get(w) {
        return v;
    }
    let r = reg10(&ShufflePoly::word(w.to_vec()));
    let mut acc = 0.0f64;
    for (word, c) in r.iter() {
        debug_assert!(is_admissible(word));
        let comp = word_to_composition(word).expect("regularized word is admissible");
        acc += crate::scalar::rational_to_f64(c) * zeta_em_cached(&comp);
    }
    reg10_cache().lock().unwrap().insert(w.to_vec(), acc);
    acc
}

/// `ζ ∘ reg¹⁰` applied linearly to a shuffle polynomial.
pub fn zeta_reg(p: &ShufflePoly<Xi01>) -> f64 {
    p.iter()
        .map(|(w, c)| crate::scalar::rational_to_f64(c) * zeta_reg10_cached(w))
        .sum()
}

// ---------------------------------------------------------------------------
// Hölder convolution route.
// ---------------------------------------------------------------------------

/// `ζ(w)` by Hölder convolution at 1/2:
/// `ζ(w) = Σ_{uv=w} Li(τ(u); 1/2)·Li(v; 1/2)` — every factor is a plain
/// convergent series (both `τ(u)` and `v` end in `ξ₁` when `w` is
/// admissible), with geometric 2⁻ⁿ tails.
pub fn zeta_holder(w: &[Xi01], cfg: &EvalConfig) -> EvalResult {
    if w.is_empty() {
        return Ok(1.0);
    }
    if !is_admissible(w) {
        return Err(EvalError::Domain(format!(
            "ζ needs an admissible word, got {}",
            word_key(w)
        )));
    }
    let mut acc = 0.0f64;
    for cut in 0..=w.len() {
        let (u, v) = w.split_at(cut);
        let a = if u.is_empty() {
            1.0
        } else {
            let tu = tau_word(u);
            let comp = word_to_composition(&tu).expect("τ(prefix) ends in ξ₁");
            mpl(&MplIndex(comp), 0.5, cfg)?
        };
        let b = if v.is_empty() {
            1.0
        } else {
            let comp = word_to_composition(v).expect("suffix ends in ξ₁");
            mpl(&MplIndex(comp), 0.5, cfg)?
        };
        acc += a * b;
    }
    Ok(acc)
}

/// Zeta of an admissible word at the requested absolute tolerance — the
/// user-facing evaluator (Hölder convolution; see [`zeta_em`] for the
/// independent direct-summation route).
pub fn zeta(w: &[Xi01], tol: f64) -> EvalResult {
    let cfg = EvalConfig {
        tolerance: tol.max(1e-16),
        ..EvalConfig::default()
    };
    zeta_holder(w, &cfg)
}

/// Evaluation route selector for zeta values (CLI-facing).
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum ZetaRoute {
    /// Hölder convolution at 1/2 (fast, geometric).
    #[default]
    Holder,
    /// Level-by-level direct summation with Euler–Maclaurin tails —
    /// independent of every inversion identity.
    DirectSummation,
}

/// `ζ(k₁,…,k_r)` by the chosen route.
pub fn zeta_comp(comp: &[u32], route: ZetaRoute, cfg: &EvalConfig) -> EvalResult {
    if comp.is_empty() {
        return Ok(1.0);
    }
    if comp[0] < 2 {
        return Err(EvalError::Divergent(format!(
            "inadmissible zeta index {comp:?}"
        )));
    }
    match route {
        ZetaRoute::Holder => {
            let w = crate::shuffle::composition_to_word(comp);
            zeta_holder(&w, cfg)
        }
        ZetaRoute::DirectSummation => Ok(zeta_em_cached(comp)),
    }
}

// ---------------------------------------------------------------------------
// The truncated Drinfel'd associator.
// ---------------------------------------------------------------------------

/// Generator set `{X₀, X₁}` of the one-variable connection.
pub fn kz_generators() -> GeneratorSet {
    GeneratorSet::new(&["X0", "X1"])
}

/// Monomial in `{X₀,X₁}` ↔ word in `{ξ₀,ξ₁}` (same index order).
pub fn xi_word_to_mono(w: &[Xi01]) -> Vec<u8> {
    w.iter()
        .map(|&l| if l == Xi01::Xi0 { 0u8 } else { 1u8 })
        .collect()
}

pub fn mono_to_xi_word(m: &[u8]) -> Word<Xi01> {
    m.iter()
        .map(|&i| if i == 0 { Xi01::Xi0 } else { Xi01::Xi1 })
        .collect()
}

/// The truncated associator `Φ = Σ_w ζ(reg¹⁰(w))·W` to total degree `n`,
/// with coefficients from the direct-summation oracle.
pub fn associator(n: usize) -> TruncatedSeries<f64> {
    let gens = kz_generators();
    let mut phi = TruncatedSeries::zero(&gens, n);
    phi.set_coeff(Vec::new(), 1.0);
    for weight in 1..=n {
        for w in words_of_weight(weight) {
            let c = zeta_reg10_cached(&w);
            phi.set_coeff(xi_word_to_mono(&w), c);
        }
    }
    phi
}

/// Duality check: `Φ(X₀,X₁)·Φ(−X₁,−X₀) = 1` per degree up to `n`, plus the
/// word-level MZV duality instances `ζ(reg¹⁰(w)) = ζ(reg¹⁰(τ(w)))` (both
/// sides by the direct-summation oracle; the Hölder route is trivially
/// τ-symmetric and would prove nothing). Residual layout: degrees
/// `0..=n` of the product, then one worst-instance residual per weight
/// `1..=n`.
pub fn check_duality(n: usize, tol: f64) -> CheckReport {
    let started = Instant::now();
    let gens = kz_generators();
    let phi = associator(n);
    let dual = phi.subst_linear(&gens, &[vec![(-1.0, 1)], vec![(-1.0, 0)]]);
    let prod = phi.mul(&dual);
    let one = TruncatedSeries::one(&gens, n);
    let diff = prod.sub(&one);
    let mut residuals: Vec<f64> = (0..=n)
        .map(|d| {
            diff.degree_terms(d)
                .map(|(_, c)| c.abs())
                .fold(0.0f64, f64::max)
        })
        .collect();
    for weight in 1..=n {
        let mut worst = 0.0f64;
        for w in words_of_weight(weight) {
            let lhs = zeta_reg10_cached(&w);
            let rhs = zeta_reg10_cached(&tau_word(&w));
            worst = worst.max((lhs - rhs).abs());
        }
        residuals.push(worst);
    }
    CheckReport::from_residuals(
        "duality",
        serde_json::json!({
            "degree": n,
            "tolerance": tol,
            "layout": "product residual per degree 0..=N, then worst MZV duality instance per weight 1..=N",
        }),
        residuals,
        tol,
        started,
    )
}
