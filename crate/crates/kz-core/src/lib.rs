//! Algebraic and numeric machinery for the Knizhnik–Zamolodchikov
//! connection problem on the moduli spaces 𝓜₀,₄ and 𝓜₀,₅.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`]   — a coefficient abstraction over exact rationals and `f64`;
//! * [`shuffle`]  — the shuffle algebra of words of one-forms, with the
//!   regularization maps `reg⁰`, `reg¹⁰` and the duality map `τ`;
//! * [`ncalg`]    — truncated series in non-commuting generators (group-like
//!   elements, products, inverses, substitutions);
//! * [`polylog`]  — numerical evaluation of multiple polylogarithms in one
//!   and two variables, and iterated integrals over explicit one-forms;
//! * [`mzv`]      — multiple zeta values by two independent routes, shuffle-
//!   regularized zeta maps, and the truncated Drinfel'd associator;
//! * [`m05`]      — the five-generator quotient algebra of 𝓜₀,₅: normal
//!   forms, the braid-group symmetries, the reduced bar construction;
//! * [`connect`]  — numerical certification of the connection identities on
//!   𝓜₀,₄ and 𝓜₀,₅ (inversion, duality, decomposition, five-term…);
//! * [`transport`] — ODE transport of fundamental solutions along paths,
//!   cross-checked against the series evaluations.
//!
//! All algebraic cores are hand-written; external crates are used only for
//! infrastructure (big rationals, RNG, serialization, parallel iteration).

pub mod connect;
pub mod m05;
pub mod mzv;
pub mod ncalg;
pub mod polylog;
pub mod scalar;
pub mod shuffle;
pub mod transport;

pub use scalar::{ratio, rational_to_f64, Scalar};
pub use shuffle::{
    assemble_xi0, composition_to_word, is_admissible, parse_word, reg0, reg10, tau, tau_word,
    word_key, word_to_composition, words_of_weight, xi0_components, xi1_components, Letter,
    ShufflePoly, Word, Xi01,
};
