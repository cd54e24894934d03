//! Structures on the moduli of five marked points on the line: the
//! five-generator quotient algebra with its PBW-style normal form and
//! pentagon check, and the reduced bar complex of logarithmic one-forms.

pub(crate) mod linalg;

pub mod alg;
pub mod bar;

pub use alg::{
    dim_degree, omega_to_basis, pbw_monomials, pentagon_check, pentagon_orbit,
    sigma_star_inv, substitute_series, tau_star, Degree1Element, M05Series,
    PBWMonomial, GEN_NAMES,
};
pub use bar::{
    cic_kernel, cic_kernel_with, default_wedge_table, hpr_phi, iota_12, iota_21,
    verify_cic, wedge_coordinates, BarElement, BarTensor, M05Error, OneForm,
    WedgeTable, DEFAULT_WEDGE_SEED,
};
