//! Exact symbolic engine for the expansion terms.
//!
//! Every object (momenta, inverse map, generator orders, their adjoints) is
//! a [`TermPolynomial`]: a canonical map from clustered sign patterns to
//! integer coefficients. Nothing here touches floating point.

mod count;
mod generate;
mod render;
mod term;
mod vankampen;

pub use count::{count_terms, CountMethod};
pub use generate::{
    diagram_generator_terms, generator_terms, inverse_map_terms, inverse_map_terms_by_compositions,
    momentum_derivative_terms, momentum_terms, MAX_SYMBOLIC_ORDER,
};
pub use render::{parse_polynomial, parse_term, render_polynomial, render_term, RenderFormat};
pub use term::{ClusteredTerm, Clustering, Kind, Sign, SignPattern, TermKey, TermPolynomial};
pub use vankampen::{vankampen_terms, VKTerm, MAX_VANKAMPEN_ORDER};
