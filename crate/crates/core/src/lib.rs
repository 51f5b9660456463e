//! Certified finite approximations of the Lagrange and Markov spectra of
//! continued fractions with partial quotients in `1..=K`.

pub mod cli;
pub mod continued_fractions;
pub mod cylinder_sets;
pub mod error;
pub mod exact_numbers;
pub mod graph_builder;
pub mod oracle;
pub mod spectra;

pub use error::{Error, Result};
