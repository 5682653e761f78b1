//! Special functions at arbitrary precision.

pub mod bernoulli;
pub mod digamma;
pub mod dilog;
pub mod gamma;
pub mod zeta;

pub use bernoulli::{bernoulli_number, bernoulli_polynomial};
pub use digamma::{digamma, psi_remainder, AsymptoticTail};
pub use dilog::dilog;
pub use gamma::{gamma, log_gamma};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_with_derivative, riemann_zeta, stieltjes_gamma1, zeta_derivative};
