pub mod closed_form;
pub mod counterexamples;
pub mod error;
pub mod ode;
pub mod quadrature;
pub mod radial_sl;
pub mod roots;
pub mod shell_spectrum;
pub mod specfun;
pub mod thresholds;
pub mod trial_bounds;

pub use error::{Error, Result};
