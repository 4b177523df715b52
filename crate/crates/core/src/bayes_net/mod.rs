//! Causal Bayesian networks: validation, exact inference, d-separation and
//! intervention surgery.

mod assignment;
mod cpt;
mod distribution;
mod dsep;
mod error;
mod inference;
mod network;
mod surgery;

pub use assignment::{Assignment, ParseAssignmentError};
pub use cpt::Cpt;
pub(crate) use cpt::mixed_radix_digits;
pub use distribution::Distribution;
pub use error::NetworkError;
pub use inference::Inference;
pub use network::{Network, NodeSpec};

