//! Evidential, causal and timeless decision algorithms over causal Bayesian
//! networks.
//!
//! All three algorithms share one expected-utility argmax and differ only in
//! the network they query: EDT conditions on the action, CDT intervenes on
//! the decision node, and TDT first rewires the network around logical nodes
//! and then intervenes on the agent's own logical node.
//!
//! The core types are generic over the scalar type ([`Real`]); the aliases
//! below fix it to `f64`, which is what the scenario format and the CLI use.
//!
//! ```
//! use newcomb::decision::{decide, Theory};
//! use newcomb::scenarios::{prisoners_dilemma, PdParams};
//!
//! let pd = prisoners_dilemma(&PdParams::default()).unwrap();
//! assert_eq!(decide(&pd, Theory::Cdt).unwrap().chosen, "D");
//! ```

pub mod bayes_net;
pub mod cli;
pub mod decision;
pub mod dot;
mod real;
pub mod scenarios;
pub mod tdt;

pub use bayes_net::{Assignment, Inference, NetworkError};
pub use decision::{decide, expected_utility, DecisionError, Theory};
pub use real::Real;
pub use scenarios::ScenarioError;
pub use tdt::TdtError;

/// Exact rational scalar.
pub type Rational = num_rational::Ratio<i64>;

pub type Cpt = bayes_net::Cpt<f64>;
pub type NodeSpec = bayes_net::NodeSpec<f64>;
pub type Network = bayes_net::Network<f64>;
pub type Distribution = bayes_net::Distribution<f64>;
pub type UtilityTable = decision::UtilityTable<f64>;
pub type DecisionProblem = decision::DecisionProblem<f64>;
pub type DecisionReport = decision::DecisionReport<f64>;
pub type TransformSummary = decision::TransformSummary<f64>;
pub type LogicalAnnotation = tdt::LogicalAnnotation<f64>;
pub type Rewire = tdt::Rewire<f64>;
pub type TransformedProblem = tdt::TransformedProblem<f64>;
pub type Scenario = scenarios::Scenario<f64>;

pub type Network32 = bayes_net::Network<f32>;
pub type DecisionProblem32 = decision::DecisionProblem<f32>;
pub type ExactNetwork = bayes_net::Network<Rational>;
pub type ExactDecisionProblem = decision::DecisionProblem<Rational>;
