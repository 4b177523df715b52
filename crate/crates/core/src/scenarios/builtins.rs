//! The four worked problems: toxoplasmosis, the prisoner's dilemma, the two
//! calculators, and the prisoner's dilemma against a possible TDT opponent.

use super::{Scenario, ScenarioError};
use crate::bayes_net::{Cpt, Network, NodeSpec};
use crate::decision::{DecisionProblem, UtilityTable};
use crate::real::{in_unit_interval, Real};
use crate::tdt::{self, LogicalAnnotation};

fn probability<P: Real>(name: &str, p: P) -> Result<P, ScenarioError> {
    if in_unit_interval(p) {
        Ok(p)
    } else {
        Err(ScenarioError::InvalidProbability {
            name: name.to_string(),
            value: p.to_f64_lossy(),
        })
    }
}

fn finite<P: Real>(name: &str, v: P) -> Result<P, ScenarioError> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(ScenarioError::NonFiniteParameter {
            name: name.to_string(),
            value: v.to_f64_lossy(),
        })
    }
}

fn network<P: Real>(nodes: Vec<NodeSpec<P>>) -> Result<Network<P>, ScenarioError> {
    Network::new(nodes).map_err(|source| ScenarioError::Network {
        context: "built-in".into(),
        source,
    })
}

fn problem<P: Real>(net: Network<P>, decision: &str, utility: UtilityTable<P>) -> Result<DecisionProblem<P>, ScenarioError> {
    DecisionProblem::new(net, decision, utility).map_err(|source| ScenarioError::Decision {
        context: "built-in".into(),
        source,
    })
}

fn binary<P: Real>(p_first: P) -> Vec<P> {
    vec![p_first, P::one() - p_first]
}

/// Self logical node with no rewires: TDT then evaluates exactly like CDT.
fn plain_self_annotation<P: Real>(states: &[&str]) -> LogicalAnnotation<P> {
    let n = P::from_usize(states.len()).expect("small state count");
    LogicalAnnotation::new("tdt", states.iter().copied(), vec![P::one() / n; states.len()]).self_decision()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToxoplasmosisParams<P = f64> {
    pub p_t: P,
    pub p_c_given_t: P,
    pub p_c_given_not_t: P,
    pub p_n_given_t: P,
    pub p_n_given_not_t: P,
    /// Magnitude of the harm from symptoms.
    pub b: P,
    /// Small utility of adoring cats.
    pub s: P,
}

impl Default for ToxoplasmosisParams<f64> {
    fn default() -> Self {
        Self {
            p_t: 0.3,
            p_c_given_t: 0.6,
            p_c_given_not_t: 0.2,
            p_n_given_t: 0.4,
            p_n_given_not_t: 0.05,
            b: 100.0,
            s: 1.0,
        }
    }
}

/// `T -> C`, `T -> N`; decision node `C`; utility over `(N, C)`.
///
/// Node ids are `T`, `C`, `N` with states `T/not_T`, `C/not_C`, `N/not_N`.
/// Actions are declared `C` first, so an exact EU tie picks `C`.
/// A self logical node `tdt` without rewires is attached, which makes TDT
/// agree with CDT on this problem.
pub fn toxoplasmosis<P: Real>(params: &ToxoplasmosisParams<P>) -> Result<DecisionProblem<P>, ScenarioError> {
    let p_t = probability("p_t", params.p_t)?;
    let c_t = probability("p_c_given_t", params.p_c_given_t)?;
    let c_nt = probability("p_c_given_not_t", params.p_c_given_not_t)?;
    let n_t = probability("p_n_given_t", params.p_n_given_t)?;
    let n_nt = probability("p_n_given_not_t", params.p_n_given_not_t)?;
    let b = finite("b", params.b)?;
    let s = finite("s", params.s)?;

    let net = network(vec![
        NodeSpec::root("T", ["T", "not_T"], binary(p_t)),
        NodeSpec::new("C", ["C", "not_C"], ["T"], vec![binary(c_t), binary(c_nt)]),
        NodeSpec::new("N", ["N", "not_N"], ["T"], vec![binary(n_t), binary(n_nt)]),
    ])?;
    let utility = UtilityTable::from_fn(&net, &["N", "C"], |l| {
        let harm = if l[0] == "N" { -b } else { P::zero() };
        let joy = if l[1] == "C" { s } else { P::zero() };
        harm + joy
    })
    .expect("scope nodes exist");
    Ok(problem(net, "C", utility)?.with_annotations(vec![plain_self_annotation(&["C", "not_C"])]))
}

/// Distribution of the `common_causes` node and how each of its states
/// moves the two players. A single-state node means no common cause.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonCause<P = f64> {
    pub prior: Vec<P>,
    /// `P(you cooperate | cause)` per cause state.
    pub p_you_cooperate: Vec<P>,
    /// `P(opponent cooperates | cause)` per cause state.
    pub p_opponent_cooperates: Vec<P>,
}

impl<P: Real> CommonCause<P> {
    /// No common cause: independent players with the given cooperation rates.
    pub fn none(p_you_cooperate: P, p_opponent_cooperates: P) -> Self {
        Self {
            prior: vec![P::one()],
            p_you_cooperate: vec![p_you_cooperate],
            p_opponent_cooperates: vec![p_opponent_cooperates],
        }
    }

    /// A fair coin that both players copy.
    pub fn perfectly_correlated() -> Self {
        let half = P::one() / (P::one() + P::one());
        Self {
            prior: vec![half, half],
            p_you_cooperate: vec![P::one(), P::zero()],
            p_opponent_cooperates: vec![P::one(), P::zero()],
        }
    }

    fn nodes(&self) -> Result<Vec<NodeSpec<P>>, ScenarioError> {
        let k = self.prior.len();
        if k == 0 || self.p_you_cooperate.len() != k || self.p_opponent_cooperates.len() != k {
            return Err(ScenarioError::schema(
                "common_cause",
                "prior and both cooperation vectors need one entry per cause state",
            ));
        }
        let rows = |name: &str, v: &[P]| -> Result<Vec<Vec<P>>, ScenarioError> {
            v.iter().map(|&p| probability(name, p).map(binary)).collect()
        };
        let states: Vec<String> = (0..k).map(|i| format!("cause{i}")).collect();
        Ok(vec![
            NodeSpec {
                id: "common_causes".into(),
                states,
                parents: Vec::new(),
                cpt: Cpt::prior(self.prior.clone()),
            },
            NodeSpec::new(
                "your_decision",
                ["C", "D"],
                ["common_causes"],
                rows("p_you_cooperate", &self.p_you_cooperate)?,
            ),
            NodeSpec::new(
                "opponent_decision",
                ["C", "D"],
                ["common_causes"],
                rows("p_opponent_cooperates", &self.p_opponent_cooperates)?,
            ),
        ])
    }
}

impl Default for CommonCause<f64> {
    fn default() -> Self {
        Self::none(0.5, 0.5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdParams<P = f64> {
    /// `[u1, u2, u3, u4]`, required to be strictly increasing.
    pub u: [P; 4],
    pub common_cause: CommonCause<P>,
}

impl Default for PdParams<f64> {
    fn default() -> Self {
        Self {
            u: [1.0, 2.0, 3.0, 4.0],
            common_cause: CommonCause::default(),
        }
    }
}

fn check_ordering<P: Real>(u: &[P; 4]) -> Result<(), ScenarioError> {
    for (i, &v) in u.iter().enumerate() {
        finite(&format!("u{}", i + 1), v)?;
    }
    if u[3] > u[2] && u[2] > u[1] && u[1] > u[0] {
        Ok(())
    } else {
        Err(ScenarioError::OrderingViolated {
            u: u.map(|v| v.to_f64_lossy()),
        })
    }
}

fn payoff<P: Real>(net: &Network<P>, u: &[P; 4]) -> UtilityTable<P> {
    UtilityTable::from_fn(net, &["your_decision", "opponent_decision"], |l| match (l[0], l[1]) {
        ("C", "C") => u[2],
        ("C", _) => u[0],
        (_, "C") => u[3],
        _ => u[1],
    })
    .expect("scope nodes exist")
}

/// `common_causes -> your_decision`, `common_causes -> opponent_decision`.
/// Both decisions have states `C`, `D`; the utility scope is
/// `(your_decision, opponent_decision)`. A self logical node `tdt` without
/// rewires is attached, so TDT here treats the opponent as unrelated to its
/// own algorithm.
pub fn prisoners_dilemma<P: Real>(params: &PdParams<P>) -> Result<DecisionProblem<P>, ScenarioError> {
    check_ordering(&params.u)?;
    let net = network(params.common_cause.nodes()?)?;
    let utility = payoff(&net, &params.u);
    Ok(problem(net, "your_decision", utility)?.with_annotations(vec![plain_self_annotation(&["C", "D"])]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TdtPdParams<P = f64> {
    pub u: [P; 4],
    /// Probability the opponent runs TDT rather than some other algorithm.
    pub p_opponent_uses_tdt: P,
    /// Prior over the other algorithm's output, `[P(C_n), P(D_n)]`.
    pub not_tdt_prior: [P; 2],
    pub common_cause: CommonCause<P>,
}

impl Default for TdtPdParams<f64> {
    fn default() -> Self {
        Self {
            u: [1.0, 2.0, 3.0, 4.0],
            p_opponent_uses_tdt: 1.0,
            not_tdt_prior: [0.5, 0.5],
            common_cause: CommonCause::default(),
        }
    }
}

/// The prisoner's dilemma network plus two logical nodes: `tdt` (the
/// agent's own algorithm, marked self) and `not_tdt` (whatever else the
/// opponent might run), both with states `C`, `D`. The opponent is rewired
/// to the mixture
/// `P(C_o | cause, tdt, not_tdt) = p * [tdt = C] + (1 - p) * [not_tdt = C]`,
/// independent of the common cause. EDT and CDT ignore the annotations.
pub fn tdt_prisoners_dilemma<P: Real>(params: &TdtPdParams<P>) -> Result<DecisionProblem<P>, ScenarioError> {
    check_ordering(&params.u)?;
    let p = probability("p_opponent_uses_tdt", params.p_opponent_uses_tdt)?;
    let prior = params.not_tdt_prior;
    probability("not_tdt_prior[0]", prior[0])?;
    probability("not_tdt_prior[1]", prior[1])?;

    let net = network(params.common_cause.nodes()?)?;
    let utility = payoff(&net, &params.u);
    let causes = params.common_cause.prior.len();

    let indicator = |cooperates: bool| if cooperates { P::one() } else { P::zero() };
    let mut rows = Vec::with_capacity(causes * 4);
    for _ in 0..causes {
        for tdt_cooperates in [true, false] {
            for other_cooperates in [true, false] {
                let c = p * indicator(tdt_cooperates) + (P::one() - p) * indicator(other_cooperates);
                rows.push(vec![c, P::one() - c]);
            }
        }
    }
    let annotations = vec![
        LogicalAnnotation::new("tdt", ["C", "D"], binary(P::one() / (P::one() + P::one())))
            .self_decision()
            .rewire(
                "opponent_decision",
                ["common_causes", "tdt", "not_tdt"],
                rows,
            ),
        LogicalAnnotation::new("not_tdt", ["C", "D"], prior.to_vec()),
    ];
    let problem = problem(net, "your_decision", utility)?.with_annotations(annotations);
    tdt::apply_tdt(&problem).map_err(|source| ScenarioError::Tdt {
        context: "built-in".into(),
        source,
    })?;
    Ok(problem)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalculatorVariant {
    /// Two independent output nodes.
    Naive,
    /// Outputs depend on calculator states, which share a correlation node.
    Physical,
    /// Physical, plus a logical node for the true product digit.
    Logical,
}

impl std::str::FromStr for CalculatorVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Self::Naive),
            "physical" => Ok(Self::Physical),
            "logical" => Ok(Self::Logical),
            other => Err(format!("unknown calculator variant `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalculatorParams<P = f64> {
    pub correlation_prior: Vec<P>,
    /// `P(maya_state = mult | correlation)` per correlation state.
    pub p_maya_mult: Vec<P>,
    /// `P(china_state = mult | correlation)` per correlation state.
    pub p_china_mult: Vec<P>,
    /// Subjective `P(even)` of a digit nobody has computed.
    pub p_even: P,
    /// `P(even)` shown by a faulty calculator.
    pub p_even_if_faulty: P,
    /// Prior of the logical product digit, `[P(even), P(odd)]`.
    pub logical_prior: [P; 2],
}

impl Default for CalculatorParams<f64> {
    fn default() -> Self {
        Self {
            correlation_prior: vec![0.5, 0.5],
            p_maya_mult: vec![0.9, 0.6],
            p_china_mult: vec![0.9, 0.6],
            p_even: 0.5,
            p_even_if_faulty: 0.5,
            logical_prior: [0.5, 0.5],
        }
    }
}

/// The calculator network for `variant`, logical nodes materialized.
///
/// Node ids: `maya_out`, `china_out` (states `even`, `odd`); for the
/// physical and logical variants also `correlation` (states `c0..`),
/// `maya_state`, `china_state` (states `mult`, `faulty`); for the logical
/// variant also `product_digit`.
pub fn calculators<P: Real>(variant: CalculatorVariant, params: &CalculatorParams<P>) -> Result<Network<P>, ScenarioError> {
    calculator_scenario(variant, params)?
        .world_network()
        .map_err(|source| ScenarioError::Tdt {
            context: "built-in".into(),
            source,
        })
}

/// Like [`calculators`] but with the logical node kept as an annotation on
/// the physical network, so the TDT rewrite can be shown as a stage.
pub fn calculator_scenario<P: Real>(
    variant: CalculatorVariant,
    params: &CalculatorParams<P>,
) -> Result<Scenario<P>, ScenarioError> {
    let even = probability("p_even", params.p_even)?;
    if variant == CalculatorVariant::Naive {
        let net = network(vec![
            NodeSpec::root("maya_out", ["even", "odd"], binary(even)),
            NodeSpec::root("china_out", ["even", "odd"], binary(even)),
        ])?;
        return Ok(Scenario::from_network("calculators-naive", net));
    }

    let k = params.correlation_prior.len();
    if k == 0 || params.p_maya_mult.len() != k || params.p_china_mult.len() != k {
        return Err(ScenarioError::schema(
            "correlation",
            "prior and both state vectors need one entry per correlation state",
        ));
    }
    let faulty_even = probability("p_even_if_faulty", params.p_even_if_faulty)?;
    let state_rows = |name: &str, v: &[P]| -> Result<Vec<Vec<P>>, ScenarioError> {
        v.iter().map(|&p| probability(name, p).map(binary)).collect()
    };
    let net = network(vec![
        NodeSpec {
            id: "correlation".into(),
            states: (0..k).map(|i| format!("c{i}")).collect(),
            parents: Vec::new(),
            cpt: Cpt::prior(params.correlation_prior.clone()),
        },
        NodeSpec::new(
            "maya_state",
            ["mult", "faulty"],
            ["correlation"],
            state_rows("p_maya_mult", &params.p_maya_mult)?,
        ),
        NodeSpec::new(
            "china_state",
            ["mult", "faulty"],
            ["correlation"],
            state_rows("p_china_mult", &params.p_china_mult)?,
        ),
        NodeSpec::new("maya_out", ["even", "odd"], ["maya_state"], vec![binary(even), binary(faulty_even)]),
        NodeSpec::new("china_out", ["even", "odd"], ["china_state"], vec![binary(even), binary(faulty_even)]),
    ])?;

    if variant == CalculatorVariant::Physical {
        return Ok(Scenario::from_network("calculators-physical", net));
    }

    probability("logical_prior[0]", params.logical_prior[0])?;
    probability("logical_prior[1]", params.logical_prior[1])?;
    // rows over (state, product_digit): a working calculator shows the digit
    let copy = vec![
        vec![P::one(), P::zero()],
        vec![P::zero(), P::one()],
        binary(faulty_even),
        binary(faulty_even),
    ];
    let digit = LogicalAnnotation::new("product_digit", ["even", "odd"], params.logical_prior.to_vec())
        .rewire("maya_out", ["maya_state", "product_digit"], copy.clone())
        .rewire("china_out", ["china_state", "product_digit"], copy);
    let mut scenario = Scenario::from_network("calculators-logical", net);
    scenario.logical = vec![digit];
    scenario.world_network().map_err(|source| ScenarioError::Tdt {
        context: "built-in".into(),
        source,
    })?;
    Ok(scenario)
}
