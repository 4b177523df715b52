//! Shared helpers: a brute-force oracle that reads CPTs directly, seeded
//! random networks, and a small DOT grammar checker.

#![allow(dead_code)]

use std::collections::BTreeMap;

use newcomb::bayes_net::Cpt;
use newcomb::{Assignment, DecisionProblem, LogicalAnnotation, Network, NodeSpec, UtilityTable};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every full assignment of a product space, first coordinate slowest.
pub fn product_space(cards: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &k in cards {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..k).map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Product of CPT entries for one full assignment (`states` indexed like
/// `net.nodes()`), computed without going through the library's joint.
pub fn oracle_joint(net: &Network, states: &[usize]) -> f64 {
    let nodes = net.nodes();
    let pos = |id: &str| nodes.iter().position(|n| n.id == id).unwrap();
    let mut p = 1.0;
    for (i, node) in nodes.iter().enumerate() {
        let mut row = 0;
        for parent in &node.parents {
            let j = pos(parent);
            row = row * nodes[j].states.len() + states[j];
        }
        p *= node.cpt.rows()[row][states[i]];
    }
    p
}

/// Conditional distribution by summing the full joint. `None` when the
/// evidence has probability zero.
pub fn oracle_query(net: &Network, targets: &[&str], evidence: &Assignment) -> Option<BTreeMap<Vec<String>, f64>> {
    let nodes = net.nodes();
    let cards: Vec<usize> = nodes.iter().map(|n| n.states.len()).collect();
    let index = |id: &str| nodes.iter().position(|n| n.id == id).unwrap();
    let fixed: Vec<(usize, usize)> = evidence
        .iter()
        .map(|(n, s)| {
            let i = index(n);
            (i, nodes[i].states.iter().position(|x| x == s).unwrap())
        })
        .collect();
    let target_idx: Vec<usize> = targets.iter().map(|t| index(t)).collect();

    let mut table: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    for labels in product_space(&target_idx.iter().map(|&i| cards[i]).collect::<Vec<_>>()) {
        let key = labels
            .iter()
            .zip(&target_idx)
            .map(|(&s, &i)| nodes[i].states[s].clone())
            .collect();
        table.insert(key, 0.0);
    }
    let mut total = 0.0;
    let mut states = vec![0; cards.len()];
    loop {
        if fixed.iter().all(|&(i, s)| states[i] == s) {
            let p = oracle_joint(net, &states);
            total += p;
            let key: Vec<String> = target_idx.iter().map(|&i| nodes[i].states[states[i]].clone()).collect();
            *table.get_mut(&key).unwrap() += p;
        }
        // Odometer step, last node fastest.
        let mut i = cards.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            states[i] += 1;
            if states[i] < cards[i] {
                break;
            }
            states[i] = 0;
        }
        if states.iter().all(|&s| s == 0) {
            break;
        }
    }
    if total == 0.0 {
        return None;
    }
    for v in table.values_mut() {
        *v /= total;
    }
    Some(table)
}

pub fn random_row(rng: &mut ChaCha8Rng, k: usize, deterministic: f64) -> Vec<f64> {
    if rng.gen_bool(deterministic) {
        let mut row = vec![0.0; k];
        row[rng.gen_range(0..k)] = 1.0;
        return row;
    }
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut row: Vec<f64> = raw.iter().map(|x| x / total).collect();
    // Put the rounding residue on the last entry so rows sum to one exactly.
    let head: f64 = row[..k - 1].iter().sum();
    row[k - 1] = 1.0 - head;
    row
}

pub fn random_cpt(rng: &mut ChaCha8Rng, rows: usize, k: usize, deterministic: f64) -> Cpt {
    Cpt::new((0..rows).map(|_| random_row(rng, k, deterministic)).collect())
}

/// A random DAG with `n` nodes named `v0..`, up to `max_states` states and
/// three parents per node, declared in shuffled order.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, max_states: usize, deterministic: f64) -> Network {
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_states)).collect();
    let mut nodes: Vec<NodeSpec> = (0..n)
        .map(|i| {
            let mut candidates: Vec<usize> = (0..i).collect();
            candidates.shuffle(rng);
            candidates.truncate(rng.gen_range(0..=3.min(i)));
            let rows: usize = candidates.iter().map(|&p| cards[p]).product();
            NodeSpec {
                id: format!("v{i}"),
                states: (0..cards[i]).map(|s| format!("s{s}")).collect(),
                parents: candidates.iter().map(|p| format!("v{p}")).collect(),
                cpt: random_cpt(rng, rows, cards[i], deterministic),
            }
        })
        .collect();
    nodes.shuffle(rng);
    Network::new(nodes).expect("random network is valid")
}

/// Random full assignment restricted to `ids`, drawn uniformly per node.
pub fn random_evidence(rng: &mut ChaCha8Rng, net: &Network, ids: &[String]) -> Assignment {
    ids.iter()
        .map(|id| {
            let states = &net.node(id).unwrap().states;
            (id.clone(), states[rng.gen_range(0..states.len())].clone())
        })
        .collect()
}

/// Random decision problem whose only annotation is a rewire-free self
/// logical node, plus optionally an unrelated logical root.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize) -> DecisionProblem {
    let net = random_network(rng, n, 3, 0.0);
    let ids: Vec<String> = net.nodes().iter().map(|n| n.id.clone()).collect();
    let decision = ids.choose(rng).unwrap().clone();
    let mut scope: Vec<String> = ids.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    if scope.is_empty() {
        scope.push(ids.choose(rng).unwrap().clone());
    }
    let size: usize = scope.iter().map(|id| net.node(id).unwrap().states.len()).product();
    let values = (0..size).map(|_| rng.gen_range(-10.0..10.0)).collect();
    let utility = UtilityTable::new(scope, values);
    let actions = net.node(&decision).unwrap().states.clone();
    let prior = vec![1.0 / actions.len() as f64; actions.len()];
    let mut annotations = vec![LogicalAnnotation::new("self_logic", actions, prior).self_decision()];
    if rng.gen_bool(0.5) {
        annotations.push(LogicalAnnotation::new("other_logic", ["a", "b"], vec![0.3, 0.7]));
    }
    DecisionProblem::new(net, decision, utility)
        .expect("random problem is valid")
        .with_annotations(annotations)
}

/// x2 <- x1; x4 <- x2; x5 <- x3, x2, x1; x1 and x3 roots. Binary states
/// "0"/"1" with random tables.
pub fn five_node_dag(rng: &mut ChaCha8Rng) -> Network {
    let mut node = |id: &str, parents: &[&str]| {
        let rows = 1 << parents.len();
        NodeSpec {
            id: id.into(),
            states: vec!["0".into(), "1".into()],
            parents: parents.iter().map(|p| p.to_string()).collect(),
            cpt: random_cpt(rng, rows, 2, 0.0),
        }
    };
    let nodes = vec![
        node("x1", &[]),
        node("x2", &["x1"]),
        node("x3", &[]),
        node("x4", &["x2"]),
        node("x5", &["x3", "x2", "x1"]),
    ];
    Network::new(nodes).unwrap()
}

/// P(target = "1" | given).
pub fn conditional(net: &Network, target: &str, given: &[(&str, &str)]) -> f64 {
    let evidence: Assignment = given.iter().map(|&(n, s)| (n, s)).collect();
    net.query(&[target], &evidence).unwrap().get(&["1"]).unwrap()
}

/// Expected utilities of cooperating and defecting against the mixture
/// opponent, written out term by term. The opponent's conditionals are
/// P(C_o | y, n) = p [y = C] + (1 - p) [n = C].
pub fn mixture_expected_utilities(params: &newcomb::scenarios::TdtPdParams) -> (f64, f64) {
    let [u1, u2, u3, u4] = params.u;
    let p = params.p_opponent_uses_tdt;
    let [c_n, d_n] = params.not_tdt_prior;
    let co = |you_c: bool, other_c: bool| p * f64::from(u8::from(you_c)) + (1.0 - p) * f64::from(u8::from(other_c));
    let e_c = (co(true, true) * c_n + co(true, false) * d_n) * u3
        + ((1.0 - co(true, true)) * c_n + (1.0 - co(true, false)) * d_n) * u1;
    let e_d = (co(false, true) * c_n + co(false, false) * d_n) * u4
        + ((1.0 - co(false, true)) * c_n + (1.0 - co(false, false)) * d_n) * u2;
    (e_c, e_d)
}

pub fn random_mixture(r: &mut ChaCha8Rng) -> newcomb::scenarios::TdtPdParams {
    let mut u = [0.0; 4];
    u[0] = r.gen_range(-5.0..5.0);
    for i in 1..4 {
        u[i] = u[i - 1] + r.gen_range(0.01..3.0);
    }
    let c_n = r.gen_range(0.0..=1.0);
    newcomb::scenarios::TdtPdParams {
        u,
        p_opponent_uses_tdt: r.gen_range(0.0..=1.0),
        not_tdt_prior: [c_n, 1.0 - c_n],
        ..Default::default()
    }
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}

/// Checks `text` against the DOT subset the renderer emits: one
/// `digraph ID { ... }` whose statements are node, edge, default-attribute
/// or `ID = ID` statements, each terminated by `;`.
pub fn validate_dot(text: &str) -> Result<(), String> {
    let tokens = dot_tokens(text)?;
    let mut p = DotParser { tokens, pos: 0 };
    p.keyword("digraph")?;
    if matches!(p.peek(), Some(Tok::Id(_))) {
        p.pos += 1;
    }
    p.expect(Tok::LBrace)?;
    while p.peek() != Some(&Tok::RBrace) {
        p.statement()?;
    }
    p.expect(Tok::RBrace)?;
    if p.pos != p.tokens.len() {
        return Err("trailing tokens after graph".into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Arrow,
}

fn dot_tokens(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '{' => (out.push(Tok::LBrace), i += 1).1,
            '}' => (out.push(Tok::RBrace), i += 1).1,
            '[' => (out.push(Tok::LBracket), i += 1).1,
            ']' => (out.push(Tok::RBracket), i += 1).1,
            '=' => (out.push(Tok::Eq), i += 1).1,
            ';' => (out.push(Tok::Semi), i += 1).1,
            ',' => (out.push(Tok::Comma), i += 1).1,
            '-' if chars.get(i + 1) == Some(&'>') => (out.push(Tok::Arrow), i += 2).1,
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') => {
                            let next = chars.get(i + 1).ok_or("dangling escape")?;
                            s.push(*next);
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Id(s));
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                if i == start {
                    return Err(format!("unexpected character {c:?}"));
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct DotParser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl DotParser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), String> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            other => Err(format!("expected {tok:?}, found {other:?} at token {}", self.pos)),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek().cloned() {
            Some(Tok::Id(s)) => {
                self.pos += 1;
                Ok(s)
            }
            other => Err(format!("expected identifier, found {other:?} at token {}", self.pos)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), String> {
        let id = self.id()?;
        if id == kw {
            Ok(())
        } else {
            Err(format!("expected `{kw}`, found `{id}`"))
        }
    }

    fn attr_list(&mut self) -> Result<(), String> {
        self.expect(Tok::LBracket)?;
        while self.peek() != Some(&Tok::RBracket) {
            self.id()?;
            self.expect(Tok::Eq)?;
            self.id()?;
            if self.peek() == Some(&Tok::Comma) || self.peek() == Some(&Tok::Semi) {
                self.pos += 1;
            }
        }
        self.expect(Tok::RBracket)
    }

    fn statement(&mut self) -> Result<(), String> {
        let first = self.id()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                self.id()?;
            }
            Some(Tok::Arrow) => {
                while self.peek() == Some(&Tok::Arrow) {
                    self.pos += 1;
                    self.id()?;
                }
                if self.peek() == Some(&Tok::LBracket) {
                    self.attr_list()?;
                }
            }
            Some(Tok::LBracket) => self.attr_list()?,
            _ if matches!(first.as_str(), "node" | "edge" | "graph") => {
                return Err(format!("`{first}` needs an attribute list"));
            }
            _ => {}
        }
        self.expect(Tok::Semi)
    }
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built binary with color disabled.
pub fn run_cli(args: &[&str]) -> Run {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_newcomb"))
        .args(args)
        .env("NEWCOMB_NO_COLOR", "1")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Golden file name and the command line that produces it.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("decide_toxoplasmosis_edt.json", &["decide", "--builtin", "toxoplasmosis", "--theory", "edt", "--output", "json"]),
    ("decide_toxoplasmosis_cdt.json", &["decide", "--builtin", "toxoplasmosis", "--theory", "cdt", "--output", "json"]),
    ("decide_toxoplasmosis_tdt.json", &["decide", "--builtin", "toxoplasmosis", "--theory", "tdt", "--output", "json"]),
    ("decide_pd_edt.json", &["decide", "--builtin", "pd", "--theory", "edt", "--output", "json"]),
    ("decide_pd_cdt.json", &["decide", "--builtin", "pd", "--u", "1,2,3,4", "--theory", "cdt", "--output", "json"]),
    ("decide_pd_tdt.json", &["decide", "--builtin", "pd", "--theory", "tdt", "--output", "json"]),
    ("decide_tdt_pd_edt.json", &["decide", "--builtin", "tdt-pd", "--theory", "edt", "--output", "json"]),
    ("decide_tdt_pd_cdt.json", &["decide", "--builtin", "tdt-pd", "--theory", "cdt", "--output", "json"]),
    (
        "decide_tdt_pd_tdt.json",
        &["decide", "--builtin", "tdt-pd", "--u", "1,2,3,4", "--p-tdt", "1.0", "--theory", "tdt", "--output", "json"],
    ),
    ("decide_toxoplasmosis_edt.txt", &["decide", "--builtin", "toxoplasmosis", "--theory", "edt"]),
    ("decide_tdt_pd_tdt.txt", &["decide", "--builtin", "tdt-pd", "--theory", "tdt"]),
    (
        "query_calculators_naive.json",
        &["query", "--builtin", "calculators", "--variant", "naive", "--target", "maya_out", "--evidence", "china_out=odd", "--output", "json"],
    ),
    (
        "query_calculators_logical.json",
        &[
            "query", "--builtin", "calculators", "--variant", "logical", "--target", "maya_out", "--evidence",
            "china_out=odd,maya_state=mult,china_state=mult", "--output", "json",
        ],
    ),
    ("query_toxoplasmosis.txt", &["query", "--builtin", "toxoplasmosis", "--target", "N", "--evidence", "C=C"]),
    ("explain_toxoplasmosis_edt.txt", &["explain", "--builtin", "toxoplasmosis", "--theory", "edt"]),
    ("explain_toxoplasmosis_cdt.txt", &["explain", "--builtin", "toxoplasmosis", "--theory", "cdt"]),
    ("explain_calculators_tdt.txt", &["explain", "--builtin", "calculators", "--theory", "tdt"]),
    ("explain_tdt_pd_tdt.json", &["explain", "--builtin", "tdt-pd", "--theory", "tdt", "--output", "json"]),
    ("scenario_toxoplasmosis.json", &["scenario", "--builtin", "toxoplasmosis"]),
    ("scenario_tdt_pd.json", &["scenario", "--builtin", "tdt-pd"]),
];

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares `actual` with the stored golden file; with `NEWCOMB_BLESS` set
/// the file is rewritten instead.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("NEWCOMB_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs from golden output:\n--- expected\n{expected}--- actual\n{actual}"))
    }
}
