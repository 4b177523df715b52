use std::fmt::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use super::RenderOptions;
use crate::bayes_net::Assignment;
use crate::decision::{Surgery, TransformSummary};
use crate::{DecisionReport, Distribution, Network, Scenario};

/// `%g`-style rendering with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_significant(x, 6)
}

fn summary_json(summary: &TransformSummary) -> Value {
    json!({
        "surgery": match summary.surgery {
            Surgery::Condition => "condition",
            Surgery::Intervene => "intervene",
        },
        "decision_node": summary.decision_node,
        "severed_edges": summary.severed_edges.iter().map(|(p, c)| json!([p, c])).collect::<Vec<_>>(),
        "inserted_nodes": summary.inserted_nodes,
        "rewired_nodes": summary.rewired_nodes,
    })
}

fn summary_line(summary: &TransformSummary) -> String {
    if summary.is_identity() {
        return match summary.surgery {
            Surgery::Condition => "none (condition on the action)".into(),
            Surgery::Intervene => format!("intervene on {}", summary.decision_node),
        };
    }
    let mut parts = Vec::new();
    if !summary.inserted_nodes.is_empty() {
        parts.push(format!("insert {}", summary.inserted_nodes.join(", ")));
    }
    if !summary.rewired_nodes.is_empty() {
        parts.push(format!("rewire {}", summary.rewired_nodes.join(", ")));
    }
    if !summary.severed_edges.is_empty() {
        let edges: Vec<String> = summary.severed_edges.iter().map(|(p, c)| format!("{p} -> {c}")).collect();
        parts.push(format!("sever {}", edges.join(", ")));
    }
    if summary.surgery == Surgery::Intervene {
        parts.push(format!("intervene on {}", summary.decision_node));
    }
    parts.join("; ")
}

pub(super) fn decision_human(scenario: &Scenario, report: &DecisionReport, options: RenderOptions) -> String {
    let mut out = String::new();
    writeln!(out, "scenario:  {}", scenario.name).unwrap();
    writeln!(out, "theory:    {}", report.theory).unwrap();
    writeln!(out, "transform: {}", summary_line(&report.transformed)).unwrap();
    writeln!(out).unwrap();
    let width = report.eus.iter().map(|(a, _)| a.len()).max().unwrap_or(0).max("action".len());
    writeln!(out, "{:<width$}  expected utility", "action").unwrap();
    for (action, eu) in &report.eus {
        let marker = if *action == report.chosen { "  <" } else { "" };
        writeln!(out, "{:<width$}  {}{}", action, num(*eu), marker).unwrap();
    }
    writeln!(out).unwrap();
    if options.color {
        writeln!(out, "chosen:    \x1b[1;32m{}\x1b[0m", report.chosen).unwrap();
    } else {
        writeln!(out, "chosen:    {}", report.chosen).unwrap();
    }
    out
}

pub(super) fn decision_json(report: &DecisionReport) -> String {
    let eus: Map<String, Value> = report.eus.iter().map(|(a, v)| (a.clone(), json!(v))).collect();
    let value = json!({
        "theory": report.theory.as_str(),
        "chosen": report.chosen,
        "eus": eus,
        "transform_summary": summary_json(&report.transformed),
    });
    pretty(&value)
}

pub(super) fn distribution_human(dist: &Distribution, evidence: &Assignment) -> String {
    let mut out = String::new();
    let given = if evidence.is_empty() {
        String::new()
    } else {
        format!(" | {evidence}")
    };
    writeln!(out, "P({}{})", dist.targets().join(", "), given).unwrap();
    let rows: Vec<(String, f64)> = dist.iter().map(|(l, p)| (l.join(", "), p)).collect();
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    for (labels, p) in rows {
        writeln!(out, "  {labels:<width$}  {}", num(p)).unwrap();
    }
    out
}

pub(super) fn distribution_json(dist: &Distribution, evidence: &Assignment) -> String {
    let table: Map<String, Value> = dist.iter().map(|(l, p)| (l.join("|"), json!(p))).collect();
    let ev: Map<String, Value> = evidence.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    pretty(&json!({
        "targets": dist.targets(),
        "evidence": ev,
        "distribution": table,
    }))
}

fn network_lines(out: &mut String, net: &Network, summary: Option<&TransformSummary>) {
    let width = net.nodes().iter().map(|n| n.id.len()).max().unwrap_or(0);
    for node in net.nodes() {
        let clamped = summary.is_some_and(|s| s.decision_node == node.id && s.surgery == Surgery::Intervene);
        let (mark, note) = match summary {
            Some(s) if s.inserted_nodes.contains(&node.id) => ("+", " (logical)"),
            Some(s) if s.rewired_nodes.contains(&node.id) => ("~", " (rewired)"),
            _ if clamped => ("*", " (clamped to each action)"),
            _ => (" ", ""),
        };
        let parents = if node.parents.is_empty() || clamped {
            "-".to_string()
        } else {
            node.parents.join(", ")
        };
        writeln!(
            out,
            " {mark} {:<width$}  [{}]  parents: {parents}{note}",
            node.id,
            node.states.join(", ")
        )
        .unwrap();
        if !note.is_empty() && !clamped {
            for row in node.cpt.rows() {
                let cells: Vec<String> = row.iter().map(|&p| num(p)).collect();
                writeln!(out, "   {:<width$}    ({})", "", cells.join(", ")).unwrap();
            }
        }
    }
}

pub(super) fn explain_human(scenario: &Scenario, summary: &TransformSummary, dot_files: &[PathBuf]) -> String {
    let mut out = String::new();
    writeln!(out, "scenario:  {}", scenario.name).unwrap();
    writeln!(out, "theory:    {}", summary.theory).unwrap();
    writeln!(out, "transform: {}", summary_line(summary)).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "original network").unwrap();
    network_lines(&mut out, &scenario.network, None);
    writeln!(out).unwrap();
    writeln!(out, "transformed network").unwrap();
    network_lines(&mut out, &summary.network, Some(summary));
    for (p, c) in &summary.severed_edges {
        writeln!(out, " x {p} -> {c}  severed").unwrap();
    }
    for path in dot_files {
        writeln!(out, "wrote {}", path.display()).unwrap();
    }
    out
}

fn network_json(net: &Network) -> Value {
    Value::Array(
        net.nodes()
            .iter()
            .map(|n| {
                json!({
                    "id": n.id,
                    "states": n.states,
                    "parents": n.parents,
                    "cpt": n.cpt.rows(),
                })
            })
            .collect(),
    )
}

pub(super) fn explain_json(scenario: &Scenario, summary: &TransformSummary, dot_files: &[PathBuf]) -> String {
    pretty(&json!({
        "theory": summary.theory.as_str(),
        "original": network_json(&scenario.network),
        "transformed": network_json(&summary.network),
        "transform_summary": summary_json(summary),
        "dot_files": dot_files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    }))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}
