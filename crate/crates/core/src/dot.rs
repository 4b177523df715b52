//! Graphviz DOT rendering of networks.
//!
//! Decision nodes get a double border, logical nodes are double octagons,
//! and edges cut by surgery are drawn dashed grey.

use std::fmt::Write;

use crate::bayes_net::Network;
use crate::real::Real;

#[derive(Debug, Clone, Default)]
pub struct DotStyle {
    pub decision: Option<String>,
    pub logical: Vec<String>,
    pub severed: Vec<(String, String)>,
}

/// Quotes an identifier for DOT.
pub fn quote(id: &str) -> String {
    let mut out = String::with_capacity(id.len() + 2);
    out.push('"');
    for c in id.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One `digraph`. Severed edges missing from `net` are still drawn.
pub fn render<P: Real>(name: &str, net: &Network<P>, style: &DotStyle) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=ellipse];").unwrap();
    for node in net.nodes() {
        let mut attrs = vec![format!("label={}", quote(&node.id))];
        if style.logical.contains(&node.id) {
            attrs.push("shape=doubleoctagon".into());
        }
        if style.decision.as_deref() == Some(node.id.as_str()) {
            attrs.push("peripheries=2".into());
        }
        writeln!(out, "  {} [{}];", quote(&node.id), attrs.join(", ")).unwrap();
    }
    let is_severed = |p: &str, c: &str| style.severed.iter().any(|(a, b)| a == p && b == c);
    for (parent, child) in net.edges() {
        let attrs = if is_severed(parent, child) {
            " [style=dashed, color=grey]"
        } else {
            ""
        };
        writeln!(out, "  {} -> {}{};", quote(parent), quote(child), attrs).unwrap();
    }
    for (parent, child) in &style.severed {
        let present = net.node(child).is_some_and(|n| n.parents.contains(parent));
        if !present && net.contains(parent) && net.contains(child) {
            writeln!(out, "  {} -> {} [style=dashed, color=grey];", quote(parent), quote(child)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
