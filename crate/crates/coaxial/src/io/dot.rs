//! Graphviz output for decorated graphs.

use std::fmt::Write;

use crate::smoothing::DecoratedGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Nodes are labelled `name [alpha]` (just `[alpha]` for an empty name),
/// edges `(beta1,-beta2)` and loops `(beta)`.
pub fn graph_dot(title: &str, g: &DecoratedGraph, names: &[Option<String>]) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(title)).unwrap();
    for (i, v) in g.vertices.iter().enumerate() {
        let label = match names.get(i).and_then(Option::as_deref) {
            Some(n) if !n.is_empty() => format!("{n} [{}]", v.alpha),
            _ => format!("[{}]", v.alpha),
        };
        writeln!(s, "  v{i} [label={}];", quote(&label)).unwrap();
    }
    for e in &g.edges {
        writeln!(s, "  v{} -> v{} [label={}];", e.from, e.to, quote(&format!("({},-{})", e.beta1, e.beta2))).unwrap();
    }
    for (i, v) in g.vertices.iter().enumerate() {
        if v.loop_count > 0 {
            writeln!(s, "  v{i} -> v{i} [label={}];", quote(&format!("({})", v.loop_count))).unwrap();
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::build::pyramid;
    use crate::smoothing::decorated_graph;

    #[test]
    fn pyramid_dot() {
        let g = decorated_graph(&pyramid(4)).unwrap();
        let d = graph_dot("pyramid", &g, &[None]);
        assert!(d.contains("v0 [label=\"[2]\"]"));
        assert!(d.contains("v0 -> v0 [label=\"(1)\"]"));
        assert_eq!(d.matches("->").count(), 1);
    }
}
