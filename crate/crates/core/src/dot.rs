//! Graphviz export. Orientations are drawn with arrowheads; roots
//! (out-degree below k) are boxes.

use std::fmt::Write;

use crate::graph::{Graph, Orientation, Structure};

pub fn graph_to_dot(g: &Graph) -> String {
    let mut s = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

pub fn orientation_to_dot(o: &Orientation) -> String {
    let mut s = String::from("digraph G {\n");
    for &v in o.vertices() {
        let shape = if (o.out_degree(v) as u32) < o.k() { "box" } else { "ellipse" };
        let _ = writeln!(s, "  {v} [shape={shape}];");
    }
    for (u, v) in o.arcs() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    s.push_str("}\n");
    s
}

pub fn to_dot(s: &Structure) -> String {
    match s {
        Structure::Graph(g) => graph_to_dot(g),
        Structure::Oriented(o) => orientation_to_dot(o),
    }
}
