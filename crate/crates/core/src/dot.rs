//! Graphviz DOT writers.
//!
//! Output is deterministic: nodes are emitted in index order, edges in the
//! order produced by the underlying structure.

use std::fmt::Write;

use crate::hull_kernel::IdealSpace;
use crate::ideal::Ideal;
use crate::lattice::IdealLattice;
use crate::towers::Tower;

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

fn excluded_label(ideal: &Ideal) -> String {
    let units: Vec<String> = ideal.excluded_units().iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", units.join(" "))
}

/// Hasse diagram of an ideal lattice; each node is labelled by the units
/// its ideal excludes, edges point from an ideal to its upper covers.
pub fn lattice_hasse(lattice: &IdealLattice) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for (k, ideal) in lattice.ideals().iter().enumerate() {
        writeln!(out, "  n{k} [label=\"{}\"];", escape(&excluded_label(ideal))).unwrap();
    }
    for (a, b) in lattice.hasse_edges() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Specialization order of a point space: `p -> q` for each covering pair
/// with `p` in the closure of `{q}`.
pub fn specialization(space: &IdealSpace) -> String {
    let order = space.specialization_order();
    let mut out = String::from("digraph specialization {\n  node [shape=ellipse];\n");
    for (k, ideal) in space.points().iter().enumerate() {
        writeln!(out, "  p{k} [label=\"{}\"];", escape(&excluded_label(ideal))).unwrap();
    }
    for (p, q) in order.cover_edges() {
        writeln!(out, "  p{p} -> p{q};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Bratteli diagram of a tower: one node per block per level and one edge
/// per strand.
pub fn bratteli(tower: &Tower) -> String {
    let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
    for (level, shape) in tower.shapes().iter().enumerate() {
        writeln!(out, "  subgraph level{level} {{\n    rank=same;").unwrap();
        for (b, n) in shape.blocks().iter().enumerate() {
            writeln!(out, "    l{level}b{} [label=\"T{n}\"];", b + 1).unwrap();
        }
        out.push_str("  }\n");
    }
    for (level, emb) in tower.embeddings().iter().enumerate() {
        for strand in emb.strands() {
            let map: Vec<String> = strand.map.iter().map(|p| p.to_string()).collect();
            writeln!(
                out,
                "  l{level}b{} -> l{}b{} [label=\"{}\"];",
                strand.source_block,
                level + 1,
                strand.target_block,
                map.join(",")
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
