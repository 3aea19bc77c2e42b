use std::collections::HashMap;
use std::fmt::Write;

use super::{Stage, TilingRegion};
use crate::error::Result;
use crate::group::Word;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#393b79", "#ad494a",
];

struct CoreGraph {
    nodes: Vec<(String, Option<usize>)>,
    edges: Vec<(usize, usize, String)>,
}

/// Cayley graph of the core ball, each vertex tagged with the index of the
/// placement covering it.
fn core_graph(region: &TilingRegion) -> Result<CoreGraph> {
    let g = &region.backend;
    let ball = g.enumerate_ball(region.core_radius)?;
    let mut owner: HashMap<Word, usize> = HashMap::new();
    for (k, p) in region.placements.iter().enumerate() {
        for x in region.tile(&p.anchor) {
            owner.entry(x).or_insert(k);
        }
    }
    let index: HashMap<&Word, usize> = ball.elements().iter().enumerate().map(|(i, x)| (x, i)).collect();
    let nodes = ball
        .elements()
        .iter()
        .map(|x| (g.format_word(x), owner.get(x).copied()))
        .collect();
    let generators: Vec<Word> = g
        .alphabet()
        .into_iter()
        .filter(|l| !l.inverted)
        .map(|l| g.reduce(&[l]))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for (i, x) in ball.elements().iter().enumerate() {
        for s in &generators {
            if let Some(&j) = index.get(&g.mul(x, s)) {
                edges.push((i, j, g.format_word(s)));
            }
        }
    }
    Ok(CoreGraph { nodes, edges })
}

fn color(owner: Option<usize>) -> &'static str {
    owner.map_or("#ffffff", |k| PALETTE[k % PALETTE.len()])
}

fn stage_name(region: &TilingRegion, owner: Option<usize>) -> String {
    match owner.map(|k| region.placements[k].stage) {
        Some(Stage::A) => "A".into(),
        Some(Stage::Greedy { round }) => format!("greedy:{round}"),
        None => "uncovered".into(),
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn export_dot(region: &TilingRegion) -> Result<String> {
    let graph = core_graph(region)?;
    let mut out = String::from("digraph tiling {\n  node [style=filled];\n");
    for (i, (label, owner)) in graph.nodes.iter().enumerate() {
        let placement = owner.map_or(-1, |k| k as i64);
        writeln!(
            out,
            "  n{i} [label=\"{label}\", fillcolor=\"{}\", placement={placement}, stage=\"{}\"];",
            color(*owner),
            stage_name(region, *owner)
        )
        .unwrap();
    }
    for (i, j, s) in &graph.edges {
        writeln!(out, "  n{i} -> n{j} [label=\"{s}\"];").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn export_graphml(region: &TilingRegion) -> Result<String> {
    let graph = core_graph(region)?;
    let mut out = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n",
        "  <key id=\"placement\" for=\"node\" attr.name=\"placement\" attr.type=\"int\"/>\n",
        "  <key id=\"stage\" for=\"node\" attr.name=\"stage\" attr.type=\"string\"/>\n",
        "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n",
        "  <key id=\"generator\" for=\"edge\" attr.name=\"generator\" attr.type=\"string\"/>\n",
        "  <graph id=\"tiling\" edgedefault=\"directed\">\n",
    ));
    for (i, (label, owner)) in graph.nodes.iter().enumerate() {
        writeln!(
            out,
            "    <node id=\"n{i}\"><data key=\"label\">{}</data><data key=\"placement\">{}</data><data key=\"stage\">{}</data><data key=\"color\">{}</data></node>",
            xml_escape(label),
            owner.map_or(-1, |k| k as i64),
            stage_name(region, *owner),
            color(*owner)
        )
        .unwrap();
    }
    for (k, (i, j, s)) in graph.edges.iter().enumerate() {
        writeln!(
            out,
            "    <edge id=\"e{k}\" source=\"n{i}\" target=\"n{j}\"><data key=\"generator\">{}</data></edge>",
            xml_escape(s)
        )
        .unwrap();
    }
    out.push_str("  </graph>\n</graphml>\n");
    Ok(out)
}
