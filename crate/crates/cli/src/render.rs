//! Text, JSON and DOT artifacts. Colorings are written 1-based; cover edges
//! are positions in the `elements` array.

use std::fmt::Write;

use serde::Serialize;
use synclat::{EnumStats, InvariantLattice, LatticeElement, Partition, PartitionPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// A lattice element as it appears on the wire.
pub trait WireElement: LatticeElement {
    type Json: Serialize;
    fn to_json(&self) -> Self::Json;
    /// `(m, n)`, with `m` omitted for plain partitions.
    fn dims(&self) -> (Option<usize>, usize);
}

impl WireElement for Partition {
    type Json = Vec<u32>;

    fn to_json(&self) -> Vec<u32> {
        self.coloring()
    }

    fn dims(&self) -> (Option<usize>, usize) {
        (None, self.len())
    }
}

#[derive(Serialize)]
pub struct PairJson {
    rows: Vec<u32>,
    cols: Vec<u32>,
}

impl WireElement for PartitionPair {
    type Json = PairJson;

    fn to_json(&self) -> PairJson {
        PairJson { rows: self.rows.coloring(), cols: self.cols.coloring() }
    }

    fn dims(&self) -> (Option<usize>, usize) {
        (Some(self.rows.len()), self.cols.len())
    }
}

#[derive(Serialize)]
struct StatsJson {
    cir_calls: u64,
    splits_examined: u64,
    queue_peak: usize,
    cir_iterations: u64,
    visited: Option<u64>,
}

impl From<&EnumStats> for StatsJson {
    fn from(s: &EnumStats) -> Self {
        StatsJson {
            cir_calls: s.cir_calls,
            splits_examined: s.splits_examined,
            queue_peak: s.queue_peak,
            cir_iterations: s.cir_iterations,
            visited: s.visited,
        }
    }
}

#[derive(Serialize)]
struct LatticeJson<'a, J> {
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    n: usize,
    count: usize,
    elements: Vec<J>,
    bar: Vec<String>,
    cover_edges: &'a [(usize, usize)],
    stats: StatsJson,
}

#[derive(Serialize)]
struct PartitionJson {
    n: usize,
    coloring: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<String>>,
}

pub fn lattice_text<E: WireElement>(lattice: &InvariantLattice<E>) -> String {
    let mut out = String::new();
    for e in lattice.elements() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

pub fn lattice_json<E: WireElement>(lattice: &InvariantLattice<E>) -> String {
    let (m, n) = lattice.elements().first().map_or((None, 0), WireElement::dims);
    let doc = LatticeJson {
        m,
        n,
        count: lattice.len(),
        elements: lattice.elements().iter().map(WireElement::to_json).collect(),
        bar: lattice.elements().iter().map(ToString::to_string).collect(),
        cover_edges: lattice.cover_edges(),
        stats: lattice.stats().into(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

/// One node per element labelled in bar notation, edges from coarser to finer.
pub fn lattice_dot<E: WireElement>(lattice: &InvariantLattice<E>) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=TB;\n  node [shape=plaintext];\n");
    for (i, e) in lattice.elements().iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", escape(&e.to_string())).unwrap();
    }
    for &(hi, lo) in lattice.cover_edges() {
        writeln!(out, "  n{hi} -> n{lo};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn partition_text(p: &Partition, trace: Option<&[Partition]>) -> String {
    match trace {
        Some(steps) => steps.iter().map(|s| format!("{s}\n")).collect(),
        None => format!("{p}\n"),
    }
}

pub fn partition_json(p: &Partition, trace: Option<&[Partition]>) -> String {
    let doc = PartitionJson {
        n: p.len(),
        coloring: p.coloring(),
        trace: trace.map(|t| t.iter().map(ToString::to_string).collect()),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use synclat::{invariant_lattice, MatrixFamily, RationalMatrix};

    fn chain() -> InvariantLattice<Partition> {
        // Laplacian of the path 1 -> 2 -> 3
        let m = RationalMatrix::from_ints(&[[0, 0, 0], [-1, 1, 0], [0, -1, 1]]).unwrap();
        invariant_lattice(&MatrixFamily::single(m)).unwrap()
    }

    #[test]
    fn dot_chain() {
        let l = chain();
        assert_eq!(lattice_text(&l), "123\n12|3\n1|2|3\n");
        let dot = lattice_dot(&l);
        assert_eq!(dot.matches("[label=").count(), 3);
        assert!(dot.contains("n0 -> n1;") && dot.contains("n1 -> n2;"));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn dot_single_element() {
        let l = InvariantLattice::from_elements(vec![Partition::singleton(1)]);
        let dot = lattice_dot(&l);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn json_lattice() {
        let v: serde_json::Value = serde_json::from_str(&lattice_json(&chain())).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["count"], 3);
        assert!(v.get("m").is_none());
        assert_eq!(v["elements"][1], serde_json::json!([1, 1, 2]));
        assert_eq!(v["bar"][1], "12|3");
        assert_eq!(v["cover_edges"], serde_json::json!([[0, 1], [1, 2]]));
        assert!(v["stats"]["cir_calls"].is_u64());
    }

    #[test]
    fn json_partition() {
        let p = Partition::parse_bar("13|2", 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&partition_json(&p, None)).unwrap();
        assert_eq!(v, serde_json::json!({"n": 3, "coloring": [1, 2, 1]}));
    }
}
