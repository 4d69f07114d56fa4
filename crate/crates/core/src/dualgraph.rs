//! Dual graph construction from a blowup-kind sequence.
//!
//! Vertices are the exceptional components in creation order; vertex `n` is
//! adjacent to every older component whose strict transform passes through
//! the center of the `n`-th blowup. Those components are tracked by a
//! two-slot automaton holding the labels whose loci are the current
//! parameters' zero sets: an x-blowup or z-blowup puts the new label in the
//! x-slot, a y-blowup in the y-slot, and a z-blowup clears the y-slot (the
//! translated component becomes a unit immediately).

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::spec::BlowupKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModificationKind {
    /// New vertex adjacent to exactly one older vertex (or none: the first).
    First,
    /// New vertex adjacent to exactly two older vertices.
    Second,
}

/// Per-vertex bookkeeping: which piece and segment of the dual graph the
/// vertex belongs to, and how it was adjoined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexAnnotation {
    pub piece: u32,
    pub segment: u32,
    pub modification: ModificationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    vertex_count: u32,
    /// Unordered pairs, stored with the smaller label first.
    edges: BTreeSet<(u32, u32)>,
    open_dot: Option<u32>,
    kinds: Vec<BlowupKind>,
    annotations: Vec<VertexAnnotation>,
}

/// Combinatorial data recovered from a dual graph: the two-leg pieces, the
/// tail count, and whether the graph carried an open dot (a complete
/// divisorial sequence) or is a prefix still under construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningData {
    pub g: usize,
    pub pieces: Vec<Vec<u64>>,
    pub tail: u64,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    EmptyKinds,
    /// The first blowup is an x-blowup by convention.
    FirstKindNotX,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EmptyKinds => write!(f, "need at least one blowup"),
            GraphError::FirstKindNotX => write!(f, "the first blowup must be an x-blowup"),
        }
    }
}

impl DualGraph {
    /// Run the label automaton over the kind sequence.
    pub fn build(kinds: &[BlowupKind]) -> Result<Self, GraphError> {
        if kinds.is_empty() {
            return Err(GraphError::EmptyKinds);
        }
        if kinds[0] != BlowupKind::X {
            return Err(GraphError::FirstKindNotX);
        }
        let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut label_x: Option<u32> = None;
        let mut label_y: Option<u32> = None;
        let mut annotations: Vec<VertexAnnotation> = Vec::with_capacity(kinds.len());
        let mut piece = 1u32;
        let mut segment = 1u32;
        let mut segment_kind = BlowupKind::X;

        for (index, &kind) in kinds.iter().enumerate() {
            let vertex = index as u32 + 1;
            let mut older = 0u8;
            for label in [label_x, label_y].into_iter().flatten() {
                edges.insert((label.min(vertex), label.max(vertex)));
                older += 1;
            }
            match kind {
                BlowupKind::X => {
                    label_x = Some(vertex);
                    if index > 0 && segment_kind == BlowupKind::Y {
                        segment += 1;
                    }
                    segment_kind = BlowupKind::X;
                }
                BlowupKind::Y => {
                    label_y = Some(vertex);
                    if segment_kind == BlowupKind::X {
                        segment += 1;
                    }
                    segment_kind = BlowupKind::Y;
                }
                BlowupKind::Z => {
                    label_x = Some(vertex);
                    label_y = None;
                    piece += 1;
                    segment = 1;
                    segment_kind = BlowupKind::X;
                }
            }
            annotations.push(VertexAnnotation {
                piece,
                segment,
                modification: if older >= 2 {
                    ModificationKind::Second
                } else {
                    ModificationKind::First
                },
            });
        }
        Ok(DualGraph {
            vertex_count: kinds.len() as u32,
            edges,
            open_dot: None,
            kinds: kinds.to_vec(),
            annotations,
        })
    }

    /// Build from a complete divisorial kind sequence, marking the final
    /// vertex as the open dot.
    pub fn build_complete(kinds: &[BlowupKind]) -> Result<Self, GraphError> {
        let mut graph = Self::build(kinds)?;
        graph.open_dot = Some(graph.vertex_count);
        Ok(graph)
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn open_dot(&self) -> Option<u32> {
        self.open_dot
    }

    pub fn annotation(&self, vertex: u32) -> Option<&VertexAnnotation> {
        self.annotations.get(vertex as usize - 1)
    }

    pub fn kinds(&self) -> &[BlowupKind] {
        &self.kinds
    }

    pub fn neighbors(&self, vertex: u32) -> Vec<u32> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == vertex {
                    Some(b)
                } else if b == vertex {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, vertex: u32) -> usize {
        self.neighbors(vertex).len()
    }

    /// Recover the defining data. The open dot, when marked, is excluded
    /// from the counts; a trailing piece with only odd-leg segments is the
    /// divisorial tail.
    ///
    /// A one-segment piece and a tail are the same graph, so recovery always
    /// reports the tail form; specs written with a trailing one-segment piece
    /// round-trip to their tail-form equivalent.
    pub fn defining_data(&self) -> DefiningData {
        let complete = self.open_dot.is_some();
        let counted = if complete {
            &self.annotations[..self.annotations.len() - 1]
        } else {
            &self.annotations[..]
        };
        let mut pieces: Vec<Vec<u64>> = Vec::new();
        for annotation in counted {
            let piece = annotation.piece as usize;
            let segment = annotation.segment as usize;
            while pieces.len() < piece {
                pieces.push(Vec::new());
            }
            let segments = &mut pieces[piece - 1];
            while segments.len() < segment {
                segments.push(0);
            }
            segments[segment - 1] += 1;
        }
        match pieces.last() {
            Some(last) if last.len() == 1 => {
                let tail = last[0];
                pieces.pop();
                DefiningData {
                    g: pieces.len(),
                    pieces,
                    tail,
                    complete,
                }
            }
            _ => DefiningData {
                g: pieces.len(),
                pieces,
                tail: 0,
                complete,
            },
        }
    }

    /// Deterministic DOT rendering: vertices in label order as filled
    /// circles, the open dot unfilled, edges sorted.
    pub fn to_dot(&self) -> String {
        use core::fmt::Write;
        let mut out = String::from("graph dual {\n");
        for vertex in 1..=self.vertex_count {
            if Some(vertex) == self.open_dot {
                let _ = writeln!(out, "  {vertex} [shape=circle, style=\"\"];");
            } else {
                let _ = writeln!(out, "  {vertex} [shape=circle, style=filled];");
            }
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{ValuationSpec, ValuationType};
    use alloc::vec;

    fn dgex_kinds() -> Vec<BlowupKind> {
        use BlowupKind::*;
        vec![X, X, X, Y, Z, Y, Y, X]
    }

    #[test]
    fn worked_example_edge_set() {
        let graph = DualGraph::build_complete(&dgex_kinds()).unwrap();
        let expected: BTreeSet<(u32, u32)> = [
            (1, 2),
            (2, 3),
            (3, 4),
            (3, 5),
            (4, 5),
            (5, 6),
            (5, 7),
            (6, 7),
            (5, 8),
            (7, 8),
        ]
        .into_iter()
        .collect();
        assert_eq!(graph.edge_set(), &expected);
        assert_eq!(graph.open_dot(), Some(8));
    }

    #[test]
    fn single_vertex() {
        let graph = DualGraph::build(&[BlowupKind::X]).unwrap();
        assert_eq!(graph.vertex_count(), 1);
        assert_eq!(graph.edge_set().len(), 0);
        let data = graph.defining_data();
        assert_eq!(data.g, 0);
        assert_eq!(data.tail, 1);
        assert!(!data.complete);
    }

    #[test]
    fn xyx_automaton_run() {
        use BlowupKind::*;
        let graph = DualGraph::build(&[X, Y, X]).unwrap();
        let expected: BTreeSet<(u32, u32)> = [(1, 2), (1, 3), (2, 3)].into_iter().collect();
        assert_eq!(graph.edge_set(), &expected);
    }

    #[test]
    fn first_kind_must_be_x() {
        assert_eq!(
            DualGraph::build(&[BlowupKind::Y]),
            Err(GraphError::FirstKindNotX)
        );
        assert_eq!(DualGraph::build(&[]), Err(GraphError::EmptyKinds));
    }

    #[test]
    fn defining_data_of_worked_example() {
        let graph = DualGraph::build_complete(&dgex_kinds()).unwrap();
        let data = graph.defining_data();
        assert_eq!(data.g, 2);
        assert_eq!(data.pieces, vec![vec![3, 1], vec![1, 2]]);
        assert_eq!(data.tail, 0);
        assert!(data.complete);
    }

    #[test]
    fn defining_data_of_prefix() {
        use BlowupKind::*;
        let graph = DualGraph::build(&[X, X, Y]).unwrap();
        let data = graph.defining_data();
        assert_eq!(data.g, 1);
        assert_eq!(data.pieces, vec![vec![2, 1]]);
        assert_eq!(data.tail, 0);
        assert!(!data.complete);
    }

    #[test]
    fn roundtrip_with_decode() {
        let spec = ValuationSpec::new(ValuationType::T0, vec![vec![3, 1], vec![1, 2]]);
        let kinds = spec.decode_blowups(8).unwrap();
        let graph = DualGraph::build_complete(&kinds).unwrap();
        let data = graph.defining_data();
        assert_eq!(data.pieces, spec.pieces);
        assert_eq!(data.tail, spec.tail);
    }

    #[test]
    fn second_kind_at_node_vertices() {
        let graph = DualGraph::build_complete(&dgex_kinds()).unwrap();
        // vertex 5 is the z-vertex: adjacent to both 3 and 4
        assert_eq!(
            graph.annotation(5).unwrap().modification,
            ModificationKind::Second
        );
        assert_eq!(graph.neighbors(5), vec![3, 4, 6, 7, 8]);
        // no vertex has three or more older neighbors
        for v in 1..=graph.vertex_count() {
            let older = graph.neighbors(v).iter().filter(|&&u| u < v).count();
            assert!(older <= 2, "vertex {v} has {older} older neighbors");
        }
    }

    #[test]
    fn dot_output_shape() {
        let graph = DualGraph::build_complete(&dgex_kinds()).unwrap();
        let dot = graph.to_dot();
        assert!(dot.starts_with("graph dual {"));
        assert!(dot.contains("8 [shape=circle, style=\"\"]"));
        assert!(dot.contains("1 [shape=circle, style=filled]"));
        assert!(dot.contains("  7 -- 8;"));
        assert!(dot.ends_with("}\n"));
    }
}
