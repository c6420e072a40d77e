//! Graphs of groups with finite edge groups and their fundamental groups.

mod alphabet;
mod metric;
mod normal;
mod reduce;
mod spec;

use std::collections::VecDeque;
use std::sync::Arc;

pub use alphabet::{Alphabet, Letter, LetterKind};
pub use metric::{cayley_ball, distance, Ball, Metric, DEFAULT_NODE_CAP};
pub use normal::NormalForm;
pub use reduce::{reduce, Reduction};
pub use spec::parse_spec;

use crate::fsa::Sym;
use crate::vgroups::{Elem, Embedding, FiniteGroupTable, GroupError, VertexGroup};

pub type VertexId = usize;

/// Oriented edge: `2 * i` runs along edge `i` as declared, `2 * i + 1` against
/// it.
pub type OEdge = usize;

/// Edge of the extended graph: the virtual base edge or an oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HatEdge {
    Base,
    E(OEdge),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GogError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("line {0}: {1}")]
    Group(usize, GroupError),
    #[error("graph is disconnected: {0} not reachable from {1}")]
    Disconnected(String, String),
    #[error("maximal tree is invalid: {0}")]
    BadTree(String),
    #[error("unknown letter `{0}`")]
    ForeignLetter(String),
    #[error("graph is not reduced: edge {0} has surjective embedding")]
    NotReduced(String),
    #[error("loop {0} carries the whole vertex group; replacing it by a semidirect product is not supported")]
    FullLoop(String),
    #[error("non-tree edge {0} carries the whole vertex group; choose a maximal tree containing it")]
    FullNonTreeEdge(String),
    #[error("node cap {0} exceeded")]
    CapExceeded(usize),
    #[error("{0}")]
    Alphabet(String),
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub name: String,
    pub group: Arc<dyn VertexGroup>,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
    /// finite edge group F_E
    pub group: Arc<dyn VertexGroup>,
    pub table: FiniteGroupTable,
    pub d0: Embedding,
    pub d1: Embedding,
    pub tree: bool,
}

/// Validated graph of groups with a maximal tree and base vertex.
#[derive(Debug, Clone)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    base: VertexId,
    /// tree_next[v][w]: first oriented tree edge on the tree path from v to w
    tree_next: Vec<Vec<Option<OEdge>>>,
    alphabet: Alphabet,
}

impl GraphOfGroups {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, base: VertexId) -> Result<Self, GogError> {
        let n = vertices.len();
        if n == 0 {
            return Err(GogError::BadTree("no vertices".into()));
        }
        // connectivity of the underlying graph
        let mut seen = vec![false; n];
        let mut stack = vec![base];
        seen[base] = true;
        while let Some(v) = stack.pop() {
            for e in &edges {
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(GogError::Disconnected(vertices[v].name.clone(), vertices[base].name.clone()));
        }
        let ntree = edges.iter().filter(|e| e.tree).count();
        if let Some(e) = edges.iter().find(|e| e.tree && e.from == e.to) {
            return Err(GogError::BadTree(format!("loop {} marked tree=yes", e.name)));
        }
        if ntree != n - 1 {
            return Err(GogError::BadTree(format!("{ntree} tree edges for {n} vertices")));
        }
        let mut tree_next = vec![vec![None; n]; n];
        for (w, row) in tree_next.iter_mut().enumerate() {
            // BFS from w over tree edges; record the edge pointing back toward w
            let mut dist = vec![usize::MAX; n];
            dist[w] = 0;
            let mut q = VecDeque::from([w]);
            while let Some(v) = q.pop_front() {
                for (i, e) in edges.iter().enumerate().filter(|(_, e)| e.tree) {
                    for (oe, a, b) in [(2 * i, e.from, e.to), (2 * i + 1, e.to, e.from)] {
                        if a == v && dist[b] == usize::MAX {
                            dist[b] = dist[v] + 1;
                            row[b] = Some(oe ^ 1);
                            q.push_back(b);
                        }
                    }
                }
            }
            if let Some(v) = dist.iter().position(|&d| d == usize::MAX) {
                return Err(GogError::BadTree(format!("{} not connected by tree edges", vertices[v].name)));
            }
        }
        // tree_next currently holds, at [w][v], the first edge from v toward w
        let mut next = vec![vec![None; n]; n];
        for (w, row) in tree_next.iter().enumerate() {
            for (v, e) in row.iter().enumerate() {
                next[v][w] = *e;
            }
        }
        let alphabet = Alphabet::build(&vertices, &edges)?;
        Ok(GraphOfGroups { vertices, edges, base, tree_next: next, alphabet })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn group(&self, v: VertexId) -> &dyn VertexGroup {
        self.vertices[v].group.as_ref()
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn num_oedges(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn oedge_by_name(&self, name: &str) -> Option<OEdge> {
        let (base, rev) = match name.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (name, false),
        };
        self.edges.iter().position(|e| e.name == base).map(|i| 2 * i + rev as usize)
    }

    pub fn hat_edge_by_name(&self, name: &str) -> Option<HatEdge> {
        if name == "E0" {
            Some(HatEdge::Base)
        } else {
            self.oedge_by_name(name).map(HatEdge::E)
        }
    }

    pub fn edge(&self, oe: OEdge) -> &Edge {
        &self.edges[oe / 2]
    }

    pub fn inv(&self, oe: OEdge) -> OEdge {
        oe ^ 1
    }

    /// Initial vertex ∂₀.
    pub fn src(&self, oe: OEdge) -> VertexId {
        let e = self.edge(oe);
        if oe % 2 == 0 {
            e.from
        } else {
            e.to
        }
    }

    /// Terminal vertex ∂₁.
    pub fn dst(&self, oe: OEdge) -> VertexId {
        self.src(oe ^ 1)
    }

    pub fn hat_dst(&self, e: HatEdge) -> VertexId {
        match e {
            HatEdge::Base => self.base,
            HatEdge::E(oe) => self.dst(oe),
        }
    }

    /// ∂₀ embedding of the oriented edge, into the group at `src(oe)`.
    pub fn emb0(&self, oe: OEdge) -> &Embedding {
        let e = self.edge(oe);
        if oe % 2 == 0 {
            &e.d0
        } else {
            &e.d1
        }
    }

    /// ∂₁ embedding of the oriented edge, into the group at `dst(oe)`.
    pub fn emb1(&self, oe: OEdge) -> &Embedding {
        self.emb0(oe ^ 1)
    }

    pub fn is_tree(&self, oe: OEdge) -> bool {
        self.edge(oe).tree
    }

    pub fn oedge_name(&self, oe: OEdge) -> String {
        if oe % 2 == 0 {
            self.edge(oe).name.clone()
        } else {
            format!("{}^-1", self.edge(oe).name)
        }
    }

    pub fn hat_edge_name(&self, e: HatEdge) -> String {
        match e {
            HatEdge::Base => "E0".to_string(),
            HatEdge::E(oe) => self.oedge_name(oe),
        }
    }

    /// Oriented edges out of `v`, in index order.
    pub fn out_edges(&self, v: VertexId) -> Vec<OEdge> {
        (0..self.num_oedges()).filter(|&oe| self.src(oe) == v).collect()
    }

    /// Oriented edges of the extended graph ending at `v`.
    pub fn hat_in_edges(&self, v: VertexId) -> Vec<HatEdge> {
        let mut out = Vec::new();
        if v == self.base {
            out.push(HatEdge::Base);
        }
        out.extend((0..self.num_oedges()).filter(|&oe| self.dst(oe) == v).map(HatEdge::E));
        out
    }

    pub fn hat_edges(&self) -> Vec<HatEdge> {
        std::iter::once(HatEdge::Base).chain((0..self.num_oedges()).map(HatEdge::E)).collect()
    }

    /// Oriented tree edges along the tree path from `v` to `w`.
    pub fn tree_path(&self, v: VertexId, w: VertexId) -> Vec<OEdge> {
        let mut out = Vec::new();
        let mut cur = v;
        while cur != w {
            let oe = self.tree_next[cur][w].expect("tree spans");
            out.push(oe);
            cur = self.dst(oe);
        }
        out
    }

    pub fn edge_group_order(&self, oe: OEdge) -> usize {
        self.edge(oe).table.order()
    }

    /// True if some oriented edge has ∂₁F_E equal to its whole terminal group.
    pub fn reduced_violation(&self) -> Option<OEdge> {
        (0..self.num_oedges()).find(|&oe| {
            let g = self.group(self.dst(oe));
            g.elements().is_some_and(|els| els.len() == self.edge_group_order(oe))
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced_violation().is_none()
    }

    /// Shortlex key of a syllable at `v` in the global letter order.
    pub fn syllable_key(&self, v: VertexId, x: &[Sym]) -> (usize, Vec<Sym>) {
        (x.len(), x.iter().map(|&a| self.alphabet.global(v, a)).collect())
    }

    pub fn display_syllable(&self, v: VertexId, x: &[Sym]) -> String {
        if x.is_empty() {
            return "1".into();
        }
        x.iter().map(|&a| self.alphabet.name(self.alphabet.global(v, a))).collect::<Vec<_>>().join(" ")
    }

    /// Multiply inside a vertex group; inputs are canonical.
    pub fn vmul(&self, v: VertexId, x: &[Sym], y: &[Sym]) -> Elem {
        self.group(v).multiply(x, y).expect("canonical syllables")
    }

    pub fn vinv(&self, v: VertexId, x: &[Sym]) -> Elem {
        self.group(v).invert(x).expect("canonical syllable")
    }
}
