//! The Bass–Serre tree: balls, γ-paths, ends, lasso rays and the boundary
//! decomposition of a Y-graph language.

mod boundary;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

pub use boundary::{boundary_report, extendable_counts, sample_by_vertex, BoundaryOptions, BoundaryReport, VertexBoundary};

use crate::deploy::{edge_path_decompose, DeployError, VisibleMachine};
use crate::fsa::{Dfa, Sym, Word};
use crate::gog::{GogError, GraphOfGroups, HatEdge, NormalForm, OEdge, VertexId};
use crate::vgroups::Elem;
use crate::ygraph::YGraphError;

#[derive(Debug, thiserror::Error)]
pub enum BsError {
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Deploy(#[from] DeployError),
    #[error(transparent)]
    YGraph(#[from] YGraphError),
    #[error("vertex {0} has infinite degree")]
    InfiniteDegree(String),
    #[error("node cap {0} exceeded")]
    CapExceeded(usize),
    #[error("`{0}` is not a prefix of an accepted word")]
    NotLPrefix(String),
    #[error("ray period is empty")]
    EmptyPeriod,
}

/// The coset h·G_{∂₁E}, named by (E, h) with h the canonical element whose
/// padded form ends in E with trivial final syllable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub edge: HatEdge,
    pub rep: NormalForm,
}

impl TreeVertex {
    pub fn base() -> Self {
        TreeVertex { edge: HatEdge::Base, rep: NormalForm::default() }
    }

    /// The vertex h·G_v containing the value of `nf`.
    pub fn of(g: &GraphOfGroups, nf: &NormalForm, v: VertexId) -> Self {
        let (edge, rep) = g.coset_rep(nf, v);
        TreeVertex { edge, rep }
    }

    pub fn vertex_type(&self, g: &GraphOfGroups) -> VertexId {
        g.hat_dst(self.edge)
    }

    pub fn id(&self, g: &GraphOfGroups) -> String {
        format!("({}, {})", g.hat_edge_name(self.edge), g.format_nf(&self.rep))
    }

    /// Stabilizer h G_V h⁻¹ as "V^h".
    pub fn stabilizer(&self, g: &GraphOfGroups) -> String {
        let v = &g.vertices()[self.vertex_type(g)].name;
        if self.rep.is_identity() {
            v.clone()
        } else {
            format!("{v}^({})", g.format_nf(&self.rep))
        }
    }
}

/// Left coset representatives of G_v / ∂₀F_E: the shortlex-least element of
/// each coset. `None` for an infinite vertex group.
pub fn coset_reps(g: &GraphOfGroups, v: VertexId, oe: OEdge) -> Option<Vec<Elem>> {
    let mut els = g.group(v).elements()?;
    els.sort_by_key(|x| g.syllable_key(v, x));
    let sub = &g.emb0(oe).images;
    let mut seen: Vec<Elem> = Vec::new();
    let mut reps = Vec::new();
    for x in els {
        if seen.contains(&x) {
            continue;
        }
        for f in sub {
            seen.push(g.vmul(v, &x, f));
        }
        reps.push(x);
    }
    Some(reps)
}

/// Σ over edges E out of v of [G_v : ∂₀F_E].
pub fn degree(g: &GraphOfGroups, v: VertexId) -> Option<usize> {
    g.out_edges(v).into_iter().map(|oe| coset_reps(g, v, oe).map(|r| r.len())).sum()
}

fn global_word(g: &GraphOfGroups, v: VertexId, x: &[Sym]) -> Word {
    x.iter().map(|&a| g.alphabet().global(v, a)).collect()
}

/// Neighbours of a tree vertex, one per edge E′ out of its type and coset of
/// ∂₀F_{E′}.
pub fn neighbours(g: &GraphOfGroups, t: &TreeVertex) -> Result<Vec<(OEdge, TreeVertex)>, BsError> {
    let v = t.vertex_type(g);
    let mut out = Vec::new();
    for oe in g.out_edges(v) {
        let reps = coset_reps(g, v, oe).ok_or_else(|| BsError::InfiniteDegree(t.id(g)))?;
        for c in reps {
            let mut x = g.mul_word(&t.rep, &global_word(g, v, &c));
            if let Some(s) = g.alphabet().stable(oe) {
                x = g.mul_letter(&x, s);
            }
            out.push((oe, TreeVertex::of(g, &x, g.dst(oe))));
        }
    }
    Ok(out)
}

/// All vertices within `depth` of a root, breadth first.
#[derive(Clone, Debug)]
pub struct TreeBall {
    pub vertices: Vec<TreeVertex>,
    pub depth: Vec<usize>,
    /// parent and the oriented edge type leading from it
    pub parent: Vec<Option<(usize, OEdge)>>,
    /// full degree in the tree, not only inside the ball
    pub degree: Vec<Option<usize>>,
    pub index: HashMap<TreeVertex, usize>,
    pub radius: usize,
}

impl TreeBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius + 1];
        for &d in &self.depth {
            out[d] += 1;
        }
        out
    }

    /// Path from the root to vertex `i`.
    pub fn path_to(&self, i: usize) -> TreePath {
        let mut vs = vec![i];
        let mut edges = Vec::new();
        while let Some((p, oe)) = self.parent[*vs.last().unwrap()] {
            vs.push(p);
            edges.push(oe);
        }
        vs.reverse();
        edges.reverse();
        TreePath { vertices: vs.into_iter().map(|j| self.vertices[j].clone()).collect(), edges }
    }

    pub fn to_dot(&self, g: &GraphOfGroups, tooltips: Option<&[String]>) -> String {
        let mut out = String::from("graph B {\n");
        for (i, t) in self.vertices.iter().enumerate() {
            let tip = tooltips.and_then(|ts| ts.get(i)).map(|s| format!(", tooltip=\"{s}\"")).unwrap_or_default();
            let _ = writeln!(out, "  t{i} [label=\"{}\\n{}\"{tip}];", t.id(g), t.stabilizer(g));
        }
        for (i, p) in self.parent.iter().enumerate() {
            if let Some((j, oe)) = p {
                let _ = writeln!(out, "  t{j} -- t{i} [label=\"{}\"];", g.oedge_name(*oe));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn tree_ball(g: &GraphOfGroups, depth: usize, cap: usize) -> Result<TreeBall, BsError> {
    tree_ball_from(g, TreeVertex::base(), depth, cap)
}

pub fn tree_ball_from(g: &GraphOfGroups, root: TreeVertex, depth: usize, cap: usize) -> Result<TreeBall, BsError> {
    let mut b = TreeBall {
        vertices: vec![root.clone()],
        depth: vec![0],
        parent: vec![None],
        degree: vec![degree(g, root.vertex_type(g))],
        index: HashMap::from([(root, 0)]),
        radius: depth,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if b.depth[i] == depth {
            continue;
        }
        for (oe, t) in neighbours(g, &b.vertices[i].clone())? {
            if b.index.contains_key(&t) {
                continue;
            }
            if b.vertices.len() >= cap {
                return Err(BsError::CapExceeded(cap));
            }
            let j = b.vertices.len();
            b.index.insert(t.clone(), j);
            b.degree.push(degree(g, t.vertex_type(g)));
            b.vertices.push(t);
            b.depth.push(b.depth[i] + 1);
            b.parent.push(Some((i, oe)));
            queue.push_back(j);
        }
    }
    Ok(b)
}

/// A path of tree vertices from the base vertex, with the edge types between
/// consecutive vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePath {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<OEdge>,
}

impl TreePath {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self) -> &TreeVertex {
        self.vertices.last().expect("paths start at the base vertex")
    }

    pub fn is_prefix_of(&self, other: &TreePath) -> bool {
        self.vertices.len() <= other.vertices.len() && other.vertices[..self.vertices.len()] == self.vertices[..]
    }

    pub fn display(&self, g: &GraphOfGroups) -> String {
        self.vertices.iter().map(|t| t.id(g)).collect::<Vec<_>>().join(" -> ")
    }
}

/// γ for a value: the vertices g₀t₁…g_{i−1}t_i·G_{V_i} along the normal form.
pub fn gamma_path_nf(g: &GraphOfGroups, nf: &NormalForm) -> TreePath {
    let mut vertices = vec![TreeVertex::base()];
    let mut edges = Vec::new();
    for i in 1..=nf.len() {
        let mut p = NormalForm { g0: nf.g0.clone(), steps: nf.steps[..i].to_vec() };
        p.steps[i - 1].1.clear();
        let oe = nf.steps[i - 1].0;
        vertices.push(TreeVertex::of(g, &p, g.dst(oe)));
        edges.push(oe);
    }
    TreePath { vertices, edges }
}

pub fn gamma_path(g: &GraphOfGroups, w: &[Sym]) -> TreePath {
    gamma_path_nf(g, &g.normal_form(w))
}

/// Longest prefixes u₀ of u and u₀′ of u′ whose γ-paths both equal the
/// common initial segment of γ_ū and γ_ū′.
pub fn trim_to_common_path(g: &GraphOfGroups, l: &Dfa, u: &[Sym], u2: &[Sym]) -> Result<(Word, Word), BsError> {
    for x in [u, u2] {
        if !l.accepts_prefix(x) {
            return Err(BsError::NotLPrefix(g.alphabet().format_word(x)));
        }
    }
    let (p, q) = (gamma_path(g, u), gamma_path(g, u2));
    let common = p.vertices.iter().zip(&q.vertices).take_while(|(a, b)| a == b).count();
    let cut = |x: &[Sym]| -> Word {
        (0..=x.len()).rev().find(|&k| gamma_path(g, &x[..k]).vertices.len() == common).map_or_else(Vec::new, |k| x[..k].to_vec())
    };
    Ok((cut(u), cut(u2)))
}

/// All paths of exactly `depth` edges from the base vertex.
pub fn ends(g: &GraphOfGroups, depth: usize, cap: usize) -> Result<Vec<TreePath>, BsError> {
    let b = tree_ball(g, depth, cap)?;
    Ok((0..b.len()).filter(|&i| b.depth[i] == depth).map(|i| b.path_to(i)).collect())
}

/// u·v^ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub u: Word,
    pub v: Word,
}

impl Ray {
    pub fn prefix(&self, periods: usize) -> Word {
        let mut w = self.u.clone();
        for _ in 0..periods {
            w.extend_from_slice(&self.v);
        }
        w
    }

    /// Every prefix through three periods is an accepted-word prefix.
    pub fn valid(&self, l: &Dfa) -> bool {
        !self.v.is_empty() && l.accepts_prefix(&self.prefix(3))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayClass {
    /// the ray leaves every finite subtree; the cylinder is γ at u·v³
    End(TreePath),
    /// the ray stays in one vertex coset; in L_h it reads
    /// `f_letter · head · period^ω`
    BoundaryPoint { vertex: TreeVertex, f_letter: Sym, head: Word, period: Word },
}

pub fn classify_ray(g: &GraphOfGroups, vm: &VisibleMachine, l: &Dfa, r: &Ray) -> Result<RayClass, BsError> {
    if r.v.is_empty() {
        return Err(BsError::EmptyPeriod);
    }
    let w3 = r.prefix(3);
    if !l.accepts_prefix(&w3) {
        return Err(BsError::NotLPrefix(g.alphabet().format_word(&w3)));
    }
    let (p2, p3) = (gamma_path(g, &r.prefix(2)), gamma_path(g, &w3));
    if p3.len() > p2.len() {
        return Ok(RayClass::End(p3));
    }
    let d = edge_path_decompose(g, vm, &w3)?;
    let vertex = p3.end().clone();
    let cut = match d.edges.last() {
        None => 0,
        Some(&oe) => d.cuts.last().unwrap() + usize::from(g.alphabet().stable(oe).is_some()),
    };
    // correction f with prefix value h·∂₁f
    let f_letter = match vertex.edge {
        HatEdge::Base => crate::vgroups::E,
        HatEdge::E(oe) => {
            let x = g.normal_form(&w3[..cut]);
            let c = g.padded_form(&x, HatEdge::E(oe)).map(|p| p.last_syllable().clone()).unwrap_or_default();
            g.emb1(oe).preimage(&c).map_or(crate::vgroups::E, |f| g.alphabet().edge_letters(oe)[f])
        }
    };
    let (ul, vl) = (r.u.len(), r.v.len());
    let k = (0..=3).find(|&k| ul + k * vl >= cut).unwrap_or(3);
    Ok(RayClass::BoundaryPoint { vertex, f_letter, head: w3[cut..ul + k * vl].to_vec(), period: r.v.clone() })
}

/// γ-depth strata of a sample of words, for reports.
pub fn strata(g: &GraphOfGroups, ws: &[Word]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for w in ws {
        *out.entry(gamma_path(g, w).len()).or_insert(0) += 1;
    }
    out
}
