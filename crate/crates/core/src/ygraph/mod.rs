//! Y-graphs: finite graphs over Y whose vertices carry structure classes and
//! whose edges carry rational subsets of the vertex groups.

mod build;
mod compile;
mod edit;
mod io;
mod partition;
pub mod values;

#[cfg(test)]
mod tests;

use std::collections::{BTreeSet, VecDeque};

use crate::fsa::{Dfa, FsaError};
use crate::gog::{GogError, GraphOfGroups, OEdge, VertexId};
use crate::vgroups::Elem;

pub use build::{biautomatic_ygraph, default_ygraph};
pub use compile::{
    language_dfa, language_dfa_via, language_gfsa, synchronize, CompileRoute, RouteRegistry, StructureHandle, Visible,
};
pub use edit::{collapse, split_for_element, CollapseOutcome};
pub use io::{read_ygraph, to_dot, write_ygraph};
pub use partition::shortlex_coset_partition;

#[derive(Debug, thiserror::Error)]
pub enum YGraphError {
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Fsa(#[from] FsaError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("{0}")]
    Io(String),
    #[error("unknown compilation route `{0}`")]
    UnknownRoute(String),
    #[error("path of `{0}` is not embedded in X")]
    NotEmbedded(String),
    #[error("`{0}` is not in the label of the final edge")]
    NotInLabel(String),
    #[error("no vertex `{0}`")]
    NoVertex(String),
}

#[derive(Clone, Debug)]
pub struct YVertex {
    pub name: String,
    pub vtype: VertexId,
    pub class: String,
    /// language over the global alphabet, spelled in A_{vtype}
    pub lang: Dfa,
}

#[derive(Clone, Debug)]
pub struct YEdge {
    pub name: String,
    pub from: usize,
    pub to: usize,
    pub etype: OEdge,
    /// words of the source vertex language evaluating into S_e
    pub set: Dfa,
}

/// The permutation of X realizing f ∈ F_E at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YAction {
    pub vertex: usize,
    pub etype: OEdge,
    pub f: usize,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct YGraph {
    pub vertices: Vec<YVertex>,
    pub edges: Vec<YEdge>,
    pub start: usize,
    pub actions: Vec<YAction>,
}

impl YGraph {
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, &YEdge)> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.from == v)
    }

    pub fn in_types(&self, v: usize) -> BTreeSet<OEdge> {
        self.edges.iter().filter(|e| e.to == v).map(|e| e.etype).collect()
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    /// Whether out-edges of type `oe` at `v` must cover all of G_V, as
    /// opposed to G_V ∖ ∂₀F_E.
    pub fn needs_full_cover(&self, g: &GraphOfGroups, v: usize, oe: OEdge) -> bool {
        v == self.start || self.in_types(v).iter().any(|&t| t != g.inv(oe))
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(v) = queue.pop_front() {
            for (_, e) in self.out_edges(v) {
                if !seen[e.to] {
                    seen[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

fn word_str(g: &GraphOfGroups, w: &[usize]) -> String {
    g.alphabet().format_word(w)
}

/// Every violated Y-graph axiom with a witness. Value checks are exact for
/// finite vertex groups; over infinite ones the vertex languages are taken to
/// be unique, so disjointness and cover are language identities.
pub fn validate_ygraph(g: &GraphOfGroups, x: &YGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |axiom, detail: String| out.push(Violation { axiom, detail });
    let n = g.alphabet().len();
    let nv = x.vertices.len();
    if x.start >= nv {
        bad("start", format!("start {} out of range", x.start));
        return out;
    }
    for e in &x.edges {
        if e.from >= nv || e.to >= nv || e.etype >= g.num_oedges() {
            bad("incidence", format!("edge {} has a dangling end", e.name));
            return out;
        }
    }
    for v in &x.vertices {
        let letters = Dfa::star_of(n, g.alphabet().vertex_letters(v.vtype));
        if let Some(w) = v.lang.diff(&letters).shortest() {
            bad("vertex label", format!("{}: word {} leaves A_V", v.name, word_str(g, &w)));
        }
        if v.lang.is_empty() {
            bad("vertex label", format!("{}: empty language", v.name));
        }
    }
    for e in &x.edges {
        let (a, b) = (&x.vertices[e.from], &x.vertices[e.to]);
        if g.src(e.etype) != a.vtype || g.dst(e.etype) != b.vtype {
            bad("projection", format!("edge {} of type {} joins {} to {}", e.name, g.oedge_name(e.etype), a.name, b.name));
        }
        if let Some(w) = e.set.diff(&a.lang).shortest() {
            bad("edge label", format!("edge {}: {} is not a word of L_{}", e.name, word_str(g, &w), a.name));
        }
    }
    for (v, seen) in x.reachable().into_iter().enumerate() {
        if !seen {
            bad("reachability", format!("{} is not reached from the start", x.vertices[v].name));
        }
    }
    if !out.is_empty() {
        return out;
    }

    for (vi, v) in x.vertices.iter().enumerate() {
        for oe in g.out_edges(v.vtype) {
            let labels: Vec<&YEdge> = x.out_edges(vi).map(|(_, e)| e).filter(|e| e.etype == oe).collect();
            let forbidden: Vec<Elem> =
                if x.needs_full_cover(g, vi, oe) { Vec::new() } else { g.emb0(oe).images.clone() };
            check_partition(g, v, oe, &labels, &forbidden, &mut out);
        }
    }
    check_actions(g, x, &mut out);
    out
}

fn check_partition(g: &GraphOfGroups, v: &YVertex, oe: OEdge, labels: &[&YEdge], forbidden: &[Elem], out: &mut Vec<Violation>) {
    let mut bad = |axiom, detail: String| out.push(Violation { axiom, detail });
    let tname = g.oedge_name(oe);
    let vs = v.vtype;
    if let Some(all) = g.group(vs).elements() {
        let sets: Vec<BTreeSet<Elem>> = labels.iter().map(|e| values::value_set(g, vs, &e.set).unwrap()).collect();
        let mut union = BTreeSet::new();
        for (i, s) in sets.iter().enumerate() {
            for x in s {
                if !union.insert(x.clone()) {
                    bad("disjointness", format!("{}: {} lies in two {} labels (second: {})", v.name, g.display_syllable(vs, x), tname, labels[i].name));
                }
            }
        }
        let want: BTreeSet<Elem> = all.into_iter().filter(|x| !forbidden.contains(x)).collect();
        for x in want.difference(&union) {
            bad("cover", format!("{}: {} is missed by the {} labels", v.name, g.display_syllable(vs, x), tname));
        }
        for x in union.difference(&want) {
            bad("cover", format!("{}: {} must not appear on {} labels", v.name, g.display_syllable(vs, x), tname));
        }
        return;
    }
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if let Some(w) = labels[i].set.and(&labels[j].set).shortest() {
                bad("disjointness", format!("{}: {} lies in {} and {}", v.name, word_str(g, &w), labels[i].name, labels[j].name));
            }
        }
    }
    let mut union = Dfa::empty(g.alphabet().len());
    for e in labels {
        union = union.or(&e.set);
    }
    let want = values::words_valued_outside(g, vs, &v.lang, forbidden);
    if let Some(w) = want.diff(&union).shortest() {
        bad("cover", format!("{}: {} is missed by the {} labels", v.name, word_str(g, &w), tname));
    }
    if let Some(w) = union.diff(&want).shortest() {
        bad("cover", format!("{}: {} must not appear on {} labels", v.name, word_str(g, &w), tname));
    }
}

pub(crate) fn inverse_in_table(t: &crate::vgroups::FiniteGroupTable, f: usize) -> usize {
    let id = t.validate().expect("validated table");
    (0..t.order()).find(|&y| t.mul(f, y) == id).expect("group")
}

/// Value sets of two labels related by x ↦ l·x·r inside G_V.
fn translated(g: &GraphOfGroups, v: VertexId, d: &Dfa, l: &[usize], r: &[usize]) -> Option<BTreeSet<Elem>> {
    let s = values::value_set(g, v, d)?;
    Some(s.iter().map(|x| g.vmul(v, &g.vmul(v, l, x), r)).collect())
}

fn check_actions(g: &GraphOfGroups, x: &YGraph, out: &mut Vec<Violation>) {
    let nv = x.vertices.len();
    let mut bad = |axiom, detail: String| out.push(Violation { axiom, detail });
    for (vi, v) in x.vertices.iter().enumerate() {
        for oe in g.out_edges(v.vtype) {
            for f in 0..g.edge_group_order(oe) {
                if !x.actions.iter().any(|a| a.vertex == vi && a.etype == oe && a.f == f) {
                    bad("action", format!("no action of {} at {} for {}", g.edge(oe).table.names[f], v.name, g.oedge_name(oe)));
                }
            }
        }
    }
    for a in &x.actions {
        let label = format!("action of {} at {}", g.edge(a.etype).table.names.get(a.f).map_or("?", |s| s), a.vertex);
        let mut sorted = a.perm.clone();
        sorted.sort_unstable();
        if a.vertex >= nv || a.f >= g.edge_group_order(a.etype) || sorted != (0..nv).collect::<Vec<_>>() {
            bad("action", format!("{label}: not a permutation of X"));
            continue;
        }
        let v = a.vertex;
        let vt = x.vertices[v].vtype;
        let moved: BTreeSet<usize> = x.out_edges(v).filter(|(_, e)| e.etype == a.etype).map(|(_, e)| e.to).collect();
        for (w, &pw) in a.perm.iter().enumerate() {
            if pw != w && !moved.contains(&w) {
                bad("action", format!("{label}: moves {} which is not one edge away", x.vertices[w].name));
            }
        }
        let d0 = &g.emb0(a.etype).images[a.f];
        let d1 = &g.emb1(a.etype).images[a.f];
        let d0inv = g.vinv(vt, d0);
        let finite_src = g.group(vt).elements().is_some();
        // S_{fe} = S_e·∂₀f⁻¹ on the E-edges out of v
        for (_, e) in x.out_edges(v).filter(|(_, e)| e.etype == a.etype) {
            let target = a.perm[e.to];
            let found = x.out_edges(v).any(|(_, e2)| {
                e2.etype == a.etype
                    && e2.to == target
                    && if finite_src {
                        translated(g, vt, &e.set, &[], &d0inv) == values::value_set(g, vt, &e2.set)
                    } else {
                        d0.is_empty() && e.set.language_eq(&e2.set)
                    }
            });
            if !found {
                bad("equivariance", format!("{label}: no edge to {} carrying S_{}·f⁻¹", x.vertices[target].name, e.name));
            }
        }
        // labels of moved vertices and the edges leaving them
        for &w in &moved {
            let pw = a.perm[w];
            let wt = x.vertices[w].vtype;
            if x.vertices[pw].class != x.vertices[w].class {
                bad("equivariance", format!("{label}: class of {} differs from {}", x.vertices[pw].name, x.vertices[w].name));
            }
            let finite_w = g.group(wt).elements().is_some();
            for (_, e) in x.out_edges(w) {
                let target = a.perm[e.to];
                let found = x.out_edges(pw).any(|(_, e2)| {
                    e2.etype == e.etype
                        && e2.to == target
                        && if finite_w {
                            translated(g, wt, &e.set, d1, &[]) == values::value_set(g, wt, &e2.set)
                        } else {
                            d1.is_empty() && e.set.language_eq(&e2.set)
                        }
                });
                if !found {
                    bad("equivariance", format!("{label}: no edge out of {} carrying f·S_{}", x.vertices[pw].name, e.name));
                }
            }
        }
    }
}

