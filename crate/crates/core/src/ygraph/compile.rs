use std::collections::HashMap;

use super::{build::cells, values, YGraph, YGraphError};
use crate::fsa::{prohibit_subwords, Dfa, Gfsa, Sym, Word};
use crate::gog::{GraphOfGroups, OEdge};

/// The convenient alphabet extended by one visible letter r_E per oriented
/// tree edge. Non-tree edges use their stable letters.
#[derive(Clone, Debug)]
pub struct Visible {
    pub base: usize,
    /// letter standing for each oriented edge
    pub sym: Vec<Sym>,
    edge_of: Vec<Option<OEdge>>,
}

impl Visible {
    pub fn new(g: &GraphOfGroups) -> Self {
        let base = g.alphabet().len();
        let mut sym = Vec::new();
        let mut edge_of = vec![None; base];
        for oe in 0..g.num_oedges() {
            match g.alphabet().stable(oe) {
                Some(t) => {
                    sym.push(t);
                    edge_of[t] = Some(oe);
                }
                None => {
                    sym.push(edge_of.len());
                    edge_of.push(Some(oe));
                }
            }
        }
        Visible { base, sym, edge_of }
    }

    pub fn nletters(&self) -> usize {
        self.edge_of.len()
    }

    pub fn edge_of(&self, s: Sym) -> Option<OEdge> {
        self.edge_of[s]
    }

    /// Drops the tree letters.
    pub fn erase_map(&self) -> Vec<Option<Sym>> {
        (0..self.nletters()).map(|s| (s < self.base).then_some(s)).collect()
    }

    pub fn lift(&self, d: &Dfa) -> Dfa {
        let map: Vec<Sym> = (0..self.base).collect();
        d.embed(&map, self.nletters())
    }

    pub fn erase(&self, d: &Dfa) -> Dfa {
        d.relabel(&self.erase_map(), self.base).determinize()
    }

    pub fn name(&self, g: &GraphOfGroups, s: Sym) -> String {
        if s < self.base {
            g.alphabet().name(s).to_string()
        } else {
            format!("r_{}", g.oedge_name(self.edge_of[s].expect("tree letter")))
        }
    }
}

/// L_𝒳 with its provenance.
#[derive(Clone, Debug)]
pub struct StructureHandle {
    pub dfa: Dfa,
    pub origin: Option<YGraph>,
    pub route: String,
}

impl StructureHandle {
    pub fn from_dfa(dfa: Dfa) -> Self {
        StructureHandle { dfa: dfa.minimize(), origin: None, route: "given".into() }
    }
}

/// Final syllables at `v` that no out-edge label or ε already supplies.
fn final_gaps(g: &GraphOfGroups, x: &YGraph, v: usize) -> Dfa {
    let vx = &x.vertices[v];
    let mut covered = Dfa::epsilon(g.alphabet().len());
    for (_, e) in x.out_edges(v) {
        covered = covered.or(&e.set);
    }
    vx.lang.diff(&covered)
}

/// Subdivide each edge into a syllable half labelled S_e and a half labelled
/// by the visible letter of π(e). All states accept; final syllables not
/// already covered by a label go to one extra state.
pub fn language_gfsa(g: &GraphOfGroups, x: &YGraph) -> Result<Gfsa, YGraphError> {
    let vis = Visible::new(g);
    let mut m = Gfsa::new(vis.nletters());
    for _ in &x.vertices {
        m.add_state(true);
    }
    m.add_start(x.start as u32);
    let mut sink = None;
    for (v, _) in x.vertices.iter().enumerate() {
        let gaps = final_gaps(g, x, v);
        if !gaps.is_empty() {
            let s = *sink.get_or_insert_with(|| m.add_state(true));
            let l = m.add_label(vis.lift(&gaps))?;
            m.add_edge(v as u32, l, s);
        }
    }
    for e in &x.edges {
        if e.set.is_empty() {
            continue;
        }
        let mid = m.add_state(true);
        let l = m.add_label(vis.lift(&e.set))?;
        m.add_edge(e.from as u32, l, mid);
        let t = m.add_label(Dfa::from_words(vis.nletters(), [vec![vis.sym[e.etype]]].iter()))?;
        m.add_edge(mid, t, e.to as u32);
    }
    Ok(m)
}

/// A compilation of a Y-graph to a Dfa for L_𝒳 over the convenient alphabet.
pub trait CompileRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn compile(&self, g: &GraphOfGroups, x: &YGraph) -> Result<Dfa, YGraphError>;
}

/// Expand the subdivided Gfsa, forbid t_E u t_E⁻¹ with ū ∈ ∂₁F_E, erase tree
/// letters.
struct Prohibit;

impl CompileRoute for Prohibit {
    fn name(&self) -> &'static str {
        "prohibit"
    }

    fn compile(&self, g: &GraphOfGroups, x: &YGraph) -> Result<Dfa, YGraphError> {
        let vis = Visible::new(g);
        let visible = language_gfsa(g, x)?.expand().determinize();
        let mut bad: Vec<Word> = Vec::new();
        for oe in 0..g.num_oedges() {
            let (s, t) = (vis.sym[oe], vis.sym[g.inv(oe)]);
            bad.push(vec![s, t]);
            let mut us: Vec<Sym> = g.alphabet().edge_letters(oe).to_vec();
            us.sort_unstable();
            us.dedup();
            bad.extend(us.into_iter().map(|u| vec![s, u, t]));
        }
        Ok(vis.erase(&prohibit_subwords(&visible, &bad)).minimize())
    }
}

/// Two entry states per (vertex, incoming type): syllables valued in ∂₁F_E
/// lose the E⁻¹ edges.
struct TwoCopy;

impl CompileRoute for TwoCopy {
    fn name(&self) -> &'static str {
        "bx"
    }

    fn compile(&self, g: &GraphOfGroups, x: &YGraph) -> Result<Dfa, YGraphError> {
        Ok(two_copy(g, x, None)?.minimize())
    }
}

/// Incoming type of an entry state; `None` for the start.
type Entry = (usize, Option<OEdge>);

/// The split-entry machine. With `sync`, non-final syllables are cut down to
/// coset minima and final syllables in ∂₁F_E after a tree edge are dropped.
fn two_copy(g: &GraphOfGroups, x: &YGraph, sync: Option<&HashMap<OEdge, Dfa>>) -> Result<Dfa, YGraphError> {
    let n = g.alphabet().len();
    let mut m = Gfsa::new(n);
    let sink = m.add_state(true);
    let mut ids: HashMap<Entry, u32> = HashMap::new();
    let mut todo: Vec<Entry> = vec![(x.start, None)];
    let q0 = m.add_state(false);
    ids.insert((x.start, None), q0);
    m.add_start(q0);
    let pinched = |v: usize, inc: Option<OEdge>, d: &Dfa| -> Dfa {
        match inc {
            Some(ie) => values::words_valued_in(g, x.vertices[v].vtype, d, &g.emb1(ie).images),
            None => Dfa::empty(n),
        }
    };
    while let Some((v, inc)) = todo.pop() {
        let q = ids[&(v, inc)];
        let vx = &x.vertices[v];
        let mut fin = vx.lang.clone();
        if let (Some(_), Some(ie)) = (sync, inc) {
            if g.is_tree(ie) {
                fin = fin.diff(&pinched(v, inc, &fin));
            }
        }
        if !fin.is_empty() {
            let l = m.add_label(fin)?;
            m.add_edge(q, l, sink);
        }
        for (_, e) in x.out_edges(v) {
            let mut set = e.set.clone();
            if let Some(mins) = sync {
                set = set.and(&mins[&e.etype]);
            }
            let p = pinched(v, inc, &set);
            let free = set.diff(&p);
            let blocked = inc.is_some_and(|ie| e.etype == g.inv(ie));
            let parts = if blocked { vec![free] } else { vec![free, p] };
            let key = (e.to, Some(e.etype));
            for part in parts {
                if part.is_empty() {
                    continue;
                }
                let target = *ids.entry(key).or_insert_with(|| {
                    todo.push(key);
                    m.add_state(false)
                });
                let mid = m.add_state(false);
                let l = m.add_label(part)?;
                m.add_edge(q, l, mid);
                let t = match g.alphabet().stable(e.etype) {
                    Some(t) => Dfa::from_words(n, [vec![t]].iter()),
                    None => Dfa::epsilon(n),
                };
                let l = m.add_label(t)?;
                m.add_edge(mid, l, target);
            }
        }
    }
    Ok(m.expand().determinize())
}

pub struct RouteRegistry {
    routes: Vec<Box<dyn CompileRoute>>,
}

impl Default for RouteRegistry {
    fn default() -> Self {
        RouteRegistry { routes: vec![Box::new(Prohibit), Box::new(TwoCopy)] }
    }
}

impl RouteRegistry {
    pub fn register(&mut self, r: Box<dyn CompileRoute>) {
        self.routes.push(r);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.iter().map(|r| r.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn CompileRoute> {
        self.routes.iter().find(|r| r.name() == name).map(|r| r.as_ref())
    }
}

pub fn language_dfa(g: &GraphOfGroups, x: &YGraph) -> Result<StructureHandle, YGraphError> {
    language_dfa_via(g, x, "prohibit")
}

pub fn language_dfa_via(g: &GraphOfGroups, x: &YGraph, route: &str) -> Result<StructureHandle, YGraphError> {
    let reg = RouteRegistry::default();
    let r = reg.get(route).ok_or_else(|| YGraphError::UnknownRoute(route.to_string()))?;
    Ok(StructureHandle { dfa: r.compile(g, x)?, origin: Some(x.clone()), route: route.to_string() })
}

/// The sublanguage of L_𝒳 whose non-final syllables are shortlex coset
/// representatives and whose decompositions carry no trivial tree tail.
pub fn synchronize(g: &GraphOfGroups, x: &YGraph) -> Result<StructureHandle, YGraphError> {
    for v in &x.vertices {
        if !g.group(v.vtype).unique() {
            return Err(YGraphError::Unsupported(format!("vertex {} lacks a unique structure", v.name)));
        }
    }
    let mut mins = HashMap::new();
    for oe in 0..g.num_oedges() {
        mins.insert(oe, cells(g, oe)?.dfas.swap_remove(0));
    }
    let dfa = two_copy(g, x, Some(&mins))?.minimize();
    Ok(StructureHandle { dfa, origin: Some(x.clone()), route: "sync".into() })
}
