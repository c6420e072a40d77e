//! Deployments read off a structure: ψ(h) = [L_h] at each tree position.

use std::collections::BTreeMap;

use super::induced::{edge_letter, edge_order, translate};
use super::tracker::TrackerMachine;
use super::visible::VisibleMachine;
use super::DeployError;
use crate::fsa::Dfa;
use crate::gog::{GraphOfGroups, HatEdge, NormalForm};
use crate::vgroups::Elem;
use crate::ygraph::{values, StructureHandle, YGraph};

/// A tree position: an edge of Ŷ and h ∈ 𝒢_E.
pub type Position = (HatEdge, NormalForm);

#[derive(Clone, Debug)]
pub struct DeployEntry {
    pub class: String,
    /// X-vertices reached by the position, when the structure came from a
    /// Y-graph
    pub xverts: Vec<usize>,
    /// minimized L_h over A
    pub lang: Dfa,
}

/// ψ_L, evaluated lazily through the tracker machine.
pub struct Deployment<'a> {
    g: &'a GraphOfGroups,
    vm: &'a VisibleMachine,
    origin: Option<YGraph>,
    tracker: TrackerMachine<'a>,
    cache: BTreeMap<Position, DeployEntry>,
    /// distinct languages met so far, for labels when there is no origin
    seen: Vec<Dfa>,
}

/// Tracker parameters for [`deployment_of`].
#[derive(Clone, Copy, Debug)]
pub struct DeployOptions {
    pub k: usize,
    pub node_cap: usize,
    pub state_cap: usize,
}

impl Default for DeployOptions {
    fn default() -> Self {
        DeployOptions { k: 2, node_cap: crate::gog::DEFAULT_NODE_CAP, state_cap: 100_000 }
    }
}

pub fn deployment_of<'a>(
    g: &'a GraphOfGroups,
    vm: &'a VisibleMachine,
    l: &StructureHandle,
    opts: DeployOptions,
) -> Result<Deployment<'a>, DeployError> {
    Ok(Deployment {
        g,
        vm,
        origin: l.origin.clone(),
        tracker: TrackerMachine::new(g, vm, opts.k, opts.node_cap, opts.state_cap)?,
        cache: BTreeMap::new(),
        seen: Vec::new(),
    })
}

/// The X-vertex a path for h ends at: syllable sets are followed along the
/// padded form of h, carrying the edge-group correction, and the vertex
/// reached with correction g_m is the one for h itself.
pub fn trace_position(g: &GraphOfGroups, x: &YGraph, e: HatEdge, h: &NormalForm) -> Option<Vec<usize>> {
    let p = match e {
        HatEdge::Base => return h.is_identity().then(|| vec![x.start]),
        HatEdge::E(_) => g.padded_form(h, e)?,
    };
    let mut layer: Vec<(usize, Elem)> = vec![(x.start, Elem::new())];
    for i in 0..p.len() {
        let (oe, v) = (p.steps[i].0, g.syllable_vertex(&p, i));
        let gi_inv = g.vinv(v, p.syllable(i));
        let mut next = Vec::new();
        for (xv, c) in &layer {
            for (_, ye) in x.out_edges(*xv).filter(|(_, ye)| ye.etype == oe) {
                for val in values::value_set(g, v, &ye.set)? {
                    let rel = g.vmul(v, &gi_inv, &g.vmul(v, c, &val));
                    if let Some(f) = g.emb0(oe).preimage(&rel) {
                        next.push((ye.to, g.emb1(oe).images[f].clone()));
                    }
                }
            }
        }
        next.sort();
        next.dedup();
        layer = next;
    }
    let mut out: Vec<usize> = layer.into_iter().filter(|(_, c)| c == p.last_syllable()).map(|(v, _)| v).collect();
    out.sort_unstable();
    out.dedup();
    Some(out)
}

impl<'a> Deployment<'a> {
    pub fn cache(&self) -> &BTreeMap<Position, DeployEntry> {
        &self.cache
    }

    pub fn tracker_states(&self) -> usize {
        self.tracker.num_states()
    }

    fn label(&mut self, e: HatEdge, h: &NormalForm, lang: &Dfa) -> (String, Vec<usize>) {
        if let Some(x) = &self.origin {
            if let Some(vs) = trace_position(self.g, x, e, h) {
                if !vs.is_empty() {
                    let mut names: Vec<&str> = vs.iter().map(|&v| x.vertices[v].class.as_str()).collect();
                    names.dedup();
                    return (names.join("|"), vs);
                }
            }
        }
        let i = match self.seen.iter().position(|d| d.language_eq(lang)) {
            Some(i) => i,
            None => {
                self.seen.push(lang.clone());
                self.seen.len() - 1
            }
        };
        (format!("L{i}"), Vec::new())
    }

    /// ψ(h) at (E, h).
    pub fn at(&mut self, e: HatEdge, h: &NormalForm) -> Result<DeployEntry, DeployError> {
        let key = (e, h.clone());
        if let Some(d) = self.cache.get(&key) {
            return Ok(d.clone());
        }
        if g_e_member(self.g, e, h).is_none() {
            return Err(DeployError::NotInClass(self.g.format_nf(h)));
        }
        let w = self.g.to_word(h);
        let lang = self
            .tracker
            .induced(&w, e)?
            .ok_or_else(|| DeployError::TrackerMiss(format!("{} at {}", self.g.format_nf(h), self.g.hat_edge_name(e))))?;
        let (class, xverts) = self.label(e, h, &lang);
        let entry = DeployEntry { class, xverts, lang };
        self.cache.insert(key, entry.clone());
        Ok(entry)
    }

    /// Positions (E, h, f) where L_h ≠ f ⋆ L_{h∂₁f}, over all positions
    /// cached when called. Evaluating the translates grows the cache.
    pub fn check_equivariance(&mut self) -> Result<Vec<(Position, usize)>, DeployError> {
        let keys: Vec<Position> = self.cache.keys().cloned().collect();
        let mut bad = Vec::new();
        for (e, h) in keys {
            let lh = self.cache[&(e, h.clone())].lang.clone();
            for f in 0..edge_order(self.g, e) {
                let hf = self.g.mul_letter(&h, edge_letter(self.g, e, f));
                let lhf = self.at(e, &hf)?.lang;
                if !translate(self.g, e, f, &lhf).language_eq(&lh) {
                    bad.push(((e, h.clone()), f));
                }
            }
        }
        Ok(bad)
    }

    /// Number of distinct languages among cached positions.
    pub fn distinct_languages(&self) -> usize {
        distinct(self.cache.values().map(|d| &d.lang))
    }

    /// Number of distinct pairs (E, L_h up to the F_E action) among cached
    /// positions.
    pub fn orbit_count(&self) -> usize {
        let mut reps: Vec<(HatEdge, &Dfa)> = Vec::new();
        for ((e, _), d) in &self.cache {
            let same = |(e2, l2): &(HatEdge, &Dfa)| {
                *e2 == *e && (0..edge_order(self.g, *e)).any(|f| translate(self.g, *e, f, &d.lang).language_eq(l2))
            };
            if !reps.iter().any(same) {
                reps.push((*e, &d.lang));
            }
        }
        reps.len()
    }

    /// Size of the image of ψ on cached positions: X-vertex orbits reached
    /// when the structure has a Y-graph origin, else [`Self::orbit_count`].
    ///
    /// Exact languages can over-count: letters shared across a tree edge
    /// may sit on either side of the crossing, so positions in one orbit can
    /// carry equivalent but unequal L_h.
    pub fn image_size(&self) -> usize {
        let Some(x) = &self.origin else { return self.orbit_count() };
        let orbit = x_orbits(x);
        let mut seen: Vec<usize> = self.cache.values().flat_map(|d| d.xverts.iter().map(|&v| orbit[v])).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn visible(&self) -> &VisibleMachine {
        self.vm
    }
}

/// Orbit representative of each X-vertex under the edge-group actions.
fn x_orbits(x: &YGraph) -> Vec<usize> {
    let mut rep: Vec<usize> = (0..x.vertices.len()).collect();
    fn find(rep: &mut [usize], a: usize) -> usize {
        let mut r = a;
        while rep[r] != r {
            r = rep[r];
        }
        rep[a] = r;
        r
    }
    for a in &x.actions {
        for (i, &j) in a.perm.iter().enumerate() {
            let (ri, rj) = (find(&mut rep, i), find(&mut rep, j));
            rep[ri.max(rj)] = ri.min(rj);
        }
    }
    (0..rep.len()).map(|i| find(&mut rep, i)).collect()
}

/// The padded form of h ending in E, if h ∈ 𝒢_E.
pub fn g_e_member(g: &GraphOfGroups, e: HatEdge, h: &NormalForm) -> Option<NormalForm> {
    g.padded_form(h, e)
}

/// Count of pairwise language-inequivalent automata.
pub fn distinct<'b>(ls: impl IntoIterator<Item = &'b Dfa>) -> usize {
    let mut reps: Vec<&Dfa> = Vec::new();
    for l in ls {
        if !reps.iter().any(|r| r.language_eq(l)) {
            reps.push(l);
        }
    }
    reps.len()
}
