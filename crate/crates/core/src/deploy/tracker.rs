//! The tracker machine: a lazily explored Dfa over A whose state after a word
//! w records which prefixes of L-words stay near the path of w.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::induced::{assemble, edge_order, edge_letter};
use super::visible::VisibleMachine;
use super::DeployError;
use crate::fsa::{Dfa, Sym};
use crate::gog::{GraphOfGroups, HatEdge, Metric, NormalForm, OEdge};

/// What the last letter of a visible prefix was.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    /// the empty prefix, read as ending in the base edge
    Base,
    Edge(OEdge),
    Letter,
}

/// A point of the K-ball (relative to the end of the word read) mapped to
/// the visible states and markers of L-prefixes ending there.
pub type TrackerState = BTreeMap<NormalForm, BTreeSet<(u32, Marker)>>;

pub struct TrackerMachine<'a> {
    g: &'a GraphOfGroups,
    vm: &'a VisibleMachine,
    metric: Metric<'a>,
    states: Vec<TrackerState>,
    ids: HashMap<TrackerState, u32>,
    trans: HashMap<(u32, Sym), u32>,
    cap: usize,
}

/// Per edge of Ŷ, the report of a tracker state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackerReport {
    pub edge: HatEdge,
    /// S_{h∂₁f} indexed by f
    pub sets: Vec<BTreeSet<u32>>,
}

impl TrackerReport {
    /// The tracker's verdict on h ∈ 𝒢_E.
    pub fn member(&self) -> bool {
        self.sets.iter().any(|s| !s.is_empty())
    }
}

impl<'a> TrackerMachine<'a> {
    /// `k` is the ball radius; `node_cap` bounds the ball, `state_cap` the
    /// number of tracker states materialized.
    pub fn new(g: &'a GraphOfGroups, vm: &'a VisibleMachine, k: usize, node_cap: usize, state_cap: usize) -> Result<Self, DeployError> {
        let metric = Metric::new(g, k, node_cap)?;
        let mut t = TrackerMachine { g, vm, metric, states: Vec::new(), ids: HashMap::new(), trans: HashMap::new(), cap: state_cap };
        let seed = vec![(g.identity(), vm.start(), Marker::Base)];
        let mut sigma = TrackerState::new();
        for (p, s, m) in t.closure(seed, None) {
            sigma.entry(p).or_default().insert((s, m));
        }
        t.intern(sigma)?;
        Ok(t)
    }

    pub fn start(&self) -> u32 {
        0
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, q: u32) -> &TrackerState {
        &self.states[q as usize]
    }

    fn intern(&mut self, s: TrackerState) -> Result<u32, DeployError> {
        if let Some(&q) = self.ids.get(&s) {
            return Ok(q);
        }
        if self.states.len() >= self.cap {
            return Err(DeployError::StateCap(self.cap));
        }
        let q = self.states.len() as u32;
        self.ids.insert(s.clone(), q);
        self.states.push(s);
        Ok(q)
    }

    fn inside(&self, p: &NormalForm, shift: Option<&NormalForm>) -> bool {
        self.metric.ball().get(p).is_some() || shift.is_some_and(|a| self.metric.ball().get(&self.g.multiply(a, p)).is_some())
    }

    /// Every visible continuation of the seeds that stays in B, or in B ∪ aB
    /// when `shift` is a⁻¹.
    fn closure(&self, seeds: Vec<(NormalForm, u32, Marker)>, shift: Option<&NormalForm>) -> BTreeSet<(NormalForm, u32, Marker)> {
        let vm = self.vm;
        let mut seen: BTreeSet<(NormalForm, u32, Marker)> = seeds.iter().cloned().collect();
        let mut queue: VecDeque<_> = seeds.into();
        while let Some((p, q, _)) = queue.pop_front() {
            for s in 0..vm.vis.nletters() {
                let Some(q2) = vm.dfa.next(q, s) else { continue };
                let (p2, m2) = match vm.vis.edge_of(s) {
                    None => (if s == crate::vgroups::E { p.clone() } else { self.g.mul_letter(&p, s) }, Marker::Letter),
                    Some(oe) if s < vm.vis.base => (self.g.mul_letter(&p, s), Marker::Edge(oe)),
                    Some(oe) => (p.clone(), Marker::Edge(oe)),
                };
                if !self.inside(&p2, shift) {
                    continue;
                }
                let node = (p2, q2, m2);
                if seen.insert(node.clone()) {
                    queue.push_back(node);
                }
            }
        }
        seen
    }

    pub fn step(&mut self, q: u32, a: Sym) -> Result<u32, DeployError> {
        if let Some(&p) = self.trans.get(&(q, a)) {
            return Ok(p);
        }
        let g = self.g;
        let ainv = g.normal_form(&[g.alphabet().inverse(a)]);
        let seeds: Vec<_> = self.states[q as usize].iter().flat_map(|(p, set)| set.iter().map(move |&(s, m)| (p.clone(), s, m))).collect();
        let mut next = TrackerState::new();
        for (p, s, m) in self.closure(seeds, Some(&ainv)) {
            let rel = g.multiply(&ainv, &p);
            if self.metric.ball().get(&rel).is_some() {
                next.entry(rel).or_default().insert((s, m));
            }
        }
        let p = self.intern(next)?;
        self.trans.insert((q, a), p);
        Ok(p)
    }

    pub fn run(&mut self, w: &[Sym]) -> Result<u32, DeployError> {
        let mut q = self.start();
        for &a in w {
            q = self.step(q, a)?;
        }
        Ok(q)
    }

    /// S_{h∂₁f} for each f, h the value of the word that reached `q`.
    pub fn report(&self, q: u32, e: HatEdge) -> TrackerReport {
        let st = &self.states[q as usize];
        let marker = match e {
            HatEdge::Base => Marker::Base,
            HatEdge::E(oe) => Marker::Edge(oe),
        };
        let sets = (0..edge_order(self.g, e))
            .map(|f| {
                let at = self.g.normal_form(&[edge_letter(self.g, e, f)]);
                st.get(&at).map_or_else(BTreeSet::new, |set| set.iter().filter(|(_, m)| *m == marker).map(|&(s, _)| s).collect())
            })
            .collect();
        TrackerReport { edge: e, sets }
    }

    /// L_h as reported after reading `w`, or `None` if the tracker places
    /// the value of `w` outside 𝒢_E.
    pub fn induced(&mut self, w: &[Sym], e: HatEdge) -> Result<Option<Dfa>, DeployError> {
        let q = self.run(w)?;
        let r = self.report(q, e);
        Ok(r.member().then(|| assemble(self.vm, self.g, e, &r.sets)))
    }

    /// The explored part as a Dfa over A (every state accepts).
    pub fn explored(&self) -> Dfa {
        let n = self.g.alphabet().len();
        let mut d = Dfa::empty(n);
        d.set_accept(0, true);
        for _ in 1..self.states.len() {
            d.add_state(true);
        }
        for (&(q, a), &p) in &self.trans {
            d.set(q, a, p);
        }
        d
    }
}
