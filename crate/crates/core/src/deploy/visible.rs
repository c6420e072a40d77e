//! L with its edge-path decompositions made visible.

use std::collections::{HashMap, VecDeque};

use super::DeployError;
use crate::fsa::{Dfa, Sym, Word};
use crate::gog::{GraphOfGroups, OEdge, VertexId};
use crate::vgroups::{Elem, E};
use crate::ygraph::Visible;

/// Extra length allowed on syllables in infinite vertex groups beyond the
/// longest edge-group image.
pub const SYLLABLE_SLACK: usize = 4;

/// Bookkeeping of one state of the visible machine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VState {
    pub lstate: u32,
    pub vertex: VertexId,
    /// edge crossed last; `None` in the first syllable
    pub last: Option<OEdge>,
    /// value of the current syllable; `None` once it is longer than the
    /// syllable cap of an infinite vertex group
    pub value: Option<Elem>,
}

/// Words of L interleaved with edge letters so that every accepted visible
/// word spells a reduced edge-path decomposition.
///
/// A stable letter is its own edge letter; tree edges get the extra letters
/// of [`Visible`]. All states are co-reachable.
#[derive(Clone, Debug)]
pub struct VisibleMachine {
    pub vis: Visible,
    pub dfa: Dfa,
    pub info: Vec<VState>,
}

fn syllable_cap(g: &GraphOfGroups) -> usize {
    let longest = (0..g.num_oedges()).flat_map(|oe| g.emb1(oe).images.iter().map(|x| x.len())).max().unwrap_or(0);
    longest + SYLLABLE_SLACK
}

impl VisibleMachine {
    pub fn new(g: &GraphOfGroups, l: &Dfa, cap: usize) -> Result<Self, DeployError> {
        let vis = Visible::new(g);
        let n = vis.nletters();
        let ab = g.alphabet();
        let scap = syllable_cap(g);
        let start = VState { lstate: l.start(), vertex: g.base(), last: None, value: Some(Vec::new()) };
        let mut ids: HashMap<VState, u32> = HashMap::from([(start.clone(), 0)]);
        let mut info = vec![start];
        let mut edges: Vec<(u32, Sym, VState)> = Vec::new();
        let mut trans: Vec<Vec<(Sym, u32)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0u32]);
        while let Some(q) = queue.pop_front() {
            let st = info[q as usize].clone();
            for s in 0..n {
                let nxt = match vis.edge_of(s) {
                    None => {
                        let (Some(la), Some(lq)) = (ab.local_at(s, st.vertex), l.next(st.lstate, s)) else { continue };
                        let value = match (&st.value, la == E) {
                            (v, true) => v.clone(),
                            (None, false) => None,
                            (Some(x), false) => {
                                let y = g.vmul(st.vertex, x, &[la]);
                                let finite = g.group(st.vertex).elements().is_some();
                                (finite || y.len() <= scap).then_some(y)
                            }
                        };
                        VState { lstate: lq, vertex: st.vertex, last: st.last, value }
                    }
                    Some(oe) => {
                        if g.src(oe) != st.vertex {
                            continue;
                        }
                        if let (Some(last), Some(x)) = (st.last, &st.value) {
                            if last == g.inv(oe) && g.emb1(last).contains(x) {
                                continue;
                            }
                        }
                        let lq = if s < vis.base {
                            match l.next(st.lstate, s) {
                                Some(p) => p,
                                None => continue,
                            }
                        } else {
                            st.lstate
                        };
                        VState { lstate: lq, vertex: g.dst(oe), last: Some(oe), value: Some(Vec::new()) }
                    }
                };
                edges.push((q, s, nxt));
                let len = info.len() as u32;
                let p = *ids.entry(edges.last().unwrap().2.clone()).or_insert(len);
                if p == len {
                    if info.len() >= cap {
                        return Err(DeployError::StateCap(cap));
                    }
                    info.push(edges.last().unwrap().2.clone());
                    trans.push(Vec::new());
                    queue.push_back(p);
                }
                trans[q as usize].push((s, p));
                edges.pop();
            }
        }
        let accept: Vec<bool> = info.iter().map(|st| l.is_accept(st.lstate)).collect();
        let mut flat = vec![u32::MAX; info.len() * n];
        for (q, row) in trans.iter().enumerate() {
            for &(s, p) in row {
                flat[q * n + s] = p;
            }
        }
        let raw = Dfa::from_parts(n, 0, accept, flat);
        let live = raw.coreachable();
        let mut id = vec![u32::MAX; info.len()];
        let mut kept = Vec::new();
        for (q, &ok) in live.iter().enumerate() {
            if ok || q == 0 {
                id[q] = kept.len() as u32;
                kept.push(q);
            }
        }
        let mut out = Dfa::from_parts(n, 0, kept.iter().map(|&q| raw.is_accept(q as u32)).collect(), vec![u32::MAX; kept.len() * n]);
        for (i, &q) in kept.iter().enumerate() {
            for s in 0..n {
                if let Some(p) = raw.next(q as u32, s) {
                    if id[p as usize] != u32::MAX {
                        out.set(i as u32, s, id[p as usize]);
                    }
                }
            }
        }
        let info = kept.iter().map(|&q| info[q].clone()).collect();
        Ok(VisibleMachine { vis, dfa: out, info })
    }

    pub fn start(&self) -> u32 {
        self.dfa.start()
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    /// States with an outgoing edge letter: the syllable read so far may be
    /// followed by another edge.
    pub fn continues(&self, q: u32) -> bool {
        (0..self.vis.nletters()).any(|s| self.vis.edge_of(s).is_some() && self.dfa.next(q, s).is_some())
    }
}

/// (**) for one word: syllables, the edges between them and where the cuts
/// fall in the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePathDecomposition {
    pub segments: Vec<Word>,
    pub edges: Vec<OEdge>,
    /// position in the word at which each edge is crossed; a stable letter
    /// sits at its cut position
    pub cuts: Vec<usize>,
}

impl EdgePathDecomposition {
    pub fn reassemble(&self, g: &GraphOfGroups) -> Word {
        let mut w = self.segments[0].clone();
        for (i, &oe) in self.edges.iter().enumerate() {
            if let Some(t) = g.alphabet().stable(oe) {
                w.push(t);
            }
            w.extend_from_slice(&self.segments[i + 1]);
        }
        w
    }

    pub fn display(&self, g: &GraphOfGroups) -> String {
        let mut parts = vec![g.alphabet().format_word(&self.segments[0])];
        for (i, &oe) in self.edges.iter().enumerate() {
            parts.push(g.oedge_name(oe));
            parts.push(g.alphabet().format_word(&self.segments[i + 1]));
        }
        format!("({})", parts.join("; "))
    }
}

/// Decomposition of an accepted word, or of a prefix of one. Each edge is
/// crossed as early as the reduced-path condition allows and no trivial tree
/// tail is appended.
pub fn edge_path_decompose(g: &GraphOfGroups, vm: &VisibleMachine, w: &[Sym]) -> Result<EdgePathDecomposition, DeployError> {
    // a word accepted by L must decompose to an accepting visible path; a
    // mere prefix only needs a live one
    let l_accepts = accepted_in_l(vm, w);
    let mut seen = std::collections::HashSet::new();
    let path = search(vm, w, 0, vm.start(), l_accepts, &mut seen).ok_or_else(|| DeployError::NotAccepted(g.alphabet().format_word(w)))?;
    let mut out = EdgePathDecomposition { segments: vec![Vec::new()], edges: Vec::new(), cuts: Vec::new() };
    let mut pos = 0;
    for s in path {
        match vm.vis.edge_of(s) {
            Some(oe) => {
                out.edges.push(oe);
                out.cuts.push(pos);
                out.segments.push(Vec::new());
                if s < vm.vis.base {
                    pos += 1;
                }
            }
            None => {
                out.segments.last_mut().unwrap().push(s);
                pos += 1;
            }
        }
    }
    Ok(out)
}

fn accepted_in_l(vm: &VisibleMachine, w: &[Sym]) -> bool {
    // L itself is not stored; any visible path for w ending in an accepting
    // state witnesses acceptance
    let mut seen = std::collections::HashSet::new();
    search(vm, w, 0, vm.start(), true, &mut seen).is_some()
}

fn search(vm: &VisibleMachine, w: &[Sym], pos: usize, q: u32, need_accept: bool, seen: &mut std::collections::HashSet<(usize, u32)>) -> Option<Vec<Sym>> {
    if pos == w.len() && (!need_accept || vm.dfa.is_accept(q)) {
        return Some(Vec::new());
    }
    if !seen.insert((pos, q)) {
        return None;
    }
    for s in vm.vis.base..vm.vis.nletters() {
        if let Some(p) = vm.dfa.next(q, s) {
            if let Some(mut rest) = search(vm, w, pos, p, need_accept, seen) {
                rest.insert(0, s);
                return Some(rest);
            }
        }
    }
    if pos < w.len() {
        if let Some(p) = vm.dfa.next(q, w[pos]) {
            if let Some(mut rest) = search(vm, w, pos + 1, p, need_accept, seen) {
                rest.insert(0, w[pos]);
                return Some(rest);
            }
        }
    }
    None
}
