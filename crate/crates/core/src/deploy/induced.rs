//! The state sets S_h and the induced languages N_h, L_h.
//!
//! Only the single-syllable languages L_h are exposed. The suffix languages
//! L^{E,h} (everything after the last t_E, further edges included) are
//! never built.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::visible::{VisibleMachine, SYLLABLE_SLACK};
use super::DeployError;
use crate::fsa::{Dfa, Nfa, Sym};
use crate::gog::{GraphOfGroups, HatEdge, NormalForm, VertexId};
use crate::vgroups::{Elem, E};

/// Elements f of F_E in table order; the base edge has the trivial group.
pub fn edge_order(g: &GraphOfGroups, e: HatEdge) -> usize {
    match e {
        HatEdge::Base => 1,
        HatEdge::E(oe) => g.edge_group_order(oe),
    }
}

/// Letter standing for f ∈ F_E at ∂₁E (`e` for the identity).
pub fn edge_letter(g: &GraphOfGroups, e: HatEdge, f: usize) -> Sym {
    match e {
        HatEdge::Base => E,
        HatEdge::E(oe) => g.alphabet().edge_letters(oe)[f],
    }
}

/// S_{h·∂₁f} for every f ∈ F_E, indexed by f.
///
/// Breadth-first search over (state, syllable index, syllable value so far)
/// along the padded form of h; only prefixes whose value stays on the
/// syllables of h are followed.
pub fn coset_state_sets(vm: &VisibleMachine, g: &GraphOfGroups, e: HatEdge, h: &NormalForm) -> Result<Vec<BTreeSet<u32>>, DeployError> {
    let HatEdge::E(oe) = e else {
        if !h.is_identity() {
            return Err(DeployError::NotInClass(g.format_nf(h)));
        }
        return Ok(vec![BTreeSet::from([vm.start()])]);
    };
    let p = g.padded_form(h, e).ok_or_else(|| DeployError::NotInClass(g.format_nf(h)))?;
    let m = p.len();
    let order = g.edge_group_order(oe);
    let mut out = vec![BTreeSet::new(); order];
    let gm_inv = g.vinv(g.dst(oe), p.last_syllable());
    let vertex = |i: usize| g.syllable_vertex(&p, i);
    let bound = |i: usize| -> usize {
        let next = if i < m { p.steps[i].0 } else { oe };
        let longest = g.emb0(next).images.iter().map(Vec::len).max().unwrap_or(0);
        p.syllable(i).len() + longest + SYLLABLE_SLACK
    };
    let ab = g.alphabet();
    let start = (vm.start(), 0usize, Elem::new());
    let mut seen: HashSet<(u32, usize, Elem)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((q, i, acc)) = queue.pop_front() {
        let v = vertex(i);
        let finite = g.group(v).elements().is_some();
        for s in 0..vm.vis.nletters() {
            let Some(q2) = vm.dfa.next(q, s) else { continue };
            let node = match vm.vis.edge_of(s) {
                None => {
                    let Some(la) = ab.local_at(s, v) else { continue };
                    let acc2 = if la == E { acc.clone() } else { g.vmul(v, &acc, &[la]) };
                    if !finite && acc2.len() > bound(i) {
                        continue;
                    }
                    (q2, i, acc2)
                }
                Some(step) => {
                    if i >= m || step != p.steps[i].0 {
                        continue;
                    }
                    let rel = g.vmul(v, &g.vinv(v, p.syllable(i)), &acc);
                    let Some(f) = g.emb0(step).preimage(&rel) else { continue };
                    let landing = g.emb1(step).images[f].clone();
                    if i + 1 == m {
                        // prefix value is h · g_m⁻¹ · ∂₁(f)
                        let c = g.vmul(g.dst(oe), &gm_inv, &landing);
                        let f2 = g.emb1(oe).preimage(&c).expect("g_m lies in the edge image");
                        out[f2].insert(q2);
                        continue;
                    }
                    (q2, i + 1, landing)
                }
            };
            if seen.insert(node.clone()) {
                queue.push_back(node);
            }
        }
    }
    Ok(out)
}

/// S_h for one h ∈ 𝒢_E.
pub fn state_sets(vm: &VisibleMachine, g: &GraphOfGroups, e: HatEdge, h: &NormalForm) -> Result<BTreeSet<u32>, DeployError> {
    Ok(coset_state_sets(vm, g, e, h)?.swap_remove(0))
}

/// Letters of A_v other than stable letters, as a mask over the visible
/// alphabet.
fn vertex_mask(vm: &VisibleMachine, g: &GraphOfGroups, v: VertexId) -> Vec<bool> {
    (0..vm.vis.nletters()).map(|s| vm.vis.edge_of(s).is_none() && g.alphabet().local_at(s, v).is_some()).collect()
}

/// N_h from its state set: syllables over A_{∂₁E} read from S_h that end
/// where the word may stop or cross another edge.
pub fn syllable_language(vm: &VisibleMachine, g: &GraphOfGroups, e: HatEdge, starts: &BTreeSet<u32>) -> Dfa {
    let base = vm.vis.base;
    let mask = vertex_mask(vm, g, g.hat_dst(e));
    let mut n = Nfa::new(base);
    for q in 0..vm.num_states() as u32 {
        n.add_state(vm.dfa.is_accept(q) || vm.continues(q));
    }
    for (q, s, p) in vm.dfa.transitions() {
        if mask[s] {
            n.add(q, Some(s), p);
        }
    }
    for &q in starts {
        n.add_start(q);
    }
    n.determinize().minimize()
}

/// L_h = ⋃_f f·N_{h∂₁f} from the coset's state sets.
pub fn assemble(vm: &VisibleMachine, g: &GraphOfGroups, e: HatEdge, sets: &[BTreeSet<u32>]) -> Dfa {
    let base = vm.vis.base;
    let mut out = Dfa::empty(base);
    for (f, s) in sets.iter().enumerate() {
        let lead = Dfa::from_words(base, [vec![edge_letter(g, e, f)]].iter());
        out = out.or(&lead.concat(&syllable_language(vm, g, e, s)));
    }
    out.minimize()
}

pub fn induced_language(vm: &VisibleMachine, g: &GraphOfGroups, e: HatEdge, h: &NormalForm) -> Result<Dfa, DeployError> {
    Ok(assemble(vm, g, e, &coset_state_sets(vm, g, e, h)?))
}

/// f ⋆ L: the leading letter f′ of every word becomes the letter of f·f′.
/// With this action L_h = f ⋆ L_{h∂₁f}.
pub fn translate(g: &GraphOfGroups, e: HatEdge, f: usize, l: &Dfa) -> Dfa {
    let HatEdge::E(oe) = e else { return l.clone() };
    let t = &g.edge(oe).table;
    let mut d = l.clone();
    let s = d.add_state(false);
    for f2 in 0..t.order() {
        if let Some(p) = l.next(l.start(), edge_letter(g, e, f2)) {
            d.set(s, edge_letter(g, e, t.mul(f, f2)), p);
        }
    }
    d.set_start(s);
    d.minimize()
}

/// Remove every `e` from the words of a language.
pub fn erase_identity(l: &Dfa) -> Dfa {
    let map: Vec<Option<Sym>> = (0..l.nletters()).map(|s| (s != E).then_some(s)).collect();
    l.relabel(&map, l.nletters()).determinize().minimize()
}
