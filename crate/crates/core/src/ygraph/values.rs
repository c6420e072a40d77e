//! Value bookkeeping for languages over a single vertex alphabet.

use std::collections::{BTreeSet, HashMap};

use crate::fsa::{Dfa, Sym, Word};
use crate::gog::{GraphOfGroups, VertexId};
use crate::vgroups::Elem;

/// Local spelling of a global word at `v`, or `None` if a letter is foreign.
pub fn localize(g: &GraphOfGroups, v: VertexId, w: &[Sym]) -> Option<Word> {
    w.iter().map(|&s| g.alphabet().local_at(s, v)).collect()
}

pub fn globalize_word(g: &GraphOfGroups, v: VertexId, w: &[Sym]) -> Word {
    w.iter().map(|&a| g.alphabet().global(v, a)).collect()
}

/// A Dfa over the local letters of `v` carried over to global letters.
pub fn globalize(g: &GraphOfGroups, v: VertexId, d: &Dfa) -> Dfa {
    let map: Vec<Sym> = (0..d.nletters()).map(|a| g.alphabet().global(v, a)).collect();
    d.embed(&map, g.alphabet().len())
}

/// The word acceptor of G_v over global letters.
pub fn vertex_language(g: &GraphOfGroups, v: VertexId) -> Dfa {
    globalize(g, v, g.group(v).acceptor())
}

/// Words of `d` spelling the given canonical elements.
fn canonical_words(g: &GraphOfGroups, v: VertexId, set: &[Elem]) -> Dfa {
    let words: Vec<Word> = set.iter().map(|x| globalize_word(g, v, x)).collect();
    Dfa::from_words(g.alphabet().len(), words.iter())
}

/// Cayley table of a finite vertex group, indexed by canonical element.
struct Table {
    elems: Vec<Elem>,
    index: HashMap<Elem, usize>,
    /// step[x][global letter]
    step: Vec<Vec<Option<usize>>>,
}

fn table(g: &GraphOfGroups, v: VertexId) -> Option<Table> {
    let grp = g.group(v);
    let elems = grp.elements()?;
    let index: HashMap<Elem, usize> = elems.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let n = g.alphabet().len();
    let step = elems
        .iter()
        .map(|x| {
            (0..n)
                .map(|s| {
                    let a = g.alphabet().local_at(s, v)?;
                    if a == crate::vgroups::E {
                        return Some(index[x]);
                    }
                    Some(index[&g.vmul(v, x, &[a])])
                })
                .collect()
        })
        .collect();
    Some(Table { elems, index, step })
}

/// Product of `d` with the Cayley table: states (q, x).
fn product(d: &Dfa, t: &Table, keep: impl Fn(&Elem) -> bool) -> Dfa {
    let n = d.nletters();
    let mut id: HashMap<(u32, usize), u32> = HashMap::new();
    let mut order = vec![(d.start(), t.index[&Vec::new()])];
    id.insert(order[0], 0);
    let mut out = Dfa::empty(n);
    let mut i = 0;
    while i < order.len() {
        let (q, x) = order[i];
        out.set_accept(i as u32, d.is_accept(q) && keep(&t.elems[x]));
        for s in 0..n {
            let (Some(p), Some(y)) = (d.next(q, s), t.step[x][s]) else { continue };
            let j = *id.entry((p, y)).or_insert_with(|| {
                order.push((p, y));
                out.add_state(false);
                (order.len() - 1) as u32
            });
            out.set(i as u32, s, j);
        }
        i += 1;
    }
    out.pruned()
}

/// Values of the words of `d` that are spelled in A_v, when G_v is finite.
pub fn value_set(g: &GraphOfGroups, v: VertexId, d: &Dfa) -> Option<BTreeSet<Elem>> {
    let t = table(g, v)?;
    let mut seen = vec![false; d.num_states() * t.elems.len()];
    let mut stack = vec![(d.start(), t.index[&Vec::new()])];
    let mut out = BTreeSet::new();
    while let Some((q, x)) = stack.pop() {
        let k = q as usize * t.elems.len() + x;
        if seen[k] {
            continue;
        }
        seen[k] = true;
        if d.is_accept(q) {
            out.insert(t.elems[x].clone());
        }
        for s in 0..d.nletters() {
            if let (Some(p), Some(y)) = (d.next(q, s), t.step[x][s]) {
                stack.push((p, y));
            }
        }
    }
    Some(out)
}

/// The words of `d` whose value lies in `set`.
///
/// Exact for finite G_v. For infinite G_v the words of `d` are assumed to be
/// canonical, which holds for every label built from a vertex acceptor.
pub fn words_valued_in(g: &GraphOfGroups, v: VertexId, d: &Dfa, set: &[Elem]) -> Dfa {
    match table(g, v) {
        Some(t) => product(d, &t, |x| set.contains(x)),
        None => d.and(&canonical_words(g, v, set)),
    }
}

pub fn words_valued_outside(g: &GraphOfGroups, v: VertexId, d: &Dfa, set: &[Elem]) -> Dfa {
    d.diff(&words_valued_in(g, v, d, set))
}
