use std::collections::{HashMap, VecDeque};

use super::{Dfa, FsaError, Sym, TwoTapeDfa, Word};

/// Words of `x` containing no element of `bad` as a factor.
pub fn prohibit_subwords(x: &Dfa, bad: &[Word]) -> Dfa {
    if bad.is_empty() {
        return x.pruned();
    }
    x.and(&factor_free(x.nletters(), bad))
}

/// Aho–Corasick automaton for "no factor from `bad`".
pub fn factor_free(nletters: usize, bad: &[Word]) -> Dfa {
    // trie
    let mut children: Vec<HashMap<Sym, usize>> = vec![HashMap::new()];
    let mut terminal = vec![false];
    for w in bad {
        let mut q = 0;
        for &a in w {
            q = match children[q].get(&a) {
                Some(&p) => p,
                None => {
                    children.push(HashMap::new());
                    terminal.push(false);
                    let p = children.len() - 1;
                    children[q].insert(a, p);
                    p
                }
            };
        }
        terminal[q] = true;
    }
    let n = children.len();
    let mut fail = vec![0usize; n];
    let mut delta = vec![0usize; n * nletters];
    let mut queue = VecDeque::new();
    for a in 0..nletters {
        match children[0].get(&a) {
            Some(&p) => {
                delta[a] = p;
                queue.push_back(p);
            }
            None => delta[a] = 0,
        }
    }
    while let Some(q) = queue.pop_front() {
        terminal[q] = terminal[q] || terminal[fail[q]];
        for a in 0..nletters {
            match children[q].get(&a) {
                Some(&p) => {
                    fail[p] = delta[fail[q] * nletters + a];
                    delta[q * nletters + a] = p;
                    queue.push_back(p);
                }
                None => delta[q * nletters + a] = delta[fail[q] * nletters + a],
            }
        }
    }
    let mut d = Dfa::empty(nletters);
    for _ in 1..n {
        d.add_state(false);
    }
    for q in 0..n {
        d.set_accept(q as u32, !terminal[q]);
        if terminal[q] {
            continue;
        }
        for a in 0..nletters {
            let p = delta[q * nletters + a];
            if !terminal[p] {
                d.set(q as u32, a, p as u32);
            }
        }
    }
    d.pruned()
}

/// Words of `lang` that are shortlex-least among the words related to them.
///
/// Computes `lang − p₂{(u, v) ∈ relation : u ≺ v}` with `≺` the shortlex order
/// on symbol indices.
pub fn shortlex_filter(lang: &Dfa, relation: &TwoTapeDfa) -> Result<Dfa, FsaError> {
    if relation.base() != lang.nletters() {
        return Err(FsaError::AlphabetMismatch(lang.nletters(), relation.base()));
    }
    let less = relation.and(&TwoTapeDfa::shortlex_less(lang.nletters()));
    Ok(lang.diff(&less.second_projection()))
}
