use std::collections::HashMap;

use super::{Dfa, Nfa, Sym, Word};

/// Synchronous two-tape automaton: a [`Dfa`] over padded pairs.
///
/// With base alphabet `0..n` the padding symbol is `n` and the pair `(a, b)`
/// is the symbol `a * (n + 1) + b`. The pair `(pad, pad)` never occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTapeDfa {
    base: usize,
    dfa: Dfa,
}

impl TwoTapeDfa {
    pub fn pair_letters(base: usize) -> usize {
        (base + 1) * (base + 1)
    }

    pub fn pair(base: usize, a: Option<Sym>, b: Option<Sym>) -> Sym {
        let pad = base;
        a.unwrap_or(pad) * (base + 1) + b.unwrap_or(pad)
    }

    pub fn unpair(base: usize, s: Sym) -> (Option<Sym>, Option<Sym>) {
        let (a, b) = (s / (base + 1), s % (base + 1));
        ((a != base).then_some(a), (b != base).then_some(b))
    }

    /// Wrap a pair-alphabet automaton, intersecting with well-paddedness.
    pub fn from_dfa(base: usize, dfa: Dfa) -> Self {
        assert_eq!(dfa.nletters(), Self::pair_letters(base));
        let dfa = dfa.and(&Self::well_padded(base));
        TwoTapeDfa { base, dfa }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// Padded encoding of a pair of words.
    pub fn encode(base: usize, u: &[Sym], v: &[Sym]) -> Word {
        (0..u.len().max(v.len())).map(|i| Self::pair(base, u.get(i).copied(), v.get(i).copied())).collect()
    }

    pub fn accepts(&self, u: &[Sym], v: &[Sym]) -> bool {
        self.dfa.accepts(&Self::encode(self.base, u, v))
    }

    /// Finite relation given by explicit pairs.
    pub fn from_pairs(base: usize, pairs: &[(Word, Word)]) -> Self {
        let words: Vec<Word> = pairs.iter().map(|(u, v)| Self::encode(base, u, v)).collect();
        TwoTapeDfa { base, dfa: Dfa::from_words(Self::pair_letters(base), words.iter()) }
    }

    /// Pairs `(u, v)` with padding only as a suffix of one tape.
    pub fn well_padded(base: usize) -> Dfa {
        let n = Self::pair_letters(base);
        let mut d = Dfa::empty(n);
        d.set_accept(0, true);
        let left_done = d.add_state(true);
        let right_done = d.add_state(true);
        for s in 0..n {
            match Self::unpair(base, s) {
                (Some(_), Some(_)) => d.set(0, s, 0),
                (None, Some(_)) => {
                    d.set(0, s, left_done);
                    d.set(left_done, s, left_done);
                }
                (Some(_), None) => {
                    d.set(0, s, right_done);
                    d.set(right_done, s, right_done);
                }
                (None, None) => {}
            }
        }
        d
    }

    /// Diagonal `{(u, u) : u ∈ lang}`.
    pub fn identity_on(lang: &Dfa) -> Self {
        let base = lang.nletters();
        let map: Vec<Sym> = (0..base).map(|a| Self::pair(base, Some(a), Some(a))).collect();
        TwoTapeDfa { base, dfa: lang.embed(&map, Self::pair_letters(base)).pruned() }
    }

    /// Pairs with `u` strictly before `v` in shortlex order on symbol indices.
    pub fn shortlex_less(base: usize) -> Self {
        // states: 0 equal so far, 1 u<v decided lexically, 2 u>v decided lexically,
        // 3 v longer (u ended), 4 u longer
        let n = Self::pair_letters(base);
        let mut d = Dfa::empty(n);
        for _ in 0..4 {
            d.add_state(false);
        }
        for s in 0..n {
            match Self::unpair(base, s) {
                (Some(a), Some(b)) => {
                    let from_eq = if a == b { 0 } else if a < b { 1 } else { 2 };
                    d.set(0, s, from_eq);
                    d.set(1, s, 1);
                    d.set(2, s, 2);
                }
                (None, Some(_)) => {
                    for q in [0, 1, 2, 3] {
                        d.set(q, s, 3);
                    }
                }
                (Some(_), None) => {
                    for q in [0, 1, 2, 4] {
                        d.set(q, s, 4);
                    }
                }
                (None, None) => {}
            }
        }
        d.set_accept(1, true);
        d.set_accept(3, true);
        TwoTapeDfa { base, dfa: d.pruned() }
    }

    pub fn and(&self, other: &TwoTapeDfa) -> TwoTapeDfa {
        TwoTapeDfa { base: self.base, dfa: self.dfa.and(&other.dfa) }
    }

    pub fn or(&self, other: &TwoTapeDfa) -> TwoTapeDfa {
        TwoTapeDfa { base: self.base, dfa: self.dfa.or(&other.dfa) }
    }

    /// Exchange the tapes.
    pub fn swap(&self) -> TwoTapeDfa {
        let n = Self::pair_letters(self.base);
        let map: Vec<Sym> = (0..n)
            .map(|s| {
                let (a, b) = Self::unpair(self.base, s);
                Self::pair(self.base, b, a)
            })
            .collect();
        TwoTapeDfa { base: self.base, dfa: self.dfa.embed(&map, n).pruned() }
    }

    fn project(&self, second: bool) -> Dfa {
        let n = Self::pair_letters(self.base);
        let map: Vec<Option<Sym>> = (0..n)
            .map(|s| {
                let (a, b) = Self::unpair(self.base, s);
                if second {
                    b
                } else {
                    a
                }
            })
            .collect();
        self.dfa.relabel(&map, self.base).determinize()
    }

    /// Apply an injective letter map to both tapes.
    pub fn embed(&self, map: &[Sym], base: usize) -> TwoTapeDfa {
        let old = self.base;
        let pm: Vec<Sym> = (0..Self::pair_letters(old))
            .map(|s| {
                let (a, b) = Self::unpair(old, s);
                Self::pair(base, a.map(|a| map[a]), b.map(|b| map[b]))
            })
            .collect();
        TwoTapeDfa { base, dfa: self.dfa.embed(&pm, Self::pair_letters(base)) }
    }

    pub fn first_projection(&self) -> Dfa {
        self.project(false)
    }

    pub fn second_projection(&self) -> Dfa {
        self.project(true)
    }

    /// `{(u, w) : ∃v (u, v) ∈ self, (v, w) ∈ other}`.
    pub fn compose(&self, other: &TwoTapeDfa) -> TwoTapeDfa {
        let base = self.base;
        let pad = base;
        let x = &self.dfa;
        let y = &other.dfa;
        let mut nfa = Nfa::new(Self::pair_letters(base));
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut todo = vec![(x.start(), y.start())];
        let s0 = nfa.add_state(x.is_accept(x.start()) && y.is_accept(y.start()));
        ids.insert((x.start(), y.start()), s0);
        nfa.add_start(s0);
        while let Some((p, q)) = todo.pop() {
            let from = ids[&(p, q)];
            for a in 0..=pad {
                for b in 0..=pad {
                    for c in 0..=pad {
                        if a == pad && b == pad && c == pad {
                            continue;
                        }
                        let ab = (a != pad || b != pad).then(|| a * (base + 1) + b);
                        let bc = (b != pad || c != pad).then(|| b * (base + 1) + c);
                        let p2 = match ab {
                            Some(s) => match x.next(p, s) {
                                Some(t) => t,
                                None => continue,
                            },
                            None => p,
                        };
                        let q2 = match bc {
                            Some(s) => match y.next(q, s) {
                                Some(t) => t,
                                None => continue,
                            },
                            None => q,
                        };
                        let to = *ids.entry((p2, q2)).or_insert_with(|| {
                            todo.push((p2, q2));
                            nfa.add_state(x.is_accept(p2) && y.is_accept(q2))
                        });
                        let label = (a != pad || c != pad).then(|| a * (base + 1) + c);
                        nfa.add(from, label, to);
                    }
                }
            }
        }
        TwoTapeDfa::from_dfa(base, nfa.determinize())
    }
}
