use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{FsaError, Nfa, Sym, Word};

pub(crate) const NONE: u32 = u32::MAX;

/// Deterministic automaton over the symbols `0..nletters`.
///
/// Transitions are partial; a missing transition rejects. State 0 need not be
/// the start state, but every value returned by a public constructor is pruned
/// unless documented otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    nletters: usize,
    start: u32,
    accept: Vec<bool>,
    trans: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Diff,
}

impl Dfa {
    /// One non-accepting state and no transitions.
    pub fn empty(nletters: usize) -> Self {
        Dfa { nletters, start: 0, accept: vec![false], trans: vec![NONE; nletters] }
    }

    pub fn epsilon(nletters: usize) -> Self {
        let mut d = Self::empty(nletters);
        d.accept[0] = true;
        d
    }

    /// All words over `letters`.
    pub fn star_of(nletters: usize, letters: &[Sym]) -> Self {
        let mut d = Self::epsilon(nletters);
        for &a in letters {
            d.set(0, a, 0);
        }
        d
    }

    pub fn universal(nletters: usize) -> Self {
        let all: Vec<Sym> = (0..nletters).collect();
        Self::star_of(nletters, &all)
    }

    /// Finite language given as an explicit word list (a trie).
    pub fn from_words<'a, I>(nletters: usize, words: I) -> Self
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut d = Self::empty(nletters);
        for w in words {
            let mut q = 0u32;
            for &a in w {
                let nxt = d.next(q, a);
                q = match nxt {
                    Some(p) => p,
                    None => {
                        let p = d.add_state(false);
                        d.set(q, a, p);
                        p
                    }
                };
            }
            d.accept[q as usize] = true;
        }
        d.pruned()
    }

    pub fn nletters(&self) -> usize {
        self.nletters
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_accept(&self, q: u32) -> bool {
        self.accept[q as usize]
    }

    pub fn next(&self, q: u32, a: Sym) -> Option<u32> {
        let t = self.trans[q as usize * self.nletters + a];
        (t != NONE).then_some(t)
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        self.accept.push(accepting);
        self.trans.extend(std::iter::repeat(NONE).take(self.nletters));
        (self.accept.len() - 1) as u32
    }

    pub fn set(&mut self, q: u32, a: Sym, p: u32) {
        self.trans[q as usize * self.nletters + a] = p;
    }

    pub fn set_accept(&mut self, q: u32, yes: bool) {
        self.accept[q as usize] = yes;
    }

    pub fn set_start(&mut self, q: u32) {
        self.start = q;
    }

    /// Raw construction; the result is not pruned.
    pub fn from_parts(nletters: usize, start: u32, accept: Vec<bool>, trans: Vec<u32>) -> Self {
        debug_assert_eq!(trans.len(), accept.len() * nletters);
        Dfa { nletters, start, accept, trans }
    }

    pub fn run(&self, from: u32, w: &[Sym]) -> Option<u32> {
        let mut q = from;
        for &a in w {
            q = self.next(q, a)?;
        }
        Some(q)
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        self.run(self.start, w).is_some_and(|q| self.is_accept(q))
    }

    /// True if `w` can be extended to an accepted word.
    pub fn accepts_prefix(&self, w: &[Sym]) -> bool {
        let co = self.coreachable();
        self.run(self.start, w).is_some_and(|q| co[q as usize])
    }

    pub fn transitions(&self) -> impl Iterator<Item = (u32, Sym, u32)> + '_ {
        let n = self.nletters;
        self.trans.iter().enumerate().filter(|(_, &t)| t != NONE).map(move |(i, &t)| ((i / n) as u32, i % n, t))
    }

    pub fn accepting_states(&self) -> Vec<u32> {
        (0..self.num_states() as u32).filter(|&q| self.is_accept(q)).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.coreachable()[self.start as usize]
    }

    pub(crate) fn reachable_from(&self, starts: &[u32]) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = Vec::new();
        for &s in starts {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        while let Some(q) = stack.pop() {
            for a in 0..self.nletters {
                if let Some(p) = self.next(q, a) {
                    if !seen[p as usize] {
                        seen[p as usize] = true;
                        stack.push(p);
                    }
                }
            }
        }
        seen
    }

    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (q, _, p) in self.transitions() {
            rev[p as usize].push(q);
        }
        let mut seen = self.accept.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| seen[q as usize]).collect();
        while let Some(p) = stack.pop() {
            for &q in &rev[p as usize] {
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// Keep only states that are reachable and co-reachable. The start state is
    /// always kept, so the empty language prunes to the one-state sink.
    pub fn pruned(&self) -> Self {
        let reach = self.reachable_from(&[self.start]);
        let co = self.coreachable();
        let keep: Vec<bool> = (0..self.num_states()).map(|q| reach[q] && co[q]).collect();
        if !keep[self.start as usize] {
            return Self::empty(self.nletters);
        }
        self.renumber_bfs(&keep)
    }

    /// Renumber kept states in breadth-first order from the start, letters in
    /// increasing order. Equal minimal automata become identical values.
    fn renumber_bfs(&self, keep: &[bool]) -> Self {
        let mut id = vec![NONE; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        id[self.start as usize] = 0;
        order.push(self.start);
        queue.push_back(self.start);
        while let Some(q) = queue.pop_front() {
            for a in 0..self.nletters {
                if let Some(p) = self.next(q, a) {
                    if keep[p as usize] && id[p as usize] == NONE {
                        id[p as usize] = order.len() as u32;
                        order.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        let mut out = Dfa {
            nletters: self.nletters,
            start: 0,
            accept: order.iter().map(|&q| self.accept[q as usize]).collect(),
            trans: vec![NONE; order.len() * self.nletters],
        };
        for (i, &q) in order.iter().enumerate() {
            for a in 0..self.nletters {
                if let Some(p) = self.next(q, a) {
                    if id[p as usize] != NONE {
                        out.trans[i * self.nletters + a] = id[p as usize];
                    }
                }
            }
        }
        out
    }

    /// Total version with an explicit sink (not pruned).
    pub fn completed(&self) -> Self {
        if self.trans.iter().all(|&t| t != NONE) {
            return self.clone();
        }
        let mut d = self.clone();
        let sink = d.add_state(false);
        for t in d.trans.iter_mut() {
            if *t == NONE {
                *t = sink;
            }
        }
        d
    }

    pub fn complement(&self) -> Self {
        let mut d = self.completed();
        for a in d.accept.iter_mut() {
            *a = !*a;
        }
        d.pruned()
    }

    pub fn product(&self, other: &Dfa, op: BoolOp) -> Result<Dfa, FsaError> {
        if self.nletters != other.nletters {
            return Err(FsaError::AlphabetMismatch(self.nletters, other.nletters));
        }
        let x = self.completed();
        let y = other.completed();
        let n = self.nletters;
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(x.start, y.start)];
        ids.insert((x.start, y.start), 0);
        let mut out = Dfa::empty(n);
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let (ap, aq) = (x.is_accept(p), y.is_accept(q));
            out.accept[i] = match op {
                BoolOp::And => ap && aq,
                BoolOp::Or => ap || aq,
                BoolOp::Diff => ap && !aq,
            };
            for a in 0..n {
                let key = (x.next(p, a).unwrap(), y.next(q, a).unwrap());
                let j = match ids.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = out.add_state(false);
                        ids.insert(key, j);
                        pairs.push(key);
                        j
                    }
                };
                out.set(i as u32, a, j);
            }
            i += 1;
        }
        Ok(out.pruned())
    }

    pub fn and(&self, other: &Dfa) -> Dfa {
        self.product(other, BoolOp::And).expect("same alphabet")
    }

    pub fn or(&self, other: &Dfa) -> Dfa {
        self.product(other, BoolOp::Or).expect("same alphabet")
    }

    pub fn diff(&self, other: &Dfa) -> Dfa {
        self.product(other, BoolOp::Diff).expect("same alphabet")
    }

    /// Moore partition refinement on the completed automaton, then pruning and
    /// canonical renumbering.
    pub fn minimize(&self) -> Dfa {
        let d = self.pruned().completed();
        let n = d.num_states();
        let k = d.nletters;
        let mut class: Vec<u32> = d.accept.iter().map(|&a| a as u32).collect();
        let mut nclasses = 0;
        loop {
            let mut sig: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
            let mut next = vec![0u32; n];
            for q in 0..n {
                let mut key = Vec::with_capacity(k + 1);
                key.push(class[q]);
                for a in 0..k {
                    key.push(class[d.trans[q * k + a] as usize]);
                }
                let len = sig.len() as u32;
                next[q] = *sig.entry(key).or_insert(len);
            }
            let count = sig.len();
            class = next;
            if count == nclasses {
                break;
            }
            nclasses = count;
        }
        let mut q = Dfa {
            nletters: k,
            start: class[d.start as usize],
            accept: vec![false; nclasses],
            trans: vec![NONE; nclasses * k],
        };
        for s in 0..n {
            let c = class[s] as usize;
            q.accept[c] = d.accept[s];
            for a in 0..k {
                q.trans[c * k + a] = class[d.trans[s * k + a] as usize];
            }
        }
        q.pruned()
    }

    pub fn language_eq(&self, other: &Dfa) -> bool {
        self.minimize() == other.minimize()
    }

    pub fn is_subset(&self, other: &Dfa) -> bool {
        self.diff(other).is_empty()
    }

    /// Letter substitution. `map[a]` is the new symbol for `a`; `None` turns the
    /// transition into an ε-move.
    pub fn relabel(&self, map: &[Option<Sym>], nletters: usize) -> Nfa {
        let mut n = Nfa::new(nletters);
        for _ in 0..self.num_states() {
            n.add_state(false);
        }
        for q in 0..self.num_states() as u32 {
            n.set_accept(q, self.is_accept(q));
        }
        n.add_start(self.start);
        for (q, a, p) in self.transitions() {
            n.add(q, map[a], p);
        }
        n
    }

    /// Injective relabelling into a larger alphabet; stays deterministic.
    pub fn embed(&self, map: &[Sym], nletters: usize) -> Dfa {
        let mut d = Dfa {
            nletters,
            start: self.start,
            accept: self.accept.clone(),
            trans: vec![NONE; self.num_states() * nletters],
        };
        for (q, a, p) in self.transitions() {
            d.set(q, map[a], p);
        }
        d
    }

    /// Same automaton with a different set of start/accept choices; used by the
    /// state-set constructions.
    pub fn with_starts_accepts(&self, starts: &[u32], accepts: &[u32]) -> Nfa {
        let mut n = self.to_nfa();
        n.clear_starts();
        for &s in starts {
            n.add_start(s);
        }
        for q in 0..self.num_states() as u32 {
            n.set_accept(q, false);
        }
        for &q in accepts {
            n.set_accept(q, true);
        }
        n
    }

    pub fn to_nfa(&self) -> Nfa {
        let map: Vec<Option<Sym>> = (0..self.nletters).map(Some).collect();
        self.relabel(&map, self.nletters)
    }

    /// Remove transitions on letters outside `keep`.
    pub fn restrict_letters(&self, keep: &[bool]) -> Dfa {
        let mut d = self.clone();
        for q in 0..d.num_states() {
            for a in 0..d.nletters {
                if !keep[a] {
                    d.trans[q * d.nletters + a] = NONE;
                }
            }
        }
        d
    }

    pub fn concat(&self, other: &Dfa) -> Dfa {
        self.to_nfa().concat(&other.to_nfa()).determinize()
    }

    /// Accepted words of length at most `maxlen`, in shortlex order of symbol
    /// indices.
    pub fn enumerate(&self, maxlen: usize) -> Vec<Word> {
        let d = self.pruned();
        let dist = d.dist_to_accept();
        let mut out = Vec::new();
        for len in 0..=maxlen {
            let mut w = Vec::with_capacity(len);
            d.enum_rec(d.start, len, &dist, &mut w, &mut out);
        }
        out
    }

    fn enum_rec(&self, q: u32, left: usize, dist: &[usize], w: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            if self.is_accept(q) {
                out.push(w.clone());
            }
            return;
        }
        for a in 0..self.nletters {
            if let Some(p) = self.next(q, a) {
                if dist[p as usize] <= left - 1 {
                    w.push(a);
                    self.enum_rec(p, left - 1, dist, w, out);
                    w.pop();
                }
            }
        }
    }

    /// Shortest distance from each state to an accept state (`usize::MAX` if
    /// none).
    pub(crate) fn dist_to_accept(&self) -> Vec<usize> {
        let n = self.num_states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (q, _, p) in self.transitions() {
            rev[p as usize].push(q);
        }
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for q in 0..n {
            if self.accept[q] {
                dist[q] = 0;
                queue.push_back(q as u32);
            }
        }
        while let Some(p) = queue.pop_front() {
            for &q in &rev[p as usize] {
                if dist[q as usize] == usize::MAX {
                    dist[q as usize] = dist[p as usize] + 1;
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    /// A shortest accepted word, least in shortlex order among those.
    pub fn shortest(&self) -> Option<Word> {
        let dist = self.dist_to_accept();
        let mut q = self.start;
        if dist[q as usize] == usize::MAX {
            return None;
        }
        let mut w = Vec::new();
        while dist[q as usize] > 0 {
            let (a, p) = (0..self.nletters)
                .find_map(|a| self.next(q, a).filter(|&p| dist[p as usize] + 1 == dist[q as usize]).map(|p| (a, p)))
                .expect("distance decreases along some letter");
            w.push(a);
            q = p;
        }
        Some(w)
    }

    /// Accepted words of length at most `maxlen` whose every proper prefix is
    /// also a prefix of an accepted word; i.e. prefixes of the language.
    pub fn enumerate_prefixes(&self, maxlen: usize) -> Vec<Word> {
        let mut d = self.pruned();
        for q in 0..d.num_states() as u32 {
            d.set_accept(q, true);
        }
        d.enumerate(maxlen)
    }

    /// Number of accepted words of each length `0..=maxlen`.
    pub fn count_by_length(&self, maxlen: usize) -> Vec<u128> {
        let mut cur = vec![0u128; self.num_states()];
        cur[self.start as usize] = 1;
        let mut out = Vec::with_capacity(maxlen + 1);
        for step in 0..=maxlen {
            out.push((0..self.num_states()).filter(|&q| self.accept[q]).map(|q| cur[q]).sum());
            if step == maxlen {
                break;
            }
            let mut nxt = vec![0u128; self.num_states()];
            for (q, _, p) in self.transitions() {
                nxt[p as usize] = nxt[p as usize].saturating_add(cur[q as usize]);
            }
            cur = nxt;
        }
        out
    }
}
