use std::collections::{BTreeSet, HashMap};

use super::{Dfa, Sym};

/// Nondeterministic automaton with ε-moves (`None` labels) and several start
/// states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    nletters: usize,
    starts: Vec<u32>,
    accept: Vec<bool>,
    edges: Vec<Vec<(Option<Sym>, u32)>>,
}

impl Nfa {
    pub fn new(nletters: usize) -> Self {
        Nfa { nletters, starts: Vec::new(), accept: Vec::new(), edges: Vec::new() }
    }

    pub fn nletters(&self) -> usize {
        self.nletters
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn starts(&self) -> &[u32] {
        &self.starts
    }

    pub fn is_accept(&self, q: u32) -> bool {
        self.accept[q as usize]
    }

    pub fn edges(&self, q: u32) -> &[(Option<Sym>, u32)] {
        &self.edges[q as usize]
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        self.accept.push(accepting);
        self.edges.push(Vec::new());
        (self.accept.len() - 1) as u32
    }

    pub fn set_accept(&mut self, q: u32, yes: bool) {
        self.accept[q as usize] = yes;
    }

    pub fn add_start(&mut self, q: u32) {
        if !self.starts.contains(&q) {
            self.starts.push(q);
        }
    }

    pub fn clear_starts(&mut self) {
        self.starts.clear();
    }

    pub fn add(&mut self, q: u32, a: Option<Sym>, p: u32) {
        if !self.edges[q as usize].contains(&(a, p)) {
            self.edges[q as usize].push((a, p));
        }
    }

    /// Copy `other` into `self`, returning the state offset.
    pub fn absorb(&mut self, other: &Nfa) -> u32 {
        assert_eq!(self.nletters, other.nletters);
        let off = self.num_states() as u32;
        for q in 0..other.num_states() {
            self.accept.push(other.accept[q]);
            self.edges.push(other.edges[q].iter().map(|&(a, p)| (a, p + off)).collect());
        }
        off
    }

    pub fn union(&self, other: &Nfa) -> Nfa {
        let mut n = self.clone();
        let off = n.absorb(other);
        for &s in &other.starts {
            n.add_start(s + off);
        }
        n
    }

    pub fn concat(&self, other: &Nfa) -> Nfa {
        let mut n = self.clone();
        let off = n.absorb(other);
        for q in 0..self.num_states() as u32 {
            if self.accept[q as usize] {
                n.accept[q as usize] = false;
                for &s in &other.starts {
                    n.add(q, None, s + off);
                }
            }
        }
        n
    }

    /// ε-closure of every state, precomputed once.
    pub fn closures(&self) -> Vec<Vec<u32>> {
        (0..self.num_states() as u32)
            .map(|q| {
                let mut seen = BTreeSet::from([q]);
                let mut stack = vec![q];
                while let Some(s) = stack.pop() {
                    for &(a, p) in &self.edges[s as usize] {
                        if a.is_none() && seen.insert(p) {
                            stack.push(p);
                        }
                    }
                }
                seen.into_iter().collect()
            })
            .collect()
    }

    fn close(&self, set: impl IntoIterator<Item = u32>, clo: &[Vec<u32>]) -> Vec<u32> {
        let mut out = BTreeSet::new();
        for q in set {
            out.extend(clo[q as usize].iter().copied());
        }
        out.into_iter().collect()
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let clo = self.closures();
        let mut cur = self.close(self.starts.iter().copied(), &clo);
        for &a in w {
            let step: Vec<u32> = cur
                .iter()
                .flat_map(|&q| self.edges[q as usize].iter().filter(move |e| e.0 == Some(a)).map(|e| e.1))
                .collect();
            cur = self.close(step, &clo);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.accept[q as usize])
    }

    /// Subset construction; the result is pruned.
    pub fn determinize(&self) -> Dfa {
        let clo = self.closures();
        let start = self.close(self.starts.iter().copied(), &clo);
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut d = Dfa::empty(self.nletters);
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            d.set_accept(i as u32, cur.iter().any(|&q| self.accept[q as usize]));
            let mut by_letter: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); self.nletters];
            for &q in &cur {
                for &(a, p) in &self.edges[q as usize] {
                    if let Some(a) = a {
                        by_letter[a].insert(p);
                    }
                }
            }
            for (a, targets) in by_letter.into_iter().enumerate() {
                if targets.is_empty() {
                    continue;
                }
                let set = self.close(targets, &clo);
                let j = match ids.get(&set) {
                    Some(&j) => j,
                    None => {
                        let j = d.add_state(false);
                        ids.insert(set.clone(), j);
                        sets.push(set);
                        j
                    }
                };
                d.set(i as u32, a, j);
            }
            i += 1;
        }
        d.pruned()
    }
}
