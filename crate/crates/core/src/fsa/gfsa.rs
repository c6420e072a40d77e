use super::{Dfa, FsaError, Nfa};

/// Automaton whose edges carry regular languages instead of letters.
#[derive(Clone, Debug)]
pub struct Gfsa {
    nletters: usize,
    nstates: usize,
    starts: Vec<u32>,
    accept: Vec<bool>,
    labels: Vec<Dfa>,
    edges: Vec<(u32, usize, u32)>,
}

impl Gfsa {
    pub fn new(nletters: usize) -> Self {
        Gfsa { nletters, nstates: 0, starts: Vec::new(), accept: Vec::new(), labels: Vec::new(), edges: Vec::new() }
    }

    pub fn num_states(&self) -> usize {
        self.nstates
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        self.nstates += 1;
        self.accept.push(accepting);
        (self.nstates - 1) as u32
    }

    pub fn add_start(&mut self, q: u32) {
        self.starts.push(q);
    }

    pub fn starts(&self) -> &[u32] {
        &self.starts
    }

    pub fn is_accept(&self, q: u32) -> bool {
        self.accept[q as usize]
    }

    /// Register a label language; returns its index for `add_edge`.
    pub fn add_label(&mut self, label: Dfa) -> Result<usize, FsaError> {
        if label.nletters() != self.nletters {
            return Err(FsaError::AlphabetMismatch(self.nletters, label.nletters()));
        }
        if label.is_empty() {
            return Err(FsaError::EmptyLabel);
        }
        self.labels.push(label);
        Ok(self.labels.len() - 1)
    }

    pub fn add_edge(&mut self, from: u32, label: usize, to: u32) {
        self.edges.push((from, label, to));
    }

    pub fn edges(&self) -> &[(u32, usize, u32)] {
        &self.edges
    }

    pub fn label(&self, i: usize) -> &Dfa {
        &self.labels[i]
    }

    /// Inline a copy of each edge label, glued in with ε-moves.
    pub fn expand(&self) -> Nfa {
        let mut n = Nfa::new(self.nletters);
        for q in 0..self.nstates {
            n.add_state(self.accept[q]);
        }
        for &s in &self.starts {
            n.add_start(s);
        }
        for &(from, li, to) in &self.edges {
            let lab = self.labels[li].to_nfa();
            let off = n.absorb(&lab);
            for &s in lab.starts() {
                n.add(from, None, s + off);
            }
            for q in 0..lab.num_states() as u32 {
                if lab.is_accept(q) {
                    n.set_accept(q + off, false);
                    n.add(q + off, None, to);
                }
            }
        }
        n
    }
}
