//! Finite-state automata over small integer alphabets.
//!
//! Symbols are plain indices; the order of indices is the letter order used
//! for every shortlex comparison.

mod dfa;
mod gfsa;
mod nfa;
mod ops;
pub mod text;
mod twotape;

pub use dfa::{BoolOp, Dfa};
pub use gfsa::Gfsa;
pub use nfa::Nfa;
pub use ops::{factor_free, prohibit_subwords, shortlex_filter};
pub use twotape::TwoTapeDfa;

pub type Sym = usize;
pub type Word = Vec<Sym>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FsaError {
    #[error("alphabet mismatch: {0} vs {1} letters")]
    AlphabetMismatch(usize, usize),
    #[error("edge label is the empty language")]
    EmptyLabel,
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("not deterministic: {0}")]
    NotDeterministic(String),
}

/// Shortlex comparison on symbol indices.
pub fn shortlex_cmp(u: &[Sym], v: &[Sym]) -> std::cmp::Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// All words over `0..nletters` up to `maxlen`, shortlex order.
pub fn all_words(nletters: usize, maxlen: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(layer.len() * nletters);
        for w in &layer {
            for a in 0..nletters {
                let mut v: Word = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
