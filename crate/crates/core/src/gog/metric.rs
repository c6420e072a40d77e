use std::collections::HashMap;

use super::{GogError, GraphOfGroups, NormalForm};
use crate::fsa::Sym;

pub const DEFAULT_NODE_CAP: usize = 2_000_000;

/// Word-metric ball around the identity; generators are all letters but `e`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    pub dist: HashMap<NormalForm, usize>,
    /// elements by distance, in discovery order
    pub layers: Vec<Vec<NormalForm>>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn get(&self, x: &NormalForm) -> Option<usize> {
        self.dist.get(x).copied()
    }
}

fn generators(g: &GraphOfGroups) -> Vec<Sym> {
    (1..g.alphabet().len()).collect()
}

pub fn cayley_ball(g: &GraphOfGroups, r: usize, cap: usize) -> Result<Ball, GogError> {
    let gens = generators(g);
    let id = g.identity();
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut layers = vec![vec![id]];
    for d in 1..=r {
        let mut next = Vec::new();
        for x in &layers[d - 1] {
            for &s in &gens {
                let y = g.mul_letter(x, s);
                if !dist.contains_key(&y) {
                    if dist.len() >= cap {
                        return Err(GogError::CapExceeded(cap));
                    }
                    dist.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    Ok(Ball { radius: r, dist, layers })
}

/// d(w1, w2) if at most `r`, else `None`.
pub fn distance(g: &GraphOfGroups, w1: &[Sym], w2: &[Sym], r: usize, cap: usize) -> Result<Option<usize>, GogError> {
    let mut w = g.alphabet().invert_word(w1);
    w.extend_from_slice(w2);
    let target = g.normal_form(&w);
    if target.is_identity() {
        return Ok(Some(0));
    }
    let gens = generators(g);
    let id = g.identity();
    let mut seen = HashMap::from([(id.clone(), 0usize)]);
    let mut layer = vec![id];
    for d in 1..=r {
        let mut next = Vec::new();
        for x in &layer {
            for &s in &gens {
                let y = g.mul_letter(x, s);
                if y == target {
                    return Ok(Some(d));
                }
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(GogError::CapExceeded(cap));
                    }
                    seen.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    Ok(None)
}

/// Cached ball for repeated distance queries within a fixed radius.
pub struct Metric<'a> {
    g: &'a GraphOfGroups,
    ball: Ball,
}

impl<'a> Metric<'a> {
    pub fn new(g: &'a GraphOfGroups, r: usize, cap: usize) -> Result<Self, GogError> {
        Ok(Metric { g, ball: cayley_ball(g, r, cap)? })
    }

    pub fn radius(&self) -> usize {
        self.ball.radius
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    /// d(x, y) when it is within the cached radius.
    pub fn d(&self, x: &NormalForm, y: &NormalForm) -> Option<usize> {
        let mut w = self.g.alphabet().invert_word(&self.g.to_word(x));
        w.extend(self.g.to_word(y));
        self.ball.get(&self.g.normal_form(&w))
    }

    /// Distance between the values of two words.
    pub fn d_words(&self, u: &[Sym], v: &[Sym]) -> Option<usize> {
        let mut w = self.g.alphabet().invert_word(u);
        w.extend_from_slice(v);
        self.ball.get(&self.g.normal_form(&w))
    }
}
