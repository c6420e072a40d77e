//! Fellow-traveller checks on the Cayley graph.

use std::collections::HashMap;

use super::DeployError;
use crate::fsa::{shortlex_cmp, Dfa, Sym, Word};
use crate::gog::{cayley_ball, GraphOfGroups, NormalForm};

const OUT: u32 = u32::MAX;

/// Distances up to `radius` from an interned Cayley ball of radius
/// `radius + 1` with left and right multiplication tables.
pub struct FtChecker<'a> {
    g: &'a GraphOfGroups,
    radius: usize,
    index: HashMap<NormalForm, u32>,
    dist: Vec<usize>,
    nletters: usize,
    /// id of s·x, or OUT
    left: Vec<u32>,
    /// id of x·s, or OUT
    right: Vec<u32>,
}

/// Matrix d(w1(i), w2(j)) for 0 ≤ i ≤ |w1|, 0 ≤ j ≤ |w2|.
type Grid = Vec<Vec<Option<usize>>>;

impl<'a> FtChecker<'a> {
    pub fn new(g: &'a GraphOfGroups, radius: usize, cap: usize) -> Result<Self, DeployError> {
        let ball = cayley_ball(g, radius + 1, cap)?;
        let elems: Vec<NormalForm> = ball.layers.into_iter().flatten().collect();
        let index: HashMap<NormalForm, u32> = elems.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
        let dist: Vec<usize> = elems.iter().map(|x| ball.dist[x]).collect();
        let n = g.alphabet().len();
        let id = |x: &NormalForm| index.get(x).copied().unwrap_or(OUT);
        let mut left = Vec::with_capacity(elems.len() * n);
        let mut right = Vec::with_capacity(elems.len() * n);
        for x in &elems {
            let w = g.to_word(x);
            for s in 0..n {
                right.push(id(&g.mul_letter(x, s)));
                let mut sw = vec![s];
                sw.extend_from_slice(&w);
                left.push(id(&g.normal_form(&sw)));
            }
        }
        Ok(FtChecker { g, radius, index, dist, nletters: n, left, right })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn d(&self, u: &[Sym], v: &[Sym]) -> Option<usize> {
        let mut w = self.g.alphabet().invert_word(u);
        w.extend_from_slice(v);
        let i = *self.index.get(&self.g.normal_form(&w))?;
        Some(self.dist[i as usize]).filter(|&d| d <= self.radius)
    }

    /// Cells are filled from a computed neighbour, so a cell off every path
    /// of distance ≤ radius may read `None` even when it is close.
    fn grid(&self, w1: &[Sym], w2: &[Sym]) -> Grid {
        let a = self.g.alphabet();
        let (m, n) = (w1.len(), w2.len());
        let mut ids = vec![vec![OUT; n + 1]; m + 1];
        ids[0][0] = 0;
        let lt = |x: u32, s: Sym| if x == OUT { OUT } else { self.left[x as usize * self.nletters + s] };
        let rt = |x: u32, s: Sym| if x == OUT { OUT } else { self.right[x as usize * self.nletters + s] };
        for i in 0..=m {
            for j in 0..=n {
                if (i, j) == (0, 0) {
                    continue;
                }
                let mut x = OUT;
                if i > 0 {
                    x = lt(ids[i - 1][j], a.inverse(w1[i - 1]));
                }
                if x == OUT && j > 0 {
                    x = rt(ids[i][j - 1], w2[j - 1]);
                }
                if x == OUT && i > 0 && j > 0 {
                    x = rt(lt(ids[i - 1][j - 1], a.inverse(w1[i - 1])), w2[j - 1]);
                }
                ids[i][j] = x;
            }
        }
        ids.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| (x != OUT).then(|| self.dist[x as usize]).filter(|&d| d <= self.radius))
                    .collect()
            })
            .collect()
    }

    /// A monotone path through the grid DAG from (0,0) to (|w1|,|w2|) whose
    /// nodes all have d ≤ k, if one exists.
    pub fn async_path(&self, w1: &[Sym], w2: &[Sym], k: usize) -> Option<Vec<(usize, usize)>> {
        grid_path(&self.grid(w1, w2), k)
    }

    pub fn sync_ok(&self, w1: &[Sym], w2: &[Sym], k: usize) -> bool {
        let grid = self.grid(w1, w2);
        (0..=w1.len().max(w2.len())).all(|t| grid[t.min(w1.len())][t.min(w2.len())].is_some_and(|d| d <= k))
    }

    /// Least k admitting an asynchronous path, if within the radius.
    pub fn async_constant(&self, w1: &[Sym], w2: &[Sym]) -> Option<usize> {
        minimax(&self.grid(w1, w2))
    }

    pub fn sync_constant(&self, w1: &[Sym], w2: &[Sym]) -> Option<usize> {
        let grid = self.grid(w1, w2);
        (0..=w1.len().max(w2.len())).map(|t| grid[t.min(w1.len())][t.min(w2.len())]).try_fold(0, |m, d| d.map(|d| m.max(d)))
    }
}

fn grid_path(grid: &Grid, k: usize) -> Option<Vec<(usize, usize)>> {
    let (m, n) = (grid.len() - 1, grid[0].len() - 1);
    let ok = |i: usize, j: usize| grid[i][j].is_some_and(|d| d <= k);
    // reach[i][j]: predecessor on some admissible path
    let mut prev: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; n + 1]; m + 1];
    let mut reach = vec![vec![false; n + 1]; m + 1];
    if !ok(0, 0) {
        return None;
    }
    reach[0][0] = true;
    for i in 0..=m {
        for j in 0..=n {
            if (i, j) == (0, 0) || !ok(i, j) {
                continue;
            }
            let cands = [(i.wrapping_sub(1), j.wrapping_sub(1)), (i.wrapping_sub(1), j), (i, j.wrapping_sub(1))];
            if let Some(&p) = cands.iter().find(|&&(a, b)| a <= m && b <= n && reach[a][b]) {
                reach[i][j] = true;
                prev[i][j] = Some(p);
            }
        }
    }
    if !reach[m][n] {
        return None;
    }
    let mut path = vec![(m, n)];
    while let Some(p) = prev[path.last().unwrap().0][path.last().unwrap().1] {
        path.push(p);
    }
    path.reverse();
    Some(path)
}

fn minimax(grid: &Grid) -> Option<usize> {
    let (m, n) = (grid.len() - 1, grid[0].len() - 1);
    let mut best = vec![vec![None::<usize>; n + 1]; m + 1];
    for i in 0..=m {
        for j in 0..=n {
            let here = grid[i][j];
            let before = if (i, j) == (0, 0) {
                Some(0)
            } else {
                [(i.wrapping_sub(1), j.wrapping_sub(1)), (i.wrapping_sub(1), j), (i, j.wrapping_sub(1))]
                    .iter()
                    .filter(|&&(a, b)| a <= m && b <= n)
                    .filter_map(|&(a, b)| best[a][b])
                    .min()
            };
            best[i][j] = match (here, before) {
                (Some(d), Some(b)) => Some(d.max(b)),
                _ => None,
            };
        }
    }
    best[m][n]
}

/// True iff some monotone reparameterization keeps the two paths within `k`;
/// the path through the (i, j) grid is returned on success.
pub fn async_fellow_travel(
    g: &GraphOfGroups,
    w1: &[Sym],
    w2: &[Sym],
    k: usize,
    cap: usize,
) -> Result<Option<Vec<(usize, usize)>>, DeployError> {
    Ok(FtChecker::new(g, k, cap)?.async_path(w1, w2, k))
}

pub fn sync_fellow_travel(g: &GraphOfGroups, w1: &[Sym], w2: &[Sym], k: usize, cap: usize) -> Result<bool, DeployError> {
    Ok(FtChecker::new(g, k, cap)?.sync_ok(w1, w2, k))
}

/// Accepted words up to `maxlen` grouped by value.
pub struct Sample {
    pub words: Vec<Word>,
    pub values: Vec<NormalForm>,
    pub by_value: HashMap<NormalForm, Vec<usize>>,
}

impl Sample {
    pub fn new(g: &GraphOfGroups, words: Vec<Word>) -> Self {
        let values: Vec<NormalForm> = words.iter().map(|w| g.normal_form(w)).collect();
        let mut by_value: HashMap<NormalForm, Vec<usize>> = HashMap::new();
        for (i, v) in values.iter().enumerate() {
            by_value.entry(v.clone()).or_default().push(i);
        }
        Sample { words, values, by_value }
    }

    pub fn of(g: &GraphOfGroups, l: &Dfa, maxlen: usize) -> Self {
        Self::new(g, l.enumerate(maxlen))
    }

    /// Index pairs (i < j, or i = j never) whose values differ by at most one
    /// generator, in a deterministic order.
    pub fn close_pairs(&self, g: &GraphOfGroups) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            let mut near: Vec<usize> = Vec::new();
            near.extend(self.by_value[v].iter().copied());
            for s in 1..g.alphabet().len() {
                if let Some(js) = self.by_value.get(&g.mul_letter(v, s)) {
                    near.extend(js.iter().copied());
                }
            }
            near.sort_unstable();
            near.dedup();
            out.extend(near.into_iter().filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }
}

/// Outcome of a bounded constant search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtConstant {
    /// least passing constant, or `None` if some pair exceeds `bound`
    pub k: Option<usize>,
    /// a pair realizing `k`, or the failing pair
    pub worst: Option<(Word, Word)>,
    pub pairs: usize,
    pub maxlen: usize,
    pub bound: usize,
    pub sync: bool,
}

/// Least K such that all accepted pairs up to `maxlen` whose values are at
/// distance ≤ 1 fellow-travel at K.
pub fn ft_constant(g: &GraphOfGroups, l: &Dfa, maxlen: usize, sync: bool, bound: usize, cap: usize) -> Result<FtConstant, DeployError> {
    let ck = FtChecker::new(g, bound, cap)?;
    let sample = Sample::of(g, l, maxlen);
    let pairs = sample.close_pairs(g);
    let mut best: Option<(usize, usize, usize)> = Some((0, usize::MAX, usize::MAX));
    let mut fail = None;
    for &(i, j) in &pairs {
        let (u, v) = (&sample.words[i], &sample.words[j]);
        let k = if sync { ck.sync_constant(u, v) } else { ck.async_constant(u, v) };
        match k {
            None => {
                fail = Some((u.clone(), v.clone()));
                best = None;
                break;
            }
            Some(k) => {
                if let Some((bk, _, _)) = best {
                    if k > bk || (k == bk && bk > 0 && (i, j) < (best.unwrap().1, best.unwrap().2)) {
                        best = Some((k, i, j));
                    }
                }
            }
        }
    }
    let (k, worst) = match best {
        Some((k, i, j)) if i != usize::MAX => (Some(k), Some((sample.words[i].clone(), sample.words[j].clone()))),
        Some((k, _, _)) => (Some(k), None),
        None => (None, fail),
    };
    Ok(FtConstant { k, worst, pairs: pairs.len(), maxlen, bound, sync })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub witness: Option<(Word, Word)>,
    pub pairs: usize,
    pub maxlen: usize,
    pub k: usize,
}

/// Bounded test of L1 ∼ L2: every pair from L1 ∪ L2 with values at distance
/// ≤ 1 must fellow-travel asynchronously at `k`.
pub fn equivalent_upto(g: &GraphOfGroups, l1: &Dfa, l2: &Dfa, maxlen: usize, k: usize, cap: usize) -> Result<Equivalence, DeployError> {
    let ck = FtChecker::new(g, k, cap)?;
    let mut words = l1.enumerate(maxlen);
    words.extend(l2.enumerate(maxlen));
    words.sort_by(|a, b| shortlex_cmp(a, b));
    words.dedup();
    let sample = Sample::new(g, words);
    let pairs = sample.close_pairs(g);
    for &(i, j) in &pairs {
        if ck.async_path(&sample.words[i], &sample.words[j], k).is_none() {
            return Ok(Equivalence {
                equivalent: false,
                witness: Some((sample.words[i].clone(), sample.words[j].clone())),
                pairs: pairs.len(),
                maxlen,
                k,
            });
        }
    }
    Ok(Equivalence { equivalent: true, witness: None, pairs: pairs.len(), maxlen, k })
}
