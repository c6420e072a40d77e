//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use gogauto::fixtures;
use gogauto::fsa::{Sym, Word};
use gogauto::gog::{parse_spec, GraphOfGroups, OEdge};
use gogauto::ygraph::YGraph;

pub fn load(name: &str) -> GraphOfGroups {
    parse_spec(fixtures::by_name(name).expect("fixture")).expect("fixture parses")
}

pub fn w(g: &GraphOfGroups, s: &str) -> Word {
    g.alphabet().parse_word(s).expect("word parses")
}

pub type Mat = [i64; 4];

pub const I: Mat = [1, 0, 0, 1];
pub const S: Mat = [0, -1, 1, 0];
pub const ST: Mat = [0, -1, 1, 1];

pub fn mat_mul(x: Mat, y: Mat) -> Mat {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn mat_inv(x: Mat) -> Mat {
    [x[3], -x[1], -x[2], x[0]]
}

pub fn mat_pow(x: Mat, k: i64) -> Mat {
    let base = if k < 0 { mat_inv(x) } else { x };
    (0..k.unsigned_abs()).fold(I, |m, _| mat_mul(m, base))
}

/// Projective class: the sign with first nonzero entry positive.
pub fn projective(x: Mat) -> Mat {
    let first = x.iter().copied().find(|&v| v != 0).unwrap_or(1);
    if first < 0 {
        x.map(|v| -v)
    } else {
        x
    }
}

/// Matrix of a letter named `a`, `b`, `aK`, `bK`, `a^-1`, `b^-1` or `e`,
/// with a ↦ S and b ↦ ST.
pub fn letter_matrix(name: &str) -> Mat {
    if name == "e" {
        return I;
    }
    let (head, rest) = name.split_at(1);
    let base = match head {
        "a" => S,
        "b" => ST,
        other => panic!("no matrix for letter {other}"),
    };
    let k: i64 = match rest {
        "" => 1,
        r => r.strip_prefix('^').unwrap_or(r).parse().expect("exponent"),
    };
    mat_pow(base, k)
}

pub fn word_matrix(g: &GraphOfGroups, u: &[Sym]) -> Mat {
    u.iter().fold(I, |m, &s| mat_mul(m, letter_matrix(g.alphabet().name(s))))
}

/// Word lengths in PSL(2,Z) over the given generating matrices, by BFS up
/// to `radius`.
pub fn psl_ball(gens: &[Mat], radius: usize) -> HashMap<Mat, usize> {
    let mut dist = HashMap::from([(I, 0)]);
    let mut queue = VecDeque::from([I]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for &s in gens {
            let y = projective(mat_mul(x, s));
            if !dist.contains_key(&y) {
                dist.insert(y, d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Some monotone path of (i, j) pairs, each step advancing one or both
/// words, keeps d ≤ k. Plain depth-first search over all paths.
pub fn naive_async(d: &dyn Fn(usize, usize) -> usize, m: usize, n: usize, k: usize) -> bool {
    fn go(d: &dyn Fn(usize, usize) -> usize, i: usize, j: usize, m: usize, n: usize, k: usize) -> bool {
        if d(i, j) > k {
            return false;
        }
        if (i, j) == (m, n) {
            return true;
        }
        (i < m && j < n && go(d, i + 1, j + 1, m, n, k))
            || (i < m && go(d, i + 1, j, m, n, k))
            || (j < n && go(d, i, j + 1, m, n, k))
    }
    go(d, 0, 0, m, n, k)
}

/// Value of a syllable spelled in the letters of vertex `v`.
fn syllable_value(g: &GraphOfGroups, v: usize, y: &[Sym]) -> Word {
    let local: Word = y.iter().map(|&s| g.alphabet().local_at(s, v).expect("vertex letter")).collect();
    g.group(v).evaluate(&local).expect("evaluates")
}

/// Words of length ≤ `maxlen` spelled along paths of X: a syllable from each
/// edge label with the stable letter of a non-tree edge after it, then a
/// final syllable (empty, from the vertex language, or from an out-edge
/// label). A syllable entered by E is not followed by an exit along E⁻¹
/// when its value lies in the image of F_E.
pub fn assemble_paths(g: &GraphOfGroups, x: &YGraph, maxlen: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let max_hops = 2 * maxlen + x.edges.len() + 2;
    let mut stack: Vec<(usize, Option<OEdge>, Word, usize)> = vec![(x.start, None, Vec::new(), 0)];
    while let Some((v, inc, prefix, hops)) = stack.pop() {
        let room = maxlen - prefix.len();
        let vx = &x.vertices[v];
        let mut finals = vec![Vec::new()];
        finals.extend(vx.lang.enumerate(room));
        for e in x.edges.iter().filter(|e| e.from == v) {
            finals.extend(e.set.enumerate(room));
        }
        for y in finals {
            let mut u = prefix.clone();
            u.extend(y);
            out.insert(u);
        }
        if hops == max_hops {
            continue;
        }
        for e in x.edges.iter().filter(|e| e.from == v) {
            let stable = g.alphabet().stable(e.etype);
            for y in e.set.enumerate(room) {
                if inc == Some(g.inv(e.etype)) && g.emb0(e.etype).contains(&syllable_value(g, vx.vtype, &y)) {
                    continue;
                }
                let mut u = prefix.clone();
                u.extend(y);
                u.extend(stable);
                if u.len() <= maxlen {
                    stack.push((e.to, Some(e.etype), u, hops + 1));
                }
            }
        }
    }
    out
}
