//! R_v languages over a tree ball and the boundary descriptors attached to
//! the vertices.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::{ends, gamma_path, tree_ball, BsError, TreeBall, TreePath, TreeVertex};
use crate::deploy::{deployment_of, erase_identity, DeployOptions, VisibleMachine, SYLLABLE_SLACK};
use crate::fsa::{Dfa, Word};
use crate::gog::{GraphOfGroups, HatEdge, NormalForm};
use crate::ygraph::{language_dfa, YGraph};

#[derive(Clone, Copy, Debug)]
pub struct BoundaryOptions {
    pub node_cap: usize,
    /// cap on product states
    pub state_cap: usize,
    /// longest words checked against γ by enumeration
    pub maxlen: usize,
    /// prefix lengths used to count ends of induced languages
    pub end_probe: usize,
    pub deploy: DeployOptions,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        BoundaryOptions { node_cap: 100_000, state_cap: 200_000, maxlen: 8, end_probe: 6, deploy: DeployOptions::default() }
    }
}

#[derive(Clone, Debug)]
pub struct VertexBoundary {
    pub vertex: TreeVertex,
    pub depth: usize,
    /// words of L whose γ-path ends at this vertex
    pub r_v: Dfa,
    pub class: String,
    /// number of ends of the induced language when the stabilizer is
    /// infinite; `None` for a finite stabilizer (empty boundary)
    pub points: Option<usize>,
    /// counts of infinitely extendable prefixes of each length
    pub extendable: Vec<usize>,
    /// |G_{∂₁E} ∖ ∂₁F_E| when finite
    pub fiber: Option<usize>,
}

impl VertexBoundary {
    pub fn descriptor(&self, g: &GraphOfGroups) -> String {
        let what = match self.points {
            None => "empty".to_string(),
            Some(n) => format!("{n}-point"),
        };
        format!("{} {} {}", self.vertex.stabilizer(g), self.class, what)
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryReport {
    pub depth: usize,
    pub vertices: Vec<VertexBoundary>,
    /// accepted words whose γ leaves the ball
    pub beyond: Dfa,
    pub disjoint: bool,
    /// the R_v together with `beyond` recover L exactly
    pub exhaustive: bool,
    /// per depth k, the R_v at depth k cover exactly the words whose
    /// shortest decomposition crosses k edges
    pub strata_ok: bool,
    /// every sampled word lies in the R_v of its γ endpoint
    pub sample_ok: bool,
    pub sampled: usize,
    pub cylinders: Vec<TreePath>,
}

impl BoundaryReport {
    pub fn ok(&self) -> bool {
        self.disjoint && self.exhaustive && self.strata_ok && self.sample_ok
    }

    pub fn to_text(&self, g: &GraphOfGroups) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "depth={}", self.depth);
        let _ = writeln!(out, "vertices={}", self.vertices.len());
        let _ = writeln!(out, "cylinders={}", self.cylinders.len());
        let _ = writeln!(out, "disjoint={}", self.disjoint);
        let _ = writeln!(out, "exhaustive={}", self.exhaustive);
        let _ = writeln!(out, "strata={}", self.strata_ok);
        let _ = writeln!(out, "sampled={}", self.sampled);
        let _ = writeln!(out, "sample_ok={}", self.sample_ok);
        for (i, v) in self.vertices.iter().enumerate() {
            let pts = v.points.map_or("empty".to_string(), |n| n.to_string());
            let fiber = v.fiber.map_or("infinite".to_string(), |n| n.to_string());
            let _ = writeln!(
                out,
                "vertex.{i} id={} depth={} stabilizer={} class={} boundary={pts} fiber={fiber} r_states={}",
                v.vertex.id(g),
                v.depth,
                v.vertex.stabilizer(g),
                v.class,
                v.r_v.num_states()
            );
        }
        for (i, c) in self.cylinders.iter().enumerate() {
            let _ = writeln!(out, "cylinder.{i}={}", c.display(g));
        }
        out
    }
}

/// Position of a prefix value relative to the ball.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Pos {
    At(NormalForm),
    /// a long syllable in an infinite vertex group at ball vertex i
    Far(usize),
    Beyond,
}

fn locate(g: &GraphOfGroups, ball: &TreeBall, nf: &NormalForm, scap: usize) -> Pos {
    let v = g.end_vertex(nf);
    let t = TreeVertex::of(g, nf, v);
    match ball.index.get(&t) {
        None => Pos::Beyond,
        Some(&i) if g.group(v).elements().is_none() && nf.last_syllable().len() > scap => Pos::Far(i),
        Some(_) => Pos::At(nf.clone()),
    }
}

/// Product of L with γ tracking: one Dfa over A whose states carry the ball
/// vertex of the current value (or none once γ leaves the ball).
struct Product {
    dfa: Dfa,
    vertex: Vec<Option<usize>>,
}

fn product(g: &GraphOfGroups, l: &Dfa, ball: &TreeBall, cap: usize) -> Result<Product, BsError> {
    let n = g.alphabet().len();
    let scap = (0..g.num_oedges()).flat_map(|oe| g.emb1(oe).images.iter().map(Vec::len)).max().unwrap_or(0) + SYLLABLE_SLACK;
    let vertex_of = |p: &Pos| -> Option<usize> {
        match p {
            Pos::At(nf) => ball.index.get(&TreeVertex::of(g, nf, g.end_vertex(nf))).copied(),
            Pos::Far(i) => Some(*i),
            Pos::Beyond => None,
        }
    };
    let start = (l.start(), Pos::At(g.identity()));
    let mut ids: HashMap<(u32, Pos), u32> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut d = Dfa::empty(n);
    let mut queue = VecDeque::from([0u32]);
    while let Some(q) = queue.pop_front() {
        let (lq, pos) = states[q as usize].clone();
        for a in 0..n {
            let Some(lq2) = l.next(lq, a) else { continue };
            let pos2 = match &pos {
                Pos::Beyond => Pos::Beyond,
                Pos::At(nf) => locate(g, ball, &g.mul_letter(nf, a), scap),
                Pos::Far(i) => {
                    let v = ball.vertices[*i].vertex_type(g);
                    if !g.alphabet().is_stable(a) && g.alphabet().local_at(a, v).is_some() {
                        Pos::Far(*i)
                    } else if ball.depth[*i] == ball.radius {
                        Pos::Beyond
                    } else {
                        return Err(BsError::InfiniteDegree(ball.vertices[*i].id(g)));
                    }
                }
            };
            let key = (lq2, pos2);
            let p = match ids.get(&key) {
                Some(&p) => p,
                None => {
                    if states.len() >= cap {
                        return Err(BsError::CapExceeded(cap));
                    }
                    let p = d.add_state(false);
                    ids.insert(key.clone(), p);
                    states.push(key);
                    queue.push_back(p);
                    p
                }
            };
            d.set(q, a, p);
        }
    }
    let vertex = states
        .iter()
        .map(|(lq, p)| if l.is_accept(*lq) { vertex_of(p) } else { None })
        .collect();
    for (q, (lq, _)) in states.iter().enumerate() {
        d.set_accept(q as u32, l.is_accept(*lq));
    }
    Ok(Product { dfa: d, vertex })
}

fn with_accepts(d: &Dfa, keep: impl Fn(u32) -> bool) -> Dfa {
    let mut out = d.clone();
    for q in 0..d.num_states() as u32 {
        out.set_accept(q, d.is_accept(q) && keep(q));
    }
    out.minimize()
}

/// Number of words of each length 1..=k after which an infinite
/// continuation exists.
pub fn extendable_counts(d: &Dfa, k: usize) -> Vec<usize> {
    let d = d.pruned();
    let n = d.num_states();
    // states from which an infinite path exists: iterate removal of states
    // with no successor left
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for q in 0..n {
            if alive[q] && !(0..d.nletters()).any(|a| d.next(q as u32, a).is_some_and(|p| alive[p as usize])) {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut layer: HashMap<u32, usize> = HashMap::from([(d.start(), 1)]);
    let mut out = Vec::new();
    for _ in 0..k {
        let mut next: HashMap<u32, usize> = HashMap::new();
        for (&q, &c) in &layer {
            for a in 0..d.nletters() {
                if let Some(p) = d.next(q, a) {
                    if alive[p as usize] {
                        *next.entry(p).or_insert(0) += c;
                    }
                }
            }
        }
        out.push(next.values().sum());
        layer = next;
    }
    out
}

/// R_v for every vertex of the depth ball, checked for disjointness and
/// exhaustion, with boundary descriptors from the induced languages.
pub fn boundary_report(g: &GraphOfGroups, x: &YGraph, depth: usize, opts: BoundaryOptions) -> Result<BoundaryReport, BsError> {
    let handle = language_dfa(g, x)?;
    let l = handle.dfa.clone();
    let ball = tree_ball(g, depth, opts.node_cap)?;
    let prod = product(g, &l, &ball, opts.state_cap)?;
    let r: Vec<Dfa> = (0..ball.len()).map(|i| with_accepts(&prod.dfa, |q| prod.vertex[q as usize] == Some(i))).collect();
    let beyond = with_accepts(&prod.dfa, |q| prod.vertex[q as usize].is_none());

    let disjoint = (0..r.len()).all(|i| (i + 1..r.len()).all(|j| r[i].and(&r[j]).is_empty())) && r.iter().all(|ri| ri.and(&beyond).is_empty());
    let union = r.iter().fold(beyond.clone(), |acc, ri| acc.or(ri));
    let exhaustive = union.language_eq(&l);

    let sample: Vec<Word> = l.enumerate(opts.maxlen);
    let sample_ok = sample.iter().all(|w| {
        let end = gamma_path(g, w).end().clone();
        match ball.index.get(&end) {
            Some(&i) => r[i].accepts(w),
            None => beyond.accepts(w),
        }
    });

    let vm = VisibleMachine::new(g, &l, opts.state_cap)?;
    let within: Vec<Dfa> = (0..=depth).map(|k| crossings_at_most(&vm, k)).collect();
    let strata_ok = (0..=depth).all(|k| {
        let want = if k == 0 { within[0].clone() } else { within[k].diff(&within[k - 1]) };
        let got = (0..ball.len()).filter(|&i| ball.depth[i] == k).fold(Dfa::empty(l.nletters()), |acc, i| acc.or(&r[i]));
        got.language_eq(&want)
    }) && beyond.language_eq(&l.diff(&within[depth]));
    let mut dep = deployment_of(g, &vm, &handle, opts.deploy)?;
    let mut vertices = Vec::new();
    for (i, t) in ball.vertices.iter().enumerate() {
        let entry = dep.at(t.edge, &t.rep)?;
        let w = t.vertex_type(g);
        let order = g.group(w).elements().map(|e| e.len());
        let (points, extendable) = match order {
            Some(_) => (None, Vec::new()),
            None => {
                let counts = extendable_counts(&erase_identity(&entry.lang), opts.end_probe);
                let tail = &counts[counts.len() / 2..];
                let stable = tail.windows(2).all(|p| p[0] == p[1]);
                (stable.then(|| *tail.last().unwrap_or(&0)), counts)
            }
        };
        let fiber = order.map(|o| {
            o - match t.edge {
                HatEdge::Base => 1,
                HatEdge::E(oe) => g.edge_group_order(oe),
            }
        });
        vertices.push(VertexBoundary { vertex: t.clone(), depth: ball.depth[i], r_v: r[i].clone(), class: entry.class, points, extendable, fiber });
    }
    Ok(BoundaryReport {
        depth,
        vertices,
        beyond,
        disjoint,
        exhaustive,
        strata_ok,
        sample_ok,
        sampled: sample.len(),
        cylinders: ends(g, depth, opts.node_cap)?,
    })
}

/// Words of L with a decomposition crossing at most `k` edges.
fn crossings_at_most(vm: &VisibleMachine, k: usize) -> Dfa {
    let n = vm.vis.nletters();
    let ns = vm.num_states();
    let id = |q: u32, c: usize| (c * ns) as u32 + q;
    let mut nfa = crate::fsa::Nfa::new(n);
    for _ in 0..=k {
        for q in 0..ns as u32 {
            nfa.add_state(vm.dfa.is_accept(q));
        }
    }
    nfa.add_start(id(vm.start(), 0));
    for c in 0..=k {
        for (q, s, p) in vm.dfa.transitions() {
            match vm.vis.edge_of(s) {
                None => nfa.add(id(q, c), Some(s), id(p, c)),
                Some(_) if c < k => nfa.add(id(q, c), Some(s), id(p, c + 1)),
                Some(_) => {}
            }
        }
    }
    vm.vis.erase(&nfa.determinize()).minimize()
}

/// Words of `l` up to `maxlen` grouped by the ball vertex their γ ends at.
pub fn sample_by_vertex(g: &GraphOfGroups, ball: &TreeBall, l: &Dfa, maxlen: usize) -> Vec<Vec<Word>> {
    let mut out = vec![Vec::new(); ball.len()];
    for w in l.enumerate(maxlen) {
        if let Some(&i) = ball.index.get(gamma_path(g, &w).end()) {
            out[i].push(w);
        }
    }
    out
}

