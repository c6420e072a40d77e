//! Vertex identification and prescribed-structure splitting.

use std::collections::{BTreeMap, BTreeSet};

use super::{compile::language_dfa, validate_ygraph, values, YAction, YEdge, YGraph, YGraphError, YVertex};
use crate::deploy::{equivalent_upto, DeployError};
use crate::fsa::{Dfa, Word};
use crate::gog::{GraphOfGroups, DEFAULT_NODE_CAP};
use crate::vgroups::Elem;

#[derive(Clone, Debug)]
pub enum CollapseOutcome {
    Success(YGraph),
    /// `witness` is a pair of words that fails the bounded fellow-traveller
    /// test, when the failure comes from one.
    Failure { witness: Option<(Word, Word)>, reason: String },
}

fn ft_err(e: DeployError) -> YGraphError {
    match e {
        DeployError::Gog(e) => YGraphError::Gog(e),
        DeployError::Fsa(e) => YGraphError::Fsa(e),
        DeployError::YGraph(e) => e,
        other => YGraphError::Unsupported(other.to_string()),
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, a: usize) -> usize {
        let p = self.0[a];
        if p == a {
            return a;
        }
        let r = self.find(p);
        self.0[a] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// L_𝒳 read from `v` instead of the start.
pub(crate) fn suffix_language(g: &GraphOfGroups, x: &YGraph, v: usize) -> Result<Dfa, YGraphError> {
    let mut y = x.clone();
    y.start = v;
    Ok(language_dfa(g, &y)?.dfa)
}

/// Identify `v` and `v2` together with everything the edge-group actions
/// force, provided each forced pair has suffix languages that fellow-travel
/// at `k` on words up to `maxlen`.
pub fn collapse(g: &GraphOfGroups, x: &YGraph, v: usize, v2: usize, k: usize, maxlen: usize) -> Result<CollapseOutcome, YGraphError> {
    let nv = x.vertices.len();
    for id in [v, v2] {
        if id >= nv {
            return Err(YGraphError::NoVertex(id.to_string()));
        }
    }
    if x.vertices[v].vtype != x.vertices[v2].vtype {
        return Err(YGraphError::Unsupported(format!(
            "{} and {} lie over different vertices of Y",
            x.vertices[v].name, x.vertices[v2].name
        )));
    }
    let mut dsu = Dsu((0..nv).collect());
    dsu.union(v, v2);
    loop {
        let mut changed = false;
        for a in &x.actions {
            for i in 0..nv {
                let r = dsu.find(i);
                if r != i {
                    changed |= dsu.union(a.perm[i], a.perm[r]);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nv {
        classes.entry(dsu.find(i)).or_default().push(i);
    }
    for members in classes.values() {
        let t = x.vertices[members[0]].vtype;
        if let Some(&bad) = members.iter().find(|&&m| x.vertices[m].vtype != t) {
            return Ok(CollapseOutcome::Failure {
                witness: None,
                reason: format!("closure identifies {} with {} over another vertex of Y", x.vertices[bad].name, x.vertices[members[0]].name),
            });
        }
    }

    // suffix languages of every forced pair
    let mut suffix: BTreeMap<usize, Dfa> = BTreeMap::new();
    for members in classes.values().filter(|m| m.len() > 1) {
        for &m in members {
            suffix.insert(m, suffix_language(g, x, m)?);
        }
        for &m in &members[1..] {
            let eq = equivalent_upto(g, &suffix[&members[0]], &suffix[&m], maxlen, k, DEFAULT_NODE_CAP).map_err(ft_err)?;
            if !eq.equivalent {
                return Ok(CollapseOutcome::Failure {
                    witness: eq.witness,
                    reason: format!(
                        "suffix languages at {} and {} do not fellow-travel at K={k} up to length {maxlen}",
                        x.vertices[members[0]].name, x.vertices[m].name
                    ),
                });
            }
        }
    }

    let merged = match merge(g, x, &mut dsu, &classes) {
        Ok(m) => m,
        Err(reason) => return Ok(CollapseOutcome::Failure { witness: None, reason }),
    };
    if let Some(viol) = validate_ygraph(g, &merged).into_iter().next() {
        return Ok(CollapseOutcome::Failure { witness: None, reason: format!("{}: {}", viol.axiom, viol.detail) });
    }
    let before = language_dfa(g, x)?.dfa;
    let after = language_dfa(g, &merged)?.dfa;
    let eq = equivalent_upto(g, &before, &after, maxlen, k, DEFAULT_NODE_CAP).map_err(ft_err)?;
    if !eq.equivalent {
        return Ok(CollapseOutcome::Failure { witness: eq.witness, reason: "collapsed language is not equivalent".into() });
    }
    Ok(CollapseOutcome::Success(merged))
}

/// Keep one representative per class: the start if present, otherwise the
/// member whose out-edges cover the most.
fn merge(g: &GraphOfGroups, x: &YGraph, dsu: &mut Dsu, classes: &BTreeMap<usize, Vec<usize>>) -> Result<YGraph, String> {
    let nv = x.vertices.len();
    let mut rep_of_class: BTreeMap<usize, usize> = BTreeMap::new();
    for (&root, members) in classes {
        let rep = if members.contains(&x.start) {
            x.start
        } else {
            *members
                .iter()
                .max_by_key(|&&m| {
                    let full = g.out_edges(x.vertices[m].vtype).into_iter().filter(|&oe| x.needs_full_cover(g, m, oe)).count();
                    (full, std::cmp::Reverse(m))
                })
                .unwrap()
        };
        rep_of_class.insert(root, rep);
    }
    let cls: Vec<usize> = (0..nv).map(|i| rep_of_class[&dsu.find(i)]).collect();

    // edges of the representatives, parallel labels of equal type joined
    let mut joined: BTreeMap<(usize, usize, usize), Dfa> = BTreeMap::new();
    for e in &x.edges {
        if cls[e.from] != e.from {
            continue;
        }
        let key = (e.from, cls[e.to], e.etype);
        let set = match joined.remove(&key) {
            Some(s) => s.or(&e.set),
            None => e.set.clone(),
        };
        joined.insert(key, set);
    }
    // keep what the start still reaches
    let mut seen = vec![false; nv];
    let mut stack = vec![cls[x.start]];
    seen[cls[x.start]] = true;
    while let Some(u) = stack.pop() {
        for (&(from, to, _), _) in joined.iter() {
            if from == u && !seen[to] {
                seen[to] = true;
                stack.push(to);
            }
        }
    }
    let kept: Vec<usize> = (0..nv).filter(|&i| seen[i]).collect();
    let new_id: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(j, &i)| (i, j)).collect();

    let vertices: Vec<YVertex> = kept.iter().map(|&i| x.vertices[i].clone()).collect();
    let edges: Vec<YEdge> = joined
        .into_iter()
        .filter(|((from, _, _), _)| seen[*from])
        .enumerate()
        .map(|(n, ((from, to, etype), set))| YEdge {
            name: format!("e{n}"),
            from: new_id[&from],
            to: new_id[&to],
            etype,
            set: set.minimize(),
        })
        .collect();
    let mut actions = Vec::new();
    for a in x.actions.iter().filter(|a| seen[a.vertex] && cls[a.vertex] == a.vertex) {
        let mut perm = vec![usize::MAX; kept.len()];
        for &i in &kept {
            let img = cls[a.perm[i]];
            let Some(&j) = new_id.get(&img) else {
                return Err(format!("action at {} sends {} outside the collapsed graph", x.vertices[a.vertex].name, x.vertices[i].name));
            };
            perm[new_id[&i]] = j;
        }
        let distinct: BTreeSet<usize> = perm.iter().copied().collect();
        if distinct.len() != perm.len() {
            return Err(format!("action at {} is not a permutation after collapsing", x.vertices[a.vertex].name));
        }
        actions.push(YAction { vertex: new_id[&a.vertex], etype: a.etype, f: a.f, perm });
    }
    Ok(YGraph { vertices, edges, start: new_id[&cls[x.start]], actions })
}

fn label_has(g: &GraphOfGroups, x: &YGraph, e: &YEdge, val: &Elem) -> bool {
    let vt = x.vertices[e.from].vtype;
    !values::words_valued_in(g, vt, &e.set, std::slice::from_ref(val)).is_empty()
}

/// Re-spell `set` (words of some language at vertex type `vt`) in `lang`.
fn respell(g: &GraphOfGroups, vt: usize, set: &Dfa, lang: &Dfa) -> Result<Dfa, YGraphError> {
    let vals = values::value_set(g, vt, set).ok_or_else(|| YGraphError::Unsupported("re-spelling over an infinite group".into()))?;
    let vals: Vec<Elem> = vals.into_iter().collect();
    Ok(values::words_valued_in(g, vt, lang, &vals).minimize())
}

/// Give the conjugate of the vertex group reached by `u` the structure
/// `target`, with the orbit copies the edge-group actions demand.
///
/// `u` is traced through X along its normal form; the targeted position is
/// its value with the final syllable dropped.
pub fn split_for_element(g: &GraphOfGroups, x: &YGraph, u: &[usize], class: &str, target: &Dfa) -> Result<YGraph, YGraphError> {
    let text = g.alphabet().format_word(u);
    let nf = g.normal_form(u);
    if nf.steps.is_empty() {
        return Err(YGraphError::NotEmbedded(text));
    }
    // trace: cur vertex, previous vertex and edge
    let mut cur = x.start;
    let mut prev: Option<(usize, usize)> = None;
    let mut last_edge = 0;
    for (i, &(oe, _)) in nf.steps.iter().enumerate() {
        let val = nf.syllable(i);
        let last = i + 1 == nf.steps.len();
        let found = x.out_edges(cur).find(|(_, e)| e.etype == oe && label_has(g, x, e, val));
        let Some((ei, e)) = found else {
            return Err(if last { YGraphError::NotInLabel(text) } else { YGraphError::NotEmbedded(text) });
        };
        if last {
            last_edge = ei;
        } else {
            prev = Some((cur, oe));
            cur = e.to;
        }
    }
    let w = cur;
    let oe = x.edges[last_edge].etype;
    let wt = x.vertices[w].vtype;
    let nt = g.dst(oe);
    let ubar = nf.syllable(nf.steps.len() - 1).clone();
    let finite_target = g.group(nt).elements().is_some();

    // orbit of w under the previous vertex's F_{E'}: (w', left factor)
    let mut sources: Vec<(usize, Elem)> = vec![(w, Vec::new())];
    if let Some((p, pe)) = prev {
        for a in x.actions.iter().filter(|a| a.vertex == p && a.etype == pe) {
            let d1 = g.emb1(pe).images[a.f].clone();
            if !d1.is_empty() {
                sources.push((a.perm[w], d1));
            }
        }
    }

    let mut y = x.clone();
    let order = g.edge_group_order(oe);
    let mut new_ids = Vec::with_capacity(order);
    // new vertex per f, duplicating the old target of ū·∂₀f
    for f in 0..order {
        let val = g.vmul(wt, &ubar, &g.emb0(oe).images[f]);
        let old = x.out_edges(w).find(|(_, e)| e.etype == oe && label_has(g, x, e, &val)).map(|(_, e)| e.to).ok_or_else(|| YGraphError::NotInLabel(text.clone()))?;
        let lang = if finite_target {
            target.clone()
        } else if target.language_eq(&x.vertices[old].lang) {
            x.vertices[old].lang.clone()
        } else {
            return Err(YGraphError::Unsupported("a new structure on an infinite vertex group needs re-spelled labels".into()));
        };
        let id = y.vertices.len();
        y.vertices.push(YVertex { name: format!("{}*{}", x.vertices[old].name, f), vtype: nt, class: class.to_string(), lang: lang.clone() });
        new_ids.push((id, old, val));
        let back = g.inv(oe);
        for (_, e) in x.out_edges(old) {
            let mut set = if finite_target { respell(g, nt, &e.set, &lang)? } else { e.set.clone() };
            if e.etype == back {
                set = values::words_valued_outside(g, nt, &set, &g.emb0(back).images).minimize();
            }
            if set.is_empty() {
                continue;
            }
            y.edges.push(YEdge { name: format!("e{}", y.edges.len()), from: id, to: e.to, etype: e.etype, set });
        }
        for a in x.actions.iter().filter(|a| a.vertex == old) {
            y.actions.push(YAction { vertex: id, etype: a.etype, f: a.f, perm: a.perm.clone() });
        }
    }
    let total = y.vertices.len();
    for a in &mut y.actions {
        let n0 = a.perm.len();
        a.perm.extend(n0..total);
    }

    // move the values ∂₁f'·ū·∂₀f from the old edges to the new vertices
    for (src, left) in &sources {
        let st = x.vertices[*src].vtype;
        for &(id, old, ref val) in &new_ids {
            let moved = g.vmul(st, left, val);
            let pos = y.edges.iter().position(|e| e.from == *src && e.etype == oe && e.to == old);
            let Some(pos) = pos else { continue };
            let single = values::words_valued_in(g, st, &y.edges[pos].set, std::slice::from_ref(&moved)).minimize();
            if single.is_empty() {
                continue;
            }
            y.edges[pos].set = y.edges[pos].set.diff(&single).minimize();
            y.edges.push(YEdge { name: format!("e{}", y.edges.len()), from: *src, to: id, etype: oe, set: single });
        }
    }
    y.edges.retain(|e| !e.set.is_empty());

    // actions at each source: the new vertices follow the label translation
    let index: BTreeMap<usize, usize> = new_ids.iter().enumerate().map(|(f, &(id, _, _))| (id, f)).collect();
    let t = &g.edge(oe).table;
    for (src, _) in &sources {
        for a in y.actions.iter_mut().filter(|a| a.vertex == *src && a.etype == oe) {
            let finv = super::inverse_in_table(t, a.f);
            for (&id, &f) in &index {
                a.perm[id] = new_ids[t.mul(f, finv)].0;
            }
        }
    }
    Ok(drop_unreachable(y))
}

fn drop_unreachable(y: YGraph) -> YGraph {
    let seen = y.reachable();
    if seen.iter().all(|&s| s) {
        return y;
    }
    let kept: Vec<usize> = (0..y.vertices.len()).filter(|&i| seen[i]).collect();
    let new_id: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(j, &i)| (i, j)).collect();
    let vertices = kept.iter().map(|&i| y.vertices[i].clone()).collect();
    let edges = y
        .edges
        .iter()
        .filter(|e| seen[e.from])
        .map(|e| YEdge { to: new_id[&e.to], from: new_id[&e.from], ..e.clone() })
        .collect();
    let actions = y
        .actions
        .iter()
        .filter(|a| seen[a.vertex])
        .map(|a| YAction { vertex: new_id[&a.vertex], etype: a.etype, f: a.f, perm: kept.iter().map(|&i| new_id.get(&a.perm[i]).copied().unwrap_or(usize::MAX)).collect() })
        .collect();
    YGraph { vertices, edges, start: new_id[&y.start], actions }
}
