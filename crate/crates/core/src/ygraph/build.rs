use std::collections::HashMap;

use super::{inverse_in_table, partition::shortlex_coset_partition, values, YAction, YEdge, YGraph, YGraphError, YVertex};
use crate::fsa::Dfa;
use crate::gog::{GraphOfGroups, HatEdge, OEdge, VertexId};
use crate::vgroups::Elem;

/// Shortlex coset cells of G_V by ∂₀F_E in the global letter order, as global
/// Dfas, plus their value sets when G_V is finite.
pub(crate) struct Cells {
    pub dfas: Vec<Dfa>,
    pub values: Option<Vec<Vec<Elem>>>,
}

pub(crate) fn cells(g: &GraphOfGroups, oe: OEdge) -> Result<Cells, YGraphError> {
    let v = g.src(oe);
    let grp = g.group(v);
    let ranks: Vec<usize> = (0..grp.nletters()).map(|a| g.alphabet().global(v, a)).collect();
    let local = shortlex_coset_partition(grp, g.emb0(oe), &ranks)?;
    let dfas: Vec<Dfa> = local.iter().map(|c| values::globalize(g, v, c)).collect();
    let vals = grp
        .elements()
        .map(|_| dfas.iter().map(|d| values::value_set(g, v, d).expect("finite").into_iter().collect()).collect());
    Ok(Cells { dfas, values: vals })
}

/// The special Y-graph X′: one vertex per (Ê, f ∈ F_E), edges labelled by
/// translated coset cells.
pub fn default_ygraph(g: &GraphOfGroups) -> Result<YGraph, YGraphError> {
    let mut keys: Vec<(HatEdge, usize)> = vec![(HatEdge::Base, 0)];
    let mut index: HashMap<(HatEdge, usize), usize> = HashMap::from([((HatEdge::Base, 0), 0)]);
    for oe in 0..g.num_oedges() {
        for f in 0..g.edge_group_order(oe) {
            index.insert((HatEdge::E(oe), f), keys.len());
            keys.push((HatEdge::E(oe), f));
        }
    }
    let mut vertices = Vec::new();
    for &(hat, f) in &keys {
        let vt = g.hat_dst(hat);
        let grp = g.group(vt);
        let name = match hat {
            HatEdge::Base => g.hat_edge_name(hat),
            HatEdge::E(oe) => format!("{}.{}", g.oedge_name(oe), g.edge(oe).table.names[f]),
        };
        if let HatEdge::E(oe) = hat {
            if grp.elements().is_none() && !g.emb1(oe).images[f].is_empty() {
                return Err(YGraphError::Unsupported(format!("translated labels over the infinite group at {name}")));
            }
        }
        vertices.push(YVertex { name, vtype: vt, class: grp.class_label().to_string(), lang: values::vertex_language(g, vt) });
    }

    let mut cell_cache: HashMap<OEdge, Cells> = HashMap::new();
    let mut edges = Vec::new();
    for (xi, &(hat, f)) in keys.iter().enumerate() {
        let vt = g.hat_dst(hat);
        let tau = match hat {
            HatEdge::Base => Vec::new(),
            HatEdge::E(oe) => g.vinv(vt, &g.emb1(oe).images[f]),
        };
        for oe in g.out_edges(vt) {
            if !cell_cache.contains_key(&oe) {
                cell_cache.insert(oe, cells(g, oe)?);
            }
            let c = &cell_cache[&oe];
            let pinch = hat == HatEdge::E(g.inv(oe));
            let forbidden: &[Elem] = if pinch { &g.emb0(oe).images } else { &[] };
            for fp in 0..g.edge_group_order(oe) {
                let set = match &c.values {
                    Some(vals) => {
                        let want: Vec<Elem> =
                            vals[fp].iter().map(|x| g.vmul(vt, &tau, x)).filter(|x| !forbidden.contains(x)).collect();
                        values::words_valued_in(g, vt, &vertices[xi].lang, &want)
                    }
                    None => values::words_valued_outside(g, vt, &c.dfas[fp].and(&vertices[xi].lang), forbidden),
                };
                if set.is_empty() {
                    continue;
                }
                let to = index[&(HatEdge::E(oe), fp)];
                edges.push(YEdge { name: format!("e{}", edges.len()), from: xi, to, etype: oe, set: set.minimize() });
            }
        }
    }

    let mut actions = Vec::new();
    for (xi, &(hat, _)) in keys.iter().enumerate() {
        let vt = g.hat_dst(hat);
        for oe in g.out_edges(vt) {
            let t = &g.edge(oe).table;
            for f in 0..t.order() {
                let finv = inverse_in_table(t, f);
                let mut perm: Vec<usize> = (0..keys.len()).collect();
                for fp in 0..t.order() {
                    perm[index[&(HatEdge::E(oe), fp)]] = index[&(HatEdge::E(oe), t.mul(fp, finv))];
                }
                actions.push(YAction { vertex: xi, etype: oe, f, perm });
            }
        }
    }
    Ok(YGraph { vertices, edges, start: 0, actions })
}

/// X ≅ Y with full permitted edge labels.
pub fn biautomatic_ygraph(g: &GraphOfGroups) -> YGraph {
    let vertices: Vec<YVertex> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, vx)| YVertex {
            name: vx.name.clone(),
            vtype: v,
            class: vx.group.class_label().to_string(),
            lang: values::vertex_language(g, v),
        })
        .collect();
    let mut x = YGraph { vertices, edges: Vec::new(), start: g.base(), actions: Vec::new() };
    for oe in 0..g.num_oedges() {
        x.edges.push(YEdge {
            name: g.oedge_name(oe),
            from: g.src(oe),
            to: g.dst(oe),
            etype: oe,
            set: Dfa::empty(g.alphabet().len()),
        });
    }
    for oe in 0..g.num_oedges() {
        let v: VertexId = g.src(oe);
        let lang = &x.vertices[v].lang;
        let set = if x.needs_full_cover(g, v, oe) {
            lang.clone()
        } else {
            values::words_valued_outside(g, v, lang, &g.emb0(oe).images)
        };
        x.edges[oe].set = set.minimize();
    }
    x.edges.retain(|e| !e.set.is_empty());
    let n = x.vertices.len();
    for v in 0..n {
        for oe in g.out_edges(v) {
            for f in 0..g.edge_group_order(oe) {
                x.actions.push(YAction { vertex: v, etype: oe, f, perm: (0..n).collect() });
            }
        }
    }
    x
}
