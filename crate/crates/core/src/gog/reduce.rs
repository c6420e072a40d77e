use super::{Edge, GogError, GraphOfGroups, LetterKind, Vertex, VertexId};
use crate::fsa::Word;
use crate::vgroups::{Elem, Embedding};

/// A reduced graph of groups with the same fundamental group.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub graph: GraphOfGroups,
    /// image in the reduced alphabet of each letter of the original alphabet
    pub letter_images: Vec<Word>,
    /// names of collapsed edges, in order
    pub collapsed: Vec<String>,
}

impl Reduction {
    pub fn map_word(&self, w: &[usize]) -> Word {
        w.iter().flat_map(|&s| self.letter_images[s].iter().copied()).collect()
    }
}

enum Home {
    Identity,
    At(String, Elem),
    Stable(String, bool),
}

/// Collapse every non-loop tree edge whose terminal embedding is onto.
pub fn reduce(g: &GraphOfGroups) -> Result<Reduction, GogError> {
    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut base = g.base();
    let mut homes: Vec<Home> = g
        .alphabet()
        .letters()
        .iter()
        .map(|l| match &l.kind {
            LetterKind::Identity => Home::Identity,
            LetterKind::Vertex(at) => Home::At(vertices[at[0].0].name.clone(), vec![at[0].1]),
            LetterKind::Stable(oe) => Home::Stable(g.edge(*oe).name.clone(), oe % 2 == 1),
        })
        .collect();
    let mut collapsed = Vec::new();

    loop {
        let cur = GraphOfGroups::new(vertices.clone(), edges.clone(), base)?;
        let Some(oe) = cur.reduced_violation() else {
            let letter_images = homes
                .iter()
                .map(|h| match h {
                    Home::Identity => Vec::new(),
                    Home::At(v, w) => {
                        let v = cur.vertex_by_name(v).expect("home vertex survives");
                        w.iter().map(|&a| cur.alphabet().global(v, a)).collect()
                    }
                    Home::Stable(e, inv) => {
                        let oe = cur.oedge_by_name(e).expect("non-tree edges survive") + *inv as usize;
                        vec![cur.alphabet().stable(oe).expect("non-tree")]
                    }
                })
                .collect();
            return Ok(Reduction { graph: cur, letter_images, collapsed });
        };
        let e = cur.edge(oe);
        if e.from == e.to {
            return Err(GogError::FullLoop(e.name.clone()));
        }
        if !e.tree {
            return Err(GogError::FullNonTreeEdge(e.name.clone()));
        }
        let (v, w) = (cur.src(oe), cur.dst(oe));
        let (gv, gw) = (cur.group(v), cur.group(w));
        let (into_w, into_v) = (cur.emb1(oe).clone(), cur.emb0(oe).clone());
        let transport = |x: &[usize]| -> Elem {
            let x = gw.evaluate(x).expect("local word");
            let f = into_w.preimage(&x).expect("onto");
            into_v.images[f].clone()
        };
        let (vname, wname) = (vertices[v].name.clone(), vertices[w].name.clone());
        for h in homes.iter_mut() {
            if let Home::At(name, x) = h {
                if *name == wname {
                    *x = transport(x);
                    *name = vname.clone();
                }
            }
        }
        let gone = oe / 2;
        collapsed.push(edges[gone].name.clone());
        edges.remove(gone);
        for ed in edges.iter_mut() {
            for (end, emb) in [(&mut ed.from, &mut ed.d0), (&mut ed.to, &mut ed.d1)] {
                if *end == w {
                    *end = v;
                    let images = emb.images.iter().map(|x| gv.evaluate(&transport(x)).expect("local word")).collect();
                    *emb = Embedding { images };
                }
            }
        }
        let remap = |x: VertexId| if x > w { x - 1 } else { x };
        for ed in edges.iter_mut() {
            ed.from = remap(ed.from);
            ed.to = remap(ed.to);
        }
        if base == w {
            base = v;
        }
        base = remap(base);
        vertices.remove(w);
    }
}
