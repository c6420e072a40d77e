use std::collections::HashMap;

use super::{Edge, GogError, OEdge, Vertex, VertexId};
use crate::fsa::{Sym, Word};
use crate::vgroups::E;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetterKind {
    Identity,
    /// Every (vertex, local letter) pair the letter stands for.
    Vertex(Vec<(VertexId, Sym)>),
    /// t_E for a non-tree oriented edge; the inverse letter is t_{E⁻¹}.
    Stable(OEdge),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub aliases: Vec<String>,
    pub inverse: Sym,
    pub kind: LetterKind,
}

/// Convenient alphabet: vertex letters with edge-group letters shared across
/// tree edges, the identity letter `e` at index 0, and stable letters.
#[derive(Clone, Debug)]
pub struct Alphabet {
    letters: Vec<Letter>,
    local: Vec<Vec<Sym>>,
    vertex_letters: Vec<Vec<Sym>>,
    /// per oriented edge, the letter of ∂₁(f) for each table element f
    edge_letters: Vec<Vec<Sym>>,
    stable: Vec<Option<Sym>>,
    lookup: HashMap<String, Sym>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        // smaller index stays the root so the first declared name wins
        if a < b {
            self.0[b] = a;
        } else {
            self.0[a] = b;
        }
    }
}

fn single(img: &[Sym], edge: &str) -> Result<Sym, GogError> {
    match img {
        [] => Ok(E),
        [a] => Ok(*a),
        _ => Err(GogError::Alphabet(format!("edge {edge}: edge-group image is not a single vertex letter"))),
    }
}

impl Alphabet {
    pub(super) fn build(vertices: &[Vertex], edges: &[Edge]) -> Result<Self, GogError> {
        let mut offset = vec![0];
        for v in vertices {
            offset.push(offset.last().unwrap() + v.group.nletters());
        }
        let node = |v: VertexId, a: Sym| offset[v] + a;
        let mut uf = UnionFind((0..*offset.last().unwrap()).collect());
        for e in edges {
            for f in 0..e.table.order() {
                let a = single(&e.d0.images[f], &e.name)?;
                let b = single(&e.d1.images[f], &e.name)?;
                if e.tree && a != E {
                    uf.union(node(e.from, a), node(e.to, b));
                }
            }
        }

        let mut letters = vec![Letter {
            name: "e".into(),
            aliases: vec!["1".into()],
            inverse: 0,
            kind: LetterKind::Identity,
        }];
        let mut class_letter: HashMap<usize, Sym> = HashMap::new();
        let mut local = Vec::new();
        for (v, vx) in vertices.iter().enumerate() {
            let mut row = vec![0];
            for a in 1..vx.group.nletters() {
                let root = uf.find(node(v, a));
                let s = *class_letter.entry(root).or_insert_with(|| {
                    letters.push(Letter {
                        name: vx.group.letter_names()[a].clone(),
                        aliases: Vec::new(),
                        inverse: 0,
                        kind: LetterKind::Vertex(Vec::new()),
                    });
                    letters.len() - 1
                });
                if let LetterKind::Vertex(at) = &mut letters[s].kind {
                    at.push((v, a));
                }
                row.push(s);
            }
            local.push(row);
        }
        for (v, vx) in vertices.iter().enumerate() {
            for a in 1..vx.group.nletters() {
                letters[local[v][a]].inverse = local[v][vx.group.inverse_letter(a)];
            }
        }

        // qualify clashing names as `<vertex>.<name>`
        let mut count: HashMap<String, usize> = HashMap::new();
        for l in &letters {
            *count.entry(l.name.clone()).or_default() += 1;
        }
        for l in letters.iter_mut() {
            if let LetterKind::Vertex(at) = &l.kind {
                let mut aliases: Vec<String> = Vec::new();
                for &(v, a) in at {
                    aliases.push(format!("{}.{}", vertices[v].name, vertices[v].group.letter_names()[a]));
                    aliases.push(vertices[v].group.letter_names()[a].clone());
                }
                if count[&l.name] > 1 {
                    l.name = aliases[0].clone();
                }
                aliases.retain(|x| *x != l.name);
                aliases.dedup();
                l.aliases = aliases;
            }
        }

        let mut stable = vec![None; 2 * edges.len()];
        for (i, e) in edges.iter().enumerate().filter(|(_, e)| !e.tree) {
            let taken = |n: &str| letters.iter().any(|l| l.name == n);
            let name = if taken(&e.name) { format!("t_{}", e.name) } else { e.name.clone() };
            let s = letters.len();
            letters.push(Letter { name: name.clone(), aliases: Vec::new(), inverse: s + 1, kind: LetterKind::Stable(2 * i) });
            letters.push(Letter {
                name: format!("{name}^-1"),
                aliases: Vec::new(),
                inverse: s,
                kind: LetterKind::Stable(2 * i + 1),
            });
            stable[2 * i] = Some(s);
            stable[2 * i + 1] = Some(s + 1);
        }

        let mut edge_letters = Vec::new();
        for e in edges {
            for (emb, v) in [(&e.d1, e.to), (&e.d0, e.from)] {
                edge_letters.push(emb.images.iter().map(|img| img.first().map_or(0, |&a| local[v][a])).collect());
            }
        }

        let mut vertex_letters: Vec<Vec<Sym>> = local.clone();
        for row in vertex_letters.iter_mut() {
            row.sort_unstable();
            row.dedup();
        }

        // names always win; an alias shared by two letters is dropped
        let mut lookup = HashMap::new();
        let mut ambiguous = Vec::new();
        for (s, l) in letters.iter().enumerate() {
            for a in &l.aliases {
                if let Some(&t) = lookup.get(a) {
                    if t != s {
                        ambiguous.push(a.clone());
                    }
                } else {
                    lookup.insert(a.clone(), s);
                }
            }
        }
        for a in ambiguous {
            lookup.remove(&a);
        }
        for (s, l) in letters.iter().enumerate() {
            lookup.insert(l.name.clone(), s);
        }

        Ok(Alphabet { letters, local, vertex_letters, edge_letters, stable, lookup })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, s: Sym) -> &Letter {
        &self.letters[s]
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.letters[s].name
    }

    pub fn names(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.name.clone()).collect()
    }

    pub fn inverse(&self, s: Sym) -> Sym {
        self.letters[s].inverse
    }

    pub fn invert_word(&self, w: &[Sym]) -> Word {
        w.iter().rev().map(|&s| self.inverse(s)).collect()
    }

    /// Global letter of local letter `a` at vertex `v`.
    pub fn global(&self, v: VertexId, a: Sym) -> Sym {
        self.local[v][a]
    }

    /// Local letter of `s` at `v`, if `s` is a letter of A_v.
    pub fn local_at(&self, s: Sym, v: VertexId) -> Option<Sym> {
        match &self.letters[s].kind {
            LetterKind::Identity => Some(E),
            LetterKind::Vertex(at) => at.iter().find(|(w, _)| *w == v).map(|&(_, a)| a),
            LetterKind::Stable(_) => None,
        }
    }

    /// A_V as global letters in increasing order, `e` included.
    pub fn vertex_letters(&self, v: VertexId) -> &[Sym] {
        &self.vertex_letters[v]
    }

    /// Letter of ∂₁(f) at the terminal vertex of `oe`, indexed by table element.
    pub fn edge_letters(&self, oe: OEdge) -> &[Sym] {
        &self.edge_letters[oe]
    }

    pub fn stable(&self, oe: OEdge) -> Option<Sym> {
        self.stable[oe]
    }

    pub fn is_stable(&self, s: Sym) -> bool {
        matches!(self.letters[s].kind, LetterKind::Stable(_))
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.lookup.get(name).copied()
    }

    /// Whitespace-separated letters; a token that is not a letter name is
    /// split greedily into the longest names it starts with.
    pub fn parse_word(&self, text: &str) -> Result<Word, GogError> {
        let text = text.replace('⁻', "^-").replace('¹', "1");
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "ε" {
                continue;
            }
            if let Some(s) = self.lookup(tok) {
                out.push(s);
                continue;
            }
            let mut rest = tok;
            while !rest.is_empty() {
                let best = (1..=rest.len())
                    .rev()
                    .filter(|&k| rest.is_char_boundary(k))
                    .find_map(|k| self.lookup(&rest[..k]).map(|s| (k, s)));
                match best {
                    Some((k, s)) => {
                        out.push(s);
                        rest = &rest[k..];
                    }
                    None => return Err(GogError::ForeignLetter(tok.to_string())),
                }
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[Sym]) -> String {
        if w.is_empty() {
            return "ε".into();
        }
        w.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(" ")
    }
}
