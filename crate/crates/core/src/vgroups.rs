//! Vertex-group structures.
//!
//! Every structure has a local alphabet whose letter 0 is the identity letter
//! `e`. Elements are carried as canonical words over the local alphabet, and
//! canonical words never contain `e`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::fsa::{Dfa, Sym, TwoTapeDfa, Word};

pub type Elem = Word;

/// Local index of the identity letter in every structure.
pub const E: Sym = 0;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("free group of rank 0; use the trivial finite group")]
    RankZero,
    #[error("letter {0} is not in the alphabet of {1}")]
    ForeignLetter(Sym, String),
    #[error("word {0:?} is not canonical in {1}")]
    NotCanonical(Word, String),
    #[error("embedding is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(String, String),
    #[error("embedding is not injective: {0} and {1} have the same image")]
    NotInjective(String, String),
    #[error("embedding image for `{0}` is missing")]
    MissingImage(String),
    #[error("unknown structure kind `{0}`")]
    UnknownKind(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
}

/// A group together with an automatic structure on it.
pub trait VertexGroup: Send + Sync + fmt::Debug {
    fn kind(&self) -> &'static str;
    fn name(&self) -> &str;
    /// Opaque token naming the equivalence class of the word acceptor.
    fn class_label(&self) -> &str;
    /// Local letter names; index 0 is the identity letter.
    fn letter_names(&self) -> &[String];
    fn inverse_letter(&self, a: Sym) -> Sym;
    /// Canonical form of an arbitrary word.
    fn evaluate(&self, w: &[Sym]) -> Result<Elem, GroupError>;
    fn is_canonical(&self, x: &[Sym]) -> bool;
    /// Word acceptor over the local alphabet.
    fn acceptor(&self) -> &Dfa;
    /// Accepted words are in bijection with the group.
    fn unique(&self) -> bool;
    /// Relation `{(u, v) : u, v accepted, u·g = v}`.
    fn multiplier(&self, g: &Elem) -> TwoTapeDfa;
    /// All elements, for finite groups.
    fn elements(&self) -> Option<Vec<Elem>>;
    /// True if the group has a nontrivial element of finite order.
    fn has_torsion(&self) -> bool;
    /// Multiplication table, for structures on finite groups.
    fn finite_table(&self) -> Option<&FiniteGroupTable> {
        None
    }

    fn nletters(&self) -> usize {
        self.letter_names().len()
    }

    fn multiply(&self, x: &[Sym], y: &[Sym]) -> Result<Elem, GroupError> {
        for w in [x, y] {
            if !self.is_canonical(w) {
                return Err(GroupError::NotCanonical(w.to_vec(), self.name().to_string()));
            }
        }
        let mut w = x.to_vec();
        w.extend_from_slice(y);
        self.evaluate(&w)
    }

    fn invert(&self, x: &[Sym]) -> Result<Elem, GroupError> {
        if !self.is_canonical(x) {
            return Err(GroupError::NotCanonical(x.to_vec(), self.name().to_string()));
        }
        let w: Word = x.iter().rev().map(|&a| self.inverse_letter(a)).collect();
        self.evaluate(&w)
    }

    fn display(&self, x: &[Sym]) -> String {
        if x.is_empty() {
            return "1".to_string();
        }
        x.iter().map(|&a| self.letter_names()[a].as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// Multiplication table of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroupTable {
    pub fn trivial() -> Self {
        FiniteGroupTable { names: vec!["1".into()], table: vec![vec![0]] }
    }

    pub fn cyclic(n: usize, prefix: &str) -> Self {
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => prefix.to_string(),
                _ => format!("{prefix}{i}"),
            })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroupTable { names, table }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Checks closure, associativity, identity and inverses; returns the
    /// identity index.
    pub fn validate(&self) -> Result<usize, GroupError> {
        let n = self.names.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("no elements".into()));
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotAGroup(format!("table is not {n}x{n}")));
        }
        if self.table.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "not associative at ({}, {}, {})",
                            self.names[a], self.names[b], self.names[c]
                        )));
                    }
                }
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| self.mul(a, b) == id) {
                return Err(GroupError::NotAGroup(format!("{} has no inverse", self.names[a])));
            }
        }
        Ok(id)
    }

    fn inverse(&self, a: usize, id: usize) -> usize {
        (0..self.order()).find(|&b| self.mul(a, b) == id).expect("validated")
    }
}

/// The unique structure on a finite group: one letter per element.
#[derive(Debug)]
pub struct FiniteGroup {
    name: String,
    class: String,
    table: FiniteGroupTable,
    identity: usize,
    /// element index -> local letter (0 for the identity)
    letter_of: Vec<Sym>,
    /// local letter -> element index
    elem_of: Vec<usize>,
    letters: Vec<String>,
    inverse: Vec<Sym>,
    acceptor: Dfa,
}

impl FiniteGroup {
    pub fn new(name: &str, table: FiniteGroupTable, class: Option<&str>) -> Result<Self, GroupError> {
        let identity = table.validate()?;
        let mut letters = vec!["e".to_string()];
        let mut letter_of = vec![0; table.order()];
        let mut elem_of = vec![identity];
        for (i, n) in table.names.iter().enumerate() {
            if i != identity {
                letter_of[i] = letters.len();
                elem_of.push(i);
                letters.push(n.clone());
            }
        }
        let inverse = elem_of.iter().map(|&x| letter_of[table.inverse(x, identity)]).collect();
        let words: Vec<Word> = std::iter::once(Vec::new()).chain((1..letters.len()).map(|a| vec![a])).collect();
        let acceptor = Dfa::from_words(letters.len(), words.iter());
        Ok(FiniteGroup {
            name: name.to_string(),
            class: class.map_or_else(|| format!("fin:{name}"), str::to_string),
            table,
            identity,
            letter_of,
            elem_of,
            letters,
            inverse,
            acceptor,
        })
    }

    pub fn table(&self) -> &FiniteGroupTable {
        &self.table
    }

    /// Canonical word of the element with table index `i`.
    pub fn elem(&self, i: usize) -> Elem {
        if i == self.identity {
            Vec::new()
        } else {
            vec![self.letter_of[i]]
        }
    }

    pub fn index_of(&self, x: &[Sym]) -> usize {
        x.first().map_or(self.identity, |&a| self.elem_of[a])
    }
}

impl VertexGroup for FiniteGroup {
    fn finite_table(&self) -> Option<&FiniteGroupTable> {
        Some(&self.table)
    }

    fn kind(&self) -> &'static str {
        "finite"
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn class_label(&self) -> &str {
        &self.class
    }

    fn letter_names(&self) -> &[String] {
        &self.letters
    }

    fn inverse_letter(&self, a: Sym) -> Sym {
        self.inverse[a]
    }

    fn evaluate(&self, w: &[Sym]) -> Result<Elem, GroupError> {
        let mut x = self.identity;
        for &a in w {
            if a >= self.letters.len() {
                return Err(GroupError::ForeignLetter(a, self.name.clone()));
            }
            x = self.table.mul(x, self.elem_of[a]);
        }
        Ok(self.elem(x))
    }

    fn is_canonical(&self, x: &[Sym]) -> bool {
        x.is_empty() || (x.len() == 1 && x[0] != E && x[0] < self.letters.len())
    }

    fn acceptor(&self) -> &Dfa {
        &self.acceptor
    }

    fn unique(&self) -> bool {
        true
    }

    fn multiplier(&self, g: &Elem) -> TwoTapeDfa {
        let gi = self.index_of(g);
        let pairs: Vec<(Word, Word)> =
            (0..self.table.order()).map(|u| (self.elem(u), self.elem(self.table.mul(u, gi)))).collect();
        TwoTapeDfa::from_pairs(self.letters.len(), &pairs)
    }

    fn elements(&self) -> Option<Vec<Elem>> {
        let mut v: Vec<Elem> = (0..self.table.order()).map(|i| self.elem(i)).collect();
        v.sort_by(|a, b| crate::fsa::shortlex_cmp(a, b));
        Some(v)
    }

    fn has_torsion(&self) -> bool {
        self.table.order() > 1
    }
}

/// Free group with the shortlex (freely reduced) structure.
#[derive(Debug)]
pub struct FreeGroup {
    name: String,
    class: String,
    rank: usize,
    letters: Vec<String>,
    acceptor: Dfa,
}

impl FreeGroup {
    /// Letters are `e, g1, g1^-1, g2, g2^-1, ...`.
    pub fn new(name: &str, gens: &[String], class: Option<&str>) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::RankZero);
        }
        let mut letters = vec!["e".to_string()];
        for g in gens {
            letters.push(g.clone());
            letters.push(format!("{g}^-1"));
        }
        let n = letters.len();
        // state 0: start, state a: last letter a
        let mut acceptor = Dfa::empty(n);
        acceptor.set_accept(0, true);
        for _ in 1..n {
            acceptor.add_state(true);
        }
        for q in 0..n {
            for a in 1..n {
                if q == 0 || a != Self::inv(q) {
                    acceptor.set(q as u32, a, a as u32);
                }
            }
        }
        Ok(FreeGroup {
            name: name.to_string(),
            class: class.map_or_else(|| format!("sl:{name}"), str::to_string),
            rank: gens.len(),
            letters,
            acceptor,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn inv(a: Sym) -> Sym {
        if a == E {
            E
        } else if a % 2 == 1 {
            a + 1
        } else {
            a - 1
        }
    }

    /// Multiplier for a single letter `g`.
    fn letter_multiplier(&self, g: Sym) -> TwoTapeDfa {
        let n = self.letters.len();
        let ginv = Self::inv(g);
        let np = TwoTapeDfa::pair_letters(n);
        let mut d = Dfa::empty(np);
        for _ in 1..n {
            d.add_state(false);
        }
        let done = d.add_state(true);
        for q in 0..n {
            for a in 1..n {
                if q == 0 || a != Self::inv(q) {
                    d.set(q as u32, TwoTapeDfa::pair(n, Some(a), Some(a)), a as u32);
                }
            }
            if q != ginv || q == 0 {
                d.set(q as u32, TwoTapeDfa::pair(n, None, Some(g)), done);
            }
            if q != g || q == 0 {
                d.set(q as u32, TwoTapeDfa::pair(n, Some(ginv), None), done);
            }
        }
        TwoTapeDfa::from_dfa(n, d)
    }
}

impl VertexGroup for FreeGroup {
    fn kind(&self) -> &'static str {
        "free"
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn class_label(&self) -> &str {
        &self.class
    }

    fn letter_names(&self) -> &[String] {
        &self.letters
    }

    fn inverse_letter(&self, a: Sym) -> Sym {
        Self::inv(a)
    }

    fn evaluate(&self, w: &[Sym]) -> Result<Elem, GroupError> {
        let mut out: Word = Vec::with_capacity(w.len());
        for &a in w {
            if a >= self.letters.len() {
                return Err(GroupError::ForeignLetter(a, self.name.clone()));
            }
            if a == E {
                continue;
            }
            if out.last() == Some(&Self::inv(a)) {
                out.pop();
            } else {
                out.push(a);
            }
        }
        Ok(out)
    }

    fn is_canonical(&self, x: &[Sym]) -> bool {
        x.iter().all(|&a| a != E && a < self.letters.len()) && x.windows(2).all(|p| p[1] != Self::inv(p[0]))
    }

    fn acceptor(&self) -> &Dfa {
        &self.acceptor
    }

    fn unique(&self) -> bool {
        true
    }

    fn multiplier(&self, g: &Elem) -> TwoTapeDfa {
        let mut m = TwoTapeDfa::identity_on(&self.acceptor);
        for &a in g {
            m = m.compose(&self.letter_multiplier(a));
        }
        m
    }

    fn elements(&self) -> Option<Vec<Elem>> {
        None
    }

    fn has_torsion(&self) -> bool {
        false
    }
}

/// Validated injective homomorphism from a finite group into a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// canonical image of each table element, indexed like the table
    pub images: Vec<Elem>,
}

impl Embedding {
    pub fn image_set(&self) -> &[Elem] {
        &self.images
    }

    pub fn contains(&self, x: &[Sym]) -> bool {
        self.images.iter().any(|i| i == x)
    }

    /// Table index of the preimage of `x`, if `x` is in the image.
    pub fn preimage(&self, x: &[Sym]) -> Option<usize> {
        self.images.iter().position(|i| i == x)
    }
}

pub fn finite_subgroup_embedding(
    s: &dyn VertexGroup,
    table: &FiniteGroupTable,
    images: &[Option<Elem>],
) -> Result<Embedding, GroupError> {
    let id = table.validate()?;
    let mut imgs = Vec::with_capacity(table.order());
    for (i, im) in images.iter().enumerate() {
        let im = im.as_ref().ok_or_else(|| GroupError::MissingImage(table.names[i].clone()))?;
        imgs.push(s.evaluate(im)?);
    }
    if imgs.len() != table.order() {
        return Err(GroupError::MissingImage(format!("{} of {} given", imgs.len(), table.order())));
    }
    if !imgs[id].is_empty() {
        return Err(GroupError::NotHomomorphism(table.names[id].clone(), table.names[id].clone()));
    }
    for a in 0..table.order() {
        for b in 0..table.order() {
            if s.multiply(&imgs[a], &imgs[b])? != imgs[table.mul(a, b)] {
                return Err(GroupError::NotHomomorphism(table.names[a].clone(), table.names[b].clone()));
            }
        }
    }
    for a in 0..table.order() {
        for b in a + 1..table.order() {
            if imgs[a] == imgs[b] {
                return Err(GroupError::NotInjective(table.names[a].clone(), table.names[b].clone()));
            }
        }
    }
    Ok(Embedding { images: imgs })
}

/// Parameters of a `group` block: `key=value` pairs.
pub type Params = BTreeMap<String, String>;

/// A named way of building a structure from spec-file parameters.
pub trait StructureKind: Send + Sync {
    fn build(&self, name: &str, params: &Params) -> Result<Arc<dyn VertexGroup>, GroupError>;
}

struct FiniteKind;

impl StructureKind for FiniteKind {
    fn build(&self, name: &str, params: &Params) -> Result<Arc<dyn VertexGroup>, GroupError> {
        let elems: Vec<String> = params
            .get("elements")
            .ok_or_else(|| GroupError::BadParam("finite group needs elements=".into()))?
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let cells: Vec<&str> = params
            .get("table")
            .ok_or_else(|| GroupError::BadParam("finite group needs table=".into()))?
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let n = elems.len();
        if cells.len() != n * n {
            return Err(GroupError::BadParam(format!("table has {} entries, expected {}", cells.len(), n * n)));
        }
        let mut table = vec![vec![0; n]; n];
        for (k, c) in cells.iter().enumerate() {
            table[k / n][k % n] = elems
                .iter()
                .position(|e| e == c)
                .ok_or_else(|| GroupError::BadParam(format!("unknown element `{c}` in table")))?;
        }
        let t = FiniteGroupTable { names: elems, table };
        Ok(Arc::new(FiniteGroup::new(name, t, params.get("class").map(String::as_str))?))
    }
}

struct FreeKind;

impl StructureKind for FreeKind {
    fn build(&self, name: &str, params: &Params) -> Result<Arc<dyn VertexGroup>, GroupError> {
        let rank: usize = params
            .get("rank")
            .ok_or_else(|| GroupError::BadParam("free group needs rank=".into()))?
            .parse()
            .map_err(|_| GroupError::BadParam("rank is not a number".into()))?;
        let gens: Vec<String> = match params.get("gens") {
            Some(g) => g.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            None => (1..=rank).map(|i| format!("{name}{i}")).collect(),
        };
        if gens.len() != rank {
            return Err(GroupError::BadParam(format!("rank={rank} but {} generator names", gens.len())));
        }
        Ok(Arc::new(FreeGroup::new(name, &gens, params.get("class").map(String::as_str))?))
    }
}

/// Structure kinds selectable by name from spec files.
pub struct StructureRegistry {
    kinds: BTreeMap<&'static str, Box<dyn StructureKind>>,
}

impl Default for StructureRegistry {
    fn default() -> Self {
        let mut r = StructureRegistry { kinds: BTreeMap::new() };
        r.register("finite", Box::new(FiniteKind));
        r.register("free", Box::new(FreeKind));
        r
    }
}

impl StructureRegistry {
    pub fn register(&mut self, kind: &'static str, k: Box<dyn StructureKind>) {
        self.kinds.insert(kind, k);
    }

    pub fn kinds(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.kinds.keys().copied()
    }

    pub fn build(&self, kind: &str, name: &str, params: &Params) -> Result<Arc<dyn VertexGroup>, GroupError> {
        self.kinds.get(kind).ok_or_else(|| GroupError::UnknownKind(kind.to_string()))?.build(name, params)
    }
}

pub fn make_finite_group(name: &str, table: FiniteGroupTable) -> Result<Arc<dyn VertexGroup>, GroupError> {
    Ok(Arc::new(FiniteGroup::new(name, table, None)?))
}

pub fn make_free_group(name: &str, rank: usize) -> Result<Arc<dyn VertexGroup>, GroupError> {
    let gens: Vec<String> = if rank == 1 {
        vec![name.to_string()]
    } else {
        (1..=rank).map(|i| format!("{name}{i}")).collect()
    };
    Ok(Arc::new(FreeGroup::new(name, &gens, None)?))
}
