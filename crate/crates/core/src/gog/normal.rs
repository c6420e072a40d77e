use super::{GogError, GraphOfGroups, HatEdge, LetterKind, OEdge, VertexId};
use crate::fsa::{Sym, Word};
use crate::vgroups::Elem;

/// g₀ E₁ g₁ … E_m g_m with each syllable a canonical word of its vertex
/// structure (local letters).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub g0: Elem,
    pub steps: Vec<(OEdge, Elem)>,
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.g0.is_empty() && self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last_syllable(&self) -> &Elem {
        self.steps.last().map_or(&self.g0, |s| &s.1)
    }

    fn last_syllable_mut(&mut self) -> &mut Elem {
        match self.steps.last_mut() {
            Some(s) => &mut s.1,
            None => &mut self.g0,
        }
    }

    pub fn syllable(&self, i: usize) -> &Elem {
        if i == 0 {
            &self.g0
        } else {
            &self.steps[i - 1].1
        }
    }

    fn syllable_mut(&mut self, i: usize) -> &mut Elem {
        if i == 0 {
            &mut self.g0
        } else {
            &mut self.steps[i - 1].1
        }
    }
}

impl GraphOfGroups {
    pub fn identity(&self) -> NormalForm {
        NormalForm::default()
    }

    /// Vertex carrying syllable `i`.
    pub fn syllable_vertex(&self, nf: &NormalForm, i: usize) -> VertexId {
        if i == 0 {
            self.base
        } else {
            self.dst(nf.steps[i - 1].0)
        }
    }

    pub fn end_vertex(&self, nf: &NormalForm) -> VertexId {
        self.syllable_vertex(nf, nf.steps.len())
    }

    /// Append an edge, cancelling against the previous edge when the
    /// syllable between them lies in the edge group.
    fn push_step(&self, nf: &mut NormalForm, oe: OEdge) {
        if let Some((prev, g)) = nf.steps.last() {
            if *prev == oe ^ 1 {
                if let Some(f) = self.emb1(*prev).preimage(g) {
                    let img = self.emb0(*prev).images[f].clone();
                    let prev = *prev;
                    nf.steps.pop();
                    let v = self.src(prev);
                    let last = nf.last_syllable_mut();
                    *last = self.vmul(v, last, &img);
                    return;
                }
            }
        }
        nf.steps.push((oe, Vec::new()));
    }

    fn walk_to(&self, nf: &mut NormalForm, w: VertexId) {
        for oe in self.tree_path(self.end_vertex(nf), w) {
            self.push_step(nf, oe);
        }
    }

    /// Right-multiply by one letter without canonicalizing.
    fn push_letter(&self, nf: &mut NormalForm, s: Sym) {
        match &self.alphabet.letter(s).kind {
            LetterKind::Identity => {}
            LetterKind::Vertex(at) => {
                let cur = self.end_vertex(nf);
                let (v, a) = at
                    .iter()
                    .copied()
                    .min_by_key(|&(v, _)| (self.tree_path(cur, v).len(), v))
                    .expect("vertex letter has a home");
                self.walk_to(nf, v);
                let last = nf.last_syllable_mut();
                *last = self.vmul(v, last, &[a]);
            }
            LetterKind::Stable(oe) => {
                let oe = *oe;
                self.walk_to(nf, self.src(oe));
                self.push_step(nf, oe);
            }
        }
    }

    /// Strip terminal tree edges whose syllables lie in the edge group, then
    /// replace each inner syllable by the shortlex-least element of its
    /// coset g·∂₀F.
    fn canonicalize(&self, nf: &mut NormalForm) {
        while let Some((oe, g)) = nf.steps.last() {
            let oe = *oe;
            let Some(f) = (if self.is_tree(oe) { self.emb1(oe).preimage(g) } else { None }) else {
                break;
            };
            nf.steps.pop();
            let img = self.emb0(oe).images[f].clone();
            let last = nf.last_syllable_mut();
            *last = self.vmul(self.src(oe), last, &img);
        }
        self.shuffle(nf);
    }

    fn shuffle(&self, nf: &mut NormalForm) {
        for i in 0..nf.steps.len() {
            let oe = nf.steps[i].0;
            let (v, w) = (self.src(oe), self.dst(oe));
            let g = nf.syllable(i).clone();
            let mut best: Option<(Elem, usize)> = None;
            for (f, img) in self.emb0(oe).images.iter().enumerate() {
                let c = self.vmul(v, &g, img);
                if best.as_ref().is_none_or(|(b, _)| self.syllable_key(v, &c) < self.syllable_key(v, b)) {
                    best = Some((c, f));
                }
            }
            let (c, f) = best.expect("edge group is nonempty");
            *nf.syllable_mut(i) = c;
            let corr = self.vinv(w, &self.emb1(oe).images[f]);
            let next = nf.syllable_mut(i + 1);
            *next = self.vmul(w, &corr, next);
        }
    }

    pub fn normal_form(&self, w: &[Sym]) -> NormalForm {
        let mut nf = NormalForm::default();
        for &s in w {
            self.push_letter(&mut nf, s);
        }
        self.canonicalize(&mut nf);
        nf
    }

    pub fn normal_form_str(&self, text: &str) -> Result<NormalForm, GogError> {
        Ok(self.normal_form(&self.alphabet.parse_word(text)?))
    }

    /// Canonical form of `nf · s`.
    pub fn mul_letter(&self, nf: &NormalForm, s: Sym) -> NormalForm {
        let mut out = nf.clone();
        self.push_letter(&mut out, s);
        self.canonicalize(&mut out);
        out
    }

    pub fn mul_word(&self, nf: &NormalForm, w: &[Sym]) -> NormalForm {
        let mut out = nf.clone();
        for &s in w {
            self.push_letter(&mut out, s);
        }
        self.canonicalize(&mut out);
        out
    }

    pub fn multiply(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        self.mul_word(x, &self.to_word(y))
    }

    pub fn inverse(&self, x: &NormalForm) -> NormalForm {
        self.normal_form(&self.alphabet.invert_word(&self.to_word(x)))
    }

    /// A word over the convenient alphabet with value `nf`; tree edges are
    /// invisible.
    pub fn to_word(&self, nf: &NormalForm) -> Word {
        let mut out = Vec::new();
        for i in 0..=nf.steps.len() {
            if i > 0 {
                let oe = nf.steps[i - 1].0;
                if let Some(t) = self.alphabet.stable(oe) {
                    out.push(t);
                }
            }
            let v = self.syllable_vertex(nf, i);
            out.extend(nf.syllable(i).iter().map(|&a| self.alphabet.global(v, a)));
        }
        out
    }

    pub fn equals(&self, u: &[Sym], v: &[Sym]) -> bool {
        self.normal_form(u) == self.normal_form(v)
    }

    /// `g0 | E1 | g1 | …` with syllables in global letter names.
    pub fn format_nf(&self, nf: &NormalForm) -> String {
        let mut parts = vec![self.display_syllable(self.base, &nf.g0)];
        for (i, (oe, g)) in nf.steps.iter().enumerate() {
            parts.push(self.oedge_name(*oe));
            parts.push(self.display_syllable(self.syllable_vertex(nf, i + 1), g));
        }
        parts.join(" | ")
    }

    /// True if some adjacent pair E, E⁻¹ encloses a syllable of the edge
    /// group (a form that should have been cancelled).
    pub fn has_pinch(&self, nf: &NormalForm) -> bool {
        nf.steps.windows(2).any(|w| w[1].0 == w[0].0 ^ 1 && self.emb1(w[0].0).contains(&w[0].1))
    }

    /// The tree-vertex coordinates of the coset `nf · G_v`: the last edge E
    /// of the form padded out to `v`, and the canonical element whose padded
    /// form ends in E with trivial final syllable.
    pub fn coset_rep(&self, nf: &NormalForm, v: VertexId) -> (HatEdge, NormalForm) {
        let mut p = nf.clone();
        for oe in self.tree_path(self.end_vertex(nf), v) {
            debug_assert!(!(p.steps.last().is_some_and(|(e, g)| *e == oe ^ 1 && self.emb1(*e).contains(g))));
            p.steps.push((oe, Vec::new()));
        }
        self.shuffle(&mut p);
        p.last_syllable_mut().clear();
        let e = p.steps.last().map_or(HatEdge::Base, |s| HatEdge::E(s.0));
        self.canonicalize(&mut p);
        (e, p)
    }

    /// The form of `nf` padded with trivial tree syllables out to ∂₁E and
    /// shuffled, if its last edge is then E. The final syllable lies in
    /// ∂₁F_E.
    pub fn padded_form(&self, nf: &NormalForm, e: HatEdge) -> Option<NormalForm> {
        let HatEdge::E(oe) = e else {
            return nf.is_identity().then(|| nf.clone());
        };
        let mut p = nf.clone();
        for step in self.tree_path(self.end_vertex(nf), self.dst(oe)) {
            p.steps.push((step, Vec::new()));
        }
        self.shuffle(&mut p);
        let ok = p.steps.last().is_some_and(|(last, g)| *last == oe && self.emb1(oe).contains(g));
        ok.then_some(p)
    }

    /// Conjugacy representative of ḡ G_V ḡ⁻¹; needs a reduced graph.
    pub fn find_conjugate_rep(&self, w: &[Sym], v: VertexId) -> Result<(HatEdge, NormalForm), GogError> {
        if let Some(oe) = self.reduced_violation() {
            return Err(GogError::NotReduced(self.oedge_name(oe)));
        }
        Ok(self.coset_rep(&self.normal_form(w), v))
    }

    /// Membership of ḡ in 𝒢_E, allowing terminal trivial tree-edge padding.
    pub fn in_script_ge(&self, w: &[Sym], e: HatEdge) -> bool {
        let nf = self.normal_form(w);
        match e {
            HatEdge::Base => nf.is_identity(),
            HatEdge::E(oe) => {
                let path = self.tree_path(self.end_vertex(&nf), self.dst(oe));
                match path.last() {
                    Some(&last) => last == oe,
                    None => nf.steps.last().is_some_and(|(e, g)| *e == oe && self.emb1(oe).contains(g)),
                }
            }
        }
    }

    /// True if x ∈ y·G_v.
    pub fn same_coset(&self, x: &NormalForm, y: &NormalForm, v: VertexId) -> bool {
        self.coset_rep(x, v) == self.coset_rep(y, v)
    }
}
