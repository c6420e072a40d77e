use crate::fsa::{shortlex_filter, Dfa, FsaError, Sym, TwoTapeDfa};
use crate::vgroups::{Embedding, VertexGroup};

/// Cells S_f = S₁·f of G_V indexed by the elements of F, where S₁ holds the
/// shortlex-least word of each coset x·F.
///
/// `ranks[a]` orders the local letters; pass the global letter indices so the
/// choice agrees with the normal form. Cells are over local letters.
pub fn shortlex_coset_partition(s: &dyn VertexGroup, emb: &Embedding, ranks: &[usize]) -> Result<Vec<Dfa>, FsaError> {
    let n = s.nletters();
    let mut order: Vec<Sym> = (0..n).collect();
    order.sort_by_key(|&a| ranks[a]);
    let mut perm = vec![0; n];
    for (pos, &a) in order.iter().enumerate() {
        perm[a] = pos;
    }
    let lang = s.acceptor().embed(&perm, n);
    let mults: Vec<TwoTapeDfa> = emb.images.iter().map(|x| s.multiplier(x).embed(&perm, n)).collect();
    let mut rel = mults[0].clone();
    for m in &mults[1..] {
        rel = rel.or(m);
    }
    let s1 = shortlex_filter(&lang, &rel)?;
    let id = TwoTapeDfa::identity_on(&s1);
    Ok(mults.iter().map(|m| id.compose(m).second_projection().embed(&order, n).minimize()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::parse_spec;
    use crate::{fixtures, ygraph::values};
    use std::collections::BTreeSet;

    fn cells(spec: &str, v: &str, oe_name: &str, side0: bool) -> Vec<BTreeSet<String>> {
        let g = parse_spec(spec).unwrap();
        let v = g.vertex_by_name(v).unwrap();
        let oe = g.oedge_by_name(oe_name).unwrap();
        let emb = if side0 { g.emb0(oe) } else { g.emb1(oe) };
        let ranks: Vec<usize> = (0..g.group(v).nletters()).map(|a| g.alphabet().global(v, a)).collect();
        let cells = shortlex_coset_partition(g.group(v), emb, &ranks).unwrap();
        cells
            .iter()
            .map(|c| {
                let vals = values::value_set(&g, v, &values::globalize(&g, v, c)).unwrap();
                vals.iter().map(|x| g.display_syllable(v, x)).collect()
            })
            .collect()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sl2z_cells() {
        assert_eq!(cells(fixtures::SL2Z, "V1", "E", true), vec![set(&["1", "a"]), set(&["a2", "a3"])]);
        assert_eq!(cells(fixtures::SL2Z, "V2", "E", false), vec![set(&["1", "b", "b2"]), set(&["a2", "b4", "b5"])]);
    }

    #[test]
    fn trivial_subgroup_single_cell() {
        assert_eq!(cells(fixtures::MODG, "V2", "E", false), vec![set(&["1", "b", "b^-1"])]);
    }
}
