mod common;

use std::collections::{BTreeSet, HashMap};

use common::*;
use gogauto::bstree::{gamma_path, tree_ball, tree_ball_from, TreePath, TreeVertex};
use gogauto::deploy::{async_fellow_travel, FtChecker};
use gogauto::fsa::{Dfa, Word};
use gogauto::gog::{GraphOfGroups, NormalForm, DEFAULT_NODE_CAP};
use gogauto::ygraph::{biautomatic_ygraph, default_ygraph, language_dfa, validate_ygraph};
use proptest::prelude::*;

const NAMES: [&str; 4] = ["modg", "sl2z", "zhnn", "zstar"];

fn default_l(g: &GraphOfGroups) -> Dfa {
    language_dfa(g, &default_ygraph(g).unwrap()).unwrap().dfa
}

fn arb_word(maxlen: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..=maxlen)
}

/// Indices drawn from `0..64` folded onto the non-identity letters.
fn letters(g: &GraphOfGroups, raw: &[usize]) -> Word {
    let n = g.alphabet().len() - 1;
    raw.iter().map(|&i| 1 + i % n).collect()
}

fn modg_word(g: &GraphOfGroups, raw: &[usize]) -> Word {
    let gens = [w(g, "a")[0], w(g, "b")[0], w(g, "b^-1")[0]];
    raw.iter().map(|&i| gens[i % 3]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gamma_end_is_the_conjugate_rep(fx in 0usize..3, raw in arb_word(6)) {
        // conjugate representatives need a reduced graph; ZHNN is not
        let g = load(["modg", "sl2z", "zstar"][fx]);
        let u = letters(&g, &raw);
        let nf = g.normal_form(&u);
        let (edge, rep) = g.find_conjugate_rep(&u, g.end_vertex(&nf)).unwrap();
        let gamma = gamma_path(&g, &u);
        prop_assert_eq!(gamma.end(), &TreeVertex { edge, rep });
    }

    #[test]
    fn grid_decision_matches_naive_search(a in arb_word(7), b in arb_word(7), k in 0usize..3) {
        let g = load("modg");
        let (u, v) = (modg_word(&g, &a), modg_word(&g, &b));
        let gens: Vec<Mat> = ["a", "b", "b^-1"].iter().map(|s| projective(letter_matrix(s))).collect();
        let dist = psl_ball(&gens, 14);
        let pre = |x: &Word| -> Vec<Mat> {
            let mut m = I;
            std::iter::once(I).chain(x.iter().map(|&s| { m = mat_mul(m, letter_matrix(g.alphabet().name(s))); m })).collect()
        };
        let (pu, pv) = (pre(&u), pre(&v));
        let d = |i: usize, j: usize| dist[&projective(mat_mul(mat_inv(pu[i]), pv[j]))];
        let grid = async_fellow_travel(&g, &u, &v, k, DEFAULT_NODE_CAP).unwrap();
        prop_assert_eq!(grid.is_some(), naive_async(&d, u.len(), v.len(), k));
        if let Some(path) = grid {
            prop_assert!(path.iter().all(|&(i, j)| d(i, j) <= k));
        }
    }

    #[test]
    fn degrees_are_translation_invariant(fx in 0usize..2, raw in arb_word(5)) {
        let g = load(["modg", "sl2z"][fx]);
        let u = letters(&g, &raw);
        let mut want = tree_ball(&g, 2, 10_000).unwrap().degree;
        want.sort();
        let root = TreeVertex::of(&g, &g.normal_form(&u), g.base());
        let mut got = tree_ball_from(&g, root, 2, 10_000).unwrap().degree;
        got.sort();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn constructed_ygraphs_validate() {
    for name in NAMES {
        let g = load(name);
        for x in [default_ygraph(&g).unwrap(), biautomatic_ygraph(&g)] {
            assert_eq!(validate_ygraph(&g, &x), vec![], "{name}");
        }
    }
}

/// Subwords of accepted words with a fixed value form a finite set: the set
/// collected from words up to length 8 is already complete at length 10.
#[test]
fn subwords_with_fixed_value_stabilize() {
    for name in NAMES {
        let g = load(name);
        let l = default_l(&g);
        let targets: Vec<NormalForm> = (0..g.alphabet().len()).map(|s| g.normal_form(&[s])).collect();
        let collect = |n: usize| -> Vec<BTreeSet<Word>> {
            let mut out = vec![BTreeSet::new(); targets.len()];
            for u in l.enumerate(n) {
                for i in 0..u.len() {
                    for j in i..=u.len() {
                        let y = &u[i..j];
                        let v = g.normal_form(y);
                        if let Some(t) = targets.iter().position(|t| *t == v) {
                            out[t].insert(y.to_vec());
                        }
                    }
                }
            }
            out
        };
        assert_eq!(collect(8), collect(10), "{name}");
    }
}

/// If each prefix of u lies within 1 of the values of the prefixes of u′,
/// the initial segments of γ_u inside the depth-3 ball, short of its last
/// edge, are initial segments of γ along u′.
#[test]
fn fellow_travelling_words_share_gamma_prefixes() {
    for (name, maxlen) in [("modg", 7), ("sl2z", 4)] {
        let g = load(name);
        let l = default_l(&g);
        let ck = FtChecker::new(&g, 1, DEFAULT_NODE_CAP).unwrap();
        let words = l.enumerate(maxlen);
        let gammas: HashMap<&Word, Vec<TreePath>> =
            words.iter().map(|u| (u, (0..=u.len()).map(|k| gamma_path(&g, &u[..k])).collect())).collect();
        let mut tested = 0;
        for u in &words {
            for r in &words {
                let close = (0..=u.len()).all(|i| (0..=r.len()).any(|j| ck.d(&u[..i], &r[..j]).is_some()));
                if !close {
                    continue;
                }
                tested += 1;
                let gu = gamma_path(&g, u);
                let keep = gu.len().saturating_sub(1).min(3);
                let seg = TreePath { vertices: gu.vertices[..=keep].to_vec(), edges: gu.edges[..keep].to_vec() };
                assert!(
                    gammas[r].iter().any(|p| seg.is_prefix_of(p)),
                    "{name}: {} vs {}",
                    g.alphabet().format_word(u),
                    g.alphabet().format_word(r)
                );
            }
        }
        assert!(tested > 100, "{name}: {tested}");
    }
}
