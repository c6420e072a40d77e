use std::collections::BTreeSet;

use super::*;
use crate::fixtures;
use crate::fsa::{Dfa, Word};
use crate::gog::{parse_spec, GraphOfGroups};

fn load(text: &str) -> GraphOfGroups {
    parse_spec(text).expect("fixture parses")
}

fn all() -> Vec<(&'static str, GraphOfGroups)> {
    ["modg", "sl2z", "zhnn", "zstar"].iter().map(|n| (*n, load(fixtures::by_name(n).unwrap()))).collect()
}

fn w(g: &GraphOfGroups, s: &str) -> Word {
    g.alphabet().parse_word(s).unwrap()
}

fn words(g: &GraphOfGroups, d: &Dfa, maxlen: usize) -> BTreeSet<String> {
    d.enumerate(maxlen).iter().map(|x| g.alphabet().format_word(x)).collect()
}

#[test]
fn default_vertex_counts_and_validity() {
    for (name, g) in all() {
        let x = default_ygraph(&g).unwrap();
        let want = match name {
            "modg" | "zhnn" | "zstar" => 3,
            _ => 5,
        };
        assert_eq!(x.vertices.len(), want, "{name}");
        assert_eq!(validate_ygraph(&g, &x), vec![], "{name}");
    }
}

#[test]
fn biautomatic_shapes() {
    for (name, g) in all() {
        let x = biautomatic_ygraph(&g);
        assert_eq!(x.vertices.len(), g.vertices().len(), "{name}");
        assert_eq!(validate_ygraph(&g, &x), vec![], "{name}");
    }
    let g = load(fixtures::ZHNN);
    let x = biautomatic_ygraph(&g);
    assert_eq!(x.edges.len(), 2);
    assert!(x.edges.iter().all(|e| e.from == 0 && e.to == 0));
}

#[test]
fn overlapping_labels_are_reported() {
    let g = load(fixtures::MODG);
    let mut x = biautomatic_ygraph(&g);
    let mut dup = x.edges[0].clone();
    dup.set = Dfa::from_words(g.alphabet().len(), [w(&g, "a")].iter());
    x.edges.push(dup);
    let v = validate_ygraph(&g, &x);
    assert!(v.iter().any(|v| v.axiom == "disjointness" && v.detail.contains('a')), "{v:?}");
}

#[test]
fn gfsa_state_counts() {
    let g = load(fixtures::MODG);
    assert_eq!(language_gfsa(&g, &biautomatic_ygraph(&g)).unwrap().num_states(), 4);
    // one vertex, two loop midpoints
    let g = load(fixtures::ZHNN);
    assert_eq!(language_gfsa(&g, &biautomatic_ygraph(&g)).unwrap().num_states(), 3);
}

#[test]
fn modg_short_words() {
    let g = load(fixtures::MODG);
    let l = language_dfa(&g, &default_ygraph(&g).unwrap()).unwrap().dfa;
    let got = words(&g, &l, 2);
    let want: BTreeSet<String> =
        ["ε", "a", "b", "b^-1", "a b", "a b^-1", "b a", "b^-1 a"].iter().map(|s| s.to_string()).collect();
    assert_eq!(got, want);
}

#[test]
fn zhnn_language() {
    let g = load(fixtures::ZHNN);
    let n = g.alphabet().len();
    let (t, ti) = (w(&g, "t")[0], w(&g, "t^-1")[0]);
    let want = Dfa::epsilon(n).or(&Dfa::star_of(n, &[t]).concat(&Dfa::from_words(n, [vec![t]].iter()))).or(
        &Dfa::star_of(n, &[ti]).concat(&Dfa::from_words(n, [vec![ti]].iter())),
    );
    for x in [default_ygraph(&g).unwrap(), biautomatic_ygraph(&g)] {
        assert!(language_dfa(&g, &x).unwrap().dfa.language_eq(&want));
    }
}

#[test]
fn routes_agree() {
    for (name, g) in all() {
        for x in [default_ygraph(&g).unwrap(), biautomatic_ygraph(&g)] {
            let a = language_dfa_via(&g, &x, "prohibit").unwrap().dfa;
            let b = language_dfa_via(&g, &x, "bx").unwrap().dfa;
            assert!(a.language_eq(&b), "{name}");
            assert_eq!(a.num_states(), b.num_states(), "{name}");
        }
    }
    assert!(matches!(language_dfa_via(&load(fixtures::MODG), &biautomatic_ygraph(&load(fixtures::MODG)), "nope"), Err(YGraphError::UnknownRoute(_))));
}

#[test]
fn sl2z_has_no_pinch() {
    let g = load(fixtures::SL2Z);
    let l = language_dfa(&g, &default_ygraph(&g).unwrap()).unwrap().dfa;
    // a2 = b3 spans the edge group, so a2 between two crossings is a pinch
    for bad in ["a2 a2 a2", "a a2 a", "b a2 b", "a a2 a3 b"] {
        assert!(!l.accepts(&w(&g, bad)), "{bad}");
    }
    for good in ["a b a", "a2 a2", "a b2 a b"] {
        assert!(l.accepts(&w(&g, good)), "{good}");
    }
}

#[test]
fn synchronize_bijects() {
    for (name, g) in all() {
        let x = default_ygraph(&g).unwrap();
        let s = synchronize(&g, &x).unwrap().dfa;
        let accepted = s.enumerate(6);
        let vals: BTreeSet<_> = accepted.iter().map(|u| g.normal_form(u)).collect();
        assert_eq!(vals.len(), accepted.len(), "{name}: two words with one value");
        assert!(s.is_subset(&language_dfa(&g, &x).unwrap().dfa), "{name}");
    }
    let g = load(fixtures::SL2Z);
    let s = synchronize(&g, &default_ygraph(&g).unwrap()).unwrap().dfa;
    // non-final Z/4 syllables come from the cell {1, a}
    for bad in ["a2 b", "a3 b", "a b a3 b"] {
        assert!(!s.accepts(&w(&g, bad)), "{bad}");
    }
    assert!(s.accepts(&w(&g, "a b a3")));
    // a2 after a crossing is shuffled into the previous syllable
    assert!(!s.accepts(&w(&g, "a b a2")));
}

#[test]
fn io_round_trip() {
    let g = load(fixtures::SL2Z);
    let x = default_ygraph(&g).unwrap();
    let dir = std::env::temp_dir().join(format!("gogauto-yg-{}", std::process::id()));
    let path = write_ygraph(&g, &x, &dir, "sl2z").unwrap();
    let y = read_ygraph(&g, &path).unwrap();
    assert_eq!(y.vertices.len(), x.vertices.len());
    assert_eq!(y.edges.len(), x.edges.len());
    assert_eq!(y.actions, x.actions);
    for (a, b) in x.edges.iter().zip(&y.edges) {
        assert!(a.set.language_eq(&b.set));
    }
    assert!(validate_ygraph(&g, &y).is_empty());
    let dot = to_dot(&g, &x);
    assert!(dot.starts_with("digraph X {"));
    assert_eq!(dot.matches("->").count(), x.edges.len());
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn collapse_modg_default() {
    let g = load(fixtures::MODG);
    let x = default_ygraph(&g).unwrap();
    let out = collapse(&g, &x, 0, 2, 3, 8).unwrap();
    let CollapseOutcome::Success(y) = out else { panic!("{out:?}") };
    assert_eq!(y.vertices.len(), 2);
    assert!(language_dfa(&g, &y).unwrap().dfa.language_eq(&language_dfa(&g, &biautomatic_ygraph(&g)).unwrap().dfa));
}

/// MODG with V2 duplicated: ε goes to one copy and a to the other.
fn duplicated_modg(g: &GraphOfGroups) -> YGraph {
    let mut x = biautomatic_ygraph(g);
    let n = g.alphabet().len();
    let copy = YVertex { name: "V2b".into(), ..x.vertices[1].clone() };
    x.vertices.push(copy);
    x.edges[0].set = Dfa::epsilon(n);
    x.edges.push(YEdge { name: "Eb".into(), from: 0, to: 2, etype: 0, set: Dfa::from_words(n, [w(g, "a")].iter()) });
    x.edges.push(YEdge { name: "Eb^-1".into(), from: 2, to: 0, ..x.edges[1].clone() });
    x.actions.push(YAction { vertex: 2, etype: 1, f: 0, perm: vec![0, 1, 2] });
    for a in &mut x.actions {
        a.perm = vec![0, 1, 2];
    }
    x
}

#[test]
fn collapse_duplicate() {
    let g = load(fixtures::MODG);
    let x = duplicated_modg(&g);
    assert_eq!(validate_ygraph(&g, &x), vec![]);
    let CollapseOutcome::Success(y) = collapse(&g, &x, 1, 2, 2, 8).unwrap() else { panic!() };
    assert_eq!(y.vertices.len(), 2);
    assert!(language_dfa(&g, &y).unwrap().dfa.language_eq(&language_dfa(&g, &x).unwrap().dfa));
}

/// ZSTAR with a second Z-vertex whose words overshoot by three letters.
fn overshoot_zstar(g: &GraphOfGroups) -> YGraph {
    let mut x = biautomatic_ygraph(g);
    let n = g.alphabet().len();
    let (c, ci) = (w(g, "c")[0], w(g, "c^-1")[0]);
    let run = |s: usize, k: usize| Dfa::from_words(n, [vec![s; k]].iter());
    let up = |k: usize| run(c, k).concat(&Dfa::star_of(n, &[c])).concat(&run(ci, 3));
    let down = run(ci, 1).concat(&Dfa::star_of(n, &[ci]));
    let lang = up(3).or(&down).minimize();
    let label = up(4).or(&down).minimize();
    x.vertices.push(YVertex { name: "V2b".into(), vtype: 1, class: "overshoot".into(), lang });
    x.edges[0].set = Dfa::epsilon(n);
    x.edges.push(YEdge { name: "Eb".into(), from: 0, to: 2, etype: 0, set: Dfa::from_words(n, [w(g, "a")].iter()) });
    x.edges.push(YEdge { name: "Eb^-1".into(), from: 2, to: 0, etype: 1, set: label });
    x.actions.push(YAction { vertex: 2, etype: 1, f: 0, perm: vec![0, 1, 2] });
    for a in &mut x.actions {
        a.perm = vec![0, 1, 2];
    }
    x
}

#[test]
fn collapse_failure_has_witness() {
    let g = load(fixtures::ZSTAR);
    let x = overshoot_zstar(&g);
    let out = collapse(&g, &x, 1, 2, 2, 8).unwrap();
    let CollapseOutcome::Failure { witness: Some((u, v)), .. } = out else { panic!("{out:?}") };
    assert!(u != v);
    // the witness is a real failure at K = 2
    let ok = crate::deploy::async_fellow_travel(&g, &u, &v, 2, crate::gog::DEFAULT_NODE_CAP).unwrap();
    assert!(ok.is_none());
}

#[test]
fn split_modg() {
    let g = load(fixtures::MODG);
    let x = default_ygraph(&g).unwrap();
    let target = values::vertex_language(&g, 1);
    let y = split_for_element(&g, &x, &w(&g, "a b"), "Z3-copy", &target).unwrap();
    assert_eq!(y.vertices.len(), x.vertices.len() + 1);
    assert_eq!(validate_ygraph(&g, &y), vec![]);
    assert!(language_dfa(&g, &y).unwrap().dfa.language_eq(&language_dfa(&g, &x).unwrap().dfa));
    // and back
    let new = y.vertices.len() - 1;
    let old = y.vertex_by_name("E.1").unwrap();
    let CollapseOutcome::Success(z) = collapse(&g, &y, old, new, 3, 8).unwrap() else { panic!() };
    assert_eq!(z.vertices.len(), x.vertices.len());
    assert!(language_dfa(&g, &z).unwrap().dfa.language_eq(&language_dfa(&g, &x).unwrap().dfa));
}

#[test]
fn split_sl2z_orbit() {
    let g = load(fixtures::SL2Z);
    let x = default_ygraph(&g).unwrap();
    let target = values::vertex_language(&g, 1);
    let y = split_for_element(&g, &x, &w(&g, "a b"), "Z6-copy", &target).unwrap();
    assert_eq!(y.vertices.len(), x.vertices.len() + 2);
    assert_eq!(validate_ygraph(&g, &y), vec![]);
}

#[test]
fn split_errors() {
    let g = load(fixtures::MODG);
    let x = default_ygraph(&g).unwrap();
    let target = values::vertex_language(&g, 1);
    assert!(matches!(split_for_element(&g, &x, &w(&g, "a"), "c", &target), Err(YGraphError::NotEmbedded(_))));
}

#[test]
fn coset_cells_sl2z() {
    let g = load(fixtures::SL2Z);
    let c = build::cells(&g, 0).unwrap();
    let vals = c.values.unwrap();
    let shown: Vec<Vec<String>> = vals.iter().map(|s| s.iter().map(|x| g.display_syllable(0, x)).collect()).collect();
    assert_eq!(shown, vec![vec!["1".to_string(), "a".into()], vec!["a2".into(), "a3".into()]]);
}
