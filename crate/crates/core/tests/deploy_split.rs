mod common;

use std::collections::BTreeMap;

use common::*;
use gogauto::bstree::tree_ball;
use gogauto::deploy::{deployment_of, DeployOptions, VisibleMachine};
use gogauto::gog::GraphOfGroups;
use gogauto::ygraph::{default_ygraph, language_dfa, split_for_element, values, YGraph};

/// Class label at every tree position of the depth-3 ball.
fn labels(g: &GraphOfGroups, x: &YGraph) -> BTreeMap<String, String> {
    let handle = language_dfa(g, x).unwrap();
    let vm = VisibleMachine::new(g, &handle.dfa, 100_000).unwrap();
    let mut dep = deployment_of(g, &vm, &handle, DeployOptions::default()).unwrap();
    let ball = tree_ball(g, 3, 10_000).unwrap();
    ball.vertices.iter().map(|t| (t.id(g), dep.at(t.edge, &t.rep).unwrap().class)).collect()
}

#[test]
fn split_changes_only_the_targeted_orbit() {
    for (name, word, target_ids) in [("modg", "a b", vec!["(E, a)"]), ("sl2z", "a b", vec!["(E, a)"])] {
        let g = load(name);
        let x = default_ygraph(&g).unwrap();
        let v2 = g.vertex_by_name("V2").unwrap();
        let y = split_for_element(&g, &x, &w(&g, word), "copy", &values::vertex_language(&g, v2)).unwrap();
        let (before, after) = (labels(&g, &x), labels(&g, &y));
        assert_eq!(before.keys().collect::<Vec<_>>(), after.keys().collect::<Vec<_>>());
        let changed: Vec<&str> = before.keys().filter(|k| before[*k] != after[*k]).map(|k| k.as_str()).collect();
        assert_eq!(changed, target_ids, "{name}");
        for id in changed {
            assert_eq!(after[id], "copy", "{name} {id}");
        }
    }
}

#[test]
fn modg_deployment_is_constant_per_vertex_type() {
    let g = load("modg");
    let got = labels(&g, &default_ygraph(&g).unwrap());
    let mut by_type: BTreeMap<bool, Vec<&String>> = BTreeMap::new();
    for (id, class) in &got {
        by_type.entry(id.starts_with("(E,")).or_default().push(class);
    }
    for classes in by_type.values() {
        assert!(classes.windows(2).all(|p| p[0] == p[1]), "{classes:?}");
    }
}
