use super::*;
use crate::deploy::VisibleMachine;
use crate::fixtures;
use crate::gog::{parse_spec, GraphOfGroups};
use crate::ygraph::{default_ygraph, language_dfa};

fn load(name: &str) -> GraphOfGroups {
    parse_spec(fixtures::by_name(name).unwrap()).unwrap()
}

fn w(g: &GraphOfGroups, s: &str) -> Word {
    g.alphabet().parse_word(s).unwrap()
}

fn default_l(g: &GraphOfGroups) -> Dfa {
    language_dfa(g, &default_ygraph(g).unwrap()).unwrap().dfa
}

const CAP: usize = 10_000;

#[test]
fn ball_shapes() {
    let g = load("zhnn");
    let b = tree_ball(&g, 4, CAP).unwrap();
    assert_eq!(b.level_sizes(), vec![1, 2, 2, 2, 2]);
    assert!(b.degree.iter().all(|&d| d == Some(2)));

    let g = load("modg");
    let b = tree_ball(&g, 2, CAP).unwrap();
    assert_eq!(b.level_sizes(), vec![1, 2, 4]);
    assert_eq!(b.degree[0], Some(2));
    assert_eq!(b.degree[1], Some(3));

    let g = load("sl2z");
    let b = tree_ball(&g, 2, CAP).unwrap();
    assert_eq!(b.degree[0], Some(2));
    assert_eq!(b.degree[1], Some(3));
    assert_eq!(b.level_sizes(), vec![1, 2, 4]);
}

#[test]
fn ball_vertices_are_distinct_cosets() {
    for name in ["modg", "sl2z"] {
        let g = load(name);
        let b = tree_ball(&g, 3, CAP).unwrap();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let (s, t) = (&b.vertices[i], &b.vertices[j]);
                if s.vertex_type(&g) != t.vertex_type(&g) {
                    continue;
                }
                // same coset iff s⁻¹t ∈ G_V
                let q = g.multiply(&g.inverse(&s.rep), &t.rep);
                let back = TreeVertex::of(&g, &q, s.vertex_type(&g));
                assert_ne!(back, TreeVertex::of(&g, &g.identity(), s.vertex_type(&g)), "{name} {} {}", s.id(&g), t.id(&g));
            }
        }
    }
}

#[test]
fn infinite_index_is_reported() {
    let g = load("zstar");
    assert!(tree_ball(&g, 1, CAP).is_ok());
    assert!(matches!(tree_ball(&g, 2, CAP), Err(BsError::InfiniteDegree(_))));
}

#[test]
fn gamma_examples() {
    let g = load("modg");
    assert!(gamma_path(&g, &[]).is_empty());
    let p = gamma_path(&g, &w(&g, "a b"));
    assert_eq!(p.len(), 1);
    let (e, h) = g.find_conjugate_rep(&w(&g, "a b"), g.vertex_by_name("V2").unwrap()).unwrap();
    assert_eq!(*p.end(), TreeVertex { edge: e, rep: h });
    let g = load("zhnn");
    assert_eq!(gamma_path(&g, &w(&g, "t t t")).len(), 3);
}

#[test]
fn gamma_prefixes_are_initial_segments() {
    for name in ["modg", "sl2z", "zhnn", "zstar"] {
        let g = load(name);
        let l = default_l(&g);
        for u in l.enumerate(5) {
            let full = gamma_path(&g, &u);
            for k in 0..u.len() {
                assert!(gamma_path(&g, &u[..k]).is_prefix_of(&full), "{name} {}", g.alphabet().format_word(&u));
            }
        }
    }
}

#[test]
fn trims() {
    let g = load("modg");
    let l = default_l(&g);
    let ab = w(&g, "a b");
    assert_eq!(trim_to_common_path(&g, &l, &ab, &ab).unwrap(), (ab.clone(), ab.clone()));
    assert_eq!(trim_to_common_path(&g, &l, &ab, &w(&g, "a")).unwrap(), (w(&g, "a"), w(&g, "a")));
    let g = load("zhnn");
    let l = default_l(&g);
    assert_eq!(trim_to_common_path(&g, &l, &w(&g, "t t"), &w(&g, "t")).unwrap(), (w(&g, "t"), w(&g, "t")));
}

#[test]
fn end_counts() {
    let g = load("zhnn");
    for d in 1..5 {
        assert_eq!(ends(&g, d, CAP).unwrap().len(), 2);
    }
    let g = load("modg");
    let counts: Vec<usize> = (1..=4).map(|d| ends(&g, d, CAP).unwrap().len()).collect();
    assert_eq!(counts, vec![2, 4, 4, 8]);
    let g = load("sl2z");
    assert_eq!(ends(&g, 2, CAP).unwrap().len(), 4);
}

#[test]
fn rays() {
    let g = load("modg");
    let l = default_l(&g);
    let vm = VisibleMachine::new(&g, &l, 100_000).unwrap();
    let r = Ray { u: vec![], v: w(&g, "a b") };
    assert!(matches!(classify_ray(&g, &vm, &l, &r).unwrap(), RayClass::End(_)));
    let bad = Ray { u: vec![], v: w(&g, "a a") };
    assert!(matches!(classify_ray(&g, &vm, &l, &bad), Err(BsError::NotLPrefix(_))));

    let g = load("zhnn");
    let l = default_l(&g);
    let vm = VisibleMachine::new(&g, &l, 100_000).unwrap();
    for v in ["t", "t^-1"] {
        assert!(matches!(classify_ray(&g, &vm, &l, &Ray { u: vec![], v: w(&g, v) }).unwrap(), RayClass::End(_)));
    }

    let g = load("sl2z");
    let l = default_l(&g);
    let vm = VisibleMachine::new(&g, &l, 100_000).unwrap();
    assert!(matches!(classify_ray(&g, &vm, &l, &Ray { u: vec![], v: w(&g, "a b") }).unwrap(), RayClass::End(_)));

    let g = load("zstar");
    let l = default_l(&g);
    let vm = VisibleMachine::new(&g, &l, 100_000).unwrap();
    let r = Ray { u: w(&g, "a"), v: w(&g, "c") };
    match classify_ray(&g, &vm, &l, &r).unwrap() {
        RayClass::BoundaryPoint { vertex, f_letter, head, period } => {
            assert_eq!(vertex.id(&g), "(E, a)");
            assert_eq!(f_letter, crate::vgroups::E);
            assert!(head.is_empty());
            assert_eq!(period, w(&g, "c"));
        }
        other => panic!("{other:?}"),
    }
    let r = Ray { u: vec![], v: w(&g, "c") };
    match classify_ray(&g, &vm, &l, &r).unwrap() {
        RayClass::BoundaryPoint { vertex, .. } => assert_eq!(vertex.id(&g), "(E, 1)"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn degrees_are_translation_invariant() {
    for name in ["modg", "sl2z"] {
        let g = load(name);
        let base = tree_ball(&g, 2, CAP).unwrap();
        let mut want: Vec<_> = base.degree.clone();
        want.sort();
        for word in ["a", "a b", "b a b"] {
            let Ok(u) = g.alphabet().parse_word(word) else { continue };
            let nf = g.normal_form(&u);
            let root = TreeVertex::of(&g, &nf, g.base());
            let b = tree_ball_from(&g, root, 2, CAP).unwrap();
            let mut got = b.degree.clone();
            got.sort();
            assert_eq!(got, want, "{name} {word}");
        }
    }
}

#[test]
fn boundary_reports() {
    let g = load("zhnn");
    let x = default_ygraph(&g).unwrap();
    let r = boundary_report(&g, &x, 2, BoundaryOptions::default()).unwrap();
    assert!(r.ok());
    assert!(r.vertices.iter().all(|v| v.points.is_none()));
    assert_eq!(r.cylinders.len(), 2);

    let g = load("modg");
    let x = default_ygraph(&g).unwrap();
    let r = boundary_report(&g, &x, 2, BoundaryOptions::default()).unwrap();
    assert!(r.ok());
    assert_eq!(r.vertices.len(), 7);
    assert!(r.vertices.iter().all(|v| v.points.is_none()));
    assert_eq!(r.cylinders.len(), 4);

    let g = load("sl2z");
    let x = default_ygraph(&g).unwrap();
    let r = boundary_report(&g, &x, 2, BoundaryOptions::default()).unwrap();
    assert!(r.ok(), "{}", r.to_text(&g));

    let g = load("zstar");
    let x = default_ygraph(&g).unwrap();
    let r = boundary_report(&g, &x, 1, BoundaryOptions::default()).unwrap();
    assert!(r.ok(), "{}", r.to_text(&g));
    for v in &r.vertices {
        let want = if v.vertex.vertex_type(&g) == g.base() { None } else { Some(2) };
        assert_eq!(v.points, want, "{}", v.vertex.id(&g));
    }
}
