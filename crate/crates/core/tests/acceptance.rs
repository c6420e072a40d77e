//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use gogauto::bstree::{boundary_report, classify_ray, ends, tree_ball, BoundaryOptions, Ray, RayClass};
use gogauto::deploy::{
    deployment_of, ft_constant, induced_language, DeployOptions, FtChecker, Sample, VisibleMachine,
};
use gogauto::fsa::{all_words, Dfa, Word};
use gogauto::gog::{cayley_ball, GraphOfGroups, NormalForm, DEFAULT_NODE_CAP};
use gogauto::vgroups::{Elem, E};
use gogauto::ygraph::{
    biautomatic_ygraph, default_ygraph, language_dfa, language_dfa_via, shortlex_coset_partition, synchronize,
};

const FIXTURES: [&str; 4] = ["modg", "sl2z", "zhnn", "zstar"];

/// Wall-clock limits.
const WORD_PROBLEM_LIMIT: Duration = Duration::from_secs(120);
const ASSEMBLY_LIMIT: Duration = Duration::from_secs(60);

/// Largest fellow-traveller constant searched for.
const FT_BOUND: usize = 4;
/// Constant for the left-translate test.
const K_LEFT: usize = 1;
/// Constant for the tracker and the naive grid comparison.
const K_DEPLOY: usize = 2;
const GRID_KS: [usize; 3] = [0, 1, 2];

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn default_l(g: &GraphOfGroups) -> Dfa {
    language_dfa(g, &default_ygraph(g).unwrap()).unwrap().dfa
}

fn c1_word_problem() -> Outcome {
    let t0 = Instant::now();
    let g = load("sl2z");
    let ab = g.alphabet();
    let (a, b) = (w(&g, "a")[0], w(&g, "b")[0]);
    let gens: Vec<Word> = [a, ab.inverse(a), b, ab.inverse(b)].iter().map(|&s| vec![s]).collect();
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut frontier = words.clone();
    for _ in 0..6 {
        frontier = frontier
            .iter()
            .flat_map(|u| gens.iter().map(move |s| u.iter().chain(s).copied().collect::<Word>()))
            .collect();
        words.extend(frontier.iter().cloned());
    }
    // every pair: equal classes under equals() must be the matrix classes
    let mut by_matrix: HashMap<Mat, usize> = HashMap::new();
    let mut by_nf: HashMap<NormalForm, usize> = HashMap::new();
    let mut mismatches = 0usize;
    for (i, u) in words.iter().enumerate() {
        let m = *by_matrix.entry(word_matrix(&g, u)).or_insert(i);
        let n = *by_nf.entry(g.normal_form(u)).or_insert(i);
        if m != n {
            mismatches += 1;
        }
        if m != i && !g.equals(u, &words[m]) {
            mismatches += 1;
        }
    }
    // direct pairwise calls on the short words
    let short: Vec<&Word> = words.iter().filter(|u| u.len() <= 3).collect();
    for u in &short {
        for v in &short {
            if g.equals(u, v) != (word_matrix(&g, u) == word_matrix(&g, v)) {
                mismatches += 1;
            }
        }
    }
    let dt = t0.elapsed();
    check(mismatches == 0, || format!("{mismatches} mismatches"))?;
    check(dt < WORD_PROBLEM_LIMIT, || format!("took {dt:?}"))?;
    Ok(format!("words={} classes={} mismatches=0 time={:.1}s", words.len(), by_matrix.len(), dt.as_secs_f64()))
}

fn c2_regularity() -> Outcome {
    let mut notes = Vec::new();
    for name in FIXTURES {
        let t0 = Instant::now();
        let g = load(name);
        let x = default_ygraph(&g).map_err(|e| e.to_string())?;
        let got: BTreeSet<Word> = language_dfa(&g, &x).unwrap().dfa.enumerate(8).into_iter().collect();
        let want = assemble_paths(&g, &x, 8);
        let dt = t0.elapsed();
        if got != want {
            let extra = got.difference(&want).next().map(|u| g.alphabet().format_word(u));
            let missing = want.difference(&got).next().map(|u| g.alphabet().format_word(u));
            return Err(format!("{name}: extra {extra:?} missing {missing:?}"));
        }
        check(dt < ASSEMBLY_LIMIT, || format!("{name} took {dt:?}"))?;
        if name == "modg" {
            let short = got.iter().filter(|u| u.len() <= 2).count();
            check(short == 8, || format!("modg length ≤ 2 count {short}"))?;
        }
        notes.push(format!("{name}={}", got.len()));
    }
    Ok(notes.join(" "))
}

fn c3_routes() -> Outcome {
    let mut notes = Vec::new();
    for name in FIXTURES {
        let g = load(name);
        for (kind, x) in [("default", default_ygraph(&g).unwrap()), ("biautomatic", biautomatic_ygraph(&g))] {
            let a = language_dfa_via(&g, &x, "prohibit").unwrap().dfa;
            let b = language_dfa_via(&g, &x, "bx").unwrap().dfa;
            check(isomorphic(&a, &b), || format!("{name} {kind}: routes differ"))?;
            notes.push(format!("{name}/{kind}={}", a.num_states()));
        }
    }
    Ok(notes.join(" "))
}

/// Minimal Dfas are isomorphic iff a bijection from the start matches
/// transitions and accepting states.
fn isomorphic(a: &Dfa, b: &Dfa) -> bool {
    if a.num_states() != b.num_states() || a.nletters() != b.nletters() {
        return false;
    }
    let mut map: HashMap<u32, u32> = HashMap::from([(a.start(), b.start())]);
    let mut stack = vec![a.start()];
    while let Some(p) = stack.pop() {
        let q = map[&p];
        if a.is_accept(p) != b.is_accept(q) {
            return false;
        }
        for s in 0..a.nletters() {
            match (a.next(p, s), b.next(q, s)) {
                (None, None) => {}
                (Some(p2), Some(q2)) => match map.get(&p2) {
                    Some(&m) if m != q2 => return false,
                    Some(_) => {}
                    None => {
                        map.insert(p2, q2);
                        stack.push(p2);
                    }
                },
                _ => return false,
            }
        }
    }
    let image: BTreeSet<u32> = map.values().copied().collect();
    image.len() == map.len()
}

fn c4_ft_certificates() -> Outcome {
    let mut notes = Vec::new();
    for name in FIXTURES {
        let g = load(name);
        let l = default_l(&g);
        let ks: Vec<Option<usize>> =
            (5..=7).map(|n| ft_constant(&g, &l, n, false, FT_BOUND, DEFAULT_NODE_CAP).unwrap().k).collect();
        let Some(k) = ks[0] else { return Err(format!("{name}: no K ≤ {FT_BOUND}")) };
        check(ks.iter().all(|&x| x == Some(k)), || format!("{name}: unstable {ks:?}"))?;
        let ck = FtChecker::new(&g, k, DEFAULT_NODE_CAP).unwrap();
        let sample = Sample::of(&g, &l, 7);
        let pairs = sample.close_pairs(&g);
        for &(i, j) in &pairs {
            let (u, v) = (&sample.words[i], &sample.words[j]);
            check(ck.async_path(u, v, k).is_some(), || {
                format!("{name}: {} / {} fail at K={k}", g.alphabet().format_word(u), g.alphabet().format_word(v))
            })?;
        }
        notes.push(format!("{name}:K={k},pairs={}", pairs.len()));
    }
    Ok(notes.join(" "))
}

fn c5_left_translates() -> Outcome {
    let mut notes = Vec::new();
    for name in ["modg", "sl2z"] {
        let g = load(name);
        let l = language_dfa(&g, &biautomatic_ygraph(&g)).unwrap().dfa;
        let mut rep: HashMap<NormalForm, Word> = HashMap::new();
        for u in l.enumerate(9) {
            rep.entry(g.normal_form(&u)).or_insert(u);
        }
        let ck = FtChecker::new(&g, K_LEFT, DEFAULT_NODE_CAP).unwrap();
        let mut tested = 0;
        let mut worst = 0;
        for u in l.enumerate(6) {
            for a in (0..g.alphabet().len()).filter(|&s| s != E) {
                let mut au = vec![a];
                au.extend(&u);
                let v = rep.get(&g.normal_form(&au)).ok_or_else(|| format!("{name}: no word for a·w within length 9"))?;
                let k = ck.async_constant(&au, v);
                check(k.is_some(), || format!("{name}: {} vs {}", g.alphabet().format_word(&au), g.alphabet().format_word(v)))?;
                worst = worst.max(k.unwrap());
                tested += 1;
            }
        }
        notes.push(format!("{name}:tested={tested},max_k={worst}"));
    }
    Ok(format!("K={K_LEFT} {}", notes.join(" ")))
}

fn c6_synchronize() -> Outcome {
    let mut notes = Vec::new();
    for name in ["modg", "sl2z", "zhnn"] {
        let g = load(name);
        let s = synchronize(&g, &default_ygraph(&g).unwrap()).map_err(|e| format!("{name}: {e}"))?.dfa;
        let words = s.enumerate(8);
        let values: BTreeSet<NormalForm> = words.iter().map(|u| g.normal_form(u)).collect();
        check(values.len() == words.len(), || format!("{name}: {} words, {} values", words.len(), values.len()))?;
        // every element whose normal-form word has length ≤ 8 is hit
        let ball = cayley_ball(&g, 8, DEFAULT_NODE_CAP).unwrap();
        let short: BTreeSet<NormalForm> = ball.dist.keys().filter(|x| g.to_word(x).len() <= 8).cloned().collect();
        check(short == values, || format!("{name}: {} normal forms vs {} values", short.len(), values.len()))?;
        let r = ft_constant(&g, &s, 7, true, FT_BOUND, DEFAULT_NODE_CAP).unwrap();
        let Some(k) = r.k else { return Err(format!("{name}: synchronous test fails at {:?}", r.worst)) };
        notes.push(format!("{name}:words={},K={k},pairs={}", words.len(), r.pairs));
    }
    Ok(notes.join(" "))
}

fn c7_deployment() -> Outcome {
    let mut notes = Vec::new();
    for name in ["modg", "sl2z", "zhnn"] {
        let g = load(name);
        let handle = language_dfa(&g, &default_ygraph(&g).unwrap()).unwrap();
        let vm = VisibleMachine::new(&g, &handle.dfa, 100_000).unwrap();
        let opts = DeployOptions { k: K_DEPLOY, ..DeployOptions::default() };
        let mut dep = deployment_of(&g, &vm, &handle, opts).map_err(|e| e.to_string())?;
        let ball = tree_ball(&g, 3, 10_000).unwrap();
        let mut counts = Vec::new();
        for d in 0..=3 {
            for t in ball.vertices.iter().zip(&ball.depth).filter(|(_, &dt)| dt == d).map(|(t, _)| t) {
                let got = dep.at(t.edge, &t.rep).map_err(|e| format!("{name} {}: {e}", t.id(&g)))?;
                let direct = induced_language(&vm, &g, t.edge, &t.rep).unwrap();
                check(got.lang.language_eq(&direct), || format!("{name} {}: tracker and direct differ", t.id(&g)))?;
            }
            counts.push(dep.distinct_languages());
        }
        let bad = dep.check_equivariance().unwrap();
        check(bad.is_empty(), || format!("{name}: equivariance fails at {} positions", bad.len()))?;
        check(counts.windows(2).all(|p| p[0] <= p[1]) && counts[2] == counts[3], || format!("{name}: counts {counts:?}"))?;
        notes.push(format!("{name}:positions={},distinct={counts:?},image={}", dep.cache().len(), dep.image_size()));
    }
    Ok(notes.join(" "))
}

fn c8_coset_cells() -> Outcome {
    let g = load("sl2z");
    let oe = g.oedge_by_name("E").unwrap();
    let mut shown = Vec::new();
    for (v, emb, f_order) in [(g.src(oe), g.emb0(oe), g.edge_group_order(oe)), (g.dst(oe), g.emb1(oe), g.edge_group_order(oe))] {
        let grp = g.group(v);
        let ranks: Vec<usize> = (0..grp.nletters()).map(|a| g.alphabet().global(v, a)).collect();
        let cells = shortlex_coset_partition(grp, emb, &ranks).map_err(|e| e.to_string())?;
        check(cells.len() == f_order, || format!("{} cells", cells.len()))?;
        let values: Vec<BTreeSet<Elem>> =
            cells.iter().map(|c| c.enumerate(2).iter().map(|u| grp.evaluate(u).unwrap()).collect()).collect();
        let all: BTreeSet<Elem> = grp.elements().unwrap().into_iter().collect();
        let union: BTreeSet<Elem> = values.iter().flatten().cloned().collect();
        let total: usize = values.iter().map(|s| s.len()).sum();
        check(union == all && total == all.len(), || "cells are not a partition".into())?;
        // right action by F: S_f·f' = S_{ff'}
        let table = &g.edge(oe).table;
        for (f, cell) in values.iter().enumerate() {
            for f2 in 0..f_order {
                let moved: BTreeSet<Elem> = cell.iter().map(|x| grp.multiply(x, &emb.images[f2]).unwrap()).collect();
                check(moved == values[table.mul(f, f2)], || format!("S_{f}·{f2} is not a cell"))?;
            }
        }
        shown.push(
            values
                .iter()
                .map(|s| format!("{{{}}}", s.iter().map(|x| grp.display(x)).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join("/"),
        );
    }
    let want = ["{1,a}/{a2,a3}", "{1,b,b2}/{b3,b4,b5}"];
    check(shown == want, || format!("cells {shown:?}"))?;
    Ok(shown.join(" "))
}

fn c9_tree_geometry() -> Outcome {
    let mut notes = Vec::new();
    for name in ["modg", "sl2z", "zhnn"] {
        let g = load(name);
        let ball = tree_ball(&g, 3, 10_000).map_err(|e| e.to_string())?;
        // adjacency inside the ball versus indices from group orders
        let mut adj = vec![0usize; ball.len()];
        for (i, p) in ball.parent.iter().enumerate() {
            if let Some((p, _)) = p {
                adj[i] += 1;
                adj[*p] += 1;
            }
        }
        let mut seen = BTreeSet::new();
        for (i, t) in ball.vertices.iter().enumerate().filter(|(i, _)| ball.depth[*i] < 3) {
            let v = t.vertex_type(&g);
            let order = g.group(v).elements().unwrap().len();
            let index: usize = g.out_edges(v).iter().map(|&oe| order / g.edge_group_order(oe)).sum();
            check(adj[i] == index && ball.degree[i] == Some(index), || format!("{name} {}: {} vs {index}", t.id(&g), adj[i]))?;
            seen.insert(index);
        }
        if name == "modg" {
            let sizes = tree_ball(&g, 2, 10_000).unwrap().level_sizes();
            check(sizes == [1, 2, 4], || format!("modg sizes {sizes:?}"))?;
        }
        if name == "zhnn" {
            for d in 1..=5 {
                let n = ends(&g, d, 10_000).unwrap().len();
                check(n == 2, || format!("zhnn depth {d}: {n} ends"))?;
            }
        }
        notes.push(format!("{name}:degrees={seen:?}"));
    }
    Ok(notes.join(" "))
}

fn c10_boundary() -> Outcome {
    let mut notes = Vec::new();
    for name in FIXTURES {
        let g = load(name);
        let depth = if name == "zstar" { 1 } else { 2 };
        let r = boundary_report(&g, &default_ygraph(&g).unwrap(), depth, BoundaryOptions::default()).map_err(|e| e.to_string())?;
        check(r.disjoint && r.exhaustive && r.strata_ok, || format!("{name}: {}", r.to_text(&g)))?;
        if name == "zstar" {
            for v in &r.vertices {
                let want = if v.vertex.vertex_type(&g) == g.base() { None } else { Some(2) };
                check(v.points == want, || format!("zstar {}: {:?}", v.vertex.id(&g), v.points))?;
            }
        }
        notes.push(format!("{name}:vertices={}", r.vertices.len()));
    }

    // hand classification of the example rays
    let rays: [(&str, &str, &str, Option<&str>); 6] = [
        ("modg", "", "a b", None),
        ("sl2z", "", "a b", None),
        ("zhnn", "", "t", None),
        ("zhnn", "", "t^-1", None),
        ("zstar", "a", "c", Some("(E, a)")),
        ("zstar", "", "c", Some("(E, 1)")),
    ];
    for (name, u, v, want) in rays {
        let g = load(name);
        let l = default_l(&g);
        let vm = VisibleMachine::new(&g, &l, 100_000).unwrap();
        let parse = |s: &str| if s.is_empty() { Vec::new() } else { w(&g, s) };
        let ray = Ray { u: parse(u), v: parse(v) };
        let got = classify_ray(&g, &vm, &l, &ray).map_err(|e| e.to_string())?;
        let ok = match (&got, want) {
            (RayClass::End(_), None) => true,
            (RayClass::BoundaryPoint { vertex, period, .. }, Some(id)) => vertex.id(&g) == id && *period == ray.v,
            _ => false,
        };
        check(ok, || format!("{name} {u}·({v})^ω classified {got:?}"))?;
    }
    Ok(format!("{} rays=6", notes.join(" ")))
}

fn c11_grid_vs_naive() -> Outcome {
    let g = load("modg");
    let letters: Vec<usize> = ["a", "b", "b^-1"].iter().map(|s| w(&g, s)[0]).collect();
    let words: Vec<Word> = all_words(3, 5).into_iter().map(|u| u.iter().map(|&i| letters[i]).collect()).collect();
    let gens: Vec<Mat> = letters.iter().map(|&s| projective(letter_matrix(g.alphabet().name(s)))).collect();
    let dist = psl_ball(&gens, 10);
    let prefixes: Vec<Vec<Mat>> = words
        .iter()
        .map(|u| {
            let mut m = I;
            let mut out = vec![I];
            for &s in u {
                m = mat_mul(m, letter_matrix(g.alphabet().name(s)));
                out.push(m);
            }
            out
        })
        .collect();
    let checkers: Vec<FtChecker> = GRID_KS.iter().map(|&k| FtChecker::new(&g, k, DEFAULT_NODE_CAP).unwrap()).collect();
    let mut mismatches = 0usize;
    let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            let d = |a: usize, b: usize| dist[&projective(mat_mul(mat_inv(prefixes[i][a]), prefixes[j][b]))];
            for (ck, &k) in checkers.iter().zip(&GRID_KS) {
                let naive = naive_async(&d, u.len(), v.len(), k);
                if naive != ck.async_path(u, v, k).is_some() {
                    mismatches += 1;
                }
                if naive {
                    *tally.entry(k).or_default() += 1;
                }
            }
        }
    }
    check(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("words={} pairs={} passing_by_k={tally:?}", words.len(), words.len() * words.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("word problem vs matrix oracle", c1_word_problem),
        ("language equals path assembly", c2_regularity),
        ("compilation routes agree", c3_routes),
        ("fellow-traveller certificates", c4_ft_certificates),
        ("left-translate fellow travel", c5_left_translates),
        ("synchronized structure", c6_synchronize),
        ("deployment round trip", c7_deployment),
        ("coset cells", c8_coset_cells),
        ("tree geometry", c9_tree_geometry),
        ("boundary decomposition", c10_boundary),
        ("grid search vs naive search", c11_grid_vs_naive),
    ];
    let mut failed = 0;
    for (n, (title, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t0.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {title} ({secs:.1}s): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title} ({secs:.1}s): {why}", n + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
