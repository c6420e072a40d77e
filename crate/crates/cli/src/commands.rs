use std::path::Path;

use gogauto::bstree::{self, BoundaryOptions, Ray, RayClass};
use gogauto::deploy::{self, DeployOptions, TrackerMachine, VisibleMachine};
use gogauto::fsa::text::{dfa_from_text, dfa_to_text};
use gogauto::fsa::Word;
use gogauto::gog::{self, parse_spec, GraphOfGroups, LetterKind};
use gogauto::ygraph::{self, CollapseOutcome, StructureHandle, YGraph};

use crate::report::{emit, CmdResult, Failure, Report};
use crate::{
    CollapseArgs, Common, DotArgs, DotWhat, EquivArgs, Format, FtArgs, LanguageArgs, PairArgs, RayArgs, SplitArgs,
    TrackerArgs, WordArgs, YArgs,
};

/// Visible-machine state cap.
const VM_CAP: usize = 200_000;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(c: &Common) -> Result<GraphOfGroups, Failure> {
    Ok(parse_spec(&read(&c.spec)?)?)
}

fn word(g: &GraphOfGroups, text: &str) -> Result<Word, Failure> {
    Ok(g.alphabet().parse_word(text)?)
}

fn fmt(g: &GraphOfGroups, w: &[usize]) -> String {
    g.alphabet().format_word(w)
}

fn load_ygraph(g: &GraphOfGroups, arg: &str) -> Result<YGraph, Failure> {
    Ok(match arg {
        "default" => ygraph::default_ygraph(g)?,
        "biautomatic" => ygraph::biautomatic_ygraph(g),
        path => ygraph::read_ygraph(g, Path::new(path))?,
    })
}

fn handle(g: &GraphOfGroups, arg: &str, route: &str) -> Result<StructureHandle, Failure> {
    Ok(ygraph::language_dfa_via(g, &load_ygraph(g, arg)?, route)?)
}

fn bool_word(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dir_and_stem(c: &Common, default_stem: &str) -> Option<(std::path::PathBuf, String)> {
    c.out.as_ref().map(|d| (d.clone(), default_stem.to_string()))
}

pub fn validate(c: &Common) -> CmdResult {
    let mut r = Report::new("validate");
    r.kv("spec", c.spec.display());
    match parse_spec(&read(&c.spec)?) {
        Ok(g) => {
            r.kv("valid", "yes");
            r.kv("vertices", g.vertices().len());
            r.kv("edges", g.edges().len());
            r.kv("tree_edges", g.edges().iter().filter(|e| e.tree).count());
            r.kv("letters", g.alphabet().len());
            r.kv("base", &g.vertices()[g.base()].name);
            r.kv("reduced", bool_word(g.is_reduced()));
            r.finish(c.out.as_deref(), true)
        }
        Err(e) => {
            r.kv("valid", "no");
            r.kv("reason", e);
            r.finish(c.out.as_deref(), false)
        }
    }
}

pub fn reduce(c: &Common) -> CmdResult {
    let g = load(c)?;
    let red = gog::reduce(&g)?;
    let h = &red.graph;
    let mut r = Report::new("reduce");
    r.kv("collapsed", red.collapsed.len());
    for (i, e) in red.collapsed.iter().enumerate() {
        r.kv(&format!("collapsed.{i}"), e);
    }
    r.kv("vertices", h.vertices().len());
    r.kv("edges", h.edges().len());
    r.kv("reduced", bool_word(h.is_reduced()));
    for s in 0..g.alphabet().len() {
        r.kv(&format!("letter.{}", g.alphabet().name(s)), fmt(h, &red.letter_images[s]));
    }
    r.finish(c.out.as_deref(), true)
}

pub fn alphabet(c: &Common) -> CmdResult {
    let g = load(c)?;
    let a = g.alphabet();
    let mut r = Report::new("alphabet");
    r.kv("letters", a.len());
    for (i, l) in a.letters().iter().enumerate() {
        let kind = match &l.kind {
            LetterKind::Identity => "identity".to_string(),
            LetterKind::Vertex(at) => {
                let vs: Vec<&str> = at.iter().map(|(v, _)| g.vertices()[*v].name.as_str()).collect();
                format!("vertex:{}", vs.join(","))
            }
            LetterKind::Stable(oe) => format!("stable:{}", g.oedge_name(*oe)),
        };
        r.kv(&format!("letter.{i}"), format!("{} inverse={} kind={kind}", l.name, a.name(l.inverse)));
    }
    r.finish(c.out.as_deref(), true)
}

pub fn nf(a: &WordArgs) -> CmdResult {
    let g = load(&a.c)?;
    let u = word(&g, &a.word)?;
    let nf = g.normal_form(&u);
    let mut r = Report::new("nf");
    r.kv("word", fmt(&g, &u));
    r.kv("nf", g.format_nf(&nf));
    r.kv("nf_word", fmt(&g, &g.to_word(&nf)));
    r.kv("syllables", nf.len());
    r.kv("identity", bool_word(nf.is_identity()));
    r.finish(a.c.out.as_deref(), true)
}

pub fn eq(a: &PairArgs) -> CmdResult {
    let g = load(&a.c)?;
    let (u, v) = (word(&g, &a.word)?, word(&g, &a.word2)?);
    let mut r = Report::new("eq");
    r.kv("word", fmt(&g, &u));
    r.kv("word2", fmt(&g, &v));
    r.kv("equal", bool_word(g.equals(&u, &v)));
    r.finish(a.c.out.as_deref(), true)
}

pub fn dist(a: &PairArgs) -> CmdResult {
    let g = load(&a.c)?;
    let (u, v) = (word(&g, &a.word)?, word(&g, &a.word2)?);
    let d = gog::distance(&g, &u, &v, a.c.depth, a.c.node_cap)?;
    let mut r = Report::new("dist");
    r.kv("radius", a.c.depth);
    r.kv("distance", d.map_or(format!(">{}", a.c.depth), |d| d.to_string()));
    r.finish(a.c.out.as_deref(), true)
}

pub fn ball(c: &Common) -> CmdResult {
    let g = load(c)?;
    let b = gog::cayley_ball(&g, c.depth, c.node_cap)?;
    let mut r = Report::new("ball");
    r.kv("radius", c.depth);
    r.kv("size", b.len());
    for (d, layer) in b.layers.iter().enumerate() {
        r.kv(&format!("sphere.{d}"), layer.len());
    }
    r.finish(c.out.as_deref(), true)
}

pub fn ygraph_validate(a: &YArgs) -> CmdResult {
    let g = load(&a.c)?;
    let x = load_ygraph(&g, &a.y.ygraph)?;
    let viol = ygraph::validate_ygraph(&g, &x);
    let mut r = Report::new("ygraph-validate");
    r.kv("vertices", x.vertices.len());
    r.kv("edges", x.edges.len());
    r.kv("violations", viol.len());
    for (i, v) in viol.iter().enumerate() {
        r.kv(&format!("violation.{i}"), format!("{}: {}", v.axiom, v.detail));
    }
    r.finish(None, viol.is_empty())
}

fn ygraph_summary(r: &mut Report, g: &GraphOfGroups, x: &YGraph) {
    r.kv("vertices", x.vertices.len());
    for (i, v) in x.vertices.iter().enumerate() {
        r.kv(&format!("vertex.{i}"), format!("{} type={} class={}", v.name, g.vertices()[v.vtype].name, v.class));
    }
    r.kv("edges", x.edges.len());
    for (i, e) in x.edges.iter().enumerate() {
        let shown: Vec<String> = e.set.enumerate(2).iter().map(|w| fmt(g, w)).collect();
        r.kv(
            &format!("edge.{i}"),
            format!("{} {}->{} type={} set={{{}}}", e.name, x.vertices[e.from].name, x.vertices[e.to].name, g.oedge_name(e.etype), shown.join(",")),
        );
    }
}

/// Write X when --out names a directory, else print DOT or a summary.
fn put_ygraph(c: &Common, g: &GraphOfGroups, x: &YGraph, mut r: Report, stem: &str, ok: bool) -> CmdResult {
    if c.format == Format::Dot {
        return emit(&ygraph::to_dot(g, x), c.out.as_deref());
    }
    ygraph_summary(&mut r, g, x);
    if let Some((dir, stem)) = dir_and_stem(c, stem) {
        let path = ygraph::write_ygraph(g, x, &dir, &stem)?;
        r.kv("written", path.display());
    }
    r.finish(None, ok)
}

pub fn ygraph_default(c: &Common) -> CmdResult {
    let g = load(c)?;
    let x = ygraph::default_ygraph(&g)?;
    put_ygraph(c, &g, &x, Report::new("ygraph-default"), "default", true)
}

fn language_report(c: &Common, g: &GraphOfGroups, h: &StructureHandle, name: &str) -> CmdResult {
    if c.format == Format::Fsa {
        return emit(&dfa_to_text(&h.dfa, &g.alphabet().names()), c.out.as_deref());
    }
    let mut r = Report::new(name);
    r.kv("route", &h.route);
    r.kv("states", h.dfa.num_states());
    let counts = h.dfa.count_by_length(c.maxlen);
    for (n, k) in counts.iter().enumerate() {
        r.kv(&format!("count.{n}"), k);
    }
    for (i, w) in h.dfa.enumerate(c.maxlen.min(3)).iter().enumerate() {
        r.kv(&format!("word.{i}"), fmt(g, w));
    }
    r.finish(c.out.as_deref(), true)
}

pub fn language(a: &LanguageArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, &a.route)?;
    language_report(&a.c, &g, &h, "language")
}

pub fn synchronize(a: &YArgs) -> CmdResult {
    let g = load(&a.c)?;
    let x = load_ygraph(&g, &a.y.ygraph)?;
    let h = ygraph::synchronize(&g, &x)?;
    language_report(&a.c, &g, &h, "synchronize")
}

fn vertex_id(x: &YGraph, name: &str) -> Result<usize, Failure> {
    x.vertex_by_name(name)
        .or_else(|| name.parse().ok().filter(|&i: &usize| i < x.vertices.len()))
        .ok_or_else(|| Failure::Usage(format!("no vertex `{name}`")))
}

pub fn collapse(a: &CollapseArgs) -> CmdResult {
    let g = load(&a.c)?;
    let x = load_ygraph(&g, &a.y.ygraph)?;
    let (v, v2) = (vertex_id(&x, &a.v1)?, vertex_id(&x, &a.v2)?);
    let mut r = Report::new("collapse");
    r.kv("K", a.c.k);
    r.kv("maxlen", a.c.maxlen);
    match ygraph::collapse(&g, &x, v, v2, a.c.k, a.c.maxlen)? {
        CollapseOutcome::Success(y) => {
            r.kv("outcome", "success");
            put_ygraph(&a.c, &g, &y, r, "collapsed", true)
        }
        CollapseOutcome::Failure { witness, reason } => {
            r.kv("outcome", "failure");
            r.kv("reason", reason);
            if let Some((u, w)) = witness {
                r.kv("witness", format!("{} | {}", fmt(&g, &u), fmt(&g, &w)));
            }
            r.finish(None, false)
        }
    }
}

pub fn split(a: &SplitArgs) -> CmdResult {
    let g = load(&a.c)?;
    let x = load_ygraph(&g, &a.y.ygraph)?;
    let u = word(&g, &a.word)?;
    let nf = g.normal_form(&u);
    let v = g.end_vertex(&nf);
    let target = match &a.target {
        Some(p) => dfa_from_text(&read(p)?, &g.alphabet().names())?,
        None => ygraph::values::vertex_language(&g, v),
    };
    let y = ygraph::split_for_element(&g, &x, &u, &a.class, &target)?;
    let mut r = Report::new("split");
    r.kv("word", fmt(&g, &u));
    r.kv("class", &a.class);
    put_ygraph(&a.c, &g, &y, r, "split", true)
}

pub fn deploy(a: &YArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, "prohibit")?;
    let vm = VisibleMachine::new(&g, &h.dfa, VM_CAP)?;
    let opts = DeployOptions { k: a.c.k, node_cap: a.c.node_cap, ..DeployOptions::default() };
    let mut dep = deploy::deployment_of(&g, &vm, &h, opts)?;
    let ball = bstree::tree_ball(&g, a.c.depth, a.c.node_cap)?;
    let mut r = Report::new("deploy");
    r.kv("K", a.c.k);
    r.kv("depth", a.c.depth);
    let mut mismatches = 0;
    for (i, t) in ball.vertices.iter().enumerate() {
        let e = dep.at(t.edge, &t.rep)?;
        let direct = deploy::induced_language(&vm, &g, t.edge, &t.rep)?;
        let agree = e.lang.language_eq(&direct);
        mismatches += usize::from(!agree);
        r.kv(
            &format!("position.{i}"),
            format!("{} depth={} class={} states={} direct={}", t.id(&g), ball.depth[i], e.class, e.lang.num_states(), if agree { "equal" } else { "differs" }),
        );
    }
    let bad = dep.check_equivariance()?;
    r.kv("positions", dep.cache().len());
    r.kv("distinct_languages", dep.distinct_languages());
    r.kv("image_size", dep.image_size());
    r.kv("tracker_states", dep.tracker_states());
    r.kv("mismatches", mismatches);
    r.kv("equivariance_failures", bad.len());
    for (i, ((e, h), f)) in bad.iter().enumerate() {
        r.kv(&format!("equivariance.{i}"), format!("{} {} f={f}", g.hat_edge_name(*e), g.format_nf(h)));
    }
    r.finish(a.c.out.as_deref(), mismatches == 0 && bad.is_empty())
}

fn ft_report(r: &mut Report, g: &GraphOfGroups, res: &deploy::FtConstant) {
    r.kv("pairs", res.pairs);
    r.kv("K", res.k.map_or("none".to_string(), |k| k.to_string()));
    if let Some((u, v)) = &res.worst {
        let key = if res.k.is_some() { "worst" } else { "witness" };
        r.kv(key, format!("{} | {}", fmt(g, u), fmt(g, v)));
    }
}

pub fn check_ft(a: &FtArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, "prohibit")?;
    let mut r = Report::new("check-ft");
    r.kv("mode", if a.sync { "sync" } else { "async" });
    r.kv("bound", a.bound);
    let lo = a.c.maxlen.saturating_sub(2).max(1);
    let mut ks = Vec::new();
    let mut last = None;
    for n in lo..=a.c.maxlen {
        let res = deploy::ft_constant(&g, &h.dfa, n, a.sync, a.bound, a.c.node_cap)?;
        r.kv(&format!("K.{n}"), res.k.map_or("none".to_string(), |k| k.to_string()));
        ks.push(res.k);
        last = Some(res);
    }
    let res = last.expect("at least one length");
    r.kv("maxlen", a.c.maxlen);
    ft_report(&mut r, &g, &res);
    let stable = ks.iter().all(|k| *k == ks[0]);
    r.kv("stable", bool_word(stable));
    r.finish(a.c.out.as_deref(), res.k.is_some() && stable)
}

pub fn ft_constant(a: &FtArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, "prohibit")?;
    let res = deploy::ft_constant(&g, &h.dfa, a.c.maxlen, a.sync, a.bound, a.c.node_cap)?;
    let mut r = Report::new("ft-constant");
    r.kv("mode", if a.sync { "sync" } else { "async" });
    r.kv("maxlen", a.c.maxlen);
    r.kv("bound", a.bound);
    ft_report(&mut r, &g, &res);
    r.finish(a.c.out.as_deref(), res.k.is_some())
}

pub fn equiv(a: &EquivArgs) -> CmdResult {
    let g = load(&a.c)?;
    let l1 = handle(&g, &a.y.ygraph, "prohibit")?.dfa;
    let l2 = handle(&g, &a.ygraph2, "prohibit")?.dfa;
    let eq = deploy::equivalent_upto(&g, &l1, &l2, a.c.maxlen, a.c.k, a.c.node_cap)?;
    let mut r = Report::new("equiv");
    r.kv("maxlen", eq.maxlen);
    r.kv("K", eq.k);
    r.kv("pairs", eq.pairs);
    r.kv("equivalent", bool_word(eq.equivalent));
    if let Some((u, v)) = &eq.witness {
        r.kv("witness", format!("{} | {}", fmt(&g, u), fmt(&g, v)));
    }
    r.finish(a.c.out.as_deref(), eq.equivalent)
}

pub fn tracker(a: &TrackerArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, "prohibit")?;
    let vm = VisibleMachine::new(&g, &h.dfa, VM_CAP)?;
    let mut t = TrackerMachine::new(&g, &vm, a.c.k, a.c.node_cap, DeployOptions::default().state_cap)?;
    let u = word(&g, &a.word)?;
    let q = t.run(&u)?;
    let mut r = Report::new("tracker");
    r.kv("word", fmt(&g, &u));
    r.kv("K", a.c.k);
    r.kv("state", q);
    r.kv("points", t.state(q).len());
    for e in g.hat_edges() {
        let rep = t.report(q, e);
        let sizes: Vec<String> = rep.sets.iter().map(|s| s.len().to_string()).collect();
        r.kv(&format!("edge.{}", g.hat_edge_name(e)), format!("member={} sets=[{}]", bool_word(rep.member()), sizes.join(",")));
    }
    r.kv("states", t.num_states());
    r.finish(a.c.out.as_deref(), true)
}

pub fn tree(c: &Common) -> CmdResult {
    let g = load(c)?;
    let ball = bstree::tree_ball(&g, c.depth, c.node_cap)?;
    if c.format == Format::Dot {
        return emit(&ball.to_dot(&g, None), c.out.as_deref());
    }
    let mut r = Report::new("tree");
    r.kv("depth", c.depth);
    r.kv("vertices", ball.len());
    let sizes: Vec<String> = ball.level_sizes().iter().map(|n| n.to_string()).collect();
    r.kv("levels", sizes.join(","));
    for (i, t) in ball.vertices.iter().enumerate() {
        let deg = ball.degree[i].map_or("infinite".to_string(), |d| d.to_string());
        r.kv(&format!("vertex.{i}"), format!("{} depth={} degree={deg} stabilizer={}", t.id(&g), ball.depth[i], t.stabilizer(&g)));
    }
    r.finish(c.out.as_deref(), true)
}

pub fn ends(c: &Common) -> CmdResult {
    let g = load(c)?;
    let cyl = bstree::ends(&g, c.depth, c.node_cap)?;
    let mut r = Report::new("ends");
    r.kv("depth", c.depth);
    r.kv("count", cyl.len());
    for (i, p) in cyl.iter().enumerate() {
        r.kv(&format!("cylinder.{i}"), p.display(&g));
    }
    r.finish(c.out.as_deref(), true)
}

pub fn classify_ray(a: &RayArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, "prohibit")?;
    let vm = VisibleMachine::new(&g, &h.dfa, VM_CAP)?;
    let ray = Ray { u: word(&g, &a.u)?, v: word(&g, &a.v)? };
    let mut r = Report::new("classify-ray");
    r.kv("u", fmt(&g, &ray.u));
    r.kv("v", fmt(&g, &ray.v));
    match bstree::classify_ray(&g, &vm, &h.dfa, &ray) {
        Ok(RayClass::End(p)) => {
            r.kv("class", "end");
            r.kv("cylinder", p.display(&g));
        }
        Ok(RayClass::BoundaryPoint { vertex, f_letter, head, period }) => {
            r.kv("class", "boundary-point");
            r.kv("vertex", vertex.id(&g));
            r.kv("stabilizer", vertex.stabilizer(&g));
            r.kv("f", g.alphabet().name(f_letter));
            r.kv("head", fmt(&g, &head));
            r.kv("period", fmt(&g, &period));
        }
        Err(bstree::BsError::NotLPrefix(p)) => {
            r.kv("class", "not-an-L-ray");
            r.kv("rejected_prefix", p);
            return r.finish(a.c.out.as_deref(), false);
        }
        Err(e) => return Err(e.into()),
    }
    r.finish(a.c.out.as_deref(), true)
}

pub fn boundary(a: &YArgs) -> CmdResult {
    let g = load(&a.c)?;
    let x = load_ygraph(&g, &a.y.ygraph)?;
    let mut opts = BoundaryOptions { node_cap: a.c.node_cap, ..BoundaryOptions::default() };
    opts.deploy.k = a.c.k;
    let rep = bstree::boundary_report(&g, &x, a.c.depth, opts)?;
    if a.c.format == Format::Dot {
        let ball = bstree::tree_ball(&g, a.c.depth, a.c.node_cap)?;
        let tips: Vec<String> = ball
            .vertices
            .iter()
            .map(|t| rep.vertices.iter().find(|v| v.vertex == *t).map(|v| v.descriptor(&g)).unwrap_or_default())
            .collect();
        return emit(&ball.to_dot(&g, Some(&tips)), a.c.out.as_deref());
    }
    emit(&format!("command=boundary\n{}ok={}\n", rep.to_text(&g), rep.ok()), a.c.out.as_deref())?;
    if rep.ok() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

pub fn export_dot(a: &DotArgs) -> CmdResult {
    let g = load(&a.c)?;
    let text = match a.what {
        DotWhat::Ygraph => ygraph::to_dot(&g, &load_ygraph(&g, &a.y.ygraph)?),
        DotWhat::Tree => bstree::tree_ball(&g, a.c.depth, a.c.node_cap)?.to_dot(&g, None),
    };
    emit(&text, a.c.out.as_deref())
}

pub fn export_fsa(a: &LanguageArgs) -> CmdResult {
    let g = load(&a.c)?;
    let h = handle(&g, &a.y.ygraph, &a.route)?;
    emit(&dfa_to_text(&h.dfa, &g.alphabet().names()), a.c.out.as_deref())
}
