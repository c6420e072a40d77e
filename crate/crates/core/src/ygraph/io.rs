//! Y-graph files and DOT export.
//!
//! ```text
//! yvertex <id> type=<V> class=<label> lang=<fsa-file>
//! yedge <id> <from> <to> type=<E> set=<fsa-file>
//! ystart <id>
//! yaction vertex=<v> edge-type=<E> f=<elt> perm=(v1,v2)(v3,v4)
//! ```
//! Automaton files are resolved relative to the Y-graph file.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{YAction, YEdge, YGraph, YGraphError, YVertex};
use crate::fsa::text::{dfa_from_text, dfa_to_text};
use crate::gog::GraphOfGroups;

fn io_err(p: &Path, e: std::io::Error) -> YGraphError {
    YGraphError::Io(format!("{}: {e}", p.display()))
}

fn cycles(perm: &[usize], names: &[String]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for i in 0..perm.len() {
        if seen[i] || perm[i] == i {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            cyc.push(names[j].as_str());
            j = perm[j];
        }
        let _ = write!(out, "({})", cyc.join(","));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

fn parse_cycles(s: &str, index: &HashMap<&str, usize>, n: usize, line: usize) -> Result<Vec<usize>, YGraphError> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')').map(|k| (&r[..k], &r[k + 1..])))
            .ok_or_else(|| YGraphError::Syntax(line, format!("bad cycle notation `{s}`")))?;
        let ids: Vec<usize> = body
            .0
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| index.get(t).copied().ok_or_else(|| YGraphError::Syntax(line, format!("unknown vertex `{t}`"))))
            .collect::<Result<_, _>>()?;
        for (k, &a) in ids.iter().enumerate() {
            perm[a] = ids[(k + 1) % ids.len()];
        }
        rest = body.1.trim();
    }
    Ok(perm)
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// Write `<dir>/<stem>.yg` and one automaton file per label; returns the
/// Y-graph file path.
pub fn write_ygraph(g: &GraphOfGroups, x: &YGraph, dir: &Path, stem: &str) -> Result<PathBuf, YGraphError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let names = g.alphabet().names();
    let vnames: Vec<String> = x.vertices.iter().map(|v| v.name.clone()).collect();
    let mut out = String::new();
    let put = |file: String, text: String| -> Result<String, YGraphError> {
        let p = dir.join(&file);
        std::fs::write(&p, text).map_err(|e| io_err(&p, e))?;
        Ok(file)
    };
    for (i, v) in x.vertices.iter().enumerate() {
        let f = put(format!("{stem}.v{i}_{}.fsa", file_stem(&v.name)), dfa_to_text(&v.lang, &names))?;
        let _ = writeln!(out, "yvertex {} type={} class={} lang={f}", v.name, g.vertices()[v.vtype].name, v.class);
    }
    for (i, e) in x.edges.iter().enumerate() {
        let f = put(format!("{stem}.e{i}_{}.fsa", file_stem(&e.name)), dfa_to_text(&e.set, &names))?;
        let _ = writeln!(out, "yedge {} {} {} type={} set={f}", e.name, vnames[e.from], vnames[e.to], g.oedge_name(e.etype));
    }
    let _ = writeln!(out, "ystart {}", vnames[x.start]);
    for a in &x.actions {
        let _ = writeln!(
            out,
            "yaction vertex={} edge-type={} f={} perm={}",
            vnames[a.vertex],
            g.oedge_name(a.etype),
            g.edge(a.etype).table.names[a.f],
            cycles(&a.perm, &vnames)
        );
    }
    let p = dir.join(format!("{stem}.yg"));
    std::fs::write(&p, out).map_err(|e| io_err(&p, e))?;
    Ok(p)
}

pub fn read_ygraph(g: &GraphOfGroups, path: &Path) -> Result<YGraph, YGraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let names = g.alphabet().names();
    let load = |file: &str, line: usize| -> Result<crate::fsa::Dfa, YGraphError> {
        let p = dir.join(file);
        let t = std::fs::read_to_string(&p).map_err(|e| io_err(&p, e))?;
        dfa_from_text(&t, &names).map_err(|e| YGraphError::Syntax(line, format!("{file}: {e}")))
    };
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut start = None;
    let mut pending_actions = Vec::new();
    let mut pending_edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let kv = |from: usize| -> Result<HashMap<&str, &str>, YGraphError> {
            toks[from..]
                .iter()
                .map(|t| t.split_once('=').ok_or_else(|| YGraphError::Syntax(line, format!("expected key=value, got `{t}`"))))
                .collect()
        };
        let need = |m: &HashMap<&str, &str>, k: &str| -> Result<String, YGraphError> {
            m.get(k).map(|s| s.to_string()).ok_or_else(|| YGraphError::Syntax(line, format!("missing {k}=")))
        };
        match toks[0] {
            "yvertex" if toks.len() >= 2 => {
                let m = kv(2)?;
                let vt = need(&m, "type")?;
                let vtype = g.vertex_by_name(&vt).ok_or_else(|| YGraphError::Syntax(line, format!("unknown vertex of Y `{vt}`")))?;
                vertices.push(YVertex {
                    name: toks[1].to_string(),
                    vtype,
                    class: need(&m, "class")?,
                    lang: load(&need(&m, "lang")?, line)?,
                });
            }
            "yedge" if toks.len() >= 4 => pending_edges.push((line, toks[1].to_string(), toks[2].to_string(), toks[3].to_string(), kv(4)?.into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<HashMap<_, _>>())),
            "ystart" if toks.len() == 2 => start = Some((line, toks[1].to_string())),
            "yaction" => pending_actions.push((line, kv(1)?.into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<HashMap<_, _>>())),
            _ => return Err(YGraphError::Syntax(line, format!("unknown statement `{l}`"))),
        }
    }
    let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
    let vid = |n: &str, line: usize| index.get(n).copied().ok_or_else(|| YGraphError::Syntax(line, format!("unknown vertex `{n}`")));
    let etype = |n: &str, line: usize| g.oedge_by_name(n).ok_or_else(|| YGraphError::Syntax(line, format!("unknown edge type `{n}`")));
    for (line, name, from, to, m) in &pending_edges {
        let get = |k: &str| m.get(k).ok_or_else(|| YGraphError::Syntax(*line, format!("missing {k}=")));
        edges.push(YEdge {
            name: name.clone(),
            from: vid(from, *line)?,
            to: vid(to, *line)?,
            etype: etype(get("type")?, *line)?,
            set: load(get("set")?, *line)?,
        });
    }
    let (sl, sn) = start.ok_or_else(|| YGraphError::Syntax(0, "missing ystart".into()))?;
    let start = vid(&sn, sl)?;
    let mut actions = Vec::new();
    for (line, m) in &pending_actions {
        let get = |k: &str| m.get(k).ok_or_else(|| YGraphError::Syntax(*line, format!("missing {k}=")));
        let oe = etype(get("edge-type")?, *line)?;
        let fname = get("f")?;
        let f = g.edge(oe).table.index(fname).ok_or_else(|| YGraphError::Syntax(*line, format!("`{fname}` is not in the edge group")))?;
        actions.push(YAction {
            vertex: vid(get("vertex")?, *line)?,
            etype: oe,
            f,
            perm: parse_cycles(get("perm")?, &index, vertices.len(), *line)?,
        });
    }
    Ok(YGraph { vertices, edges, start, actions })
}

const PALETTE: [&str; 8] = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown", "teal"];

/// X as a DOT digraph; edge colors follow π-types.
pub fn to_dot(g: &GraphOfGroups, x: &YGraph) -> String {
    let mut out = String::from("digraph X {\n  rankdir=LR;\n");
    for (i, v) in x.vertices.iter().enumerate() {
        let shape = if i == x.start { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  v{i} [shape={shape}, label=\"{}\\n{}\\n{}\"];", v.name, g.vertices()[v.vtype].name, v.class);
    }
    for e in &x.edges {
        let words: Vec<String> = e.set.enumerate(1).iter().map(|w| g.alphabet().format_word(w)).collect();
        let _ = writeln!(
            out,
            "  v{} -> v{} [color={}, label=\"{} {{{}}}\"];",
            e.from,
            e.to,
            PALETTE[e.etype % PALETTE.len()],
            g.oedge_name(e.etype),
            words.join(",")
        );
    }
    out.push_str("}\n");
    out
}
