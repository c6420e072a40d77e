//! Line-oriented spec files.
//!
//! ```text
//! group Z2 finite {elements=1,a; table=1,a,a,1}
//! group T finite {elements=1; table=1}
//! vertex V1 group=Z2
//! edge E from=V1 to=V2 group=T d0={} d1={} tree=yes
//! base V1
//! ```
//! A brace group may continue over several lines.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Edge, GogError, GraphOfGroups, Vertex};
use crate::fsa::Word;
use crate::vgroups::{finite_subgroup_embedding, Params, StructureRegistry, VertexGroup};

/// Split on whitespace outside braces.
fn tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn braced(v: &str, line: usize) -> Result<&str, GogError> {
    v.strip_prefix('{')
        .and_then(|v| v.strip_suffix('}'))
        .ok_or_else(|| GogError::Syntax(line, format!("expected {{...}}, got `{v}`")))
}

/// `k=v; k=v` inside a brace group.
fn pairs(body: &str, line: usize) -> Result<Vec<(String, String)>, GogError> {
    body.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| GogError::Syntax(line, format!("expected key=value, got `{p}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn keyvals(toks: &[String], line: usize) -> Result<HashMap<String, String>, GogError> {
    let mut out = HashMap::new();
    for t in toks {
        let (k, v) = t.split_once('=').ok_or_else(|| GogError::Syntax(line, format!("expected key=value, got `{t}`")))?;
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(GogError::Syntax(line, format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

/// Parse a word in a structure's own letter names.
pub fn parse_local(g: &dyn VertexGroup, text: &str) -> Option<Word> {
    let names = g.letter_names();
    let find = |t: &str| names.iter().position(|n| n == t);
    let text = text.replace('⁻', "^-").replace('¹', "1");
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "ε" || tok == "1" {
            continue;
        }
        if let Some(a) = find(tok) {
            out.push(a);
            continue;
        }
        let mut rest = tok;
        while !rest.is_empty() {
            let (k, a) = (1..=rest.len())
                .rev()
                .filter(|&k| rest.is_char_boundary(k))
                .find_map(|k| find(&rest[..k]).map(|a| (k, a)))?;
            out.push(a);
            rest = &rest[k..];
        }
    }
    Some(out)
}

pub fn parse_spec(text: &str) -> Result<GraphOfGroups, GogError> {
    parse_spec_with(text, &StructureRegistry::default())
}

pub fn parse_spec_with(text: &str, registry: &StructureRegistry) -> Result<GraphOfGroups, GogError> {
    // join brace continuations into logical statements
    let mut stmts: Vec<(usize, String)> = Vec::new();
    let mut pending: Option<(usize, String, i32)> = None;
    for (i, raw) in text.lines().enumerate() {
        let l = raw.split('#').next().unwrap_or("").trim();
        let depth: i32 = l.chars().map(|c| (c == '{') as i32 - (c == '}') as i32).sum();
        match pending.take() {
            Some((start, mut acc, d)) => {
                acc.push(' ');
                acc.push_str(l);
                if d + depth > 0 {
                    pending = Some((start, acc, d + depth));
                } else {
                    stmts.push((start, acc));
                }
            }
            None if l.is_empty() => {}
            None if depth > 0 => pending = Some((i + 1, l.to_string(), depth)),
            None => stmts.push((i + 1, l.to_string())),
        }
    }
    if let Some((start, _, _)) = pending {
        return Err(GogError::Syntax(start, "unclosed `{`".into()));
    }

    let mut groups: HashMap<String, Arc<dyn VertexGroup>> = HashMap::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut base: Option<(usize, String)> = None;
    let vertex_id = |vs: &[Vertex], name: &str, line: usize| {
        vs.iter().position(|v| v.name == name).ok_or_else(|| GogError::Syntax(line, format!("unknown vertex `{name}`")))
    };

    for (line, s) in stmts {
        let t = tokens(&s);
        match t[0].as_str() {
            "group" => {
                if t.len() < 3 || t.len() > 4 {
                    return Err(GogError::Syntax(line, "expected `group <name> <kind> {k=v; ...}`".into()));
                }
                let params: Params = match t.get(3) {
                    Some(b) => pairs(braced(b, line)?, line)?.into_iter().collect(),
                    None => Params::new(),
                };
                if groups.contains_key(&t[1]) {
                    return Err(GogError::Syntax(line, format!("group `{}` defined twice", t[1])));
                }
                let g = registry.build(&t[2], &t[1], &params).map_err(|e| GogError::Group(line, e))?;
                groups.insert(t[1].clone(), g);
            }
            "vertex" => {
                if t.len() != 3 {
                    return Err(GogError::Syntax(line, "expected `vertex <name> group=<g>`".into()));
                }
                let kv = keyvals(&t[2..], line)?;
                let gname = kv.get("group").ok_or_else(|| GogError::Syntax(line, "vertex needs group=".into()))?;
                let g = groups.get(gname).ok_or_else(|| GogError::Syntax(line, format!("unknown group `{gname}`")))?;
                if vertices.iter().any(|v| v.name == t[1]) {
                    return Err(GogError::Syntax(line, format!("vertex `{}` defined twice", t[1])));
                }
                vertices.push(Vertex { name: t[1].clone(), group: g.clone() });
            }
            "edge" => {
                if t.len() < 2 {
                    return Err(GogError::Syntax(line, "expected `edge <name> from=.. to=.. group=.. d0={..} d1={..} tree=yes|no`".into()));
                }
                let kv = keyvals(&t[2..], line)?;
                for k in kv.keys() {
                    if !["from", "to", "group", "d0", "d1", "tree"].contains(&k.as_str()) {
                        return Err(GogError::Syntax(line, format!("unknown edge key `{k}`")));
                    }
                }
                let get = |k: &str| kv.get(k).ok_or_else(|| GogError::Syntax(line, format!("edge needs {k}=")));
                let from = vertex_id(&vertices, get("from")?, line)?;
                let to = vertex_id(&vertices, get("to")?, line)?;
                let gname = get("group")?;
                let fg = groups.get(gname).ok_or_else(|| GogError::Syntax(line, format!("unknown group `{gname}`")))?;
                let table = fg
                    .finite_table()
                    .ok_or_else(|| GogError::Syntax(line, format!("edge group `{gname}` is not finite")))?
                    .clone();
                let tree = match get("tree")?.as_str() {
                    "yes" => true,
                    "no" => false,
                    x => return Err(GogError::Syntax(line, format!("tree={x}: expected yes or no"))),
                };
                let mut embs = Vec::new();
                for (key, v) in [("d0", from), ("d1", to)] {
                    let vg = vertices[v].group.as_ref();
                    let mut images: Vec<Option<Word>> = vec![None; table.order()];
                    let id = table.validate().map_err(|e| GogError::Group(line, e))?;
                    images[id] = Some(Vec::new());
                    let body = kv.get(key).map(String::as_str).unwrap_or("{}");
                    for (f, w) in pairs(braced(body, line)?, line)? {
                        let i = table
                            .index(&f)
                            .ok_or_else(|| GogError::Syntax(line, format!("`{f}` is not an element of {gname}")))?;
                        let w = parse_local(vg, &w)
                            .ok_or_else(|| GogError::Syntax(line, format!("`{w}` is not a word of {}", vg.name())))?;
                        images[i] = Some(w);
                    }
                    embs.push(finite_subgroup_embedding(vg, &table, &images).map_err(|e| GogError::Group(line, e))?);
                }
                let d1 = embs.pop().unwrap();
                let d0 = embs.pop().unwrap();
                if edges.iter().any(|e| e.name == t[1]) {
                    return Err(GogError::Syntax(line, format!("edge `{}` defined twice", t[1])));
                }
                edges.push(Edge { name: t[1].clone(), from, to, group: fg.clone(), table, d0, d1, tree });
            }
            "base" => {
                if t.len() != 2 {
                    return Err(GogError::Syntax(line, "expected `base <vertex>`".into()));
                }
                base = Some((line, t[1].clone()));
            }
            other => return Err(GogError::Syntax(line, format!("unknown statement `{other}`"))),
        }
    }
    let base = match base {
        Some((line, name)) => vertex_id(&vertices, &name, line)?,
        None => 0,
    };
    GraphOfGroups::new(vertices, edges, base)
}
