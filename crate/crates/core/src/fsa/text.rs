//! Line-oriented exchange format.
//!
//! ```text
//! fsa <nstates> <start,...> <accept,...>
//! <src> <letter> <dst>
//! ```
//! Empty lists are written `-`; ε is `@eps`.

use super::{Dfa, FsaError, Nfa, Sym};

fn list(xs: &[u32]) -> String {
    if xs.is_empty() {
        "-".to_string()
    } else {
        xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

fn parse_list(s: &str, line: usize) -> Result<Vec<u32>, FsaError> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.parse().map_err(|_| FsaError::Parse(line, format!("bad state `{x}`")))).collect()
}

pub fn nfa_to_text(n: &Nfa, names: &[String]) -> String {
    let accepts: Vec<u32> = (0..n.num_states() as u32).filter(|&q| n.is_accept(q)).collect();
    let mut out = format!("fsa {} {} {}\n", n.num_states(), list(n.starts()), list(&accepts));
    for q in 0..n.num_states() as u32 {
        for &(a, p) in n.edges(q) {
            let l = a.map_or("@eps", |a| names[a].as_str());
            out.push_str(&format!("{q} {l} {p}\n"));
        }
    }
    out
}

pub fn dfa_to_text(d: &Dfa, names: &[String]) -> String {
    let accepts = d.accepting_states();
    let mut out = format!("fsa {} {} {}\n", d.num_states(), d.start(), list(&accepts));
    for (q, a, p) in d.transitions() {
        out.push_str(&format!("{q} {} {p}\n", names[a]));
    }
    out
}

pub fn nfa_from_text(text: &str, names: &[String]) -> Result<Nfa, FsaError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or(FsaError::Parse(1, "missing header".into()))?;
    let f: Vec<&str> = header.split_whitespace().collect();
    if f.len() != 4 || f[0] != "fsa" {
        return Err(FsaError::Parse(hl + 1, "expected `fsa <n> <starts> <accepts>`".into()));
    }
    let ns: usize = f[1].parse().map_err(|_| FsaError::Parse(hl + 1, "bad state count".into()))?;
    let mut n = Nfa::new(names.len());
    for _ in 0..ns {
        n.add_state(false);
    }
    let check = |q: u32, line: usize| {
        if (q as usize) < ns {
            Ok(q)
        } else {
            Err(FsaError::Parse(line, format!("state {q} out of range")))
        }
    };
    for q in parse_list(f[2], hl + 1)? {
        n.add_start(check(q, hl + 1)?);
    }
    for q in parse_list(f[3], hl + 1)? {
        n.set_accept(check(q, hl + 1)?, true);
    }
    for (i, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(FsaError::Parse(i + 1, "expected `src letter dst`".into()));
        }
        let q = check(t[0].parse().map_err(|_| FsaError::Parse(i + 1, "bad src".into()))?, i + 1)?;
        let p = check(t[2].parse().map_err(|_| FsaError::Parse(i + 1, "bad dst".into()))?, i + 1)?;
        let a: Option<Sym> = if t[1] == "@eps" {
            None
        } else {
            Some(names.iter().position(|x| x == t[1]).ok_or_else(|| FsaError::UnknownLetter(t[1].to_string()))?)
        };
        n.add(q, a, p);
    }
    Ok(n)
}

/// Parse text that describes a deterministic automaton exactly (one start, no ε,
/// no duplicate letters per state).
pub fn dfa_from_text(text: &str, names: &[String]) -> Result<Dfa, FsaError> {
    let n = nfa_from_text(text, names)?;
    if n.starts().len() != 1 {
        return Err(FsaError::NotDeterministic("needs exactly one start state".into()));
    }
    let mut d = Dfa::empty(names.len());
    for _ in 1..n.num_states() {
        d.add_state(false);
    }
    d.set_start(n.starts()[0]);
    for q in 0..n.num_states() as u32 {
        d.set_accept(q, n.is_accept(q));
        for &(a, p) in n.edges(q) {
            let a = a.ok_or_else(|| FsaError::NotDeterministic("ε-transition".into()))?;
            if d.next(q, a).is_some() {
                return Err(FsaError::NotDeterministic(format!("state {q} letter {}", names[a])));
            }
            d.set(q, a, p);
        }
    }
    Ok(d)
}
