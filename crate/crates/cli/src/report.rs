use std::fmt::Display;
use std::path::Path;

pub enum Failure {
    /// a check failed; the report has been written
    Verify,
    /// bad input or an exceeded cap
    Usage(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type CmdResult = Result<(), Failure>;

/// Line-oriented `key=value` report.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { lines: vec![format!("command={command}")] }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key}={value}"));
        self
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    /// Print, copy to `out` when given, and map `ok` to the exit status.
    pub fn finish(&self, out: Option<&Path>, ok: bool) -> CmdResult {
        emit(&self.text(), out)?;
        if ok {
            Ok(())
        } else {
            Err(Failure::Verify)
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}
