use std::fmt;

use crate::error::{Error, Result};

/// A command's output: echo line, body, and the machine-readable trailer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub echo: String,
    pub body: Vec<String>,
    pub pass: bool,
    pub witnesses: Vec<String>,
    pub scale: usize,
}

/// The `@@` lines of a rendered report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trailer {
    pub pass: bool,
    pub witnesses: Vec<String>,
    pub scale: usize,
}

impl Report {
    pub fn new(echo: String, scale: usize) -> Self {
        Report {
            echo,
            body: Vec::new(),
            pass: true,
            witnesses: Vec::new(),
            scale,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.body.push(s.into());
    }

    /// Records a failed property; the report fails.
    pub fn fail(&mut self, witness: impl fmt::Display) {
        self.pass = false;
        self.witnesses.push(witness.to_string().replace('\n', " "));
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn trailer(&self) -> Trailer {
        Trailer {
            pass: self.pass,
            witnesses: self.witnesses.clone(),
            scale: self.scale,
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.echo)?;
        for l in &self.body {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "@@verdict {}", if self.pass { "pass" } else { "fail" })?;
        for w in &self.witnesses {
            writeln!(f, "@@witness {w}")?;
        }
        writeln!(f, "@@scale {}", self.scale)
    }
}

impl Trailer {
    /// Reads the trailer back from a rendered report.
    pub fn parse(text: &str) -> Result<Trailer> {
        let bad = |m: &str| Error::Diagnostic(format!("report trailer: {m}"));
        let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("@@")).collect();
        let (first, rest) = lines.split_first().ok_or_else(|| bad("missing"))?;
        let pass = match first.strip_prefix("@@verdict ") {
            Some("pass") => true,
            Some("fail") => false,
            _ => return Err(bad("expected `@@verdict pass|fail`")),
        };
        let (last, mid) = rest.split_last().ok_or_else(|| bad("missing `@@scale`"))?;
        let scale = last
            .strip_prefix("@@scale ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("expected `@@scale N`"))?;
        let witnesses = mid
            .iter()
            .map(|l| {
                l.strip_prefix("@@witness ")
                    .map(str::to_string)
                    .ok_or_else(|| bad("expected `@@witness`"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trailer {
            pass,
            witnesses,
            scale,
        })
    }
}
