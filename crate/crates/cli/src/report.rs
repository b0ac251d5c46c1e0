//! Input loading and output routing shared by every subcommand.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use freechi::laws::{to_cumulants, LawSpec};
use freechi::rational::format_rational;
use freechi::{CumulantSeq, Partition, Rational, RationalMatrix};
use serde_json::{json, Value};

/// Whether a command's mathematical check held. Pure computations are
/// always `Holds`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            csv: None,
            verdict: Verdict::Holds,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_verdict(mut self, holds: bool) -> Self {
        self.verdict = if holds { Verdict::Holds } else { Verdict::Fails };
        self
    }
}

/// Where machine-readable output goes: `-` means stdout.
pub struct Sinks {
    pub json: Option<String>,
    pub csv: Option<String>,
}

impl Sinks {
    pub fn emit(&self, report: &Report) -> Result<()> {
        let mut text_to_stdout = true;
        if let Some(dest) = &self.json {
            let body = serde_json::to_string_pretty(&report.json)? + "\n";
            text_to_stdout &= write_to(dest, &body)?;
        }
        if let Some(dest) = &self.csv {
            let Some(csv) = &report.csv else {
                bail!("this command has no CSV output");
            };
            text_to_stdout &= write_to(dest, csv)?;
        }
        if text_to_stdout {
            print!("{}", report.text);
            if !report.text.ends_with('\n') {
                println!();
            }
        }
        Ok(())
    }
}

/// Returns true when the destination was a file, so stdout stays free.
fn write_to(dest: &str, body: &str) -> Result<bool> {
    if dest == "-" {
        print!("{body}");
        Ok(false)
    } else {
        fs::write(dest, body).with_context(|| format!("cannot write {dest}"))?;
        Ok(true)
    }
}

/// Inline JSON when the argument starts with `{` or `[`, else a file path.
fn json_source(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(Path::new(arg)).with_context(|| format!("cannot read {arg}"))
    }
}

pub fn load_law_spec(arg: &str) -> Result<LawSpec> {
    let src = json_source(arg)?;
    let spec: LawSpec = serde_json::from_str(&src).with_context(|| format!("bad law spec {arg}"))?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_law(arg: &str, order: usize) -> Result<CumulantSeq> {
    Ok(to_cumulants(&load_law_spec(arg)?, order)?)
}

/// CSV of `p/q` tokens, or a JSON array of rows.
pub fn load_matrix(arg: &str) -> Result<RationalMatrix> {
    let src = json_source(arg)?;
    if src.trim_start().starts_with('[') {
        serde_json::from_str(&src).with_context(|| format!("bad matrix {arg}"))
    } else {
        RationalMatrix::from_csv(&src).with_context(|| format!("bad matrix {arg}"))
    }
}

/// Text form `1,3|2` or JSON form `[[1,3],[2]]`.
pub fn parse_partition(s: &str) -> Result<Partition> {
    if s.trim_start().starts_with('[') {
        serde_json::from_str(s).with_context(|| format!("bad partition {s:?}"))
    } else {
        Ok(s.parse()?)
    }
}

pub fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn spaced(v: &[Rational]) -> String {
    rats(v).join(" ")
}

/// `r,value` rows for a 1-indexed sequence.
pub fn indexed_csv(header: &str, v: &[Rational]) -> String {
    let mut out = format!("r,{header}\n");
    for (i, q) in v.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, format_rational(q)));
    }
    out
}

pub fn seq_json(name: &str, v: &[Rational]) -> Value {
    json!({ "order": v.len(), name: rats(v) })
}
