use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked item of a campaign.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub campaign: String,
    pub item: Value,
    pub status: Status,
    pub witness: Value,
    pub ms: f64,
}

impl ReportRow {
    pub fn pass(campaign: &str, item: Value, witness: Value) -> Self {
        Self {
            campaign: campaign.to_string(),
            item,
            status: Status::Pass,
            witness,
            ms: 0.0,
        }
    }

    pub fn fail(campaign: &str, item: Value, err: &Error) -> Self {
        Self {
            campaign: campaign.to_string(),
            item,
            status: Status::Fail,
            witness: error_witness(err),
            ms: 0.0,
        }
    }

    pub fn with_ms(mut self, ms: f64) -> Self {
        self.ms = (ms * 1000.0).round() / 1000.0;
        self
    }
}

/// Message plus the full variant data, enough to rerun the failing item.
pub fn error_witness(err: &Error) -> Value {
    json!({ "error": err.to_string(), "detail": format!("{err:?}") })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Jsonl,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

/// Append-only row stream; rows arrive in item order.
pub struct Sink<'a> {
    out: &'a mut dyn Write,
    format: Format,
    campaign: String,
    summary: Summary,
}

impl<'a> Sink<'a> {
    pub fn new(out: &'a mut dyn Write, format: Format, campaign: &str) -> Self {
        Self {
            out,
            format,
            campaign: campaign.to_string(),
            summary: Summary::default(),
        }
    }

    pub fn campaign(&self) -> &str {
        &self.campaign
    }

    pub fn push(&mut self, row: &ReportRow) -> io::Result<()> {
        match row.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
        }
        match self.format {
            Format::Jsonl => {
                serde_json::to_writer(&mut *self.out, row)?;
                writeln!(self.out)
            }
            Format::Text => {
                let status = match row.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                };
                writeln!(
                    self.out,
                    "{:<12} {:<10} {:<4} {} ({:.3} ms)",
                    row.campaign,
                    plain(&row.item),
                    status,
                    row.witness,
                    row.ms
                )
            }
        }
    }

    pub fn finish(self) -> io::Result<Summary> {
        let Summary { pass, fail } = self.summary;
        match self.format {
            Format::Jsonl => {
                let rec = json!({
                    "campaign": self.campaign,
                    "summary": { "rows": pass + fail, "pass": pass, "fail": fail },
                });
                serde_json::to_writer(&mut *self.out, &rec)?;
                writeln!(self.out)?;
            }
            Format::Text => {
                writeln!(self.out, "{:-<40}", "")?;
                writeln!(self.out, "{:<12} {:>8} {:>8} {:>8}", "campaign", "rows", "pass", "fail")?;
                writeln!(
                    self.out,
                    "{:<12} {:>8} {:>8} {:>8}",
                    self.campaign,
                    pass + fail,
                    pass,
                    fail
                )?;
            }
        }
        self.out.flush()?;
        Ok(self.summary)
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
