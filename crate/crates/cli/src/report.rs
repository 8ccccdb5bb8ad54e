use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use qpslab_core::Corruption;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::CampaignConfig;

pub const SCHEMA: &str = "qpslab/1";

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    /// Position of the point in the campaign's point stream.
    pub index: usize,
    pub check_id: String,
    pub point: Value,
    pub passed: bool,
    pub witness: Option<Value>,
}

impl CheckRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check_id": self.check_id,
            "point_index": self.index,
            "point": self.point,
            "passed": self.passed,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub config: CampaignConfig,
    /// Sorted by point index, then by check order within a point.
    pub records: Vec<CheckRecord>,
    pub ledger_hash: String,
    pub timestamp: u64,
}

/// SHA-256 of the frozen conventions plus any active corruption hook.
pub fn ledger_hash(corruption: Corruption) -> String {
    let mut h = Sha256::new();
    h.update(qpslab_core::CONVENTIONS.as_bytes());
    if corruption != Corruption::None {
        h.update(format!("corruption: {corruption}\n").as_bytes());
    }
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl VerificationReport {
    pub fn new(config: CampaignConfig, records: Vec<CheckRecord>) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        VerificationReport { ledger_hash: ledger_hash(config.corruption), config, records, timestamp }
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.total() - self.passed()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() == 0 { 0 } else { 1 }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "config": self.config.to_json(),
            "records": self.records.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
            "summary": {"total": self.total(), "passed": self.passed(), "failed": self.failed()},
            "ledger_hash": self.ledger_hash,
            "timestamp": self.timestamp,
        })
    }

    /// Per-check tallies and the first failure of each failing check.
    pub fn render_text(&self) -> String {
        let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let e = tally.entry(&r.check_id).or_default();
            e.1 += 1;
            if r.passed {
                e.0 += 1;
            }
        }
        let mut out = format!(
            "{} on {} ({}), {} points, seed {}\n",
            self.config.suite, self.config.group, self.config.backend, self.config.samples, self.config.seed
        );
        for (id, (ok, n)) in &tally {
            let mark = if ok == n { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  {mark} {id:<32} {ok}/{n}");
        }
        for (id, _) in tally.iter().filter(|(_, (ok, n))| ok != n) {
            if let Some(r) = self.records.iter().find(|r| r.check_id == *id && !r.passed) {
                let w = r.witness.as_ref().map(Value::to_string).unwrap_or_default();
                let _ = writeln!(out, "  first failure of {id} at point {}: {}", r.index, truncate(&w, 300));
            }
        }
        let _ = writeln!(out, "total {} passed {} failed {}", self.total(), self.passed(), self.failed());
        out
    }
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        s.chars().take(n).collect::<String>() + "…"
    }
}
