//! Text, TSV and JSON renderings.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::cases::CaseReport;
use crate::expr::Computed;

pub fn computed_text(c: &Computed) -> String {
    let mut s = format!("{}  cap {}", c.expr, c.cap);
    if let Some(k) = c.block_cap {
        let _ = write!(s, "  block cap {k}");
    }
    s.push('\n');
    s.push_str("level\tsize\tstabilized\n");
    for (n, (size, st)) in c.sizes.iter().zip(&c.stabilized).enumerate() {
        let _ = writeln!(s, "{n}\t{size}\t{}", if *st { "yes" } else { "no" });
    }
    if let Some(r) = &c.routes {
        let _ = writeln!(s, "routes {} / {}: {}", r.first, r.second, if r.agree { "agree" } else { "DISAGREE" });
    }
    for n in &c.notes {
        let _ = writeln!(s, "* {n}");
    }
    s
}

pub fn computed_tsv(c: &Computed) -> String {
    let mut s = String::from("level\tsize\tstabilized\n");
    for (n, (size, st)) in c.sizes.iter().zip(&c.stabilized).enumerate() {
        let _ = writeln!(s, "{n}\t{size}\t{st}");
    }
    s
}

/// The result together with the sequence itself in the schema of
/// `TruncSeq::to_json`.
pub fn computed_json(c: &Computed) -> Value {
    let mut v = serde_json::to_value(c).expect("plain data");
    v["sequence"] = c.seq.to_json();
    v
}

pub fn report_text(r: &CaseReport, verbose: bool) -> String {
    let mut s = format!(
        "{} {}  ({} checks, {:.0} ms)\n",
        if r.passed() { "PASS" } else { "FAIL" },
        r.case,
        r.details.len(),
        r.durations.total_ms
    );
    for c in &r.details {
        if verbose || !c.pass {
            let _ = write!(s, "  {} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
            if !c.pass && !c.info.is_null() {
                let _ = write!(s, "  {}", c.info);
            }
            s.push('\n');
        }
    }
    s
}

pub fn reports_json(rs: &[CaseReport]) -> Value {
    match rs {
        [one] => serde_json::to_value(one).expect("plain data"),
        _ => json!({
            "outcome": if rs.iter().all(CaseReport::passed) { "pass" } else { "fail" },
            "cases": rs,
        }),
    }
}
