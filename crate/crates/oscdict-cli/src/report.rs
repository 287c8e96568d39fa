//! Verification report serialization. The report is a pure function of the
//! dictionary bytes and the verification config; wall-clock time is
//! recorded only when explicitly requested, so that repeated runs produce
//! byte-identical files.

use crate::formats::{fmt_f64, meta_json};
use oscdict_core::verify::{CheckId, CheckReport, Location};
use oscdict_core::{Dictionary, Report, VerifyOpts};

fn opt_u64(v: Option<u64>) -> String {
    v.map_or_else(|| "null".into(), |x| x.to_string())
}

fn opt_usize(v: Option<usize>) -> String {
    v.map_or_else(|| "null".into(), |x| x.to_string())
}

fn location_json(loc: &Location) -> String {
    let note = match &loc.note {
        Some(n) => format!("\"{}\"", n.replace('\\', "\\\\").replace('"', "\\\"")),
        None => "null".into(),
    };
    format!(
        "{{\"entry\": {}, \"entry2\": {}, \"tau\": {}, \"omega\": {}, \"t\": {}, \"note\": {}}}",
        opt_usize(loc.entry),
        opt_usize(loc.entry2),
        opt_u64(loc.tau),
        opt_u64(loc.omega),
        opt_u64(loc.t),
        note,
    )
}

fn check_json(c: &CheckReport) -> String {
    format!(
        "{{\"name\": \"{}\", \"status\": \"{}\", \"worst_value\": {}, \"worst_location\": {}, \"tolerance\": {}, \"count_checked\": {}}}",
        c.name,
        c.status.as_str(),
        fmt_f64(c.worst_value),
        location_json(&c.worst_location),
        fmt_f64(c.tolerance),
        c.count_checked,
    )
}

pub fn report_json(
    dict: &Dictionary,
    report: &Report,
    opts: &VerifyOpts,
    selected: &[CheckId],
    runtime_seconds: f64,
) -> String {
    let checks: Vec<String> = selected
        .iter()
        .map(|c| format!("\"{}\"", c.name()))
        .collect();
    let rows: Vec<String> = report.checks.iter().map(check_json).collect();
    format!(
        "{{\n\"config\": {{\"checks\": [{}], \"tol\": {}, \"sample_limit\": {}, \"seed\": {}}},\n\"dictionary_meta\": {},\n\"checks\": [\n{}\n],\n\"runtime_seconds\": {}\n}}\n",
        checks.join(", "),
        fmt_f64(opts.tol),
        opts.sample_limit,
        opts.seed,
        meta_json(dict),
        rows.join(",\n"),
        fmt_f64(runtime_seconds),
    )
}
