//! Output formats.

use serde::Serialize;
use serde_json::json;

use crate::dot::emit_dot;
use crate::run::{ResultRecord, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
    Dot,
}

#[derive(Serialize)]
struct Report<'a> {
    variety: &'a str,
    results: &'a [ResultRecord],
}

pub fn render(format: Format, variety: &str, records: &[ResultRecord]) -> String {
    match format {
        Format::Json => render_json(variety, records),
        Format::Text => render_text(variety, records),
        Format::Dot => render_dot(records),
    }
}

pub fn render_json(variety: &str, records: &[ResultRecord]) -> String {
    let mut s = serde_json::to_string_pretty(&Report { variety, results: records }).expect("records serialize");
    s.push('\n');
    s
}

pub fn render_text(variety: &str, records: &[ResultRecord]) -> String {
    let mut out = format!("variety {variety}\n");
    for r in records {
        let body = match r.status {
            Status::Ok => r.summary.clone(),
            Status::Error => format!("error: {}", r.error.as_deref().unwrap_or_default()),
        };
        out.push_str(&format!("{} [{}] {}", r.id, r.query, body));
        if r.bound_relative {
            out.push_str(" (bound-relative)");
        }
        if let Some(ms) = r.timing_ms {
            out.push_str(&format!(" [{ms:.1} ms]"));
        }
        out.push('\n');
    }
    out
}

/// One digraph per record that has a diagram; others become comments.
pub fn render_dot(records: &[ResultRecord]) -> String {
    let mut out = String::new();
    for r in records {
        match (&r.diagram, r.status) {
            (Some(d), _) => out.push_str(&emit_dot(d)),
            (None, Status::Error) => {
                let msg = json!(r.error.as_deref().unwrap_or_default());
                out.push_str(&format!("// {} [{}] error: {msg}\n", r.id, r.query));
            }
            (None, Status::Ok) => out.push_str(&format!("// {} [{}] {}\n", r.id, r.query, r.summary)),
        }
    }
    out
}
