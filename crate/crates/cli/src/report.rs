//! Report envelope and output formatting. Every report embeds the crate
//! version and a timestamp; seeds are included whenever a command is
//! seeded so that reruns are reproducible.

use clap::ValueEnum;
use galg::linalg::Matrix;
use serde_json::{json, Value};
use std::io::Write;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn envelope(kind: &str, body: Value, seed: Option<u64>) -> Value {
    let ts = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut v = json!({
        "kind": kind,
        "version": env!("CARGO_PKG_VERSION"),
        "generated_at": ts,
        "result": body,
    });
    if let Some(s) = seed {
        v["seed"] = json!(s);
    }
    v
}

pub fn matrix_entry(m: &Matrix) -> Value {
    galg::io::matrix_json(m)
}

pub fn emit(v: &Value, format: Format) {
    // tolerate a closed pipe (e.g. piping into head)
    let mut out = std::io::stdout().lock();
    let res = match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json")),
        Format::Text => print_text(&mut out, v, 0),
    };
    if let Err(e) = res {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            panic!("stdout: {e}");
        }
    }
}

fn print_text(out: &mut impl Write, v: &Value, indent: usize) -> std::io::Result<()> {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        writeln!(out, "{pad}{k}:")?;
                        print_text(out, val, indent + 1)?;
                    }
                    _ => writeln!(out, "{pad}{k}: {val}")?,
                }
            }
        }
        Value::Array(items) => {
            if items
                .iter()
                .all(|i| !matches!(i, Value::Object(_) | Value::Array(_)))
            {
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                writeln!(out, "{pad}[{}]", parts.join(", "))?;
            } else {
                for item in items {
                    print_text(out, item, indent + 1)?;
                }
            }
        }
        _ => writeln!(out, "{pad}{v}")?,
    }
    Ok(())
}
