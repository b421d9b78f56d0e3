//! `oklab`: reads a scene file, runs one subcommand and prints a JSON report.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! lists witnesses), 2 for configuration or input errors.

mod cli;
mod commands;
mod dispatch;
mod scene;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cli::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("input rejected: {0}")]
    Input(String),
}

const THREADS_VAR: &str = "OKLAB_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!("{THREADS_VAR}={raw:?} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn envelope(command: &str, hash: Option<&str>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert(
        "artifact".into(),
        json!({"name": "oklab", "version": env!("CARGO_PKG_VERSION")}),
    );
    m.insert("command".into(), command.into());
    m.insert(
        "config_hash".into(),
        hash.map_or(Value::Null, |h| format!("sha256:{h}").into()),
    );
    m
}

fn emit(doc: serde_json::Map<String, Value>, pretty: bool) {
    let v = Value::Object(doc);
    let text = if pretty {
        serde_json::to_string_pretty(&v)
    } else {
        serde_json::to_string(&v)
    };
    let mut out = std::io::stdout().lock();
    // A closed reader (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(out, "{}", text.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let cmd = &args.command;
    let common = cmd.common();
    let mut hash = None;
    let outcome = (|| {
        configure_threads()?;
        let (bytes, h) = scene::read(&common.config)?;
        hash = Some(h);
        let sc = scene::parse(&bytes)?;
        let route = dispatch::route(cmd.name()).expect("every subcommand is routed");
        if sc.kind != route.kind {
            return Err(CliError::Config(format!(
                "{} reads {} scenes, got {}",
                cmd.name(),
                route.kind,
                sc.kind
            )));
        }
        let seed = common.seed.or(sc.seed).unwrap_or(0);
        commands::run(cmd, &sc.payload, seed).map(|o| (o, route, seed))
    })();
    let mut doc = envelope(cmd.name(), hash.as_deref());
    match outcome {
        Ok((o, route, seed)) => {
            let pass = o.witnesses.is_empty();
            doc.insert("kind".into(), route.kind.name().into());
            doc.insert(
                "operations".into(),
                route.ops.iter().map(|op| Value::from(*op)).collect(),
            );
            doc.insert("seed".into(), seed.into());
            doc.insert("result".into(), o.result);
            doc.insert("witnesses".into(), Value::Array(o.witnesses));
            doc.insert("status".into(), if pass { "pass" } else { "fail" }.into());
            emit(doc, common.pretty);
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("oklab: {e}");
            doc.insert("status".into(), "error".into());
            doc.insert("error".into(), e.to_string().into());
            emit(doc, common.pretty);
            ExitCode::from(2)
        }
    }
}
