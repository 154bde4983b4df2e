//! Suites: a TOML file listing commands, run in parallel and reported in
//! file order.
//!
//! ```toml
//! [[run]]
//! args = ["verify", "thm1", "--variant", "a", "--n", "3", "--order", "30"]
//! ```

use std::path::Path;

use clap::Parser;
use rayon::prelude::*;
use serde::Deserialize;

use crate::{render, report_failure, run_one, Cli, Global, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    #[serde(default)]
    run: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    args: Vec<String>,
}

/// Flags given to `suite` itself are passed on to every entry.
fn inherited(global: &Global) -> Vec<String> {
    let mut out = Vec::new();
    if global.json {
        out.push("--json".to_string());
    }
    if global.timing {
        out.push("--timing".to_string());
    }
    if let Some(b) = global.budget {
        out.extend(["--budget".to_string(), b.to_string()]);
    }
    out
}

pub fn run(path: &Path, global: &Global) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    };
    let file: SuiteFile = match toml::from_str(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    };
    let mut clis = Vec::new();
    for entry in &file.run {
        let argv = std::iter::once("qjet".to_string()).chain(entry.args.iter().cloned()).chain(inherited(global));
        match Cli::try_parse_from(argv) {
            Ok(cli) => clis.push(cli),
            Err(e) => {
                eprintln!("error: suite entry {:?}: {e}", entry.args);
                return 2;
            }
        }
    }
    let outcomes: Vec<Outcome> = clis.par_iter().map(run_one).collect();
    let mut code = 0;
    let mut reports = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => {
                code = code.max(u8::from(r.verdict.failed()));
                reports.push(r);
            }
            Err(f) => code = code.max(report_failure(&f)),
        }
    }
    if global.json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    } else {
        let texts: Vec<String> = reports.iter().map(|r| render(r, false)).collect();
        print!("{}", texts.join("\n"));
    }
    code
}
