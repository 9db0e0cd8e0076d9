//! Invariant suite over a corpus profile.

use std::path::Path;
use std::process::ExitCode;

use cycbase::control::verify_control;
use cycbase::corpus::{generate_corpus, CorpusEntry};
use cycbase::cycle_base::{cycle_base_with, CycleBaseOptions, DEFAULT_ENUM_BOUND};
use cycbase::io::{build_certificate, GoldenCorpus, GoldenEntry};
use cycbase::oracle::{oracle_cyc, ORACLE_VERSION};
use cycbase::primitive::{classify_primitive, PrimitiveClass, Sporadic};
use cycbase::Result;
use rayon::prelude::*;

fn check_entry(e: &CorpusEntry, golden: Option<&GoldenEntry>) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    if !e.enumerable {
        // parse and classify only
        let cls = classify_primitive(&e.group)?;
        if e.name == "M23" && cls != (PrimitiveClass::Sporadic { group: Sporadic::M23 }) {
            failures.push(format!("classified as {cls:?}"));
        }
        return Ok(failures);
    }
    let run = cycle_base_with(&e.group, &CycleBaseOptions::default())?;
    let cert = build_certificate(&e.group, None, 0, &run.control, &run.result, Some(DEFAULT_ENUM_BOUND))?;
    failures.extend(cert.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()));
    let classes = oracle_cyc(&e.group, DEFAULT_ENUM_BOUND)?;
    let cycles: Vec<_> = classes.iter().flat_map(|c| c.subgroups.iter().cloned()).collect();
    let report = verify_control(&e.group, &run.control.m, &cycles, DEFAULT_ENUM_BOUND)?;
    if !report.passed() {
        failures.push(format!("control: {} of {} conjugate into M", report.conjugated_in, report.checked));
    }
    if let Some(size) = e.expected.base_size {
        if size != classes.len() {
            failures.push(format!("expected {size} classes, oracle found {}", classes.len()));
        }
    }
    if let Some(g) = golden {
        let reps: Vec<_> = classes.iter().map(|c| c.representative.clone()).collect();
        if g.classes.as_ref() != Some(&reps) {
            failures.push("oracle differs from golden file".into());
        }
    }
    Ok(failures)
}

pub fn run(profile: &str, golden: Option<&Path>, threads: usize) -> std::result::Result<ExitCode, ExitCode> {
    let corpus = generate_corpus(profile).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(3)
    })?;
    let golden = match golden {
        None => None,
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                eprintln!("error: {}: {e}", p.display());
                ExitCode::from(3)
            })?;
            let g: GoldenCorpus = serde_json::from_str(&text).map_err(|e| {
                eprintln!("error: {}: {e}", p.display());
                ExitCode::from(3)
            })?;
            if g.oracle_version != ORACLE_VERSION || g.profile != profile {
                eprintln!("error: golden file is for profile {} oracle v{}", g.profile, g.oracle_version);
                return Err(ExitCode::from(3));
            }
            Some(g)
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool starts");
    let outcomes: Vec<(String, Result<Vec<String>>)> = pool.install(|| {
        corpus
            .entries
            .par_iter()
            .map(|e| {
                let g = golden
                    .as_ref()
                    .and_then(|g| g.entries.iter().find(|x| x.name == e.name));
                (e.name.clone(), check_entry(e, g))
            })
            .collect()
    });
    let mut failed = 0;
    for (name, outcome) in &outcomes {
        match outcome {
            Ok(f) if f.is_empty() => println!("ok    {name}"),
            Ok(f) => {
                failed += 1;
                println!("FAIL  {name}: {}", f.join("; "));
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    println!("{} entries, {} failed", outcomes.len(), failed);
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
