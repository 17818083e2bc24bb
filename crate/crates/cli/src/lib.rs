//! The commands behind the `golay3` binary, usable without spawning it.

pub mod tables;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use golay3::catalog::{canonical_shape, parse_records, shape_name, Catalog, CatalogStore};
use golay3::construct::{explain, triad_line, ExplainOptions, ExplanationReport, Seed};
use golay3::{Error, Result};
use serde_json::{json, Value};

/// Default limit on the product of extents a command may compute.
pub const DEFAULT_BUDGET: usize = 24;

fn check_budget(shape: &[usize], budget: usize) -> Result<()> {
    let product: usize = shape.iter().product();
    if product > budget {
        return Err(Error::BudgetExceeded { shape: shape.to_vec(), product, budget });
    }
    Ok(())
}

/// Obtain the catalog for `shape`, write it to `out` if given, and return
/// it for the summary line.
pub fn search(store: &CatalogStore, shape: &[usize], budget: usize, out: Option<&Path>) -> Result<Arc<Catalog>> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidShape(shape.to_vec()));
    }
    check_budget(shape, budget)?;
    let catalog = store.get(&canonical_shape(shape))?;
    if let Some(path) = out {
        fs::write(path, catalog.to_jsonl())?;
    }
    Ok(catalog)
}

/// Outcome of re-checking a catalog file.
#[derive(Clone, Debug, Default)]
pub struct Verification {
    pub records: usize,
    pub failures: Vec<String>,
    /// One summary line per shape, as `search` prints it.
    pub summaries: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-check every record of a catalog file from scratch. Parse errors are
/// returned as errors; failed checks are collected.
pub fn verify(text: &str) -> Result<Verification> {
    let records = parse_records(text)?;
    let lines: Vec<usize> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, _)| n + 1)
        .collect();
    let mut v = Verification { records: records.len(), ..Default::default() };
    let mut by_shape: BTreeMap<Vec<usize>, Vec<_>> = BTreeMap::new();
    for (i, rec) in records.iter().enumerate() {
        let name = match rec.triad() {
            Ok(t) => triad_line(&t),
            Err(_) => shape_name(&rec.shape),
        };
        for p in rec.problems() {
            v.failures.push(format!("line {}: {name}: {p}", lines[i]));
        }
        if i > 0 {
            let prev = &records[i - 1];
            if (&prev.shape, &prev.triad) >= (&rec.shape, &rec.triad) {
                v.failures.push(format!("line {}: {name}: records out of order or duplicated", lines[i]));
            }
        }
        if let Ok(class) = rec.to_class() {
            by_shape.entry(rec.shape.clone()).or_default().push(class);
        }
    }
    if v.failures.is_empty() {
        for (shape, classes) in by_shape {
            let catalog = Catalog::new(shape.clone(), classes);
            v.summaries.push(format!("{}: {}", shape_name(&shape), catalog.summary()));
        }
    }
    Ok(v)
}

/// Run the construction closure with an explicit budget.
pub fn run_explain(store: &CatalogStore, seeds: &[Seed], budget: usize, report_shapes: Vec<Vec<usize>>) -> Result<ExplanationReport> {
    let options = ExplainOptions { budget, report_shapes, ..Default::default() };
    explain(seeds, store, &options)
}

/// The report as JSON: per-shape counts, unexplained representatives as
/// plain-digit lines, explained classes with derivations, and the arrows.
pub fn explain_json(report: &ExplanationReport) -> Value {
    let shapes: Vec<Value> = report
        .shapes
        .values()
        .map(|r| {
            let hist: BTreeMap<String, usize> = r.unexplained_histogram().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            json!({
                "shape": shape_name(&r.shape),
                "total": r.total,
                "explained": r.explained.len(),
                "unexplained": r.unexplained.len(),
                "status": r.status(),
                "summary": r.summary(),
                "unexplained_sizes": hist,
                "unexplained_representatives": r.unexplained.iter().map(|c| triad_line(&c.representative)).collect::<Vec<_>>(),
                "explained_classes": r.explained.iter().map(|e| json!({
                    "representative": triad_line(&e.class.representative),
                    "orbit_size": e.class.orbit_size,
                    "derivation": e.derivation,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let arrows: Vec<Value> = report
        .arrows
        .iter()
        .map(|((from, to, rule), n)| json!({ "from": shape_name(from), "to": shape_name(to), "rule": rule, "classes": n }))
        .collect();
    json!({ "shapes": shapes, "arrows": arrows })
}

/// Unexplained representatives, one plain-digit line each, grouped by shape.
pub fn appendix_lines(report: &ExplanationReport) -> String {
    let mut out = String::new();
    for r in report.shapes.values() {
        if r.unexplained.is_empty() {
            continue;
        }
        out.push_str(&format!("# {}: {} unexplained\n", shape_name(&r.shape), r.unexplained.len()));
        for c in &r.unexplained {
            out.push_str(&triad_line(&c.representative));
            out.push('\n');
        }
    }
    out
}
