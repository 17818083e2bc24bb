//! Count tables for sequences, arrays and unexplained classes.

use std::collections::{BTreeMap, BTreeSet};

use golay3::catalog::{array_table_shapes, sequence_table_shapes, shape_name, CatalogStore};
use golay3::construct::{ExplanationReport, ShapeReport};
use golay3::Result;
use serde_json::{json, Value};

/// A header row and string cells; empty cells stand for zero class counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "header": self.header, "rows": self.rows })
    }

    /// The row whose first cell is `key`.
    pub fn row(&self, key: &str) -> Option<&[String]> {
        self.rows.iter().find(|r| r[0] == key).map(Vec::as_slice)
    }
}

const SEQUENCE_SIZES: [usize; 5] = [1, 8, 16, 24, 48];
const ARRAY_SIZES: [usize; 7] = [24, 48, 72, 96, 144, 288, 576];
const UNEXPLAINED_SIZES: [usize; 4] = [1, 24, 48, 288];

/// The fixed size columns plus any other size that occurs, ascending.
fn size_columns<'a>(fixed: &[usize], seen: impl IntoIterator<Item = &'a BTreeMap<usize, usize>>) -> Vec<usize> {
    let mut sizes: BTreeSet<usize> = fixed.iter().copied().collect();
    for h in seen {
        sizes.extend(h.keys().copied());
    }
    sizes.into_iter().collect()
}

fn size_cells(sizes: &[usize], hist: &BTreeMap<usize, usize>) -> Vec<String> {
    sizes.iter().map(|s| hist.get(s).map(|n| n.to_string()).unwrap_or_default()).collect()
}

fn count_table(first: &str, noun: &str, fixed: &[usize], shapes: &[Vec<usize>], store: &CatalogStore) -> Result<Table> {
    let catalogs = shapes.iter().map(|s| store.get(s)).collect::<Result<Vec<_>>>()?;
    let hists: Vec<_> = catalogs.iter().map(|c| c.histogram()).collect();
    let sizes = size_columns(fixed, &hists);
    let mut header = vec![first.to_string()];
    header.extend(sizes.iter().map(|s| format!("size {s}")));
    header.push("Total".into());
    header.push(format!("# normalised {noun} triads"));
    header.push(format!("# Golay {noun}s"));
    let rows = catalogs
        .iter()
        .zip(&hists)
        .map(|(c, h)| {
            let mut row = vec![shape_name(c.shape())];
            row.extend(size_cells(&sizes, h));
            row.push(c.len().to_string());
            row.push(c.normalised_count().to_string());
            row.push(c.golay_count().to_string());
            row
        })
        .collect();
    Ok(Table { header, rows })
}

/// Class counts for every length `2..=max`.
pub fn sequence_counts(store: &CatalogStore, max: usize) -> Result<Table> {
    count_table("Sequence length", "sequence", &SEQUENCE_SIZES, &sequence_table_shapes(max), store)
}

/// Class counts for the listed array shapes with product at most `max`.
pub fn array_counts(store: &CatalogStore, max: usize) -> Result<Table> {
    count_table("Array size", "array", &ARRAY_SIZES, &array_table_shapes(store, max)?, store)
}

/// Shapes a table of unexplained classes should cover.
pub fn unexplained_shapes(store: &CatalogStore, max: usize) -> Result<Vec<Vec<usize>>> {
    let mut shapes = sequence_table_shapes(max);
    shapes.extend(array_table_shapes(store, max)?);
    Ok(shapes)
}

/// Seed lengths first, then lengths with nothing explained, then the other
/// lengths, then arrays; by size within each group.
fn group(r: &ShapeReport) -> usize {
    if r.shape.len() > 1 {
        return 3;
    }
    match r.status().as_str() {
        "trivial seed" | "seeds" => 0,
        "none" => 1,
        _ => 2,
    }
}

/// Unexplained classes per shape, from an explanation run.
pub fn unexplained_counts(report: &ExplanationReport, max: usize) -> Table {
    let mut reports: Vec<&ShapeReport> = report
        .shapes
        .values()
        .filter(|r| r.total > 0 && r.shape != [1] && r.shape.iter().product::<usize>() <= max)
        .collect();
    reports.sort_by_key(|r| (group(r), r.shape.iter().product::<usize>(), r.shape.len(), r.shape.clone()));
    let hists: Vec<_> = reports.iter().map(|r| r.unexplained_histogram()).collect();
    let sizes = size_columns(&UNEXPLAINED_SIZES, &hists);
    let mut header = vec!["Sequence or array size".to_string(), "Total # equivalence classes".to_string()];
    header.extend(sizes.iter().map(|s| format!("size {s}")));
    header.push("Total".into());
    header.push("none/some/all explained, or seeds".into());
    let rows = reports
        .iter()
        .zip(&hists)
        .map(|(r, h)| {
            let mut row = vec![shape_name(&r.shape), r.total.to_string()];
            row.extend(size_cells(&sizes, h));
            row.push(r.unexplained.len().to_string());
            row.push(r.status());
            row
        })
        .collect();
    Table { header, rows }
}
