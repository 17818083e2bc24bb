//! Per-shape catalogs of triad classes: computing them, caching them on
//! disk and the JSON-lines record format.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arrays::{derive_array_classes, routes, sorted_shape, Route};
use crate::equivalence::{count_golay_members, size_histogram, OrbitEngine, Provenance, TriadClass};
use crate::error::{Error, Result};
use crate::search::{search_array_triads, search_sequence_triads, SearchOptions};
use crate::z3core::{is_golay_triad, Triad};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "GOLAY3_CACHE_DIR";

/// `2x3x3` style name of a shape.
pub fn shape_name(shape: &[usize]) -> String {
    shape.iter().map(usize::to_string).collect::<Vec<_>>().join("x")
}

/// Parse `SxSx…`. Extents must be positive.
pub fn parse_shape(text: &str) -> Result<Vec<usize>> {
    let shape: Vec<usize> = text
        .split('x')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse { line: 0, message: format!("bad shape {text:?}; expected SxSx…") })?;
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidShape(shape));
    }
    Ok(shape)
}

/// Sorted extents with unit dimensions dropped (`[1]` for a single entry).
pub fn canonical_shape(shape: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = shape.iter().copied().filter(|&s| s != 1).collect();
    out.sort_unstable();
    if out.is_empty() {
        out.push(1);
    }
    out
}

/// One class as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub shape: Vec<usize>,
    pub triad: [Vec<u8>; 3],
    pub orbit_size: usize,
    pub provenance: String,
    pub derivation: Option<Vec<String>>,
}

impl CatalogRecord {
    pub fn from_class(class: &TriadClass, derivation: Option<Vec<String>>) -> Self {
        let t = &class.representative;
        CatalogRecord {
            shape: t.shape().to_vec(),
            triad: t.members().clone().map(|m| m.digits().to_vec()),
            orbit_size: class.orbit_size,
            provenance: class.provenance.to_string(),
            derivation,
        }
    }

    pub fn triad(&self) -> Result<Triad> {
        let [a, b, c] = &self.triad;
        Triad::from_digits(&self.shape, [a, b, c])
    }

    pub fn to_class(&self) -> Result<TriadClass> {
        Ok(TriadClass { representative: self.triad()?, orbit_size: self.orbit_size, provenance: self.provenance.parse()? })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialise")
    }

    /// Problems found when re-checking this record from scratch.
    pub fn problems(&self) -> Vec<String> {
        let t = match self.triad() {
            Ok(t) => t,
            Err(e) => return vec![e.to_string()],
        };
        let mut out = Vec::new();
        if !is_golay_triad(&t) {
            out.push("not a Golay triad".into());
        }
        if !t.is_normalised() {
            out.push("not normalised".into());
        }
        if self.shape != canonical_shape(&self.shape) {
            out.push(format!("shape {} is not in canonical order", shape_name(&self.shape)));
            return out;
        }
        let engine = OrbitEngine::new(&self.shape);
        match engine.representative(&t) {
            Ok(rep) if rep != t => out.push(format!("not the canonical representative (that is {rep})")),
            Err(e) => out.push(e.to_string()),
            _ => {}
        }
        match engine.orbit(&t) {
            Ok(orbit) if t.is_normalised() && orbit.len() != self.orbit_size => {
                out.push(format!("orbit size is {}, record says {}", orbit.len(), self.orbit_size))
            }
            _ => {}
        }
        if self.provenance.parse::<Provenance>().is_err() {
            out.push(format!("unknown provenance {:?}", self.provenance));
        }
        out
    }
}

/// Parse JSON lines; blank lines are skipped.
pub fn parse_records(text: &str) -> Result<Vec<CatalogRecord>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: CatalogRecord =
            serde_json::from_str(line).map_err(|e| Error::Parse { line: n + 1, message: e.to_string() })?;
        if rec.triad.iter().any(|m| m.len() != rec.shape.iter().product::<usize>()) {
            return Err(Error::Parse { line: n + 1, message: "member length does not match shape".into() });
        }
        if rec.triad.iter().flatten().any(|&d| d > 2) {
            return Err(Error::Parse { line: n + 1, message: "digit outside 0..=2".into() });
        }
        out.push(rec);
    }
    Ok(out)
}

/// Every class of one shape.
#[derive(Debug)]
pub struct Catalog {
    shape: Vec<usize>,
    classes: Vec<TriadClass>,
    expanded: OnceLock<Vec<Triad>>,
}

impl Clone for Catalog {
    fn clone(&self) -> Self {
        Catalog::new(self.shape.clone(), self.classes.clone())
    }
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.classes == other.classes
    }
}

impl Catalog {
    /// Classes are sorted by representative.
    pub fn new(shape: Vec<usize>, mut classes: Vec<TriadClass>) -> Self {
        classes.sort();
        Catalog { shape, classes, expanded: OnceLock::new() }
    }

    /// Classify arbitrary (possibly unnormalised, possibly repeated) triads
    /// of the canonical shape `shape`.
    pub fn classify<I>(shape: &[usize], triads: I, provenance: Provenance) -> Result<Self>
    where
        I: IntoIterator<Item = Triad>,
    {
        let engine = OrbitEngine::new(shape);
        let classes = engine.classify_with_orbits(triads, &provenance)?.into_iter().map(|(c, _)| c).collect();
        Ok(Catalog::new(shape.to_vec(), classes))
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn classes(&self) -> &[TriadClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        size_histogram(&self.classes)
    }

    /// Normalised triads, counted as the sum of orbit sizes.
    pub fn normalised_count(&self) -> usize {
        self.classes.iter().map(|c| c.orbit_size).sum()
    }

    /// Golay sequences (rank 1) or arrays: distinct members over the
    /// orbits of the representatives, times the three constant offsets.
    pub fn golay_count(&self) -> usize {
        let engine = OrbitEngine::new(&self.shape);
        let orbits: Vec<Vec<Triad>> =
            self.classes.iter().map(|c| engine.orbit(&c.representative).expect("one shape per catalog")).collect();
        count_golay_members(orbits.iter().flatten())
    }

    /// Every normalised triad of every class, transposes included.
    pub fn expanded(&self) -> &[Triad] {
        self.expanded.get_or_init(|| {
            OrbitEngine::new(&self.shape)
                .expand(self.classes.iter().map(|c| &c.representative))
                .expect("one shape per catalog")
        })
    }

    pub fn summary(&self) -> Summary {
        Summary {
            rank: self.shape.len(),
            classes: self.len(),
            histogram: self.histogram(),
            normalised: self.normalised_count(),
            golay: self.golay_count(),
        }
    }

    pub fn records(&self) -> Vec<CatalogRecord> {
        self.classes.iter().map(|c| CatalogRecord::from_class(c, None)).collect()
    }

    pub fn to_jsonl(&self) -> String {
        self.records().iter().map(|r| r.to_json() + "\n").collect()
    }

    /// Read a catalog written by `to_jsonl`. An empty file needs `shape`.
    pub fn from_jsonl(text: &str, shape: Option<&[usize]>) -> Result<Self> {
        let records = parse_records(text)?;
        let shape = match (shape, records.first()) {
            (Some(s), _) => s.to_vec(),
            (None, Some(r)) => r.shape.clone(),
            (None, None) => return Err(Error::Parse { line: 0, message: "empty catalog of unknown shape".into() }),
        };
        let mut classes = Vec::with_capacity(records.len());
        for (n, r) in records.iter().enumerate() {
            if r.shape != shape {
                return Err(Error::Parse { line: n + 1, message: format!("shape {} in a {} catalog", shape_name(&r.shape), shape_name(&shape)) });
            }
            classes.push(r.to_class()?);
        }
        Ok(Catalog::new(shape, classes))
    }
}

/// The counts printed after a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub rank: usize,
    pub classes: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub normalised: usize,
    pub golay: usize,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.classes == 0 {
            return f.write_str("0 classes");
        }
        let hist: Vec<String> = self.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let noun = if self.rank == 1 { "sequences" } else { "arrays" };
        write!(f, "{} classes {{{}}}; {} normalised; {} {noun}", self.classes, hist.join(", "), self.normalised, self.golay)
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Pruning {
    #[default]
    On,
    Off,
    /// Run both and require identical classifications.
    Validate,
}

/// How array catalogs are obtained.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum ArrayMethod {
    /// Lift the catalog one rank lower.
    Derive,
    /// Search the array shape directly.
    Direct,
    /// Derive when the length-∏ sequence catalog is at hand or cheap
    /// (∏ ≤ 18), search directly otherwise.
    #[default]
    Auto,
}

#[derive(Clone, Debug, Default)]
pub struct StoreOptions {
    pub cache_dir: Option<PathBuf>,
    /// When false, a catalog that is neither in memory nor cached is an
    /// error instead of being computed.
    pub compute: bool,
    pub pruning: Pruning,
    pub array_method: ArrayMethod,
}

impl StoreOptions {
    /// Computing store, cache directory from the environment.
    pub fn from_env() -> Self {
        StoreOptions {
            cache_dir: std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
            compute: true,
            ..Default::default()
        }
    }
}

/// Catalogs by canonical shape, computed on demand and shared.
pub struct CatalogStore {
    options: StoreOptions,
    memory: Mutex<BTreeMap<Vec<usize>, Arc<Catalog>>>,
}

/// Products up to which `ArrayMethod::Auto` derives from sequences.
const CHEAP_SEQUENCE_SEARCH: usize = 18;

impl CatalogStore {
    pub fn new(options: StoreOptions) -> Self {
        CatalogStore { options, memory: Mutex::new(BTreeMap::new()) }
    }

    pub fn options(&self) -> &StoreOptions {
        &self.options
    }

    fn cache_path(&self, shape: &[usize]) -> Option<PathBuf> {
        self.options.cache_dir.as_ref().map(|d| d.join(format!("catalog-{}.jsonl", shape_name(shape))))
    }

    /// Put a catalog in memory (and the cache directory, if any).
    pub fn insert(&self, catalog: Catalog) -> Result<Arc<Catalog>> {
        let catalog = Arc::new(catalog);
        if let Some(path) = self.cache_path(catalog.shape()) {
            write_atomic(&path, &catalog.to_jsonl())?;
        }
        self.memory.lock().expect("store lock").insert(catalog.shape().to_vec(), catalog.clone());
        Ok(catalog)
    }

    /// The catalog if it is in memory or on disk; never computes.
    pub fn cached(&self, shape: &[usize]) -> Result<Option<Arc<Catalog>>> {
        let shape = canonical_shape(shape);
        if let Some(c) = self.memory.lock().expect("store lock").get(&shape) {
            return Ok(Some(c.clone()));
        }
        let Some(path) = self.cache_path(&shape) else {
            return Ok(None);
        };
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        let catalog = Arc::new(Catalog::from_jsonl(&text, Some(&shape))?);
        self.memory.lock().expect("store lock").insert(shape, catalog.clone());
        Ok(Some(catalog))
    }

    /// The complete catalog for `shape` (any order; unit extents ignored).
    pub fn get(&self, shape: &[usize]) -> Result<Arc<Catalog>> {
        let shape = canonical_shape(shape);
        if let Some(c) = self.cached(&shape)? {
            return Ok(c);
        }
        if !self.options.compute {
            return Err(Error::IncompleteCatalog(shape));
        }
        let catalog = self.compute(&shape)?;
        self.insert(catalog)
    }

    fn search_options(&self, pruning: bool) -> SearchOptions {
        SearchOptions { symmetry_pruning: pruning, shard_dir: self.options.cache_dir.clone() }
    }

    /// Run `find` with the configured pruning mode and classify.
    fn searched<F>(&self, shape: &[usize], find: F) -> Result<Catalog>
    where
        F: Fn(&SearchOptions) -> Result<std::collections::BTreeSet<Triad>>,
    {
        let run = |pruning: bool| -> Result<Catalog> {
            Catalog::classify(shape, find(&self.search_options(pruning))?, Provenance::Searched)
        };
        match self.options.pruning {
            Pruning::On => run(true),
            Pruning::Off => run(false),
            Pruning::Validate => {
                let (on, off) = (run(true)?, run(false)?);
                if on != off {
                    return Err(Error::Inconsistent(format!(
                        "pruned and unpruned searches of {} classify differently ({} vs {} classes)",
                        shape_name(shape),
                        on.len(),
                        off.len()
                    )));
                }
                Ok(on)
            }
        }
    }

    fn compute(&self, shape: &[usize]) -> Result<Catalog> {
        if shape == [1] {
            let t = Triad::sequences(&[0], &[0], &[0])?;
            return Catalog::classify(shape, [t], Provenance::Searched);
        }
        if shape.len() == 1 {
            return self.searched(shape, |o| search_sequence_triads(shape[0], o));
        }
        let product: usize = shape.iter().product();
        let derive = match self.options.array_method {
            ArrayMethod::Derive => true,
            ArrayMethod::Direct => false,
            ArrayMethod::Auto => product <= CHEAP_SEQUENCE_SEARCH || self.cached(&[product])?.is_some(),
        };
        if derive {
            self.derive(shape)
        } else {
            self.searched(shape, |o| search_array_triads(shape, o))
        }
    }

    /// Lift along the preferred route: the one whose parent shape is least.
    fn derive(&self, shape: &[usize]) -> Result<Catalog> {
        let route = preferred_route(shape)?;
        let parent = self.get(&route.parent)?;
        let classes = derive_array_classes(shape, &route, parent.expanded())?;
        Ok(Catalog::new(shape.to_vec(), classes.into_iter().map(|(c, _)| c).collect()))
    }
}

/// The route with the lexicographically least parent shape.
pub fn preferred_route(shape: &[usize]) -> Result<Route> {
    let (sorted, _) = sorted_shape(shape);
    routes(&sorted)
        .into_iter()
        .min_by(|a, b| (&a.parent, a.dim, a.factor).cmp(&(&b.parent, b.dim, b.factor)))
        .ok_or_else(|| Error::Precondition(format!("shape {} has no projection route", shape_name(shape))))
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// Shapes of the sequence-count table: lengths `2..=max`.
pub fn sequence_table_shapes(max: usize) -> Vec<Vec<usize>> {
    (2..=max).map(|s| vec![s]).collect()
}

/// Sorted array shapes of rank at least 2 with product at most `max`,
/// excluding those that are empty for a structural reason: rank 2 with
/// product ≡ 4 (mod 6), or higher rank with some empty or excluded
/// projection. Ordered by product, then rank, then extents.
pub fn array_table_shapes(store: &CatalogStore, max: usize) -> Result<Vec<Vec<usize>>> {
    let mut shapes = Vec::new();
    for n in 4..=max {
        for rank in 2..=max.ilog2() as usize {
            for shape in factorisations(n, rank, 2) {
                if listed(store, &shape)? {
                    shapes.push(shape);
                }
            }
        }
    }
    Ok(shapes)
}

fn listed(store: &CatalogStore, shape: &[usize]) -> Result<bool> {
    let n: usize = shape.iter().product();
    if n % 6 == 4 {
        return Ok(false);
    }
    if shape.len() == 2 {
        return Ok(true);
    }
    for route in routes(shape) {
        if !listed(store, &route.parent)? || store.get(&route.parent)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nondecreasing factorisations of `n` into `rank` extents, each at least `min`.
fn factorisations(n: usize, rank: usize, min: usize) -> Vec<Vec<usize>> {
    if rank == 1 {
        return if n >= min { vec![vec![n]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for f in min..=n {
        if f.pow(rank as u32) > n {
            break;
        }
        if n % f == 0 {
            for mut rest in factorisations(n / f, rank - 1, f) {
                rest.insert(0, f);
                out.push(rest);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_parse_and_print() {
        assert_eq!(parse_shape("2x3x3").unwrap(), vec![2, 3, 3]);
        assert_eq!(shape_name(&[2, 9]), "2x9");
        assert!(parse_shape("2x0").is_err());
        assert!(parse_shape("2*3").is_err());
        assert_eq!(canonical_shape(&[3, 1]), vec![3]);
        assert_eq!(canonical_shape(&[9, 2]), vec![2, 9]);
        assert_eq!(canonical_shape(&[1, 1]), vec![1]);
    }

    #[test]
    fn factorisations_are_sorted() {
        assert_eq!(factorisations(18, 2, 2), vec![vec![2, 9], vec![3, 6]]);
        assert_eq!(factorisations(18, 3, 2), vec![vec![2, 3, 3]]);
        assert_eq!(factorisations(7, 2, 2), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn summary_lines() {
        let store = CatalogStore::new(StoreOptions { compute: true, ..Default::default() });
        assert_eq!(store.get(&[5]).unwrap().summary().to_string(), "3 classes {24:3}; 72 normalised; 108 sequences");
        assert_eq!(store.get(&[4]).unwrap().summary().to_string(), "0 classes");
        assert_eq!(store.get(&[3, 2]).unwrap().summary().to_string(), "2 classes {24:1, 48:1}; 72 normalised; 162 arrays");
    }

    #[test]
    fn records_round_trip() {
        let store = CatalogStore::new(StoreOptions { compute: true, ..Default::default() });
        let cat = store.get(&[6]).unwrap();
        let text = cat.to_jsonl();
        let back = Catalog::from_jsonl(&text, None).unwrap();
        assert_eq!(back.to_jsonl(), text);
        assert!(parse_records(&text).unwrap().iter().all(|r| r.problems().is_empty()));
    }

    #[test]
    fn flipped_digit_is_reported() {
        let store = CatalogStore::new(StoreOptions { compute: true, ..Default::default() });
        let mut rec = store.get(&[5]).unwrap().records()[0].clone();
        rec.triad[1][2] = (rec.triad[1][2] + 1) % 3;
        assert!(!rec.problems().is_empty());
    }

    #[test]
    fn missing_catalog_without_compute() {
        let store = CatalogStore::new(StoreOptions::default());
        assert!(matches!(store.get(&[5]), Err(Error::IncompleteCatalog(_))));
    }

    #[test]
    fn preferred_routes() {
        assert_eq!(preferred_route(&[2, 3, 3]).unwrap().parent, vec![2, 9]);
        assert_eq!(preferred_route(&[3, 6]).unwrap().parent, vec![18]);
    }
}
