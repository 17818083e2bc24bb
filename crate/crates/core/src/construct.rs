//! Stacking, the dimension-increasing and cross-correlation constructions,
//! and the closure that decides which classes they explain.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::arrays::{project_triad, sorted_shape, ProjectionSpec};
use crate::catalog::{canonical_shape, parse_shape, shape_name, CatalogStore};
use crate::equivalence::{normalise, OrbitEngine, TriadClass};
use crate::error::{Error, Result};
use crate::z3core::{aperiodic_autocorrelation, cross_correlation, is_golay_sequences, is_golay_triad, CorrelationTable, Triad, Z3Array};

/// A triad whose member order matters.
pub type Ordered = [Z3Array; 3];

/// The members of `t` in every order.
pub fn orderings(t: &Triad) -> Vec<Ordered> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let m = t.members();
    PERMS.iter().map(|p| p.map(|i| m[i].clone())).collect()
}

/// Arrays of one shape stacked along a new leading dimension.
pub fn stack(parts: &[&Z3Array]) -> Result<Z3Array> {
    let first = parts.first().ok_or_else(|| Error::Precondition("nothing to stack".into()))?;
    let mut digits = Vec::with_capacity(parts.len() * first.len());
    for p in parts {
        if p.shape() != first.shape() {
            return Err(Error::ShapeMismatch(first.shape().to_vec(), p.shape().to_vec()));
        }
        digits.extend_from_slice(p.digits());
    }
    let mut shape = vec![parts.len()];
    shape.extend_from_slice(first.shape());
    Z3Array::new(shape, digits)
}

/// Whether `D = [A; B; C]` satisfies, at every shift `u` of the parts,
/// `C_D(0,u) = (C_A + C_B + C_C)(u)`, `C_D(1,u) = (C_{A,B} + C_{B,C})(u)`
/// and `C_D(2,u) = C_{A,C}(u)`.
pub fn stacking_identities_hold(a: &Z3Array, b: &Z3Array, c: &Z3Array) -> Result<bool> {
    let d = aperiodic_autocorrelation(&stack(&[a, b, c])?);
    let auto = &(&aperiodic_autocorrelation(a) + &aperiodic_autocorrelation(b)) + &aperiodic_autocorrelation(c);
    let near = &cross_correlation(a, b)? + &cross_correlation(b, c)?;
    let far = cross_correlation(a, c)?;
    let at = |row: isize, u: &[isize]| {
        let mut v = vec![row];
        v.extend_from_slice(u);
        d.get(&v)
    };
    Ok(far.all_shifts().iter().all(|u| at(0, u) == auto.get(u) && at(1, u) == near.get(u) && at(2, u) == far.get(u)))
}

/// `{[A;B;C], [A;ωB;ω²C], [A;ω²B;ωC]}`, one dimension higher.
pub fn construct_tri(t: &Ordered) -> Result<Triad> {
    let [a, b, c] = t;
    let (b1, b2, c1, c2) = (b.add_constant(1), b.add_constant(2), c.add_constant(1), c.add_constant(2));
    Triad::new(stack(&[a, b, c])?, stack(&[a, &b1, &c2])?, stack(&[a, &b2, &c1])?)
}

fn cross_sum(x: &Ordered, y: &Ordered) -> Result<CorrelationTable> {
    let mut sum = cross_correlation(&x[0], &y[0])?;
    for k in 1..3 {
        sum = &sum + &cross_correlation(&x[k], &y[k])?;
    }
    Ok(sum)
}

/// `(C_{A1,A3} + C_{B1,B3} + C_{C1,C3})(u) = 0` for every shift `u`.
pub fn cross_sum_is_zero(t1: &Ordered, t3: &Ordered) -> Result<bool> {
    Ok(cross_sum(t1, t3)?.vanishes_everywhere())
}

fn golay_ordered(t: &Ordered) -> Result<bool> {
    Ok(is_golay_triad(&Triad::new(t[0].clone(), t[1].clone(), t[2].clone())?))
}

fn stacked(rows: &[&Ordered]) -> Result<Triad> {
    let member = |k: usize| stack(&rows.iter().map(|r| &r[k]).collect::<Vec<_>>());
    let out = Triad::new(member(0)?, member(1)?, member(2)?)?;
    if !is_golay_triad(&out) {
        return Err(Error::Inconsistent(format!("stacked triad {out} is not Golay")));
    }
    Ok(out)
}

/// `{[A1;A3], [B1;B3], [C1;C3]}` for Golay triads with vanishing cross sum.
pub fn construct_cross2(t1: &Ordered, t3: &Ordered) -> Result<Triad> {
    if !golay_ordered(t1)? || !golay_ordered(t3)? {
        return Err(Error::Precondition("cross-correlation construction needs two Golay triads".into()));
    }
    if !cross_sum_is_zero(t1, t3)? {
        return Err(Error::Precondition("cross sum of the two triads does not vanish".into()));
    }
    stacked(&[t1, t3])
}

/// `{[A1;A2;A3], [B1;B2;B3], [C1;C2;C3]}`; needs the adjacent cross sums
/// to cancel and the outer cross sum to vanish.
pub fn construct_cross3(t1: &Ordered, t2: &Ordered, t3: &Ordered) -> Result<Triad> {
    if !golay_ordered(t1)? || !golay_ordered(t2)? || !golay_ordered(t3)? {
        return Err(Error::Precondition("cross-correlation construction needs three Golay triads".into()));
    }
    if !(&cross_sum(t1, t2)? + &cross_sum(t2, t3)?).vanishes_everywhere() {
        return Err(Error::Precondition("adjacent cross sums do not cancel".into()));
    }
    if !cross_sum_is_zero(t1, t3)? {
        return Err(Error::Precondition("outer cross sum does not vanish".into()));
    }
    stacked(&[t1, t2, t3])
}

/// Reorder dimensions ascending and drop unit extents.
fn canonical_triad(t: &Triad) -> Result<Triad> {
    let (_, perm) = sorted_shape(t.shape());
    let shape = canonical_shape(t.shape());
    t.try_map(|m| m.permute_dims(&perm)?.reshape(shape.clone()))
}

/// Seeds: every class of a shape, or one named class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seed {
    All(Vec<usize>),
    Class(Triad),
}

impl Seed {
    pub fn shape(&self) -> Vec<usize> {
        match self {
            Seed::All(s) => canonical_shape(s),
            Seed::Class(t) => canonical_shape(t.shape()),
        }
    }
}

/// Lines of `SHAPE` or `SHAPE m1 m2 m3` (members as row-major digit
/// strings); `#` starts a comment.
pub fn parse_triad_lines(text: &str) -> Result<Vec<Seed>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: n + 1, message };
        let words: Vec<&str> = line.split_whitespace().collect();
        let shape = parse_shape(words[0]).map_err(|e| err(e.to_string()))?;
        match words.len() {
            1 => out.push(Seed::All(shape)),
            4 => {
                let digits: Vec<Vec<u8>> = words[1..]
                    .iter()
                    .map(|w| w.bytes().map(|b| b.wrapping_sub(b'0')).collect())
                    .collect();
                let t = Triad::from_digits(&shape, [&digits[0], &digits[1], &digits[2]]).map_err(|e| err(e.to_string()))?;
                out.push(Seed::Class(t));
            }
            _ => return Err(err("expected a shape optionally followed by three members".into())),
        }
    }
    Ok(out)
}

/// Plain-digit line for a triad, as read by `parse_triad_lines`.
pub fn triad_line(t: &Triad) -> String {
    let members: Vec<String> = t.members().iter().map(|m| m.digits().iter().map(|d| char::from(b'0' + d)).collect()).collect();
    format!("{} {}", shape_name(t.shape()), members.join(" "))
}

const DEFAULT_SEEDS: &str = include_str!("../data/seeds.txt");
const APPENDIX: &str = include_str!("../data/appendix.txt");

/// Lengths 1, 2, 5, 7 and 8 in full, one length-6 class and nine 2×9 classes.
pub fn default_seeds() -> Vec<Seed> {
    parse_triad_lines(DEFAULT_SEEDS).expect("bundled seeds parse")
}

/// Published representatives of the unexplained classes at lengths 6, 21,
/// 24 and shape 2×9.
pub fn published_unexplained() -> Vec<Triad> {
    parse_triad_lines(APPENDIX)
        .expect("bundled listing parses")
        .into_iter()
        .filter_map(|s| match s {
            Seed::Class(t) => Some(t),
            Seed::All(_) => None,
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ExplainOptions {
    /// Largest product of extents generated.
    pub budget: usize,
    pub max_rank: usize,
    /// Lengths whose triads feed the cross-correlation construction.
    pub cross_lengths: Vec<usize>,
    /// Shapes to report even if the closure never reaches them.
    pub report_shapes: Vec<Vec<usize>>,
}

impl Default for ExplainOptions {
    fn default() -> Self {
        ExplainOptions { budget: 24, max_rank: 3, cross_lengths: vec![7], report_shapes: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplainedClass {
    pub class: TriadClass,
    /// Seed first, then one step per construction.
    pub derivation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub shape: Vec<usize>,
    pub total: usize,
    pub explained: Vec<ExplainedClass>,
    pub unexplained: Vec<TriadClass>,
    /// Representatives of the seed classes of this shape.
    pub seeds: Vec<Triad>,
}

impl ShapeReport {
    /// "none", "some", "all", with " (*)" when an unexplained class is a
    /// seed; "seeds" when every class is an unexplained seed.
    pub fn status(&self) -> String {
        let seeded = self.unexplained.iter().any(|c| self.seeds.contains(&c.representative));
        if self.total > 0 && self.explained.is_empty() && self.unexplained.iter().all(|c| self.seeds.contains(&c.representative)) {
            return if self.total == 1 && self.shape.iter().product::<usize>() <= 2 { "trivial seed" } else { "seeds" }.into();
        }
        let base = match (self.explained.len(), self.unexplained.len()) {
            (_, 0) => "all",
            (0, _) => "none",
            _ => "some",
        };
        if seeded {
            format!("{base} (*)")
        } else {
            base.into()
        }
    }

    pub fn unexplained_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.unexplained {
            *h.entry(c.orbit_size).or_insert(0) += 1;
        }
        h
    }

    pub fn summary(&self) -> String {
        format!("{} explained, {} unexplained", self.explained.len(), self.unexplained.len())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplanationReport {
    pub shapes: BTreeMap<Vec<usize>, ShapeReport>,
    /// New classes per (source shape, target shape, rule).
    pub arrows: BTreeMap<(Vec<usize>, Vec<usize>, String), usize>,
}

impl ExplanationReport {
    /// The construction arrows as a DOT graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph explain {\n");
        for (shape, r) in &self.shapes {
            let colour = if r.seeds.is_empty() { "black" } else { "red" };
            let _ = writeln!(out, "  \"{}\" [color={colour}, label=\"{} ({})\"];", shape_name(shape), shape_name(shape), r.summary());
        }
        for ((from, to, rule), n) in &self.arrows {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{rule} {n}\"];", shape_name(from), shape_name(to));
        }
        out.push_str("}\n");
        out
    }
}

struct Known {
    engine: OrbitEngine,
    members: HashSet<Triad>,
    /// Representative → derivation; `None` for a seed nothing has produced.
    classes: BTreeMap<Triad, Option<Vec<String>>>,
    seeds: BTreeSet<Triad>,
}

struct Candidate {
    triad: Triad,
    rule: String,
    /// Extra inputs, recorded in the derivation only.
    with: Option<String>,
    from: (Vec<usize>, Triad),
}

/// Run the construction closure from `seeds` and compare with the catalogs.
pub fn explain(seeds: &[Seed], store: &CatalogStore, options: &ExplainOptions) -> Result<ExplanationReport> {
    let within = |shape: &[usize]| shape.iter().product::<usize>() <= options.budget && shape.len() <= options.max_rank;
    let mut known: BTreeMap<Vec<usize>, Known> = BTreeMap::new();
    let mut fresh: Vec<(Vec<usize>, Triad)> = Vec::new();
    let mut report = ExplanationReport::default();

    for seed in seeds {
        let shape = seed.shape();
        if !within(&shape) {
            continue;
        }
        let catalog = store.get(&shape)?;
        let reps: Vec<Triad> = match seed {
            Seed::All(_) => catalog.classes().iter().map(|c| c.representative.clone()).collect(),
            Seed::Class(t) => {
                let t = normalise(&canonical_triad(t)?);
                let rep = OrbitEngine::new(&shape).representative(&t)?;
                if !is_golay_triad(&t) || !catalog.classes().iter().any(|c| c.representative == rep) {
                    return Err(Error::UnknownSeed(triad_line(&t)));
                }
                vec![rep]
            }
        };
        for rep in reps {
            let entry = known.entry(shape.clone()).or_insert_with(|| new_known(&shape));
            if entry.seeds.insert(rep.clone()) {
                entry.members.extend(entry.engine.expand([&rep])?);
                entry.classes.insert(rep.clone(), None);
                fresh.push((shape.clone(), rep));
            }
        }
    }

    let mut cross_seen: BTreeMap<usize, usize> = BTreeMap::new();
    while !fresh.is_empty() {
        fresh.sort();
        let mut candidates: Vec<Candidate> = fresh
            .par_iter()
            .map(|(shape, rep)| successors(shape, rep, &known[shape].engine, options))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for &s in &options.cross_lengths {
            let size = known.get(&vec![s]).map_or(0, |k| k.classes.len());
            if size > 0 && cross_seen.get(&s) != Some(&size) {
                cross_seen.insert(s, size);
                candidates.extend(cross_candidates(s, &known, store, options)?);
            }
        }
        fresh.clear();
        for cand in candidates {
            let shape = cand.triad.shape().to_vec();
            if !within(&shape) {
                continue;
            }
            let parent = known[&cand.from.0].classes[&cand.from.1].clone();
            let mut chain = parent.unwrap_or_else(|| vec![format!("seed {}", triad_line(&cand.from.1))]);
            let with = cand.with.as_ref().map(|w| format!(" with {w}")).unwrap_or_default();
            chain.push(format!("{}{with} -> {}", cand.rule, shape_name(&shape)));
            let entry = known.entry(shape.clone()).or_insert_with(|| new_known(&shape));
            if entry.members.contains(&cand.triad) {
                // A seed that a construction reaches is explained, but its
                // successors are already queued.
                let rep = entry.engine.representative(&cand.triad)?;
                if let Some(slot @ None) = entry.classes.get_mut(&rep) {
                    *slot = Some(chain);
                    *report.arrows.entry((cand.from.0.clone(), shape, cand.rule)).or_insert(0) += 1;
                }
                continue;
            }
            let class = entry.engine.expand([&cand.triad])?;
            let rep = class[0].clone();
            entry.members.extend(class);
            entry.classes.insert(rep.clone(), Some(chain));
            *report.arrows.entry((cand.from.0.clone(), shape.clone(), cand.rule)).or_insert(0) += 1;
            fresh.push((shape, rep));
        }
    }

    let mut shapes: BTreeSet<Vec<usize>> = known.keys().cloned().collect();
    shapes.extend(options.report_shapes.iter().map(|s| canonical_shape(s)));
    for shape in shapes {
        let catalog = store.get(&shape)?;
        let empty = new_known(&shape);
        let k = known.get(&shape).unwrap_or(&empty);
        let in_catalog: BTreeSet<&Triad> = catalog.classes().iter().map(|c| &c.representative).collect();
        if let Some(stray) = k.classes.keys().find(|r| !in_catalog.contains(r)) {
            return Err(Error::Inconsistent(format!("constructed class {stray} is missing from the {} catalog", shape_name(&shape))));
        }
        let mut r = ShapeReport {
            shape: shape.clone(),
            total: catalog.len(),
            explained: Vec::new(),
            unexplained: Vec::new(),
            seeds: k.seeds.iter().cloned().collect(),
        };
        for class in catalog.classes() {
            match k.classes.get(&class.representative) {
                Some(Some(chain)) => r.explained.push(ExplainedClass { class: class.clone(), derivation: chain.clone() }),
                _ => r.unexplained.push(class.clone()),
            }
        }
        report.shapes.insert(shape, r);
    }
    Ok(report)
}

fn new_known(shape: &[usize]) -> Known {
    Known { engine: OrbitEngine::new(shape), members: HashSet::new(), classes: BTreeMap::new(), seeds: BTreeSet::new() }
}

/// Offsets `(e_A, e_B, e_C)` applied before a construction undoes
/// normalisation.
fn denormalised(t: &Ordered) -> impl Iterator<Item = Ordered> + '_ {
    (0..27u8).map(move |code| [t[0].add_constant(code / 9), t[1].add_constant(code / 3 % 3), t[2].add_constant(code % 3)])
}

/// Triads built from one class by the dimension-increasing construction
/// and by every projection.
fn successors(shape: &[usize], rep: &Triad, engine: &OrbitEngine, options: &ExplainOptions) -> Result<Vec<Candidate>> {
    let class = engine.expand([rep])?;
    let mut out: Vec<Candidate> = Vec::new();
    let mut emit = |t: Triad, rule: String| -> Result<()> {
        out.push(Candidate { triad: normalise(&canonical_triad(&t)?), rule, with: None, from: (shape.to_vec(), rep.clone()) });
        Ok(())
    };
    let product: usize = shape.iter().product();
    let grows = 3 * product <= options.budget && shape.len() < options.max_rank;
    let mut seen = HashSet::new();
    for t in &class {
        if grows {
            for ordered in orderings(t) {
                for d in denormalised(&ordered) {
                    let built = construct_tri(&d)?;
                    if seen.insert(normalise(&canonical_triad(&built)?)) {
                        emit(built, "tri".into())?;
                    }
                }
            }
        }
        let r = t.rank();
        if r >= 2 {
            for k in 0..r {
                for l in 0..r {
                    if k != l {
                        emit(project_triad(t, ProjectionSpec::new(k, l))?, format!("proj({k},{l})"))?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Rows of a `rows × s` member, as sequences.
fn rows_of(m: &Z3Array, rows: usize) -> Vec<Z3Array> {
    let s = m.len() / rows;
    m.digits().chunks(s).map(|r| Z3Array::sequence(r).expect("digits in range")).collect()
}

/// Every `2 × s` and `3 × s` triad whose rows are known length-`s` Golay
/// triads meeting the cross-sum conditions. Any ordered pair or triple of
/// length-`s` Golay triads that meets them stacks to a Golay triad of the
/// target shape, so scanning the complete target catalog covers exactly the
/// exhaustive search over all pairs and triples.
fn cross_candidates(s: usize, known: &BTreeMap<Vec<usize>, Known>, store: &CatalogStore, options: &ExplainOptions) -> Result<Vec<Candidate>> {
    let seq = &known[&vec![s]];
    let mut out = Vec::new();
    for rows in [2usize, 3] {
        if rows * s > options.budget || options.max_rank < 2 {
            continue;
        }
        let target = canonical_shape(&[rows, s]);
        if target[0] != rows {
            continue;
        }
        let catalog = store.get(&target)?;
        let found: Vec<Option<Candidate>> = catalog
            .expanded()
            .par_iter()
            .map(|d| -> Result<Option<Candidate>> {
                let split: Vec<Vec<Z3Array>> = d.members().iter().map(|m| rows_of(m, rows)).collect();
                let triads: Vec<Ordered> = (0..rows).map(|r| [split[0][r].clone(), split[1][r].clone(), split[2][r].clone()]).collect();
                let mut reps = Vec::new();
                for t in &triads {
                    if !is_golay_sequences([t[0].digits(), t[1].digits(), t[2].digits()]) {
                        return Ok(None);
                    }
                    let norm = normalise(&Triad::new(t[0].clone(), t[1].clone(), t[2].clone())?);
                    if !seq.members.contains(&norm) {
                        return Ok(None);
                    }
                    reps.push(seq.engine.representative(&norm)?);
                }
                let pre = if rows == 2 {
                    cross_sum_is_zero(&triads[0], &triads[1])?
                } else {
                    cross_sum_is_zero(&triads[0], &triads[2])?
                        && (&cross_sum(&triads[0], &triads[1])? + &cross_sum(&triads[1], &triads[2])?).vanishes_everywhere()
                };
                if !pre {
                    return Ok(None);
                }
                let built = if rows == 2 {
                    construct_cross2(&triads[0], &triads[1])?
                } else {
                    construct_cross3(&triads[0], &triads[1], &triads[2])?
                };
                if normalise(&built) != *d {
                    return Err(Error::Inconsistent(format!("cross-correlation stack of {d} rebuilt as {built}")));
                }
                let partners: Vec<String> = reps[1..].iter().map(triad_line).collect();
                Ok(Some(Candidate {
                    triad: d.clone(),
                    rule: format!("cross{rows}"),
                    with: Some(partners.join(" and ")),
                    from: (vec![s], reps[0].clone()),
                }))
            })
            .collect::<Result<_>>()?;
        out.extend(found.into_iter().flatten());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(d: &[u8]) -> Z3Array {
        Z3Array::sequence(d).unwrap()
    }

    #[test]
    fn stack_adds_leading_dimension() {
        let d = stack(&[&seq(&[0, 1]), &seq(&[2, 2])]).unwrap();
        assert_eq!(d.shape(), &[2, 2]);
        assert_eq!(d.digits(), &[0, 1, 2, 2]);
        assert!(stack(&[&seq(&[0]), &seq(&[0, 1])]).is_err());
    }

    #[test]
    fn tri_from_length_two() {
        let t = [seq(&[0, 0]), seq(&[0, 1]), seq(&[0, 2])];
        let out = construct_tri(&t).unwrap();
        assert_eq!(out.shape(), &[3, 2]);
        assert!(is_golay_triad(&out));
        let p = project_triad(&out, ProjectionSpec::new(1, 0)).unwrap();
        assert!(is_golay_triad(&p));
    }

    #[test]
    fn cross_sum_with_itself_is_not_zero() {
        let t = [seq(&[0, 0]), seq(&[0, 1]), seq(&[0, 2])];
        assert!(!cross_sum_is_zero(&t, &t).unwrap());
        assert!(matches!(construct_cross2(&t, &t), Err(Error::Precondition(_))));
        assert!(matches!(construct_cross3(&t, &t, &t), Err(Error::Precondition(_))));
    }

    #[test]
    fn seed_lines_parse() {
        let seeds = default_seeds();
        assert_eq!(seeds.len(), 15);
        assert_eq!(seeds[0], Seed::All(vec![1]));
        assert!(matches!(&seeds[5], Seed::Class(t) if t.shape() == [6]));
        assert!(parse_triad_lines("2x9 000 111").is_err());
        let t = Triad::sequences(&[0, 1], &[0, 2], &[0, 0]).unwrap();
        assert_eq!(parse_triad_lines(&triad_line(&t)).unwrap(), vec![Seed::Class(t)]);
    }

    #[test]
    fn published_listing_is_golay() {
        let listed = published_unexplained();
        assert_eq!(listed.len(), 24);
        assert!(listed.iter().all(is_golay_triad));
    }

    #[test]
    fn canonical_triad_squeezes_and_sorts() {
        let t = construct_tri(&[seq(&[0]), seq(&[0]), seq(&[0])]).unwrap();
        assert_eq!(canonical_triad(&t).unwrap().shape(), &[3]);
        let t = construct_tri(&[seq(&[0, 0]), seq(&[0, 1]), seq(&[0, 2])]).unwrap();
        assert_eq!(canonical_triad(&t).unwrap().shape(), &[2, 3]);
    }
}
