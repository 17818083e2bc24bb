//! Normal form, the equivalence operations on triads, orbits and classes.
//!
//! The orbit of a triad is the closure of `{normalise ∘ g}` over the
//! generators: a unit linear offset along each dimension, reversal of each
//! dimension (all members together) and reverse-conjugation of any single
//! member.
//!
//! Arrays that differ only by the order of their dimensions describe the
//! same object. Shapes are kept nondecreasing, and when two extents are
//! equal a class also absorbs the orbits of its transposes. Its size is
//! still the orbit size of its representative.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::z3core::{member_order, strides_of, Triad, Z3Array};

/// Subtract every member's leading digit from that member.
pub fn normalise(t: &Triad) -> Triad {
    t.map(Z3Array::normalised)
}

/// Add `e_1 i_1 + … + e_r i_r` to every member.
pub fn linear_offset(t: &Triad, e: &[u8]) -> Result<Triad> {
    t.try_map(|m| m.linear_offset(e))
}

/// Reverse dimension `k` in all three members at once.
pub fn reverse_dimension(t: &Triad, k: usize) -> Result<Triad> {
    t.try_map(|m| m.reverse_dimension(k))
}

/// Replace member `which` (index into the ordered member list) by its
/// reverse conjugate.
pub fn reverse_conjugate_member(t: &Triad, which: usize) -> Result<Triad> {
    if which >= 3 {
        return Err(Error::InvalidMember(which));
    }
    let mut members = t.members().clone();
    members[which] = members[which].reverse_conjugate();
    Ok(Triad::from_members(members))
}

type Raw = [Vec<u8>; 3];

/// Index maps for the generators on one shape, reusable across triads.
#[derive(Clone, Debug)]
pub struct OrbitEngine {
    shape: Vec<usize>,
    /// Per dimension, `i_k mod 3` at every flat index.
    offsets: Vec<Vec<u8>>,
    /// Per dimension, the flat index with `i_k` reversed.
    reversals: Vec<Vec<usize>>,
    /// Per pair of equal extents, the flat index with the two swapped.
    transposes: Vec<Vec<usize>>,
}

impl OrbitEngine {
    pub fn new(shape: &[usize]) -> Self {
        let r = shape.len();
        let n: usize = shape.iter().product();
        let strides = strides_of(shape);
        let pairs: Vec<(usize, usize)> =
            (0..r).flat_map(|k| (k + 1..r).map(move |l| (k, l))).filter(|&(k, l)| shape[k] == shape[l]).collect();
        let mut offsets = vec![vec![0u8; n]; r];
        let mut reversals = vec![vec![0usize; n]; r];
        let mut transposes = vec![vec![0usize; n]; pairs.len()];
        for flat in 0..n {
            let idx: Vec<usize> = (0..r).map(|k| flat / strides[k] % shape[k]).collect();
            for k in 0..r {
                offsets[k][flat] = (idx[k] % 3) as u8;
                reversals[k][flat] = flat - idx[k] * strides[k] + (shape[k] - 1 - idx[k]) * strides[k];
            }
            for (map, &(k, l)) in transposes.iter_mut().zip(&pairs) {
                map[flat] = flat - idx[k] * strides[k] - idx[l] * strides[l] + idx[k] * strides[l] + idx[l] * strides[k];
            }
        }
        OrbitEngine { shape: shape.to_vec(), offsets, reversals, transposes }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    fn finish(mut raw: Raw) -> Raw {
        for m in raw.iter_mut() {
            let lead = m[0];
            if lead != 0 {
                for d in m.iter_mut() {
                    *d = (*d + 3 - lead) % 3;
                }
            }
        }
        raw.sort_unstable_by(|a, b| member_order(a, b));
        raw
    }

    fn neighbours(&self, t: &Raw, transpose: bool, mut visit: impl FnMut(Raw)) {
        for off in &self.offsets {
            visit(Self::finish(t.clone().map(|m| m.iter().zip(off).map(|(&d, &o)| (d + o) % 3).collect())));
        }
        let transposes = if transpose { &self.transposes[..] } else { &[] };
        for map in self.reversals.iter().chain(transposes) {
            visit(Self::finish(t.clone().map(|m| map.iter().map(|&i| m[i]).collect())));
        }
        for which in 0..3 {
            let mut next = t.clone();
            next[which] = t[which].iter().rev().map(|&d| (2 * d) % 3).collect();
            visit(Self::finish(next));
        }
    }

    fn orbit_raw(&self, start: Raw, transpose: bool) -> HashSet<Raw> {
        let start = Self::finish(start);
        let mut seen = HashSet::from([start.clone()]);
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            self.neighbours(&t, transpose, |n| {
                if !seen.contains(&n) {
                    seen.insert(n.clone());
                    stack.push(n);
                }
            });
        }
        seen
    }

    fn to_raw(&self, t: &Triad) -> Result<Raw> {
        if t.shape() != self.shape.as_slice() {
            return Err(Error::ShapeMismatch(self.shape.clone(), t.shape().to_vec()));
        }
        Ok(t.members().clone().map(|m| m.digits().to_vec()))
    }

    fn from_raw(&self, raw: Raw) -> Triad {
        Triad::from_members(raw.map(|d| Z3Array::from_raw(self.shape.clone(), d)))
    }

    /// Every normalised triad equivalent to `t`, in canonical order.
    pub fn orbit(&self, t: &Triad) -> Result<Vec<Triad>> {
        let mut raw: Vec<Raw> = self.orbit_raw(self.to_raw(t)?, false).into_iter().collect();
        raw.sort_unstable();
        Ok(raw.into_iter().map(|r| self.from_raw(r)).collect())
    }

    /// Least triad in the class of `t`, transposes included.
    pub fn representative(&self, t: &Triad) -> Result<Triad> {
        let best = self.orbit_raw(self.to_raw(t)?, true).into_iter().min().expect("orbit contains its start");
        Ok(self.from_raw(best))
    }

    /// Partition `triads` into classes; each class comes with the orbit of
    /// its representative.
    pub fn classify_with_orbits<I>(&self, triads: I, provenance: &Provenance) -> Result<Vec<(TriadClass, Vec<Triad>)>>
    where
        I: IntoIterator<Item = Triad>,
    {
        let mut seen: HashSet<Raw> = HashSet::new();
        let mut classes = BTreeMap::new();
        for t in triads {
            let raw = Self::finish(self.to_raw(&t)?);
            if seen.contains(&raw) {
                continue;
            }
            let class = self.orbit_raw(raw, true);
            let rep = class.iter().min().expect("orbit contains its start").clone();
            seen.extend(class);
            let mut members: Vec<Raw> = self.orbit_raw(rep, false).into_iter().collect();
            members.sort_unstable();
            let orbit: Vec<Triad> = members.into_iter().map(|r| self.from_raw(r)).collect();
            let class = TriadClass { representative: orbit[0].clone(), orbit_size: orbit.len(), provenance: provenance.clone() };
            classes.insert(class.representative.clone(), (class, orbit));
        }
        Ok(classes.into_values().collect())
    }

    /// Every normalised triad in the classes of `reps`, transposes included.
    pub fn expand<'a, I>(&self, reps: I) -> Result<Vec<Triad>>
    where
        I: IntoIterator<Item = &'a Triad>,
    {
        let mut out = HashSet::new();
        for t in reps {
            let raw = Self::finish(self.to_raw(t)?);
            if !out.contains(&raw) {
                out.extend(self.orbit_raw(raw, true));
            }
        }
        let mut out: Vec<Raw> = out.into_iter().collect();
        out.sort_unstable();
        Ok(out.into_iter().map(|r| self.from_raw(r)).collect())
    }
}

/// Closure of `t` under the equivalence operations, as normalised triads.
pub fn orbit(t: &Triad) -> BTreeSet<Triad> {
    OrbitEngine::new(t.shape()).orbit(t).expect("shape matches engine").into_iter().collect()
}

/// The least triad of the class of `t` under the canonical triad order.
pub fn canonical_representative(t: &Triad) -> Triad {
    OrbitEngine::new(t.shape()).representative(t).expect("shape matches engine")
}

/// Where a class came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Searched,
    Seed,
    Constructed(String),
    Projected,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Searched => f.write_str("searched"),
            Provenance::Seed => f.write_str("seed"),
            Provenance::Constructed(rule) => write!(f, "constructed:{rule}"),
            Provenance::Projected => f.write_str("projected"),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "searched" => Ok(Provenance::Searched),
            "seed" => Ok(Provenance::Seed),
            "projected" => Ok(Provenance::Projected),
            _ => match s.strip_prefix("constructed:") {
                Some(rule) => Ok(Provenance::Constructed(rule.to_string())),
                None => Err(Error::Parse { line: 0, message: format!("unknown provenance {s:?}") }),
            },
        }
    }
}

/// One equivalence class: its canonical representative and orbit size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriadClass {
    pub representative: Triad,
    pub orbit_size: usize,
    pub provenance: Provenance,
}

/// Partition triads of one shape into classes, sorted by representative.
pub fn classify<I>(triads: I, provenance: Provenance) -> Result<Vec<TriadClass>>
where
    I: IntoIterator<Item = Triad>,
{
    let mut iter = triads.into_iter().peekable();
    let Some(first) = iter.peek() else {
        return Ok(Vec::new());
    };
    let engine = OrbitEngine::new(first.shape());
    Ok(engine.classify_with_orbits(iter, &provenance)?.into_iter().map(|(c, _)| c).collect())
}

/// Distinct member arrays over every orbit, times 3 for the constant
/// offsets that undo normalisation.
pub fn count_golay_members<'a, I>(orbits: I) -> usize
where
    I: IntoIterator<Item = &'a Triad>,
{
    let mut members = HashSet::new();
    for t in orbits {
        for m in t.members() {
            members.insert(m.digits());
        }
    }
    3 * members.len()
}

/// Number of Golay sequences (or arrays) covered by a complete catalog.
pub fn count_golay_sequences(classes: &[TriadClass]) -> usize {
    let Some(first) = classes.first() else {
        return 0;
    };
    let engine = OrbitEngine::new(first.representative.shape());
    let orbits: Vec<Vec<Triad>> =
        classes.iter().map(|c| engine.orbit(&c.representative).expect("one shape per catalog")).collect();
    count_golay_members(orbits.iter().flatten())
}

/// Orbit sizes as a histogram `size → number of classes`.
pub fn size_histogram(classes: &[TriadClass]) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for c in classes {
        *hist.entry(c.orbit_size).or_insert(0) += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq_triad(a: &[u8], b: &[u8], c: &[u8]) -> Triad {
        Triad::sequences(a, b, c).unwrap()
    }

    #[test]
    fn normalise_subtracts_leading_digit() {
        let t = seq_triad(&[1, 0], &[2, 0], &[0, 1]);
        assert_eq!(normalise(&t), seq_triad(&[0, 2], &[0, 1], &[0, 1]));
        assert_eq!(normalise(&normalise(&t)), normalise(&t));
    }

    #[test]
    fn offsets_and_reversals_invert() {
        let t = seq_triad(&[0, 2, 0, 0, 2, 0], &[0, 1, 2, 2, 2, 1], &[0, 1, 1, 1, 0, 2]);
        let there = linear_offset(&t, &[1]).unwrap();
        assert_eq!(linear_offset(&there, &[2]).unwrap(), t);
        assert_eq!(reverse_dimension(&reverse_dimension(&t, 0).unwrap(), 0).unwrap(), t);
        assert!(reverse_dimension(&t, 1).is_err());
        assert!(reverse_conjugate_member(&t, 3).is_err());
    }

    #[test]
    fn length_two_orbit() {
        let t = seq_triad(&[0, 0], &[0, 1], &[0, 2]);
        assert_eq!(orbit(&t).len(), 1);
        assert_eq!(canonical_representative(&t), t);
    }

    #[test]
    fn provenance_round_trips() {
        for p in [Provenance::Searched, Provenance::Seed, Provenance::Projected, Provenance::Constructed("tri".into())] {
            assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
        }
        assert!("bogus".parse::<Provenance>().is_err());
    }
}
