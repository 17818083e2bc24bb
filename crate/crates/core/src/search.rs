//! Exhaustive enumeration of normalised Golay triads.
//!
//! The search works on sequences of length `n`. Digits are fixed from the
//! outside in: `(a_0, b_0, c_0) = (0, 0, 0)` and
//! `(a_{n−1}, b_{n−1}, c_{n−1}) = (0, 1, 2)`, then level `i = 1, 2, …` fixes
//! the six digits at positions `i` and `n−1−i` (three digits when the two
//! positions meet in the middle).
//!
//! Every pair of positions `j < k` belongs to a lane, and the search counts
//! how many of the completed products `A_j·conj(A_k)` in each lane equal
//! 1, ω and ω². The `3N` products of a lane with `N` pairs sum to zero
//! exactly when each count ends at `N`, so a branch is dead as soon as any
//! count passes that bound. For plain sequences a lane is a shift `k − j`.
//! For an array shape the sequence is read through the projection that
//! flattens dimension 0 fastest, and a lane is the shift vector between the
//! two array positions; a shift `u` then splits into several lanes.
//!
//! At level `i` the shift `n−1−i` becomes complete. When its two new
//! products per member share a lane, the third member's digits are drawn
//! from a table keyed by the counts that lane still needs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::z3core::{is_golay_sequences, is_golay_triad, strides_of, Triad, Z3Array};

/// Longest length accepted by the brute-force oracle.
pub const BRUTE_FORCE_MAX: usize = 7;

/// Longest length (or array size) the search engine supports.
pub const SEARCH_MAX: usize = 32;

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Discard a branch when some equivalence map (linear offset, reversal,
    /// reverse-conjugation of any members, renormalisation) sends the
    /// partial triad to one that comes strictly earlier in search order.
    /// The output is then a subset that still meets every equivalence class.
    pub symmetry_pruning: bool,
    /// Directory for per-shard results so an interrupted run can resume.
    pub shard_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub shards: usize,
    pub shards_resumed: usize,
}

// Seven-bit lane `l` for exponent `e` sits at bit 7·(l mod 9) of word
// `[l/9][e]`. A lane with `N` pairs starts at 63 − N so that exceeding N
// sets its top bit. No step adds more than 64 to a lane, so lanes never
// carry into each other. Only the first `NW` words are touched while the
// open lanes fit in `9·NW` of them.
type Words<const NW: usize> = [[u64; 3]; NW];
const MAX_WORDS: usize = 6;
type Counts = Words<MAX_WORDS>;
const TOP_BITS: u64 = 0x0102_0408_1020_4081 << 6;
const BIAS: usize = 63;

#[inline(always)]
fn slot(l: usize) -> (usize, u32) {
    (l / 9, (l % 9) as u32 * 7)
}

#[inline(always)]
fn bump<const NW: usize>(c: &mut Words<NW>, l: usize, e: u8) {
    let (w, sh) = slot(l);
    c[w][e as usize] += 1 << sh;
}

#[inline(always)]
fn lane<const NW: usize>(c: &Words<NW>, l: usize, e: usize) -> usize {
    let (w, sh) = slot(l);
    (c[w][e] >> sh) as usize & 0x7f
}

/// Lane layout for sequences of length `n` read from `shape`.
struct Lanes {
    n: usize,
    /// Lane of the pair `(j, k)` at `j·n + k`, for `j < k`.
    of_pair: Vec<u8>,
    bound: Vec<usize>,
    /// `upto[u]`: number of lanes whose pairs are at most `u` apart.
    upto: Vec<usize>,
}

impl Lanes {
    fn new(shape: &[usize]) -> Self {
        let n: usize = shape.iter().product();
        let index = |mut j: usize| -> Vec<i64> {
            shape
                .iter()
                .map(|&s| {
                    let i = j % s;
                    j /= s;
                    i as i64
                })
                .collect()
        };
        let mut keys: BTreeMap<(usize, Vec<i64>), usize> = BTreeMap::new();
        for j in 0..n {
            for k in j + 1..n {
                let delta = index(k).iter().zip(index(j)).map(|(a, b)| a - b).collect();
                *keys.entry((k - j, delta)).or_default() += 1;
            }
        }
        let ids: BTreeMap<&(usize, Vec<i64>), usize> = keys.keys().enumerate().map(|(i, key)| (key, i)).collect();
        let mut of_pair = vec![0u8; n * n];
        for j in 0..n {
            for k in j + 1..n {
                let delta: Vec<i64> = index(k).iter().zip(index(j)).map(|(a, b)| a - b).collect();
                of_pair[j * n + k] = ids[&(k - j, delta)] as u8;
            }
        }
        let mut upto = vec![0; n];
        for &(u, _) in keys.keys() {
            for slot in upto[u..].iter_mut() {
                *slot += 1;
            }
        }
        Lanes { n, of_pair, bound: keys.into_values().collect(), upto }
    }

    #[inline(always)]
    fn of(&self, j: usize, k: usize) -> usize {
        self.of_pair[j * self.n + k] as usize
    }
}

#[inline(always)]
fn plus<const NW: usize>(a: &Words<NW>, b: &Words<NW>) -> Words<NW> {
    let mut out = *a;
    for w in 0..NW {
        for e in 0..3 {
            out[w][e] += b[w][e];
        }
    }
    out
}

#[inline(always)]
fn overflowed<const NW: usize>(c: &Words<NW>) -> bool {
    let mut acc = 0;
    for w in c {
        acc |= w[0] | w[1] | w[2];
    }
    acc & TOP_BITS != 0
}

/// `full` with its first `NW` words replaced by `low`.
#[inline(always)]
fn with_low<const NW: usize>(full: &Counts, low: &Words<NW>) -> Counts {
    let mut out = *full;
    out[..NW].copy_from_slice(low);
    out
}

/// Counts contributed by one new digit `v`, for `v = 0, 1, 2`.
///
/// `left` holds products against known positions before the new one, keyed
/// by their exponent when `v = 0`; `right` the same for positions after it.
/// Raising `v` lowers every left exponent and raises every right one.
fn digit_vectors<const NW: usize>(left: &Words<NW>, right: &Words<NW>) -> [Words<NW>; 3] {
    let mut out = [[[0u64; 3]; NW]; 3];
    for (v, o) in out.iter_mut().enumerate() {
        for w in 0..NW {
            for e in 0..3 {
                o[w][e] = left[w][(e + v) % 3] + right[w][(e + 3 - v) % 3];
            }
        }
    }
    out
}

/// Choices `3·c_lo + c_hi` for the third sequence, keyed by `3·r_0 + r_1`
/// where `r_e` is how many of its two products on the newly completed shift
/// must equal ω^e. Those products are `A_0·conj(C_hi)` and `C_lo·conj(C_{s−1})`
/// with `C_{s−1} = ω²`.
fn third_choices() -> &'static [Vec<u8>; 9] {
    static TABLE: OnceLock<[Vec<u8>; 9]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: [Vec<u8>; 9] = Default::default();
        for k in 0..9u8 {
            let (h, t) = (k / 3, k % 3);
            let mut r = [0usize; 3];
            r[((3 - t) % 3) as usize] += 1;
            r[((h + 1) % 3) as usize] += 1;
            table[3 * r[0] + r[1]].push(k);
        }
        table
    })
}

/// One equivalence map restricted to normalised triads with last column
/// `(0, 1, 2)`: image member `k` at position `j` is
/// `alpha[k]·X_src[k][j or s−1−j] + e·j + offset[k]`.
#[derive(Clone, Copy, Debug)]
struct SymMap {
    src: [usize; 3],
    alpha: [u8; 3],
    rev: [bool; 3],
    offset: [u8; 3],
    e: u8,
}

fn symmetry_maps(s: usize) -> Vec<SymMap> {
    let mut maps = Vec::new();
    let tail = ((s - 1) % 3) as u8;
    for e in 0..3u8 {
        for r in [false, true] {
            for mask in 0..8usize {
                if e == 0 && !r && mask == 0 {
                    continue;
                }
                let mut map = SymMap { src: [3; 3], alpha: [1; 3], rev: [false; 3], offset: [0; 3], e };
                let mut slots = [(1u8, false, 0u8); 3];
                for (x, slot) in slots.iter_mut().enumerate() {
                    let flip = mask >> x & 1 == 1;
                    let alpha = if flip { 2 } else { 1 };
                    let rev = flip != r;
                    let xa = (alpha * x as u8) % 3;
                    let (offset, last) = if rev { ((3 - xa) % 3, (e * tail + 3 - xa) % 3) } else { (0, (xa + e * tail) % 3) };
                    *slot = (alpha, rev, offset);
                    map.src[last as usize] = x;
                }
                debug_assert!(map.src.iter().all(|&x| x < 3));
                for k in 0..3 {
                    let (alpha, rev, offset) = slots[map.src[k]];
                    map.alpha[k] = alpha;
                    map.rev[k] = rev;
                    map.offset[k] = offset;
                }
                maps.push(map);
            }
        }
    }
    maps
}

type Digits = [[u8; SEARCH_MAX]; 3];

/// Entry `9x + 3h + t`: counts added when the next level sets `X_lo = h`
/// and `X_hi = t`. On the middle level entry `9x + m` is for `X_mid = m`.
type Tables<const NW: usize> = [Words<NW>; 27];

#[derive(Clone)]
struct Node {
    digits: Digits,
    counts: Counts,
    level: usize,
    /// Maps whose image still agrees with this node on every fixed digit.
    tied: u64,
}

struct Engine {
    s: usize,
    last: usize,
    shape: Vec<usize>,
    lanes: Lanes,
    maps: Vec<SymMap>,
    pruning: bool,
}

impl Engine {
    fn new(shape: &[usize], pruning: bool) -> Self {
        let s = shape.iter().product::<usize>();
        Engine { s, last: (s - 1) / 2, shape: shape.to_vec(), lanes: Lanes::new(shape), maps: symmetry_maps(s), pruning }
    }

    fn root(&self) -> Node {
        let s = self.s;
        let mut counts = [[0u64; 3]; MAX_WORDS];
        for (l, &n) in self.lanes.bound.iter().enumerate() {
            let (w, sh) = slot(l);
            for e in 0..3 {
                counts[w][e] += ((BIAS - n) as u64) << sh;
            }
        }
        let mut digits = [[0u8; SEARCH_MAX]; 3];
        let top = self.lanes.of(0, s - 1);
        for (x, d) in digits.iter_mut().enumerate() {
            d[s - 1] = x as u8;
            bump(&mut counts, top, ((3 - x) % 3) as u8);
        }
        let tied = if self.pruning { (1u64 << self.maps.len()) - 1 } else { 0 };
        Node { digits, counts, level: 0, tied }
    }

    /// Compare every still-tied map's image with the digits fixed at the
    /// newest level. `None` means some image comes first.
    fn symmetry_cut(&self, node: &Node, positions: &[usize]) -> Option<u64> {
        let s = self.s;
        let mut tied = node.tied;
        let mut rest = tied;
        while rest != 0 {
            let g = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let m = &self.maps[g];
            'cmp: for k in 0..3 {
                for &j in positions {
                    let src = if m.rev[k] { s - 1 - j } else { j };
                    let img = (m.alpha[k] * node.digits[m.src[k]][src] + m.e * (j % 3) as u8 + m.offset[k]) % 3;
                    let own = node.digits[k][j];
                    if img != own {
                        if img < own {
                            return None;
                        }
                        tied &= !(1 << g);
                        break 'cmp;
                    }
                }
            }
        }
        Some(tied)
    }

    fn accept(&self, mut child: Node, positions: &[usize], visit: &mut dyn FnMut(Node)) {
        if child.tied != 0 {
            match self.symmetry_cut(&child, positions) {
                Some(t) => child.tied = t,
                None => return,
            }
        }
        visit(child);
    }

    /// Words per exponent touched by the level after `level`.
    fn words(&self, level: usize) -> usize {
        (self.lanes.upto[self.s - 2 - level] - 1) / 9 + 1
    }

    /// Tables for the positions of level `lev`, counting products against
    /// the positions of levels `0..=known` only.
    fn tables<const NW: usize>(&self, d: &Digits, known: usize, lev: usize) -> Tables<NW> {
        let s = self.s;
        let ln = &self.lanes;
        let (lo, hi) = (lev, s - 1 - lev);
        let mut w = [[[0u64; 3]; NW]; 27];
        for x in 0..3 {
            let mut l_lo = [[0u64; 3]; NW];
            let (mut r_lo, mut l_hi, mut r_hi) = (l_lo, l_lo, l_lo);
            for j in 0..=known {
                bump(&mut l_lo, ln.of(j, lo), d[x][j]);
                bump(&mut l_hi, ln.of(j, hi), d[x][j]);
            }
            for k in s - 1 - known..s {
                let e = (3 - d[x][k]) % 3;
                bump(&mut r_lo, ln.of(lo, k), e);
                bump(&mut r_hi, ln.of(hi, k), e);
            }
            let vl = digit_vectors(&l_lo, &r_lo);
            let out = &mut w[9 * x..9 * x + 9];
            if lo == hi {
                out[..3].copy_from_slice(&vl);
                continue;
            }
            let vh = digit_vectors(&l_hi, &r_hi);
            let mid = ln.of(lo, hi);
            for h in 0..3 {
                for t in 0..3 {
                    let c = &mut out[3 * h + t];
                    for i in 0..NW {
                        for e in 0..3 {
                            c[i][e] = vl[h][i][e] + vh[t][i][e];
                        }
                    }
                    bump(c, mid, ((3 + h - t) % 3) as u8);
                }
            }
        }
        w
    }

    /// Extend `grand`, built against the parent of `child`, by the products
    /// with the positions `child` has just fixed.
    fn refine<const NW: usize>(&self, grand: &Tables<NW>, child: &Node) -> Tables<NW> {
        let ln = &self.lanes;
        let (p, q) = (child.level, self.s - 1 - child.level);
        let (lo, hi) = (p + 1, q - 1);
        let mut w = *grand;
        let (p_lo, hi_q) = (ln.of(p, lo), ln.of(hi, q));
        if lo == hi {
            for x in 0..3 {
                let (dp, dq) = (child.digits[x][p], child.digits[x][q]);
                for (m, c) in w[9 * x..9 * x + 3].iter_mut().enumerate() {
                    let m = m as u8;
                    bump(c, p_lo, (3 + dp - m) % 3);
                    bump(c, hi_q, (3 + m - dq) % 3);
                }
            }
            return w;
        }
        let (p_hi, lo_q) = (ln.of(p, hi), ln.of(lo, q));
        for x in 0..3 {
            let (dp, dq) = (child.digits[x][p], child.digits[x][q]);
            let out = &mut w[9 * x..9 * x + 9];
            for h in 0..3u8 {
                for t in 0..3u8 {
                    let c = &mut out[(3 * h + t) as usize];
                    bump(c, p_lo, (3 + dp - h) % 3);
                    bump(c, hi_q, (3 + t - dq) % 3);
                    bump(c, p_hi, (3 + dp - t) % 3);
                    bump(c, lo_q, (3 + h - dq) % 3);
                }
            }
        }
        w
    }

    /// Feed every surviving child of `node` to `visit`; `w` holds the
    /// tables for the next level against every fixed position.
    fn expand<const NW: usize>(&self, node: &Node, w: &Tables<NW>, visit: &mut dyn FnMut(Node)) {
        let s = self.s;
        let lev = node.level + 1;
        let (lo, hi) = (lev, s - 1 - lev);
        let base: Words<NW> = std::array::from_fn(|i| node.counts[i]);
        let mut emit = |counts: &Words<NW>, k: [usize; 3]| {
            let mut child = Node { digits: node.digits, counts: with_low(&node.counts, counts), level: lev, tied: node.tied };
            if lo == hi {
                for x in 0..3 {
                    child.digits[x][lo] = k[x] as u8;
                }
                self.accept(child, &[lo], visit);
            } else {
                for x in 0..3 {
                    child.digits[x][lo] = (k[x] / 3) as u8;
                    child.digits[x][hi] = (k[x] % 3) as u8;
                }
                self.accept(child, &[lo, hi], visit);
            }
        };
        if lo == hi {
            for code in 0..27usize {
                let m = [code / 9, code / 3 % 3, code % 3];
                let counts = plus(&plus(&plus(&base, &w[m[0]]), &w[9 + m[1]]), &w[18 + m[2]]);
                if !overflowed(&counts) {
                    emit(&counts, m);
                }
            }
            return;
        }

        // The two new products of each member on the completed shift.
        let (top_a, top_b) = (self.lanes.of(0, hi), self.lanes.of(lo, s - 1));
        let all: Vec<u8> = (0..9).collect();
        let third = third_choices();
        for ka in 0..9 {
            let a = plus(&base, &w[ka]);
            if overflowed(&a) {
                continue;
            }
            for kb in 0..9 {
                let ab = plus(&a, &w[9 + kb]);
                if overflowed(&ab) {
                    continue;
                }
                let choices = if top_a == top_b {
                    &third[3 * (BIAS - lane(&ab, top_a, 0)) + BIAS - lane(&ab, top_a, 1)]
                } else {
                    &all
                };
                for &kc in choices {
                    let counts = plus(&ab, &w[18 + kc as usize]);
                    if !overflowed(&counts) {
                        emit(&counts, [ka, kb, kc as usize]);
                    }
                }
            }
        }
    }

    /// Depth-first walk below `node` that hands every node at level `stop`
    /// to `visit` and counts the nodes entered.
    fn walk<const NW: usize>(&self, node: &Node, w: &Tables<NW>, stop: usize, nodes: &mut u64, visit: &mut dyn FnMut(Node)) {
        let next = node.level + 1;
        match if next < stop { self.words(next) } else { 1 } {
            1 => self.walk_children::<NW, 1>(node, w, stop, nodes, visit),
            2 => self.walk_children::<NW, 2>(node, w, stop, nodes, visit),
            3 => self.walk_children::<NW, 3>(node, w, stop, nodes, visit),
            4 => self.walk_children::<NW, 4>(node, w, stop, nodes, visit),
            5 => self.walk_children::<NW, 5>(node, w, stop, nodes, visit),
            _ => self.walk_children::<NW, 6>(node, w, stop, nodes, visit),
        }
    }

    fn walk_children<const NW: usize, const NC: usize>(
        &self,
        node: &Node,
        w: &Tables<NW>,
        stop: usize,
        nodes: &mut u64,
        visit: &mut dyn FnMut(Node),
    ) {
        // Tables for the grandchildren against this node's positions, shared
        // by every child.
        let mut grand: Option<Tables<NC>> = None;
        self.expand(node, w, &mut |child| {
            *nodes += 1;
            if child.level == stop {
                visit(child);
                return;
            }
            let g = grand.get_or_insert_with(|| self.tables(&node.digits, node.level, child.level + 1));
            let cw = self.refine(g, &child);
            self.walk(&child, &cw, stop, nodes, visit);
        });
    }

    /// Walk from a node whose tables have not been built.
    fn walk_from(&self, node: &Node, stop: usize, nodes: &mut u64, visit: &mut dyn FnMut(Node)) {
        if node.level >= stop {
            visit(node.clone());
            return;
        }
        let (d, l) = (&node.digits, node.level);
        match self.words(l) {
            1 => self.walk::<1>(node, &self.tables(d, l, l + 1), stop, nodes, visit),
            2 => self.walk::<2>(node, &self.tables(d, l, l + 1), stop, nodes, visit),
            3 => self.walk::<3>(node, &self.tables(d, l, l + 1), stop, nodes, visit),
            4 => self.walk::<4>(node, &self.tables(d, l, l + 1), stop, nodes, visit),
            5 => self.walk::<5>(node, &self.tables(d, l, l + 1), stop, nodes, visit),
            _ => self.walk::<6>(node, &self.tables(d, l, l + 1), stop, nodes, visit),
        }
    }

    /// The leaf as a triad of `shape`, checked from scratch.
    fn leaf_triad(&self, node: &Node) -> Option<Triad> {
        let s = self.s;
        let d = &node.digits;
        let (a, b, c) = (&d[0][..s], &d[1][..s], &d[2][..s]);
        let triad = if self.shape.len() == 1 {
            is_golay_sequences([a, b, c]).then(|| Triad::sequences(a, b, c).expect("complete assignment"))
        } else {
            let t = Triad::new(self.reshape(a), self.reshape(b), self.reshape(c)).expect("complete assignment");
            is_golay_triad(&t).then_some(t)
        };
        debug_assert!(triad.is_some(), "count bounds accepted a non-Golay leaf");
        triad
    }

    /// Array of `shape` whose flattening, dimension 0 fastest, is `seq`.
    fn reshape(&self, seq: &[u8]) -> Z3Array {
        let strides = strides_of(&self.shape);
        let mut out = vec![0u8; seq.len()];
        for (mut j, &v) in seq.iter().enumerate() {
            let mut pos = 0;
            for (&s, &st) in self.shape.iter().zip(&strides) {
                pos += (j % s) * st;
                j /= s;
            }
            out[pos] = v;
        }
        Z3Array::new(self.shape.clone(), out).expect("digits in range")
    }
}

/// All normalised Golay sequence triads of length `s`, one per unordered
/// triad (the member ending in digit `k` is the `k`-th sequence).
pub fn search_sequence_triads(s: usize, options: &SearchOptions) -> Result<BTreeSet<Triad>> {
    search_with_stats(s, options).map(|(set, _)| set)
}

pub fn search_with_stats(s: usize, options: &SearchOptions) -> Result<(BTreeSet<Triad>, SearchStats)> {
    if !(2..=SEARCH_MAX).contains(&s) {
        return Err(Error::UnsupportedLength(s, "2..=32"));
    }
    run(&[s], options)
}

/// Golay array triads of `shape` found directly: the sequence search with
/// one lane per shift vector of the array. The result holds every
/// normalised triad whose flattening (dimension 0 fastest) ends in the
/// column `(0, 1, 2)`; with symmetry pruning, at least one per class.
pub fn search_array_triads(shape: &[usize], options: &SearchOptions) -> Result<BTreeSet<Triad>> {
    search_array_with_stats(shape, options).map(|(set, _)| set)
}

pub fn search_array_with_stats(shape: &[usize], options: &SearchOptions) -> Result<(BTreeSet<Triad>, SearchStats)> {
    let n: usize = shape.iter().product();
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidShape(shape.to_vec()));
    }
    if !(2..=SEARCH_MAX).contains(&n) {
        return Err(Error::UnsupportedLength(n, "2..=32"));
    }
    if Lanes::new(shape).bound.len() > 9 * MAX_WORDS {
        return Err(Error::Precondition(format!("shape {shape:?} needs more than {} counter lanes", 9 * MAX_WORDS)));
    }
    run(shape, options)
}

fn run(shape: &[usize], options: &SearchOptions) -> Result<(BTreeSet<Triad>, SearchStats)> {
    let engine = Engine::new(shape, options.symmetry_pruning);
    let split = engine.last.min(3);
    let mut prefix_nodes = 1;
    let mut prefixes = Vec::new();
    engine.walk_from(&engine.root(), split, &mut prefix_nodes, &mut |n| prefixes.push(n));

    let nodes = AtomicU64::new(prefix_nodes);
    let leaves = AtomicU64::new(0);
    let resumed = AtomicU64::new(0);
    let name = shape.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("x");
    let shard_dir = options.shard_dir.as_ref().map(|d| {
        d.join(format!("search-{name}-{}", if options.symmetry_pruning { "pruned" } else { "full" }))
    });
    if let Some(dir) = &shard_dir {
        fs::create_dir_all(dir)?;
    }

    let shard_count = prefixes.len().clamp(1, 256);
    let chunk = prefixes.len().div_ceil(shard_count).max(1);
    let shards: Vec<&[Node]> = prefixes.chunks(chunk).collect();

    let results: Vec<Result<Vec<Triad>>> = shards
        .par_iter()
        .enumerate()
        .map(|(idx, shard)| {
            let path = shard_dir.as_ref().map(|d| d.join(format!("shard-{idx:04}-of-{:04}.txt", shards.len())));
            if let Some(p) = &path {
                if let Some(found) = read_shard(p, shape)? {
                    resumed.fetch_add(1, Ordering::Relaxed);
                    return Ok(found);
                }
            }
            let mut found = Vec::new();
            let (mut n, mut l) = (0u64, 0u64);
            for start in shard.iter() {
                engine.walk_from(start, engine.last, &mut n, &mut |leaf| {
                    l += 1;
                    found.extend(engine.leaf_triad(&leaf));
                });
            }
            nodes.fetch_add(n, Ordering::Relaxed);
            leaves.fetch_add(l, Ordering::Relaxed);
            if let Some(p) = &path {
                write_shard(p, &found)?;
            }
            Ok(found)
        })
        .collect();

    let mut set = BTreeSet::new();
    for r in results {
        set.extend(r?);
    }
    let stats = SearchStats {
        nodes: nodes.into_inner(),
        leaves: leaves.into_inner(),
        shards: shards.len(),
        shards_resumed: resumed.into_inner() as usize,
    };
    Ok((set, stats))
}

fn write_shard(path: &std::path::Path, found: &[Triad]) -> Result<()> {
    let mut text = String::from("complete\n");
    for t in found {
        for m in t.members() {
            text.extend(m.digits().iter().map(|d| char::from(b'0' + d)));
            text.push(' ');
        }
        text.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)?;
    Ok(())
}

fn read_shard(path: &std::path::Path, shape: &[usize]) -> Result<Option<Vec<Triad>>> {
    let s: usize = shape.iter().product();
    let Ok(text) = fs::read_to_string(path) else {
        return Ok(None);
    };
    let mut lines = text.lines();
    if lines.next() != Some("complete") {
        return Ok(None);
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let parse = |w: &str| -> Option<Vec<u8>> {
            let d: Vec<u8> = w.bytes().map(|b| b.wrapping_sub(b'0')).collect();
            (d.len() == s && d.iter().all(|&x| x < 3)).then_some(d)
        };
        let words: Vec<Option<Vec<u8>>> = line.split_whitespace().map(parse).collect();
        match words.as_slice() {
            [Some(a), Some(b), Some(c)] => {
                let member = |d: &Vec<u8>| Z3Array::new(shape.to_vec(), d.clone());
                out.push(Triad::new(member(a)?, member(b)?, member(c)?)?)
            }
            _ => return Err(Error::Parse { line: n + 2, message: format!("bad shard entry in {}", path.display()) }),
        }
    }
    Ok(Some(out))
}

/// Independent oracle: every assignment of the interior digits under the
/// same normalisation and last-column convention, filtered by the Golay
/// test. No other pruning.
pub fn brute_force_sequence_triads(s: usize) -> Result<BTreeSet<Triad>> {
    if !(2..=BRUTE_FORCE_MAX).contains(&s) {
        return Err(Error::UnsupportedLength(s, "2..=7"));
    }
    let free = 3 * (s - 2);
    let total = 3u64.pow(free as u32);
    let mut seqs = [vec![0u8; s], vec![0u8; s], vec![0u8; s]];
    for (k, x) in seqs.iter_mut().enumerate() {
        x[s - 1] = k as u8;
    }
    let mut out = BTreeSet::new();
    for mut code in 0..total {
        for x in seqs.iter_mut() {
            for d in x[1..s - 1].iter_mut() {
                *d = (code % 3) as u8;
                code /= 3;
            }
        }
        if is_golay_sequences([&seqs[0], &seqs[1], &seqs[2]]) {
            out.insert(Triad::sequences(&seqs[0], &seqs[1], &seqs[2])?);
        }
    }
    Ok(out)
}
