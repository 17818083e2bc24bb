//! Aperiodic auto- and cross-correlation, periodic autocorrelation and the
//! Golay test, all evaluated exactly in Z[ω].

use super::array::{strides_of, Z3Array};
use super::eisenstein::EisensteinInt;
use super::triad::Triad;
use crate::error::{Error, Result};

/// Correlation values indexed by shift vectors `u` with `|u_k| < s_k`.
///
/// Autocorrelation tables store only the half-space `u_1 ≥ 0` and recover
/// the rest from `C(−u) = conj(C(u))`. Cross-correlation tables store every
/// shift since that symmetry does not hold for them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationTable {
    shape: Vec<usize>,
    half: bool,
    extents: Vec<usize>,
    entries: Vec<EisensteinInt>,
}

impl CorrelationTable {
    fn zeroed(shape: &[usize], half: bool) -> Self {
        let extents: Vec<usize> = shape
            .iter()
            .enumerate()
            .map(|(k, &s)| if half && k == 0 { s } else { 2 * s - 1 })
            .collect();
        let n = extents.iter().product();
        CorrelationTable { shape: shape.to_vec(), half, extents, entries: vec![EisensteinInt::ZERO; n] }
    }

    fn slot(&self, u: &[isize]) -> usize {
        let mut flat = 0usize;
        for (k, (&uk, &s)) in u.iter().zip(&self.shape).enumerate() {
            let offset = if self.half && k == 0 { 0 } else { s as isize - 1 };
            flat = flat * self.extents[k] + (uk + offset) as usize;
        }
        flat
    }

    fn shift_of_slot(&self, mut flat: usize) -> Vec<isize> {
        let mut u = vec![0isize; self.shape.len()];
        for k in (0..self.shape.len()).rev() {
            let offset = if self.half && k == 0 { 0 } else { self.shape[k] as isize - 1 };
            u[k] = (flat % self.extents[k]) as isize - offset;
            flat /= self.extents[k];
        }
        u
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// True for autocorrelation tables (half-space storage).
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.half
    }

    /// Value at shift `u`; shifts with some `|u_k| ≥ s_k` are zero.
    pub fn get(&self, u: &[isize]) -> EisensteinInt {
        assert_eq!(u.len(), self.shape.len(), "shift rank mismatch");
        if u.iter().zip(&self.shape).any(|(&uk, &s)| uk.unsigned_abs() >= s) {
            return EisensteinInt::ZERO;
        }
        if self.half && u[0] < 0 {
            let neg: Vec<isize> = u.iter().map(|x| -x).collect();
            return self.entries[self.slot(&neg)].conj();
        }
        self.entries[self.slot(u)]
    }

    /// Every shift with `|u_k| < s_k`, in lexicographic order.
    pub fn all_shifts(&self) -> Vec<Vec<isize>> {
        let mut out = Vec::new();
        let mut u: Vec<isize> = self.shape.iter().map(|&s| 1 - s as isize).collect();
        loop {
            out.push(u.clone());
            let mut k = u.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                u[k] += 1;
                if u[k] < self.shape[k] as isize {
                    break;
                }
                u[k] = 1 - self.shape[k] as isize;
            }
        }
    }

    /// Stored (shift, value) pairs.
    pub fn stored(&self) -> impl Iterator<Item = (Vec<isize>, EisensteinInt)> + '_ {
        self.entries.iter().enumerate().map(|(i, &v)| (self.shift_of_slot(i), v))
    }

    /// True when every nonzero shift has value zero.
    pub fn vanishes_off_origin(&self) -> bool {
        let origin = self.slot(&vec![0; self.shape.len()]);
        self.entries.iter().enumerate().all(|(i, v)| i == origin || v.is_zero())
    }

    pub fn vanishes_everywhere(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    fn accumulate(&mut self, other: &CorrelationTable) {
        assert_eq!(self.shape, other.shape);
        assert_eq!(self.half, other.half);
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            *x += *y;
        }
    }
}

impl std::ops::Add for &CorrelationTable {
    type Output = CorrelationTable;
    fn add(self, rhs: &CorrelationTable) -> CorrelationTable {
        let mut out = self.clone();
        out.accumulate(rhs);
        out
    }
}

/// Position-difference data shared by every correlation loop.
fn pairwise(shape: &[usize]) -> Vec<Vec<isize>> {
    let n: usize = shape.iter().product();
    let strides = strides_of(shape);
    (0..n)
        .map(|flat| shape.iter().zip(&strides).map(|(&s, &st)| ((flat / st) % s) as isize).collect())
        .collect()
}

fn correlate_into(table: &mut CorrelationTable, a: &Z3Array, b: &Z3Array, idx: &[Vec<isize>]) {
    let r = a.rank();
    let mut u = vec![0isize; r];
    for (i, &ai) in a.digits().iter().enumerate() {
        for (j, &bj) in b.digits().iter().enumerate() {
            for k in 0..r {
                u[k] = idx[j][k] - idx[i][k];
            }
            if table.half && u[0] < 0 {
                continue;
            }
            let slot = table.slot(&u);
            table.entries[slot] += EisensteinInt::root(ai as i64 - bj as i64);
        }
    }
}

/// `C_A(u) = Σ_i A_i · conj(A_{i+u})` over every shift.
pub fn aperiodic_autocorrelation(a: &Z3Array) -> CorrelationTable {
    let mut table = CorrelationTable::zeroed(a.shape(), true);
    correlate_into(&mut table, a, a, &pairwise(a.shape()));
    table
}

/// `C_{A,B}(u) = Σ_i A_i · conj(B_{i+u})` over every shift.
pub fn cross_correlation(a: &Z3Array, b: &Z3Array) -> Result<CorrelationTable> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(a.shape().to_vec(), b.shape().to_vec()));
    }
    let mut table = CorrelationTable::zeroed(a.shape(), false);
    correlate_into(&mut table, a, b, &pairwise(a.shape()));
    Ok(table)
}

/// `R_A(u) = Σ_i A_i · conj(A_{(i+u) mod s})` for `0 ≤ u < s`.
pub fn periodic_autocorrelation(a: &Z3Array) -> Result<Vec<EisensteinInt>> {
    if a.rank() != 1 {
        return Err(Error::NotASequence(a.shape().to_vec()));
    }
    let d = a.digits();
    let s = d.len();
    Ok((0..s)
        .map(|u| (0..s).map(|i| EisensteinInt::root(d[i] as i64 - d[(i + u) % s] as i64)).sum())
        .collect())
}

/// `(C_A + C_B + C_C)` as a half-space table.
pub fn triad_autocorrelation_sum(t: &Triad) -> CorrelationTable {
    let idx = pairwise(t.shape());
    let mut table = CorrelationTable::zeroed(t.shape(), true);
    for m in t.members() {
        correlate_into(&mut table, m, m, &idx);
    }
    table
}

/// Exact Golay test: the autocorrelation sum vanishes at every nonzero shift.
pub fn is_golay_triad(t: &Triad) -> bool {
    if t.rank() == 1 {
        let [a, b, c] = t.members();
        return is_golay_sequences([a.digits(), b.digits(), c.digits()]);
    }
    triad_autocorrelation_sum(t).vanishes_off_origin()
}

/// Golay test on three equal-length digit sequences.
pub fn is_golay_sequences(seqs: [&[u8]; 3]) -> bool {
    let s = seqs[0].len();
    debug_assert!(seqs.iter().all(|x| x.len() == s));
    (1..s).all(|u| {
        let mut counts = [0i64; 3];
        for x in seqs {
            for i in 0..s - u {
                counts[((3 + x[i] - x[i + u]) % 3) as usize] += 1;
            }
        }
        counts[0] == counts[1] && counts[1] == counts[2]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use EisensteinInt as E;

    fn seq(d: &[u8]) -> Z3Array {
        Z3Array::sequence(d).unwrap()
    }

    #[test]
    fn worked_example_autocorrelation() {
        // A = [0 2 0 0 2 0]
        let c = aperiodic_autocorrelation(&seq(&[0, 2, 0, 0, 2, 0]));
        let vals: Vec<E> = (0..6).map(|u| c.get(&[u])).collect();
        let expected = [6, -1, 1, 3, -1, 1].map(E::from_int);
        assert_eq!(vals, expected);
    }

    #[test]
    fn worked_example_b_and_c() {
        let w = E::OMEGA;
        let w2 = E::OMEGA2;
        let cb = aperiodic_autocorrelation(&seq(&[0, 1, 2, 2, 2, 1]));
        let expected_b = [E::from_int(6), -w, w, w - E::ONE, -w2, w2];
        assert_eq!((0..6).map(|u| cb.get(&[u])).collect::<Vec<_>>(), expected_b);
        let cc = aperiodic_autocorrelation(&seq(&[0, 1, 1, 1, 0, 2]));
        let expected_c = [E::from_int(6), -w2, w2, w2 - E::ONE, -w, w];
        assert_eq!((0..6).map(|u| cc.get(&[u])).collect::<Vec<_>>(), expected_c);
    }

    #[test]
    fn array_example_row_one() {
        let a = Z3Array::new(vec![2, 3], vec![0, 0, 2, 2, 0, 0]).unwrap();
        let c = aperiodic_autocorrelation(&a);
        // (C_A(u, v) | 0 ≤ u < 2, −3 < v < 3)
        let row0: Vec<E> = (-2..3).map(|v| c.get(&[0, v])).collect();
        let row1: Vec<E> = (-2..3).map(|v| c.get(&[1, v])).collect();
        assert_eq!(row0, [-1, 1, 6, 1, -1].map(E::from_int));
        assert_eq!(row1, [1, -1, 0, 2, 1].map(E::from_int));
    }

    #[test]
    fn out_of_range_shift_is_zero() {
        let c = aperiodic_autocorrelation(&seq(&[0, 1, 2]));
        assert_eq!(c.get(&[3]), E::ZERO);
        assert_eq!(c.get(&[-7]), E::ZERO);
    }

    #[test]
    fn periodic_rejects_arrays() {
        let a = Z3Array::zeros(vec![2, 2]).unwrap();
        assert!(matches!(periodic_autocorrelation(&a), Err(Error::NotASequence(_))));
    }

    #[test]
    fn periodic_length_four_example() {
        let members = [seq(&[0, 0, 1, 1]), seq(&[0, 0, 1, 1]), seq(&[0, 1, 0, 1])];
        for u in 1..4 {
            let total: E = members.iter().map(|m| periodic_autocorrelation(m).unwrap()[u]).sum();
            assert_eq!(total, E::ZERO, "u = {u}");
        }
        let t = Triad::new(members[0].clone(), members[1].clone(), members[2].clone()).unwrap();
        assert!(!is_golay_triad(&t));
        let sum = triad_autocorrelation_sum(&t);
        assert!((1..4).any(|u| !sum.get(&[u]).is_zero()));
    }

    #[test]
    fn golay_examples() {
        let t = Triad::sequences(&[0, 2, 0, 0, 2, 0], &[0, 1, 2, 2, 2, 1], &[0, 1, 1, 1, 0, 2]).unwrap();
        assert!(is_golay_triad(&t));
        let arr = Triad::from_digits(&[2, 3], [&[0, 0, 2, 2, 0, 0], &[0, 2, 2, 1, 2, 1], &[0, 1, 0, 1, 1, 2]]).unwrap();
        assert!(is_golay_triad(&arr));
        assert!(triad_autocorrelation_sum(&arr).vanishes_off_origin());
        let zeros = Triad::sequences(&[0, 0], &[0, 0], &[0, 0]).unwrap();
        assert!(!is_golay_triad(&zeros));
        assert_eq!(triad_autocorrelation_sum(&zeros).get(&[1]), E::from_int(3));
    }

    #[test]
    fn cross_shape_mismatch() {
        assert!(cross_correlation(&seq(&[0]), &seq(&[0, 0])).is_err());
    }

    #[test]
    fn all_shifts_count() {
        let c = aperiodic_autocorrelation(&Z3Array::zeros(vec![2, 3]).unwrap());
        assert_eq!(c.all_shifts().len(), 3 * 5);
    }
}
