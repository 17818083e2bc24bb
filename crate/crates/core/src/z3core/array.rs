use std::fmt;

use crate::error::{Error, Result};

/// A single element of Z3, the exponent `a` of the phase ω^a.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z3Digit(u8);

impl Z3Digit {
    pub const fn new(value: u8) -> Option<Self> {
        if value < 3 {
            Some(Z3Digit(value))
        } else {
            None
        }
    }

    pub const fn reduce(value: i64) -> Self {
        Z3Digit(value.rem_euclid(3) as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }
}

impl std::ops::Add for Z3Digit {
    type Output = Z3Digit;
    fn add(self, rhs: Z3Digit) -> Z3Digit {
        Z3Digit((self.0 + rhs.0) % 3)
    }
}

impl std::ops::Neg for Z3Digit {
    type Output = Z3Digit;
    fn neg(self) -> Z3Digit {
        Z3Digit((3 - self.0) % 3)
    }
}

#[inline]
pub(crate) fn add3(a: u8, b: u8) -> u8 {
    let s = a + b;
    if s >= 3 {
        s - 3
    } else {
        s
    }
}

/// An `s_1 × … × s_r` array over Z3 stored row-major (last index fastest).
///
/// Reading outside `[0, s_k)` in any dimension yields the complex value
/// zero, which is why the signed accessor returns an `Option`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z3Array {
    shape: Vec<usize>,
    digits: Vec<u8>,
}

impl Z3Array {
    pub fn new(shape: Vec<usize>, digits: Vec<u8>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::InvalidShape(shape));
        }
        let n: usize = shape.iter().product();
        if digits.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: digits.len() });
        }
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::InvalidDigit(d));
        }
        Ok(Z3Array { shape, digits })
    }

    /// A length-`s` sequence (rank 1).
    pub fn sequence(digits: &[u8]) -> Result<Self> {
        Z3Array::new(vec![digits.len()], digits.to_vec())
    }

    pub fn from_z3_digits(shape: Vec<usize>, digits: &[Z3Digit]) -> Result<Self> {
        Z3Array::new(shape, digits.iter().map(|d| d.value()).collect())
    }

    pub(crate) fn from_raw(shape: Vec<usize>, digits: Vec<u8>) -> Self {
        debug_assert_eq!(shape.iter().product::<usize>(), digits.len());
        debug_assert!(digits.iter().all(|&d| d < 3));
        Z3Array { shape, digits }
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let n = shape.iter().product();
        Z3Array::new(shape, vec![0; n])
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> Z3Digit {
        Z3Digit(self.digits[i])
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape)
    }

    /// Digit at a multi-index, or `None` when any coordinate is out of range.
    pub fn get(&self, index: &[isize]) -> Option<u8> {
        debug_assert_eq!(index.len(), self.rank());
        let mut flat = 0usize;
        for (&i, &s) in index.iter().zip(&self.shape) {
            if i < 0 || i as usize >= s {
                return None;
            }
            flat = flat * s + i as usize;
        }
        Some(self.digits[flat])
    }

    /// Multi-index of a row-major flat position.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank()];
        for k in (0..self.rank()).rev() {
            idx[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
        idx
    }

    /// Multiply every entry by ω^e (add `e` to every digit).
    pub fn add_constant(&self, e: u8) -> Z3Array {
        let e = e % 3;
        Z3Array::from_raw(self.shape.clone(), self.digits.iter().map(|&d| add3(d, e)).collect())
    }

    /// Subtract the digit at the all-zero index from every entry.
    pub fn normalised(&self) -> Z3Array {
        let lead = self.digits[0];
        self.add_constant((3 - lead) % 3)
    }

    /// `x_i + e_1 i_1 + … + e_r i_r`.
    pub fn linear_offset(&self, e: &[u8]) -> Result<Z3Array> {
        if e.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: e.len() });
        }
        let mut out = self.digits.clone();
        for (flat, d) in out.iter_mut().enumerate() {
            let idx = self.unflatten(flat);
            let shift: usize = idx.iter().zip(e).map(|(&i, &ek)| i * ek as usize).sum();
            *d = add3(*d, (shift % 3) as u8);
        }
        Ok(Z3Array::from_raw(self.shape.clone(), out))
    }

    /// Replace index `i_k` by `s_k − 1 − i_k`.
    pub fn reverse_dimension(&self, k: usize) -> Result<Z3Array> {
        if k >= self.rank() {
            return Err(Error::DimensionOutOfRange { dim: k, rank: self.rank() });
        }
        let strides = self.strides();
        let sk = self.shape[k];
        let mut out = vec![0u8; self.len()];
        for (flat, &d) in self.digits.iter().enumerate() {
            let ik = (flat / strides[k]) % sk;
            let target = flat - ik * strides[k] + (sk - 1 - ik) * strides[k];
            out[target] = d;
        }
        Ok(Z3Array::from_raw(self.shape.clone(), out))
    }

    /// `2·x` at the fully reversed index; has the same aperiodic
    /// autocorrelation as `self`.
    pub fn reverse_conjugate(&self) -> Z3Array {
        // Row-major reversal in every dimension is reversal of the flat list.
        let digits = self.digits.iter().rev().map(|&d| (2 * d) % 3).collect();
        Z3Array::from_raw(self.shape.clone(), digits)
    }

    /// Reorder dimensions: output dimension `j` is input dimension `perm[j]`.
    pub fn permute_dims(&self, perm: &[usize]) -> Result<Z3Array> {
        let r = self.rank();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p >= r || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        let new_shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let old_strides = self.strides();
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; r];
        for _ in 0..self.len() {
            let src: usize = (0..r).map(|j| idx[j] * old_strides[perm[j]]).sum();
            out.push(self.digits[src]);
            for j in (0..r).rev() {
                idx[j] += 1;
                if idx[j] < new_shape[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        Ok(Z3Array::from_raw(new_shape, out))
    }

    /// Same digits under a new shape with equal element count.
    pub fn reshape(&self, shape: Vec<usize>) -> Result<Z3Array> {
        Z3Array::new(shape, self.digits.clone())
    }

    /// Digits as space-separated rows, rows joined by `" / "`.
    pub fn to_plain_string(&self) -> String {
        let row = *self.shape.last().unwrap();
        self.digits
            .chunks(row)
            .map(|c| c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(" / ")
    }
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

impl fmt::Display for Z3Array {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_plain_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Z3Array::new(vec![2, 2], vec![0; 3]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(Z3Array::new(vec![2], vec![0, 3]), Err(Error::InvalidDigit(3))));
        assert!(matches!(Z3Array::new(vec![0], vec![]), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn out_of_range_reads_as_none() {
        let a = Z3Array::new(vec![2, 3], vec![0, 0, 2, 2, 0, 0]).unwrap();
        assert_eq!(a.get(&[1, 0]), Some(2));
        assert_eq!(a.get(&[0, 2]), Some(2));
        assert_eq!(a.get(&[-1, 0]), None);
        assert_eq!(a.get(&[0, 3]), None);
    }

    #[test]
    fn reverse_dimension_is_involution() {
        let a = Z3Array::new(vec![2, 3], vec![0, 1, 2, 2, 1, 1]).unwrap();
        let r = a.reverse_dimension(1).unwrap();
        assert_eq!(r.digits(), &[2, 1, 0, 1, 1, 2]);
        assert_eq!(r.reverse_dimension(1).unwrap(), a);
        assert_eq!(a.reverse_dimension(0).unwrap().digits(), &[2, 1, 1, 0, 1, 2]);
        assert!(a.reverse_dimension(2).is_err());
    }

    #[test]
    fn permute_dims_transposes() {
        let a = Z3Array::new(vec![2, 3], vec![0, 1, 2, 2, 1, 1]).unwrap();
        let t = a.permute_dims(&[1, 0]).unwrap();
        assert_eq!(t.shape(), &[3, 2]);
        assert_eq!(t.digits(), &[0, 2, 1, 1, 2, 1]);
        assert_eq!(t.permute_dims(&[1, 0]).unwrap(), a);
        assert!(a.permute_dims(&[0, 0]).is_err());
    }

    #[test]
    fn linear_offset_adds_index_weights() {
        let a = Z3Array::sequence(&[0, 0, 0, 0]).unwrap();
        assert_eq!(a.linear_offset(&[1]).unwrap().digits(), &[0, 1, 2, 0]);
        assert!(a.linear_offset(&[1, 1]).is_err());
    }
}
