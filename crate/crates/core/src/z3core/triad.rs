use std::fmt;

use super::array::Z3Array;
use crate::error::{Error, Result};

/// An unordered multiset of three equal-shape Z3 arrays.
///
/// Members are kept sorted by their last row-major digit, then by all
/// digits, so that two triads are equal as multisets exactly when their
/// member lists are equal. In a normalised Golay triad the last digits are
/// 0, 1 and 2, one per member. The derived `Ord` then compares member lists
/// lexicographically and is the canonical total order used to pick class
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triad {
    members: [Z3Array; 3],
}

impl Triad {
    pub fn new(a: Z3Array, b: Z3Array, c: Z3Array) -> Result<Self> {
        if a.shape() != b.shape() || a.shape() != c.shape() {
            return Err(Error::ShapeMismatch(a.shape().to_vec(), if a.shape() != b.shape() { b } else { c }.shape().to_vec()));
        }
        Ok(Triad::from_members([a, b, c]))
    }

    /// Build from three digit lists sharing one shape.
    pub fn from_digits(shape: &[usize], members: [&[u8]; 3]) -> Result<Self> {
        let [a, b, c] = members;
        Triad::new(
            Z3Array::new(shape.to_vec(), a.to_vec())?,
            Z3Array::new(shape.to_vec(), b.to_vec())?,
            Z3Array::new(shape.to_vec(), c.to_vec())?,
        )
    }

    /// Three length-`s` sequences.
    pub fn sequences(a: &[u8], b: &[u8], c: &[u8]) -> Result<Self> {
        Triad::from_digits(&[a.len()], [a, b, c])
    }

    pub(crate) fn from_members(mut members: [Z3Array; 3]) -> Self {
        debug_assert!(members[0].shape() == members[1].shape() && members[1].shape() == members[2].shape());
        members.sort_unstable_by(|a, b| member_order(a.digits(), b.digits()));
        Triad { members }
    }

    pub fn members(&self) -> &[Z3Array; 3] {
        &self.members
    }

    pub fn into_members(self) -> [Z3Array; 3] {
        self.members
    }

    pub fn shape(&self) -> &[usize] {
        self.members[0].shape()
    }

    pub fn rank(&self) -> usize {
        self.members[0].rank()
    }

    pub fn len(&self) -> usize {
        self.members[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.members[0].is_empty()
    }

    /// Apply `f` to every member and re-sort.
    pub fn map(&self, mut f: impl FnMut(&Z3Array) -> Z3Array) -> Triad {
        Triad::from_members([f(&self.members[0]), f(&self.members[1]), f(&self.members[2])])
    }

    pub fn try_map(&self, mut f: impl FnMut(&Z3Array) -> Result<Z3Array>) -> Result<Triad> {
        Ok(Triad::from_members([f(&self.members[0])?, f(&self.members[1])?, f(&self.members[2])?]))
    }

    pub fn is_normalised(&self) -> bool {
        self.members.iter().all(|m| m.digits()[0] == 0)
    }
}

/// Order of members within a triad: last digit first, then all digits.
pub(crate) fn member_order(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    (a.last(), a).cmp(&(b.last(), b))
}

impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, {}}}", self.members[0], self.members[1], self.members[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_sorted_multiset() {
        let t1 = Triad::sequences(&[0, 2], &[0, 1], &[0, 1]).unwrap();
        let t2 = Triad::sequences(&[0, 1], &[0, 2], &[0, 1]).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.members()[0].digits(), &[0, 1]);
        assert_eq!(t1.members()[2].digits(), &[0, 2]);
        let t3 = Triad::sequences(&[0, 0, 2], &[0, 1, 0], &[0, 0, 1]).unwrap();
        let last: Vec<u8> = t3.members().iter().map(|m| m.digits()[2]).collect();
        assert_eq!(last, [0, 1, 2]);
    }

    #[test]
    fn shapes_must_agree() {
        let a = Z3Array::sequence(&[0, 0]).unwrap();
        let b = Z3Array::sequence(&[0, 0, 0]).unwrap();
        assert!(matches!(Triad::new(a.clone(), a, b), Err(Error::ShapeMismatch(..))));
    }
}
