//! Executable forms of the structural results behind the nonexistence of
//! triads whose size is 4 mod 6.
//!
//! - [`check_product_property`]: in any Golay triad the digit sum at
//!   position `i` matches the digit sum at the mirrored position.
//! - [`diff_roots_residue`]: `|Σ(Y_i − Z_i)|²` is 0 or 3 mod 9 according to
//!   whether the products of `Y` and `Z` agree.
//! - [`check_periodic_two_of_three`]: a periodic Golay triad of length `2m`,
//!   `m ≡ 2 (mod 3)`, has exactly two members whose even and odd halves have
//!   equal products.
//! - [`assert_nonexistence`]: runs the catalog computation for a shape and
//!   confirms it comes back empty.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{canonical_shape, shape_name, CatalogStore};
use crate::error::{Error, Result};
use crate::z3core::{periodic_autocorrelation, EisensteinInt, Triad, Z3Array};

/// `a_i + b_i + c_i ≡ a_{n−1−i} + b_{n−1−i} + c_{n−1−i} (mod 3)` for every
/// flat index `i`.
///
/// Reversing the row-major flattening reverses every dimension at once, so
/// the same test is the array form of the property.
pub fn check_product_property(t: &Triad) -> bool {
    let [a, b, c] = t.members();
    let (a, b, c) = (a.digits(), b.digits(), c.digits());
    let n = a.len();
    (0..n).all(|i| {
        let j = n - 1 - i;
        (a[i] + b[i] + c[i]) % 3 == (a[j] + b[j] + c[j]) % 3
    })
}

/// The quantities of the difference-of-roots lemma for one pair `(Y, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffRoots {
    /// How often each of 1, ω, ω² occurs in `Y`.
    pub alpha: [i64; 3],
    /// How often each of 1, ω, ω² occurs in `Z`.
    pub beta: [i64; 3],
    pub a: i64,
    pub b: i64,
    /// `a² + b² − ab`, which equals `|Σ(Y_i − Z_i)|²`.
    pub norm_squared: i64,
    /// `norm_squared mod 9`.
    pub residue: i64,
    /// Whether `∏Y_i = ∏Z_i`.
    pub products_equal: bool,
}

fn histogram(d: &[u8]) -> [i64; 3] {
    let mut h = [0i64; 3];
    for &x in d {
        h[x as usize] += 1;
    }
    h
}

fn require_sequence(a: &Z3Array) -> Result<()> {
    if a.rank() != 1 {
        return Err(Error::NotASequence(a.shape().to_vec()));
    }
    Ok(())
}

/// Evaluates `|Σ(Y_i − Z_i)|²` through the symbol counts of `y` and `z`.
///
/// The result is cross-checked against direct Eisenstein arithmetic, and the
/// residue against the product comparison; a disagreement is reported as
/// [`Error::Inconsistent`].
pub fn diff_roots_residue(y: &Z3Array, z: &Z3Array) -> Result<DiffRoots> {
    require_sequence(y)?;
    require_sequence(z)?;
    if y.len() != z.len() {
        return Err(Error::LengthMismatch { expected: y.len(), found: z.len() });
    }
    let alpha = histogram(y.digits());
    let beta = histogram(z.digits());
    let a = (alpha[0] - alpha[2]) - (beta[0] - beta[2]);
    let b = (alpha[1] - alpha[2]) - (beta[1] - beta[2]);
    let norm_squared = a * a + b * b - a * b;

    let direct: EisensteinInt = y
        .digits()
        .iter()
        .zip(z.digits())
        .map(|(&p, &q)| EisensteinInt::root(p as i64) - EisensteinInt::root(q as i64))
        .sum();
    if direct.norm_squared() != norm_squared {
        return Err(Error::Inconsistent(format!(
            "|Σ(Y−Z)|² is {} directly but {} from symbol counts",
            direct.norm_squared(),
            norm_squared
        )));
    }

    let prod = |d: &[u8]| d.iter().map(|&x| x as u32).sum::<u32>() % 3;
    let products_equal = prod(y.digits()) == prod(z.digits());
    let residue = norm_squared.rem_euclid(9);
    let expected = if products_equal { 0 } else { 3 };
    if residue != expected {
        return Err(Error::Inconsistent(format!(
            "residue {residue} mod 9 but products {}",
            if products_equal { "agree" } else { "differ" }
        )));
    }
    Ok(DiffRoots { alpha, beta, a, b, norm_squared, residue, products_equal })
}

/// `S` for an even-length sequence triad: the sum over members of the
/// squared modulus of the alternating sum, with the per-member lemma data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueWitness {
    pub s: i64,
    pub residue: i64,
    /// Per member: whether the even-index and odd-index products agree.
    pub products_equal: [bool; 3],
    pub members: [DiffRoots; 3],
}

fn halves(x: &Z3Array) -> Result<(Z3Array, Z3Array)> {
    let d = x.digits();
    let even: Vec<u8> = d.iter().step_by(2).copied().collect();
    let odd: Vec<u8> = d.iter().skip(1).step_by(2).copied().collect();
    Ok((Z3Array::sequence(&even)?, Z3Array::sequence(&odd)?))
}

fn even_length(t: &Triad) -> Result<usize> {
    if t.rank() != 1 {
        return Err(Error::NotASequence(t.shape().to_vec()));
    }
    let n = t.len();
    if n == 0 || n % 2 == 1 {
        return Err(Error::Precondition(format!("length {n} is not a positive even number")));
    }
    Ok(n)
}

/// Computes `S` by splitting every member into its even and odd halves.
pub fn residue_witness(t: &Triad) -> Result<ResidueWitness> {
    even_length(t)?;
    let mut parts = Vec::with_capacity(3);
    for m in t.members() {
        let (y, z) = halves(m)?;
        parts.push(diff_roots_residue(&y, &z)?);
    }
    let members: [DiffRoots; 3] = parts.try_into().expect("three members");
    let s = members.iter().map(|d| d.norm_squared).sum::<i64>();
    Ok(ResidueWitness {
        s,
        residue: s.rem_euclid(9),
        products_equal: [members[0].products_equal, members[1].products_equal, members[2].products_equal],
        members,
    })
}

/// `Σ_u (−1)^u (R_A + R_B + R_C)(u)`, the right-hand side of the
/// re-indexing identity for `S`.
pub fn alternating_periodic_sum(t: &Triad) -> Result<EisensteinInt> {
    even_length(t)?;
    let mut total = EisensteinInt::ZERO;
    for m in t.members() {
        for (u, r) in periodic_autocorrelation(m)?.into_iter().enumerate() {
            if u % 2 == 0 {
                total += r;
            } else {
                total -= r;
            }
        }
    }
    Ok(total)
}

/// True iff the periodic autocorrelations of the three members sum to zero
/// at every nonzero shift.
pub fn is_periodic_golay(t: &Triad) -> Result<bool> {
    if t.rank() != 1 {
        return Err(Error::NotASequence(t.shape().to_vec()));
    }
    let n = t.len();
    let mut sum = vec![EisensteinInt::ZERO; n];
    for m in t.members() {
        for (acc, r) in sum.iter_mut().zip(periodic_autocorrelation(m)?) {
            *acc += r;
        }
    }
    Ok(sum.iter().skip(1).all(|r| r.is_zero()))
}

/// For a periodic Golay triad of length `2m` with `m ≡ 2 (mod 3)`, returns
/// whether exactly two members have equal even-index and odd-index
/// products.
pub fn check_periodic_two_of_three(t: &Triad) -> Result<bool> {
    let n = even_length(t)?;
    let m = n / 2;
    if m % 3 != 2 {
        return Err(Error::Precondition(format!("half-length {m} is not 2 mod 3")));
    }
    if !is_periodic_golay(t)? {
        return Err(Error::Precondition("triad is not periodic Golay".into()));
    }
    let w = residue_witness(t)?;
    if w.s != 3 * n as i64 {
        return Err(Error::Inconsistent(format!("S = {} for a periodic Golay triad of length {n}", w.s)));
    }
    Ok(w.products_equal.iter().filter(|&&e| e).count() == 2)
}

/// Every periodic Golay triad of length `s`, as sorted member triples with
/// each member starting at digit 0.
///
/// Scaling a member by a constant leaves its periodic autocorrelation
/// unchanged, so this loses nothing. The enumeration visits `3^(3(s−1))`
/// candidates in parallel over the first member, so it is limited to `s ≤ 5`.
pub fn periodic_golay_triads(s: usize) -> Result<Vec<Triad>> {
    if !(1..=5).contains(&s) {
        return Err(Error::UnsupportedLength(s, "1..=5"));
    }
    let count = 3usize.pow((s - 1) as u32);
    let member = |mut code: usize| -> Vec<u8> {
        let mut d = vec![0u8; s];
        for x in d.iter_mut().skip(1) {
            *x = (code % 3) as u8;
            code /= 3;
        }
        d
    };
    let seqs: Vec<Vec<u8>> = (0..count).map(member).collect();
    let corr: Vec<Vec<EisensteinInt>> = seqs
        .iter()
        .map(|d| periodic_autocorrelation(&Z3Array::sequence(d).expect("valid digits")))
        .collect::<Result<_>>()?;
    let found: Vec<(usize, usize, usize)> = (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let corr = &corr;
            (i..count).flat_map(move |j| {
                (j..count).filter_map(move |k| {
                    (1..s)
                        .all(|u| (corr[i][u] + corr[j][u] + corr[k][u]).is_zero())
                        .then_some((i, j, k))
                })
            })
        })
        .collect();
    found.into_iter().map(|(i, j, k)| Triad::sequences(&seqs[i], &seqs[j], &seqs[k])).collect()
}

/// Outcome of a nonexistence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nonexistence {
    pub shape: Vec<usize>,
    /// Whether the size is 4 mod 6, so that emptiness is a theorem rather
    /// than only a computed fact.
    pub predicted: bool,
    pub classes_found: usize,
}

impl Nonexistence {
    pub fn is_empty(&self) -> bool {
        self.classes_found == 0
    }

    /// One line stating what was checked. The check certifies that a finite
    /// exhaustive computation found nothing; it is evidence, not a proof.
    pub fn describe(&self) -> String {
        let basis = if self.predicted {
            "size 4 mod 6, emptiness predicted"
        } else {
            "size not 4 mod 6, emptiness is a computed fact"
        };
        format!(
            "{}: {} classes found by exhaustive computation ({basis})",
            shape_name(&self.shape),
            self.classes_found
        )
    }
}

/// Computes the catalog for `shape` and reports whether it is empty.
///
/// Sequence lengths must be 4 mod 6. Array shapes are accepted for any size
/// so that computed nonexistence results (such as 2x10 and 4x5) can be
/// checked the same way. A nonempty catalog where emptiness is predicted is
/// an [`Error::Inconsistent`].
pub fn assert_nonexistence(shape: &[usize], store: &CatalogStore) -> Result<Nonexistence> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidShape(shape.to_vec()));
    }
    let canon = canonical_shape(shape);
    let product: usize = canon.iter().product();
    let predicted = product % 6 == 4;
    if !predicted && canon.len() < 2 {
        return Err(Error::Precondition(format!("length {product} is not 4 mod 6")));
    }
    let catalog = store.get(&canon)?;
    let result = Nonexistence { shape: canon, predicted, classes_found: catalog.len() };
    if predicted && !result.is_empty() {
        return Err(Error::Inconsistent(format!(
            "{} classes of size {product} despite size 4 mod 6",
            result.classes_found
        )));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(d: &[u8]) -> Z3Array {
        Z3Array::sequence(d).unwrap()
    }

    #[test]
    fn single_symbol_difference() {
        let w = diff_roots_residue(&seq(&[0]), &seq(&[1])).unwrap();
        assert_eq!((w.a, w.b, w.norm_squared, w.residue, w.products_equal), (1, -1, 3, 3, false));
    }

    #[test]
    fn length_four_periodic_example() {
        let t = Triad::sequences(&[0, 0, 1, 1], &[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
        assert!(is_periodic_golay(&t).unwrap());
        let w = residue_witness(&t).unwrap();
        assert_eq!(w.products_equal, [true, true, false]);
        assert_eq!((w.s, w.residue), (12, 3));
        assert!(check_periodic_two_of_three(&t).unwrap());
    }

    #[test]
    fn preconditions() {
        let odd = Triad::sequences(&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]).unwrap();
        assert!(matches!(check_periodic_two_of_three(&odd), Err(Error::Precondition(_))));
        let six = Triad::sequences(&[0; 6], &[0; 6], &[0; 6]).unwrap();
        assert!(matches!(check_periodic_two_of_three(&six), Err(Error::Precondition(_))));
        let flat = Triad::sequences(&[0; 4], &[0; 4], &[0; 4]).unwrap();
        assert!(matches!(check_periodic_two_of_three(&flat), Err(Error::Precondition(_))));
    }

    #[test]
    fn product_property_small() {
        assert!(!check_product_property(&Triad::sequences(&[0, 0], &[0, 0], &[0, 1]).unwrap()));
        assert!(check_product_property(&Triad::sequences(&[0, 1, 0], &[2, 2, 2], &[1, 0, 1]).unwrap()));
    }
}
