//! Dense GF(2) vectors and matrices, cyclic convolution, and the circulant
//! kernel model.
//!
//! A circulant matrix `Z` with first row `r` has entries
//! `z[i][j] = r[(j - i) mod n]`. Multiplying it by a vector is a cyclic
//! convolution with the kernel `a[t] = r[(n - t) mod n]`, which is what every
//! synthesis path in this crate consumes.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A dense bit vector over GF(2). Bits beyond `len` in the last word are
/// always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// The unit vector `e_i` of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector of length `len` with ones at the given positions.
    /// Repeated positions cancel.
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.gen();
        }
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    /// In-place XOR. Panics if the lengths differ.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn checked_xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Parity of the bitwise AND of two vectors of equal length.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Cyclic shift: bit `i` moves to position `(i + k) mod len`.
    pub fn rotate(&self, k: usize) -> BitVector {
        if self.len == 0 {
            return self.clone();
        }
        let k = k % self.len;
        BitVector::from_ones(self.len, self.ones().map(|i| (i + k) % self.len))
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, index 0 first.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitVector::from_bools)
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter()
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitVector::count_ones).sum()
    }

    /// First `(row, col)` at which two matrices of equal shape differ.
    pub fn first_difference(&self, other: &GF2Matrix) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .zip(&other.rows)
            .enumerate()
            .find_map(|(i, (a, b))| {
                let mut d = a.clone();
                d.xor_assign(b);
                let first = d.ones().next();
                first.map(|j| (i, j))
            })
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// `y_i = XOR_j M[i][j] * x_j`.
pub fn mat_vec_mod2(m: &GF2Matrix, x: &BitVector) -> Result<BitVector> {
    if x.len() != m.cols() {
        return Err(Error::LengthMismatch {
            expected: m.cols(),
            found: x.len(),
        });
    }
    Ok(BitVector::from_bools(m.row_iter().map(|r| r.dot(x))))
}

/// Cyclic convolution over GF(2) straight from the definition:
/// `C_k = XOR over i + j = k (mod n) of a_i * b_j`.
///
/// Quadratic on purpose. This is the reference every circuit is checked
/// against and must not share code with the synthesizers.
pub fn cyclic_convolve(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let n = a.len();
    let mut c = BitVector::zeros(n);
    for i in a.ones() {
        for j in b.ones() {
            c.flip((i + j) % n);
        }
    }
    Ok(c)
}

/// The convolution kernel of an order-`n` circulant matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CirculantKernel {
    a: BitVector,
}

impl CirculantKernel {
    /// Wraps a convolution kernel directly (output `C_k` gets `a_t * B_{k-t}`).
    pub fn new(a: BitVector) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter("circulant kernel must have n >= 1".into()));
        }
        Ok(Self { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &BitVector {
        &self.a
    }

    /// Kernel of the circulant whose first row is `r`: `a_t = r_{(n - t) mod n}`.
    pub fn from_first_row(r: &BitVector) -> Result<Self> {
        Self::new(reverse_cyclic(r))
    }

    /// Inverse of [`CirculantKernel::from_first_row`] (the index map is an involution).
    pub fn first_row(&self) -> BitVector {
        reverse_cyclic(&self.a)
    }

    pub fn to_matrix(&self) -> GF2Matrix {
        circulant_to_matrix(&self.first_row())
    }

    /// Applies the circulant to `b` through the reference convolution.
    pub fn apply(&self, b: &BitVector) -> Result<BitVector> {
        cyclic_convolve(&self.a, b)
    }

    /// Parses the two-line kernel text format: `n`, then `n` characters of
    /// `0`/`1` giving the circulant's first row, index 0 first.
    pub fn parse_first_row_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty kernel file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad kernel size: {e}")))?;
        let bits: BitVector = lines
            .next()
            .ok_or_else(|| Error::Parse("missing kernel bit line".into()))?
            .parse()?;
        if bits.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bits.len(),
            });
        }
        Self::from_first_row(&bits)
    }

    pub fn to_first_row_text(&self) -> String {
        format!("{}\n{}\n", self.n(), self.first_row())
    }
}

fn reverse_cyclic(r: &BitVector) -> BitVector {
    let n = r.len();
    BitVector::from_ones(n, r.ones().map(|t| (n - t) % n))
}

/// `kernel_from_first_row` as a free function.
pub fn kernel_from_first_row(r: &BitVector) -> Result<CirculantKernel> {
    CirculantKernel::from_first_row(r)
}

/// The `n x n` circulant with entry `(i, j) = r[(j - i) mod n]`.
pub fn circulant_to_matrix(r: &BitVector) -> GF2Matrix {
    let n = r.len();
    GF2Matrix {
        cols: n,
        rows: (0..n).map(|i| r.rotate(i)).collect(),
    }
}

/// Deterministic pseudo-random kernel; identical for identical `(n, seed)`.
pub fn random_kernel(n: usize, seed: u64) -> Result<CirculantKernel> {
    if n == 0 {
        return Err(Error::InvalidParameter("circulant kernel must have n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    CirculantKernel::new(BitVector::random(n, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn convolve_identity_and_zero() {
        let b = bv("1011001");
        assert_eq!(cyclic_convolve(&BitVector::unit(7, 0), &b).unwrap(), b);
        assert!(cyclic_convolve(&BitVector::zeros(7), &b).unwrap().is_zero());
    }

    #[test]
    fn convolve_small_case() {
        assert_eq!(cyclic_convolve(&bv("110"), &bv("101")).unwrap(), bv("011"));
    }

    #[test]
    fn convolve_length_mismatch() {
        assert!(matches!(
            cyclic_convolve(&bv("10"), &bv("101")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn first_row_reversal() {
        assert_eq!(kernel_from_first_row(&bv("1000")).unwrap().a(), &bv("1000"));
        assert_eq!(kernel_from_first_row(&bv("0100")).unwrap().a(), &bv("0001"));
    }

    #[test]
    fn circulant_examples() {
        assert_eq!(circulant_to_matrix(&bv("1000")), GF2Matrix::identity(4));
        let swap = circulant_to_matrix(&bv("01"));
        assert!(!swap.get(0, 0) && swap.get(0, 1) && swap.get(1, 0) && !swap.get(1, 1));
        let m = circulant_to_matrix(&bv("110"));
        assert_eq!(m.row(0), &bv("110"));
        assert_eq!(m.row(1), &bv("011"));
        assert_eq!(m.row(2), &bv("101"));
    }

    #[test]
    fn mat_vec_examples() {
        let x = bv("1101");
        assert_eq!(mat_vec_mod2(&GF2Matrix::identity(4), &x).unwrap(), x);
        assert!(mat_vec_mod2(&GF2Matrix::zeros(3, 4), &x).unwrap().is_zero());
        let m = GF2Matrix::from_rows(2, vec![bv("11"), bv("01")]).unwrap();
        assert_eq!(mat_vec_mod2(&m, &bv("11")).unwrap(), bv("01"));
        assert!(mat_vec_mod2(&m, &x).is_err());
    }

    #[test]
    fn random_kernel_is_deterministic() {
        assert_eq!(random_kernel(50, 3).unwrap(), random_kernel(50, 3).unwrap());
        assert_ne!(random_kernel(50, 3).unwrap(), random_kernel(50, 4).unwrap());
    }

    #[test]
    fn random_kernel_density() {
        let n = 16;
        let samples = 10_000u64;
        let mut counts = vec![0usize; n];
        for seed in 0..samples {
            for i in random_kernel(n, seed).unwrap().a().ones() {
                counts[i] += 1;
            }
        }
        for c in counts {
            let p = c as f64 / samples as f64;
            assert!((p - 0.5).abs() <= 0.05, "density {p}");
        }
    }

    #[test]
    fn kernel_text_round_trip() {
        let k = random_kernel(13, 9).unwrap();
        let text = k.to_first_row_text();
        assert_eq!(CirculantKernel::parse_first_row_text(&text).unwrap(), k);
        assert!(CirculantKernel::parse_first_row_text("4\n101\n").is_err());
        assert!(CirculantKernel::parse_first_row_text("3\n1x1\n").is_err());
    }

    fn vec_pair(max: usize) -> impl Strategy<Value = (BitVector, BitVector, BitVector)> {
        (1..max).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|(a, b, c)| {
                    (BitVector::from_bools(a), BitVector::from_bools(b), BitVector::from_bools(c))
                })
        })
    }

    proptest! {
        #[test]
        fn bilinear_and_commutative((a, a2, b) in vec_pair(40)) {
            let lhs = cyclic_convolve(&a.checked_xor(&a2).unwrap(), &b).unwrap();
            let rhs = cyclic_convolve(&a, &b).unwrap()
                .checked_xor(&cyclic_convolve(&a2, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(cyclic_convolve(&a, &b).unwrap(), cyclic_convolve(&b, &a).unwrap());
        }

        #[test]
        fn shift_covariance((a, b, _c) in vec_pair(40), k in 0usize..64) {
            let shifted = cyclic_convolve(&a.rotate(k), &b).unwrap();
            prop_assert_eq!(shifted, cyclic_convolve(&a, &b).unwrap().rotate(k));
        }

        #[test]
        fn matrix_and_convolution_agree((r, b, _c) in vec_pair(48)) {
            let lhs = mat_vec_mod2(&circulant_to_matrix(&r), &b).unwrap();
            let rhs = cyclic_convolve(kernel_from_first_row(&r).unwrap().a(), &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
