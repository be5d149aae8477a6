//! Arithmetic in `R = GF(2)[y] / (y^(2*3^s) + y^(3^s) + 1)`.
//!
//! The modulus is the `3^(s+1)`-th cyclotomic polynomial over GF(2), so `y`
//! has multiplicative order exactly `3^(s+1)` and `y^(3^(s+1-m))` is a
//! principal root of unity of order `3^m`. Multiplying by a power of `y` moves
//! each coefficient to at most two positions; the synthesizer builds its
//! depth-1 layers from those sparse maps.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Ring parameters for a given `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    s: u32,
}

impl RingContext {
    pub fn new(s: u32) -> Self {
        assert!(s <= 18, "ring parameter s = {s} is far outside desk scale");
        Self { s }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `3^s`.
    pub fn third(&self) -> usize {
        3usize.pow(self.s)
    }

    /// Number of coefficients, `2 * 3^s`.
    pub fn deg(&self) -> usize {
        2 * self.third()
    }

    /// Multiplicative order of `y`, `3^(s+1)`.
    pub fn y_order(&self) -> usize {
        3 * self.third()
    }

    /// Exponent `e` such that `y^e = y^-p`.
    pub fn neg_exponent(&self, p: usize) -> usize {
        let ord = self.y_order();
        (ord - p % ord) % ord
    }

    fn check(&self, other: &RingContext) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                left: self.s,
                right: other.s,
            });
        }
        Ok(())
    }
}

/// At most two coefficient positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Support {
    idx: [usize; 2],
    len: u8,
}

impl Support {
    fn one(a: usize) -> Self {
        Self { idx: [a, 0], len: 1 }
    }

    fn two(a: usize, b: usize) -> Self {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Self { idx: [a, b], len: 2 }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.idx[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl<'a> IntoIterator for &'a Support {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.as_slice().iter()
    }
}

/// An element of `R`, coefficient of `y^i` at index `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    ctx: RingContext,
    coeffs: BitVector,
}

impl RingElement {
    pub fn zero(ctx: RingContext) -> Self {
        Self {
            ctx,
            coeffs: BitVector::zeros(ctx.deg()),
        }
    }

    pub fn one(ctx: RingContext) -> Self {
        Self {
            ctx,
            coeffs: BitVector::unit(ctx.deg(), 0),
        }
    }

    pub fn from_coeffs(ctx: RingContext, coeffs: BitVector) -> Result<Self> {
        if coeffs.len() != ctx.deg() {
            return Err(Error::LengthMismatch {
                expected: ctx.deg(),
                found: coeffs.len(),
            });
        }
        Ok(Self { ctx, coeffs })
    }

    /// Reduces an arbitrary-length coefficient vector into the ring.
    pub fn from_polynomial(ctx: RingContext, poly: &BitVector) -> Self {
        let mut coeffs = BitVector::zeros(ctx.deg());
        for e in poly.ones() {
            for &p in &monomial_support(ctx, 0, e) {
                coeffs.flip(p);
            }
        }
        Self { ctx, coeffs }
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &BitVector {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.count_ones() == 1 && self.coeffs.get(0)
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.ctx.check(&other.ctx)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.xor_assign(&other.coeffs);
        Ok(Self { ctx: self.ctx, coeffs })
    }

    /// Schoolbook product followed by trinomial reduction.
    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.ctx.check(&other.ctx)?;
        let deg = self.ctx.deg();
        let mut prod = BitVector::zeros(2 * deg - 1);
        let rhs: Vec<usize> = other.coeffs.ones().collect();
        for i in self.coeffs.ones() {
            for &j in &rhs {
                prod.flip(i + j);
            }
        }
        Ok(Self {
            ctx: self.ctx,
            coeffs: reduce_product(self.ctx, prod),
        })
    }

    /// `self * y^p`.
    pub fn mul_y_pow(&self, p: usize) -> RingElement {
        let mut coeffs = BitVector::zeros(self.ctx.deg());
        for u in self.coeffs.ones() {
            for &w in &monomial_support(self.ctx, u, p) {
                coeffs.flip(w);
            }
        }
        Self { ctx: self.ctx, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> RingElement {
        let mut base = self.clone();
        let mut acc = RingElement::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same context");
            }
            base = base.checked_mul(&base).expect("same context");
            e >>= 1;
        }
        acc
    }
}

/// Folds a product of degree `< 2 * deg - 1` down to `deg` coefficients using
/// `y^(2t) = y^t + 1`, top coefficient first.
fn reduce_product(ctx: RingContext, mut prod: BitVector) -> BitVector {
    let (deg, t) = (ctx.deg(), ctx.third());
    for e in (deg..prod.len()).rev() {
        if prod.get(e) {
            prod.flip(e);
            prod.flip(e - t);
            prod.flip(e - 2 * t);
        }
    }
    BitVector::from_ones(deg, prod.ones())
}

pub fn ring_add(u: &RingElement, v: &RingElement) -> Result<RingElement> {
    u.checked_add(v)
}

pub fn ring_mul(u: &RingElement, v: &RingElement) -> Result<RingElement> {
    u.checked_mul(v)
}

/// `y^e`, with `e` reduced modulo the order of `y`.
pub fn y_pow(ctx: RingContext, e: usize) -> RingElement {
    RingElement {
        ctx,
        coeffs: BitVector::from_ones(ctx.deg(), monomial_support(ctx, 0, e).as_slice().iter().copied()),
    }
}

/// Positions of `y^u * y^p` after full reduction.
pub fn monomial_support(ctx: RingContext, u: usize, p: usize) -> Support {
    let e = (u % ctx.y_order() + p % ctx.y_order()) % ctx.y_order();
    if e < ctx.deg() {
        Support::one(e)
    } else {
        let t = ctx.third();
        Support::two(e - 2 * t, e - t)
    }
}

/// Checked variant of [`monomial_support`] enforcing `u < deg`.
pub fn monomial_support_checked(ctx: RingContext, u: usize, p: usize) -> Result<Support> {
    if u >= ctx.deg() {
        return Err(Error::OutOfRange {
            what: "coefficient index",
            value: u,
            limit: ctx.deg(),
        });
    }
    Ok(monomial_support(ctx, u, p))
}

/// Exponent of the order-`3^m` root: `3^(s+1-m)`.
pub fn zeta_exponent(ctx: RingContext, m: u32) -> Result<usize> {
    if m > ctx.s() + 1 {
        return Err(Error::InvalidParameter(format!(
            "no root of unity of order 3^{m} in R with s = {}",
            ctx.s()
        )));
    }
    Ok(3usize.pow(ctx.s() + 1 - m))
}

/// The root `y^(3^(s+1-m))` of multiplicative order `3^m`, for `1 <= m <= s+1`.
pub fn zeta(ctx: RingContext, m: u32) -> Result<RingElement> {
    if m == 0 {
        return Err(Error::InvalidParameter("DFT order exponent m must be >= 1".into()));
    }
    Ok(y_pow(ctx, zeta_exponent(ctx, m)?))
}

/// Horner evaluation of `sum coeffs[i] * point^i`; an empty sequence gives 0.
pub fn poly_eval_horner(coeffs: &[RingElement], point: &RingElement) -> Result<RingElement> {
    let mut acc = RingElement::zero(point.ctx());
    for c in coeffs.iter().rev() {
        acc = acc.checked_mul(point)?.checked_add(c)?;
    }
    Ok(acc)
}

/// Length-`3^m` DFT with root `zeta(m)`: `w_j = sum_i v_i * zeta^(+-ij)`.
///
/// The inverse needs no `1/3^m` scaling because `3^m = 1` in GF(2).
pub fn dft_points(v: &[RingElement], m: u32, inverse: bool) -> Result<Vec<RingElement>> {
    let size = 3usize.pow(m);
    if v.len() != size {
        return Err(Error::LengthMismatch {
            expected: size,
            found: v.len(),
        });
    }
    let ctx = v[0].ctx();
    for x in v {
        ctx.check(&x.ctx())?;
    }
    let step = zeta_exponent(ctx, m)?;
    let ord = ctx.y_order();
    (0..size)
        .map(|j| {
            let mut acc = RingElement::zero(ctx);
            for (i, vi) in v.iter().enumerate() {
                let e = (step * ((i * j) % size)) % ord;
                let e = if inverse { ctx.neg_exponent(e) } else { e };
                acc.coeffs.xor_assign(&vi.mul_y_pow(e).coeffs);
            }
            Ok(acc)
        })
        .collect()
}

/// Positions that raw product coefficient `y^j` (`j <= 4*3^s - 2`) folds onto.
pub fn reduction_support(ctx: RingContext, j: usize) -> Result<Support> {
    let t = ctx.third();
    let limit = 4 * t - 1;
    if j >= limit {
        return Err(Error::OutOfRange {
            what: "raw product index",
            value: j,
            limit,
        });
    }
    Ok(if j < 2 * t {
        Support::one(j)
    } else if j < 3 * t {
        Support::two(j - 2 * t, j - t)
    } else {
        Support::one(j - 3 * t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn elem(ctx: RingContext, ones: &[usize]) -> RingElement {
        RingElement::from_coeffs(ctx, BitVector::from_ones(ctx.deg(), ones.iter().copied())).unwrap()
    }

    fn random_elem(ctx: RingContext, rng: &mut ChaCha8Rng) -> RingElement {
        RingElement::from_coeffs(ctx, BitVector::random(ctx.deg(), rng)).unwrap()
    }

    /// `y^e` by repeated multiplication with `y`, independent of `monomial_support`.
    fn y_chain(ctx: RingContext, e: usize) -> RingElement {
        let y = elem(ctx, &[1]);
        let mut acc = RingElement::one(ctx);
        for _ in 0..e {
            acc = acc.checked_mul(&y).unwrap();
        }
        acc
    }

    #[test]
    fn add_examples() {
        let c0 = RingContext::new(0);
        let u = elem(c0, &[0, 1]);
        assert!(ring_add(&u, &u).unwrap().is_zero());
        assert_eq!(ring_add(&u, &RingElement::zero(c0)).unwrap(), u);
        let c1 = RingContext::new(1);
        let a = elem(c1, &[0, 1]);
        let b = elem(c1, &[1, 2]);
        assert_eq!(ring_add(&a, &b).unwrap(), elem(c1, &[0, 2]));
        assert!(matches!(ring_add(&u, &a), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn mul_examples() {
        let c0 = RingContext::new(0);
        let y = elem(c0, &[1]);
        assert_eq!(ring_mul(&y, &y).unwrap(), elem(c0, &[0, 1]));
        assert!(ring_mul(&y, &elem(c0, &[0, 1])).unwrap().is_one());
        let c1 = RingContext::new(1);
        let y3 = elem(c1, &[3]);
        assert_eq!(ring_mul(&y3, &y3).unwrap(), elem(c1, &[0, 3]));
        assert!(ring_mul(&y3, &elem(RingContext::new(2), &[0])).is_err());
    }

    #[test]
    fn y_pow_examples() {
        let c1 = RingContext::new(1);
        assert!(y_pow(c1, 0).is_one());
        assert!(y_pow(c1, 9).is_one());
        assert_eq!(y_pow(c1, 7), elem(c1, &[1, 4]));
        assert_eq!(y_pow(c1, 7), y_chain(c1, 7));
    }

    #[test]
    fn y_pow_matches_chain() {
        for s in 0..3 {
            let ctx = RingContext::new(s);
            for e in 0..2 * ctx.y_order() {
                assert_eq!(y_pow(ctx, e), y_chain(ctx, e), "s={s} e={e}");
                let ones = y_pow(ctx, e).coeffs().count_ones();
                assert_eq!(ones, if e % ctx.y_order() < ctx.deg() { 1 } else { 2 });
            }
        }
    }

    #[test]
    fn y_order_is_exact() {
        for s in 0..4 {
            let ctx = RingContext::new(s);
            assert!(y_pow(ctx, ctx.y_order()).is_one());
            assert!(!y_pow(ctx, ctx.y_order() / 3).is_one());
        }
    }

    #[test]
    fn monomial_support_examples() {
        let c1 = RingContext::new(1);
        assert_eq!(monomial_support(c1, 0, 0).as_slice(), &[0]);
        assert_eq!(monomial_support(c1, 5, 1).as_slice(), &[0, 3]);
        assert!(monomial_support_checked(c1, 6, 0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let ctx = RingContext::new(rand::Rng::gen_range(&mut rng, 0..3));
            let u = rand::Rng::gen_range(&mut rng, 0..ctx.deg());
            let p = rand::Rng::gen_range(&mut rng, 0..1000);
            let expect: Vec<usize> = y_pow(ctx, u + p).coeffs().ones().collect();
            assert_eq!(monomial_support(ctx, u, p).as_slice(), expect.as_slice());
        }
    }

    #[test]
    fn zeta_orders() {
        for s in 0..3u32 {
            let ctx = RingContext::new(s);
            assert_eq!(zeta(ctx, s + 1).unwrap(), elem(ctx, &[1]));
            for m in 1..=s + 1 {
                let z = zeta(ctx, m).unwrap();
                assert!(z.pow(3u64.pow(m)).is_one());
                assert!(!z.pow(3u64.pow(m - 1)).is_one());
            }
            assert!(zeta(ctx, s + 2).is_err());
            assert!(zeta(ctx, 0).is_err());
        }
        let c1 = RingContext::new(1);
        let z = zeta(c1, 1).unwrap();
        assert_eq!(z, elem(c1, &[3]));
        assert_eq!(z.pow(2), elem(c1, &[0, 3]));
        let c2 = RingContext::new(2);
        assert_eq!(zeta(c2, 2).unwrap(), elem(c2, &[3]));
        let mut acc = RingElement::one(c2);
        let mut order = 0;
        loop {
            acc = acc.checked_mul(&zeta(c2, 2).unwrap()).unwrap();
            order += 1;
            if acc.is_one() {
                break;
            }
        }
        assert_eq!(order, 9);
    }

    #[test]
    fn horner_examples() {
        let ctx = RingContext::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = random_elem(ctx, &mut rng);
        let z = random_elem(ctx, &mut rng);
        assert_eq!(poly_eval_horner(std::slice::from_ref(&c), &z).unwrap(), c);
        assert_eq!(
            poly_eval_horner(&[RingElement::zero(ctx), RingElement::one(ctx)], &z).unwrap(),
            z
        );
        assert!(poly_eval_horner(&[], &z).unwrap().is_zero());
        let coeffs: Vec<_> = (0..3).map(|_| random_elem(ctx, &mut rng)).collect();
        let naive = coeffs[0]
            .checked_add(&coeffs[1].checked_mul(&z).unwrap())
            .unwrap()
            .checked_add(&coeffs[2].checked_mul(&z).unwrap().checked_mul(&z).unwrap())
            .unwrap();
        assert_eq!(poly_eval_horner(&coeffs, &z).unwrap(), naive);
    }

    #[test]
    fn dft_examples() {
        let ctx = RingContext::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_elem(ctx, &mut rng);
        let mut v = vec![RingElement::zero(ctx); 9];
        v[0] = c.clone();
        assert!(dft_points(&v, 2, false).unwrap().iter().all(|w| *w == c));
        let v = vec![RingElement::one(ctx), RingElement::zero(ctx), RingElement::zero(ctx)];
        assert!(dft_points(&v, 1, false).unwrap().iter().all(RingElement::is_one));
        assert!(dft_points(&v, 2, false).is_err());
        let v27 = vec![RingElement::zero(ctx); 27];
        assert!(dft_points(&v27, 3, false).is_err());
    }

    #[test]
    fn dft_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for s in 0..3u32 {
            let ctx = RingContext::new(s);
            for m in 1..=s + 1 {
                for _ in 0..5 {
                    let v: Vec<_> = (0..3usize.pow(m)).map(|_| random_elem(ctx, &mut rng)).collect();
                    let back = dft_points(&dft_points(&v, m, false).unwrap(), m, true).unwrap();
                    assert_eq!(back, v);
                }
            }
        }
    }

    #[test]
    fn reduction_support_matches_y_pow() {
        let c1 = RingContext::new(1);
        assert_eq!(reduction_support(c1, 0).unwrap().as_slice(), &[0]);
        assert_eq!(reduction_support(c1, 7).unwrap().as_slice(), &[1, 4]);
        assert_eq!(reduction_support(c1, 10).unwrap().as_slice(), &[1]);
        assert!(reduction_support(c1, 11).is_err());
        for s in 0..4 {
            let ctx = RingContext::new(s);
            for j in 0..4 * ctx.third() - 1 {
                let expect: Vec<usize> = y_pow(ctx, j).coeffs().ones().collect();
                assert_eq!(reduction_support(ctx, j).unwrap().as_slice(), expect.as_slice());
            }
        }
    }

    #[test]
    fn ring_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for s in 0..3 {
            let ctx = RingContext::new(s);
            for _ in 0..20 {
                let (u, v, w) = (
                    random_elem(ctx, &mut rng),
                    random_elem(ctx, &mut rng),
                    random_elem(ctx, &mut rng),
                );
                let uv = ring_mul(&u, &v).unwrap();
                assert_eq!(uv, ring_mul(&v, &u).unwrap());
                assert_eq!(ring_mul(&uv, &w).unwrap(), ring_mul(&u, &ring_mul(&v, &w).unwrap()).unwrap());
                assert_eq!(
                    ring_mul(&u, &ring_add(&v, &w).unwrap()).unwrap(),
                    ring_add(&uv, &ring_mul(&u, &w).unwrap()).unwrap()
                );
            }
        }
    }
}
