//! Integer quaternion arithmetic: Hamilton products, conjugation, the 4D
//! inner product, primitivity and the Sigma decomposition of the norm.
//!
//! A quaternion `(w, x, y, z)` is identified with the vector
//! `w e0 + x e1 + y e2 + z e3` of `Z^4`. For a primitive quaternion the
//! 2-adic valuation of the norm is at most 2, so the norm splits as
//! `|q|^2 = 2^ell * sigma` with `sigma` odd and `ell in {0, 1, 2}`; that odd
//! part is the Sigma value of the quaternion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Integer quaternion, coefficients in the order `(w, x, y, z)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quat(pub [BigInt; 4]);

/// `|q|^2 = 2^ell * sigma` with `sigma` odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaDecomp {
    pub norm_sq: BigInt,
    pub ell: u32,
    pub sigma: BigInt,
}

impl Quat {
    pub fn new(w: BigInt, x: BigInt, y: BigInt, z: BigInt) -> Self {
        Quat([w, x, y, z])
    }

    pub fn from_i64(c: [i64; 4]) -> Self {
        Quat(c.map(BigInt::from))
    }

    /// The unit quaternions `u0 = 1, u1 = i, u2 = j, u3 = k`.
    pub fn unit(i: usize) -> Self {
        let mut c = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        c[i] = BigInt::from(1);
        Quat(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Hamilton product.
    pub fn mul(&self, o: &Quat) -> Quat {
        let [a1, b1, c1, d1] = &self.0;
        let [a2, b2, c2, d2] = &o.0;
        Quat([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }

    /// Conjugate `(w, -x, -y, -z)`.
    pub fn conj(&self) -> Quat {
        let [w, x, y, z] = &self.0;
        Quat([w.clone(), -x, -y, -z])
    }

    pub fn neg(&self) -> Quat {
        Quat([-&self.0[0], -&self.0[1], -&self.0[2], -&self.0[3]])
    }

    /// Euclidean inner product of the underlying 4-vectors.
    pub fn inner(&self, o: &Quat) -> BigInt {
        self.0.iter().zip(&o.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> BigInt {
        self.inner(self)
    }

    /// Gcd of the coefficients; zero exactly for the zero quaternion.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    /// Divides out the content. Errors on the zero quaternion.
    pub fn make_primitive(&self) -> Result<(PrimQuat, BigInt)> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroQuaternion);
        }
        let q = Quat([
            &self.0[0] / &g,
            &self.0[1] / &g,
            &self.0[2] / &g,
            &self.0[3] / &g,
        ]);
        Ok((PrimQuat(q), g))
    }
}

impl std::fmt::Debug for Quat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Nonzero integer quaternion whose coefficients have gcd 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimQuat(Quat);

impl PrimQuat {
    pub fn new(q: Quat) -> Result<Self> {
        match q.content() {
            g if g.is_zero() => Err(Error::ZeroQuaternion),
            g if g == BigInt::from(1) => Ok(PrimQuat(q)),
            g => Err(Error::Internal(format!("quaternion {q:?} has content {g}"))),
        }
    }

    pub fn from_i64(c: [i64; 4]) -> Result<Self> {
        PrimQuat::new(Quat::from_i64(c))
    }

    pub fn as_quat(&self) -> &Quat {
        &self.0
    }

    pub fn conj(&self) -> PrimQuat {
        PrimQuat(self.0.conj())
    }

    pub fn neg(&self) -> PrimQuat {
        PrimQuat(self.0.neg())
    }

    /// Sign normalization used for dedup keys: first nonzero coefficient
    /// positive. `q` and `-q` describe the same data wherever pairs flip
    /// simultaneously.
    pub fn canonical_sign(&self) -> PrimQuat {
        if self.leading_is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn leading_is_negative(&self) -> bool {
        for c in &self.0 .0 {
            if !c.is_zero() {
                return c.is_negative();
            }
        }
        false
    }

    /// `|q|^2 = 2^ell * sigma`. For a primitive quaternion `ell <= 2` always
    /// holds (a norm divisible by 8 forces all coefficients even).
    pub fn sigma(&self) -> SigmaDecomp {
        let norm_sq = self.0.norm_sq();
        let ell = norm_sq.trailing_zeros().expect("primitive quaternion is nonzero") as u32;
        assert!(ell <= 2, "2-adic valuation {ell} > 2 on primitive quaternion {:?}", self.0);
        let sigma = &norm_sq >> ell;
        SigmaDecomp { norm_sq, ell, sigma }
    }
}

impl std::ops::Deref for PrimQuat {
    type Target = Quat;
    fn deref(&self) -> &Quat {
        &self.0
    }
}

impl std::fmt::Debug for PrimQuat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A pair is admissible when `|p| |q|` is an integer, i.e. `|p|^2 |q|^2` is
/// a perfect square. Tested with integer square roots only.
pub fn is_admissible(p: &PrimQuat, q: &PrimQuat) -> bool {
    pair_scale(p, q).is_some()
}

/// `|pq|` for an admissible pair, `None` otherwise.
pub fn pair_scale(p: &PrimQuat, q: &PrimQuat) -> Option<BigInt> {
    let n = p.norm_sq() * q.norm_sq();
    let s = n.sqrt();
    (&s * &s == n).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(c: [i64; 4]) -> Quat {
        Quat::from_i64(c)
    }

    fn pq(c: [i64; 4]) -> PrimQuat {
        PrimQuat::from_i64(c).unwrap()
    }

    #[test]
    fn unit_table() {
        // ij = k and cyclic relations
        assert_eq!(Quat::unit(1).mul(&Quat::unit(2)), Quat::unit(3));
        assert_eq!(Quat::unit(2).mul(&Quat::unit(3)), Quat::unit(1));
        assert_eq!(Quat::unit(3).mul(&Quat::unit(1)), Quat::unit(2));
        assert_eq!(Quat::unit(1).mul(&Quat::unit(1)), Quat::unit(0).neg());
    }

    #[test]
    fn identity_and_pure_square() {
        let p = q([3, -1, 4, 1]);
        assert_eq!(p.mul(&Quat::unit(0)), p);
        assert_eq!(Quat::unit(0).mul(&p), p);
        let v = q([0, 1, 1, 1]);
        assert_eq!(v.mul(&v), q([-3, 0, 0, 0]));
    }

    #[test]
    fn conjugation() {
        let p = q([1, 2, 3, 4]);
        assert_eq!(p.conj(), q([1, -2, -3, -4]));
        assert_eq!(p.conj().conj(), p);
        assert_eq!(q([5, 0, 0, 0]).conj(), q([5, 0, 0, 0]));
        let n = p.mul(&p.conj());
        assert_eq!(n, q([30, 0, 0, 0]));
    }

    #[test]
    fn inner_product() {
        assert_eq!(Quat::unit(0).inner(&Quat::unit(0)), BigInt::from(1));
        assert_eq!(q([1, 1, 1, 1]).inner(&q([1, -1, 0, 0])), BigInt::from(0));
        let p = q([2, -3, 5, 7]);
        assert_eq!(p.inner(&p), p.norm_sq());
    }

    #[test]
    fn primitivity() {
        let (p, c) = q([2, 4, 6, 8]).make_primitive().unwrap();
        assert_eq!(*p.as_quat(), q([1, 2, 3, 4]));
        assert_eq!(c, BigInt::from(2));
        let (p, c) = q([0, 1, 1, 1]).make_primitive().unwrap();
        assert_eq!(*p.as_quat(), q([0, 1, 1, 1]));
        assert_eq!(c, BigInt::from(1));
        let (p, c) = q([-3, 0, 0, 0]).make_primitive().unwrap();
        assert_eq!(*p.as_quat(), q([-1, 0, 0, 0]));
        assert_eq!(c, BigInt::from(3));
        assert!(q([0, 0, 0, 0]).make_primitive().is_err());
    }

    #[test]
    fn sigma_decomposition() {
        let s = pq([0, 1, 1, 1]).sigma();
        assert_eq!((s.norm_sq, s.ell, s.sigma), (3.into(), 0, 3.into()));
        let s = pq([1, 1, 1, 1]).sigma();
        assert_eq!((s.norm_sq, s.ell, s.sigma), (4.into(), 2, 1.into()));
        let s = pq([1, 1, 0, 0]).sigma();
        assert_eq!((s.norm_sq, s.ell, s.sigma), (2.into(), 1, 1.into()));
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(&pq([1, 0, 0, 0]), &pq([1, 0, 0, 0])));
        assert!(!is_admissible(&pq([1, 0, 0, 0]), &pq([0, 1, 1, 1])));
        assert!(is_admissible(&pq([0, 1, 1, 1]), &pq([3, 1, 1, 1])));
        assert_eq!(
            pair_scale(&pq([0, 1, 1, 1]), &pq([3, 1, 1, 1])),
            Some(BigInt::from(6))
        );
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(pq([0, -1, 1, 1]).canonical_sign(), pq([0, 1, -1, -1]));
        assert_eq!(pq([2, 1, 0, 0]).canonical_sign(), pq([2, 1, 0, 0]));
    }

    #[test]
    fn small_norms_have_valuation_at_most_two() {
        // Direct check of the 2-adic bound on a small exhaustive range.
        let r = 7i64;
        for w in -r..=r {
            for x in -r..=r {
                for y in -r..=r {
                    for z in -r..=r {
                        let c = [w, x, y, z];
                        if c == [0; 4] {
                            continue;
                        }
                        let qq = Quat::from_i64(c);
                        let (p, _) = qq.make_primitive().unwrap();
                        let s = p.sigma(); // panics if valuation > 2
                        assert!(s.ell <= 2);
                    }
                }
            }
        }
    }

    fn arb_quat() -> impl Strategy<Value = Quat> {
        proptest::array::uniform4(-50i64..=50).prop_map(Quat::from_i64)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(p in arb_quat(), q2 in arb_quat()) {
            prop_assert_eq!(p.mul(&q2).norm_sq(), p.norm_sq() * q2.norm_sq());
        }

        #[test]
        fn right_multiplication_is_isometry(p in arb_quat(), q2 in arb_quat(), u in arb_quat()) {
            // <pu, qu> = |u|^2 <p, q>
            let lhs = p.mul(&u).inner(&q2.mul(&u));
            let rhs = u.norm_sq() * p.inner(&q2);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conj_reverses_products(p in arb_quat(), q2 in arb_quat()) {
            prop_assert_eq!(p.mul(&q2).conj(), q2.conj().mul(&p.conj()));
        }
    }
}
