//! Exact rational rotations of 4-space built from admissible quaternion
//! pairs, their denominators, and the closed-form coincidence indices.
//!
//! A pair `(p, q)` acts on a vector `x` (read as a quaternion) by
//! `x -> p x conj(q) / |pq|`. The matrix of the numerator map is an integer
//! matrix `M` with `M M^T = |pq|^2 I` and `det M = |pq|^4`; a `Rot4` stores
//! exactly that pair `(M, |pq|)`. The inverse direction, recovering `(p, q)`
//! from a rational orthogonal matrix, inverts the fixed linear map that
//! sends the 16 products `p_a q_b` to the 16 entries of `M`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::quat::{pair_scale, PrimQuat, Quat};

/// Scaled integer rotation matrix: the true rotation is `m / d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rot4 {
    pub m: IntMatrix,
    pub d: BigInt,
}

/// The integer matrix of `x -> p x conj(q)`, written out entry by entry.
fn pair_matrix(p: &Quat, q: &Quat) -> IntMatrix {
    let [k, l, m, n] = &p.0;
    let [a, b, c, d] = &q.0;
    let rows: [[BigInt; 4]; 4] = [
        [
            a * k + b * l + c * m + d * n,
            -(a * l) + b * k + c * n - d * m,
            -(a * m) - b * n + c * k + d * l,
            -(a * n) + b * m - c * l + d * k,
        ],
        [
            a * l - b * k + c * n - d * m,
            a * k + b * l - c * m - d * n,
            -(a * n) + b * m + c * l - d * k,
            a * m + b * n + c * k + d * l,
        ],
        [
            a * m - b * n - c * k + d * l,
            a * n + b * m + c * l + d * k,
            a * k - b * l + c * m - d * n,
            -(a * l) - b * k + c * n + d * m,
        ],
        [
            a * n + b * m - c * l - d * k,
            -(a * m) + b * n - c * k + d * l,
            a * l + b * k + c * n + d * m,
            a * k - b * l - c * m + d * n,
        ],
    ];
    let flat: Vec<BigInt> = rows.into_iter().flatten().collect();
    IntMatrix::from_fn(4, 4, |i, j| flat[4 * i + j].clone())
}

/// Builds the rotation of an admissible pair; rejects non-admissible input.
pub fn build_rotation(p: &PrimQuat, q: &PrimQuat) -> Result<Rot4> {
    let d = pair_scale(p, q).ok_or_else(|| Error::NotAdmissible {
        norm_product: p.norm_sq() * q.norm_sq(),
    })?;
    Ok(Rot4 { m: pair_matrix(p, q), d })
}

impl Rot4 {
    pub fn identity() -> Rot4 {
        Rot4 { m: IntMatrix::identity(4), d: BigInt::one() }
    }

    /// Checks the scaled-orthogonality invariants and returns a rotation in
    /// reduced scale. Rejects non-orthogonal, non-proper or non-positive
    /// denominators.
    pub fn validate(m: IntMatrix, d: BigInt) -> Result<Rot4> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::NotARotation("matrix is not 4x4".into()));
        }
        if !d.is_positive() {
            return Err(Error::NotARotation("scale must be positive".into()));
        }
        let gram = m.mul(&m.transpose());
        let expect = IntMatrix::identity(4).scale(&(&d * &d));
        if gram != expect {
            return Err(Error::NotARotation("m m^T != d^2 I".into()));
        }
        let det = m.det().expect("square");
        if det != d.pow(4) {
            return Err(Error::NotARotation(format!(
                "det m = {det}, expected d^4 = {} (improper or scaled)",
                d.pow(4)
            )));
        }
        let g = m.content().gcd(&d);
        Ok(Rot4 { m: m.div_exact(&g), d: d / g })
    }

    /// Transpose rotation; equals the inverse since `m m^T = d^2 I`.
    pub fn inverse(&self) -> Rot4 {
        Rot4 { m: self.m.transpose(), d: self.d.clone() }
    }

    /// Scale-reduced form, used for equality of rotations.
    pub fn reduced(&self) -> (IntMatrix, BigInt) {
        let g = self.m.content().gcd(&self.d);
        (self.m.div_exact(&g), &self.d / &g)
    }

    /// Least `k` such that `k m / d` is an integer matrix.
    pub fn den_p(&self) -> BigInt {
        &self.d / self.m.content().gcd(&self.d)
    }

    /// Denominator with respect to the face-centered lattice: the `den_p`
    /// value with at most one factor of 2 removed. The alternative route,
    /// the odd part of the scale `d`, must agree; a mismatch is reported
    /// instead of silently picking one side.
    pub fn den_f(&self) -> Result<BigInt> {
        let dp = self.den_p();
        let via_den_p = if dp.is_even() { &dp / 2 } else { dp.clone() };
        // Second route: 2^-ell * d with ell <= 2 maximal.
        let ell = self.d.trailing_zeros().unwrap_or(0).min(2);
        let via_scale = &self.d >> ell;
        if via_den_p != via_scale {
            return Err(Error::Internal(format!(
                "den_f mismatch: den_p route gives {via_den_p}, scale route gives {via_scale}"
            )));
        }
        Ok(via_den_p)
    }
}

/// Coincidence index of the face-centered lattice: `lcm(Sigma(p), Sigma(q))`.
pub fn sigma_f(p: &PrimQuat, q: &PrimQuat) -> Result<BigInt> {
    if !crate::quat::is_admissible(p, q) {
        return Err(Error::NotAdmissible { norm_product: p.norm_sq() * q.norm_sq() });
    }
    Ok(p.sigma().sigma.lcm(&q.sigma().sigma))
}

/// Coincidence index of the primitive lattice:
/// `lcm(Sigma(p), Sigma(q), den_p(R(p,q)))`.
pub fn sigma_p(p: &PrimQuat, q: &PrimQuat) -> Result<BigInt> {
    let r = build_rotation(p, q)?;
    Ok(p.sigma().sigma.lcm(&q.sigma().sigma).lcm(&r.den_p()))
}

/// The fixed 16x16 map from the products `p_a q_b` to the entries of `m`,
/// inverted once: `(adj, det)` with `T adj = det I`.
fn product_map_inverse() -> &'static (IntMatrix, BigInt) {
    static CELL: OnceLock<(IntMatrix, BigInt)> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut t = IntMatrix::zeros(16, 16);
        for a in 0..4 {
            for b in 0..4 {
                let m = pair_matrix(&Quat::unit(a), &Quat::unit(b));
                for i in 0..4 {
                    for j in 0..4 {
                        t[(4 * i + j, 4 * a + b)] = m[(i, j)].clone();
                    }
                }
            }
        }
        t.inverse_scaled().expect("the product map is invertible")
    })
}

/// Recovers the admissible primitive pair of a rational proper rotation,
/// unique up to a simultaneous sign flip (normalized here so that the first
/// nonzero coefficient of `p` is positive).
pub fn recover_pair(r: &Rot4) -> Result<(PrimQuat, PrimQuat)> {
    let r = Rot4::validate(r.m.clone(), r.d.clone())?;
    let (adj, _det) = product_map_inverse();
    // Solve T w = vec(m); w is proportional to the rank-1 table p_a q_b.
    let mut w = vec![BigInt::zero(); 16];
    for (row, wr) in w.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for col in 0..16 {
            let e = &adj[(row, col)];
            if !e.is_zero() {
                acc += e * &r.m[(col / 4, col % 4)];
            }
        }
        *wr = acc;
    }
    let content = w.iter().fold(BigInt::zero(), |g, e| g.gcd(e));
    if content.is_zero() {
        return Err(Error::NotARotation("zero product table".into()));
    }
    for e in &mut w {
        *e = &*e / &content;
    }
    let at = |a: usize, b: usize| &w[4 * a + b];
    let i0 = (0..4)
        .find(|&a| (0..4).any(|b| !at(a, b).is_zero()))
        .ok_or_else(|| Error::NotARotation("zero product table".into()))?;
    let j0 = (0..4).find(|&b| !at(i0, b).is_zero()).expect("row chosen nonzero");
    let (q, _) = Quat([at(i0, 0).clone(), at(i0, 1).clone(), at(i0, 2).clone(), at(i0, 3).clone()])
        .make_primitive()?;
    let (mut p, _) =
        Quat([at(0, j0).clone(), at(1, j0).clone(), at(2, j0).clone(), at(3, j0).clone()])
            .make_primitive()?;
    if (&p.0[i0] * &q.0[j0]).sign() != at(i0, j0).sign() {
        p = p.neg();
    }
    // Rank-1 check: the table must be exactly the outer product.
    for a in 0..4 {
        for b in 0..4 {
            if at(a, b) != &(&p.0[a] * &q.0[b]) {
                return Err(Error::NotARotation("product table is not rank one".into()));
            }
        }
    }
    let rebuilt = build_rotation(&p, &q)?;
    if rebuilt.reduced() != r.reduced() {
        return Err(Error::NotARotation("pair does not reproduce the rotation".into()));
    }
    if p.leading_is_negative() {
        Ok((p.neg(), q.neg()))
    } else {
        Ok((p, q))
    }
}
