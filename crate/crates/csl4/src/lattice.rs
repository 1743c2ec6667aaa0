//! Exact rational lattices in 4-space and the brute-force coincidence
//! machinery: rotate, intersect, index. This module is the independent
//! oracle against which the closed-form Sigma formulas are verified.
//!
//! A lattice is stored as `(1/den) * column span of basis` with the basis in
//! canonical column HNF and `gcd(content(basis), den) = 1`, so two lattices
//! are equal as point sets exactly when their stored forms are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::rot4::Rot4;

/// The two 4-dimensional hypercubic lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// Primitive hypercubic lattice `Z^4`.
    P,
    /// Face-centered hypercubic lattice `D4`, the index-2 sublattice of
    /// `Z^4` of vectors with even square norm.
    F,
}

impl std::fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeKind::P => write!(f, "P"),
            LatticeKind::F => write!(f, "F"),
        }
    }
}

impl std::str::FromStr for LatticeKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "P" | "p" => Ok(LatticeKind::P),
            "F" | "f" => Ok(LatticeKind::F),
            other => Err(format!("unknown lattice kind {other:?}, expected P or F")),
        }
    }
}

/// Full-rank lattice `(1/den) * span(basis columns)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice4 {
    basis: IntMatrix,
    den: BigInt,
}

impl Lattice4 {
    /// Canonicalizes an arbitrary full-rank generating matrix.
    pub fn new(basis: IntMatrix, den: BigInt) -> Result<Self> {
        if basis.rows() != 4 || basis.cols() != 4 {
            return Err(Error::Dimension(format!(
                "lattice basis must be 4x4, got {}x{}",
                basis.rows(),
                basis.cols()
            )));
        }
        if den.is_zero() {
            return Err(Error::Dimension("lattice denominator must be nonzero".into()));
        }
        let den = den.abs();
        let h = basis.hnf_columns()?;
        let g = h.content().gcd(&den);
        Ok(Lattice4 { basis: h.div_exact(&g), den: den / g })
    }

    pub fn standard(kind: LatticeKind) -> Lattice4 {
        match kind {
            LatticeKind::P => Lattice4 { basis: IntMatrix::identity(4), den: BigInt::one() },
            LatticeKind::F => {
                let b = IntMatrix::from_i64(&[
                    &[1, 1, 0, 0],
                    &[1, -1, 1, 0],
                    &[0, 0, 1, 1],
                    &[0, 0, 0, 1],
                ]);
                Lattice4::new(b, BigInt::one()).expect("fixed basis is full rank")
            }
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// `|det basis|`; the covolume of the lattice is `det / den^4`.
    pub fn basis_det(&self) -> BigInt {
        (0..4).map(|i| self.basis[(i, i)].clone()).product()
    }

    /// Membership test for a rational point `v / vden`: forward substitution
    /// against the triangular basis with exact divisions.
    pub fn contains(&self, v: &[BigInt; 4], vden: &BigInt) -> bool {
        let mut x: Vec<BigInt> = Vec::with_capacity(4);
        for i in 0..4 {
            let mut acc = &v[i] * &self.den;
            for (j, xj) in x.iter().enumerate() {
                acc -= &self.basis[(i, j)] * xj * vden;
            }
            let (q, r) = acc.div_rem(&(&self.basis[(i, i)] * vden));
            if !r.is_zero() {
                return false;
            }
            x.push(q);
        }
        true
    }

    /// Applies a rotation: basis goes to `m * basis`, denominator to `d * den`.
    pub fn rotate(&self, r: &Rot4) -> Lattice4 {
        Lattice4::new(r.m.mul(&self.basis), &r.d * &self.den)
            .expect("rotation preserves full rank")
    }

    /// Exact intersection of two full-rank rational lattices.
    pub fn intersect(&self, other: &Lattice4) -> Lattice4 {
        let (basis, den) = intersect_bases(&self.basis, &self.den, &other.basis, &other.den);
        Lattice4::new(basis, den).expect("intersection of full-rank lattices is full rank")
    }

    /// Integer coordinates of `self` in the basis of `because`, when `self`
    /// is a sublattice of it.
    pub fn coords_in(&self, ambient: &Lattice4) -> Result<IntMatrix> {
        let (adj, det) = ambient
            .basis
            .inverse_scaled()
            .expect("canonical lattice basis is nonsingular");
        // coords = ambient^-1 * self * (ambient.den / self.den)
        //        = adj * basis * ambient.den / (det * self.den)
        let num = adj.mul(&self.basis).scale(&ambient.den);
        let d = &det * &self.den;
        let mut out = IntMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let (q, r) = num[(i, j)].div_rem(&d);
                if !r.is_zero() {
                    return Err(Error::NotASublattice);
                }
                out[(i, j)] = q;
            }
        }
        Ok(out)
    }

    /// Group index `[ambient : self]` for a sublattice.
    pub fn index_in(&self, ambient: &Lattice4) -> Result<BigInt> {
        let c = self.coords_in(ambient)?;
        Ok(c.det().expect("square").abs())
    }

    /// Byte-stable dedup key of the canonical form.
    pub fn dedup_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(64);
        let mut push = |v: &BigInt| {
            let bytes = v.to_signed_bytes_le();
            out.push(bytes.len() as u8);
            out.extend_from_slice(&bytes);
        };
        push(&self.den);
        for i in 0..4 {
            for j in 0..4 {
                push(&self.basis[(i, j)]);
            }
        }
        out
    }
}

/// Kernel-method intersection of `(1/den1) span(b1)` and `(1/den2) span(b2)`
/// for square full-rank `b1`, `b2` of the same dimension. Returns a
/// generating matrix over a common denominator (not yet canonicalized).
pub(crate) fn intersect_bases(
    b1: &IntMatrix,
    den1: &BigInt,
    b2: &IntMatrix,
    den2: &BigInt,
) -> (IntMatrix, BigInt) {
    let n = b1.rows();
    let common = den1.lcm(den2);
    let s1 = b1.scale(&(&common / den1));
    let s2 = b2.scale(&(&common / den2));
    // Solve s1 u = s2 v: kernel of [s1 | -s2]; the image s1 * u spans the
    // intersection over the common denominator.
    let block = s1.hconcat(&s2.neg());
    let ker = block.integer_kernel();
    debug_assert_eq!(ker.cols(), n, "commensurate full-rank lattices intersect in full rank");
    let u = ker.submatrix_rows(0, n);
    (s1.mul(&u), common)
}

/// The coincidence site lattice `L ∩ R L` for the standard lattice of `kind`.
pub fn csl(kind: LatticeKind, r: &Rot4) -> Lattice4 {
    let l = Lattice4::standard(kind);
    l.intersect(&l.rotate(r))
}

/// Brute-force coincidence index: the group index of the CSL in the lattice.
pub fn brute_sigma(kind: LatticeKind, r: &Rot4) -> BigInt {
    csl(kind, r)
        .index_in(&Lattice4::standard(kind))
        .expect("CSL is a sublattice by construction")
}

/// Elementary divisors of the quotient `L / CSL(R)`; their product is Sigma.
pub fn quotient_invariants(kind: LatticeKind, r: &Rot4) -> Vec<BigInt> {
    let l = Lattice4::standard(kind);
    let c = csl(kind, r).coords_in(&l).expect("CSL is a sublattice");
    let snf = c.snf().expect("square");
    (0..4).map(|i| snf.diag[(i, i)].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::PrimQuat;
    use crate::rot4::build_rotation;

    fn pq(c: [i64; 4]) -> PrimQuat {
        PrimQuat::from_i64(c).unwrap()
    }

    #[test]
    fn standard_lattices() {
        let p = Lattice4::standard(LatticeKind::P);
        assert_eq!(p.basis(), &IntMatrix::identity(4));
        assert_eq!(p.basis_det(), BigInt::one());

        let f = Lattice4::standard(LatticeKind::F);
        assert_eq!(f.basis_det(), BigInt::from(2));
        // Every basis vector of F has even square norm.
        for j in 0..4 {
            let n: BigInt = (0..4).map(|i| &f.basis()[(i, j)] * &f.basis()[(i, j)]).sum();
            assert!(n.is_even());
        }
    }

    #[test]
    fn f_membership() {
        let f = Lattice4::standard(LatticeKind::F);
        let one = BigInt::one();
        let v = [1.into(), 1.into(), 0.into(), 0.into()];
        assert!(f.contains(&v, &one));
        let w = [1.into(), 0.into(), 0.into(), 0.into()];
        assert!(!f.contains(&w, &one));
    }

    #[test]
    fn rotation_by_identity_fixes_lattice() {
        let r = Rot4::identity();
        for kind in [LatticeKind::P, LatticeKind::F] {
            let l = Lattice4::standard(kind);
            assert_eq!(l.rotate(&r), l);
        }
    }

    #[test]
    fn symmetry_of_f_fixes_f() {
        // (1,0,0,0),(1,1,1,1) is a D4 symmetry (den_f = 1) but not a Z4 one.
        let r = build_rotation(&pq([1, 0, 0, 0]), &pq([1, 1, 1, 1])).unwrap();
        let f = Lattice4::standard(LatticeKind::F);
        assert_eq!(f.rotate(&r), f);
        let p = Lattice4::standard(LatticeKind::P);
        assert_ne!(p.rotate(&r), p);
    }

    #[test]
    fn intersections() {
        let p = Lattice4::standard(LatticeKind::P);
        let f = Lattice4::standard(LatticeKind::F);
        assert_eq!(p.intersect(&p), p);
        assert_eq!(p.intersect(&f), f);
        assert_eq!(f.intersect(&p), f);

        let three = Lattice4::new(IntMatrix::identity(4).scale(&BigInt::from(3)), BigInt::one())
            .unwrap();
        assert_eq!(p.intersect(&three), three);
    }

    #[test]
    fn indices() {
        let p = Lattice4::standard(LatticeKind::P);
        let f = Lattice4::standard(LatticeKind::F);
        assert_eq!(f.index_in(&p).unwrap(), BigInt::from(2));
        assert_eq!(p.index_in(&p).unwrap(), BigInt::one());
        let two = Lattice4::new(IntMatrix::identity(4).scale(&BigInt::from(2)), BigInt::one())
            .unwrap();
        assert_eq!(two.index_in(&p).unwrap(), BigInt::from(16));
        assert!(p.index_in(&two).is_err());
    }

    #[test]
    fn csl_examples() {
        assert_eq!(brute_sigma(LatticeKind::F, &Rot4::identity()), BigInt::one());
        assert_eq!(brute_sigma(LatticeKind::P, &Rot4::identity()), BigInt::one());

        let r = build_rotation(&pq([0, 1, 1, 1]), &pq([0, 1, 1, 1])).unwrap();
        assert_eq!(brute_sigma(LatticeKind::F, &r), BigInt::from(3));

        let r = build_rotation(&pq([1, 0, 0, 0]), &pq([1, 1, 1, 1])).unwrap();
        assert_eq!(brute_sigma(LatticeKind::P, &r), BigInt::from(2));

        let r = build_rotation(&pq([2, 1, 1, 1]), &pq([2, 1, 1, 1])).unwrap();
        assert_eq!(brute_sigma(LatticeKind::F, &r), BigInt::from(7));

        let r = build_rotation(&pq([0, 1, 1, 1]), &pq([3, 1, 1, 1])).unwrap();
        assert_eq!(brute_sigma(LatticeKind::P, &r), BigInt::from(6));
    }

    #[test]
    fn sigma_equals_sigma_of_inverse() {
        for (pc, qc) in [([2, 1, 0, 0], [2, 1, 0, 0]), ([0, 1, 1, 1], [3, 1, 1, 1]), ([2, 1, 1, 1], [2, 1, 1, 1])]
        {
            let r = build_rotation(&pq(pc), &pq(qc)).unwrap();
            let rinv = r.inverse();
            for kind in [LatticeKind::P, LatticeKind::F] {
                assert_eq!(brute_sigma(kind, &r), brute_sigma(kind, &rinv));
            }
        }
    }

    #[test]
    fn quotient_invariant_examples() {
        let id = quotient_invariants(LatticeKind::P, &Rot4::identity());
        assert_eq!(id, vec![BigInt::one(); 4]);

        let r = build_rotation(&pq([0, 1, 1, 1]), &pq([0, 1, 1, 1])).unwrap();
        for kind in [LatticeKind::P, LatticeKind::F] {
            let inv = quotient_invariants(kind, &r);
            let prod: BigInt = inv.iter().product();
            assert_eq!(prod, brute_sigma(kind, &r));
            // den(R) L is inside the CSL, so every divisor divides den(R).
            let den = match kind {
                LatticeKind::P => r.den_p(),
                LatticeKind::F => r.den_f().unwrap(),
            };
            for e in &inv {
                assert!((&den % e).is_zero(), "divisor {e} does not divide den {den}");
            }
        }
    }

    #[test]
    fn sandwich_bounds() {
        for (pc, qc) in [([2, 1, 0, 0], [2, 1, 0, 0]), ([0, 1, 1, 1], [3, 1, 1, 1]), ([1, 0, 0, 0], [1, 1, 1, 1])]
        {
            let r = build_rotation(&pq(pc), &pq(qc)).unwrap();
            let checks = [
                (LatticeKind::P, r.den_p()),
                (LatticeKind::F, r.den_f().unwrap()),
            ];
            for (kind, den) in checks {
                let sigma = brute_sigma(kind, &r);
                assert!(den <= sigma);
                assert!(sigma <= den.pow(4));
            }
        }
    }
}
