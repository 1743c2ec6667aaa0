//! The finite quaternion groups double-covering the hypercubic point groups,
//! conjugation stabilizers, quaternion type classification, and double-coset
//! (equivalence class) computations.
//!
//! Unit quaternions with norm-1, norm-2 and norm-4 primitive integer
//! representatives form a group of order 48 under "multiply, then divide out
//! the content". Pairs of such quaternions act on 4-space as rotations; the
//! pair groups of orders 1152 (face-centered symmetry) and 384 (primitive
//! symmetry) live here, together with orbit machinery for equivalence
//! classes of admissible pairs. Group elements keep their sign: the groups
//! are double covers, `q` and `-q` are distinct elements even though they
//! give the same rotation.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::LatticeKind;
use crate::quat::{PrimQuat, Quat};
use crate::rot4::build_rotation;

/// Small integer quaternion used for group elements and orbit states.
/// Inputs are guarded to `|coefficient| <= 2^28`, products with group
/// elements (coefficients at most 2) then stay far below `i64` range.
pub(crate) type Q4 = [i64; 4];

pub(crate) const Q4_COEFF_LIMIT: i64 = 1 << 28;

pub(crate) fn q4_mul(a: &Q4, b: &Q4) -> Q4 {
    let [a1, b1, c1, d1] = *a;
    let [a2, b2, c2, d2] = *b;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

pub(crate) fn q4_conj(a: &Q4) -> Q4 {
    [a[0], -a[1], -a[2], -a[3]]
}

pub(crate) fn q4_norm(a: &Q4) -> i64 {
    a.iter().map(|c| c * c).sum()
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides out the content; the input must be nonzero.
pub(crate) fn q4_reduce(a: &Q4) -> Q4 {
    let g = a.iter().fold(0, |g, &c| gcd64(g, c));
    debug_assert!(g > 0, "zero quaternion in orbit arithmetic");
    if g == 1 {
        *a
    } else {
        [a[0] / g, a[1] / g, a[2] / g, a[3] / g]
    }
}

pub(crate) fn q4_leading_negative(a: &Q4) -> bool {
    for &c in a {
        if c != 0 {
            return c < 0;
        }
    }
    false
}

pub(crate) fn q4_neg(a: &Q4) -> Q4 {
    [-a[0], -a[1], -a[2], -a[3]]
}

pub(crate) fn prim_to_q4(p: &PrimQuat) -> Result<Q4> {
    let mut out = [0i64; 4];
    for (o, c) in out.iter_mut().zip(&p.as_quat().0) {
        let v = i64::try_from(c)
            .map_err(|_| Error::TooLarge(format!("coefficient {c} in orbit arithmetic")))?;
        if v.abs() > Q4_COEFF_LIMIT {
            return Err(Error::TooLarge(format!("coefficient {c} in orbit arithmetic")));
        }
        *o = v;
    }
    Ok(out)
}

pub(crate) fn q4_to_prim(a: &Q4) -> PrimQuat {
    PrimQuat::new(Quat::from_i64(*a)).expect("orbit states are primitive")
}

/// Group element: a unit quaternion stored as its primitive integer
/// representative of norm 1, 2 or 4 (representing `q / |q|`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScaledQuat(Q4);

impl ScaledQuat {
    pub fn new(c: [i64; 4]) -> Result<Self> {
        let q = q4_reduce(&c);
        if q != c {
            return Err(Error::Internal(format!("{c:?} is not primitive")));
        }
        match q4_norm(&q) {
            1 | 2 | 4 => Ok(ScaledQuat(q)),
            n => Err(Error::Internal(format!("group element norm {n} not in {{1,2,4}}"))),
        }
    }

    pub fn identity() -> Self {
        ScaledQuat([1, 0, 0, 0])
    }

    pub fn coeffs(&self) -> [i64; 4] {
        self.0
    }

    pub fn norm_sq(&self) -> i64 {
        q4_norm(&self.0)
    }

    pub fn mul(&self, o: &ScaledQuat) -> ScaledQuat {
        let prod = q4_reduce(&q4_mul(&self.0, &o.0));
        let n = q4_norm(&prod);
        debug_assert!(n == 1 || n == 2 || n == 4, "closure violation: norm {n}");
        ScaledQuat(prod)
    }

    /// Inverse of the represented unit quaternion; same norm class.
    pub fn inv(&self) -> ScaledQuat {
        ScaledQuat(q4_conj(&self.0))
    }

    pub fn to_prim(&self) -> PrimQuat {
        q4_to_prim(&self.0)
    }
}

impl std::fmt::Debug for ScaledQuat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Element of the pair groups: acts on 4-space by `x -> left x conj(right)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuatPair {
    pub left: ScaledQuat,
    pub right: ScaledQuat,
}

impl QuatPair {
    pub fn new(left: ScaledQuat, right: ScaledQuat) -> Result<Self> {
        // Pair-group elements have square norm product: patterns
        // (1,1), (1,4), (4,1), (4,4) and (2,2).
        let (nl, nr) = (left.norm_sq(), right.norm_sq());
        let ok = matches!((nl, nr), (1, 1) | (1, 4) | (4, 1) | (4, 4) | (2, 2));
        if !ok {
            return Err(Error::Internal(format!("pair norm pattern ({nl},{nr}) not admissible")));
        }
        Ok(QuatPair { left, right })
    }

    pub fn identity() -> Self {
        QuatPair { left: ScaledQuat::identity(), right: ScaledQuat::identity() }
    }

    pub fn mul(&self, o: &QuatPair) -> QuatPair {
        QuatPair { left: self.left.mul(&o.left), right: self.right.mul(&o.right) }
    }

    pub fn inv(&self) -> QuatPair {
        QuatPair { left: self.left.inv(), right: self.right.inv() }
    }

    fn key(&self) -> [i64; 8] {
        let l = self.left.coeffs();
        let r = self.right.coeffs();
        [l[0], l[1], l[2], l[3], r[0], r[1], r[2], r[3]]
    }
}

impl std::fmt::Debug for QuatPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}x{:?}", self.left, self.right)
    }
}

/// A finite set of group elements, closed under product and inverse.
#[derive(Clone, Debug)]
pub struct GroupSet<T> {
    elements: Vec<T>,
}

pub trait GroupElem: Clone + Eq + Ord + std::hash::Hash {
    fn gmul(&self, o: &Self) -> Self;
    fn ginv(&self) -> Self;
    fn gid() -> Self;
}

impl GroupElem for ScaledQuat {
    fn gmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ginv(&self) -> Self {
        self.inv()
    }
    fn gid() -> Self {
        ScaledQuat::identity()
    }
}

impl GroupElem for QuatPair {
    fn gmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ginv(&self) -> Self {
        self.inv()
    }
    fn gid() -> Self {
        QuatPair::identity()
    }
}

impl<T: GroupElem> GroupSet<T> {
    /// Closure of the generators under multiplication.
    pub fn generate(gens: &[T]) -> GroupSet<T> {
        let mut seen: HashSet<T> = HashSet::new();
        let mut queue = vec![T::gid()];
        seen.insert(T::gid());
        while let Some(e) = queue.pop() {
            for g in gens {
                let n = e.gmul(g);
                if seen.insert(n.clone()) {
                    queue.push(n);
                }
            }
        }
        let mut elements: Vec<T> = seen.into_iter().collect();
        elements.sort();
        GroupSet { elements }
    }

    pub fn from_elements(mut elements: Vec<T>) -> GroupSet<T> {
        elements.sort();
        elements.dedup();
        GroupSet { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &T) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.elements.iter()
    }

    /// Explicit closure and inverse check; quadratic, for construction-time
    /// verification and tests.
    pub fn verify_group(&self) -> Result<()> {
        for a in &self.elements {
            if !self.contains(&a.ginv()) {
                return Err(Error::Internal("set not closed under inverse".into()));
            }
            for b in &self.elements {
                if !self.contains(&a.gmul(b)) {
                    return Err(Error::Internal("set not closed under product".into()));
                }
            }
        }
        Ok(())
    }
}

/// Everything fixed about the symmetry groups, built once.
pub(crate) struct Groups {
    pub g48: GroupSet<ScaledQuat>,
    pub g24: GroupSet<ScaledQuat>,
    pub gf: GroupSet<QuatPair>,
    pub gp: GroupSet<QuatPair>,
    pub gf_gens: Vec<QuatPair>,
    pub gp_gens: Vec<QuatPair>,
    gp_keys: HashSet<[i64; 8]>,
}

fn sq(c: [i64; 4]) -> ScaledQuat {
    ScaledQuat::new(c).expect("generator literal")
}

fn pair(l: [i64; 4], r: [i64; 4]) -> QuatPair {
    QuatPair::new(sq(l), sq(r)).expect("generator literal")
}

pub(crate) fn groups() -> &'static Groups {
    static CELL: OnceLock<Groups> = OnceLock::new();
    CELL.get_or_init(|| {
        let g48 = GroupSet::generate(&[sq([0, 1, 0, 0]), sq([1, 1, 0, 0]), sq([1, 1, 1, 1])]);
        assert_eq!(g48.order(), 48, "octahedral double cover must have order 48");
        let g24 = GroupSet::generate(&[sq([0, 1, 0, 0]), sq([1, 1, 1, 1])]);
        assert_eq!(g24.order(), 24, "tetrahedral double cover must have order 24");

        let gf_gens = vec![
            pair([0, 1, 0, 0], [1, 0, 0, 0]),
            pair([1, 0, 0, 0], [0, 1, 0, 0]),
            pair([1, 1, 1, 1], [1, 0, 0, 0]),
            pair([1, 0, 0, 0], [1, 1, 1, 1]),
            pair([1, 1, 0, 0], [1, 1, 0, 0]),
        ];
        let gf = GroupSet::generate(&gf_gens);
        assert_eq!(gf.order(), 1152, "face-centered pair group must have order 1152");

        // The primitive-lattice pair group: members of the face-centered
        // group whose rotation matrix is integral.
        let integral: Vec<QuatPair> = gf
            .iter()
            .filter(|e| {
                let p = e.left.to_prim();
                let q = e.right.to_prim();
                let r = build_rotation(&p, &q).expect("pair group elements are admissible");
                r.den_p() == BigInt::from(1)
            })
            .cloned()
            .collect();
        let gp = GroupSet::from_elements(integral);
        assert_eq!(gp.order(), 384, "primitive pair group must have order 384");

        // Deterministic small generating set for the primitive group.
        let mut gp_gens: Vec<QuatPair> = Vec::new();
        let mut have = GroupSet::generate(&gp_gens);
        for e in gp.iter() {
            if have.order() == gp.order() {
                break;
            }
            if !have.contains(e) {
                gp_gens.push(e.clone());
                have = GroupSet::generate(&gp_gens);
            }
        }
        assert_eq!(have.order(), gp.order(), "generator search must rebuild the group");
        let gp_keys = gp.iter().map(|e| e.key()).collect();

        Groups { g48, g24, gf, gp, gf_gens, gp_gens, gp_keys }
    })
}

/// Names for the four symmetry groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupName {
    /// Order-48 double cover of the cubic rotation group.
    Oct48,
    /// Order-24 double cover of the tetrahedral rotation group (even part).
    Tet24,
    /// Order-1152 double cover of the face-centered hypercubic rotations.
    PairF,
    /// Order-384 double cover of the primitive hypercubic rotations.
    PairP,
}

/// Order of the named group (48, 24, 1152, 384).
pub fn group_order(name: GroupName) -> usize {
    let g = groups();
    match name {
        GroupName::Oct48 => g.g48.order(),
        GroupName::Tet24 => g.g24.order(),
        GroupName::PairF => g.gf.order(),
        GroupName::PairP => g.gp.order(),
    }
}

pub fn unit_group_48() -> &'static GroupSet<ScaledQuat> {
    &groups().g48
}

pub fn unit_group_24() -> &'static GroupSet<ScaledQuat> {
    &groups().g24
}

pub fn pair_group(kind: LatticeKind) -> &'static GroupSet<QuatPair> {
    match kind {
        LatticeKind::F => &groups().gf,
        LatticeKind::P => &groups().gp,
    }
}

/// Number of distinct symmetry rotations: 576 for the face-centered lattice,
/// 192 for the primitive one (the pair groups are double covers).
pub fn rotation_count(kind: LatticeKind) -> usize {
    pair_group(kind).order() / 2
}

/// Checks the index-3 coset decomposition of the face-centered pair group
/// over the primitive one with representatives `(1, (1,1,1,1)/2)` and
/// `(1, (1,-1,-1,-1)/2)`.
pub fn verify_coset_decomposition() -> Result<()> {
    let g = groups();
    let s1 = pair([1, 0, 0, 0], [1, 1, 1, 1]);
    let s2 = pair([1, 0, 0, 0], [1, -1, -1, -1]);
    let mut seen: HashSet<QuatPair> = HashSet::new();
    for e in g.gp.iter() {
        seen.insert(e.clone());
    }
    for rep in [s1, s2] {
        for e in g.gp.iter() {
            let x = rep.mul(e);
            if !g.gf.contains(&x) {
                return Err(Error::Internal("coset left the big group".into()));
            }
            if !seen.insert(x) {
                return Err(Error::Internal("cosets overlap".into()));
            }
        }
    }
    if seen.len() != g.gf.order() {
        return Err(Error::Internal(format!(
            "cosets cover {} of {} elements",
            seen.len(),
            g.gf.order()
        )));
    }
    Ok(())
}

/// Conjugation stabilizer `H(q)`: elements `g` of the order-48 group with
/// `q g q^-1` again in the group. Exact test on `conj(q) g q` after content
/// reduction.
pub fn h_of_quat(q: &PrimQuat) -> GroupSet<ScaledQuat> {
    let qc = q.conj();
    let members: Vec<ScaledQuat> = unit_group_48()
        .iter()
        .filter(|g| {
            let t = qc.mul(&g.to_prim()).mul(q);
            let (p, _) = t.make_primitive().expect("conjugate of a unit is nonzero");
            matches!(u32::try_from(p.norm_sq()), Ok(1 | 2 | 4))
        })
        .cloned()
        .collect();
    let h = GroupSet::from_elements(members);
    debug_assert!(h.verify_group().is_ok());
    h
}

/// The six equivalence types of primitive quaternions, distinguished by the
/// order of the conjugation stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    T0,
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl ClassLabel {
    pub fn from_h_order(order: usize) -> Result<ClassLabel> {
        Ok(match order {
            48 => ClassLabel::T0,
            12 => ClassLabel::T1,
            6 => ClassLabel::T2,
            8 => ClassLabel::T3,
            4 => ClassLabel::T4,
            2 => ClassLabel::T5,
            o => return Err(Error::Internal(format!("impossible stabilizer order {o}"))),
        })
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn from_index(i: usize) -> ClassLabel {
        [ClassLabel::T0, ClassLabel::T1, ClassLabel::T2, ClassLabel::T3, ClassLabel::T4, ClassLabel::T5][i]
    }

    /// Shape of the class representative.
    pub fn shape(&self) -> &'static str {
        match self {
            ClassLabel::T0 => "(1,0,0,0)",
            ClassLabel::T1 => "(0,1,1,1)",
            ClassLabel::T2 => "(m,n,n,n)",
            ClassLabel::T3 => "(m,n,0,0)",
            ClassLabel::T4 => "(m,n,n,0)",
            ClassLabel::T5 => "otherwise",
        }
    }

    /// Stabilizer order of the type (Table row constants).
    pub fn h_order(&self) -> usize {
        match self {
            ClassLabel::T0 => 48,
            ClassLabel::T1 => 12,
            ClassLabel::T2 => 6,
            ClassLabel::T3 => 8,
            ClassLabel::T4 => 4,
            ClassLabel::T5 => 2,
        }
    }

    /// Number of equivalent quaternions in a class of this type, counting
    /// both signs: `48 * 48 / |H|`.
    pub fn orbit_size(&self) -> usize {
        48 * 48 / self.h_order()
    }

    /// Distinct 3D CSLs per equivalence class of this type.
    pub fn csls_per_class_3d(&self) -> usize {
        self.orbit_size() / 48
    }
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T{}", self.index())
    }
}

pub fn classify_quat(q: &PrimQuat) -> Result<ClassLabel> {
    ClassLabel::from_h_order(h_of_quat(q).order())
}

/// Conjugation stabilizer of a pair inside the named pair group:
/// `{(r, s) : (p r p^-1, q s q^-1) in group}`.
pub fn h_of_pair(p: &PrimQuat, q: &PrimQuat, kind: LatticeKind) -> GroupSet<QuatPair> {
    let g = groups();
    let (pc, qc) = (p.conj(), q.conj());
    let conj_in = |big: &PrimQuat, bigc: &PrimQuat, s: &ScaledQuat| -> Option<ScaledQuat> {
        let t = big.mul(&s.to_prim()).mul(bigc);
        let (prim, _) = t.make_primitive().expect("conjugate of a unit is nonzero");
        let mut c = [0i64; 4];
        for (o, v) in c.iter_mut().zip(&prim.as_quat().0) {
            *o = i64::try_from(v).ok()?;
        }
        ScaledQuat::new(c).ok()
    };
    let members: Vec<QuatPair> = pair_group(kind)
        .iter()
        .filter(|e| {
            let Some(l) = conj_in(p, &pc, &e.left) else { return false };
            let Some(r) = conj_in(q, &qc, &e.right) else { return false };
            match QuatPair::new(l, r) {
                Ok(x) => match kind {
                    LatticeKind::F => g.gf.contains(&x),
                    LatticeKind::P => g.gp_keys.contains(&x.key()),
                },
                Err(_) => false,
            }
        })
        .cloned()
        .collect();
    GroupSet::from_elements(members)
}

/// Type pair, stabilizer order and CSL multiplicity of one equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClassRecord {
    pub label_p: ClassLabel,
    pub label_q: ClassLabel,
    pub h_order: usize,
    pub g_multiplicity: usize,
}

/// Classifies an admissible pair under face-centered equivalence. The
/// multiplicity satisfies `g * |H_F| = 1152`.
pub fn classify_pair(p: &PrimQuat, q: &PrimQuat) -> Result<PairClassRecord> {
    let label_p = classify_quat(p)?;
    let label_q = classify_quat(q)?;
    let h_order = h_of_pair(p, q, LatticeKind::F).order();
    if 1152 % h_order != 0 {
        return Err(Error::Internal(format!("stabilizer order {h_order} does not divide 1152")));
    }
    Ok(PairClassRecord { label_p, label_q, h_order, g_multiplicity: 1152 / h_order })
}

/// Orbit state: simultaneous-sign-canonical pair of primitive quaternions.
pub(crate) type PairKey = [i64; 8];

pub(crate) fn canonical_pair_key(p: &Q4, q: &Q4) -> PairKey {
    let (p, q) = if q4_leading_negative(p) { (q4_neg(p), q4_neg(q)) } else { (*p, *q) };
    [p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3]]
}

pub(crate) fn pair_key_of(p: &PrimQuat, q: &PrimQuat) -> Result<PairKey> {
    Ok(canonical_pair_key(&prim_to_q4(p)?, &prim_to_q4(q)?))
}

fn key_halves(k: &PairKey) -> (Q4, Q4) {
    ([k[0], k[1], k[2], k[3]], [k[4], k[5], k[6], k[7]])
}

/// Applies one generator move on an orbit state: left or right
/// multiplication of both components, content-reduced and re-canonicalized.
fn apply_move(k: &PairKey, g: &QuatPair, right: bool) -> PairKey {
    let (p, q) = key_halves(k);
    let (gl, gr) = (g.left.coeffs(), g.right.coeffs());
    let (np, nq) = if right {
        (q4_mul(&p, &gl), q4_mul(&q, &gr))
    } else {
        (q4_mul(&gl, &p), q4_mul(&gr, &q))
    };
    canonical_pair_key(&q4_reduce(&np), &q4_reduce(&nq))
}

/// Breadth-first closure of the double-coset orbit of one state.
pub(crate) fn pair_orbit(start: PairKey, gens: &[QuatPair]) -> HashSet<PairKey> {
    let mut seen: HashSet<PairKey> = HashSet::new();
    let mut queue: Vec<PairKey> = vec![start];
    seen.insert(start);
    while let Some(k) = queue.pop() {
        for g in gens {
            for right in [false, true] {
                let n = apply_move(&k, g, right);
                if seen.insert(n) {
                    queue.push(n);
                }
            }
        }
    }
    seen
}

fn gens_for(kind: LatticeKind) -> &'static [QuatPair] {
    match kind {
        LatticeKind::F => &groups().gf_gens,
        LatticeKind::P => &groups().gp_gens,
    }
}

/// One equivalence class of admissible pairs under the two-sided action of
/// a pair group.
#[derive(Clone, Debug)]
pub struct PairClass {
    /// Lexicographically smallest canonical pair of the orbit.
    pub rep: (PrimQuat, PrimQuat),
    /// Number of distinct rotations in the class.
    pub rotations: usize,
    /// Indices into the input list that fell into this class.
    pub members: Vec<usize>,
    pub(crate) rep_key: PairKey,
}

/// Partitions a list of admissible pairs into equivalence classes of the
/// chosen lattice symmetry by explicit orbit closure. Classes are sorted by
/// their canonical representative, so the output is deterministic.
pub fn double_coset_classes(
    pairs: &[(PrimQuat, PrimQuat)],
    kind: LatticeKind,
) -> Result<Vec<PairClass>> {
    let gens = gens_for(kind);
    let mut index_of: HashMap<PairKey, Vec<usize>> = HashMap::new();
    for (i, (p, q)) in pairs.iter().enumerate() {
        index_of.entry(pair_key_of(p, q)?).or_default().push(i);
    }
    let mut assigned: HashSet<PairKey> = HashSet::new();
    let mut classes: Vec<PairClass> = Vec::new();
    for (p, q) in pairs {
        let k = pair_key_of(p, q)?;
        if assigned.contains(&k) {
            continue;
        }
        let orbit = pair_orbit(k, gens);
        let mut members: Vec<usize> = Vec::new();
        let mut rep_key = k;
        for o in &orbit {
            if *o < rep_key {
                rep_key = *o;
            }
            if let Some(ix) = index_of.get(o) {
                members.extend_from_slice(ix);
            }
            assigned.insert(*o);
        }
        members.sort_unstable();
        let (rp, rq) = key_halves(&rep_key);
        classes.push(PairClass {
            rep: (q4_to_prim(&rp), q4_to_prim(&rq)),
            rotations: orbit.len(),
            members,
            rep_key,
        });
    }
    classes.sort_by(|a, b| a.rep_key.cmp(&b.rep_key));
    Ok(classes)
}

/// Representative and size of one primitive-equivalence class inside a
/// face-centered class.
#[derive(Clone, Debug)]
pub struct PSplitClass {
    pub rep: (PrimQuat, PrimQuat),
    pub rotations: usize,
}

/// Decomposes the face-centered equivalence class of `(p, q)` into
/// primitive-lattice double cosets. The count is one of 2, 3, 5, 9.
pub fn f_class_to_p_classes(p: &PrimQuat, q: &PrimQuat) -> Result<Vec<PSplitClass>> {
    let g = groups();
    let start = pair_key_of(p, q)?;
    let f_orbit = pair_orbit(start, &g.gf_gens);
    let mut remaining: Vec<PairKey> = f_orbit.iter().copied().collect();
    remaining.sort_unstable();
    let mut assigned: HashSet<PairKey> = HashSet::new();
    let mut out: Vec<PSplitClass> = Vec::new();
    for k in remaining {
        if assigned.contains(&k) {
            continue;
        }
        let orbit = pair_orbit(k, &g.gp_gens);
        let mut rep_key = k;
        for o in &orbit {
            if *o < rep_key {
                rep_key = *o;
            }
            assigned.insert(*o);
        }
        debug_assert!(orbit.iter().all(|o| f_orbit.contains(o)));
        let (rp, rq) = key_halves(&rep_key);
        out.push(PSplitClass { rep: (q4_to_prim(&rp), q4_to_prim(&rq)), rotations: orbit.len() });
    }
    out.sort_by(|a, b| {
        pair_key_of(&a.rep.0, &a.rep.1).unwrap().cmp(&pair_key_of(&b.rep.0, &b.rep.1).unwrap())
    });
    Ok(out)
}

/// Two-sided orbit `s q s'` of a quaternion under the order-48 unit group,
/// as canonical-sign representatives (each stands for a +/- pair). Walked
/// on the diagonal of the pair-orbit engine, so the same canonicalization
/// applies.
pub fn quat_two_sided_orbit(q: &PrimQuat) -> Result<Vec<PrimQuat>> {
    let start = pair_key_of(q, q)?;
    let gens: Vec<QuatPair> = unit_group_48()
        .iter()
        .map(|s| QuatPair { left: *s, right: *s })
        .collect();
    let orbit = pair_orbit(start, &gens);
    let mut out = Vec::with_capacity(orbit.len());
    for k in orbit {
        let h = [k[0], k[1], k[2], k[3]];
        debug_assert_eq!([k[4], k[5], k[6], k[7]], h);
        out.push(q4_to_prim(&h));
    }
    out.sort_by_key(|p| prim_to_q4(p).expect("orbit coefficients are small"));
    Ok(out)
}

/// Result of merging classes under the pair swap `(p,q) <-> (q,p)`, the
/// action of the improper symmetries.
#[derive(Clone, Debug)]
pub struct MergedClass {
    /// Indices of the input classes joined into this one (1 or 2 entries).
    pub class_indices: Vec<usize>,
    /// True when the class contains the swap of its own pairs, i.e. its
    /// stabilizer contains a conjugate of the basic reflection.
    pub self_swapped: bool,
}

/// Merges proper-rotation equivalence classes with their pair-swapped
/// partners. Classes whose orbit already contains the swapped pairs are
/// flagged instead of merged.
pub fn swap_merge(classes: &[PairClass], kind: LatticeKind) -> Result<Vec<MergedClass>> {
    let gens = gens_for(kind);
    let by_key: HashMap<PairKey, usize> =
        classes.iter().enumerate().map(|(i, c)| (c.rep_key, i)).collect();
    let mut done: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        if done.contains(&i) {
            continue;
        }
        let swapped = pair_key_of(&c.rep.1, &c.rep.0)?;
        let orbit = pair_orbit(swapped, gens);
        let mut min_key = swapped;
        for o in &orbit {
            if *o < min_key {
                min_key = *o;
            }
        }
        if min_key == c.rep_key {
            done.insert(i);
            out.push(MergedClass { class_indices: vec![i], self_swapped: true });
        } else {
            let j = *by_key.get(&min_key).ok_or_else(|| {
                Error::Internal("swapped class not present in the input partition".into())
            })?;
            done.insert(i);
            done.insert(j);
            out.push(MergedClass { class_indices: vec![i.min(j), i.max(j)], self_swapped: false });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(c: [i64; 4]) -> PrimQuat {
        PrimQuat::from_i64(c).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(GroupName::Oct48), 48);
        assert_eq!(group_order(GroupName::Tet24), 24);
        assert_eq!(group_order(GroupName::PairF), 1152);
        assert_eq!(group_order(GroupName::PairP), 384);
    }

    #[test]
    fn rotation_counts() {
        assert_eq!(rotation_count(LatticeKind::F), 576);
        assert_eq!(rotation_count(LatticeKind::P), 192);
    }

    #[test]
    fn unit_groups_are_groups() {
        unit_group_48().verify_group().unwrap();
        unit_group_24().verify_group().unwrap();
    }

    #[test]
    fn pair_group_p_is_group_and_integral() {
        let gp = pair_group(LatticeKind::P);
        gp.verify_group().unwrap();
        for e in gp.iter() {
            let r = build_rotation(&e.left.to_prim(), &e.right.to_prim()).unwrap();
            assert_eq!(r.den_p(), BigInt::from(1));
        }
    }

    #[test]
    fn norm_two_pairs_require_even_inner_product() {
        // The classical description of the integral rotations: norm pattern
        // (1,1) always, (2,2) with even inner product, (4,4) with inner
        // product divisible by 4.
        let gp = pair_group(LatticeKind::P);
        for e in pair_group(LatticeKind::F).iter() {
            let (nl, nr) = (e.left.norm_sq(), e.right.norm_sq());
            let ip: i64 = e
                .left
                .coeffs()
                .iter()
                .zip(e.right.coeffs().iter())
                .map(|(a, b)| a * b)
                .sum();
            let expected = match (nl, nr) {
                (1, 1) => true,
                (2, 2) => ip % 2 == 0,
                (4, 4) => ip % 4 == 0,
                _ => false,
            };
            assert_eq!(gp.contains(e), expected, "element {e:?}");
        }
    }

    #[test]
    fn coset_decomposition_holds() {
        verify_coset_decomposition().unwrap();
    }

    #[test]
    fn stabilizer_orders_per_type() {
        assert_eq!(h_of_quat(&pq([1, 0, 0, 0])).order(), 48);
        assert_eq!(h_of_quat(&pq([1, 1, 0, 0])).order(), 48); // unit class too
        assert_eq!(h_of_quat(&pq([0, 1, 1, 1])).order(), 12);
        assert_eq!(h_of_quat(&pq([3, 1, 1, 1])).order(), 12);
        assert_eq!(h_of_quat(&pq([2, 1, 1, 1])).order(), 6);
        assert_eq!(h_of_quat(&pq([2, 1, 0, 0])).order(), 8);
        assert_eq!(h_of_quat(&pq([2, 2, 1, 0])).order(), 4);
        assert_eq!(h_of_quat(&pq([1, 2, 3, 4])).order(), 2);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_quat(&pq([3, 1, 1, 1])).unwrap(), ClassLabel::T1);
        assert_eq!(classify_quat(&pq([2, 2, 1, 1])).unwrap(), ClassLabel::T3);
        assert_eq!(classify_quat(&pq([1, 2, 3, 4])).unwrap(), ClassLabel::T5);
        // A norm-6 quaternion with Sigma 3 is in the class of (0,1,1,1).
        assert_eq!(classify_quat(&pq([2, 1, 1, 0])).unwrap(), ClassLabel::T1);
    }

    #[test]
    fn pair_stabilizer_orders_f() {
        let one = pq([1, 0, 0, 0]);
        assert_eq!(h_of_pair(&one, &one, LatticeKind::F).order(), 1152);
        assert_eq!(h_of_pair(&one, &pq([2, 1, 1, 1]), LatticeKind::F).order(), 144);
        assert_eq!(h_of_pair(&pq([0, 1, 1, 1]), &pq([0, 1, 1, 1]), LatticeKind::F).order(), 72);
        assert_eq!(h_of_pair(&pq([2, 1, 0, 0]), &pq([2, 1, 0, 0]), LatticeKind::F).order(), 32);
    }

    #[test]
    fn pair_stabilizer_orders_p() {
        let one = pq([1, 0, 0, 0]);
        assert_eq!(h_of_pair(&one, &one, LatticeKind::P).order(), 384);
        assert_eq!(h_of_pair(&one, &pq([1, 1, 1, 1]), LatticeKind::P).order(), 192);
        assert_eq!(h_of_pair(&one, &pq([2, 1, 0, 0]), LatticeKind::P).order(), 64);
        assert_eq!(h_of_pair(&pq([0, 1, 1, 1]), &pq([0, 1, 1, 1]), LatticeKind::P).order(), 24);
        assert_eq!(h_of_pair(&pq([0, 1, 1, 1]), &pq([3, 1, 1, 1]), LatticeKind::P).order(), 12);
    }

    #[test]
    fn classify_pair_multiplicity() {
        let r = classify_pair(&pq([1, 0, 0, 0]), &pq([2, 1, 1, 1])).unwrap();
        assert_eq!((r.label_p, r.label_q), (ClassLabel::T0, ClassLabel::T2));
        assert_eq!(r.h_order, 144);
        assert_eq!(r.g_multiplicity, 8);
    }

    #[test]
    fn identity_orbit_is_all_symmetries() {
        let id = (pq([1, 0, 0, 0]), pq([1, 0, 0, 0]));
        let classes = double_coset_classes(&[id], LatticeKind::F).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].rotations, 576);
        let classes = double_coset_classes(&[(pq([1, 0, 0, 0]), pq([1, 0, 0, 0]))], LatticeKind::P)
            .unwrap();
        assert_eq!(classes[0].rotations, 192);
    }

    #[test]
    fn identity_class_splits_in_two() {
        let split = f_class_to_p_classes(&pq([1, 0, 0, 0]), &pq([1, 0, 0, 0])).unwrap();
        assert_eq!(split.len(), 2);
        let sizes: Vec<usize> = split.iter().map(|c| c.rotations).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 576);
        assert!(sizes.contains(&192));
        assert!(sizes.contains(&384));
    }

    #[test]
    fn sigma3_class_splits_in_two() {
        let v = pq([0, 1, 1, 1]);
        let split = f_class_to_p_classes(&v, &v).unwrap();
        assert_eq!(split.len(), 2);
    }

    #[test]
    fn swap_merge_flags_symmetric_class() {
        let v = pq([0, 1, 1, 1]);
        let classes = double_coset_classes(&[(v.clone(), v.clone())], LatticeKind::F).unwrap();
        let merged = swap_merge(&classes, LatticeKind::F).unwrap();
        assert_eq!(merged.len(), 1);
        assert!(merged[0].self_swapped);
    }
}
