//! Exhaustive enumeration of primitive quaternions and admissible pairs,
//! distinct-CSL catalogs with canonical dedup, and the brute-force
//! verification drivers for the index theorems and the counting tables.
//!
//! Completeness of the quaternion generation is checked against the
//! classical four-square count (8 times the sum of divisors not divisible
//! by 4) with a Moebius pass for primitivity, an oracle entirely
//! independent of the search loop.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::counting::{self, admissible_sigma_pairs, tabefb_split, FactoredSigma};
use crate::error::{Error, Result};
use crate::lattice::{brute_sigma, csl, Lattice4, LatticeKind};
use crate::quat::{PrimQuat, Quat};
use crate::rot4::{build_rotation, sigma_f, sigma_p};
use crate::symgroup::{
    classify_pair, double_coset_classes, f_class_to_p_classes, ClassLabel, PairClassRecord,
};

/// Complete list of primitive quaternions of one norm, canonical signs.
#[derive(Clone, Debug)]
pub struct NormClass {
    pub norm: u64,
    pub quats: Vec<PrimQuat>,
}

/// Total number of integer 4-vectors of square norm `n` (Jacobi).
pub fn four_square_count(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut s = 0;
    for d in 1..=n {
        if n % d == 0 && d % 4 != 0 {
            s += d;
        }
    }
    8 * s
}

/// Number of primitive 4-vectors of square norm `n`, by Moebius inversion
/// over square divisors.
pub fn four_square_primitive_count(n: u64) -> u64 {
    fn moebius(mut n: u64) -> i64 {
        let mut m = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut total = 0i64;
    let mut d = 1u64;
    while d * d <= n {
        if n % (d * d) == 0 {
            total += moebius(d) * four_square_count(n / (d * d)) as i64;
        }
        d += 1;
    }
    u64::try_from(total).expect("primitive count is non-negative")
}

/// Exhaustive list of primitive quaternions with `|q|^2 = n`, one sign
/// representative each; completeness asserted against the four-square
/// oracle.
pub fn primitive_quats_of_norm(n: u64) -> Result<NormClass> {
    if n == 0 {
        return Err(Error::Dimension("norm must be positive".into()));
    }
    let n_i = n as i64;
    let r = n_i.isqrt();
    let mut quats = Vec::new();
    for w in -r..=r {
        let ws = w * w;
        if ws > n_i {
            continue;
        }
        for x in -r..=r {
            let xs = ws + x * x;
            if xs > n_i {
                continue;
            }
            for y in -r..=r {
                let ys = xs + y * y;
                if ys > n_i {
                    continue;
                }
                let rest = n_i - ys;
                let z0 = rest.isqrt();
                if z0 * z0 != rest {
                    continue;
                }
                let z_choices: &[i64] = if z0 == 0 { &[0] } else { &[z0, -z0] };
                for &z in z_choices {
                    let c = [w, x, y, z];
                    if c.iter().fold(0i64, |g, &v| num_integer::gcd(g, v)) != 1 {
                        continue;
                    }
                    // Canonical sign: first nonzero coefficient positive.
                    if *c.iter().find(|&&v| v != 0).expect("nonzero") < 0 {
                        continue;
                    }
                    quats.push(PrimQuat::new(Quat::from_i64(c)).expect("gcd checked"));
                }
            }
        }
    }
    quats.sort_by_key(|q| {
        let c = &q.as_quat().0;
        [0, 1, 2, 3].map(|i| i64::try_from(&c[i]).unwrap())
    });
    let expect = four_square_primitive_count(n);
    if 2 * quats.len() as u64 != expect {
        return Err(Error::Internal(format!(
            "norm {n}: found {} canonical quaternions, oracle expects {} signed",
            quats.len(),
            expect
        )));
    }
    Ok(NormClass { norm: n, quats })
}

/// All signed primitive quaternions with odd part of the norm equal to
/// `sigma` (norms `sigma`, `2 sigma`, `4 sigma`). Empty for even input.
pub fn quats_with_sigma_value(sigma: u64) -> Result<Vec<PrimQuat>> {
    if sigma % 2 == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for norm in [sigma, 2 * sigma, 4 * sigma] {
        for q in primitive_quats_of_norm(norm)?.quats {
            out.push(q.neg());
            out.push(q);
        }
    }
    let expect = counting::quats_with_sigma(sigma)?;
    if out.len() as u64 != expect {
        return Err(Error::Internal(format!(
            "sigma {sigma}: {} signed quaternions, counting formula gives {expect}",
            out.len()
        )));
    }
    Ok(out)
}

/// All admissible pairs with `lcm(Sigma(p), Sigma(q)) = sigma`, one
/// representative per rotation: the left member carries the canonical
/// sign, the right member runs over both signs.
pub fn admissible_pairs_for_sigma_f(sigma: u64) -> Result<Vec<(PrimQuat, PrimQuat)>> {
    if sigma % 2 == 0 {
        return Ok(Vec::new());
    }
    let f = FactoredSigma::new(sigma)?;
    let mut pairs = Vec::new();
    for (sp, sq) in admissible_sigma_pairs(&f) {
        // Norm exponent parity must match for |p|^2 |q|^2 to be square.
        for i in 0..3u32 {
            let p_list = primitive_quats_of_norm(sp << i)?;
            for j in 0..3u32 {
                if (i + j) % 2 != 0 {
                    continue;
                }
                let q_list = primitive_quats_of_norm(sq << j)?;
                for p in &p_list.quats {
                    for q in &q_list.quats {
                        pairs.push((p.clone(), q.clone()));
                        pairs.push((p.clone(), q.neg()));
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// Enumeration budget for the catalog builders.
#[derive(Clone, Copy, Debug)]
pub struct CatalogBudget {
    pub max_sigma: u64,
}

impl Default for CatalogBudget {
    fn default() -> Self {
        CatalogBudget { max_sigma: 15 }
    }
}

/// One equivalence class in a catalog.
#[derive(Clone, Debug)]
pub struct CatalogClass {
    pub rep: (PrimQuat, PrimQuat),
    pub record: PairClassRecord,
    /// Rotations in the class (for the face-centered group this is
    /// `576 * g`).
    pub rotations: usize,
    /// Distinct CSLs realized by the class members.
    pub distinct_csls: u64,
}

/// Every distinct CSL at one Sigma, with the class partition.
#[derive(Clone, Debug)]
pub struct CslCatalog {
    pub sigma: u64,
    pub lattice: LatticeKind,
    pub csls: Vec<Lattice4>,
    pub classes: Vec<CatalogClass>,
    /// True when two distinct classes share a CSL (measured, not assumed).
    pub class_csl_overlap: bool,
}

/// Builds the complete CSL catalog at an odd Sigma: every admissible pair,
/// every intersection lattice, canonical dedup, and the equivalence class
/// partition of the chosen lattice symmetry.
///
/// For the primitive lattice only the rotations with odd denominator are
/// cataloged (those are the ones with `Sigma_P = sigma`).
pub fn build_catalog(
    sigma: u64,
    lattice: LatticeKind,
    budget: &CatalogBudget,
) -> Result<CslCatalog> {
    if sigma > budget.max_sigma {
        return Err(Error::BudgetExceeded { sigma, budget: budget.max_sigma });
    }
    let all_pairs = admissible_pairs_for_sigma_f(sigma)?;
    let sigma_big = BigInt::from(sigma);
    let pairs: Vec<(PrimQuat, PrimQuat)> = match lattice {
        LatticeKind::F => all_pairs,
        LatticeKind::P => all_pairs
            .into_iter()
            .filter(|(p, q)| {
                let r = build_rotation(p, q).expect("generated pairs are admissible");
                r.den_p().is_odd()
            })
            .collect(),
    };
    // CSL of every rotation, with the index invariant checked.
    let keyed: Vec<(Vec<u8>, Lattice4)> = pairs
        .par_iter()
        .map(|(p, q)| {
            let r = build_rotation(p, q).expect("generated pairs are admissible");
            let l = csl(lattice, &r);
            let idx = l
                .index_in(&Lattice4::standard(lattice))
                .expect("CSL is a sublattice by construction");
            if idx != sigma_big {
                return Err(Error::Internal(format!(
                    "catalog index mismatch at sigma {sigma}: pair {p:?},{q:?} gives {idx}"
                )));
            }
            Ok((l.dedup_key(), l))
        })
        .collect::<Result<_>>()?;
    let mut csl_by_key: HashMap<Vec<u8>, Lattice4> = HashMap::new();
    let mut key_of_pair: Vec<Vec<u8>> = Vec::with_capacity(keyed.len());
    for (k, l) in keyed {
        key_of_pair.push(k.clone());
        csl_by_key.entry(k).or_insert(l);
    }
    let classes_raw = double_coset_classes(&pairs, lattice)?;
    let group_order = crate::symgroup::pair_group(lattice).order();
    let rot_count = crate::symgroup::rotation_count(lattice);
    let mut classes = Vec::with_capacity(classes_raw.len());
    let mut seen_keys: HashSet<&[u8]> = HashSet::new();
    let mut overlap = false;
    for c in &classes_raw {
        let record = classify_pair(&c.rep.0, &c.rep.1)?;
        // Orbit size must be the group-theoretic prediction from the
        // stabilizer.
        let h = crate::symgroup::h_of_pair(&c.rep.0, &c.rep.1, lattice).order();
        if c.rotations * h != group_order * rot_count {
            return Err(Error::Internal(format!(
                "orbit size {} times stabilizer {h} is not {} at sigma {sigma}",
                c.rotations,
                group_order * rot_count
            )));
        }
        let mut class_keys: HashSet<&[u8]> = HashSet::new();
        for &m in &c.members {
            class_keys.insert(&key_of_pair[m]);
        }
        for k in &class_keys {
            if !seen_keys.insert(k) {
                overlap = true;
            }
        }
        classes.push(CatalogClass {
            rep: c.rep.clone(),
            record,
            rotations: c.rotations,
            distinct_csls: class_keys.len() as u64,
        });
    }
    let mut csls: Vec<Lattice4> = csl_by_key.into_values().collect();
    csls.sort_by_key(|l| l.dedup_key());
    Ok(CslCatalog { sigma, lattice, csls, classes, class_csl_overlap: overlap })
}

/// Outcome of the exhaustive index-theorem verification.
#[derive(Clone, Debug, Default)]
pub struct TheoremReport {
    pub max_normsq: u64,
    pub rotations_checked: u64,
    pub failures: Vec<String>,
}

/// Checks, for every admissible pair with both norms at most `max_normsq`
/// (each rotation exactly once):
///
/// * brute-force face-centered index equals `lcm(Sigma(p), Sigma(q))`,
/// * brute-force primitive index equals `lcm(Sigma(p), Sigma(q), den_p)`,
/// * the two denominator formulas agree,
/// * the primitive index is even exactly when the denominator is even,
/// * `den <= Sigma <= den^4` on both lattices.
///
/// All checks are exact; any mismatch is reported with its pair.
pub fn verify_theorems(max_normsq: u64) -> Result<TheoremReport> {
    let mut by_norm: Vec<NormClass> = Vec::new();
    for n in 1..=max_normsq {
        by_norm.push(primitive_quats_of_norm(n)?);
    }
    fn squarefree_part(mut n: u64) -> u64 {
        let mut d = 2;
        let mut out = 1;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e % 2 == 1 {
                out *= d;
            }
            d += 1;
        }
        out * n
    }
    let sqfree: Vec<u64> = (1..=max_normsq).map(squarefree_part).collect();
    let jobs: Vec<(usize, usize)> = (0..by_norm.len())
        .flat_map(|a| (0..by_norm.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| sqfree[a] == sqfree[b])
        .collect();
    let results: Vec<(u64, Vec<String>)> = jobs
        .par_iter()
        .map(|&(a, b)| {
            let mut checked = 0u64;
            let mut failures = Vec::new();
            for p in &by_norm[a].quats {
                for q0 in &by_norm[b].quats {
                    for q in [q0.clone(), q0.neg()] {
                        checked += 1;
                        if let Err(e) = check_one_rotation(p, &q) {
                            failures.push(format!("pair {p:?},{q:?}: {e}"));
                        }
                    }
                }
            }
            (checked, failures)
        })
        .collect();
    let mut report = TheoremReport { max_normsq, ..Default::default() };
    for (c, mut f) in results {
        report.rotations_checked += c;
        report.failures.append(&mut f);
    }
    report.failures.sort();
    Ok(report)
}

fn check_one_rotation(p: &PrimQuat, q: &PrimQuat) -> Result<()> {
    let r = build_rotation(p, q)?;
    let den_p = r.den_p();
    let den_f = r.den_f()?; // internally checks both formulas agree
    let sf_formula = sigma_f(p, q)?;
    let sp_formula = sigma_p(p, q)?;
    let sf_brute = brute_sigma(LatticeKind::F, &r);
    if sf_brute != sf_formula {
        return Err(Error::Internal(format!(
            "face-centered index: brute {sf_brute}, formula {sf_formula}"
        )));
    }
    let sp_brute = brute_sigma(LatticeKind::P, &r);
    if sp_brute != sp_formula {
        return Err(Error::Internal(format!(
            "primitive index: brute {sp_brute}, formula {sp_formula}"
        )));
    }
    if sp_brute.is_even() != den_p.is_even() {
        return Err(Error::Internal("index parity differs from denominator parity".into()));
    }
    if sp_brute != sf_brute && sp_brute != &sf_brute * 2u8 {
        return Err(Error::Internal("primitive index is neither Sigma_F nor 2 Sigma_F".into()));
    }
    for (den, sig) in [(&den_f, &sf_brute), (&den_p, &sp_brute)] {
        if den > sig || *sig > den.pow(4) {
            return Err(Error::Internal(format!("sandwich violated: den {den}, sigma {sig}")));
        }
    }
    Ok(())
}

/// One face-centered class with its primitive-lattice decomposition.
#[derive(Clone, Debug)]
pub struct SplitClassReport {
    pub f_rep: (PrimQuat, PrimQuat),
    pub labels: (ClassLabel, ClassLabel),
    pub expected_parts: u64,
    /// Per primitive class: representative, rotation count, Sigma_P.
    pub parts: Vec<((PrimQuat, PrimQuat), usize, BigInt)>,
}

/// Splitting report at one odd Sigma.
#[derive(Clone, Debug)]
pub struct SplitReport {
    pub sigma: u64,
    pub classes: Vec<SplitClassReport>,
    pub failures: Vec<String>,
}

/// Decomposes every face-centered class at `sigma` into primitive classes
/// and compares both the part counts (against the published splitting
/// table) and the per-index class totals (against the inequivalent-pair
/// table columns).
pub fn verify_splitting(sigma: u64, budget: &CatalogBudget) -> Result<SplitReport> {
    let catalog = build_catalog(sigma, LatticeKind::F, budget)?;
    verify_splitting_of(&catalog)
}

/// As `verify_splitting`, on an already-built face-centered catalog.
pub fn verify_splitting_of(catalog: &CslCatalog) -> Result<SplitReport> {
    let sigma = catalog.sigma;
    let mut failures = Vec::new();
    let mut classes = Vec::new();
    let mut odd_total = 0u64;
    let mut even_total = 0u64;
    for class in &catalog.classes {
        let labels = (class.record.label_p, class.record.label_q);
        let expected = tabefb_split(labels.0, labels.1);
        let split = f_class_to_p_classes(&class.rep.0, &class.rep.1)?;
        if split.len() as u64 != expected {
            failures.push(format!(
                "class {:?},{:?} of type ({},{}) splits into {} parts, table says {expected}",
                class.rep.0,
                class.rep.1,
                labels.0,
                labels.1,
                split.len()
            ));
        }
        let mut parts = Vec::new();
        for part in split {
            let sp = sigma_p(&part.rep.0, &part.rep.1)?;
            if sp == BigInt::from(sigma) {
                odd_total += 1;
            } else if sp == BigInt::from(2 * sigma) {
                even_total += 1;
            } else {
                failures.push(format!(
                    "part {:?},{:?} has Sigma_P {sp}, expected {sigma} or {}",
                    part.rep.0,
                    part.rep.1,
                    2 * sigma
                ));
            }
            parts.push((part.rep, part.rotations, sp));
        }
        classes.push(SplitClassReport { f_rep: class.rep.clone(), labels, expected_parts: expected, parts });
    }
    let expect_odd = counting::p_class_total(sigma)?;
    let expect_even = counting::p_class_total(2 * sigma)?;
    if odd_total != expect_odd {
        failures.push(format!(
            "sigma {sigma}: {odd_total} odd-index classes, table column gives {expect_odd}"
        ));
    }
    if even_total != expect_even {
        failures.push(format!(
            "sigma {sigma}: {even_total} even-index classes, table column gives {expect_even}"
        ));
    }
    failures.sort();
    Ok(SplitReport { sigma, classes, failures })
}
