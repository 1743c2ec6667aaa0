//! Command line front end: exact Sigma values, CSL bases, counting tables,
//! the full verification suite, and a cached class enumerator.
//!
//! Exit codes are a stable contract: 0 success, 1 verification failure,
//! 2 parse error, 3 non-admissible input, 4 enumeration budget exceeded.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use csl4::counting;
use csl4::enumerate::{self, CatalogBudget};
use csl4::lattice::{self, LatticeKind};
use csl4::quat::{PrimQuat, Quat};
use csl4::rot4;
use csl4::symgroup::{self, ClassLabel};
use csl4::{Error, IntMatrix, Lattice4};

const SCHEMA_VERSION: u32 = 1;

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_ADMISSIBLE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "csl4", version, about = "Coincidence site lattices of the 4D hypercubic lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMode {
    Total,
    Classes,
}

#[derive(Args)]
struct PairArgs {
    /// Left quaternion, four comma separated integers, e.g. 0,1,1,1
    #[arg(long, value_name = "W,X,Y,Z")]
    p: String,
    /// Right quaternion, four comma separated integers
    #[arg(long, value_name = "W,X,Y,Z")]
    q: String,
}

#[derive(Subcommand)]
enum Command {
    /// Coincidence indices and denominators of one admissible pair.
    Sigma {
        #[command(flatten)]
        pair: PairArgs,
        /// Restrict the text report to one lattice.
        #[arg(long)]
        lattice: Option<LatticeArg>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Canonical basis of the coincidence site lattice of one pair.
    Csl {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "f")]
        lattice: LatticeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Closed-form (and brute-force) CSL counts at one Sigma.
    Count {
        #[arg(long)]
        sigma: u64,
        #[arg(long, value_enum, default_value = "f")]
        lattice: LatticeArg,
        #[arg(long, value_enum, default_value = "total")]
        mode: CountMode,
        /// Largest Sigma the brute-force confirmation may enumerate.
        #[arg(long, default_value_t = 15)]
        max_budget: u64,
    },
    /// Run the verification suite: index theorems, counting tables,
    /// splitting tables and the 3D oracle.
    Verify {
        /// Check the index theorems on all pairs with norms up to this.
        #[arg(long, default_value_t = 16)]
        max_normsq: u64,
        /// Sigma values for catalog, class and splitting verification.
        #[arg(long, value_delimiter = ',', default_value = "1,3,5,7")]
        sigma_list: Vec<u64>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Stream every equivalence class at one Sigma, with a class cache.
    Enumerate {
        #[arg(long)]
        sigma: u64,
        #[arg(long, value_enum, default_value = "f")]
        lattice: LatticeArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Cache directory (falls back to CSL4_CACHE_DIR, then .cslcache).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 15)]
        max_budget: u64,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    P,
    F,
}

impl From<LatticeArg> for LatticeKind {
    fn from(v: LatticeArg) -> LatticeKind {
        match v {
            LatticeArg::P => LatticeKind::P,
            LatticeArg::F => LatticeKind::F,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotAdmissible { .. } => ExitCode::from(EXIT_NOT_ADMISSIBLE),
                Error::BudgetExceeded { .. } => ExitCode::from(EXIT_BUDGET),
                Error::ZeroQuaternion | Error::Dimension(_) | Error::TooLarge(_) => {
                    ExitCode::from(EXIT_PARSE)
                }
                _ => ExitCode::from(EXIT_VERIFY_FAIL),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sigma { pair, lattice, format } => cmd_sigma(&pair, lattice, format),
        Command::Csl { pair, lattice, format } => cmd_csl(&pair, lattice.into(), format),
        Command::Count { sigma, lattice, mode, max_budget } => {
            cmd_count(sigma, lattice.into(), mode, max_budget)
        }
        Command::Verify { max_normsq, sigma_list, jobs } => {
            set_jobs(jobs);
            cmd_verify(max_normsq, &sigma_list)
        }
        Command::Enumerate { sigma, lattice, format, cache_dir, max_budget, jobs } => {
            set_jobs(jobs);
            cmd_enumerate(sigma, lattice.into(), format, cache_dir, max_budget)
        }
    }
}

fn set_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn parse_quat(s: &str) -> Result<PrimQuat, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Dimension(format!(
            "expected four comma separated integers, got {s:?}"
        )));
    }
    let mut c = Vec::with_capacity(4);
    for p in parts {
        let v: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Dimension(format!("cannot parse integer {p:?}")))?;
        c.push(v);
    }
    let q = Quat::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone());
    let (prim, _) = q.make_primitive()?;
    Ok(prim)
}

fn rational_str(num: &BigInt, den: &BigInt) -> String {
    let g = num_integer::Integer::gcd(num, den);
    let (n, d) = (num / &g, den / &g);
    if d == BigInt::from(1) {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

#[derive(Serialize)]
struct SigmaOut {
    schema_version: u32,
    p: Vec<String>,
    q: Vec<String>,
    pq_scale: String,
    den_p: String,
    den_f: String,
    sigma_f: String,
    sigma_p: String,
    rotation_den: String,
    rotation: Vec<Vec<String>>,
}

fn cmd_sigma(pair: &PairArgs, lattice: Option<LatticeArg>, format: Format) -> Result<ExitCode, Error> {
    let p = parse_quat(&pair.p)?;
    let q = parse_quat(&pair.q)?;
    let r = rot4::build_rotation(&p, &q)?;
    let sf = rot4::sigma_f(&p, &q)?;
    let sp = rot4::sigma_p(&p, &q)?;
    let (den_p, den_f) = (r.den_p(), r.den_f()?);
    let (m, d) = r.reduced();
    match format {
        Format::Json => {
            let out = SigmaOut {
                schema_version: SCHEMA_VERSION,
                p: p.as_quat().0.iter().map(|c| c.to_string()).collect(),
                q: q.as_quat().0.iter().map(|c| c.to_string()).collect(),
                pq_scale: r.d.to_string(),
                den_p: den_p.to_string(),
                den_f: den_f.to_string(),
                sigma_f: sf.to_string(),
                sigma_p: sp.to_string(),
                rotation_den: d.to_string(),
                rotation: matrix_strings(&m),
            };
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
        _ => {
            println!("pair      p = {:?}   q = {:?}", p, q);
            println!("|pq|      {}", r.d);
            match lattice {
                Some(LatticeArg::F) => {
                    println!("sigma_F   {sf}");
                    println!("den_F     {den_f}");
                }
                Some(LatticeArg::P) => {
                    println!("sigma_P   {sp}");
                    println!("den_P     {den_p}");
                }
                None => {
                    println!("sigma_F   {sf}");
                    println!("sigma_P   {sp}");
                    println!("den_P     {den_p}");
                    println!("den_F     {den_f}");
                }
            }
            println!("rotation (denominator {d}):");
            for i in 0..4 {
                let row: Vec<String> = (0..4).map(|j| rational_str(&m[(i, j)], &d)).collect();
                println!("  [{}]", row.join(", "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CslOut {
    schema_version: u32,
    lattice: String,
    sigma: String,
    den: String,
    basis: Vec<Vec<String>>,
    quotient_invariants: Vec<String>,
}

fn cmd_csl(pair: &PairArgs, kind: LatticeKind, format: Format) -> Result<ExitCode, Error> {
    let p = parse_quat(&pair.p)?;
    let q = parse_quat(&pair.q)?;
    let r = rot4::build_rotation(&p, &q)?;
    let l = lattice::csl(kind, &r);
    let sigma = l.index_in(&Lattice4::standard(kind)).expect("CSL is a sublattice");
    let inv = lattice::quotient_invariants(kind, &r);
    match format {
        Format::Json => {
            let out = CslOut {
                schema_version: SCHEMA_VERSION,
                lattice: kind.to_string(),
                sigma: sigma.to_string(),
                den: l.den().to_string(),
                basis: matrix_strings(l.basis()),
                quotient_invariants: inv.iter().map(|e| e.to_string()).collect(),
            };
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
        Format::Tsv => {
            let mut cols = vec!["lattice".to_string(), "sigma".into(), "den".into()];
            for i in 0..4 {
                for j in 0..4 {
                    cols.push(format!("b{i}{j}"));
                }
            }
            println!("{}", cols.join("\t"));
            let mut vals = vec![kind.to_string(), sigma.to_string(), l.den().to_string()];
            for i in 0..4 {
                for j in 0..4 {
                    vals.push(l.basis()[(i, j)].to_string());
                }
            }
            println!("{}", vals.join("\t"));
        }
        Format::Text => {
            println!("lattice   {kind}");
            println!("sigma     {sigma}");
            println!("basis (columns generate, denominator {}):", l.den());
            for i in 0..4 {
                let row: Vec<String> = (0..4).map(|j| l.basis()[(i, j)].to_string()).collect();
                println!("  [{}]", row.join(", "));
            }
            let invs: Vec<String> = inv.iter().map(|e| e.to_string()).collect();
            println!("quotient  ({})", invs.join(", "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(sigma: u64, kind: LatticeKind, mode: CountMode, max_budget: u64) -> Result<ExitCode, Error> {
    let budget = CatalogBudget { max_sigma: max_budget };
    match mode {
        CountMode::Total => {
            match kind {
                LatticeKind::F => {
                    let total = counting::f_f(sigma)?;
                    if effective_sigma(kind, sigma).is_some_and(|s| s <= max_budget) {
                        let cat = enumerate::build_catalog(sigma, kind, &budget)?;
                        println!("sigma\tclosed_form\tbrute_force");
                        println!("{sigma}\t{total}\t{}", cat.csls.len());
                    } else {
                        println!("sigma\tclosed_form");
                        println!("{sigma}\t{total}");
                    }
                }
                LatticeKind::P => {
                    // No closed form is implemented for the primitive
                    // lattice total; report the brute-force census.
                    let eff = effective_sigma(kind, sigma)
                        .ok_or_else(|| Error::Dimension(format!("no CSLs at index {sigma}")))?;
                    if eff > max_budget {
                        return Err(Error::BudgetExceeded { sigma: eff, budget: max_budget });
                    }
                    let cat = enumerate::build_catalog(sigma, kind, &budget)?;
                    println!("sigma\tbrute_force");
                    println!("{sigma}\t{}", cat.csls.len());
                }
            }
        }
        CountMode::Classes => match kind {
            LatticeKind::F => {
                let report = counting::count_report(sigma)?;
                println!("type_p\ttype_q\tn\tg");
                let mut acc = 0u64;
                for ((a, b), n, g) in &report.per_class {
                    println!("{a}\t{b}\t{n}\t{g}");
                    acc += n * g;
                }
                println!("# identity: sum g*n = {acc}, f_F({sigma}) = {}", report.total);
            }
            LatticeKind::P => {
                let rows = counting::tabip_counts(sigma)?;
                println!("type_p\ttype_q\tshape\tcount");
                for r in &rows {
                    println!("{}\t{}\t{}\t{}", r.labels.0, r.labels.1, r.shape, r.count);
                }
                println!("# total classes (ordered): {}", counting::p_class_total(sigma)?);
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

/// The face-centered Sigma whose pairs realize the requested index, if any.
fn effective_sigma(kind: LatticeKind, sigma: u64) -> Option<u64> {
    match kind {
        LatticeKind::F => (sigma % 2 == 1).then_some(sigma),
        LatticeKind::P => {
            if sigma % 2 == 1 {
                Some(sigma)
            } else if sigma % 4 == 2 {
                Some(sigma / 2)
            } else {
                None
            }
        }
    }
}

fn cmd_verify(max_normsq: u64, sigma_list: &[u64]) -> Result<ExitCode, Error> {
    let mut all_ok = true;
    let mut claim = |name: String, ok: bool, detail: String| {
        println!("{} {name}{}", if ok { "PASS" } else { "FAIL" }, if detail.is_empty() {
            String::new()
        } else {
            format!(" ({detail})")
        });
        all_ok &= ok;
    };

    // Group structure.
    let orders_ok = symgroup::group_order(symgroup::GroupName::Oct48) == 48
        && symgroup::group_order(symgroup::GroupName::Tet24) == 24
        && symgroup::group_order(symgroup::GroupName::PairF) == 1152
        && symgroup::group_order(symgroup::GroupName::PairP) == 384;
    claim("group-orders 48/24/1152/384".into(), orders_ok, String::new());
    let rot_ok = symgroup::rotation_count(LatticeKind::F) == 576
        && symgroup::rotation_count(LatticeKind::P) == 192;
    claim("symmetry-rotations 576/192".into(), rot_ok, String::new());
    claim(
        "coset-decomposition index 3".into(),
        symgroup::verify_coset_decomposition().is_ok(),
        String::new(),
    );

    // Index theorems by exhaustive brute force.
    let report = enumerate::verify_theorems(max_normsq)?;
    claim(
        format!("index-theorems norms<={max_normsq}"),
        report.failures.is_empty(),
        format!("{} rotations", report.rotations_checked),
    );
    for f in report.failures.iter().take(5) {
        eprintln!("  {f}");
    }

    let budget = CatalogBudget { max_sigma: sigma_list.iter().copied().max().unwrap_or(15) };
    for &sigma in sigma_list {
        if sigma % 2 == 0 {
            claim(format!("catalog sigma={sigma}"), true, "no admissible pairs".into());
            continue;
        }
        let cat = enumerate::build_catalog(sigma, LatticeKind::F, &budget)?;
        let expect = counting::f_f(sigma)?;
        claim(
            format!("distinct-csl count sigma={sigma}"),
            cat.csls.len() as u64 == expect,
            format!("brute {}, formula {expect}", cat.csls.len()),
        );
        // Per-type class counts against the closed forms.
        let mut ok = true;
        let mut brute: std::collections::HashMap<(ClassLabel, ClassLabel), u64> =
            std::collections::HashMap::new();
        for c in &cat.classes {
            *brute.entry((c.record.label_p, c.record.label_q)).or_default() += 1;
            ok &= c.record.g_multiplicity as u64 == c.distinct_csls;
        }
        for i in 0..6 {
            for j in 0..6 {
                let (a, b) = (ClassLabel::from_index(i), ClassLabel::from_index(j));
                let formula = counting::n_f(a, b, sigma)?;
                let got = brute.get(&(a, b)).copied().unwrap_or(0);
                if formula != got {
                    ok = false;
                    eprintln!("  class count ({a},{b}) at sigma {sigma}: brute {got}, formula {formula}");
                }
            }
        }
        claim(format!("class counts sigma={sigma}"), ok, String::new());
        claim(
            format!("class-csl-overlap sigma={sigma}"),
            !cat.class_csl_overlap,
            "classes have disjoint CSL sets".into(),
        );
        let split = enumerate::verify_splitting(sigma, &budget)?;
        claim(
            format!("splitting sigma={sigma}"),
            split.failures.is_empty(),
            String::new(),
        );
        for f in split.failures.iter().take(5) {
            eprintln!("  {f}");
        }
        // 3D oracle classification.
        let c3 = csl4::cubic3::classify3(sigma);
        claim(format!("cubic3 classes sigma={sigma}"), c3.is_ok(), String::new());
    }

    // 3D oracle: Sigma equals the odd part of the norm.
    let mut odd_ok = true;
    'outer: for n in 1..=max_normsq.min(100) {
        for q in enumerate::primitive_quats_of_norm(n)?.quats {
            let sigma = csl4::cubic3::csl3_sigma(&q);
            if sigma != q.sigma().sigma {
                odd_ok = false;
                eprintln!("  cubic3 sigma mismatch at {q:?}");
                break 'outer;
            }
        }
    }
    claim(format!("cubic3 odd-part norms<={}", max_normsq.min(100)), odd_ok, String::new());

    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY_FAIL))
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone)]
struct CacheHeader {
    schema_version: u32,
    sigma: u64,
    lattice: String,
    csl_count: usize,
    class_count: usize,
}

#[derive(Serialize, Deserialize, Clone)]
struct CslLine {
    kind: String,
    den: String,
    basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone)]
struct ClassRecord {
    kind: String,
    p: Vec<String>,
    q: Vec<String>,
    type_p: String,
    type_q: String,
    h_order: usize,
    g: usize,
    rotations: usize,
    sigma_f: u64,
    split_odd: u64,
    split_even: u64,
    csl_den: String,
    csl_basis: Vec<Vec<String>>,
}

fn cache_path(dir: &std::path::Path, sigma: u64, kind: LatticeKind) -> PathBuf {
    dir.join(format!("catalog-v{SCHEMA_VERSION}-{kind}-{sigma}.jsonl"))
}

fn quat_strings(p: &PrimQuat) -> Vec<String> {
    p.as_quat().0.iter().map(|c| c.to_string()).collect()
}

fn parse_quat_strings(v: &[String]) -> Result<PrimQuat, Error> {
    if v.len() != 4 {
        return Err(Error::Dimension("quaternion needs four coefficients".into()));
    }
    let c: Vec<BigInt> = v
        .iter()
        .map(|s| s.parse().map_err(|_| Error::Dimension(format!("bad integer {s:?}"))))
        .collect::<Result<_, _>>()?;
    PrimQuat::new(Quat::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()))
}

fn parse_basis(den: &str, rows: &[Vec<String>]) -> Result<Lattice4, Error> {
    let den: BigInt =
        den.parse().map_err(|_| Error::Dimension(format!("bad denominator {den:?}")))?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::Dimension("basis must be 4x4".into()));
    }
    let mut m = IntMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = rows[i][j]
                .parse()
                .map_err(|_| Error::Dimension(format!("bad integer {:?}", rows[i][j])))?;
        }
    }
    Lattice4::new(m, den)
}

/// Builds (or loads) the class records for one catalog.
fn class_records(
    sigma: u64,
    kind: LatticeKind,
    budget: &CatalogBudget,
) -> Result<(Vec<CslLine>, Vec<ClassRecord>), Error> {
    let cat = enumerate::build_catalog(sigma, kind, budget)?;
    let sigma_f_value = effective_sigma(kind, sigma).unwrap_or(sigma);
    let csls: Vec<CslLine> = cat
        .csls
        .iter()
        .map(|l| CslLine {
            kind: "csl".into(),
            den: l.den().to_string(),
            basis: matrix_strings(l.basis()),
        })
        .collect();
    let mut records = Vec::with_capacity(cat.classes.len());
    for c in &cat.classes {
        let split = symgroup::f_class_to_p_classes(&c.rep.0, &c.rep.1)?;
        let mut split_odd = 0u64;
        let mut split_even = 0u64;
        for part in &split {
            let sp = rot4::sigma_p(&part.rep.0, &part.rep.1)?;
            if num_integer::Integer::is_even(&sp) {
                split_even += 1;
            } else {
                split_odd += 1;
            }
        }
        let r = rot4::build_rotation(&c.rep.0, &c.rep.1)?;
        let l = lattice::csl(kind, &r);
        records.push(ClassRecord {
            kind: "class".into(),
            p: quat_strings(&c.rep.0),
            q: quat_strings(&c.rep.1),
            type_p: c.record.label_p.to_string(),
            type_q: c.record.label_q.to_string(),
            h_order: c.record.h_order,
            g: c.record.g_multiplicity,
            rotations: c.rotations,
            sigma_f: sigma_f_value,
            split_odd,
            split_even,
            csl_den: l.den().to_string(),
            csl_basis: matrix_strings(l.basis()),
        });
    }
    Ok((csls, records))
}

fn load_cache(
    path: &std::path::Path,
    sigma: u64,
    kind: LatticeKind,
) -> Option<(Vec<CslLine>, Vec<ClassRecord>)> {
    let text = std::fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    let header: CacheHeader = serde_json::from_str(lines.next()?).ok()?;
    if header.schema_version != SCHEMA_VERSION
        || header.sigma != sigma
        || header.lattice != kind.to_string()
    {
        return None;
    }
    let mut csls = Vec::new();
    let mut classes = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(c) = serde_json::from_str::<ClassRecord>(line) {
            if c.kind == "class" {
                // Representative pairs must still parse as primitive quaternions.
                parse_quat_strings(&c.p).ok()?;
                parse_quat_strings(&c.q).ok()?;
                classes.push(c);
                continue;
            }
        }
        let c: CslLine = serde_json::from_str(line).ok()?;
        if c.kind != "csl" {
            return None;
        }
        // Re-canonicalizing a cached basis must reproduce it exactly.
        let l = parse_basis(&c.den, &c.basis).ok()?;
        if matrix_strings(l.basis()) != c.basis || l.den().to_string() != c.den {
            return None;
        }
        csls.push(c);
    }
    if csls.len() != header.csl_count || classes.len() != header.class_count {
        return None;
    }
    Some((csls, classes))
}

fn store_cache(
    path: &std::path::Path,
    sigma: u64,
    kind: LatticeKind,
    csls: &[CslLine],
    classes: &[ClassRecord],
) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = String::new();
    let header = CacheHeader {
        schema_version: SCHEMA_VERSION,
        sigma,
        lattice: kind.to_string(),
        csl_count: csls.len(),
        class_count: classes.len(),
    };
    out.push_str(&serde_json::to_string(&header).expect("serializable"));
    out.push('\n');
    for c in csls {
        out.push_str(&serde_json::to_string(c).expect("serializable"));
        out.push('\n');
    }
    for c in classes {
        out.push_str(&serde_json::to_string(c).expect("serializable"));
        out.push('\n');
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())
}

fn cmd_enumerate(
    sigma: u64,
    kind: LatticeKind,
    format: Format,
    cache_dir: Option<PathBuf>,
    max_budget: u64,
) -> Result<ExitCode, Error> {
    let budget = CatalogBudget { max_sigma: max_budget };
    if let Some(eff) = effective_sigma(kind, sigma) {
        if eff > max_budget {
            return Err(Error::BudgetExceeded { sigma: eff, budget: max_budget });
        }
    }
    let dir = cache_dir
        .or_else(|| std::env::var_os("CSL4_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".cslcache"));
    let path = cache_path(&dir, sigma, kind);
    let (csls, classes) = match load_cache(&path, sigma, kind) {
        Some(data) => data,
        None => {
            if path.exists() {
                eprintln!("warning: cache entry {} is stale or corrupt, rebuilding", path.display());
            }
            let data = class_records(sigma, kind, &budget)?;
            if let Err(e) = store_cache(&path, sigma, kind, &data.0, &data.1) {
                eprintln!("warning: cannot write cache {}: {e}", path.display());
            }
            data
        }
    };
    match format {
        Format::Json => {
            for c in &classes {
                println!("{}", serde_json::to_string(c).expect("serializable"));
            }
        }
        Format::Tsv => {
            let mut header = vec![
                "sigma_f".to_string(),
                "type_p".into(),
                "type_q".into(),
                "h_order".into(),
                "g".into(),
                "rotations".into(),
                "split_odd".into(),
                "split_even".into(),
            ];
            for t in ["p", "q"] {
                for i in 0..4 {
                    header.push(format!("{t}{i}"));
                }
            }
            header.push("csl_den".into());
            for i in 0..4 {
                for j in 0..4 {
                    header.push(format!("b{i}{j}"));
                }
            }
            println!("{}", header.join("\t"));
            for c in &classes {
                let mut row = vec![
                    c.sigma_f.to_string(),
                    c.type_p[1..].to_string(),
                    c.type_q[1..].to_string(),
                    c.h_order.to_string(),
                    c.g.to_string(),
                    c.rotations.to_string(),
                    c.split_odd.to_string(),
                    c.split_even.to_string(),
                ];
                row.extend(c.p.iter().cloned());
                row.extend(c.q.iter().cloned());
                row.push(c.csl_den.clone());
                for r in &c.csl_basis {
                    row.extend(r.iter().cloned());
                }
                println!("{}", row.join("\t"));
            }
        }
        Format::Text => {
            println!("{} distinct CSLs, {} classes", csls.len(), classes.len());
            for c in &classes {
                println!(
                    "class ({},{})  p=({}) q=({})  h={} g={} split={}o/{}e",
                    c.type_p,
                    c.type_q,
                    c.p.join(","),
                    c.q.join(","),
                    c.h_order,
                    c.g,
                    c.split_odd,
                    c.split_even
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
