//! The acceptance suite at desk scale. Each criterion returns one outcome
//! line; the whole run is deterministic given the seed.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::classify::{phantom_verdict, range_check_ck, range_check_graph, range_check_unital, Verdict};
use crate::corpus::{building_blocks, lift_cases, st_corpus, Sample};
use crate::error::Result;
use crate::functors::{
    compute_eta, lift_r_morphism, lift_to_st, r_map_to_tb_r, reconstruct, restrict, restrict_map, tb_to_r,
    tb_to_r_map, twist, verify_delta_decomposition,
};
use crate::invariants::{
    cover_sequence_exact, is_exact, is_rrz, r_boundary_assembly, unit_receptacle, validate_module, Arrow, Kind,
    Module, ModuleBuilder, Obj, PointedModule,
};
use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{is_iso, is_surjective, smith_normal_form, FgGroup, IntMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    /// Directory with the space fixtures; the built-in catalog is used when
    /// absent.
    pub fixtures: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0x5eed, fixtures: None }
    }
}

pub const NAMES: [&str; 9] = [
    "unique-path six-way equivalence",
    "space fixtures",
    "SNF soundness",
    "reconstruction round trip",
    "delta decomposition",
    "lifting",
    "covering exactness",
    "redundancy of boundary groups",
    "classification verdicts",
];

/// Runs one criterion (1 to 9).
pub fn run_criterion(k: u8, cfg: &Config) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
    let start = Instant::now();
    let res: Result<(bool, String)> = match k {
        1 => Ok(unique_path_equivalence(5)),
        2 => space_fixtures(cfg.fixtures.as_deref(), &mut rng),
        3 => Ok(snf_soundness(1000, &mut rng)),
        4 => reconstruction_round_trip(&mut rng),
        5 => delta_decomposition(&mut rng),
        6 => lifting(&mut rng),
        7 => covering_exactness(&mut rng),
        8 => boundary_redundancy(&mut rng),
        9 => verdicts(500, &mut rng),
        _ => Ok((false, format!("no criterion {k}"))),
    };
    let (passed, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome { criterion: k, name: NAMES[(k as usize).clamp(1, 9) - 1], passed, detail, elapsed: start.elapsed() }
}

pub fn run(cfg: &Config) -> Vec<Outcome> {
    (1..=9).map(|k| run_criterion(k, cfg)).collect()
}

/// All labeled posets on `n` points, as spaces with points `1..n`.
pub fn labeled_posets(n: usize) -> Vec<FiniteSpace> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let total = 3usize.pow(pairs.len() as u32);
    let mut less = vec![vec![false; n]; n];
    'outer: for code in 0..total {
        let mut c = code;
        for &(i, j) in &pairs {
            let state = c % 3;
            c /= 3;
            less[i][j] = state == 1;
            less[j][i] = state == 2;
        }
        for a in 0..n {
            for b in 0..n {
                if !less[a][b] {
                    continue;
                }
                for d in 0..n {
                    if less[b][d] && !less[a][d] {
                        continue 'outer;
                    }
                }
            }
        }
        let rel: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| less[a][b]).map(|(a, b)| (b, a)).collect();
        out.push(FiniteSpace::from_indices(names.clone(), &rel).expect("posets are valid spaces"));
    }
    out
}

fn unique_path_equivalence(max: usize) -> (bool, String) {
    let mut seen = 0;
    let mut unique = 0;
    for n in 0..=max {
        for s in labeled_posets(n) {
            seen += 1;
            let c = s.unique_path_conditions();
            if c.iter().any(|&b| b != c[0]) {
                return (false, format!("conditions disagree on {}: {c:?}", s.to_json()));
            }
            unique += c[0] as usize;
        }
    }
    (true, format!("{seen} posets on <= {max} points, {unique} unique-path, all six conditions agree"))
}

fn load_space(dir: Option<&Path>, file: &str, fallback: fn() -> FiniteSpace) -> Result<FiniteSpace> {
    match dir {
        Some(d) => FiniteSpace::from_json(&std::fs::read_to_string(d.join(file))?),
        None => Ok(fallback()),
    }
}

/// Every orientation of the path on `n` points.
pub fn accordion_spaces(n: usize) -> Vec<FiniteSpace> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    (0..1usize << n.saturating_sub(1))
        .map(|bits| {
            let pairs: Vec<(usize, usize)> =
                (0..n - 1).map(|i| if bits >> i & 1 == 1 { (i + 1, i) } else { (i, i + 1) }).collect();
            FiniteSpace::from_indices(names.clone(), &pairs).expect("paths are valid")
        })
        .collect()
}

fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(&mut p[..], rng);
    p
}

fn space_fixtures<R: Rng>(dir: Option<&Path>, rng: &mut R) -> Result<(bool, String)> {
    let d = load_space(dir, "diamond.json", catalog::diamond)?;
    if d.classify().unique_path {
        return Ok((false, "diamond reported unique-path".into()));
    }
    let q = load_space(dir, "q_space.json", catalog::q_space)?;
    let qc = q.classify();
    if q.len() != 16 || !qc.unique_path || qc.ebp {
        return Ok((false, format!("Q: unique_path {} ebp {}", qc.unique_path, qc.ebp)));
    }
    let names = |p: char| q.parse_names(&(1..=8).map(|i| format!("{p}{i}")).collect::<Vec<_>>().join(","));
    let (u, c) = (names('x')?, names('y')?);
    if !q.elementary_boundary_pairs().contains(&(u, c)) || q.is_point_pair(u, c) {
        return Ok((false, "({x1..x8}, {y1..y8}) is not a non-point elementary boundary pair of Q".into()));
    }
    let mut count = 0;
    for n in 1..=6 {
        for s in accordion_spaces(n) {
            let s = s.permuted(&random_perm(n, rng))?;
            let c = s.classify();
            if !(c.accordion && c.forest && c.ebp) {
                return Ok((false, format!("accordion {} classified {c:?}", s.to_json())));
            }
            count += 1;
        }
    }
    Ok((true, format!("D not unique-path; Q unique-path, not EBP, reference pair accepted; {count} accordions forest and EBP")))
}

fn random_matrix<R: Rng>(rng: &mut R) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let rows = (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect()).collect();
    IntMatrix::from_rows(rows, c).expect("shape")
}

/// Determinant by cofactor expansion.
fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect()).collect();
        let t = &m[0][j] * leibniz(&minor);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// gcd of all `k × k` minors, for every `k`: the products of the leading
/// invariant factors.
fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.to_rows();
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in combinations(m.rows(), k) {
            for cs in combinations(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                g = g.gcd(&leibniz(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g);
    }
    out
}

/// Number of `x ∈ (Z/k)^n` with `M x ≡ 0`, i.e. `|Hom(coker M, Z/k)|`.
fn hom_count(m: &[Vec<i64>], k: i64) -> u64 {
    let n = m[0].len();
    let mut x = vec![0i64; n];
    let mut count = 0;
    loop {
        if m.iter().all(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(k) == 0) {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] < k {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
    }
}

fn snf_soundness<R: Rng>(count: usize, rng: &mut R) -> (bool, String) {
    let mut oracle_cases = 0;
    for t in 0..count {
        let m = random_matrix(rng);
        let s = smith_normal_form(&m);
        let fail = |what: &str| (false, format!("matrix {t} {:?}: {what}", m.to_i64_rows()));
        if &(&s.u * &m) * &s.v != s.d() {
            return fail("U*M*V != D");
        }
        if s.u.determinant().abs() != BigInt::from(1) || s.v.determinant().abs() != BigInt::from(1) {
            return fail("transform not unimodular");
        }
        if &s.v * &s.v_inv != IntMatrix::identity(s.v.rows()) {
            return fail("V_inv is not the inverse of V");
        }
        if s.diag.iter().any(|d| !d.is_positive()) || s.diag.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return fail("divisibility chain broken");
        }
        let dd = determinantal_divisors(&m);
        let mut prod = BigInt::from(1);
        let expect: Vec<BigInt> = s.diag.iter().map(|d| {
            prod *= d;
            prod.clone()
        }).collect();
        if dd != expect {
            return fail("invariant factors disagree with determinantal divisors");
        }
        if m.rows() == m.cols() {
            let det = m.determinant();
            if !det.is_zero() && det.abs() <= BigInt::from(200) {
                oracle_cases += 1;
                if s.diag.iter().product::<BigInt>() != det.abs() {
                    return fail("cokernel order differs from |det|");
                }
                let rows = m.to_i64_rows().expect("small");
                for k in 2..=6i64 {
                    if (k as u64).pow(m.cols() as u32) > 5000 {
                        break;
                    }
                    let expect: u64 = s.diag.iter().map(|d| d.gcd(&BigInt::from(k)).try_into().unwrap_or(0u64)).product();
                    if hom_count(&rows, k) != expect {
                        return fail(&format!("Hom(coker, Z/{k}) count differs"));
                    }
                }
            }
        }
    }
    (true, format!("{count} matrices; {oracle_cases} square cases checked against cokernel orders"))
}

fn corpus_spaces() -> Vec<(&'static str, Arc<FiniteSpace>)> {
    catalog::corpus_spaces().into_iter().map(|(n, s)| (n, Arc::new(s))).collect()
}

/// Minimum number of modules per corpus space.
pub const CORPUS_SIZE: usize = 50;

/// Building blocks over `s` topped up with random sums to [`CORPUS_SIZE`].
pub fn space_corpus<R: Rng>(s: &Arc<FiniteSpace>, rng: &mut R) -> Result<Vec<Sample>> {
    let blocks = building_blocks(s, false)?.len();
    st_corpus(s, CORPUS_SIZE.saturating_sub(blocks).max(8), rng)
}

fn reconstruction_round_trip<R: Rng>(rng: &mut R) -> Result<(bool, String)> {
    let mut modules = 0;
    for (name, s) in corpus_spaces() {
        for smp in space_corpus(&s, rng)? {
            let b = restrict(&smp.module, Kind::B)?;
            if !is_exact(&b).passed {
                return Ok((false, format!("{name} {}: B restriction not exact", smp.label)));
            }
            let g = reconstruct(&b)?;
            let st = &g.module;
            if !validate_module(st).passed || !is_exact(st).passed || !is_rrz(st) {
                return Ok((false, format!("{name} {}: G output fails validate/exact/rrz", smp.label)));
            }
            if restrict(st, Kind::B)? != b {
                return Ok((false, format!("{name} {}: restrict(G(n)) differs from n", smp.label)));
            }
            compute_eta(&smp.module)?;
            modules += 1;
        }
    }
    Ok((true, format!("{modules} B-modules over 5 spaces round trip; every comparison map is an isomorphism")))
}

fn delta_decomposition<R: Rng>(rng: &mut R) -> Result<(bool, String)> {
    let mut instances = 0;
    for (name, s) in corpus_spaces() {
        for smp in space_corpus(&s, rng)? {
            let g = reconstruct(&restrict(&smp.module, Kind::B)?)?;
            let rep = verify_delta_decomposition(&g.module);
            if !rep.passed {
                return Ok((false, format!("{name} {}: {}", smp.label, rep.failure.unwrap_or_default())));
            }
            instances += rep.instances;
        }
    }
    Ok((true, format!("{instances} boundary maps match their decomposition")))
}

fn lifting<R: Rng>(rng: &mut R) -> Result<(bool, String)> {
    let (mut total, mut isos) = (0, 0);
    for (name, s) in corpus_spaces() {
        for case in lift_cases(&s, 24, rng)? {
            let (m, n) = (&case.source, &case.target);
            let (mt, nt) = (restrict(m, Kind::Tb)?, restrict(n, Kind::Tb)?);
            let psi = r_map_to_tb_r(&case.phi, &s);
            let big = lift_r_morphism(&mt, &nt, &psi)?;
            let (mr, nr) = (tb_to_r(&mt)?, tb_to_r(&nt)?);
            if !tb_to_r_map(&big, &s).equals(&psi, &nr) {
                return Ok((false, format!("{name} {}: TB lift does not restrict to the map", case.label)));
            }
            let iso = psi.is_iso(&mr, &nr);
            if iso && !big.is_iso(&mt, &nt) {
                return Ok((false, format!("{name} {}: isomorphism lifted to a non-isomorphism", case.label)));
            }
            let st = lift_to_st(m, n, &case.phi)?;
            if !restrict_map(&st, &s, Kind::R).equals(&case.phi, &restrict(n, Kind::R)?) {
                return Ok((false, format!("{name} {}: ST lift does not restrict to the map", case.label)));
            }
            total += 1;
            isos += iso as usize;
        }
    }
    Ok((true, format!("{total} lifting problems ({isos} isomorphisms) solved exactly")))
}

/// Open subsets of `y` given as unions of at most three opens.
fn covers_of(opens: &[Subset], y: Subset) -> Vec<Vec<Subset>> {
    let subs: Vec<Subset> = opens.iter().copied().filter(|u| u.is_subset(y) && !u.is_empty()).collect();
    let mut out = Vec::new();
    for i in 0..subs.len() {
        for j in i..subs.len() {
            for k in j..subs.len() {
                let mut c = vec![subs[i], subs[j], subs[k]];
                c.dedup();
                if c.iter().fold(Subset::default(), |a, &u| a.union(u)) == y && !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn covering_exactness<R: Rng>(rng: &mut R) -> Result<(bool, String)> {
    let (mut seqs, mut modules) = (0, 0);
    for (name, s) in corpus_spaces() {
        let opens: Vec<Subset> = s.open_sets();
        let covers: Vec<(Subset, Vec<Vec<Subset>>)> =
            opens.iter().filter(|y| !y.is_empty()).map(|&y| (y, covers_of(&opens, y))).collect();
        for smp in space_corpus(&s, rng)? {
            let m = &smp.module;
            for (y, cs) in &covers {
                for c in cs {
                    seqs += 1;
                    if !cover_sequence_exact(m, *y, c) {
                        let c: Vec<String> = c.iter().map(|&u| s.fmt_subset(u)).collect();
                        return Ok((false, format!("{name} {}: cover {c:?} of {}", smp.label, s.fmt_subset(*y))));
                    }
                }
            }
            if !unit_sequence_exact(m)? {
                return Ok((false, format!("{name} {}: unit receptacle does not match M(X,0)", smp.label)));
            }
            modules += 1;
        }
    }
    Ok((true, format!("{seqs} cover sequences exact; unit receptacle iso to M(X,0) for {modules} modules")))
}

/// The receptacle of the B-restriction maps onto `M(X,0)` with kernel the
/// upper-bound relations.
pub fn unit_sequence_exact(m: &Module) -> Result<bool> {
    let s = m.space();
    let b = restrict(m, Kind::B)?;
    let rec = unit_receptacle(&b)?;
    let top = m.st_group(s.all(), 0);
    let parts: Vec<&IntMatrix> = (0..s.len()).map(|x| m.st_i(s.up(x), s.all(), 0)).collect();
    let g = IntMatrix::vstack_all(top.gens(), &parts);
    Ok(is_surjective(top, &g) && is_iso(&rec.group, top, &g))
}

fn boundary_redundancy<R: Rng>(rng: &mut R) -> Result<(bool, String)> {
    let mut checked = 0;
    for (name, s) in corpus_spaces() {
        for smp in space_corpus(&s, rng)? {
            let tw = twist(&smp.module, 4, rng)?.module;
            for r in [restrict(&smp.module, Kind::R)?, tb_to_r(&restrict(&tw, Kind::Tb)?)?] {
                if !is_exact(&r).passed {
                    return Ok((false, format!("{name} {}: R-module not exact", smp.label)));
                }
                for x in 0..s.len() {
                    let (sum, g) = r_boundary_assembly(&r, x);
                    if !is_iso(&sum, r.group(&Obj::Bd(x)), &g) {
                        return Ok((false, format!("{name} {}: assembly onto bd:{} not iso", smp.label, s.name(x))));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok((true, format!("{checked} boundary assemblies are isomorphisms")))
}

/// R-module on the one-point space with zero maps.
pub fn one_point_r(k1: FgGroup, bd: FgGroup, open: FgGroup) -> Result<Module> {
    let s = Arc::new(catalog::one_point());
    let mut b = ModuleBuilder::new(s, Kind::R);
    let (k, d, o) = (k1.gens(), bd.gens(), open.gens());
    b.group(Obj::K1(0), k1).group(Obj::Bd(0), bd).group(Obj::Open(0), open);
    b.map(Arrow::Delta(0), IntMatrix::zeros(k, d)).map(Arrow::U(0), IntMatrix::zeros(d, o));
    b.build()
}

fn pointed(m: Module) -> Result<PointedModule> {
    let n = unit_receptacle(&m)?.sum.gens();
    PointedModule::new(m, vec![BigInt::zero(); n])
}

fn random_group<R: Rng>(rng: &mut R) -> FgGroup {
    let mut parts = vec![FgGroup::free(rng.gen_range(0..=2))];
    if rng.gen_bool(0.3) {
        parts.push(FgGroup::cyclic(rng.gen_range(2..=6)));
    }
    FgGroup::direct_sum(&parts.iter().collect::<Vec<_>>())
}

fn verdicts<R: Rng>(count: usize, rng: &mut R) -> Result<(bool, String)> {
    let z = || FgGroup::free(1);
    let ck = range_check_ck(&one_point_r(z(), FgGroup::zero(), z())?)?;
    if ck.ck_realizable != Some(true) {
        return Ok((false, "one point, Z, Z, 0: not CK-realizable".into()));
    }
    let u = range_check_unital(&pointed(one_point_r(FgGroup::zero(), FgGroup::zero(), z())?)?)?;
    if u.unital_graph_realizable != Some(true) || u.unital_ck_realizable != Some(false) {
        return Ok((false, "one point, 0, Z: unital verdicts wrong".into()));
    }
    let op = Arc::new(catalog::one_point());
    let (a, b) = (catalog::point_module(&op, 0, 0, 0)?, catalog::point_module(&op, 0, 1, 0)?);
    let m = crate::functors::direct_sum(&[&a, &a, &b, &b])?;
    let ph = phantom_verdict(&PointedModule::new(m, vec![BigInt::from(1), BigInt::zero()])?)?;
    if ph.phantom_criteria != Some(true) {
        return Ok((false, "one point, K0 = K1 = Z^2: phantom criteria not satisfied".into()));
    }
    let mut samples: Vec<Module> = Vec::new();
    for (_, s) in corpus_spaces() {
        for smp in st_corpus(&s, 4, rng)? {
            samples.push(restrict(&smp.module, Kind::R)?);
        }
    }
    while samples.len() < count {
        samples.push(one_point_r(random_group(rng), random_group(rng), random_group(rng))?);
    }
    samples.truncate(count);
    let mut split = [0usize; 2];
    for m in &samples {
        let vs: [Verdict; 3] = [range_check_graph(m)?, range_check_ck(m)?, range_check_unital(&pointed(m.clone())?)?];
        if let Some(v) = vs.iter().find(|v| !v.is_monotone()) {
            return Ok((false, format!("non-monotone verdict {:?}", v)));
        }
        split[vs[1].ck_realizable.unwrap_or(false) as usize] += 1;
    }
    Ok((true, format!("reference examples hold; {count} modules monotone ({} CK-realizable)", split[1])))
}
