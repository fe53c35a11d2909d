use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use filtk::classify::{phantom_verdict, range_check_ck, range_check_unital, Verdict};
use filtk::functors::{
    lift_r_morphism, lift_to_st, reconstruct, restrict, restrict_map, tb_to_r, verify_delta_decomposition,
};
use filtk::invariants::{
    is_exact, is_rrz, load_module, save_module, unit_receptacle, validate_module, Kind, MapFile, Module, ModuleMap,
    PointedModule,
};
use filtk::selftest;
use filtk::space::FiniteSpace;
use filtk::zmodule::IntMatrix;
use filtk::Error;

#[derive(Parser)]
#[command(name = "filtk", version, about = "Filtered K-theory invariants over finite T0-spaces")]
struct Cli {
    /// Write JSON lines to stdout; the human summary goes to stderr.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a space: unique path, EBP, accordion, forest.
    Space { file: PathBuf },
    /// Validate relations and exactness of a module.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Extend an exact B-module to an exact real-rank-zero-like ST-module.
    Extend {
        file: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Lift an R-map between TB- or ST-modules.
    Lift(LiftArgs),
    /// Evaluate the realizability criteria.
    Classify {
        file: PathBuf,
        #[arg(long)]
        unital: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = selftest::Config::default().seed)]
        seed: u64,
        /// Directory with the space fixtures.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LiftArgs {
    /// Map file; its `source` and `target` are used unless overridden.
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    St,
    B,
    R,
    Tb,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::St => Kind::St,
            KindArg::B => Kind::B,
            KindArg::R => Kind::R,
            KindArg::Tb => Kind::Tb,
        }
    }
}

/// Collected output of one command.
struct Report {
    lines: Vec<Value>,
    summary: Vec<String>,
    passed: bool,
}

impl Report {
    fn new() -> Report {
        Report { lines: Vec::new(), summary: Vec::new(), passed: true }
    }

    fn say(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SpaceNotUniquePath(_)
        | Error::SpaceNotEBP(_)
        | Error::InputNotExact(_)
        | Error::FreenessHypothesisFailed(_)
        | Error::NotApplicable(_)
        | Error::InternalInvariantViolation(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = std::panic::catch_unwind(move || run(cli.command));
    match outcome {
        Ok(Ok(rep)) => {
            let (out, err): (Vec<String>, Vec<String>) = if json {
                (rep.lines.iter().map(|l| l.to_string()).collect(), rep.summary)
            } else {
                (rep.summary, Vec::new())
            };
            for l in out {
                println!("{l}");
            }
            for l in err {
                eprintln!("{l}");
            }
            ExitCode::from(if rep.passed { 0 } else { 1 })
        }
        Ok(Err(e)) => {
            if json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> filtk::Result<Report> {
    match cmd {
        Command::Space { file } => cmd_space(&file),
        Command::Check { file, kind } => cmd_check(&file, kind.map(Kind::from)),
        Command::Extend { file, output } => cmd_extend(&file, &output),
        Command::Lift(a) => cmd_lift(&a),
        Command::Classify { file, unital } => cmd_classify(&file, unital),
        Command::Selftest { seed, fixtures } => Ok(cmd_selftest(seed, fixtures)),
    }
}

fn cmd_space(file: &Path) -> filtk::Result<Report> {
    let s = FiniteSpace::from_json(&std::fs::read_to_string(file)?)?;
    let c = s.classify();
    let lc = s.enumerate_lc().len();
    let mut rep = Report::new();
    rep.lines.push(json!({
        "command": "space",
        "points": s.len(),
        "locally_closed": lc,
        "class": c,
    }));
    rep.say(format!("points: {}", s.len()));
    rep.say(format!("locally closed sets: {lc}"));
    rep.say(format!("unique_path: {}", c.unique_path));
    rep.say(format!("ebp: {}", c.ebp));
    rep.say(format!("accordion: {}", c.accordion));
    rep.say(format!("forest: {}", c.forest));
    for w in &c.witnesses {
        rep.say(format!("witness: {}", serde_json::to_string(w)?));
    }
    Ok(rep)
}

fn load_expecting(file: &Path, kind: Option<Kind>) -> filtk::Result<(Module, Option<Vec<BigInt>>)> {
    let (m, unit) = load_module(file)?;
    if let Some(k) = kind {
        if m.kind() != k {
            return Err(Error::Parse(format!("{} holds a {}-module, expected {k}", file.display(), m.kind())));
        }
    }
    Ok((m, unit))
}

fn cmd_check(file: &Path, kind: Option<Kind>) -> filtk::Result<Report> {
    let (m, unit) = load_expecting(file, kind)?;
    if let Some(u) = unit {
        PointedModule::new(m.clone(), u)?;
    }
    let mut rep = Report::new();
    let rel = validate_module(&m);
    let exact = is_exact(&m);
    let rrz = (m.kind() == Kind::St).then(|| is_rrz(&m));
    rep.passed = rel.passed && exact.passed;
    rep.lines.push(json!({
        "command": "check",
        "kind": m.kind().as_str(),
        "relations": rel,
        "exactness": exact,
        "rrz": rrz,
        "passed": rep.passed,
    }));
    for r in [&rel, &exact] {
        match &r.failure {
            None => rep.say(format!("{}: ok ({} instances)", r.check, r.instances)),
            Some(f) => rep.say(format!("{}: FAILED at {f}", r.check)),
        }
    }
    if let Some(z) = rrz {
        rep.say(format!("real-rank-zero-like: {z}"));
    }
    Ok(rep)
}

fn cmd_extend(file: &Path, out: &Path) -> filtk::Result<Report> {
    let (b, unit) = load_expecting(file, Some(Kind::B))?;
    let g = reconstruct(&b)?;
    let st = &g.module;
    let checks = [
        ("relations", validate_module(st).passed),
        ("exactness", is_exact(st).passed),
        ("real-rank-zero-like", is_rrz(st)),
        ("restriction", restrict(st, Kind::B)? == b),
        ("delta decomposition", verify_delta_decomposition(st).passed),
    ];
    if let Some((name, _)) = checks.iter().find(|c| !c.1) {
        return Err(Error::InternalInvariantViolation(format!("extension fails its own {name} check")));
    }
    let st_unit = match unit {
        None => None,
        Some(u) => {
            let p = PointedModule::new(b.clone(), u)?;
            let s = st.space();
            let parts: Vec<&IntMatrix> = (0..s.len()).map(|x| st.st_i(s.up(x), s.all(), 0)).collect();
            let g = IntMatrix::vstack_all(st.st_group(s.all(), 0).gens(), &parts);
            let v = &IntMatrix::row_vector(p.unit) * &g;
            Some(st.st_group(s.all(), 0).reduce(v.row(0)))
        }
    };
    save_module(out, st, st_unit.as_deref())?;
    let mut rep = Report::new();
    let top = st.st_group(st.space().all(), 0).describe();
    rep.lines.push(json!({
        "command": "extend",
        "output": out.display().to_string(),
        "verified": checks.iter().map(|c| c.0).collect::<Vec<_>>(),
        "top_even": top,
    }));
    rep.say(format!("wrote {}", out.display()));
    rep.say(format!("verified: {}", checks.map(|c| c.0).join(", ")));
    rep.say(format!("M(X,0) = {top}"));
    Ok(rep)
}

fn cmd_lift(a: &LiftArgs) -> filtk::Result<Report> {
    let file: MapFile = serde_json::from_str(&std::fs::read_to_string(&a.map)?)?;
    let base = a.map.parent().unwrap_or(Path::new("."));
    let src_path = a.source.clone().unwrap_or_else(|| base.join(&file.source));
    let tgt_path = a.target.clone().unwrap_or_else(|| base.join(&file.target));
    let (m, _) = load_module(&src_path)?;
    let (n, _) = load_module(&tgt_path)?;
    if file.kind != Kind::R {
        return Err(Error::Parse(format!("lifting takes an r map, got {}", file.kind)));
    }
    let s = m.space().clone();
    let lifted: ModuleMap = match m.kind() {
        Kind::Tb => {
            let psi = ModuleMap::from_keyed(&tb_to_r(&m)?, &tb_to_r(&n)?, file.components)?;
            lift_r_morphism(&m, &n, &psi)?
        }
        Kind::St => {
            let phi = ModuleMap::from_keyed(&restrict(&m, Kind::R)?, &restrict(&n, Kind::R)?, file.components)?;
            let big = lift_to_st(&m, &n, &phi)?;
            debug_assert!(restrict_map(&big, &s, Kind::R).equals(&phi, &restrict(&n, Kind::R)?));
            big
        }
        k => return Err(Error::Parse(format!("lifting takes tb or st modules, got {k}"))),
    };
    let iso = lifted.is_iso(&m, &n);
    let identity = lifted.equals(&ModuleMap::identity(&m), &n) && m == n;
    let out = MapFile {
        kind: m.kind(),
        source: src_path.display().to_string(),
        target: tgt_path.display().to_string(),
        components: lifted.to_keyed(&s),
    };
    std::fs::write(&a.output, serde_json::to_string_pretty(&out)? + "\n")?;
    let mut rep = Report::new();
    rep.lines.push(json!({
        "command": "lift",
        "kind": m.kind().as_str(),
        "output": a.output.display().to_string(),
        "isomorphism": iso,
        "identity": identity,
    }));
    rep.say(format!("wrote {} map to {}", m.kind(), a.output.display()));
    rep.say(format!("isomorphism: {iso}"));
    rep.say(format!("identity: {identity}"));
    Ok(rep)
}

fn say_verdict(rep: &mut Report, label: &str, v: &Verdict) {
    let flags = [
        ("graph realizable", v.graph_realizable),
        ("Cuntz-Krieger realizable", v.ck_realizable),
        ("unital graph realizable", v.unital_graph_realizable),
        ("unital Cuntz-Krieger realizable", v.unital_ck_realizable),
    ];
    for (name, f) in flags {
        if let Some(f) = f {
            rep.say(format!("{label}{name} per the range criteria: {f}"));
        }
    }
    if let Some(f) = v.phantom_criteria {
        rep.say(format!("{label}phantom criteria: {}", if f { "satisfied" } else { "not satisfied" }));
    }
    for c in v.failures() {
        rep.say(format!("  {} failed: {}", c.id, c.witness.as_deref().unwrap_or("")));
    }
}

fn pointed(m: Module, unit: Option<Vec<BigInt>>) -> filtk::Result<PointedModule> {
    let unit = match unit {
        Some(u) => u,
        None => vec![BigInt::from(0); unit_receptacle(&m)?.sum.gens()],
    };
    PointedModule::new(m, unit)
}

fn cmd_classify(file: &Path, unital: bool) -> filtk::Result<Report> {
    let (m, unit) = load_module(file)?;
    let mut rep = Report::new();
    let range_input = match m.kind() {
        Kind::R => Some(m.clone()),
        Kind::St => Some(restrict(&m, Kind::R)?),
        _ => None,
    };
    let mut primary = None;
    if let Some(r) = range_input {
        let v = if unital {
            let u = match (&unit, m.kind()) {
                (Some(u), Kind::R) => Some(u.clone()),
                _ => None,
            };
            range_check_unital(&pointed(r, u)?)?
        } else {
            range_check_ck(&r)?
        };
        primary = if unital { v.unital_graph_realizable } else { v.graph_realizable };
        say_verdict(&mut rep, "", &v);
        rep.lines.push(json!({ "command": "classify", "criteria": "range", "verdict": v }));
    }
    if matches!(m.kind(), Kind::St | Kind::B) {
        match phantom_verdict(&pointed(m.clone(), unit)?) {
            Ok(v) => {
                primary = v.phantom_criteria;
                say_verdict(&mut rep, "", &v);
                rep.lines.push(json!({ "command": "classify", "criteria": "phantom", "verdict": v }));
            }
            Err(Error::NotApplicable(w)) => {
                rep.say(format!("phantom criteria: not applicable ({w})"));
                rep.lines.push(json!({ "command": "classify", "criteria": "phantom", "not_applicable": w }));
            }
            Err(e) => return Err(e),
        }
    }
    rep.passed = primary.unwrap_or(false);
    Ok(rep)
}

fn cmd_selftest(seed: u64, fixtures: Option<PathBuf>) -> Report {
    let fixtures = fixtures.or_else(|| {
        let d = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        d.is_dir().then_some(d)
    });
    let cfg = selftest::Config { seed, fixtures };
    let mut rep = Report::new();
    for o in selftest::run(&cfg) {
        rep.passed &= o.passed;
        let mark = if o.passed { "PASS" } else { "FAIL" };
        rep.say(format!("[{mark}] {}. {}: {} ({:.2?})", o.criterion, o.name, o.detail, o.elapsed));
        rep.lines.push(serde_json::to_value(&o).expect("outcome serializes"));
    }
    rep
}
