//! The `h3t` command line.
//!
//! Exit codes: 0 on pass (or the expected solver answer), 1 on a failed check,
//! 2 on usage, input or budget errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acceptance;
use crate::amalgam::{build_generic, strong_amalgamate, Embedding};
use crate::classify::{class_tally, find_h4, in_constrained_class, ClassSet};
use crate::error::Error;
use crate::format::{self, Document};
use crate::indep;
use crate::qftype::qf_type;
use crate::report::WitnessReport;
use crate::solver::{SolveOutcome, Solver};
use crate::structure::{Hypertournament, PointId};
use crate::witness;

#[derive(Debug, Parser)]
#[command(name = "h3t", version, about = "Finite H4-free 3-hypertournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report the first H4 subset, or confirm the structure is H4-free.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also check membership in this class (c4o4h4, c4h4, c4, c4o4).
        #[arg(long)]
        class: Option<ClassSet>,
    },
    /// Tally the 4-subsets by class.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build a structure approximating the generic one.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "c4o4")]
        class: ClassSet,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strong amalgam of B1 and B2 over A; embeddings come from shared names.
    Amalgamate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b1: PathBuf,
        #[arg(long)]
        b2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete a partial structure subject to its `var`/`lit` lines.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "c4o4")]
        class: ClassSet,
        #[arg(long, value_enum, default_value_t = Expect::Sat)]
        expect: Expect,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the construction checks.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[command(flatten)]
        opts: WitnessOpts,
    },
    /// Independence queries and sweeps.
    Indep {
        #[arg(value_enum)]
        kind: IndepKind,
        #[command(flatten)]
        opts: IndepOpts,
    },
    /// Run the acceptance suite.
    Accept {
        /// Run a single criterion, e.g. A5.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    Ip2,
    Sop3,
    Tp2,
    Nsop4,
    Claim1,
    Template,
    EmptyBase,
}

#[derive(Debug, Args)]
struct WitnessOpts {
    /// ip2: grid side; sop3: chain length; tp2: ROWSxCOLS; nsop4: MxN;
    /// claim1: largest base; template: base size.
    #[arg(long)]
    size: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    /// Report file; emitted structures go next to it with a `.h3t` extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndepKind {
    Ht,
    Asym,
    Morley,
    Kim,
    Conant,
}

#[derive(Debug, Args)]
struct IndepOpts {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long = "A", value_delimiter = ',')]
    a: Vec<PointId>,
    #[arg(long = "B", value_delimiter = ',')]
    b: Vec<PointId>,
    #[arg(long = "C", value_delimiter = ',')]
    c: Vec<PointId>,
    #[arg(long = "len", default_value_t = 4)]
    len: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest structure for the asymmetry scan.
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

type Outcome = std::result::Result<(String, i32), CliError>;

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn read_doc(path: &Path) -> std::result::Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    format::parse(&text).map_err(|e| match e {
        Error::Parse { line, msg } => CliError::Usage(format!(
            "{}: parse error at line {line}: {msg}",
            path.display()
        )),
        other => other.into(),
    })
}

fn read_total(path: &Path) -> std::result::Result<(Hypertournament, Document), CliError> {
    let doc = read_doc(path)?;
    match doc.total() {
        Ok(h) => Ok((h, doc)),
        Err(Error::Incomplete { missing }) => Err(CliError::Usage(format!(
            "{}: structure is partial ({missing} triples unassigned); use `solve` to complete it",
            path.display()
        ))),
        Err(e) => Err(e.into()),
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Checks that the directory of an output path exists before any work starts.
fn validate_out(path: Option<&PathBuf>) -> std::result::Result<(), CliError> {
    if let Some(p) = path {
        let dir = p
            .parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(CliError::Usage(format!(
                "{}: directory does not exist",
                dir.display()
            )));
        }
    }
    Ok(())
}

fn pass_code(passed: bool) -> i32 {
    if passed {
        0
    } else {
        1
    }
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { input, class } => check(&input, class),
        Command::Classify { input } => classify(&input),
        Command::Generate {
            n,
            class,
            depth,
            seed,
            out,
        } => generate(n, class, depth, seed, out),
        Command::Amalgamate { a, b1, b2, out } => amalgamate(&a, &b1, &b2, out),
        Command::Solve {
            input,
            class,
            expect,
            out,
        } => solve(&input, class, expect, out),
        Command::Witness { kind, opts } => run_witness(kind, opts),
        Command::Indep { kind, opts } => run_indep(kind, opts),
        Command::Accept { only, threads } => accept(only, threads),
    }
}

fn check(input: &Path, class: Option<ClassSet>) -> Outcome {
    let (h, _) = read_total(input)?;
    let mut out = String::new();
    let mut ok = true;
    match find_h4(&h) {
        Some([a, b, c, d]) => {
            ok = false;
            writeln!(out, "H4 at {{{a},{b},{c},{d}}}").unwrap();
        }
        None => writeln!(out, "H4-free ({} points)", h.len()).unwrap(),
    }
    if let Some(cls) = class {
        let member = in_constrained_class(&h, cls);
        ok &= member;
        writeln!(
            out,
            "class {cls}: {}",
            if member { "member" } else { "not a member" }
        )
        .unwrap();
    }
    Ok((out, pass_code(ok)))
}

fn classify(input: &Path) -> Outcome {
    let (h, _) = read_total(input)?;
    let [c4, o4, h4] = class_tally(&h);
    let mut out = format!("C4: {c4}, O4: {o4}, H4: {h4}\n");
    let sets: Vec<String> = [
        ClassSet::CYCLIC,
        ClassSet::EVEN,
        ClassSet::H4_FREE,
        ClassSet::ALL,
    ]
    .into_iter()
    .filter(|&s| in_constrained_class(&h, s))
    .map(|s| s.to_string())
    .collect();
    writeln!(out, "member of: {}", sets.join(" ")).unwrap();
    Ok((out, 0))
}

fn generate(n: usize, class: ClassSet, depth: usize, seed: u64, out: Option<PathBuf>) -> Outcome {
    validate_out(out.as_ref())?;
    let built = build_generic(n, class, depth, seed)?;
    let text = format::write_total(&built.structure);
    let mut msg = format!(
        "generated {} points in class {class}; {}/{} admissible types over <={depth}-subsets realized\n",
        built.structure.len(),
        built.required - built.gaps.len(),
        built.required
    );
    match out {
        Some(p) => write_file(&p, &text)?,
        None => msg.push_str(&text),
    }
    Ok((msg, pass_code(built.complete())))
}

/// Embedding of `a` into `b`: by shared names when `a` names its points,
/// otherwise the identity on the first `|A|` points.
fn embedding_by_names(
    a: &Hypertournament,
    adoc: &Document,
    b: &Hypertournament,
    bdoc: &Document,
    which: &str,
) -> std::result::Result<Embedding, CliError> {
    let map: Vec<PointId> = if adoc.has_names() {
        adoc.names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let name = name
                    .as_deref()
                    .ok_or_else(|| CliError::Usage(format!("point {i} of A has no name")))?;
                bdoc.point_named(name)
                    .ok_or_else(|| CliError::Usage(format!("{which} has no point named `{name}`")))
            })
            .collect::<std::result::Result<_, _>>()?
    } else {
        (0..a.len()).collect()
    };
    Ok(Embedding::new(map, a, b)?)
}

fn amalgamate(a: &Path, b1: &Path, b2: &Path, out: Option<PathBuf>) -> Outcome {
    validate_out(out.as_ref())?;
    let (ha, da) = read_total(a)?;
    let (h1, d1) = read_total(b1)?;
    let (h2, d2) = read_total(b2)?;
    let f1 = embedding_by_names(&ha, &da, &h1, &d1, "B1")?;
    let f2 = embedding_by_names(&ha, &da, &h2, &d2, "B2")?;
    let am = strong_amalgamate(&ha, &h1, &h2, &f1, &f2)?;
    // carry names over; B1 wins on shared points
    let mut names: Vec<Option<String>> = vec![None; am.structure.len()];
    for (doc, g) in [(&d2, &am.g2), (&d1, &am.g1)] {
        for (p, name) in doc.names.iter().enumerate() {
            if name.is_some() {
                names[g.apply(p)] = name.clone();
            }
        }
    }
    let text = format::write_named(&am.structure, &names);
    let mut msg = format!(
        "strong amalgam on {} points (A: {}, B1: {}, B2: {})\n",
        am.structure.len(),
        ha.len(),
        h1.len(),
        h2.len()
    );
    match out {
        Some(p) => write_file(&p, &text)?,
        None => msg.push_str(&text),
    }
    Ok((msg, 0))
}

fn solve(input: &Path, class: ClassSet, expect: Expect, out: Option<PathBuf>) -> Outcome {
    validate_out(out.as_ref())?;
    let doc = read_doc(input)?;
    let outcome = Solver::new(class).solve(&doc.structure, &doc.constraints)?;
    let sat = outcome.is_sat();
    let mut msg = String::new();
    match outcome {
        SolveOutcome::Sat(model) => {
            msg.push_str("SAT\n");
            for (name, p) in doc.constraints.var_names().iter().zip(&model.assignment) {
                writeln!(msg, "# {name} = {p}").unwrap();
            }
            let text = format::write_total(&model.structure);
            match out {
                Some(p) => write_file(&p, &text)?,
                None => msg.push_str(&text),
            }
        }
        SolveOutcome::Unsat(_) => msg.push_str("UNSAT\n"),
    }
    Ok((msg, pass_code(sat == (expect == Expect::Sat))))
}

fn parse_size(size: Option<&str>, default: &[usize]) -> std::result::Result<Vec<usize>, CliError> {
    let Some(s) = size else {
        return Ok(default.to_vec());
    };
    let parts: std::result::Result<Vec<usize>, _> =
        s.split(['x', 'X', ',']).map(|t| t.trim().parse()).collect();
    match parts {
        Ok(v) if v.len() == default.len() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "--size expects {} number(s), got `{s}`",
            default.len()
        ))),
    }
}

/// Reports in fixed order plus structures worth saving.
struct WitnessRun {
    reports: Vec<WitnessReport>,
    structures: Vec<(String, Hypertournament)>,
}

fn run_witness(kind: WitnessKind, opts: WitnessOpts) -> Outcome {
    validate_out(opts.out.as_ref())?;
    let size = opts.size.as_deref();
    let seed = opts.seed;
    let run = match kind {
        WitnessKind::Ip2 => {
            let [n] = parse_size(size, &[2])?[..] else {
                unreachable!()
            };
            let (w, r) = witness::ip2_build(n)?;
            WitnessRun {
                reports: vec![r],
                structures: vec![("ip2".into(), w.structure)],
            }
        }
        WitnessKind::Sop3 => {
            let [m] = parse_size(size, &[6])?[..] else {
                unreachable!()
            };
            let cycle = witness::sop3_cycle_check()?;
            let (w, r) = witness::sop3_build(m)?;
            WitnessRun {
                reports: vec![cycle, r],
                structures: vec![("sop3".into(), w.structure)],
            }
        }
        WitnessKind::Tp2 => {
            let [rows, cols] = parse_size(size, &[3, 4])?[..] else {
                unreachable!()
            };
            let (w, r) = witness::tp2_build(rows, cols)?;
            let pair = witness::tp2_pair_claim_check()?;
            WitnessRun {
                reports: vec![r, pair],
                structures: vec![("tp2".into(), w.structure)],
            }
        }
        WitnessKind::Nsop4 => {
            let [m, n] = parse_size(size, &[1, 2])?[..] else {
                unreachable!()
            };
            let r = witness::nsop4_sweep(m, n, opts.trials, seed)?;
            WitnessRun {
                reports: vec![r],
                structures: vec![],
            }
        }
        WitnessKind::Claim1 => {
            let [max_c] = parse_size(size, &[4])?[..] else {
                unreachable!()
            };
            let trials = opts.trials.unwrap_or(100);
            let case2 = witness::claim1_sweep(false, trials, max_c, seed)?;
            let case1 = witness::claim1_sweep(true, trials.div_ceil(5), max_c, seed ^ 1)?;
            let pair = witness::tp2_pair_claim_check()?;
            WitnessRun {
                reports: vec![case2, case1, pair],
                structures: vec![],
            }
        }
        WitnessKind::Template => {
            let [k] = parse_size(size, &[2])?[..] else {
                unreachable!()
            };
            if k == 0 {
                return Err(CliError::Usage(
                    "the template needs a nonempty base; see `witness empty-base`".into(),
                ));
            }
            let n = k + 5;
            let h = crate::solver::random_in_class(n, ClassSet::H4_FREE, seed)?;
            let base: Vec<PointId> = (0..k).collect();
            let p = qf_type(&h, &[n - 1], &base)?;
            let ext = witness::invariant_extension_template(
                &h.restrict(&(0..n - 1).collect::<Vec<_>>()),
                &base,
                &[0],
                &p,
            )?;
            WitnessRun {
                reports: vec![ext.report],
                structures: vec![("template".into(), ext.structure)],
            }
        }
        WitnessKind::EmptyBase => WitnessRun {
            reports: vec![witness::empty_base_obstruction()?],
            structures: vec![],
        },
    };
    emit_reports(run, opts.out.as_deref())
}

fn emit_reports(run: WitnessRun, out: Option<&Path>) -> Outcome {
    let passed = run.reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &run.reports {
        write!(text, "{r}").unwrap();
    }
    match out {
        Some(p) => {
            write_file(p, &text)?;
            let mut msg = String::new();
            for r in &run.reports {
                writeln!(msg, "CLAIM {} {}", r.claim, r.status()).unwrap();
            }
            let stem = p.with_extension("");
            for (name, h) in &run.structures {
                let path = PathBuf::from(format!("{}.{name}.h3t", stem.display()));
                write_file(&path, &format::write_total(h))?;
                writeln!(msg, "wrote {}", path.display()).unwrap();
            }
            for (i, r) in run.reports.iter().enumerate() {
                if let Some(cx) = &r.counterexample {
                    let path = PathBuf::from(format!("{}.counterexample{i}.h3t", stem.display()));
                    write_file(&path, cx)?;
                    writeln!(msg, "wrote {}", path.display()).unwrap();
                }
            }
            Ok((msg, pass_code(passed)))
        }
        None => Ok((text, pass_code(passed))),
    }
}

fn need_input(opts: &IndepOpts) -> std::result::Result<Hypertournament, CliError> {
    let path = opts
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("this query needs --in <file.h3t>".into()))?;
    Ok(read_total(path)?.0)
}

fn run_indep(kind: IndepKind, opts: IndepOpts) -> Outcome {
    validate_out(opts.out.as_ref())?;
    match kind {
        IndepKind::Ht => {
            let h = need_input(&opts)?;
            for &p in opts.a.iter().chain(&opts.b).chain(&opts.c) {
                if p >= h.len() {
                    return Err(Error::PointOutOfRange {
                        point: p,
                        n: h.len(),
                    }
                    .into());
                }
            }
            let fwd = indep::ind_ht(&h, &opts.a, &opts.b, &opts.c);
            let back = indep::ind_ht(&h, &opts.b, &opts.a, &opts.c);
            let msg = format!("A ind-ht over C of B: {fwd}\nB ind-ht over C of A: {back}\n");
            Ok((msg, pass_code(fwd)))
        }
        IndepKind::Asym => {
            let (h, w) = indep::asymmetry_witness();
            let scan = indep::asymmetry_scan(opts.max_n)?;
            emit_reports(
                WitnessRun {
                    reports: vec![w, scan],
                    structures: vec![("asym".into(), h)],
                },
                opts.out.as_deref(),
            )
        }
        IndepKind::Morley => {
            let h = need_input(&opts)?;
            let seq = indep::build_ht_morley(&h, &opts.c, &opts.b, opts.len)?;
            let mut report = seq.report.clone();
            for (i, copy) in seq.copies.iter().enumerate() {
                report.note(format!("copy {i}: {copy:?}"));
            }
            emit_reports(
                WitnessRun {
                    reports: vec![report],
                    structures: vec![("morley".into(), seq.structure)],
                },
                opts.out.as_deref(),
            )
        }
        IndepKind::Kim => {
            let h = need_input(&opts)?;
            let mut over: Vec<PointId> = opts.c.iter().chain(&opts.b).copied().collect();
            over.sort_unstable();
            over.dedup();
            let ty = qf_type(&h, &opts.a, &over)?;
            let r = indep::kim_survival(&h, &opts.c, &opts.b, &ty, opts.len)?;
            emit_reports(
                WitnessRun {
                    reports: vec![r],
                    structures: vec![],
                },
                opts.out.as_deref(),
            )
        }
        IndepKind::Conant => {
            let r = indep::conant_triviality_report(opts.trials, 4, 2, opts.len, opts.seed)?;
            emit_reports(
                WitnessRun {
                    reports: vec![r],
                    structures: vec![],
                },
                opts.out.as_deref(),
            )
        }
    }
}

fn accept(only: Option<String>, threads: usize) -> Outcome {
    let verdicts = match only {
        Some(id) => {
            let c = acceptance::criterion(&id)
                .ok_or_else(|| CliError::Usage(format!("no criterion `{id}`")))?;
            vec![c.run()]
        }
        None => acceptance::run_all(threads.max(1)),
    };
    let mut out = String::new();
    for v in &verdicts {
        writeln!(out, "{v}").unwrap();
    }
    let passed = verdicts.iter().filter(|v| v.passed).count();
    writeln!(out, "{passed}/{} criteria passed", verdicts.len()).unwrap();
    let on_time = acceptance::within_budget(&verdicts);
    if !on_time {
        writeln!(
            out,
            "over the {}s time budget",
            acceptance::SUITE_TIME_LIMIT.as_secs()
        )
        .unwrap();
    }
    Ok((out, pass_code(passed == verdicts.len() && on_time)))
}
