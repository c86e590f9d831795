//! Command-line front end: file I/O, operation pipelines, reduction drivers,
//! table reproduction and the identity harness.

pub mod generate;
pub mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use fuchsian::instances::{d4_basic, hypergeometric_onf, hypergeometric_scf};
use fuchsian::io::{apply_op, parse_ops, parse_system, Op, System};
use fuchsian::katz::mc_max;
use fuchsian::okubo::{onf_from_scf, pick_generic, scf_from_onf};
use fuchsian::schlesinger::{index_of_rigidity, verify_scheme};
use fuchsian::spectral::{
    compare_table, d_max, enumerate_basic, idx_spec, is_basic, katz_reduce, oidx, onf_types, ord, table,
    PartitionTuple, IDX0_TABLE, IDX_MINUS2_TABLE,
};
use fuchsian::yokoyama::{reduction_parameters, reduction_scheme, reduction_step_for_scheme, rere_composite};
use fuchsian::{Error, OkuboSystem, RiemannScheme, SchlesingerTuple};

use crate::verify::{run_verify, VerifyOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PRECONDITION: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fuchsian",
    version,
    about = "Middle convolution and Okubo extension/restriction for Fuchsian systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Katz,
    Yokoyama,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Matrix,
    Scheme,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Scf,
    Onf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Schlesinger tuple of type 1^n,1^n,(n-1)1.
    HypergeometricScf,
    /// Okubo system of type 1^n,1^n,(n-1)1.
    HypergeometricOnf,
    /// Basic tuple of type 11,11,11,11.
    D4,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a built-in system with its verified scheme.
    Instance {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Apply operations (JSON lines) to a system; writes the result and a
    /// `<output>.log.jsonl` step log.
    Apply {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ops: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Reduce a system (or a spectral type) towards rank one.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "katz")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "matrix")]
        level: Level,
    },
    /// Check the identities of the calculus on seeded random instances.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Replace the convolution by a wrong one (harness self-test).
        #[arg(long, hide = true)]
        corrupt_mc: bool,
    },
    /// Reproduce the classification tables of basic types.
    Tables {
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Index of rigidity and related data of a system or spectral type.
    Idx {
        #[arg(long, conflicts_with = "spectral_type")]
        input: Option<PathBuf>,
        #[arg(long = "type")]
        spectral_type: Option<String>,
    },
    /// Print the declared scheme of a system, or check a scheme file against it.
    Scheme {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Convert between Schlesinger and Okubo normal forms.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Form,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate indivisible basic spectral types.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        idx: i64,
        #[arg(long)]
        max_ord: usize,
        #[arg(long, default_value_t = 5)]
        max_points: usize,
    },
}

/// Result of a command: exit code and the text for both streams.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: u8, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

/// Exit code and message of a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

pub type CmdResult = std::result::Result<String, (String, Failure)>;

fn input_error(e: Error) -> Failure {
    Failure::new(EXIT_PARSE, format!("invalid input: {e}"))
}

fn precondition(e: Error) -> Failure {
    Failure::new(EXIT_PRECONDITION, e.to_string())
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot write {}: {e}", path.display())))
}

fn load_system(path: &Path) -> std::result::Result<System, Failure> {
    parse_system(&read(path)?).map_err(input_error)
}

/// Parses arguments and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, String::new(), text)
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Instance { family, rank } => wrap(cmd_instance(family, rank)),
        Command::Apply { input, ops, output } => wrap(cmd_apply(&input, ops.as_deref(), &output)),
        Command::Reduce { input, mode, level } => cmd_reduce(&input, mode, level),
        Command::Verify {
            seed,
            count,
            bound,
            corrupt_mc,
        } => cmd_verify(seed, count, bound, VerifyOptions { corrupt_mc }),
        Command::Tables { which } => cmd_tables(&which),
        Command::Idx { input, spectral_type } => wrap(cmd_idx(input.as_deref(), spectral_type.as_deref())),
        Command::Scheme { input, check } => wrap(cmd_scheme(&input, check.as_deref())),
        Command::Convert { input, to, output } => wrap(cmd_convert(&input, to, output.as_deref())),
        Command::Enumerate {
            idx,
            max_ord,
            max_points,
        } => Ok(cmd_enumerate(idx, max_ord, max_points)),
    };
    match result {
        Ok(stdout) => Outcome::ok(stdout),
        Err((stdout, f)) => Outcome::fail(f.code, stdout, format!("error: {}\n", f.message)),
    }
}

fn wrap(r: std::result::Result<String, Failure>) -> CmdResult {
    r.map_err(|f| (String::new(), f))
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".log.jsonl");
    PathBuf::from(name)
}

fn describe_failure(ops: &[Op], k: usize, e: Error) -> Failure {
    let op = &ops[k];
    let mut message = format!("op {} ({}) failed: {e}", k + 1, op.name());
    let follows_mc = k > 0 && matches!(ops[k - 1], Op::Mc { .. });
    if matches!(op, Op::Onf) && matches!(e, Error::NotOkuboConvertible(_)) && follows_mc {
        message.push_str(
            "; the result of mc_lambda is convertible to Okubo form exactly when lambda is not an eigenvalue of A_0",
        );
    }
    Failure::new(EXIT_PRECONDITION, message)
}

fn step_record(k: usize, op: &Op, s: &System) -> String {
    let mut value = serde_json::to_value(op).expect("ops serialize");
    let map = value.as_object_mut().expect("ops are objects");
    map.insert("step".into(), (k + 1).into());
    map.insert(
        "form".into(),
        if matches!(s, System::Onf(_)) { "onf" } else { "scf" }.into(),
    );
    map.insert("rank".into(), s.rank().into());
    map.insert("idx".into(), index_of_rigidity(&s.to_scf()).into());
    map.insert(
        "scheme".into(),
        s.scheme()
            .map(|sc| serde_json::to_value(sc).expect("schemes serialize"))
            .unwrap_or(serde_json::Value::Null),
    );
    serde_json::to_string(&value).expect("values print")
}

/// Applies the operations left to right, then writes the output and the step
/// log. Replaying the log on the input reproduces the output.
pub fn cmd_apply(input: &Path, ops: Option<&Path>, output: &Path) -> std::result::Result<String, Failure> {
    let mut sys = load_system(input)?;
    let ops = match ops {
        Some(p) => parse_ops(&read(p)?).map_err(input_error)?,
        None => Vec::new(),
    };
    let mut log = String::new();
    for (k, op) in ops.iter().enumerate() {
        sys = apply_op(&sys, op).map_err(|e| describe_failure(&ops, k, e))?;
        log.push_str(&step_record(k, op, &sys));
        log.push('\n');
    }
    write(output, &(sys.to_json() + "\n"))?;
    write(&sidecar_path(output), &log)?;
    Ok(format!(
        "applied {} operation(s); rank {}; wrote {}\n",
        ops.len(),
        sys.rank(),
        output.display()
    ))
}

fn basic_name(m: &PartitionTuple) -> String {
    let key = m.canonical().to_string();
    let known = IDX0_TABLE
        .iter()
        .map(|r| (r, 0))
        .chain(IDX_MINUS2_TABLE.iter().map(|r| (r, -2)));
    for (row, idx) in known {
        if row
            .basic
            .parse::<PartitionTuple>()
            .map(|t| t.canonical().to_string())
            .ok()
            == Some(key.clone())
        {
            return format!("{} (basic type of index {idx})", row.basic);
        }
    }
    format!("{m} (basic type of index {})", idx_spec(m))
}

fn scheme_line(s: Option<&RiemannScheme>) -> String {
    s.map_or_else(|| "no scheme".to_string(), |s| s.to_string())
}

/// Reduction driver; every step records rank, index of rigidity and scheme.
pub fn cmd_reduce(input: &Path, mode: Mode, level: Level) -> CmdResult {
    let text = read(input).map_err(|f| (String::new(), f))?;
    match level {
        Level::Matrix => {
            let sys = parse_system(&text).map_err(|e| (String::new(), input_error(e)))?;
            match mode {
                Mode::Katz => reduce_katz_matrix(sys.to_scf()),
                Mode::Yokoyama => {
                    let o = match sys {
                        System::Onf(o) => o,
                        System::Scf(t) => onf_from_scf(&t).map_err(|e| (String::new(), precondition(e)))?,
                    };
                    reduce_yokoyama_matrix(o)
                }
            }
        }
        Level::Scheme => {
            let labelled = parse_system(&text).ok().and_then(|s| s.scheme().cloned());
            match (mode, labelled) {
                (Mode::Yokoyama, Some(s)) => reduce_yokoyama_scheme(s),
                (Mode::Yokoyama, None) => Err((
                    String::new(),
                    Failure::new(
                        EXIT_PRECONDITION,
                        "the Okubo reduction on schemes needs eigenvalue labels",
                    ),
                )),
                (Mode::Katz, Some(s)) => reduce_katz_scheme(PartitionTuple::from_scheme(&s)),
                (Mode::Katz, None) => {
                    let m: PartitionTuple = text.trim().parse().map_err(|e| (String::new(), input_error(e)))?;
                    reduce_katz_scheme(m)
                }
            }
        }
    }
}

fn reduce_katz_matrix(mut t: SchlesingerTuple) -> CmdResult {
    let mut out = String::new();
    let idx0 = index_of_rigidity(&t);
    for step in 0.. {
        let _ = writeln!(
            out,
            "step {step}: rank {}, idx {}, scheme {}",
            t.n(),
            index_of_rigidity(&t),
            scheme_line(t.scheme())
        );
        if index_of_rigidity(&t) != idx0 {
            return Err((out, Failure::new(EXIT_INVARIANT, "index of rigidity changed")));
        }
        if t.n() <= 1 {
            let _ = writeln!(out, "reached rank 1");
            break;
        }
        let Some(s) = t.scheme() else {
            return Err((
                out,
                precondition(Error::SchemeUnavailable("mc_max needs a declared scheme".into())),
            ));
        };
        let m = PartitionTuple::from_scheme(s);
        if d_max(&m) <= 0 {
            let _ = writeln!(out, "stopped at {}", basic_name(&m));
            break;
        }
        t = mc_max(&t).map_err(|e| (out.clone(), precondition(e)))?;
    }
    Ok(out)
}

fn reduce_yokoyama_matrix(mut o: OkuboSystem) -> CmdResult {
    let mut out = String::new();
    let idx0 = index_of_rigidity(&scf_from_onf(&o));
    for step in 0.. {
        let idx = index_of_rigidity(&scf_from_onf(&o));
        let _ = writeln!(
            out,
            "step {step}: rank {}, idx {idx}, blocks {:?}, scheme {}",
            o.n(),
            o.blocks(),
            scheme_line(o.scheme())
        );
        if idx != idx0 {
            return Err((out, Failure::new(EXIT_INVARIANT, "index of rigidity changed")));
        }
        if o.n() <= 1 {
            let _ = writeln!(out, "reached rank 1");
            break;
        }
        let step = match reduction_parameters(&o) {
            Ok(Some(s)) => s,
            Ok(None) => {
                let m = PartitionTuple::from_scheme(o.scheme().expect("checked by reduction_parameters"));
                let (basic, _) = katz_reduce(&m).map_err(|e| (out.clone(), precondition(e)))?;
                let _ = writeln!(
                    out,
                    "no rank-lowering step within Okubo systems; type {m} reduces to {}",
                    basic_name(&basic)
                );
                break;
            }
            Err(e) => return Err((out, precondition(e))),
        };
        let res = rere_composite(&o, step.j, &step.rho1, &step.rho2, &step.rho3, None)
            .map_err(|e| (out.clone(), precondition(e)))?;
        if res.okubo.n() + step.d != o.n() {
            return Err((
                out,
                Failure::new(EXIT_INVARIANT, "rank drop differs from the predicted value"),
            ));
        }
        let _ = writeln!(
            out,
            "  j = {}, rho1 = {}, rho2 = {}, rho3 = {}, epsilon = {}",
            step.j, step.rho1, step.rho2, step.rho3, res.epsilon
        );
        o = res.okubo;
        if o.scheme().is_none() {
            return Err((out, Failure::new(EXIT_INVARIANT, "the reduced system lost its scheme")));
        }
    }
    Ok(out)
}

fn reduce_katz_scheme(m: PartitionTuple) -> CmdResult {
    let mut out = String::new();
    let _ = writeln!(out, "step 0: ord {}, idx {}, type {m}", ord(&m), idx_spec(&m));
    let (fin, steps) = katz_reduce(&m).map_err(|e| (out.clone(), precondition(e)))?;
    for (k, s) in steps.iter().enumerate() {
        let _ = writeln!(out, "step {}: ord {}, idx {}, type {s}", k + 1, ord(s), idx_spec(s));
        if idx_spec(s) != idx_spec(&m) {
            return Err((out, Failure::new(EXIT_INVARIANT, "index of rigidity changed")));
        }
    }
    if ord(&fin) <= 1 {
        let _ = writeln!(out, "reached rank 1");
    } else {
        let _ = writeln!(out, "stopped at {}", basic_name(&fin));
    }
    Ok(out)
}

fn reduce_yokoyama_scheme(mut s: RiemannScheme) -> CmdResult {
    let mut out = String::new();
    for step in 0.. {
        let m = PartitionTuple::from_scheme(&s);
        let _ = writeln!(out, "step {step}: rank {}, idx {}, scheme {s}", s.rank(), idx_spec(&m));
        if s.rank() <= 1 {
            let _ = writeln!(out, "reached rank 1");
            break;
        }
        let Some(st) = reduction_step_for_scheme(&s) else {
            let (basic, _) = katz_reduce(&m).map_err(|e| (out.clone(), precondition(e)))?;
            let _ = writeln!(
                out,
                "no rank-lowering step within Okubo systems; type {m} reduces to {}",
                basic_name(&basic)
            );
            break;
        };
        let t_new = pick_generic(s.poles());
        let mut tried = Vec::new();
        let next = loop {
            if tried.len() > 64 {
                return Err((
                    out,
                    precondition(Error::NotGeneric("no admissible epsilon found".into())),
                ));
            }
            let eps = pick_generic(&tried);
            match reduction_scheme(&s, &st, &eps, &t_new) {
                Ok(n) if n.rank() + st.d == s.rank() => break n,
                _ => tried.push(eps),
            }
        };
        s = next;
    }
    Ok(out)
}

pub fn cmd_verify(seed: u64, count: usize, bound: usize, opts: VerifyOptions) -> CmdResult {
    let report = run_verify(seed, count, bound, opts);
    let text = report.render();
    if report.all_passed() {
        Ok(text)
    } else {
        let failed = report.failures().count();
        Err((
            text,
            Failure::new(EXIT_INVARIANT, format!("{failed} identity check(s) failed")),
        ))
    }
}

pub fn cmd_tables(which: &str) -> CmdResult {
    let names: Vec<&str> = match which {
        "all" => vec!["idx0", "idx-2"],
        w => vec![w],
    };
    let mut out = String::new();
    let mut exact = true;
    for name in names {
        let Some((idx, max_ord, max_points, rows)) = table(name) else {
            return Err((
                out,
                Failure::new(EXIT_PARSE, format!("unknown table {name:?}; use idx0, idx-2 or all")),
            ));
        };
        let found = enumerate_basic(idx, max_ord, max_points);
        let cmp =
            compare_table(&found, rows).map_err(|e| (out.clone(), Failure::new(EXIT_INVARIANT, e.to_string())))?;
        let _ = writeln!(
            out,
            "table {name}: index {idx}, ord <= {max_ord}, at most {max_points} points"
        );
        for (basic, o, onf_ord, types) in &cmp.matched {
            let _ = writeln!(
                out,
                "  ok  {basic:<18} ord {o:>2}  ord+oidx {onf_ord:>2}  {}",
                types.join("  ")
            );
        }
        for m in &cmp.mismatched {
            let _ = writeln!(out, "  MISMATCH {m}");
        }
        for m in &cmp.missing {
            let _ = writeln!(out, "  MISSING  {m}");
        }
        for m in &cmp.extra {
            let _ = writeln!(out, "  EXTRA    {m}");
        }
        let _ = writeln!(out, "  {} of {} rows matched", cmp.matched.len(), rows.len());
        exact &= cmp.is_exact();
    }
    if exact {
        Ok(out)
    } else {
        Err((out, Failure::new(EXIT_INVARIANT, "enumeration differs from the table")))
    }
}

fn type_report(m: &PartitionTuple) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "type {m}");
    let _ = writeln!(out, "ord {}", ord(m));
    let _ = writeln!(out, "idx {}", idx_spec(m));
    let _ = writeln!(out, "d_max {}", d_max(m));
    let _ = writeln!(out, "oidx {}", oidx(m));
    let _ = writeln!(out, "basic {}", is_basic(m));
    if oidx(m) > 0 {
        let types: Vec<String> = onf_types(m).iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "Okubo types of rank {}: {}",
            ord(m) as i64 + oidx(m),
            types.join("  ")
        );
    }
    out
}

pub fn cmd_idx(input: Option<&Path>, spectral_type: Option<&str>) -> std::result::Result<String, Failure> {
    match (input, spectral_type) {
        (_, Some(ty)) => Ok(type_report(&ty.parse().map_err(input_error)?)),
        (Some(path), None) => {
            let sys = load_system(path)?;
            let t = sys.to_scf();
            let mut out = format!("rank {}\nidx {}\n", t.n(), index_of_rigidity(&t));
            if let Some(s) = sys.scheme() {
                out.push_str(&type_report(&PartitionTuple::from_scheme(s)));
            }
            Ok(out)
        }
        (None, None) => Err(Failure::new(EXIT_PARSE, "give --input or --type")),
    }
}

pub fn cmd_scheme(input: &Path, check: Option<&Path>) -> std::result::Result<String, Failure> {
    let sys = load_system(input)?;
    match check {
        None => match sys.scheme() {
            Some(s) => Ok(format!(
                "{s}\n{}\n",
                serde_json::to_string(s).expect("schemes serialize")
            )),
            None => Err(precondition(Error::SchemeUnavailable(
                "the system declares no scheme".into(),
            ))),
        },
        Some(path) => {
            let s: RiemannScheme =
                serde_json::from_str(&read(path)?).map_err(|e| input_error(Error::Parse(e.to_string())))?;
            match verify_scheme(&sys.to_scf(), &s) {
                Ok(true) => Ok(format!("scheme {s} verified\n")),
                Ok(false) => Err(Failure::new(
                    EXIT_INVARIANT,
                    format!("scheme {s} does not match the system"),
                )),
                Err(e) => Err(Failure::new(EXIT_INVARIANT, e.to_string())),
            }
        }
    }
}

pub fn cmd_convert(input: &Path, to: Form, output: Option<&Path>) -> std::result::Result<String, Failure> {
    let sys = load_system(input)?;
    let converted = match to {
        Form::Scf => System::Scf(sys.to_scf()),
        Form::Onf => match sys {
            System::Onf(o) => System::Onf(o),
            System::Scf(t) => System::Onf(onf_from_scf(&t).map_err(precondition)?),
        },
    };
    let text = converted.to_json() + "\n";
    match output {
        Some(p) => {
            write(p, &text)?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text),
    }
}

pub fn cmd_instance(family: Family, rank: usize) -> std::result::Result<String, Failure> {
    if rank == 0 {
        return Err(Failure::new(EXIT_PRECONDITION, "rank must be positive"));
    }
    let sys = match family {
        Family::HypergeometricScf => System::Scf(hypergeometric_scf(rank)),
        Family::HypergeometricOnf => System::Onf(hypergeometric_onf(rank)),
        Family::D4 => System::Scf(d4_basic()),
    };
    Ok(sys.to_json() + "\n")
}

pub fn cmd_enumerate(idx: i64, max_ord: usize, max_points: usize) -> String {
    let mut out = String::new();
    let found = enumerate_basic(idx, max_ord, max_points);
    for m in &found {
        let types: Vec<String> = onf_types(m).iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "{:<18} ord {:>2}  oidx {}  Okubo: {}",
            m.to_string(),
            ord(m),
            oidx(m),
            types.join("  ")
        );
    }
    let _ = writeln!(out, "{} basic type(s)", found.len());
    out
}
