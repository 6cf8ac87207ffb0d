//! Command-line front end: check, decompose, verify, oracle and sweep.
//!
//! Exit codes: 0 success, 1 invalid / not-exists / not-covered, 2 usage error,
//! 3 timeout or constructive gap.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::certify::{Certificate, Verdict};
use crate::conditions::{check_constructive_hypotheses, check_necessary};
use crate::constructor::Constructor;
use crate::error::Error;
use crate::model::{even_partitions, GraphSpec, LengthSeq, Packing};
use crate::oracle::{oracle_decide, oracle_enumerate, Budget, Decision, SearchStats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

/// Largest λvu the sweep hands to the oracle.
const SWEEP_ORACLE_EDGES: u64 = 36;

#[derive(Debug, Parser)]
#[command(name = "bcd", version, about = "Cycle decompositions of complete bipartite multigraphs")]
struct Cli {
    /// Stream the switch audit log to stderr.
    #[arg(long, global = true)]
    trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the necessary conditions and the constructive hypotheses.
    Check(Instance),
    /// Construct a decomposition and print its certificate.
    Decompose {
        #[command(flatten)]
        instance: Instance,
        /// Fall back to exhaustive search when the construction does not apply.
        #[arg(long)]
        allow_oracle: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Verify a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Decide one sequence, or enumerate all decomposable sequences when --m is omitted.
    Oracle {
        #[command(flatten)]
        graph: Graph,
        #[arg(long)]
        m: Option<String>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Census over all small instances.
    Sweep {
        #[arg(long)]
        lambda_max: u32,
        #[arg(long)]
        vu_max: u32,
        #[command(flatten)]
        budget: BudgetArg,
    },
}

#[derive(Debug, Args)]
struct Graph {
    #[arg(long)]
    lambda: u32,
    #[arg(long)]
    v: u32,
    #[arg(long)]
    u: u32,
}

#[derive(Debug, Args)]
struct Instance {
    #[command(flatten)]
    graph: Graph,
    /// Comma-separated cycle lengths.
    #[arg(long)]
    m: String,
}

#[derive(Debug, Args)]
struct BudgetArg {
    /// Search budget in seconds.
    #[arg(long, env = "LKVU_ORACLE_BUDGET", default_value_t = 10.0)]
    budget: f64,
}

impl BudgetArg {
    fn get(&self) -> Budget {
        Budget::seconds(self.budget)
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
    trace: bool,
}

/// Failures that end a command early with an exit code.
struct Exit(i32);

type Step<T> = std::result::Result<T, Exit>;

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn warn(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.err, "warning: {}", s.as_ref());
    }

    fn usage(&mut self, s: impl AsRef<str>) -> Exit {
        let _ = writeln!(self.err, "error: {}", s.as_ref());
        Exit(EXIT_USAGE)
    }

    fn machine(&self) -> bool {
        self.format == Format::Machine
    }

    fn json(&mut self, v: serde_json::Value) {
        self.line(v.to_string());
    }

    fn trace_lines(&mut self, lines: &[String]) {
        if self.trace {
            for l in lines {
                let _ = writeln!(self.err, "trace: {l}");
            }
        }
    }

    fn certificate(&mut self, cert: &Certificate) {
        if self.machine() {
            self.line(serde_json::to_string(cert).expect("serializable"));
        } else {
            let _ = write!(self.out, "{}", cert.to_text());
        }
    }

    fn spec(&mut self, g: &Graph) -> Step<GraphSpec> {
        GraphSpec::new(g.lambda, g.v, g.u).map_err(|e| self.usage(e.to_string()))
    }

    /// Parses M, sorting it with a warning when given out of order.
    fn seq(&mut self, raw: &str) -> Step<LengthSeq> {
        let given: Vec<&str> = raw.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        let m: LengthSeq = raw.parse().map_err(|e: Error| self.usage(e.to_string()))?;
        let sorted: Vec<String> = m.lengths().iter().map(u32::to_string).collect();
        if given != sorted {
            self.warn(format!("M reordered to {m}"));
        }
        Ok(m)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    let mut io = Io {
        out,
        err,
        format: cli.format,
        trace: cli.trace,
    };
    let result = match &cli.command {
        Command::Check(inst) => check(&mut io, inst),
        Command::Decompose {
            instance,
            allow_oracle,
            budget,
        } => decompose(&mut io, instance, *allow_oracle, budget.get()),
        Command::Verify { cert } => verify(&mut io, cert),
        Command::Oracle { graph, m, budget } => oracle(&mut io, graph, m.as_deref(), budget.get()),
        Command::Sweep {
            lambda_max,
            vu_max,
            budget,
        } => sweep(&mut io, *lambda_max, *vu_max, budget.get()),
    };
    match result {
        Ok(code) | Err(Exit(code)) => code,
    }
}

fn check(io: &mut Io, inst: &Instance) -> Step<i32> {
    let spec = io.spec(&inst.graph)?;
    let m = io.seq(&inst.m)?;
    let nec = check_necessary(&spec, &m);
    let cov = check_constructive_hypotheses(&spec, &m);
    if io.machine() {
        io.json(json!({
            "instance": spec.to_string(),
            "M": m.lengths(),
            "necessary": nec.to_string(),
            "coverage": cov.to_string(),
        }));
    } else {
        io.line(format!("necessary: {nec}"));
        io.line(format!("coverage: {cov}"));
    }
    Ok(if nec.passed() && cov.covered() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn report(io: &mut Io, status: &str, detail: &str) {
    if io.machine() {
        io.json(json!({ "status": status, "detail": detail }));
    } else {
        io.line(format!("{status}: {detail}"));
    }
}

fn decompose(io: &mut Io, inst: &Instance, allow_oracle: bool, budget: Budget) -> Step<i32> {
    let spec = io.spec(&inst.graph)?;
    let m = io.seq(&inst.m)?;
    let nec = check_necessary(&spec, &m);
    if !nec.passed() {
        report(io, "not-exists", &format!("necessary condition {nec}"));
        return Ok(EXIT_NEGATIVE);
    }
    let mut builder = Constructor::new(budget);
    let built = builder.decompose(&spec, &m);
    let journal = builder.take_journal();
    io.trace_lines(&journal);
    let (status, code, detail) = match built {
        Ok(p) => {
            io.certificate(&Certificate::from_packing(&p));
            return Ok(EXIT_OK);
        }
        Err(Error::NotCovered(r)) => ("not-covered", EXIT_NEGATIVE, r),
        Err(Error::ConstructiveGap(r)) => ("constructive-gap", EXIT_INCOMPLETE, r),
        Err(e) => return Err(io.usage(e.to_string())),
    };
    if !allow_oracle {
        report(io, status, &detail);
        return Ok(code);
    }
    if io.trace {
        let _ = writeln!(io.err, "trace: {status} ({detail}); running oracle");
    }
    Ok(decide(io, &spec, &m, budget))
}

/// Runs the oracle on one instance and prints its certificate or attestation.
fn decide(io: &mut Io, spec: &GraphSpec, m: &LengthSeq, budget: Budget) -> i32 {
    match oracle_decide(spec, m, &budget) {
        Decision::Exists(cycles) => {
            io.certificate(&Certificate::from_cycles(spec, &cycles));
            EXIT_OK
        }
        Decision::NotExists(stats) => {
            attest(io, "not-exists", spec, m, stats);
            EXIT_NEGATIVE
        }
        Decision::Timeout(stats) => {
            attest(io, "timeout", spec, m, stats);
            EXIT_INCOMPLETE
        }
    }
}

fn attest(io: &mut Io, status: &str, spec: &GraphSpec, m: &LengthSeq, stats: SearchStats) {
    if io.machine() {
        io.json(json!({
            "status": status,
            "instance": spec.to_string(),
            "M": m.lengths(),
            "stats": stats,
        }));
    } else {
        io.line(format!("{status}: {stats}"));
    }
}

fn verify(io: &mut Io, path: &PathBuf) -> Step<i32> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| io.usage(format!("cannot read {}: {e}", path.display())))?;
    let verdict = match Certificate::parse(&text) {
        Ok(cert) => cert.verify(),
        Err(reason) => Verdict::Invalid(reason),
    };
    if io.machine() {
        let reason = match &verdict {
            Verdict::Valid => None,
            Verdict::Invalid(r) => Some(r.clone()),
        };
        io.json(json!({ "valid": verdict.is_valid(), "reason": reason }));
    } else {
        io.line(verdict.to_string());
    }
    Ok(if verdict.is_valid() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn oracle(io: &mut Io, graph: &Graph, m: Option<&str>, budget: Budget) -> Step<i32> {
    let spec = io.spec(graph)?;
    if let Some(raw) = m {
        let m = io.seq(raw)?;
        return Ok(decide(io, &spec, &m, budget));
    }
    let e = oracle_enumerate(&spec, &budget);
    if io.machine() {
        let list = |v: &[LengthSeq]| v.iter().map(|m| m.lengths().to_vec()).collect::<Vec<_>>();
        io.json(json!({
            "instance": spec.to_string(),
            "searched": e.searched,
            "decomposable": list(&e.decomposable),
            "timed_out": list(&e.timed_out),
        }));
    } else {
        for m in &e.decomposable {
            io.line(format!("exists {m}"));
        }
        for m in &e.timed_out {
            io.line(format!("timeout {m}"));
        }
        io.line(format!(
            "searched {} sequences: {} decomposable, {} timed out",
            e.searched,
            e.decomposable.len(),
            e.timed_out.len()
        ));
    }
    Ok(if e.timed_out.is_empty() {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    })
}

/// Emits `p` as text, parses it back and verifies the parsed copy.
fn round_trip(p: &Packing) -> Verdict {
    match Certificate::parse(&Certificate::from_packing(p).to_text()) {
        Ok(c) => c.verify(),
        Err(r) => Verdict::Invalid(r),
    }
}

#[derive(Default)]
struct Tally {
    instances: usize,
    necessary_fail: usize,
    covered: usize,
    constructed: usize,
    gaps: usize,
    gaps_unresolved: usize,
    oracle_exists: usize,
    oracle_not_exists: usize,
    oracle_timeout: usize,
    bad_certificates: usize,
}

fn sweep(io: &mut Io, lambda_max: u32, vu_max: u32, budget: Budget) -> Step<i32> {
    let mut tally = Tally::default();
    if !io.machine() {
        io.line(format!(
            "{:<12} {:<28} {:<8} {:<8} {:<12} {}",
            "instance", "M", "nec", "cover", "construct", "oracle"
        ));
    }
    for lambda in 1..=lambda_max {
        for v in 1..=vu_max {
            for u in v..=vu_max / v {
                let spec = GraphSpec::new(lambda, v, u).map_err(|e| io.usage(e.to_string()))?;
                for m in even_partitions(spec.edge_count() as u32, 2 * v) {
                    sweep_one(io, &spec, &m, budget, &mut tally);
                }
            }
        }
    }
    let t = &tally;
    if io.machine() {
        io.json(json!({
            "summary": {
                "instances": t.instances,
                "necessary_fail": t.necessary_fail,
                "covered": t.covered,
                "constructed": t.constructed,
                "gaps": t.gaps,
                "gaps_unresolved": t.gaps_unresolved,
                "oracle_exists": t.oracle_exists,
                "oracle_not_exists": t.oracle_not_exists,
                "oracle_timeout": t.oracle_timeout,
                "bad_certificates": t.bad_certificates,
            }
        }));
    } else {
        io.line(format!(
            "instances={} necessary_fail={} covered={} constructed={} gaps={} gaps_unresolved={} oracle: exists={} not_exists={} timeout={} bad_certificates={}",
            t.instances, t.necessary_fail, t.covered, t.constructed, t.gaps, t.gaps_unresolved,
            t.oracle_exists, t.oracle_not_exists, t.oracle_timeout, t.bad_certificates
        ));
    }
    Ok(if t.bad_certificates > 0 {
        EXIT_NEGATIVE
    } else if t.gaps_unresolved > 0 {
        EXIT_INCOMPLETE
    } else {
        EXIT_OK
    })
}

fn sweep_one(io: &mut Io, spec: &GraphSpec, m: &LengthSeq, budget: Budget, tally: &mut Tally) {
    tally.instances += 1;
    let nec = check_necessary(spec, m);
    if !nec.passed() {
        tally.necessary_fail += 1;
        return;
    }
    let covered = check_constructive_hypotheses(spec, m).covered();
    let mut construct = "-".to_string();
    let mut gap = false;
    if covered {
        tally.covered += 1;
        let mut builder = Constructor::new(budget);
        let built = builder.decompose(spec, m);
        io.trace_lines(&builder.take_journal());
        match built {
            Ok(p) => {
                if round_trip(&p).is_valid() {
                    tally.constructed += 1;
                    construct = "ok".into();
                } else {
                    tally.bad_certificates += 1;
                    construct = "bad-cert".into();
                }
            }
            Err(_) => {
                tally.gaps += 1;
                gap = true;
                construct = "gap".into();
            }
        }
    }
    let mut oracle = "-".to_string();
    if (!covered || gap) && spec.edge_count() <= SWEEP_ORACLE_EDGES {
        let d = oracle_decide(spec, m, &budget);
        match &d {
            Decision::Exists(cycles) => {
                let p = Packing::from_cycles(*spec, cycles.clone()).expect("oracle cycles fit");
                if round_trip(&p).is_valid() {
                    tally.oracle_exists += 1;
                } else {
                    tally.bad_certificates += 1;
                }
            }
            Decision::NotExists(_) => tally.oracle_not_exists += 1,
            Decision::Timeout(_) => tally.oracle_timeout += 1,
        }
        if gap && matches!(d, Decision::Timeout(_)) {
            tally.gaps_unresolved += 1;
        }
        oracle = d.label().to_string();
    } else if gap {
        tally.gaps_unresolved += 1;
        oracle = "skipped".into();
    }
    if io.machine() {
        io.json(json!({
            "instance": spec.to_string(),
            "M": m.lengths(),
            "covered": covered,
            "construct": construct,
            "oracle": oracle,
        }));
    } else {
        io.line(format!(
            "{:<12} {:<28} {:<8} {:<8} {:<12} {}",
            spec.to_string(),
            m.to_string(),
            "pass",
            if covered { "yes" } else { "no" },
            construct,
            oracle
        ));
    }
}
