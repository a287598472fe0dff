//! Command-line front end: presentation files, the example corpus and reports.
//!
//! [`run`] takes the arguments of one invocation and returns the exit code
//! with the rendered output, so the binary stays a thin wrapper.
//!
//! Exit codes: 0 success, 1 parse error (file or command line), 2 violated
//! precondition, 3 inconsistent pc presentation.

pub mod corpus;
pub mod emit;
pub mod parse;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bogomolov::{cp_cover_of, multiplier_report, verify_cp_pair, MultiplierError, ScanStrategy};
use crate::lazard::{b0_of_group, to_group, to_lie, verify_correspondence, LazardError};
use crate::liering::{realize, LieRingError, Realization};
use crate::pcgroup::{PcError, PcGroup};
use corpus::{family, Family, FamilyError};
use parse::{parse_lie_expr, parse_with_p, Kind, ParseError, PresentationFile};
use report::{invariant_list, InputDigest, RunReport};

#[derive(Parser, Debug)]
#[command(name = "liemult", version, about = "Schur and Bogomolov multipliers, CP covers and the Lazard correspondence")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel scans.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Presentation file (.lr or .pc).
    file: PathBuf,
    /// Prime, overriding the file header.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Debug)]
struct Scan {
    /// How commuting pairs are enumerated: naive or centralizer.
    #[arg(long, default_value = "centralizer")]
    strategy: ScanStrategy,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schur multiplier of a Lie ring.
    Multiplier {
        #[command(flatten)]
        input: Input,
    },
    /// Bogomolov multiplier of a Lie ring, or of a group through its Lazard ring.
    B0 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scan: Scan,
    },
    /// CP cover of a Lie ring.
    Cpcover {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scan: Scan,
        /// Write the cover as a presentation file.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Lazard correspondence.
    Lazard {
        #[command(subcommand)]
        direction: LazardCommand,
    },
    /// Check a correspondence or a CP defining pair.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Print a built-in family member: g1p, l1p, g2p or l2p.
    Examples {
        family: Family,
        #[arg(long)]
        p: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum LazardCommand {
    /// Group of a Lie ring, as a pc presentation.
    ToGroup {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Lie ring of a pc group, on the images of the pc generators.
    ToLie {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Structural checks of the Lazard correspondence for a ring or group.
    Correspondence {
        #[command(flatten)]
        input: Input,
    },
    /// The three conditions of a CP defining pair (C, K) over a base ring.
    CpPair {
        /// The extension C.
        cover: PathBuf,
        /// The base ring L.
        base: PathBuf,
        /// A generator of K in the generators of C; repeatable.
        #[arg(long, required = true)]
        kernel: Vec<String>,
        #[arg(long)]
        p: Option<u64>,
    },
}

/// Exit code and rendered output of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(format!("parse error: {e}"))
    }
}

impl From<LieRingError> for CliError {
    fn from(e: LieRingError) -> Self {
        CliError::precondition(e.to_string())
    }
}

impl From<PcError> for CliError {
    fn from(e: PcError) -> Self {
        let code = if matches!(e, PcError::Inconsistent(_)) { 3 } else { 2 };
        CliError { code, message: e.to_string() }
    }
}

impl From<MultiplierError> for CliError {
    fn from(e: MultiplierError) -> Self {
        CliError::precondition(e.to_string())
    }
}

impl From<LazardError> for CliError {
    fn from(e: LazardError) -> Self {
        match e {
            LazardError::Group(g) => g.into(),
            e => CliError::precondition(e.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Parse(e) => e.into(),
            e => CliError::precondition(e.to_string()),
        }
    }
}

struct Loaded {
    file: PresentationFile,
    digest: InputDigest,
}

fn load(path: &Path, p: Option<u64>) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::precondition(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::parse(format!("{} is not UTF-8", path.display())))?;
    let file = parse_with_p(text, p).map_err(|e| CliError::parse(format!("{}:{e}", path.display())))?;
    Ok(Loaded { file, digest: InputDigest::of(&path.display().to_string(), &bytes) })
}

fn expect_kind(l: &Loaded, kind: Kind) -> Result<(), CliError> {
    if l.file.kind != kind {
        return Err(CliError::precondition(format!(
            "{} is a {} file; this command needs a {} file",
            l.digest.path,
            l.file.kind.keyword(),
            kind.keyword()
        )));
    }
    Ok(())
}

fn realize_file(l: &Loaded, rep: &mut RunReport) -> Result<Realization, CliError> {
    let pres = l.file.to_lie_presentation().map_err(CliError::precondition)?;
    let r = rep.timed("realize", || realize(&pres))?;
    rep.diagnostics.extend(r.diagnostics.iter().cloned());
    Ok(r)
}

fn group_of(l: &Loaded, rep: &mut RunReport) -> Result<PcGroup, CliError> {
    let pres = l.file.to_pc_presentation().map_err(CliError::precondition)?;
    Ok(rep.timed("consistency", || PcGroup::new(pres))?)
}

fn write_output(path: &Path, text: &str, rep: &mut RunReport) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::precondition(format!("cannot write {}: {e}", path.display())))?;
    rep.output_file = Some(path.display().to_string());
    Ok(())
}

fn start(command: &str, l: &Loaded) -> RunReport {
    let mut rep = RunReport::new(command);
    rep.inputs.push(l.digest.clone());
    rep.p = Some(l.file.p());
    rep
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_multiplier(input: &Input) -> Result<RunReport, CliError> {
    let l = load(&input.file, input.p)?;
    expect_kind(&l, Kind::LieRing)?;
    let mut rep = start("multiplier", &l);
    let r = realize_file(&l, &mut rep)?;
    let schur = rep.timed("schur", || r.context.schur_multiplier());
    rep.set("ring_order", r.ring.order().to_string());
    rep.set("ring_class", r.context.class());
    rep.set("schur", invariant_list(&schur));
    rep.line(format!("{} (p = {})", l.file.name, l.file.p()));
    rep.line(format!("|L| = {}, class {}", r.ring.order(), r.context.class()));
    rep.line(format!("M(L) = {schur}"));
    Ok(rep)
}

fn cmd_b0(input: &Input, scan: &Scan) -> Result<RunReport, CliError> {
    let l = load(&input.file, input.p)?;
    let mut rep = start("b0", &l);
    rep.strategy = Some(scan.strategy.to_string());
    rep.line(format!("{} (p = {})", l.file.name, l.file.p()));
    match l.file.kind {
        Kind::LieRing => {
            let r = realize_file(&l, &mut rep)?;
            let m = rep.timed("m0 scan", || multiplier_report(&r.ring, &r.context, scan.strategy))?;
            rep.early_exit = Some(m.early_exit);
            rep.set("ring_order", &m.ring_order);
            rep.set("ring_class", m.ring_class);
            rep.set("schur", invariant_list(&m.schur));
            rep.set("m0_order", m.m0_index);
            rep.set("bogomolov", invariant_list(&m.bogomolov));
            rep.set("wedge_generators_used", m.wedge_generators_used);
            rep.line(format!("|L| = {}, class {}", m.ring_order, m.ring_class));
            rep.line(format!("M(L) = {}, |M0(L)| = {}", m.schur, m.m0_index));
            rep.line(format!("B0(L) = {}", m.bogomolov));
        }
        Kind::PcGroup => {
            let g = group_of(&l, &mut rep)?;
            let b = rep.timed("lazard and m0 scan", || b0_of_group(&g, scan.strategy))?;
            rep.early_exit = Some(b.multiplier.early_exit);
            rep.set("group_order", g.order().to_string());
            rep.set("ring_class", b.multiplier.ring_class);
            rep.set("schur", invariant_list(&b.multiplier.schur));
            rep.set("m0_order", b.multiplier.m0_index);
            rep.set("bogomolov", invariant_list(&b.bogomolov));
            rep.set("correspondence", &b.correspondence);
            rep.set("method", &b.method);
            rep.line(format!("|G| = {}, class {}", g.order(), b.multiplier.ring_class));
            rep.line("correspondence checks passed".to_string());
            rep.line(format!("M(L) = {}, |M0(L)| = {}", b.multiplier.schur, b.multiplier.m0_index));
            rep.line(format!("B0(G) = B0(L) = {}", b.bogomolov));
        }
    }
    rep.line(format!("strategy {}, early exit: {}", scan.strategy, yes_no(rep.early_exit == Some(true))));
    Ok(rep)
}

fn cmd_cpcover(input: &Input, scan: &Scan, output: Option<&Path>) -> Result<RunReport, CliError> {
    let l = load(&input.file, input.p)?;
    expect_kind(&l, Kind::LieRing)?;
    let mut rep = start("cpcover", &l);
    rep.strategy = Some(scan.strategy.to_string());
    let r = realize_file(&l, &mut rep)?;
    let m = rep.timed("m0 scan", || multiplier_report(&r.ring, &r.context, scan.strategy))?;
    rep.early_exit = Some(m.early_exit);
    let c = rep.timed("cover", || cp_cover_of(&r.ring, &r.context, scan.strategy))?;
    rep.set("ring_order", r.ring.order().to_string());
    rep.set("cover_order", c.cover.order().to_string());
    rep.set("cover_rank", c.cover.dim());
    rep.set("kernel_order", c.kernel_order);
    rep.set("bogomolov", invariant_list(&m.bogomolov));
    rep.set("conditions", &c.report);
    rep.line(format!("{} (p = {})", l.file.name, l.file.p()));
    rep.line(format!("|L| = {}, B0(L) = {}", r.ring.order(), m.bogomolov));
    rep.line(format!("|C| = {}, |K| = {}", c.cover.order(), c.kernel_order));
    let text = emit::ring_file(&c.cover, &format!("{}_cp", l.file.name)).to_string();
    rep.set("cover_presentation", &text);
    match output {
        Some(path) => write_output(path, &text, &mut rep)?,
        None => rep.line(text.trim_end().to_string()),
    }
    Ok(rep)
}

fn cmd_to_group(input: &Input, output: Option<&Path>) -> Result<RunReport, CliError> {
    let l = load(&input.file, input.p)?;
    expect_kind(&l, Kind::LieRing)?;
    let mut rep = start("lazard to-group", &l);
    let r = realize_file(&l, &mut rep)?;
    let corr = rep.timed("to_group", || to_group(&r.ring))?;
    let g = &corr.group;
    let text = emit::pc_file(g.presentation(), &format!("{}_grp", l.file.name)).to_string();
    rep.set("group_order", g.order().to_string());
    rep.set("relative_orders", g.relative_orders());
    rep.set("presentation", &text);
    rep.line(format!("{} (p = {}): |G| = {}", l.file.name, l.file.p(), g.order()));
    match output {
        Some(path) => write_output(path, &text, &mut rep)?,
        None => rep.line(text.trim_end().to_string()),
    }
    Ok(rep)
}

fn cmd_to_lie(input: &Input, output: Option<&Path>) -> Result<RunReport, CliError> {
    let l = load(&input.file, input.p)?;
    expect_kind(&l, Kind::PcGroup)?;
    let mut rep = start("lazard to-lie", &l);
    let g = group_of(&l, &mut rep)?;
    let corr = rep.timed("to_lie", || to_lie(&g))?;
    let name = format!("{}_lie", l.file.name);
    let file = match &corr.relations {
        Some(rel) => emit::relations_file(rel, l.file.p(), &name),
        None => {
            rep.diagnostics.push("pc series is not normal; the ring is written on an abstract basis".into());
            emit::ring_file(&corr.ring, &name)
        }
    };
    let text = file.to_string();
    rep.set("ring_order", corr.ring.order().to_string());
    rep.set("ring_class", corr.ring.nilpotency_class());
    rep.set("presentation", &text);
    rep.line(format!("{} (p = {}): |L| = {}", l.file.name, l.file.p(), corr.ring.order()));
    match output {
        Some(path) => write_output(path, &text, &mut rep)?,
        None => rep.line(text.trim_end().to_string()),
    }
    Ok(rep)
}

fn cmd_verify_correspondence(input: &Input) -> Result<RunReport, CliError> {
    let l = load(&input.file, input.p)?;
    let mut rep = start("verify correspondence", &l);
    let corr = match l.file.kind {
        Kind::PcGroup => {
            let g = group_of(&l, &mut rep)?;
            rep.timed("to_lie", || to_lie(&g))?
        }
        Kind::LieRing => {
            let r = realize_file(&l, &mut rep)?;
            rep.timed("to_group", || to_group(&r.ring))?
        }
    };
    let report = rep.timed("checks", || verify_correspondence(&corr, None))?;
    rep.set("order", corr.ring.order().to_string());
    rep.set("class", corr.ring.nilpotency_class());
    rep.set("passed", report.passed());
    rep.set("report", &report);
    rep.line(format!("{} (p = {}): order {}", l.file.name, l.file.p(), corr.group.order()));
    for (name, ok) in [
        ("order", report.order_match),
        ("class", report.class_match),
        ("center", report.center_set_match),
        ("derived subobject", report.derived_set_match),
        ("commuting pairs", report.commuting_preserved),
    ] {
        rep.line(format!("{name}: {}", if ok { "ok" } else { "FAILED" }));
    }
    for c in &report.subobject_checks {
        rep.line(format!("subobject of order {}: {}", c.order, if c.passed { "ok" } else { "FAILED" }));
    }
    for c in &report.quotient_checks {
        rep.line(format!("quotient by {}: {}", c.by, if c.passed { "ok" } else { "FAILED" }));
    }
    rep.line(format!("correspondence {}", if report.passed() { "verified" } else { "NOT verified" }));
    Ok(rep)
}

fn cmd_verify_cp_pair(cover: &Path, base: &Path, kernel: &[String], p: Option<u64>) -> Result<RunReport, CliError> {
    let lc = load(cover, p)?;
    let lb = load(base, p)?;
    expect_kind(&lc, Kind::LieRing)?;
    expect_kind(&lb, Kind::LieRing)?;
    if lc.file.p() != lb.file.p() {
        return Err(CliError::precondition(format!("primes differ: {} and {}", lc.file.p(), lb.file.p())));
    }
    let mut rep = start("verify cp-pair", &lc);
    rep.inputs.push(lb.digest.clone());
    let rc = realize_file(&lc, &mut rep)?;
    let rb = realize_file(&lb, &mut rep)?;
    let mut k = Vec::new();
    for src in kernel {
        let e = parse_lie_expr(src, &lc.file.gens, lc.file.p()).map_err(|e| CliError::parse(format!("--kernel {src}: {e}")))?;
        k.push(rc.ring.evaluate(&e.to_lie_expr(&lc.file.gens))?);
    }
    let r = rep.timed("checks", || verify_cp_pair(&rc.ring, &k, &rb.ring, None))?;
    rep.set("valid", r.is_valid());
    rep.set("conditions", &r);
    rep.line(format!("C = {}, L = {}, K = <{}>", lc.file.name, lb.file.name, kernel.join(", ")));
    for (name, ok) in [
        ("(i) C/K = L", r.quotient_matches),
        ("(ii) K inside Z(C) and C^2", r.kernel_central_derived),
        ("(iii) K meets no commutator", r.kernel_avoids_commutators),
    ] {
        rep.line(format!("{name}: {}", if ok { "holds" } else { "FAILS" }));
    }
    rep.diagnostics.extend(r.details.iter().cloned());
    rep.line(format!("CP defining pair: {}", yes_no(r.is_valid())));
    Ok(rep)
}

fn cmd_examples(fam: Family, p: u64, output: Option<&Path>) -> Result<RunReport, CliError> {
    let f = family(fam, p)?;
    let text = f.to_string();
    let mut rep = RunReport::new("examples");
    rep.p = Some(p);
    rep.set("family", fam.name());
    rep.set("presentation", &text);
    match output {
        Some(path) => write_output(path, &text, &mut rep)?,
        None => rep.line(text.trim_end().to_string()),
    }
    Ok(rep)
}

fn dispatch(cli: &Cli) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Multiplier { input } => cmd_multiplier(input),
        Command::B0 { input, scan } => cmd_b0(input, scan),
        Command::Cpcover { input, scan, output } => cmd_cpcover(input, scan, output.as_deref()),
        Command::Lazard { direction: LazardCommand::ToGroup { input, output } } => cmd_to_group(input, output.as_deref()),
        Command::Lazard { direction: LazardCommand::ToLie { input, output } } => cmd_to_lie(input, output.as_deref()),
        Command::Verify { what: VerifyCommand::Correspondence { input } } => cmd_verify_correspondence(input),
        Command::Verify { what: VerifyCommand::CpPair { cover, base, kernel, p } } => {
            cmd_verify_cp_pair(cover, base, kernel, *p)
        }
        Command::Examples { family, p, output } => cmd_examples(*family, *p, output.as_deref()),
    }
}

/// Runs one command line; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(rep) => {
            let stdout = if cli.json { rep.to_json() + "\n" } else { rep.to_text() };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&json!({ "error": e.message, "exit_code": e.code })).expect("serializes") + "\n"
            } else {
                String::new()
            };
            Outcome { code: e.code, stdout, stderr: format!("error: {}\n", e.message) }
        }
    }
}
