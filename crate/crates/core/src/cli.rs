//! Command-line front end. `run` returns the process exit code: 0 when every
//! check passes, 1 when a law or check fails, 2 on malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::atom::FinSet;
use crate::coend::{coend, QuotientSet};
use crate::corpus::{self, Corpus};
use crate::error::Error;
use crate::fincat::FinCategory;
use crate::format::{
    self, CategoryDto, CoPresheafDto, Dto, FunctorDto, InputError, OmmatidiumDto, PolyLensDto,
    ProfunctorDto, SettingDto,
};
use crate::kan::{kan_composition_check, left_kan};
use crate::laws::{self, Config, LawSuiteReport};
use crate::poly::{
    compose_polylens, enumerate_polylenses, nat_oracle, oracle_agrees, polylens_count, PolyFunctor,
};
use crate::prof::{prof_action, prof_compose};
use crate::simple_optics::{
    lens_concretize, prism_concretize, ExistentialOptic, SetAction, SetOptic,
};
use crate::witness::NaturalIso;

#[derive(Parser, Debug)]
#[command(
    name = "coend-optics",
    version,
    about = "Finite coends, Kan extensions, profunctors and optics"
)]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest set size used by brute-force checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_card: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a specification file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Category)]
        kind: Kind,
    },
    /// Coend of an endo-profunctor: carrier, classes and injections.
    Coend { file: PathBuf },
    /// Left Kan extension of a co-presheaf along a functor.
    Kan {
        presheaf: PathBuf,
        functor: PathBuf,
        /// Also extend along this second functor and compare with the
        /// extension along the composite.
        #[arg(long, value_name = "FUNCTOR")]
        check_composition: Option<PathBuf>,
    },
    /// Profunctor composition and action.
    #[command(subcommand)]
    Prof(ProfCommand),
    /// Simple optics: composition and concrete normal forms.
    #[command(subcommand)]
    Optic(OpticCommand),
    /// Polynomial functors and their lenses.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Run law suites over a corpus.
    Laws(LawsArgs),
    /// Write or inspect corpus directories.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Category,
    Functor,
    Copresheaf,
    Profunctor,
    Setting,
    Poly,
}

#[derive(Subcommand, Debug)]
pub enum ProfCommand {
    /// `p ⋄ q`.
    Compose { p: PathBuf, q: PathBuf },
    /// `p • a`.
    Act { p: PathBuf, copresheaf: PathBuf },
    /// The PROF suite.
    Laws(CorpusArg),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    Exact,
    Normalform,
}

#[derive(Subcommand, Debug)]
pub enum OpticCommand {
    /// Compose two optics. With `--setting` the optics are existential
    /// optics over that setting, otherwise set optics.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        setting: Option<PathBuf>,
    },
    /// Concrete lens or prism of a set optic.
    Normalize { optic: PathBuf },
    /// The OPTIC-EXACT or OPTIC-NORMALFORM suite.
    Laws {
        #[arg(long, value_enum)]
        regime: Regime,
        #[command(flatten)]
        corpus: CorpusArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolyCommand {
    /// Elements of `p(y)` for `y = {0..n-1}`.
    Eval { poly: PathBuf, n: usize },
    /// Count and list the lenses `p → q`.
    Nats { p: PathBuf, q: PathBuf },
    /// Brute-force natural transformations over sets up to `--bound`.
    Oracle {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Compose two lens files, first then second.
    Compose { first: PathBuf, second: PathBuf },
    /// Normal form of an ommatidium.
    Normalize { ommatidium: PathBuf },
}

#[derive(Args, Debug)]
pub struct CorpusArg {
    /// Corpus directory; the bundled corpus when omitted.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LawsArgs {
    /// Run every suite.
    #[arg(long, conflicts_with = "suite")]
    pub all: bool,
    /// Run one suite by name.
    #[arg(long)]
    pub suite: Option<String>,
    #[command(flatten)]
    pub corpus: CorpusArg,
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Write the bundled corpus.
    Write { dir: PathBuf },
    /// Write the fixture with a planted associativity violation.
    WritePlanted { dir: PathBuf },
    /// Load a corpus and print its section counts.
    Show { dir: PathBuf },
}

/// Why a command stopped.
enum Failure {
    Input(InputError),
    Check(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Input(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Output so far, plus whether a check failed without aborting.
struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
    config: Config,
    failed: bool,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.emit(text.as_ref());
        self.emit("\n");
    }

    fn value(&mut self, v: &Value) {
        self.emit(&format::to_pretty(v));
    }
}

fn semantic(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Input(InputError::semantic(&path.display().to_string(), e))
}

fn check_err(e: Error) -> Failure {
    Failure::Check(e.to_string())
}

/// Parses `argv` and runs it, writing the report to `out` and diagnostics
/// to `err`.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        out,
        json: cli.json,
        config: Config {
            max_card: cli.max_card,
            ..Config::default()
        },
        failed: false,
    };
    match dispatch(&cli.command, &mut ctx) {
        Ok(()) if ctx.failed => 1,
        Ok(()) => 0,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Check(msg)) => {
            ctx.line(format!("FAIL ({msg})"));
            1
        }
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Outcome {
    match cmd {
        Command::Check { file, kind } => check(file, *kind, ctx),
        Command::Coend { file } => coend_cmd(file, ctx),
        Command::Kan {
            presheaf,
            functor,
            check_composition,
        } => kan_cmd(presheaf, functor, check_composition.as_deref(), ctx),
        Command::Prof(p) => prof_cmd(p, ctx),
        Command::Optic(o) => optic_cmd(o, ctx),
        Command::Poly(p) => poly_cmd(p, ctx),
        Command::Laws(args) => laws_cmd(args, ctx),
        Command::Corpus(c) => corpus_cmd(c, ctx),
    }
}

fn problems_report(ctx: &mut Ctx, what: &str, problems: Vec<String>) {
    if ctx.json {
        ctx.value(&json!({ "kind": what, "valid": problems.is_empty(), "problems": problems }));
    } else if problems.is_empty() {
        ctx.line(format!("{what}: PASS"));
    } else {
        for p in &problems {
            ctx.line(format!("{what}: FAIL ({p})"));
        }
    }
    if !problems.is_empty() {
        ctx.failed = true;
    }
}

fn check(file: &Path, kind: Kind, ctx: &mut Ctx) -> Outcome {
    let problems = match kind {
        Kind::Category => {
            let dto: CategoryDto = format::read(file)?;
            let cat = dto.build().map_err(semantic(file))?;
            cat.validate()
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect()
        }
        Kind::Functor => format::load::<FunctorDto>(file)?.validate(),
        Kind::Copresheaf => format::load::<CoPresheafDto>(file)?.validate(),
        Kind::Profunctor => format::load::<ProfunctorDto>(file)?.validate(),
        Kind::Setting => {
            format::load::<SettingDto>(file)?;
            Vec::new()
        }
        Kind::Poly => format::load::<PolyFunctor>(file)?
            .check()
            .err()
            .map(|e| vec![e.to_string()])
            .unwrap_or_default(),
    };
    let what = format!("{kind:?}").to_lowercase();
    problems_report(ctx, &what, problems);
    Ok(())
}

fn quotient_json(q: &QuotientSet) -> Value {
    let classes: Vec<Value> = q
        .classes()
        .iter()
        .map(|(rep, members)| {
            json!({
                "class": rep,
                "members": members.iter().map(|(c, x)| json!([c, x])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "size": q.len(), "classes": classes })
}

fn quotient_text(ctx: &mut Ctx, q: &QuotientSet) {
    ctx.line(format!("carrier: {} classes", q.len()));
    for (rep, members) in q.classes() {
        let ms: Vec<String> = members.iter().map(|(c, x)| format!("{c}:{x}")).collect();
        ctx.line(format!("class {rep}: {}", ms.join(" ")));
    }
    for (rep, members) in q.classes() {
        for (c, x) in members {
            ctx.line(format!("inject {c} {x} -> {rep}"));
        }
    }
}

fn coend_cmd(file: &Path, ctx: &mut Ctx) -> Outcome {
    let d = format::load::<ProfunctorDto>(file)?;
    let q = coend(&d).map_err(semantic(file))?;
    q.verify_cowedge(&d).map_err(check_err)?;
    if ctx.json {
        ctx.value(&quotient_json(&q));
    } else {
        quotient_text(ctx, &q);
    }
    Ok(())
}

fn iso_json(iso: &NaturalIso) -> Value {
    serde_json::to_value(iso).expect("serializable")
}

fn iso_text(ctx: &mut Ctx, iso: &NaturalIso) {
    for (k, w) in iso.components() {
        for (x, y) in w.forward().iter() {
            ctx.line(format!("{k}: {x} -> {y}"));
        }
    }
}

fn kan_cmd(presheaf: &Path, functor: &Path, second: Option<&Path>, ctx: &mut Ctx) -> Outcome {
    let f = format::load::<CoPresheafDto>(presheaf)?;
    let p = format::load::<FunctorDto>(functor)?;
    match second {
        None => {
            let lan = left_kan(&f, &p).map_err(semantic(functor))?;
            ctx.emit(&format::to_pretty(&CoPresheafDto::from_value(
                &lan.copresheaf,
            )));
        }
        Some(q_path) => {
            let q = format::load::<FunctorDto>(q_path)?;
            let iso = kan_composition_check(&f, &p, &q).map_err(check_err)?;
            if ctx.json {
                ctx.value(&json!({ "composition": "PASS", "witness": iso_json(&iso) }));
            } else {
                ctx.line("composition: PASS");
                iso_text(ctx, &iso);
            }
        }
    }
    Ok(())
}

fn load_corpus(arg: &CorpusArg) -> std::result::Result<(Corpus, String), Failure> {
    match &arg.corpus {
        Some(dir) => Ok((Corpus::load(dir)?, dir.display().to_string())),
        None => Ok((corpus::bundled(), "bundled".to_string())),
    }
}

fn report(ctx: &mut Ctx, reports: &[LawSuiteReport]) {
    if ctx.json {
        ctx.emit(&laws::render_json(reports));
    } else {
        ctx.emit(&laws::render_text(reports));
    }
    if !reports.iter().all(LawSuiteReport::passed) {
        ctx.failed = true;
    }
}

fn run_named(ctx: &mut Ctx, arg: &CorpusArg, names: &[&str]) -> Outcome {
    let (c, label) = load_corpus(arg)?;
    let reports: Vec<LawSuiteReport> = names
        .iter()
        .map(|n| {
            let suite = laws::find_suite(n).expect("registered suite");
            laws::run_suite(suite, &c, &label, &ctx.config)
        })
        .collect();
    report(ctx, &reports);
    Ok(())
}

fn prof_cmd(cmd: &ProfCommand, ctx: &mut Ctx) -> Outcome {
    match cmd {
        ProfCommand::Compose { p, q } => {
            let (pv, qv) = (
                format::load::<ProfunctorDto>(p)?,
                format::load::<ProfunctorDto>(q)?,
            );
            let c = prof_compose(&pv, &qv).map_err(semantic(q))?;
            ctx.emit(&format::to_pretty(&ProfunctorDto::from_value(
                &c.profunctor,
            )));
        }
        ProfCommand::Act { p, copresheaf } => {
            let pv = format::load::<ProfunctorDto>(p)?;
            let a = format::load::<CoPresheafDto>(copresheaf)?;
            let act = prof_action(&pv, &a).map_err(semantic(copresheaf))?;
            ctx.emit(&format::to_pretty(&CoPresheafDto::from_value(
                &act.copresheaf,
            )));
        }
        ProfCommand::Laws(arg) => run_named(ctx, arg, &["PROF"])?,
    }
    Ok(())
}

fn optic_cmd(cmd: &OpticCommand, ctx: &mut Ctx) -> Outcome {
    match cmd {
        OpticCommand::Compose {
            first,
            second,
            setting: Some(setting),
        } => {
            let s = format::load::<SettingDto>(setting)?;
            let o1 = format::load::<ExistentialOptic>(first)?;
            let o2 = format::load::<ExistentialOptic>(second)?;
            let o = s.compose(&o1, &o2).map_err(semantic(second))?;
            let space = s.space(&o.endpoints).map_err(check_err)?;
            let class = space.class_of(&o).map_err(check_err)?.clone();
            if ctx.json {
                ctx.value(&json!({ "optic": o, "class": class }));
            } else {
                ctx.emit(&format::to_pretty(&o));
                ctx.line(format!("class: {class}"));
            }
        }
        OpticCommand::Compose {
            first,
            second,
            setting: None,
        } => {
            let o1 = format::load::<SetOptic>(first)?;
            let o2 = format::load::<SetOptic>(second)?;
            let o = o1.compose(&o2).map_err(semantic(second))?;
            ctx.emit(&format::to_pretty(&o));
        }
        OpticCommand::Normalize { optic } => {
            let o = format::load::<SetOptic>(optic)?;
            let text = match o.action {
                SetAction::Product => format::to_pretty(&lens_concretize(&o).map_err(check_err)?),
                SetAction::Coproduct => {
                    format::to_pretty(&prism_concretize(&o).map_err(check_err)?)
                }
            };
            ctx.emit(&text);
        }
        OpticCommand::Laws { regime, corpus } => {
            let name = match regime {
                Regime::Exact => "OPTIC-EXACT",
                Regime::Normalform => "OPTIC-NORMALFORM",
            };
            run_named(ctx, corpus, &[name])?;
        }
    }
    Ok(())
}

fn poly_cmd(cmd: &PolyCommand, ctx: &mut Ctx) -> Outcome {
    match cmd {
        PolyCommand::Eval { poly, n } => {
            let p = format::load::<PolyFunctor>(poly)?;
            let y = FinSet::range(*n);
            let elems = p.eval(&y);
            if ctx.json {
                ctx.value(&json!({ "size": elems.len(), "elements": elems }));
            } else {
                ctx.line(format!("size: {}", elems.len()));
                for e in elems.iter() {
                    ctx.line(e.to_string());
                }
            }
        }
        PolyCommand::Nats { p, q } => {
            let (pv, qv) = (
                format::load::<PolyFunctor>(p)?,
                format::load::<PolyFunctor>(q)?,
            );
            let count = polylens_count(&pv, &qv).map_err(check_err)?;
            let lenses = enumerate_polylenses(&pv, &qv).map_err(check_err)?;
            if count != Some(lenses.len() as u128) {
                return Err(Failure::Check(format!(
                    "formula gives {count:?}, enumeration {}",
                    lenses.len()
                )));
            }
            if ctx.json {
                ctx.value(&json!({ "count": lenses.len(), "lenses": lenses }));
            } else {
                ctx.line(format!("count: {}", lenses.len()));
                for l in &lenses {
                    let entries: Vec<String> =
                        l.table().iter().map(|(k, v)| format!("{k}->{v}")).collect();
                    ctx.line(entries.join(" "));
                }
            }
        }
        PolyCommand::Oracle { p, q, bound } => {
            let (pv, qv) = (
                format::load::<PolyFunctor>(p)?,
                format::load::<PolyFunctor>(q)?,
            );
            let bound = bound.unwrap_or(pv.max_direction().max(qv.max_direction()) + 1);
            let oracle = nat_oracle(&pv, &qv, bound).map_err(check_err)?;
            let agrees = oracle_agrees(&pv, &qv, &oracle).map_err(check_err)?;
            if ctx.json {
                ctx.value(&json!({ "bound": bound, "count": oracle.nats.len(), "agrees": agrees }));
            } else {
                ctx.line(format!("bound: {bound}"));
                ctx.line(format!("count: {}", oracle.nats.len()));
                ctx.line(format!(
                    "lens formula: {}",
                    if agrees { "PASS" } else { "FAIL" }
                ));
            }
            if !agrees {
                ctx.failed = true;
            }
        }
        PolyCommand::Compose { first, second } => {
            let (p, q, l1) = format::load::<PolyLensDto>(first)?;
            let (q2, r, l2) = format::load::<PolyLensDto>(second)?;
            if q != q2 {
                return Err(Failure::Input(InputError::semantic(
                    &second.display().to_string(),
                    Error::Mismatch("source differs from the first lens's target".into()),
                )));
            }
            let l = compose_polylens(&p, &q, &r, &l1, &l2).map_err(check_err)?;
            ctx.emit(&format::to_pretty(&PolyLensDto::from_value(&(p, r, l))));
        }
        PolyCommand::Normalize { ommatidium } => {
            let (p, q, o) = format::load::<OmmatidiumDto>(ommatidium)?;
            let l = o.normal_form(&p, &q).map_err(semantic(ommatidium))?;
            ctx.emit(&format::to_pretty(&PolyLensDto::from_value(&(p, q, l))));
        }
    }
    Ok(())
}

fn laws_cmd(args: &LawsArgs, ctx: &mut Ctx) -> Outcome {
    let (c, label) = load_corpus(&args.corpus)?;
    let reports = match (&args.suite, args.all) {
        (Some(name), _) => {
            let suite = laws::find_suite(name).ok_or_else(|| {
                Failure::Input(InputError {
                    file: "--suite".into(),
                    line: None,
                    column: None,
                    message: format!(
                        "unknown suite {name}; known: {}",
                        laws::suite_names().join(", ")
                    ),
                })
            })?;
            vec![laws::run_suite(suite, &c, &label, &ctx.config)]
        }
        (None, _) => laws::run_all(&c, &label, &ctx.config),
    };
    report(ctx, &reports);
    Ok(())
}

fn corpus_cmd(cmd: &CorpusCommand, ctx: &mut Ctx) -> Outcome {
    let io = |dir: &Path| {
        let dir = dir.display().to_string();
        move |e: Error| Failure::Input(InputError::semantic(&dir, e))
    };
    match cmd {
        CorpusCommand::Write { dir } => corpus::bundled().write(dir).map_err(io(dir))?,
        CorpusCommand::WritePlanted { dir } => corpus::planted().write(dir).map_err(io(dir))?,
        CorpusCommand::Show { dir } => {
            let c = Corpus::load(dir)?;
            let counts = c.counts();
            if ctx.json {
                ctx.value(&json!(counts));
            } else {
                for (k, v) in counts {
                    ctx.line(format!("{k}: {v}"));
                }
            }
            let invalid: Vec<String> = c
                .categories
                .iter()
                .filter(|(_, cat): &&(String, FinCategory)| !cat.validate().is_valid())
                .map(|(n, _)| n.clone())
                .collect();
            if !invalid.is_empty() {
                ctx.line(format!("invalid categories: {}", invalid.join(", ")));
                ctx.failed = true;
            }
        }
    }
    Ok(())
}
