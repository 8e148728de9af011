//! Command-line front end. Exit status: 0 on a positive result, 2 on a
//! well-formed negative verdict, 1 on errors.

use crate::fp::Prime;
use crate::galois_q::{
    galois_triple_check, GaloisReport, SplittingOutcome, SquareClass, DEFAULT_HEIGHT_CAP,
};
use crate::magnus::{canonical_decompose, zassenhaus_level};
use crate::massey::{
    massey_check, obstruction_scan, Character, MasseyOptions, MasseyReport, ObstructionWitness,
    Verdict,
};
use crate::unipotent::{separating_rep, UnipotentGroup, DEFAULT_BUDGET};
use crate::words::{parse_presentation, parse_word, PresentationSpec};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const BUDGET_ENV: &str = "MASSEY_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "massey", version, about = "Massey products of pro-p presentations and Kummer characters over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical decomposition of a word modulo S_(4)
    Decompose(DecomposeArgs),
    /// Decide a Massey product of characters
    Check(CheckArgs),
    /// Scan relators for coefficient patterns forcing non-vanishing triple products
    Obstruct(ObstructArgs),
    /// Triple Massey product of Kummer characters over Q
    Galois(GaloisArgs),
    /// Search for a unipotent representation not killing a word
    Separate(SeparateArgs),
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Maximum number of candidate assignments [env: MASSEY_BUDGET; default 2^24]
    #[arg(long)]
    pub budget: Option<u64>,
    /// Worker threads for the search
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Presentation file supplying p and the generator count
    #[arg(short = 'f', long = "file", conflicts_with_all = ["prime", "generators"])]
    pub file: Option<PathBuf>,
    #[arg(long, requires = "generators")]
    pub prime: Option<u32>,
    #[arg(long, requires = "prime")]
    pub generators: Option<usize>,
    /// Word to decompose, e.g. "[x1*x2,x3]"
    #[arg(short = 'w', long = "word")]
    pub word: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(short = 'f', long = "file")]
    pub file: PathBuf,
    /// Comma-separated characters such as "x1,x2,x3" or "-x1,x1+x2,2*x3"
    #[arg(long = "triple", visible_alias = "chars", allow_hyphen_values = true)]
    pub chars: String,
    /// Fold count; a single character is repeated n times
    #[arg(short = 'n')]
    pub n: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ObstructArgs {
    #[arg(short = 'f', long = "file")]
    pub file: PathBuf,
    /// Skip re-checking each witness by full enumeration
    #[arg(long)]
    pub no_verify: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct GaloisArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: i64,
    #[arg(long, default_value_t = DEFAULT_HEIGHT_CAP)]
    pub height_cap: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SeparateArgs {
    #[arg(short = 'f', long = "file")]
    pub file: PathBuf,
    #[arg(short = 'w', long = "word")]
    pub word: String,
    /// Target group is U_{n+1}(F_p)
    #[arg(short = 'n', default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

/// Parses arguments and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Decompose(a) => decompose(a, out),
        Command::Check(a) => check(a, out),
        Command::Obstruct(a) => obstruct(a, out),
        Command::Galois(a) => galois(a, out),
        Command::Separate(a) => separate(a, out),
    }
}

fn read_spec(path: &PathBuf) -> Result<PresentationSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_presentation(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Budget from the flag, else from `MASSEY_BUDGET`, else the default.
pub fn resolve_budget(flag: Option<u64>) -> Result<u64> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| anyhow!("{BUDGET_ENV} must be a positive integer, found {v:?}"))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if budget == 0 {
        bail!("budget must be positive");
    }
    Ok(budget)
}

fn options(s: &SearchArgs) -> Result<MasseyOptions> {
    if s.threads == 0 {
        bail!("--threads must be at least 1");
    }
    Ok(MasseyOptions {
        budget: resolve_budget(s.budget)?,
        threads: s.threads,
    })
}

/// Parses a linear combination of generators: `x1`, `-x2`, `2*x1+x3`, `3x2-x1`, `0`.
pub fn parse_character(text: &str, p: Prime, d: usize) -> Result<Character> {
    let src: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        bail!("empty character");
    }
    if src == "0" {
        return Ok(Character::zero(p, d));
    }
    let mut values = vec![0i64; d];
    let bytes = src.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
        } else if pos > 0 {
            bail!("expected '+' or '-' in {text:?}");
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: i64 = if start == pos {
            1
        } else {
            src[start..pos].parse().map_err(|_| anyhow!("bad coefficient in {text:?}"))?
        };
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        if pos >= bytes.len() || bytes[pos] != b'x' {
            bail!("expected a generator x<k> in {text:?}");
        }
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let k: usize = src[start..pos]
            .parse()
            .map_err(|_| anyhow!("expected a generator index in {text:?}"))?;
        if k == 0 || k > d {
            bail!("generator x{k} out of range (generators = {d})");
        }
        values[k - 1] = (values[k - 1] + sign * (coeff % p.get() as i64)) % p.get() as i64;
    }
    Ok(Character::new(p, &values))
}

fn parse_characters(text: &str, n: Option<usize>, p: Prime, d: usize) -> Result<Vec<Character>> {
    let mut chars = text
        .split(',')
        .map(|t| parse_character(t, p, d))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = n {
        if chars.len() == 1 {
            chars = vec![chars[0].clone(); n];
        } else if chars.len() != n {
            bail!("-n {n} given with {} characters", chars.len());
        }
    }
    if chars.len() < 3 {
        bail!("need n >= 3 characters, got {}", chars.len());
    }
    Ok(chars)
}

fn bracket(chars: &[Character]) -> String {
    let names: Vec<String> = chars.iter().map(|c| c.to_string()).collect();
    format!("<{}>", names.join(", "))
}

fn report_json(report: &MasseyReport, chars: &[Character]) -> Value {
    let triple: Vec<String> = chars.iter().map(|c| c.to_string()).collect();
    let witness = match report {
        MasseyReport::NotDefined { candidates } => json!({ "candidates": candidates.to_string() }),
        MasseyReport::Vanishes { lift, examined } => json!({
            "examined": examined,
            "lift": lift,
        }),
        MasseyReport::DoesNotVanish {
            exhausted,
            witness,
            obstruction,
        } => json!({
            "exhausted": exhausted,
            "defining_system": witness,
            "relator": obstruction.relator + 1,
            "corner": obstruction.corner,
        }),
    };
    json!({
        "verdict": report.verdict().to_string(),
        "triple": triple,
        "witness": witness,
        "obstructions": [],
    })
}

fn print_matrices<M: UnipotentGroup>(out: &mut dyn Write, images: &[M]) -> Result<()> {
    for (g, m) in images.iter().enumerate() {
        let rows: Vec<String> = m
            .as_full()
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        writeln!(out, "  x{} -> [{}]", g + 1, rows.join("; "))?;
    }
    Ok(())
}

fn decompose(args: &DecomposeArgs, out: &mut dyn Write) -> Result<i32> {
    let (p, d) = match (&args.file, args.prime, args.generators) {
        (Some(path), _, _) => {
            let spec = read_spec(path)?;
            (spec.prime(), spec.generator_count())
        }
        (None, Some(p), Some(d)) => {
            let prime = Prime::new(p).ok_or_else(|| anyhow!("{p} is not a prime"))?;
            if d == 0 {
                bail!("--generators must be positive");
            }
            (prime, d)
        }
        _ => bail!("give either -f FILE or both --prime and --generators"),
    };
    let w = parse_word(&args.word, d).context("parsing word")?;
    let dec = canonical_decompose(&w, p)?;
    if args.json {
        let factors: Vec<Value> = dec
            .factors()
            .into_iter()
            .map(|f| match f {
                crate::magnus::Factor::Power { i, exp } => json!({"a": [i + 1], "exp": exp}),
                crate::magnus::Factor::Commutator { i, j, exp } => json!({"b": [i + 1, j + 1], "exp": exp}),
                crate::magnus::Factor::Triple { i, j, k, exp } => {
                    json!({"c": [i + 1, j + 1, k + 1], "exp": exp})
                }
            })
            .collect();
        let v = json!({
            "p": p.get(),
            "generators": d,
            "word": w.to_string(),
            "level": zassenhaus_level(&w, p).to_string(),
            "factors": factors,
            "residual_is_identity": dec.residual().is_identity(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        writeln!(out, "{dec}")?;
    }
    Ok(0)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Vanishes => 0,
        Verdict::NotDefined | Verdict::DoesNotVanish => 2,
    }
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = read_spec(&args.file)?;
    let chars = parse_characters(&args.chars, args.n, spec.prime(), spec.generator_count())?;
    let opts = options(&args.search)?;
    let report = massey_check(&spec, &chars, &opts)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report_json(&report, &chars))?)?;
    } else {
        writeln!(out, "{}", report.verdict())?;
        writeln!(out, "product: {}", bracket(&chars))?;
        match &report {
            MasseyReport::NotDefined { candidates } => {
                writeln!(out, "no defining system among {candidates} candidates")?;
            }
            MasseyReport::Vanishes { lift, examined } => {
                writeln!(out, "lift found after {examined} defining systems:")?;
                print_matrices(out, lift.images())?;
            }
            MasseyReport::DoesNotVanish {
                exhausted,
                witness,
                obstruction,
            } => {
                writeln!(out, "none of {exhausted} defining systems lifts")?;
                writeln!(
                    out,
                    "first defining system (relator {} keeps corner {}):",
                    obstruction.relator + 1,
                    obstruction.corner
                )?;
                print_matrices(out, witness.images())?;
            }
        }
    }
    Ok(verdict_code(report.verdict()))
}

fn witness_json(w: &ObstructionWitness, verification: &Value) -> Value {
    json!({
        "relator": w.relator + 1,
        "pattern": w.pattern.to_string(),
        "triple": w.triple.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "coefficient": w.coefficient,
        "not_realizable": w.not_realizable,
        "verification": verification,
    })
}

fn obstruct(args: &ObstructArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = read_spec(&args.file)?;
    let opts = options(&args.search)?;
    let witnesses = obstruction_scan(&spec)?;
    let mut checks = Vec::new();
    for w in &witnesses {
        let v = if args.no_verify {
            json!("skipped")
        } else {
            match massey_check(&spec, &w.triple, &opts) {
                Ok(MasseyReport::DoesNotVanish { exhausted, .. }) => {
                    json!({"verdict": "DoesNotVanish", "exhausted": exhausted})
                }
                Ok(other) => bail!(
                    "witness {} for relator {} re-checked as {}",
                    w.pattern,
                    w.relator + 1,
                    other.verdict()
                ),
                Err(crate::massey::MasseyError::Search(e)) => json!(format!("skipped: {e}")),
                Err(e) => return Err(e.into()),
            }
        };
        checks.push(v);
    }
    let not_realizable = spec.p() == 2 && !witnesses.is_empty();
    if args.json {
        let obs: Vec<Value> = witnesses.iter().zip(&checks).map(|(w, v)| witness_json(w, v)).collect();
        let v = json!({
            "verdict": if witnesses.is_empty() { "NoObstruction" } else { "DoesNotVanish" },
            "triple": witnesses.first().map(|w| w.triple.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            "witness": Value::Null,
            "obstructions": obs,
            "not_realizable": not_realizable,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else if witnesses.is_empty() {
        writeln!(out, "no obstruction found")?;
    } else {
        for (w, v) in witnesses.iter().zip(&checks) {
            writeln!(
                out,
                "relator {}: {} coefficient {}: {} does not vanish",
                w.relator + 1,
                w.pattern,
                w.coefficient,
                bracket(&w.triple)
            )?;
            match v {
                Value::Object(m) => writeln!(
                    out,
                    "  verified: none of {} defining systems lifts",
                    m["exhausted"]
                )?,
                Value::String(s) => writeln!(out, "  verification {s}")?,
                _ => {}
            }
        }
        if not_realizable {
            writeln!(out, "not realizable as G_F(2)")?;
        }
    }
    Ok(if witnesses.is_empty() { 0 } else { 2 })
}

fn galois(args: &GaloisArgs, out: &mut dyn Write) -> Result<i32> {
    let (a, b, c) = (
        SquareClass::new(args.a)?,
        SquareClass::new(args.b)?,
        SquareClass::new(args.c)?,
    );
    let report = galois_triple_check(&a, &b, &c, args.height_cap)?;
    if args.json {
        let v = json!({
            "verdict": if report.is_defined() { "Vanishes" } else { "NotDefined" },
            "triple": [args.a, args.b, args.c],
            "classes": [a.rep(), b.rep(), c.rep()],
            "witness": report,
            "obstructions": [],
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        match &report {
            GaloisReport::NotDefined { pair, place } => {
                writeln!(out, "NotDefined")?;
                writeln!(out, "cup product of {} and {} is nonzero at {}", pair.0, pair.1, place)?;
            }
            GaloisReport::Defined(SplittingOutcome::TrivialVanishing { square }) => {
                writeln!(out, "Vanishes")?;
                writeln!(out, "{square} is a square, so its character is trivial")?;
            }
            GaloisReport::Defined(SplittingOutcome::Point(cert)) => {
                let p = &cert.point;
                writeln!(out, "Vanishes")?;
                writeln!(out, "classes: a={} b={} c={}", a, b, c)?;
                writeln!(
                    out,
                    "point: x={} y1={} y2={} y3={} y4={}",
                    p.x, p.y1, p.y2, p.y3, p.y4
                )?;
                for n in &cert.norms {
                    writeln!(
                        out,
                        "norm: {} = ({})^2 - {}*({})^2",
                        n.value, n.alpha1, n.field, n.alpha2
                    )?;
                }
                writeln!(out, "b*x^2 = {} = quartic = {}", cert.identity.lhs, cert.identity.rhs)?;
            }
        }
    }
    Ok(if report.is_defined() { 0 } else { 2 })
}

fn separate(args: &SeparateArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = read_spec(&args.file)?;
    if args.n == 0 {
        bail!("-n must be positive");
    }
    let w = parse_word(&args.word, spec.generator_count()).context("parsing word")?;
    let budget = resolve_budget(args.budget)?;
    let found = separating_rep(&spec, &w, args.n, budget)?;
    if args.json {
        let v = json!({
            "verdict": if found.is_some() { "Separated" } else { "NotSeparated" },
            "triple": Value::Null,
            "witness": found,
            "obstructions": [],
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        match &found {
            Some(rep) => {
                writeln!(out, "Separated")?;
                print_matrices(out, rep.images())?;
            }
            None => writeln!(out, "NotSeparated")?,
        }
    }
    Ok(if found.is_some() { 0 } else { 2 })
}
