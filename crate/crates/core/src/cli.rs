//! The `ptk` command line.
//!
//! Exit codes: 0 true or pass, 1 false, fail or unknown, 2 usage or parse
//! error, 3 failed precondition.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::constructions::{
    acdc_lhs, biconditional, big_and_or_true, big_or_left, corollary_formula, default_gamma, iota_translate,
    stopping_disjunction, theta_c, unique, IndexVar,
};
use crate::error::Error;
use crate::eval::{std_truth, tr0, val, Truth3};
use crate::prop::{
    check_tautology, entails, export_dimacs, skeleton, skeleton_with, to_cnf_tseitin, AtomTable, PropFormula,
};
use crate::report::Report;
use crate::saturation::{parse_family, Domain};
use crate::syntax::{godel_encode, parse, parse_formula, parse_term, Formula, Syntax, Term};
use crate::verifier::{aggregate, default_phi, verify_all, CorpusSpec, Suite};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ptk",
    version,
    about = "Arithmetized syntax, truth constructions and tautology checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a term or formula and print it in canonical form.
    Parse {
        #[command(flatten)]
        input: Input,
        /// Print the Gödel code instead.
        #[arg(long)]
        godel: bool,
    },
    /// Evaluate a closed term or a sentence.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Witness bound for quantified sentences.
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print one of the formula constructions.
    Construct(ConstructArgs),
    /// Propositional checks on sentences.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Mode::Tautology)]
        mode: Mode,
        /// Premise sentence for `--mode entails`; repeatable.
        #[arg(long)]
        premise: Vec<String>,
        /// Write DIMACS here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite, or `all` of them.
    Verify(VerifyArgs),
}

/// A formula given inline, as `-` for standard input, or by `--file`.
#[derive(Debug, Args)]
pub struct Input {
    pub text: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Tautology,
    Entails,
    ExportDimacs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Bigor,
    Stopping,
    Unique,
    Acdc,
    Theta,
    Iota,
    Corollary,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Last index of the default sequences, or the bound of `theta`.
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    /// Level of the `iota` translation.
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    /// Number of fragment sentences for `iota`.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Index-domain formula for `iota`, with at most one free variable.
    #[arg(long)]
    pub phi: Option<String>,
    /// Sentences α_0, α_1, …; default `S^i(0) = 0`.
    #[arg(long)]
    pub alpha: Vec<String>,
    /// Sentences β_0, β_1, … (the φ_i of `acdc`); default `S^i(0) = S(0)`.
    #[arg(long)]
    pub beta: Vec<String>,
    /// Closed term of `acdc`.
    #[arg(long, default_value = "(S(0) + S(0))")]
    pub term: String,
    /// Print the Gödel code instead.
    #[arg(long)]
    pub godel: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// prop33, cor34, obligations, thm32, acdc, tr0, theta, saturation,
    /// trivialise, iota, engines or all.
    pub suite: String,
    #[arg(long, env = "PTK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest sequence index (`c`), or the bound of `theta`.
    #[arg(long)]
    pub c: Option<u64>,
    /// Number of random instances, or the fragment size of `iota`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest level of `iota`.
    #[arg(long)]
    pub a: Option<u64>,
    /// Depth of random formulas.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Assignment values for `saturation`, as `lo..hi` or a list.
    #[arg(long, value_parser = parse_domain)]
    pub domain: Option<Domain>,
    /// Family file for `saturation`, one formula per line.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Worker threads for `all`; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall time (`ms`) in reports.
    #[arg(long)]
    pub timing: bool,
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure and the exit code it maps to.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Exit {
        let code = match e {
            Error::Parse { .. } => EXIT_USAGE,
            _ => EXIT_PRECONDITION,
        };
        Exit(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

/// Run the command line and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
        }
    };
    let mut out = std::io::stdout().lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = out.flush();
            eprintln!("ptk: {msg}");
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Exit> {
    match command {
        Command::Parse { input, godel } => cmd_parse(&input, godel, out),
        Command::Eval { input, bound, format } => cmd_eval(&input, bound, format, out),
        Command::Construct(args) => cmd_construct(&args, out),
        Command::Check {
            input,
            mode,
            premise,
            out: path,
            format,
        } => cmd_check(&input, mode, &premise, path.as_deref(), format, out),
        Command::Verify(args) => cmd_verify(&args, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Exit> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Exit(EXIT_PRECONDITION, format!("writing output: {e}")))
}

fn read_input(input: &Input) -> Result<String, Exit> {
    match (&input.text, &input.file) {
        (Some(_), Some(_)) => Err(usage("give the input inline or with --file, not both")),
        (None, None) => Err(usage("missing input")),
        (Some(t), None) if t == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("reading standard input: {e}")))?;
            Ok(s)
        }
        (Some(t), None) => Ok(t.clone()),
        (None, Some(path)) => {
            std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
        }
    }
}

fn cmd_parse(input: &Input, godel: bool, out: &mut dyn Write) -> Result<i32, Exit> {
    let x = parse(read_input(input)?.trim())?;
    let text = if godel {
        godel_encode(&x).value().to_string()
    } else {
        match &x {
            Syntax::Term(t) => t.to_string(),
            Syntax::Formula(f) => f.to_string(),
        }
    };
    write_out(out, &format!("{text}\n"))?;
    Ok(EXIT_TRUE)
}

fn cmd_eval(input: &Input, bound: u64, format: Format, out: &mut dyn Write) -> Result<i32, Exit> {
    let text = read_input(input)?;
    let (key, value, code) = match parse(text.trim())? {
        Syntax::Term(t) => ("val", val(&t)?.to_string(), EXIT_TRUE),
        Syntax::Formula(f) => {
            f.require_sentence()?;
            if f.is_quantifier_free() {
                let b = tr0(&f)?;
                ("tr0", b.to_string(), if b { EXIT_TRUE } else { EXIT_FALSE })
            } else {
                let t = std_truth(&f, bound)?;
                let code = if t == Truth3::True { EXIT_TRUE } else { EXIT_FALSE };
                ("std_truth", t.to_string(), code)
            }
        }
    };
    let line = match format {
        Format::Text => format!("{key}: {value}\n"),
        Format::Json => format!("{}\n", json!({ "input": text.trim(), key: value })),
    };
    write_out(out, &line)?;
    Ok(code)
}

fn sentences(texts: &[String]) -> Result<Vec<Formula>, Exit> {
    texts
        .iter()
        .map(|t| {
            let f = parse_formula(t)?;
            f.require_sentence()?;
            Ok(f)
        })
        .collect()
}

fn default_seq(given: &[String], c: u64, rhs: fn(u64) -> Term) -> Result<Vec<Formula>, Exit> {
    if given.is_empty() {
        Ok((0..=c).map(|i| Formula::eq(Term::numeral(i), rhs(i))).collect())
    } else {
        sentences(given)
    }
}

fn build(args: &ConstructArgs) -> Result<Formula, Exit> {
    let alphas = || default_seq(&args.alpha, args.c, |_| Term::zero());
    let betas = || default_seq(&args.beta, args.c, |_| Term::numeral(1));
    Ok(match args.kind {
        Kind::Bigor => big_or_left(&alphas()?)?,
        Kind::Stopping => stopping_disjunction(&alphas()?, &betas()?, 0)?,
        Kind::Unique => unique(&alphas()?)?,
        Kind::Corollary => corollary_formula(&alphas()?, &betas()?)?,
        Kind::Acdc => acdc_lhs(&parse_term(&args.term)?, &betas()?)?,
        Kind::Theta => theta_c(args.c),
        Kind::Iota => {
            let phi = match &args.phi {
                Some(t) => parse_formula(t)?,
                None => default_phi(),
            };
            let gamma = default_gamma(args.n);
            if gamma.len() < args.n {
                return Err(Exit(
                    EXIT_PRECONDITION,
                    format!("at most {} fragment sentences are built in", gamma.len()),
                ));
            }
            let alpha = IndexVar(
                gamma
                    .iter()
                    .flat_map(|g| g.index_vars())
                    .map(|b| b.0 + 1)
                    .max()
                    .unwrap_or(0),
            );
            let bics = gamma
                .iter()
                .map(|g| biconditional(g, alpha))
                .collect::<Result<Vec<_>, _>>()?;
            // the conjunction of the fragment's biconditionals, translated
            let mut conj: Option<crate::constructions::ItbFormula> = None;
            for b in bics {
                conj = Some(match conj {
                    None => b,
                    Some(c) => crate::constructions::ItbFormula::and(c, b),
                });
            }
            match conj {
                Some(f) => iota_translate(&f, args.a, &phi, &gamma)?,
                None => big_and_or_true(&[]),
            }
        }
    })
}

fn cmd_construct(args: &ConstructArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let f = build(args)?;
    let text = if args.godel {
        godel_encode(&Syntax::Formula(f)).value().to_string()
    } else {
        f.to_string()
    };
    write_out(out, &format!("{text}\n"))?;
    Ok(EXIT_TRUE)
}

fn atom_legend(table: &AtomTable) -> String {
    table.iter().map(|(a, s)| format!("{a}: {s}\n")).collect()
}

fn cmd_check(
    input: &Input,
    mode: Mode,
    premises: &[String],
    path: Option<&std::path::Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let f = parse_formula(read_input(input)?.trim())?;
    f.require_sentence()?;
    match mode {
        Mode::Tautology => {
            let (p, table) = skeleton(&f)?;
            let verdict = check_tautology(&p);
            let code = if verdict.tautology { EXIT_TRUE } else { EXIT_FALSE };
            let text = match format {
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "tautology": verdict.tautology,
                        "engine": verdict.engine,
                        "countermodel": verdict.countermodel.as_ref().map(|v| v.to_string()),
                        "atoms": table.iter().map(|(a, s)| (a.to_string(), s.to_string())).collect::<std::collections::BTreeMap<_, _>>(),
                    })
                ),
                Format::Text => {
                    let mut s = format!("tautology: {} ({})\n", verdict.tautology, verdict.engine);
                    if let Some(v) = &verdict.countermodel {
                        s.push_str(&format!("countermodel: {v}\n"));
                        s.push_str(&atom_legend(&table));
                    }
                    s
                }
            };
            write_out(out, &text)?;
            Ok(code)
        }
        Mode::Entails => {
            let mut table = AtomTable::new();
            let ps: Vec<PropFormula> = sentences(premises)?
                .iter()
                .map(|s| skeleton_with(&mut table, s))
                .collect::<Result<_, _>>()?;
            let p = skeleton_with(&mut table, &f)?;
            let ok = entails(&table, &ps, &p)?;
            let text = match format {
                Format::Json => format!("{}\n", json!({ "entails": ok })),
                Format::Text => format!("entails: {ok}\n"),
            };
            write_out(out, &text)?;
            Ok(if ok { EXIT_TRUE } else { EXIT_FALSE })
        }
        Mode::ExportDimacs => {
            let (p, table) = skeleton(&f)?;
            let cnf = to_cnf_tseitin(&PropFormula::not(p));
            let mut text = String::from(
                "c Tseitin encoding of the negated skeleton: unsatisfiable iff the input is a tautology\n",
            );
            for (a, s) in table.iter() {
                text.push_str(&format!("c atom {a} is variable {}: {s}\n", a.0 + 1));
            }
            text.push_str(&export_dimacs(&cnf));
            match path {
                Some(p) => std::fs::write(p, text)
                    .map_err(|e| Exit(EXIT_PRECONDITION, format!("writing {}: {e}", p.display())))?,
                None => write_out(out, &text)?,
            }
            Ok(EXIT_TRUE)
        }
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let mut spec = CorpusSpec::new(args.seed);
    spec.c_max = args.c;
    spec.n = args.n;
    spec.a_max = args.a;
    if let Some(d) = args.depth {
        spec.formula_depth = d;
    }
    if let Some(d) = &args.domain {
        spec.domain = d.clone();
    }
    if let Some(path) = &args.family {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
        spec.family = Some(parse_family(&text)?);
    }
    let reports: Vec<Report> = if args.suite == "all" {
        let mut rs = verify_all(&spec, args.jobs)?;
        let total = aggregate(&rs, Some(args.seed));
        rs.push(total);
        rs
    } else {
        let suite: Suite = args
            .suite
            .parse()
            .map_err(|_| usage(format!("unknown suite {:?}", args.suite)))?;
        vec![suite.run(&spec)]
    };
    let reports: Vec<Report> = reports.into_iter().map(|r| r.with_timing(args.timing)).collect();
    let passed = reports.iter().all(Report::passed);
    let text = match args.format {
        Format::Json if reports.len() == 1 => format!("{}\n", reports[0].to_json()),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&reports).expect("reports serialise")
        ),
        Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
    };
    match &args.out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Exit(EXIT_PRECONDITION, format!("writing {}: {e}", p.display())))?
        }
        None => write_out(out, &text)?,
    }
    Ok(if passed { EXIT_TRUE } else { EXIT_FALSE })
}
