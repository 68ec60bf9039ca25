//! Command dispatch.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use corec::checker::{is_cia, is_corecursive, witness_non_cia, Outcome};
use corec::presentation::{hx_quotient, make_constants_explicit, probe_atoms, reduce, rtree_equiv_upto};
use corec::solver::{classify, fold_constants, solve, solve_decomposed, DecomposedSolution};
use corec::{Budget, EquationSystem, Error, FiniteAlgebra, LeafCount, RationalTree, Verdict3};
use serde_json::{json, Value};

use crate::json::{decomposed_variable, tree_variable, Document};
use crate::render;
use crate::syntax::{emit_ceq, parse_ceq, parse_falg, parse_pres, parse_signature, InputError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "corec", version, about = "Solve guarded equation systems and check algebras")]
pub struct Cli {
    /// Depth for cuts and level inspection.
    #[arg(short = 'k', long = "depth", default_value_t = 16, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    /// Cap on enumeration and saturation sizes.
    #[arg(long, env = "COREC_BUDGET", default_value_t = Budget::DEFAULT, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every variable of a system as a rational tree.
    Solve { file: PathBuf },
    /// Split the variables of a unary system into finite layers and the
    /// infinite part.
    Classify { file: PathBuf },
    /// Solutions of a unary system as finite words or eventually periodic
    /// streams.
    Decompose { file: PathBuf },
    /// Test a finite algebra on every system up to MAX_VARS variables.
    Check {
        #[arg(long, conflicts_with = "cia", required_unless_present = "cia")]
        corecursive: bool,
        #[arg(long)]
        cia: bool,
        alg: PathBuf,
        #[arg(default_value_t = 3)]
        max_vars: usize,
    },
    /// Reduce a presentation.
    Reduce {
        pres: PathBuf,
        /// Also add a constant for every symbol that collapses completely.
        #[arg(long)]
        explicit_constants: bool,
    },
    /// Build the infinite-leaf system for the first symbol of arity >= 2.
    /// SIG is a signature file or an inline list such as `alpha:3`.
    Witness { sig: String },
    /// Compare the root solutions of two systems, optionally modulo the
    /// axioms of a presentation.
    Equal {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        pres: Option<PathBuf>,
        /// Finite algebra used to separate trees (repeatable).
        #[arg(long = "model")]
        models: Vec<PathBuf>,
    },
    /// Classes of flat terms over N atoms.
    Quotient {
        pres: PathBuf,
        #[arg(long)]
        atoms: usize,
    },
}

/// Exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const NEGATIVE: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const BUDGET: u8 = 3;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimitExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Ctx {
    depth: usize,
    budget: Budget,
    format: Format,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn located<T>(path: &Path, r: Result<T, InputError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn no_dot(cx: &Ctx, command: &str) -> Result<(), Failure> {
    if cx.format == Format::Dot {
        return Err(Failure::Input(format!("`{command}` has no dot output; use text or json")));
    }
    Ok(())
}

pub fn run(cli: Cli) -> Output {
    let cx = Ctx {
        depth: cli.depth as usize,
        budget: Budget::new(cli.budget),
        format: cli.format,
    };
    let result = match &cli.command {
        Command::Solve { file } => cmd_solve(&cx, file),
        Command::Classify { file } => cmd_classify(&cx, file),
        Command::Decompose { file } => cmd_decompose(&cx, file),
        Command::Check { cia, alg, max_vars, .. } => cmd_check(&cx, alg, *cia, *max_vars),
        Command::Reduce { pres, explicit_constants } => cmd_reduce(&cx, pres, *explicit_constants),
        Command::Witness { sig } => cmd_witness(&cx, sig),
        Command::Equal {
            file1,
            file2,
            pres,
            models,
        } => cmd_equal(&cx, file1, file2, pres.as_deref(), models),
        Command::Quotient { pres, atoms } => cmd_quotient(&cx, pres, *atoms),
    };
    match result {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(m)) => Output {
            code: exit::INPUT,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Budget(m)) => Output {
            code: exit::BUDGET,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}

type CmdResult = Result<(u8, String), Failure>;

fn load_system(path: &Path) -> Result<EquationSystem, Failure> {
    located(path, parse_ceq(&read(path)?))
}

fn mu(cx: &Ctx, t: &RationalTree) -> Result<String, Failure> {
    render::mu_term(t, cx.budget.limit())
        .ok_or_else(|| Failure::Budget(format!("printing the tree needs more than {} nodes; use --format dot or json", cx.budget.limit())))
}

fn ordered<'a>(e: &EquationSystem, sol: &'a BTreeMap<String, RationalTree>) -> Vec<(&'a String, &'a RationalTree)> {
    e.variables().iter().map(|x| sol.get_key_value(x).expect("solution for every variable")).collect()
}

fn cmd_solve(cx: &Ctx, file: &Path) -> CmdResult {
    let e = load_system(file)?;
    let sol = solve(&e);
    let out = match cx.format {
        Format::Text => {
            let mut s = String::new();
            for (x, t) in ordered(&e, &sol) {
                let _ = writeln!(s, "{x} = {}", mu(cx, t)?);
            }
            s
        }
        Format::Dot => render::dot(&sol),
        Format::Json => {
            let mut doc = Document::new("solve").with_signature(e.signature());
            doc.variables = ordered(&e, &sol).into_iter().map(|(x, t)| tree_variable(x, t)).collect();
            doc.render()
        }
    };
    Ok((exit::OK, out))
}

fn cmd_classify(cx: &Ctx, file: &Path) -> CmdResult {
    no_dot(cx, "classify")?;
    let e = load_system(file)?;
    let c = classify(&e)?;
    let out = match cx.format {
        Format::Json => Document::new("classify")
            .field("layers", json!(c.layers))
            .field("infinite", json!(c.infinite))
            .render(),
        _ => render::classification(&c),
    };
    Ok((exit::OK, out))
}

/// Decomposition of a unary system; constants are read as parameters.
fn decompose_any(e: &EquationSystem) -> Result<DecomposedSolution, Failure> {
    let sig = e.signature();
    if sig.symbols().iter().any(|s| s.arity == 0) && sig.symbols().iter().all(|s| s.arity <= 1) {
        let (folded, folding) = fold_constants(e)?;
        let lifted: Vec<&String> = folding.lifted.values().collect();
        let mut d = solve_decomposed(&folded)?;
        d.retain(|x, _| !lifted.contains(&x));
        return Ok(d);
    }
    Ok(solve_decomposed(e)?)
}

fn cmd_decompose(cx: &Ctx, file: &Path) -> CmdResult {
    let e = load_system(file)?;
    let d = decompose_any(&e)?;
    let out = match cx.format {
        Format::Text => {
            let mut s = String::new();
            for x in e.variables() {
                let _ = writeln!(s, "{}", render::decomposed_line(x, &d[x]));
            }
            s
        }
        Format::Dot => {
            let sig = e.signature();
            let trees = d
                .iter()
                .map(|(x, v)| Ok((x.clone(), v.to_tree(&unary_part(sig))?)))
                .collect::<Result<BTreeMap<_, _>, Error>>()?;
            render::dot(&trees)
        }
        Format::Json => {
            let mut doc = Document::new("decompose").with_signature(&unary_part(e.signature()));
            doc.variables = e.variables().iter().map(|x| decomposed_variable(x, &d[x])).collect();
            doc.render()
        }
    };
    Ok((exit::OK, out))
}

/// The unary symbols of a signature (constants become leaves).
fn unary_part(sig: &corec::Signature) -> corec::Signature {
    if sig.symbols().iter().all(|s| s.arity == 1) {
        return sig.clone();
    }
    corec::Signature::new(sig.symbols().iter().filter(|s| s.arity == 1).map(|s| (s.name.clone(), 1))).unwrap_or_else(|_| sig.clone())
}

fn valuation_text(v: &BTreeMap<String, String>) -> String {
    v.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join(" ")
}

fn cmd_check(cx: &Ctx, alg_path: &Path, cia: bool, max_vars: usize) -> CmdResult {
    no_dot(cx, "check")?;
    let alg = located(alg_path, parse_falg(&read(alg_path)?))?;
    let v = if cia {
        is_cia(&alg, max_vars, cx.budget)?
    } else {
        is_corecursive(&alg, max_vars, cx.budget)?
    };
    let property = if cia { "cia" } else { "corecursive" };
    let code = if v.holds() { exit::OK } else { exit::NEGATIVE };
    let out = match (&v.outcome, cx.format) {
        (Outcome::Holds, Format::Json) => Document::new("check")
            .field("property", property)
            .field("max_vars", v.max_vars)
            .field("exhaustive", v.exhaustive)
            .field("systems_checked", v.systems_checked)
            .render_verdict("holds"),
        (Outcome::Fails { system, solutions }, Format::Json) => Document::new("check")
            .field("property", property)
            .field("max_vars", v.max_vars)
            .field("exhaustive", v.exhaustive)
            .field("systems_checked", v.systems_checked)
            .field("witness", emit_ceq(system))
            .field("solutions", json!(solutions))
            .render_verdict("fails"),
        (Outcome::Holds, _) => format!(
            "holds: {property}; every system with up to {} variables has exactly one solution ({} systems, exhaustive)\n",
            v.max_vars, v.systems_checked
        ),
        (Outcome::Fails { system, solutions }, _) => {
            let mut s = format!("fails: {property}; this system has {} solutions\n", solutions.len());
            s.push_str(&emit_ceq(system));
            for sol in solutions {
                let _ = writeln!(s, "# solution: {}", valuation_text(sol));
            }
            s
        }
    };
    Ok((code, out))
}

trait VerdictDoc {
    fn render_verdict(self, verdict: &str) -> String;
}

impl VerdictDoc for Document {
    fn render_verdict(mut self, verdict: &str) -> String {
        self.verdict = Some(verdict.to_string());
        self.render()
    }
}

fn cmd_reduce(cx: &Ctx, path: &Path, explicit: bool) -> CmdResult {
    no_dot(cx, "reduce")?;
    let p = located(path, parse_pres(&read(path)?))?;
    let (mut r, tr) = reduce(&p, cx.budget)?;
    if explicit {
        r = make_constants_explicit(&r, cx.budget)?;
    }
    let entries: Vec<(String, String)> = tr
        .entries()
        .map(|(from, to, idx)| {
            let arity = p.signature().arity(from).expect("symbol of the input");
            let xs: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
            let ys: Vec<String> = idx.iter().map(|&i| xs[i].clone()).collect();
            (format!("{from}({})", xs.join(", ")), format!("{to}({})", ys.join(", ")))
        })
        .collect();
    let out = match cx.format {
        Format::Json => Document::new("reduce")
            .with_signature(r.signature())
            .field("axioms", json!(r.axioms().iter().map(ToString::to_string).collect::<Vec<_>>()))
            .field(
                "translation",
                Value::Array(entries.iter().map(|(f, t)| json!({"from": f, "to": t})).collect()),
            )
            .render(),
        _ => {
            let mut s = format!("{r}\n");
            for (f, t) in &entries {
                let _ = writeln!(s, "# {f} -> {t}");
            }
            s
        }
    };
    Ok((exit::OK, out))
}

fn cmd_witness(cx: &Ctx, sig: &str) -> CmdResult {
    let path = Path::new(sig);
    let sig = if path.is_file() {
        located(path, parse_signature(&read(path)?))?
    } else {
        parse_signature(sig)?
    };
    let w = witness_non_cia(&sig, cx.depth)?;
    let code = if w.holds() { exit::OK } else { exit::NEGATIVE };
    let missing: Vec<usize> = w.levels.iter().enumerate().filter(|(_, b)| !**b).map(|(i, _)| i + 1).collect();
    let leaves = match w.leaf_count {
        LeafCount::Finite(n) => n.to_string(),
        LeafCount::Saturated => "more than 2^64".into(),
        LeafCount::Infinite => "infinite".into(),
    };
    let out = match cx.format {
        Format::Dot => render::dot(&BTreeMap::from([("x1".to_string(), w.solution.clone())])),
        Format::Json => {
            let mut doc = Document::new("witness").with_signature(&sig);
            doc.variables = vec![tree_variable("x1", &w.solution)];
            doc.field("symbol", w.symbol.clone())
                .field("system", emit_ceq(&w.system))
                .field("parameter_leaves", leaves)
                .field("in_c", w.solution.in_c())
                .field("levels", json!(w.levels))
                .render_verdict(if w.holds() { "holds" } else { "fails" })
        }
        Format::Text => {
            let mut s = emit_ceq(&w.system);
            let _ = writeln!(s, "x1 = {}", mu(cx, &w.solution)?);
            let _ = writeln!(s, "parameter leaves: {leaves}");
            if missing.is_empty() {
                let _ = writeln!(s, "y2 occurs at every level 1..{}", cx.depth);
            } else {
                let _ = writeln!(s, "y2 missing at levels {missing:?}");
            }
            s
        }
    };
    Ok((code, out))
}

fn root_tree(e: &EquationSystem) -> RationalTree {
    let root = e.root().expect("systems have at least one variable").to_string();
    solve(e).remove(&root).expect("root is a variable")
}

fn cmd_equal(cx: &Ctx, f1: &Path, f2: &Path, pres: Option<&Path>, models: &[PathBuf]) -> CmdResult {
    no_dot(cx, "equal")?;
    let (e1, e2) = (load_system(f1)?, load_system(f2)?);
    if e1.signature() != e2.signature() {
        return Err(Failure::Input("the two systems use different signatures".into()));
    }
    let (t, u) = (root_tree(&e1), root_tree(&e2));
    let verdict = match pres {
        None => {
            if t.bisim_equal(&u)? {
                Verdict3::Equal
            } else {
                Verdict3::Distinct(corec::presentation::Witness::Saturated)
            }
        }
        Some(path) => {
            let p = located(path, parse_pres(&read(path)?))?;
            if p.signature() != e1.signature() {
                return Err(Failure::Input("presentation and systems use different signatures".into()));
            }
            let algs = models
                .iter()
                .map(|m| located(m, parse_falg(&read(m)?)))
                .collect::<Result<Vec<FiniteAlgebra>, _>>()?;
            rtree_equiv_upto(&p, &t, &u, cx.depth, cx.budget, &algs)?
        }
    };
    let (code, word, detail) = match &verdict {
        Verdict3::Equal if pres.is_some() => (exit::OK, "equal", format!("up to depth {}", cx.depth)),
        Verdict3::Equal => (exit::OK, "equal", "bisimilar".to_string()),
        Verdict3::Distinct(_) if pres.is_none() => (exit::NEGATIVE, "distinct", "not bisimilar".to_string()),
        Verdict3::Distinct(w) => (exit::NEGATIVE, "distinct", w.to_string()),
        Verdict3::Unknown(b) => (exit::BUDGET, "unknown", format!("undecided within budget {b}")),
    };
    let out = match cx.format {
        Format::Json => Document::new("equal").field("detail", detail).render_verdict(word),
        _ => format!("{word}: {detail}\n"),
    };
    Ok((code, out))
}

fn cmd_quotient(cx: &Ctx, path: &Path, atoms: usize) -> CmdResult {
    no_dot(cx, "quotient")?;
    let p = located(path, parse_pres(&read(path)?))?;
    let classes = hx_quotient(&p, &probe_atoms(atoms), cx.budget)?;
    let rendered: Vec<Vec<String>> = classes.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect();
    let out = match cx.format {
        Format::Json => Document::new("quotient")
            .field("atoms", atoms)
            .field("count", rendered.len())
            .field("classes", json!(rendered))
            .render(),
        _ => {
            let mut s = String::new();
            for c in &rendered {
                let _ = writeln!(s, "{{{}}}", c.join(", "));
            }
            let _ = writeln!(s, "classes: {}", rendered.len());
            s
        }
    };
    Ok((exit::OK, out))
}
