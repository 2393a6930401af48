//! Command-line front end: the expression parser and the subcommands.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! tensor := tterm (('+' | '-') tterm)*
//! tterm  := slot ('ox' slot)*
//! slot   := rat ['*'] product | rat | product
//! product:= factor ('*' factor)*
//! factor := (gen | rat | '(' tensor ')') ('^' uint)?
//! gen    := 'X[' i ']' | 'Y[' i ',' j ']' | 'd[' i ';' j ',' k (';' l (',' l)*)? ']'
//!         | 'X' | 'Y' | 'd1' | 'd2' | …        (codimension 1 only)
//! ```
//!
//! `ox` binds tighter than `+` and `−`, so `X ox Y - Y ox X` is a sum of two
//! tensors; a parenthesized slot may hold a sum.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{Gen, HopfElement};
use crate::classes;
use crate::cyclic::{verify_lambda_relations, verify_tau_power, CyclicContext};
use crate::error::{Error, Result};
use crate::hopf::{antipode, coproduct, twisted_antipode, ModularPair, TensorCochain};
use crate::jets::exact::{verify_action_suite, verify_gamma_suite};
use crate::jets::forms::gv_pullback_check;
use crate::jets::numeric::{verify_trace_identities, GlobalDiffeo, NumericConfig};
use crate::rational::{parse_q, q};
use crate::relative::{parse_pair_json, CnValue, RelContext};
use crate::report::{Check, RelationReport, SCHEMA};
use crate::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Sym(char),
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    codim: usize,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

fn parse_err(src: &str, offset: usize, msg: impl Into<String>) -> Error {
    let (line, col) = line_col(src, offset);
    Error::Parse { line, col, msg: msg.into() }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = vec![];
    let b = src.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < b.len() && b[i] == b'/' && b[i + 1].is_ascii_digit() {
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let v = parse_q(&src[start..i]).ok_or_else(|| parse_err(src, start, "bad rational"))?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && b[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "[],;*^+-()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap();
            return Err(parse_err(src, i, format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.src, self.offset(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn index(&mut self) -> Result<u8> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) if v.is_integer() => {
                self.pos += 1;
                let i: i64 = v.to_integer().try_into().unwrap_or(i64::MAX);
                if i < 1 || i as usize > self.codim {
                    return Err(parse_err(self.src, at, format!("index {i} out of range 1..={}", self.codim)));
                }
                Ok(i as u8)
            }
            _ => Err(self.err("expected an index")),
        }
    }

    fn uint(&mut self) -> Result<usize> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) if v.is_integer() => {
                self.pos += 1;
                Ok(v.to_integer().try_into().map_err(|_| self.err("exponent too large"))?)
            }
            _ => Err(self.err("expected a non-negative integer exponent")),
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => s != "ox",
            Some(Tok::Num(_)) | Some(Tok::Sym('(')) => true,
            _ => false,
        }
    }

    fn gen(&mut self, name: &str, at: usize) -> Result<Gen> {
        let bracketed = self.peek() == Some(&Tok::Sym('['));
        if !bracketed {
            if self.codim != 1 {
                return Err(parse_err(self.src, at, format!("shorthand '{name}' is only valid in codimension 1")));
            }
            return match name {
                "X" => Ok(Gen::x(1)),
                "Y" => Ok(Gen::y(1, 1)),
                _ => match name.strip_prefix('d').and_then(|r| r.parse::<usize>().ok()) {
                    Some(n) if n >= 1 && n <= crate::algebra::TAIL_CAP + 1 => Ok(Gen::d(n)),
                    _ => Err(parse_err(self.src, at, format!("unknown generator '{name}'"))),
                },
            };
        }
        self.pos += 1;
        let g = match name {
            "X" => Gen::x(self.index()?),
            "Y" => {
                let i = self.index()?;
                self.expect(',')?;
                Gen::y(i, self.index()?)
            }
            "d" => {
                let i = self.index()?;
                self.expect(';')?;
                let j = self.index()?;
                self.expect(',')?;
                let k = self.index()?;
                let mut tail = vec![];
                if self.eat(';') {
                    tail.push(self.index()?);
                    while self.eat(',') {
                        tail.push(self.index()?);
                    }
                }
                if tail.len() > crate::algebra::TAIL_CAP {
                    return Err(parse_err(self.src, at, "δ tail too long"));
                }
                Gen::delta(i, j, k, tail)
            }
            _ => return Err(parse_err(self.src, at, format!("unknown generator '{name}'"))),
        };
        self.expect(']')?;
        Ok(g)
    }

    fn factor(&mut self) -> Result<HopfElement> {
        let at = self.offset();
        let base = match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                HopfElement::scalar(self.codim, v)
            }
            Some(Tok::Ident(s)) if s != "ox" => {
                self.pos += 1;
                let g = self.gen(&s, at)?;
                HopfElement::try_gen(self.codim, g)?
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let t = self.tensor()?;
                self.expect(')')?;
                if t.degree != 1 {
                    return Err(parse_err(self.src, at, "a parenthesized factor must not contain 'ox'"));
                }
                t.as_element()
            }
            _ => return Err(self.err("expected a generator, number or '('")),
        };
        if self.eat('^') {
            let k = self.uint()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn slot(&mut self) -> Result<HopfElement> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') || self.starts_factor() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn tterm(&mut self) -> Result<TensorCochain> {
        let mut slots = vec![self.slot()?];
        while self.peek() == Some(&Tok::Ident("ox".into())) {
            self.pos += 1;
            slots.push(self.slot()?);
        }
        Ok(TensorCochain::tensor(self.codim, &slots))
    }

    fn tensor(&mut self) -> Result<TensorCochain> {
        let mut sign = q(1);
        if self.eat('-') {
            sign = q(-1);
        } else {
            self.eat('+');
        }
        let mut acc = self.tterm()?.scale(&sign);
        loop {
            let s = if self.eat('+') {
                q(1)
            } else if self.eat('-') {
                q(-1)
            } else {
                return Ok(acc);
            };
            let here = self.offset();
            let t = self.tterm()?;
            if t.degree != acc.degree {
                return Err(parse_err(self.src, here, format!("tensor degree {} does not match {}", t.degree, acc.degree)));
            }
            acc = acc.add(&t.scale(&s));
        }
    }
}

/// Parses a sum of tensors in codimension `codim`.
pub fn parse_tensor(src: &str, codim: usize) -> Result<TensorCochain> {
    let toks = tokenize(src)?;
    let mut lx = Lexer { src, toks, pos: 0, codim };
    if lx.toks.is_empty() {
        return Err(lx.err("empty expression"));
    }
    let t = lx.tensor()?;
    if lx.pos != lx.toks.len() {
        return Err(lx.err("unexpected trailing input"));
    }
    Ok(t)
}

/// Parses a single element of ℋ_codim.
pub fn parse_element(src: &str, codim: usize) -> Result<HopfElement> {
    let t = parse_tensor(src, codim)?;
    if t.degree != 1 {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("expected an element, got a tensor of degree {}", t.degree) });
    }
    Ok(t.as_element())
}

#[derive(Parser, Debug)]
#[command(name = "hopfcyclic", version, about = "Hopf algebras of transverse geometry and their cyclic complexes")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Codimension n.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=8))]
    codim: u64,
    /// PBW degree truncation D for the relative complex.
    #[arg(long = "degree-cap", global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=6))]
    degree_cap: u64,
    /// ε-order K of jet computations.
    #[arg(long = "eps-order", global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
    eps_order: u64,
    /// Quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, global = true, env = "HOPFCYCLIC_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// PBW normal form.
    Nf { expr: String },
    /// Coproduct.
    Cop { expr: String },
    /// Antipode S.
    Antipode { expr: String },
    /// Twisted antipode S̃ for the canonical modular pair.
    Tantipode { expr: String },
    /// Hochschild coboundary b.
    #[command(name = "b")]
    HochschildB { tensor: String },
    /// Cyclic boundary B.
    #[command(name = "B")]
    ConnesB { tensor: String },
    /// Cyclic operator τₙ.
    Tau { tensor: String },
    /// Randomized identity checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Godbillon–Vey, Schwarzian and transverse fundamental cocycles.
    #[command(subcommand)]
    Classes(ClassesCmd),
    /// Godbillon–Vey pullback at sample points.
    GvPullback {
        #[arg(long, default_value = "cubic")]
        diffeo: String,
    },
    /// Relative complex of a Lie pair read from a JSON file.
    Rel {
        /// JSON with "dim", "brackets", "subalgebra" and optional "names", "module".
        file: PathBuf,
        #[command(subcommand)]
        cmd: RelCmd,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Cyclic-category relations and the τₙ^{n+1} formula.
    Lambda {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Module-algebra property on ε-jet crossed terms.
    Action {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Trace identities by quadrature (codimension 1).
    Trace,
    /// γ-cocycle and symmetry identities.
    GammaCocycle {
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ClassesCmd {
    /// Identities of the codimension-1 cocycles.
    Verify,
}

#[derive(Subcommand, Debug)]
enum RelCmd {
    /// Cyclic relations, transfer maps, coset independence, CE and comparison maps.
    Verify,
    /// Dimensions of relative Lie algebra homology.
    Homology {
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Scalar c_n relating the cyclic and Chevalley–Eilenberg comparison maps.
    DeriveCn {
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
}

struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

impl Outcome {
    fn value(command: &str, input: &str, result: String) -> Self {
        Outcome { json: json!({"command": command, "input": input, "result": result}), text: result, pass: true }
    }
}

fn report_lines(reports: &[RelationReport]) -> String {
    reports
        .iter()
        .map(|r| {
            let mut s = format!("{} {} (n={}, {} trials)", if r.pass { "PASS" } else { "FAIL" }, r.relation, r.degree, r.trials);
            if let Some(c) = &r.counterexample {
                s.push_str(&format!(": {c}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn check_lines(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let mut s = format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            if let Some(d) = &c.detail {
                s.push_str(&format!(": {d}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn checks_outcome(command: &str, checks: Vec<Check>) -> Outcome {
    let pass = checks.iter().all(|c| c.pass);
    Outcome { text: check_lines(&checks), json: json!({"command": command, "pass": pass, "checks": checks}), pass }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.cfg;
    let n = cfg.codim as usize;
    let seed = cfg.seed;
    Ok(match &cli.cmd {
        Cmd::Nf { expr } => Outcome::value("nf", expr, parse_element(expr, n)?.render()),
        Cmd::Cop { expr } => Outcome::value("cop", expr, coproduct(&parse_element(expr, n)?).render()),
        Cmd::Antipode { expr } => Outcome::value("antipode", expr, antipode(&parse_element(expr, n)?).render()),
        Cmd::Tantipode { expr } => {
            Outcome::value("tantipode", expr, twisted_antipode(&ModularPair::canonical(n), &parse_element(expr, n)?).render())
        }
        Cmd::HochschildB { tensor } => {
            Outcome::value("b", tensor, CyclicContext::canonical(n).hochschild_b(&parse_tensor(tensor, n)?)?.render())
        }
        Cmd::ConnesB { tensor } => {
            Outcome::value("B", tensor, CyclicContext::canonical(n).connes_b(&parse_tensor(tensor, n)?)?.render())
        }
        Cmd::Tau { tensor } => Outcome::value("tau", tensor, CyclicContext::canonical(n).cyclic(&parse_tensor(tensor, n)?)?.render()),
        Cmd::Verify(VerifyCmd::Lambda { n: deg, trials }) => {
            let ctx = CyclicContext::canonical(n);
            let mut reports = verify_lambda_relations(&ctx, *deg, *trials, seed);
            reports.extend(verify_tau_power(&ctx, *deg, *trials, seed));
            let pass = reports.iter().all(|r| r.pass);
            Outcome { text: report_lines(&reports), json: json!({"command": "verify lambda", "pass": pass, "reports": reports}), pass }
        }
        Cmd::Verify(VerifyCmd::Action { trials }) => {
            checks_outcome("verify action", verify_action_suite(n, cfg.eps_order as usize, *trials, seed)?)
        }
        Cmd::Verify(VerifyCmd::GammaCocycle { trials }) => {
            checks_outcome("verify gamma-cocycle", verify_gamma_suite(n, cfg.eps_order as usize, *trials, seed)?)
        }
        Cmd::Verify(VerifyCmd::Trace) => {
            if n != 1 {
                return Err(Error::CodimOneOnly);
            }
            let reports = verify_trace_identities(seed, cfg.tol, &NumericConfig::default())?;
            let pass = reports.iter().all(|r| r.pass);
            let text = reports
                .iter()
                .map(|r| {
                    format!(
                        "{} {}: rel_err {:.2e}, drift {:.2e}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.identity,
                        r.rel_err,
                        r.drift.unwrap_or(0.0)
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Outcome { text, json: json!({"command": "verify trace", "pass": pass, "reports": reports}), pass }
        }
        Cmd::Classes(ClassesCmd::Verify) => {
            if n != 1 {
                return Err(Error::CodimOneOnly);
            }
            let checks = classes::verify_all(&CyclicContext::canonical(1))?;
            let pass = checks.iter().all(|c| c.pass);
            let named: Vec<Value> =
                classes::named().into_iter().map(|(k, c)| json!({"name": k, "cochain": c.render()})).collect();
            Outcome {
                text: check_lines(&checks),
                json: json!({"command": "classes verify", "pass": pass, "classes": named, "checks": checks}),
                pass,
            }
        }
        Cmd::GvPullback { diffeo } => {
            let phi = GlobalDiffeo::by_name(diffeo)?;
            let mut samples = vec![(0.5, 0.3, 1.2)];
            for i in 0..9 {
                let s = i as f64;
                samples.push((0.1 * s, -1.5 + 0.37 * s, 0.4 + 0.21 * s));
            }
            let reports = gv_pullback_check(&phi, &samples, 1e-10);
            let pass = reports.iter().all(|r| r.pass);
            let text = reports
                .iter()
                .map(|r| format!("{} {}: {:.12e} vs {:.12e}", if r.pass { "PASS" } else { "FAIL" }, r.identity, r.lhs, r.rhs))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome { text, json: json!({"command": "gv-pullback", "diffeo": diffeo, "pass": pass, "reports": reports}), pass }
        }
        Cmd::Rel { file, cmd } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Other(format!("{}: {e}", file.display())))?;
            let (pair, module) = parse_pair_json(&text)?;
            let ctx = RelContext::new(pair.clone(), module.clone(), cfg.degree_cap as usize)?;
            match cmd {
                RelCmd::Verify => {
                    let mut reports = ctx.verify_lambda(2, 15, seed);
                    reports.extend(ctx.verify_transfer(2, 20, seed));
                    reports.extend((0..=2).map(|k| ctx.verify_phi_lift(k, 10, seed)));
                    reports.extend(ctx.verify_well_defined(2, 10, seed));
                    let mut checks = vec![RelContext::sayd_check(&pair, &module)];
                    checks.extend(ctx.verify_ce());
                    checks.extend(ctx.verify_alpha_mu(3, seed));
                    let pass = reports.iter().all(|r| r.pass) && checks.iter().all(|c| c.pass);
                    Outcome {
                        text: format!("{}\n{}", report_lines(&reports), check_lines(&checks)),
                        json: json!({"command": "rel verify", "pass": pass, "reports": reports, "checks": checks}),
                        pass,
                    }
                }
                RelCmd::Homology { degree } => {
                    let dims = ctx.ce_homology_dims();
                    let d = dims.get(*degree).copied().unwrap_or(0);
                    Outcome {
                        text: format!("H_{degree} = {d}  (all degrees: {dims:?})"),
                        json: json!({"command": "rel homology", "degree": degree, "dim": d, "dims": dims}),
                        pass: true,
                    }
                }
                RelCmd::DeriveCn { degree } => match ctx.derive_cn(*degree)? {
                    CnValue::Determined { value, exact } => {
                        let v = crate::rational::fmt_q(&value);
                        Outcome {
                            text: if exact { v.clone() } else { format!("{v} (modulo the image of b)") },
                            json: json!({"command": "rel derive-cn", "degree": degree, "value": v, "exact": exact}),
                            pass: true,
                        }
                    }
                    CnValue::Indeterminate => Outcome {
                        text: "indeterminate".into(),
                        json: json!({"command": "rel derive-cn", "degree": degree, "value": Value::Null, "indeterminate": true}),
                        pass: true,
                    },
                },
            }
        }
    })
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Parse { .. } | Error::IndexOutOfRange { .. } | Error::CodimOneOnly | Error::Lie(_))
}

// A closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

/// Runs the command line; returns the exit code (0 pass, 1 fail, 2 usage).
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.cfg.json {
                let mut v = out.json;
                if let Value::Object(m) = &mut v {
                    m.insert("schema".into(), json!(SCHEMA));
                    m.entry("pass").or_insert(json!(out.pass));
                }
                emit(&v.to_string());
            } else {
                emit(&out.text);
            }
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            if cli.cfg.json {
                emit(&json!({"schema": SCHEMA, "pass": false, "error": e.to_string()}).to_string());
            } else {
                eprintln!("error: {e}");
            }
            if is_usage(&e) {
                2
            } else {
                1
            }
        }
    }
}
