use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wordwidth::constants::constant_chain;
use wordwidth::decomposition::{factor_lu3u_with, q_witness, FactorCertificate, Lu3uOutcome, SearchLimits};
use wordwidth::finite::{enumerate_group_with_budget, value_set_with, width_with, SymSet, ValueSetOptions};
use wordwidth::matrix::{mennicke_violation, parse_matrix, random_elementary_product, CongruenceLevel};
use wordwidth::padic::{
    newton_lift, padic_width_bound, word_coset_cover_with, CoverOptions, CoverStatus, LiftCertificate,
    PolyMapDescriptor,
};
use wordwidth::words::parse_word;
use wordwidth::Error;

#[derive(Parser, Debug)]
#[command(name = "wordwidth", version, about = "Word maps, factorizations and p-adic lifting in SL_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true)]
    word: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Congruence level, or the modulus for `width` and `values`.
    #[arg(long, global = true)]
    q: Option<u64>,
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Precision exponent: work modulo p^K.
    #[arg(long = "K", global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true)]
    budget_elements: Option<usize>,
    #[arg(long, global = true)]
    budget_samples: Option<usize>,
    #[arg(long, global = true)]
    max_len: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor an element of E(n, Z; q) as L·Uc·Uc·Uc·U and write a certificate.
    Factor {
        /// Matrix text `a,b;c,d`.
        matrix: Option<String>,
        /// Use a seeded random product of `--max-len` level-q elementaries instead.
        #[arg(long)]
        random: bool,
    },
    /// Width of a word in SL_n(Z/q).
    Width,
    /// Value set of a word in SL_n(Z/q).
    Values {
        /// Print every value.
        #[arg(long)]
        list: bool,
    },
    /// Level-q witness for a non-trivial word.
    Witness,
    /// Replay factor and lift certificates.
    Verify { paths: Vec<PathBuf> },
    /// The constant chain 16 · 5 = 80 and 80 + 7 = 87.
    Constants,
    /// Newton lift for a polynomial map.
    Lift {
        /// Components separated by `;`, e.g. `x1^2`.
        #[arg(long)]
        poly: String,
        /// Start point, comma separated.
        #[arg(long, value_delimiter = ',')]
        a: Vec<u64>,
        /// Target, comma separated.
        #[arg(long, value_delimiter = ',')]
        b: Vec<u64>,
        /// Valuation level of the map.
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
    /// Sampled 7-fold cover of SL_n(Z/p^K) by word values.
    Cover,
    /// Width bound for the conjugation closure of matrices in SL_n(Z/p^K).
    Bound {
        #[arg(long = "matrix", required = true)]
        matrices: Vec<String>,
    },
}

enum Failure {
    Precondition(String),
    Soft(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(m) => Failure::Internal(m),
            other => Failure::Precondition(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Precondition(format!("missing --{flag}")))
}

fn need_word(cli: &Cli) -> Result<wordwidth::words::Word, Failure> {
    let text = cli.word.as_deref().ok_or_else(|| Failure::Precondition("missing --word".into()))?;
    Ok(parse_word(text)?)
}

/// Rows of `key=value` (structured) or `key: value` (text).
struct Report {
    format: Format,
    out: String,
}

impl Report {
    fn new(cli: &Cli) -> Report {
        let mut r = Report { format: cli.format, out: String::new() };
        r.row("seed", cli.seed);
        r
    }

    fn row(&mut self, key: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Text => writeln!(self.out, "{key}: {value}"),
            Format::Structured => writeln!(self.out, "{}={value}", key.replace(' ', "_")),
        }
        .unwrap();
    }

    fn finish(self) -> String {
        self.out
    }
}

fn emit_file(cli: &Cli, body: &str, report: &mut Report) -> Result<(), Failure> {
    if let Some(path) = &cli.out {
        std::fs::write(path, body).map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))?;
        report.row("written", path.display());
    } else {
        report.out.push_str(body);
    }
    Ok(())
}

fn cmd_factor(cli: &Cli, matrix: Option<&str>, random: bool) -> Outcome {
    let q = CongruenceLevel::new(cli.q.unwrap_or(1))?;
    let g = if random {
        let n = need(cli.n, "n")?;
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        random_elementary_product(n, &q, cli.max_len.unwrap_or(25), &mut rng)
    } else {
        let text = matrix.ok_or_else(|| Failure::Precondition("expected a matrix or --random".into()))?;
        parse_matrix(text)?
    };
    if let Some(why) = mennicke_violation(&g, &q) {
        return Err(Failure::Precondition(format!("input is outside the Mennicke test: {why}")));
    }
    let mut limits = SearchLimits::default();
    if let Some(b) = cli.budget_samples {
        limits.budget = b as u64;
    }
    let mut r = Report::new(cli);
    r.row("n", g.n());
    r.row("q", &q);
    match factor_lu3u_with(&g, &q, limits)? {
        Lu3uOutcome::Certified(cert) => {
            let v = cert.verify();
            if !v.passed() {
                return Err(Failure::Internal(format!("fresh certificate fails: {}", v.failures[0])));
            }
            r.row("classes", wordwidth::decomposition::class_sequence(&cert.factors));
            r.row("status", "PASS");
            emit_file(cli, &cert.to_text(), &mut r)?;
            Ok(r.finish())
        }
        Lu3uOutcome::Soft(f) => Err(Failure::Soft(format!(
            "alternating search exhausted after {} evaluations (length {}); residual block {}",
            f.evaluations, f.max_len, f.residual
        ))),
    }
}

fn table_and_options(cli: &Cli) -> Result<(Arc<wordwidth::finite::FiniteGroupTable>, ValueSetOptions), Failure> {
    let n = need(cli.n, "n")?;
    let m = need(cli.q, "q")?;
    let budget = cli.budget_elements.unwrap_or(wordwidth::finite::DEFAULT_ELEMENT_BUDGET);
    let table = Arc::new(enumerate_group_with_budget(n, m, budget)?);
    let mut opts = ValueSetOptions { seed: cli.seed, ..ValueSetOptions::default() };
    if let Some(s) = cli.budget_samples {
        opts.samples = s;
    }
    Ok((table, opts))
}

fn cmd_width(cli: &Cli) -> Outcome {
    let w = need_word(cli)?;
    let (table, opts) = table_and_options(cli)?;
    let width = width_with(&w, &table, opts)?;
    let mut r = Report::new(cli);
    r.row("word", &w);
    r.row("n", table.n());
    r.row("m", table.modulus());
    r.row("values", width.value_set_size);
    match width.exact() {
        Some(k) => {
            r.row("width", k);
            r.row("exact", true);
        }
        None => {
            let upper = width.upper.map_or("unknown".to_string(), |u| u.to_string());
            r.row("width", format!("[{}, {upper}]", width.lower));
            r.row("exact", false);
        }
    }
    Ok(r.finish())
}

fn cmd_values(cli: &Cli, list: bool) -> Outcome {
    let w = need_word(cli)?;
    let (table, opts) = table_and_options(cli)?;
    let v = value_set_with(&w, &table, opts)?;
    let mut r = Report::new(cli);
    r.row("word", &w);
    r.row("group order", table.len());
    r.row("values", v.len());
    r.row("approximate", v.is_approximate());
    if list {
        for (i, m) in v.elements().iter().enumerate() {
            r.row(&format!("value.{}", i + 1), m);
        }
    }
    Ok(r.finish())
}

fn cmd_witness(cli: &Cli) -> Outcome {
    let w = need_word(cli)?;
    let wit = q_witness(&w)?;
    let ok = wit.verify()?;
    let mut r = Report::new(cli);
    r.row("word", &w);
    r.row("q", &wit.q);
    r.row("d", wit.d());
    r.row("g", &wit.g);
    r.row("h", &wit.h);
    r.row("commutator", &wit.commutator);
    r.row("c", &wit.c);
    r.row("replay", if ok { "PASS" } else { "FAIL" });
    if ok {
        Ok(r.finish())
    } else {
        Err(Failure::Internal("witness identities do not replay".into()))
    }
}

fn cmd_verify(cli: &Cli, paths: &[PathBuf]) -> Outcome {
    if paths.is_empty() {
        return Err(Failure::Precondition("no certificate files given".into()));
    }
    let mut r = Report::new(cli);
    let mut failed = 0;
    for path in paths {
        let name = path.display().to_string();
        let verdict = match std::fs::read_to_string(path) {
            Err(e) => Err(e.to_string()),
            Ok(text) if text.lines().any(|l| l.trim() == "kind=lift") => match LiftCertificate::from_text(&text) {
                Ok(c) => {
                    let v = c.verify();
                    if v.passed() && c.status == CoverStatus::Pass {
                        let min = v.residuals.iter().min().copied().unwrap_or(c.precision);
                        Ok(format!("PASS (lift, {} samples, residual valuations >= {min})", c.samples.len()))
                    } else if v.passed() {
                        Err(format!("certificate status {}", c.status))
                    } else {
                        Err(v.to_string())
                    }
                }
                Err(e) => Err(e.to_string()),
            },
            Ok(text) => match FactorCertificate::from_text(&text) {
                Ok(parsed) => {
                    let v = parsed.verify();
                    if v.passed() {
                        Ok(format!("PASS (factor, {} factors)", parsed.certificate.factors.len()))
                    } else {
                        Err(format!("FAIL {}", v.failures[0]))
                    }
                }
                Err(e) => Err(e.to_string()),
            },
        };
        match verdict {
            Ok(m) => r.row(&name, m),
            Err(m) => {
                failed += 1;
                let m = if m.starts_with("FAIL") { m } else { format!("FAIL {m}") };
                r.row(&name, m);
            }
        }
    }
    if failed > 0 {
        print!("{}", r.finish());
        return Err(Failure::Precondition(format!("{failed} certificate(s) failed")));
    }
    Ok(r.finish())
}

fn cmd_constants(cli: &Cli) -> Outcome {
    let mut r = Report::new(cli);
    for step in constant_chain() {
        r.row(step.name, format!("{} ({})", step.value, step.basis));
    }
    Ok(r.finish())
}

fn cmd_lift(cli: &Cli, poly: &str, a: &[u64], b: &[u64], k: u32) -> Outcome {
    let p = need(cli.p, "p")?;
    let precision = need(cli.precision, "K")?;
    let f = PolyMapDescriptor::parse(poly, Some(a.len()))?;
    let lift = newton_lift(&f, a, b, p, k, precision)?;
    let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut r = Report::new(cli);
    r.row("map", &f);
    r.row("p", p);
    r.row("K", precision);
    r.row("point", join(&lift.point));
    for (i, (x, v)) in lift.iterates.iter().zip(&lift.valuations).enumerate() {
        r.row(&format!("iterate.{i}"), format!("{} (valuation {v}, bound {})", join(x), lift.bounds[i]));
    }
    r.row("status", "PASS");
    Ok(r.finish())
}

fn cmd_cover(cli: &Cli) -> Outcome {
    let w = need_word(cli)?;
    let n = need(cli.n, "n")?;
    let p = need(cli.p, "p")?;
    let precision = need(cli.precision, "K")?;
    let samples = cli.budget_samples.unwrap_or(200);
    let mut opts = CoverOptions::default();
    if let Some(e) = cli.budget_elements {
        opts.tuple_budget = e as u128;
    }
    let cert = word_coset_cover_with(&w, n, p, precision, samples, cli.seed, opts)?;
    let v = cert.verify();
    let mut r = Report::new(cli);
    r.row("word", &w);
    r.row("n", n);
    r.row("p", p);
    r.row("K", precision);
    r.row("samples", cert.samples.len());
    r.row("successes", cert.successes());
    r.row("exponent", cert.exponent());
    r.row("replay", &v);
    r.row("status", cert.status);
    if cli.out.is_some() {
        emit_file(cli, &cert.to_text(), &mut r)?;
    }
    if !v.passed() {
        return Err(Failure::Internal(format!("certificate does not replay: {v}")));
    }
    match cert.status {
        CoverStatus::Pass => Ok(r.finish()),
        CoverStatus::Fail => Err(Failure::Soft(format!("{}some samples were not covered", r.finish()))),
        CoverStatus::Inconclusive => Err(Failure::Soft(format!("{}no generating pair found", r.finish()))),
    }
}

fn cmd_bound(cli: &Cli, matrices: &[String]) -> Outcome {
    let n = need(cli.n, "n")?;
    let p = need(cli.p, "p")?;
    let precision = need(cli.precision, "K")?;
    let m = (0..precision).try_fold(1u64, |acc, _| acc.checked_mul(p)).ok_or(Failure::Precondition("p^K too large".into()))?;
    let budget = cli.budget_elements.unwrap_or(wordwidth::finite::DEFAULT_ELEMENT_BUDGET);
    let table = Arc::new(enumerate_group_with_budget(n, m, budget)?);
    let gs = matrices.iter().map(|t| parse_matrix(t)?.reduce_mod(m)).collect::<Result<Vec<_>, _>>()?;
    let x = SymSet::from_matrices(&table, &gs)?.symmetrize().conjugation_closure();
    let b = padic_width_bound(&x)?;
    let mut r = Report::new(cli);
    r.row("group order", table.len());
    r.row("set size", x.len());
    r.row("level", b.level.map_or("central".to_string(), |k| k.to_string()));
    r.row("case", &b.case);
    r.row("bound", b.bound);
    if let Some(o) = b.oracle {
        r.row("closure exponent", o);
        r.row("verified", b.bound >= o);
    }
    Ok(r.finish())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Factor { matrix, random } => cmd_factor(&cli, matrix.as_deref(), *random),
        Command::Width => cmd_width(&cli),
        Command::Values { list } => cmd_values(&cli, *list),
        Command::Witness => cmd_witness(&cli),
        Command::Verify { paths } => cmd_verify(&cli, paths),
        Command::Constants => cmd_constants(&cli),
        Command::Lift { poly, a, b, k } => cmd_lift(&cli, poly, a, b, *k),
        Command::Cover => cmd_cover(&cli),
        Command::Bound { matrices } => cmd_bound(&cli, matrices),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Precondition(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Soft(m)) => {
            println!("{m}");
            eprintln!("soft failure");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
