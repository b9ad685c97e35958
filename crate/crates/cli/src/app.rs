use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use irrarray_core::closed_forms::ClosedForm;
use irrarray_core::oeis::{self, ANumber};
use irrarray_core::perm::refines;
use irrarray_core::PartialSumTable;

use crate::bench::{run_bench, parse_range, Methods};
use crate::generate::{permutation, Generator, Method, Term};
use crate::syntax::{format_spec, parse_quantity, parse_rule, parse_spec};
use crate::verify::{check_all, parse_mappings, Outcome, BUILTIN};
use crate::{exit, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "irrarray",
    version,
    about = "Locate indices in irregular arrays and generate the sequences built on them"
)]
struct Cli {
    /// Base URL for `fetch`.
    #[arg(long, global = true, env = oeis::ENDPOINT_ENV, default_value = oeis::DEFAULT_ENDPOINT)]
    oeis_endpoint: String,

    /// Directory holding Axxxxxx.txt b-files.
    #[arg(long, global = true, default_value = "fixtures")]
    fixtures: PathBuf,

    /// Largest block, row or term count materialized at once.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Rows,
    Flat,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print L, R, R' of index N by search and by closed form.
    Locate { spec: String, n: u64 },
    /// Print the canonical form of a partition and its first block lengths.
    Spec {
        spec: String,
        #[arg(long, default_value_t = 10)]
        blocks: u64,
    },
    /// Emit terms 1..COUNT of L, R, R', B, b, perm:<rule> or reluctant:<q>[,rev].
    Gen {
        spec: String,
        what: String,
        count: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        #[arg(long, default_value_t = 1)]
        start: u64,
    },
    /// Compare generators with vendored OEIS b-files.
    Verify {
        /// Mapping file; the built-in list is used when absent.
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Print the built-in mapping list and exit.
        #[arg(long)]
        list: bool,
    },
    /// Time the search locator against the closed form.
    Bench {
        spec: String,
        range: String,
        #[arg(value_enum, default_value = "both")]
        methods: Methods,
        #[arg(default_value_t = 3)]
        reps: usize,
        /// Largest number of indices sampled from the range.
        #[arg(long, default_value_t = 1_000_000)]
        max_points: u64,
    },
    /// Per-block orders of a permutation and their LCM.
    Order {
        spec: String,
        rule: String,
        horizon: u64,
    },
    /// Whether every block of BETA is a union of blocks of GAMMA.
    Refines {
        gamma: String,
        beta: String,
        #[arg(long, default_value_t = 256)]
        horizon: u64,
    },
    /// Download a b-file from the OEIS endpoint.
    Fetch {
        a_number: String,
        /// Write to <fixtures>/Axxxxxx.txt instead of stdout.
        #[arg(long)]
        save: bool,
        #[arg(long, default_value_t = 30)]
        timeout: u64,
    },
}

/// Runs the CLI with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Locate { spec, n } => locate(spec, *n, out),
        Command::Spec { spec, blocks } => {
            let spec = parse_spec(spec)?;
            let table = PartialSumTable::new(spec.clone());
            let count = spec.block_count().map_or(*blocks, |c| c.min(*blocks));
            let lengths = (1..=count)
                .map(|s| table.block_length(s).map(|b| b.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            writeln!(out, "{}", format_spec(&spec))?;
            writeln!(out, "b: {}", lengths.join(" "))?;
            Ok(exit::OK)
        }
        Command::Gen {
            spec,
            what,
            count,
            format,
            method,
            start,
        } => {
            if *count > cli.cap {
                return Err(irrarray_core::Error::Resource {
                    requested: *count,
                    cap: cli.cap,
                }
                .into());
            }
            let gen = Generator::new(parse_spec(spec)?, parse_quantity(what)?, *method, cli.cap)?;
            let terms = gen.terms(*start, *count)?;
            write_terms(&terms, *format, out)?;
            Ok(exit::OK)
        }
        Command::Verify {
            mapping,
            count,
            list,
        } => {
            if *list {
                out.write_all(BUILTIN.as_bytes())?;
                return Ok(exit::OK);
            }
            let text = match mapping {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| CliError::Environment(format!("{}: {e}", path.display())))?,
                None => BUILTIN.to_string(),
            };
            let mappings = parse_mappings(&text)?;
            let outcomes = check_all(&mappings, &cli.fixtures, *count, cli.cap);
            let mut code = exit::OK;
            for (m, outcome) in mappings.iter().zip(&outcomes) {
                match outcome {
                    Outcome::Checked(report) => writeln!(out, "{report}  [{m}]")?,
                    Outcome::MissingFixture(msg) => writeln!(out, "{}: missing fixture ({msg})", m.a_number)?,
                    Outcome::Failed(msg) => writeln!(out, "{}: error ({msg})", m.a_number)?,
                }
                code = code.max(outcome.exit_code());
            }
            let passed = outcomes.iter().filter(|o| o.exit_code() == exit::OK).count();
            writeln!(out, "{passed}/{} mappings match", outcomes.len())?;
            Ok(code)
        }
        Command::Bench {
            spec,
            range,
            methods,
            reps,
            max_points,
        } => {
            let spec = parse_spec(spec)?;
            let rows = run_bench(&spec, parse_range(range)?, *methods, *reps, *max_points)?;
            writeln!(out, "{:<28} {:>14} {:>14} {:>6} {:>6}", "method", "median ns/op", "mean ns/op", "cv", "reps")?;
            for row in &rows {
                writeln!(
                    out,
                    "{:<28} {:>14.2} {:>14.2} {:>6.3} {:>6}",
                    row.method, row.median_ns, row.mean_ns, row.cv, row.reps
                )?;
                if row.noisy() {
                    writeln!(err, "warning: {} timings vary by more than 20% between reps", row.method)?;
                }
            }
            writeln!(out, "points per rep: {}; results verified equal", rows[0].points)?;
            Ok(exit::OK)
        }
        Command::Order {
            spec,
            rule,
            horizon,
        } => {
            let perm = permutation(parse_spec(spec)?, &parse_rule(rule)?, cli.cap)?;
            let report = perm.sequence_order(*horizon)?;
            for (k, o) in report.per_block_orders.iter().enumerate() {
                let len = perm.beta().block_length(k as u64 + 1)?;
                writeln!(out, "block {}: length {len} order {o}", k + 1)?;
            }
            let lcm = report.lcm.map_or("overflow".to_string(), |l| l.to_string());
            writeln!(out, "lcm={lcm} stabilized={}", report.stabilized)?;
            Ok(exit::OK)
        }
        Command::Refines {
            gamma,
            beta,
            horizon,
        } => {
            let gamma = PartialSumTable::new(parse_spec(gamma)?);
            let beta = PartialSumTable::new(parse_spec(beta)?);
            let ok = refines(&gamma, &beta, *horizon);
            writeln!(out, "{ok}")?;
            Ok(if ok { exit::OK } else { exit::FAILURE })
        }
        Command::Fetch {
            a_number,
            save,
            timeout,
        } => {
            let a: ANumber = a_number.parse()?;
            let text = fetch(a, &cli.oeis_endpoint, Duration::from_secs(*timeout))?;
            let fixture = oeis::parse_bfile(&text)?;
            if *save {
                let path = oeis::fixture_path(&cli.fixtures, a);
                std::fs::write(&path, &text)
                    .map_err(|e| CliError::Environment(format!("{}: {e}", path.display())))?;
                writeln!(out, "{a}: {} terms from index {} -> {}", fixture.terms.len(), fixture.offset, path.display())?;
            } else {
                out.write_all(text.as_bytes())?;
            }
            Ok(exit::OK)
        }
    }
}

#[cfg(feature = "fetch")]
fn fetch(a: ANumber, endpoint: &str, timeout: Duration) -> Result<String, CliError> {
    Ok(oeis::fetch_bfile(a, endpoint, timeout)?)
}

#[cfg(not(feature = "fetch"))]
fn fetch(_: ANumber, _: &str, _: Duration) -> Result<String, CliError> {
    Err(CliError::Environment("built without the `fetch` feature".into()))
}

fn locate(spec: &str, n: u64, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = parse_spec(spec)?;
    let oracle = PartialSumTable::new(spec.clone()).locate(n)?;
    writeln!(out, "{oracle}")?;
    let Some(cf) = ClosedForm::for_spec(&spec) else {
        writeln!(out, "method=search-only")?;
        return Ok(exit::OK);
    };
    let (result, pos) = cf.locate(n)?;
    let agree = pos == oracle;
    writeln!(
        out,
        "method={} raw={} corrected={} agree={agree}",
        cf.method_name(),
        result.raw_real,
        result.corrected
    )?;
    Ok(if agree { exit::OK } else { exit::FAILURE })
}

fn write_terms(terms: &[Term], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    let mut buf = String::new();
    match format {
        Format::Csv => {
            buf.push_str("n,value\n");
            for t in terms {
                buf.push_str(&format!("{},{}\n", t.index, t.value));
            }
        }
        Format::Flat => {
            let line: Vec<String> = terms.iter().map(|t| t.value.to_string()).collect();
            buf.push_str(&line.join(" "));
            buf.push('\n');
        }
        Format::Rows => {
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    let same_row = t.row.is_some() && t.row == terms[i - 1].row;
                    buf.push(if same_row { ' ' } else { '\n' });
                }
                buf.push_str(&t.value.to_string());
            }
            if !terms.is_empty() {
                buf.push('\n');
            }
        }
    }
    out.write_all(buf.as_bytes())
}
