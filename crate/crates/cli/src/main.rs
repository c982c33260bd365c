//! `almost`: runs the checks of the `almost-identities` crate and writes
//! JSON, CSV or plain-text reports.
//!
//! Exit status is 0 when every checked row passed, 1 when any row failed and
//! 2 for usage, domain or I/O errors.

mod args;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use almost_identities::gallery::{gallery_ids, gallery_item};
use almost_identities::mellin::{
    check_threshold, dual_check, harmonic_closed, harmonic_factor_check, lemma_check,
    lemma_check_with_step, mellin_check, MellinFunction,
};
use almost_identities::{scan, verify_identity, verify_uncorrected, PrecisionContext};
use clap::{Parser, Subcommand};

use crate::args::{parse_index_list, parse_real, IndexList};
use crate::report::{
    render, DualRecord, Format, GalleryRecord, HarmonicRecord, IdentityRecord, LemmaRecord,
    MellinRecord, Record, Shape,
};

/// Smallest precision at which the tabulated gaps are resolved with room to spare.
const MIN_SERIES_DIGITS: u32 = 20;

#[derive(Parser, Debug)]
#[command(
    name = "almost",
    version,
    about = "Verify dyadic almost identities at high precision"
)]
struct Cli {
    /// Significant decimal digits requested.
    #[arg(long, global = true, env = "ALMOST_DIGITS", default_value_t = 40)]
    digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check u_n(m) against its target plus the predicted gap.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        base: u64,
        /// Compare against the bare target; fails whenever the gap is resolved.
        #[arg(long)]
        no_correction: bool,
    },
    /// Verify every (n, m) cell of a grid.
    Scan {
        /// Indices: `5`, `1..6` (inclusive) or comma lists of both.
        #[arg(long, value_parser = parse_index_list)]
        n: IndexList,
        #[arg(long, alias = "base", value_delimiter = ',', default_value = "2")]
        bases: Vec<u64>,
        #[arg(long)]
        no_correction: bool,
    },
    /// Compare Mellin transforms by quadrature with their closed forms.
    Mellin {
        /// `g1`, `g2` or `fn(k)` with k >= 3.
        #[arg(long)]
        function: MellinFunction,
        /// Comma list of points, decimal or `p/q`.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        s: Vec<String>,
        /// Check the dyadic harmonic-sum factor instead (g1 and g2).
        #[arg(long)]
        harmonic: bool,
    },
    /// Compare direct summation of G_n(x) with its residue expansion.
    Dual {
        #[arg(long)]
        n: u32,
        /// Comma list of points in (0, 1/2).
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
    },
    /// Finite-difference check of the antiderivative identity.
    Lemma {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Difference step; defaults to 10^-(digits/3).
        #[arg(long)]
        step: Option<String>,
    },
    /// Classical near-miss constants.
    Gallery {
        /// Item identifiers, comma separated; all items when omitted.
        #[arg(long, value_delimiter = ',')]
        item: Vec<String>,
        /// Print the accepted identifiers and exit.
        #[arg(long)]
        list: bool,
    },
}

/// Failures that end the run with status 2.
#[derive(Debug)]
enum Fatal {
    Usage(String),
    Core(almost_identities::Error),
    Io(PathBuf, io::Error),
}

impl std::fmt::Display for Fatal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fatal::Usage(msg) => f.write_str(msg),
            Fatal::Core(e) => write!(f, "{e}"),
            Fatal::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<almost_identities::Error> for Fatal {
    fn from(e: almost_identities::Error) -> Self {
        Fatal::Core(e)
    }
}

/// Rendered report plus the verdict over its rows.
struct Outcome {
    text: String,
    all_passed: bool,
    /// Errors that hit individual rows while the rest were still reported.
    row_errors: Vec<String>,
}

fn outcome<R: Record>(rows: &[R], format: Format, shape: Shape) -> Outcome {
    Outcome {
        text: render(rows, format, shape),
        all_passed: rows.iter().all(|r| r.pass() != Some(false)),
        row_errors: Vec::new(),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Fatal> {
    let ctx = PrecisionContext::new(cli.digits)?;
    let digits = ctx.digits();
    let format = cli.format;
    let need_series_digits = || {
        if digits < MIN_SERIES_DIGITS {
            Err(Fatal::Usage(format!(
                "--digits must be at least {MIN_SERIES_DIGITS} for this command, got {digits}"
            )))
        } else {
            Ok(())
        }
    };
    match &cli.command {
        Command::Verify {
            n,
            base,
            no_correction,
        } => {
            need_series_digits()?;
            let report = if *no_correction {
                verify_uncorrected(*n, *base, ctx)?
            } else {
                verify_identity(*n, *base, ctx)?
            };
            Ok(outcome(
                &[IdentityRecord::from(&report)],
                format,
                Shape::Object,
            ))
        }
        Command::Scan {
            n,
            bases,
            no_correction,
        } => {
            need_series_digits()?;
            let mut rows = Vec::new();
            let mut row_errors = Vec::new();
            let entries = if *no_correction {
                let mut cells: Vec<(u64, u32)> = bases
                    .iter()
                    .flat_map(|&m| n.0.iter().map(move |&k| (m, k)))
                    .collect();
                cells.sort();
                cells
                    .into_iter()
                    .map(|(m, k)| (k, m, verify_uncorrected(k, m, ctx)))
                    .collect::<Vec<_>>()
            } else {
                scan(&n.0, bases, ctx)
                    .into_iter()
                    .map(|e| (e.n, e.base_m, e.outcome))
                    .collect()
            };
            for (k, m, result) in entries {
                match result {
                    Ok(r) => rows.push(IdentityRecord::from(&r)),
                    Err(e) => row_errors.push(format!("n={k} base={m}: {e}")),
                }
            }
            let mut out = outcome(&rows, format, Shape::Array);
            out.row_errors = row_errors;
            Ok(out)
        }
        Command::Mellin {
            function,
            s,
            harmonic,
        } => {
            let points = s
                .iter()
                .map(|t| parse_real(t, ctx).map_err(Fatal::Usage))
                .collect::<Result<Vec<_>, _>>()?;
            if *harmonic {
                if matches!(function, MellinFunction::F(_)) {
                    return Err(Fatal::Usage(
                        "--harmonic supports g1 and g2 only".to_string(),
                    ));
                }
                let threshold = check_threshold(ctx);
                let rows = points
                    .iter()
                    .map(|p| {
                        let err = harmonic_factor_check(*function, p, ctx)?;
                        let closed = harmonic_closed(*function, p, ctx)?;
                        Ok(HarmonicRecord::new(
                            function.label(),
                            p,
                            &closed,
                            &err,
                            &threshold,
                            digits,
                        ))
                    })
                    .collect::<Result<Vec<_>, Fatal>>()?;
                Ok(outcome(&rows, format, Shape::Array))
            } else {
                let rows = points
                    .iter()
                    .map(|p| Ok(MellinRecord::new(&mellin_check(*function, p, ctx)?, digits)))
                    .collect::<Result<Vec<_>, Fatal>>()?;
                Ok(outcome(&rows, format, Shape::Array))
            }
        }
        Command::Dual { n, x } => {
            let rows = x
                .iter()
                .map(|t| {
                    let p = parse_real(t, ctx).map_err(Fatal::Usage)?;
                    Ok(DualRecord::new(&dual_check(*n, &p, ctx)?, digits))
                })
                .collect::<Result<Vec<_>, Fatal>>()?;
            Ok(outcome(&rows, format, Shape::Array))
        }
        Command::Lemma { n, k, u, step } => {
            let u = parse_real(u, ctx).map_err(Fatal::Usage)?;
            let check = match step {
                Some(h) => {
                    let h = parse_real(h, ctx).map_err(Fatal::Usage)?;
                    lemma_check_with_step(*n, *k, &u, &h, ctx)?
                }
                None => lemma_check(*n, *k, &u, ctx)?,
            };
            Ok(outcome(
                &[LemmaRecord::new(&check, digits)],
                format,
                Shape::Object,
            ))
        }
        Command::Gallery { item, list } => {
            if *list {
                let mut text = gallery_ids().join("\n");
                text.push('\n');
                return Ok(Outcome {
                    text,
                    all_passed: true,
                    row_errors: Vec::new(),
                });
            }
            let ids = if item.is_empty() {
                gallery_ids()
            } else {
                item.clone()
            };
            let rows = ids
                .iter()
                .map(|id| Ok(GalleryRecord::from(&gallery_item(id, ctx)?)))
                .collect::<Result<Vec<_>, Fatal>>()?;
            Ok(outcome(&rows, format, Shape::Array))
        }
    }
}

fn write_report(out: Option<&PathBuf>, text: &str) -> Result<(), Fatal> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Fatal::Io(path.clone(), e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Fatal::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| {
        write_report(cli.out.as_ref(), &o.text)?;
        Ok(o)
    });
    match result {
        Ok(o) if !o.row_errors.is_empty() => {
            for e in &o.row_errors {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
        Ok(o) if o.all_passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
