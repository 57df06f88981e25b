use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use divpow::freering::letter_name;
use divpow::gamma::{GammaElement, Level};
use divpow::invariants::pi_n_eval;
use divpow::runner::{self, parse_levels, Check, RunConfig};
use divpow::symfunc::{e_to_m, m_to_e, Basis, SymPoly};
use divpow::universal::{build_an, Presentation};

#[derive(Parser)]
#[command(name = "divpow", version, about = "Divided powers of free rings and matrix invariants, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two divided-power elements.
    Tau {
        lhs: String,
        rhs: String,
        /// Project both factors to this level first.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Value of an element on generic n×n matrices.
    Pi {
        element: String,
        /// Matrix order; required for limit elements.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Run checks degree by degree and write a JSON report.
    Verify {
        /// Matrix order: `2`, `1..3` or `1,2`.
        #[arg(long, default_value = "2")]
        n: String,
        #[arg(long, default_value_t = 2)]
        letters: usize,
        #[arg(long, default_value_t = 4)]
        maxdeg: u32,
        /// Checks to run; repeat or separate with commas.
        #[arg(long = "thm", value_delimiter = ',')]
        thm: Vec<String>,
        /// Require trivial torsion of the relation matrices over the integers.
        #[arg(long)]
        strict_z: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Record wall-clock milliseconds per entry.
        #[arg(long)]
        timings: bool,
    },
    /// Ideal and generator images of the universal ring of a presentation.
    Universal {
        /// JSON file `{"generators": [...], "relations": [...]}`.
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Change of basis between elementary and monomial symmetric functions.
    Sym {
        /// `e[2,1]@4`, `m[3,1] - 2*m[2,2]`, ...
        expr: String,
        #[arg(long, value_enum)]
        to: SymBasis,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SymBasis {
    E,
    M,
}

fn parse_with<T>(input: &str, parse: impl Fn(&str) -> divpow::Result<T>) -> anyhow::Result<T> {
    parse(input).map_err(|e| anyhow!(e.render_with_input(input)))
}

fn at_level(g: GammaElement, n: Option<u32>) -> anyhow::Result<GammaElement> {
    match n {
        None => Ok(g),
        Some(n) => Ok(g.sigma(n)?),
    }
}

fn cmd_tau(lhs: &str, rhs: &str, n: Option<u32>) -> anyhow::Result<()> {
    let a = at_level(parse_with(lhs, GammaElement::parse)?, n)?;
    let b = at_level(parse_with(rhs, GammaElement::parse)?, n)?;
    println!("{}", a.tau(&b)?);
    Ok(())
}

fn cmd_pi(element: &str, n: Option<u32>) -> anyhow::Result<()> {
    let g = parse_with(element, GammaElement::parse)?;
    let g = match (g.level(), n) {
        (Level::Limit, None) => bail!("a limit element needs --n"),
        (Level::Limit, Some(n)) => g.sigma(n)?,
        (_, _) => g,
    };
    let Level::Trunc(level) = g.level() else { unreachable!("projected above") };
    let size = n.unwrap_or(level);
    println!("{}", pi_n_eval(&g, size as usize)?);
    Ok(())
}

fn cmd_verify(config: RunConfig, out: Option<PathBuf>) -> anyhow::Result<bool> {
    let entries = runner::run(&config)?;
    let json = runner::report_json(&entries);
    match out {
        Some(path) => {
            fs::write(&path, &json).with_context(|| format!("cannot write {}", path.display()))?;
            let failed = entries.iter().filter(|e| !e.pass).count();
            println!("{} entries, {} failed, report in {}", entries.len(), failed, path.display());
        }
        None => print!("{json}"),
    }
    Ok(runner::all_pass(&entries))
}

fn cmd_universal(file: &PathBuf, n: usize) -> anyhow::Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let p = Presentation::from_json(&text)?;
    let ring = build_an(&p, n)?;
    let images: serde_json::Map<String, serde_json::Value> = ring
        .images
        .iter()
        .map(|(g, m)| {
            let rows: Vec<Vec<String>> =
                m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            (letter_name(*g).to_string(), serde_json::json!(rows))
        })
        .collect();
    let ideal: Vec<String> = ring.ideal.iter().map(ToString::to_string).collect();
    let doc = serde_json::json!({ "n": n, "ideal": ideal, "images": images });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn cmd_sym(expr: &str, to: SymBasis) -> anyhow::Result<()> {
    let f = parse_with(expr, SymPoly::parse)?;
    let target = match to {
        SymBasis::E => Basis::Elementary,
        SymBasis::M => Basis::Monomial,
    };
    if f.basis() == target {
        println!("{f}");
        return Ok(());
    }
    let mut acc = SymPoly::zero(target, f.nvars());
    for (lambda, c) in f.terms() {
        let image = match target {
            Basis::Monomial => e_to_m(lambda, f.nvars()),
            _ => m_to_e(lambda, f.nvars())?,
        };
        for (mu, d) in image.terms() {
            acc.add_term(mu.clone(), c * d);
        }
    }
    println!("{acc}");
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Tau { lhs, rhs, n } => cmd_tau(&lhs, &rhs, n)?,
        Command::Pi { element, n } => cmd_pi(&element, n)?,
        Command::Verify { n, letters, maxdeg, thm, strict_z, seed, out, workers, timings } => {
            let checks = if thm.is_empty() {
                Check::DEFAULT.to_vec()
            } else {
                thm.iter().map(|t| t.parse::<Check>()).collect::<Result<_, _>>()?
            };
            let workers = workers.unwrap_or_else(|| {
                std::thread::available_parallelism().map(usize::from).unwrap_or(1)
            });
            let config = RunConfig {
                letters,
                levels: parse_levels(&n)?,
                maxdeg,
                checks,
                strict_z,
                seed,
                workers,
                timings,
            };
            return cmd_verify(config, out);
        }
        Command::Universal { file, n } => cmd_universal(&file, n)?,
        Command::Sym { expr, to } => cmd_sym(&expr, to)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
