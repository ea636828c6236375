use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fzddn_core::bethe::bethe_sweep;
use fzddn_core::chain::{braid_b, global_hamiltonian, local_h};
use fzddn_core::fz::{projector, rmatrix_dd, rmatrix_normalized};
use fzddn_core::suites::{degeneracy_pattern, spectrum};
use fzddn_core::transfer::{transfer_t2, transfer_t3};
use fzddn_core::{
    run_suite, Boundary, BraidPoint, ChainSpec, Complex64, DihedralElement, DumpMeta, Error, MatrixDump,
    RootContext, SpectralPoint, Suite, SuiteConfig, T2Family, DEFAULT_DIM_CAP,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "fzddn", version, about = "Two-parameter R-matrix chains: build, diagonalize, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and emit its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build an operator and write it as a sparse-triplet dump.
    Build {
        #[arg(long, value_enum, default_value_t = Op::Hamiltonian)]
        op: Op,
        /// First spectral parameter as `re,im`.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        z1: String,
        /// Second spectral parameter as `re,im`.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        z2: String,
        /// Projector label `a,b`.
        #[arg(long, default_value = "0,0")]
        pair: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sorted spectrum of the global Hamiltonian as CSV.
    Spectrum {
        /// Where to write the JSON check report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Fusion suite: block triangularization and functional relations.
    Fusion {
        #[command(flatten)]
        common: Common,
    },
    /// Fit every transfer-matrix eigenvalue and check the Bethe equations.
    Bethe {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Rmatrix,
    RmatrixNormalized,
    Projector,
    LocalH,
    Hamiltonian,
    Braid,
    Transfer,
    Transfer2,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryKind {
    Periodic,
    Twisted,
    Open,
    Braided,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    sites: usize,
    #[arg(long, value_enum)]
    boundary: Option<BoundaryKind>,
    /// Twist element as `s^k t^s`.
    #[arg(long, default_value = "e")]
    twist: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha1: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    alpha2: f64,
    /// Braid point, e.g. `0,inf`.
    #[arg(long, default_value = "0,0")]
    z0: String,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides every check tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Largest allowed chain dimension n^L.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn boundary(&self) -> Result<Boundary, Error> {
        Ok(match self.boundary.unwrap_or(BoundaryKind::Periodic) {
            BoundaryKind::Periodic => Boundary::Periodic,
            BoundaryKind::Open => Boundary::Open,
            BoundaryKind::Twisted => Boundary::Twisted(DihedralElement::parse(self.n, &self.twist)?),
            BoundaryKind::Braided => Boundary::Braided(self.z0.parse::<BraidPoint>()?),
        })
    }

    fn chain(&self) -> Result<ChainSpec, Error> {
        let ctx = RootContext::new(self.n)?;
        ChainSpec::new(ctx, self.sites, self.boundary()?, self.alpha1, self.alpha2)
    }

    fn config(&self) -> Result<SuiteConfig, Error> {
        Ok(SuiteConfig {
            chain: self.chain()?,
            boundary_given: self.boundary.is_some(),
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
        })
    }

    fn params(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        p.insert("n".into(), self.n.to_string());
        p.insert("sites".into(), self.sites.to_string());
        p.insert("boundary".into(), self.boundary().map(|b| b.name().to_string()).unwrap_or_default());
        p.insert("twist".into(), self.twist.clone());
        p.insert("z0".into(), self.z0.clone());
        p.insert("alpha1".into(), self.alpha1.to_string());
        p.insert("alpha2".into(), self.alpha2.to_string());
        p
    }
}

/// Failure carrying its exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => EXIT_RESOURCE,
            Error::InvalidDimension(_)
            | Error::InvalidSites(_)
            | Error::InvalidContext(_)
            | Error::InvalidSpec(_)
            | Error::InvalidPair { .. }
            | Error::InvalidPoint(_)
            | Error::NotApplicable(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Exit(code, e.to_string())
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit(EXIT_RESOURCE, e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Exit> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn complex(text: &str) -> Result<Complex64, Exit> {
    let bad = || Exit(EXIT_USAGE, format!("expected `re,im`, got '{text}'"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn pass_code(pass: bool) -> u8 {
    if pass {
        0
    } else {
        EXIT_FAIL
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    match cli.command {
        Command::Verify { suite, common } => {
            let suite: Suite = suite.parse()?;
            let cfg = common.config()?;
            cfg.chain.check_cap(common.cap)?;
            let report = run_suite(suite, &cfg)?;
            emit(&common.out, &json(&report))?;
            Ok(pass_code(report.pass))
        }
        Command::Fusion { common } => {
            let cfg = common.config()?;
            cfg.chain.check_cap(common.cap)?;
            let report = run_suite(Suite::Fusion, &cfg)?;
            emit(&common.out, &json(&report))?;
            Ok(pass_code(report.pass))
        }
        Command::Bethe { common } => {
            let spec = common.chain()?;
            spec.check_cap(common.cap)?;
            let tol = common.tol.unwrap_or(fzddn_core::bethe::BETHE_TOL);
            let report = bethe_sweep(&spec, common.seed, tol)?;
            emit(&common.out, &json(&report))?;
            Ok(pass_code(report.pass))
        }
        Command::Spectrum { report, common } => {
            let cfg = common.config()?;
            let (values, checks) = spectrum(&cfg, common.cap)?;
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["index", "energy"]).map_err(|e| Exit(EXIT_RESOURCE, e.to_string()))?;
            for (i, v) in values.iter().enumerate() {
                w.write_record([i.to_string(), format!("{v:.15e}")])
                    .map_err(|e| Exit(EXIT_RESOURCE, e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Exit(EXIT_RESOURCE, e.to_string()))?;
            emit(&common.out, &String::from_utf8(bytes).expect("ascii csv"))?;
            let pattern = degeneracy_pattern(&values, 1e-8);
            eprintln!(
                "{} eigenvalues, multiplets {:?}, checks {}",
                values.len(),
                pattern,
                if checks.pass { "pass" } else { "FAIL" }
            );
            if let Some(path) = report {
                fs::write(path, json(&checks))?;
            }
            Ok(pass_code(checks.pass))
        }
        Command::Build {
            op,
            z1,
            z2,
            pair,
            common,
        } => {
            let ctx = RootContext::new(common.n)?;
            let p = SpectralPoint::new(complex(&z1)?, complex(&z2)?)?;
            let mut params = common.params();
            let (name, m) = match op {
                Op::Rmatrix => ("rmatrix", rmatrix_dd(&ctx, p)?),
                Op::RmatrixNormalized => ("rmatrix-normalized", rmatrix_normalized(&ctx, p)),
                Op::Projector => {
                    let bad = || Exit(EXIT_USAGE, format!("expected `a,b`, got '{pair}'"));
                    let (a, b) = pair.split_once(',').ok_or_else(bad)?;
                    let a: i64 = a.trim().parse().map_err(|_| bad())?;
                    let b: i64 = b.trim().parse().map_err(|_| bad())?;
                    params.insert("pair".into(), pair.clone());
                    ("projector", projector(&ctx, a, b)?)
                }
                Op::LocalH => ("local-h", local_h(&ctx, common.alpha1, common.alpha2)),
                Op::Hamiltonian => {
                    let spec = common.chain()?;
                    spec.check_cap(common.cap)?;
                    ("hamiltonian", global_hamiltonian(&spec)?)
                }
                Op::Braid => ("braid", braid_b(&ctx, common.z0.parse::<BraidPoint>()?)),
                Op::Transfer => {
                    let spec = common.chain()?;
                    spec.check_cap(common.cap)?;
                    ("transfer", transfer_t3(&spec, p)?)
                }
                Op::Transfer2 => {
                    let spec = common.chain()?;
                    spec.check_cap(common.cap)?;
                    ("transfer2", transfer_t2(&spec, p.z1, T2Family::Primary)?)
                }
            };
            if matches!(op, Op::Rmatrix | Op::RmatrixNormalized | Op::Transfer | Op::Transfer2) {
                params.insert("z1".into(), z1);
                params.insert("z2".into(), z2);
            }
            let dump = MatrixDump::from_matrix(
                &m,
                DumpMeta {
                    op: name.into(),
                    n: common.n,
                    params,
                },
            );
            emit(&common.out, &dump.to_json())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("fzddn: {msg}");
            ExitCode::from(code)
        }
    }
}
