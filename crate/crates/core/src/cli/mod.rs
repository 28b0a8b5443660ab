// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Command line: config loading, orchestration and CSV output.
//!
//! Exit codes are 0 on success, 1 for invalid input and 2 for numerical
//! failures (quadrature, path-sum budget, singular `Ũ_0`).

pub mod config;
pub mod kernel_file;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::{eta_table, EtaTable, Splitting};
use crate::combinatorics::{catalan, enumerate_dyck};
use crate::error::{Error, Result};
use crate::kernels::{compare, extract_smatpi, extract_ttm_set, oracle_trajectory, propagate, Flavor, KernelSet};
use crate::liouville::{apply_map, liou_norm, LiouvilleMatrix, TimeGrid};

pub use config::RunConfig;
pub use kernel_file::KernelFile;

/// Formats a double with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Parser)]
#[command(name = "smatpi", version, about = "Path-integral memory kernels for system-bath dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Brute-force path sums U_1..U_rmax.
    Oracle(RunArgs),
    /// Extract a kernel set; writes kernels.txt and decay.csv.
    Extract(RunArgs),
    /// Propagate a saved kernel set; writes trajectory.csv.
    Propagate {
        #[command(flatten)]
        run: RunArgs,
        /// Kernel file (default: <out>/kernels.txt).
        #[arg(long)]
        kernels: Option<PathBuf>,
    },
    /// Compare two kernel files; writes compare.csv.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relative norm threshold for k*.
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
    },
    /// Dyck path counts and listings.
    Dyck {
        #[arg(long)]
        semilength: u32,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    flavor: Option<Flavor>,
    #[arg(long)]
    splitting: Option<Splitting>,
    #[arg(long)]
    rmax: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> Result<(RunConfig, PathBuf)> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        if let Some(f) = self.flavor {
            cfg.flavor = f;
        }
        if let Some(s) = self.splitting {
            cfg.splitting = s;
        }
        if let Some(r) = self.rmax {
            cfg.grid = TimeGrid::new(cfg.grid.dt, cfg.grid.n_steps, r)
                .map_err(|e| Error::Config { field: "--rmax".into(), msg: e.to_string() })?;
        }
        let out = self.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&out)?;
        Ok((cfg, out))
    }
}

fn table(cfg: &RunConfig) -> Result<EtaTable> {
    let t = eta_table(&cfg.bath, &cfg.grid, cfg.splitting)?;
    Ok(match cfg.max_separation {
        Some(m) => t.truncated(m),
        None => t,
    })
}

/// Builds the kernel set a config asks for.
pub fn extract_for(cfg: &RunConfig) -> Result<KernelSet> {
    let t = table(cfg)?;
    match cfg.flavor {
        Flavor::Smatpi => extract_smatpi(&cfg.system, &t, cfg.grid.r_max, cfg.convention, cfg.budget),
        Flavor::Ttm => extract_ttm_set(&cfg.system, &t, cfg.grid.r_max, cfg.budget),
    }
}

fn entry_csv(maps: &[&LiouvilleMatrix], first_k: usize) -> String {
    let mut out = String::from("k,row,col,re,im\n");
    for (i, m) in maps.iter().enumerate() {
        let d = m.matrix();
        for row in 0..d.nrows() {
            for col in 0..d.ncols() {
                let z = d[(row, col)];
                let _ = writeln!(out, "{},{row},{col},{},{}", first_k + i, fmt17(z.re), fmt17(z.im));
            }
        }
    }
    out
}

/// `k,norm_M,norm_T`; a set with one matrix list reports it in both columns.
pub fn decay_csv(set: &KernelSet) -> String {
    let mut out = String::from("k,norm_M,norm_T\n");
    for k in 1..=set.r_max {
        let m = liou_norm(&set.midpoint[k - 1]);
        let t = set.termination.as_ref().map_or(m, |t| liou_norm(&t[k - 1]));
        let _ = writeln!(out, "{k},{},{}", fmt17(m), fmt17(t));
    }
    out
}

/// Trajectory CSV: `step,t`, then `rho_i_j_re,rho_i_j_im` in row-major order,
/// then `U_r_c_re,U_r_c_im` over FB indices when `include_maps`.
pub fn trajectory_csv(
    dt: f64,
    maps: &[LiouvilleMatrix],
    rho0: &DMatrix<Complex64>,
    include_maps: bool,
) -> Result<String> {
    let n = rho0.nrows();
    let mut out = String::from("step,t");
    for i in 0..n {
        for j in 0..n {
            let _ = write!(out, ",rho_{i}_{j}_re,rho_{i}_{j}_im");
        }
    }
    if include_maps {
        for r in 0..n * n {
            for c in 0..n * n {
                let _ = write!(out, ",U_{r}_{c}_re,U_{r}_{c}_im");
            }
        }
    }
    out.push('\n');
    let identity = LiouvilleMatrix::identity(n);
    for (step, u) in std::iter::once(&identity).chain(maps).enumerate() {
        let rho = apply_map(u, rho0)?;
        let _ = write!(out, "{step},{}", fmt17(step as f64 * dt));
        for i in 0..n {
            for j in 0..n {
                let z = rho[(i, j)];
                let _ = write!(out, ",{},{}", fmt17(z.re), fmt17(z.im));
            }
        }
        if include_maps {
            for z in u.matrix().transpose().iter() {
                let _ = write!(out, ",{},{}", fmt17(z.re), fmt17(z.im));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Oracle(args) => {
            let (cfg, out) = args.load()?;
            let traj = oracle_trajectory(&cfg.system, &table(&cfg)?, cfg.grid.r_max, cfg.budget)?;
            write(&out, "oracle_U.csv", &entry_csv(&traj.maps.iter().collect::<Vec<_>>(), 1))
        }
        Command::Extract(args) => {
            let (cfg, out) = args.load()?;
            let set = extract_for(&cfg)?;
            let file = KernelFile { set, metadata: cfg.entries.clone() };
            file.save(&out.join("kernels.txt"))?;
            write(&out, "decay.csv", &decay_csv(&file.set))
        }
        Command::Propagate { run, kernels } => {
            let (cfg, out) = run.load()?;
            let path = kernels.unwrap_or_else(|| out.join("kernels.txt"));
            let set = KernelFile::load(&path)?.set;
            if set.n() != cfg.system.n() {
                return Err(Error::DimMismatch(format!("kernel file has n={}, config n={}", set.n(), cfg.system.n())));
            }
            if (set.dt - cfg.grid.dt).abs() > 1e-12 * cfg.grid.dt {
                return Err(Error::Config {
                    field: "grid.dt".into(),
                    msg: format!("kernel file was extracted with dt={}", set.dt),
                });
            }
            let traj = propagate(&set, cfg.grid.n_steps, None)?;
            let csv = trajectory_csv(set.dt, &traj.maps, &cfg.initial_state, cfg.include_maps)?;
            write(&out, "trajectory.csv", &csv)
        }
        Command::Compare { a, b, out, threshold } => {
            let out = out.unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out)?;
            let report = compare(&KernelFile::load(&a)?.set, &KernelFile::load(&b)?.set, threshold)?;
            let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
            let mut csv = String::from("k,norm_a,norm_b,diff,term_norm_a,term_norm_b\n");
            for r in &report.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.k,
                    fmt17(r.norm_a),
                    fmt17(r.norm_b),
                    fmt17(r.diff),
                    opt(r.term_norm_a),
                    opt(r.term_norm_b)
                );
            }
            write(&out, "compare.csv", &csv)?;
            let star = |k: Option<usize>| k.map_or("none".to_string(), |k| k.to_string());
            let summary = format!("set,k_star\na,{}\nb,{}\n", star(report.k_star_a), star(report.k_star_b));
            write(&out, "compare_summary.csv", &summary)?;
            print!("k_star_a={}\nk_star_b={}\n", star(report.k_star_a), star(report.k_star_b));
            Ok(())
        }
        Command::Dyck { semilength, count_only, out } => {
            let count = catalan(semilength)?;
            println!("{semilength},{count}");
            if count_only {
                return Ok(());
            }
            let paths = enumerate_dyck(semilength)?;
            let mut listing = String::from("index,path\n");
            for (i, p) in paths.iter().enumerate() {
                let _ = writeln!(listing, "{i},{p}");
            }
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    write(&dir, "dyck_paths.csv", &listing)
                }
                None => {
                    print!("{listing}");
                    Ok(())
                }
            }
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}
