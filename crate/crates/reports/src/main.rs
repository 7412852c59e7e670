use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use g2d_core::gamma2::{gamma2, Gamma2Certificate, Gamma2Options};
use g2d_core::linalg::text::{format_sig, parse_matrix, write_matrix};
use g2d_core::linalg::{lower_triangular_ones, Matrix};
use g2d_core::oracles::{detlb2_exact, detlb_exact, disc_exact, disc_p_exact, herdisc_exact, ColoringResult};
use g2d_reports::ap::{ap_report, ap_structure};
use g2d_reports::audit::audit;
use g2d_reports::ellipsoid::ellipsoid_dump;
use g2d_reports::grids::{subcube_report, tusnady_report};
use g2d_reports::tn::tn_figure;
use g2d_reports::{Budget, ReportError, Table};

#[derive(Parser, Debug)]
#[command(name = "g2d", version, about = "gamma_2 factorization norm bounds and discrepancy reports")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Relative primal-dual gap at which the solver stops.
    #[arg(long, global = true, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Wall-clock allowance for one report.
    #[arg(long, global = true, default_value_t = 30.0)]
    budget_minutes: f64,
    /// Random dual restarts besides the primal weights.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Iteration cap of the primal balancing loop.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
}

impl Global {
    fn options(&self) -> Gamma2Options<f64> {
        let mut o = Gamma2Options::default().with_tol(self.tol).with_seed(self.seed);
        if let Some(r) = self.restarts {
            o = o.with_restarts(r);
        }
        if let Some(m) = self.max_iter {
            o = o.with_max_iter(m);
        }
        o
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds on gamma_2(T_n) for a list of n.
    TnFigure {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 8, 16, 32, 64, 128])]
        ns: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory receiving one certificate bundle per row.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Dual matrix of the optimal ellipsoid and dual weights for T_n.
    Ellipsoid {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Anchored-box grid in dimension d with side n.
    Tusnady {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boolean subcubes in dimensions 1..=d.
    Subcubes {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arithmetic progressions and the maximal-progression bounds.
    Ap {
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64])]
        ns: Vec<usize>,
        /// Interval sizes for the maximal-progression checks.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 16, 64])]
        structure: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        structure_out: Option<PathBuf>,
    },
    /// Every available bound for one matrix or set system file.
    Audit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Solve gamma_2 for one matrix and optionally save the certificate.
    Gamma2 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
    /// Re-check a saved certificate against its matrix.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Exhaustive oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug)]
struct OracleInput {
    #[arg(long = "in")]
    input: PathBuf,
    /// File receiving the optimal coloring as a 1 x n matrix.
    #[arg(long)]
    coloring_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Discrepancy by branch and bound over all colorings.
    Disc(OracleInput),
    /// Hereditary discrepancy over all column subsets.
    Herdisc(OracleInput),
    /// Determinant lower bound over square submatrices up to `kmax`.
    Detlb {
        #[command(flatten)]
        io: OracleInput,
        #[arg(long)]
        kmax: usize,
    },
    /// Gram determinant bound over column subsets of size up to `kmax`.
    Detlb2 {
        #[command(flatten)]
        io: OracleInput,
        #[arg(long)]
        kmax: usize,
    },
    /// Weighted l_p discrepancy by Gray code enumeration.
    Discp {
        #[command(flatten)]
        io: OracleInput,
        /// Exponent; `inf` for the maximum norm.
        #[arg(long)]
        p: f64,
        /// Row weights in the matrix text format.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
}

fn read_matrix(path: &Path) -> anyhow::Result<Matrix<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit_table(table: &Table, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => table.write_csv(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn kv(pairs: &[(&str, String)]) {
    let mut out = io::stdout().lock();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k}={v}");
    }
}

fn num(v: f64) -> String {
    format_sig(v, 12)
}

fn save_coloring(c: &ColoringResult<f64>, path: Option<&Path>) -> anyhow::Result<()> {
    if let Some(p) = path {
        let x: Vec<f64> = c.coloring.iter().map(|&s| f64::from(s)).collect();
        fs::write(p, write_matrix(&Matrix::from_vec(1, x.len(), x)?))?;
    }
    Ok(())
}

fn check_certificate(cert: &Gamma2Certificate<f64>, a: &Matrix<f64>, what: &str) -> anyhow::Result<()> {
    let problems = cert.verify(a, 1e-6)?;
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|v| v.to_string()).collect();
        return Err(ReportError::Assertion(format!("{what}: {}", list.join("; "))).into());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.global.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let opts = cli.global.options();
    let budget = Budget::minutes(cli.global.budget_minutes);
    match cli.command {
        Command::TnFigure { ns, out, certs } => {
            let (table, solved) = tn_figure(&ns, &opts, &budget)?;
            for ((n, cert), row) in ns.iter().zip(&solved).zip(&table.rows) {
                check_certificate(cert, &lower_triangular_ones(*n), &row.label)?;
                if let Some(dir) = &certs {
                    fs::create_dir_all(dir)?;
                    fs::write(dir.join(format!("{}.txt", row.label)), cert.to_bundle())?;
                }
            }
            emit_table(&table, out.as_deref())?;
        }
        Command::Ellipsoid { n, out } => {
            let dump = ellipsoid_dump(n, &opts)?;
            check_certificate(&dump.certificate, &lower_triangular_ones(n), "ellipsoid")?;
            dump.write_to(&out)?;
            print!("{}", dump.summary());
        }
        Command::Tusnady { d, n, out } => {
            let table = Table::new("tusnady", vec![tusnady_report(d, n, &opts)?]);
            table.check_order(&[("product_lower", "product_upper"), ("direct_lower", "direct_upper")], 1e-9)?;
            emit_table(&table, out.as_deref())?;
        }
        Command::Subcubes { d, out } => {
            let mut rows = Vec::new();
            for k in 1..=d {
                budget.check(&format!("C{k}"))?;
                rows.push(subcube_report(k, &opts)?);
            }
            let table = Table::new("subcubes", rows);
            table.check_order(&[("gamma2_lower", "gamma2_upper")], 1e-9)?;
            emit_table(&table, out.as_deref())?;
        }
        Command::Ap {
            ns,
            structure,
            out,
            structure_out,
        } => {
            let table = ap_report(&ns, &opts, &budget)?;
            emit_table(&table, out.as_deref())?;
            if !structure.is_empty() {
                budget.check("maximal progression checks")?;
                emit_table(&ap_structure(&structure, &opts)?, structure_out.as_deref())?;
            }
        }
        Command::Audit { input } => {
            let a = read_matrix(&input)?;
            let label = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let report = audit(&label, &a, &opts);
            print!("{}", report.to_text());
            if !report.violations.is_empty() {
                return Err(ReportError::Assertion(report.violations.join("; ")).into());
            }
        }
        Command::Gamma2 { input, bundle } => {
            let a = read_matrix(&input)?;
            let cert = gamma2(&a, &opts)?;
            kv(&[
                ("upper", num(cert.upper)),
                ("lower", num(cert.lower)),
                ("gap", num(cert.gap())),
                ("converged", cert.converged.to_string()),
                ("side", cert.side.name().to_string()),
            ]);
            if let Some(p) = bundle {
                fs::write(p, cert.to_bundle())?;
            }
        }
        Command::Verify { input, bundle } => {
            let a = read_matrix(&input)?;
            let cert = Gamma2Certificate::<f64>::from_bundle(&fs::read_to_string(&bundle)?)?;
            check_certificate(&cert, &a, "certificate")?;
            kv(&[("valid", "true".into()), ("upper", num(cert.upper)), ("lower", num(cert.lower))]);
        }
        Command::Oracle(cmd) => run_oracle(cmd)?,
    }
    Ok(())
}

fn run_oracle(cmd: OracleCommand) -> anyhow::Result<()> {
    match cmd {
        OracleCommand::Disc(io) => {
            let r = disc_exact(&read_matrix(&io.input)?)?;
            kv(&[("disc", num(r.value))]);
            save_coloring(&r, io.coloring_out.as_deref())?;
        }
        OracleCommand::Herdisc(io) => {
            let r = herdisc_exact(&read_matrix(&io.input)?)?;
            let subset: Vec<String> = r.subset.iter().map(|j| j.to_string()).collect();
            kv(&[("herdisc", num(r.value)), ("subset", subset.join(","))]);
        }
        OracleCommand::Detlb { io, kmax } => {
            let w = detlb_exact(&read_matrix(&io.input)?, kmax)?;
            let join = |v: &[usize]| v.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",");
            kv(&[("detlb", num(w.value)), ("rows", join(&w.rows)), ("cols", join(&w.cols))]);
        }
        OracleCommand::Detlb2 { io, kmax } => {
            let (v, cols) = detlb2_exact(&read_matrix(&io.input)?, kmax)?;
            let cols: Vec<String> = cols.iter().map(|j| j.to_string()).collect();
            kv(&[("detlb2", num(v)), ("cols", cols.join(","))]);
        }
        OracleCommand::Discp { io, p, weights } => {
            let a = read_matrix(&io.input)?;
            let w = weights.map(|path| read_matrix(&path)).transpose()?;
            let r = disc_p_exact(&a, p, w.as_ref().map(|m| m.as_slice()))?;
            kv(&[("p", num(p)), ("disc_p", num(r.value))]);
            save_coloring(&r, io.coloring_out.as_deref())?;
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<ReportError>() {
        return e.exit_code() as u8;
    }
    match err.downcast_ref::<g2d_core::Error>() {
        Some(e) if e.is_cap_refusal() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // clap reserves status 2 for usage errors; here 2 means a failed assertion
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
