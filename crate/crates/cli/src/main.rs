use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mft_core::cases::{case_sweep, CaseId, Errata, SweepSpec, SweepType};
use mft_core::detector::{fit_family, verify_theorem, GridSpec, TheoremId, Tolerances};
use mft_core::geometry::{point_geometry, CurvatureData, FormChoice};
use mft_core::mesh::build_mesh;
use mft_core::report::{to_json, SCHEMA_VERSION};
use mft_core::surfaces::{ChartPoint, FamilyKind, NullProfile, SurfaceFamily};
use mft_core::{Error, Result};

/// Fundamental forms, Beltrami operators and `Δx = Ax` detection for
/// surfaces in Minkowski 3-space.
#[derive(Parser)]
#[command(name = "mft", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List surface families with parameters, default domains and signatures.
    List,
    /// Print forms, curvatures and Δx at one chart point.
    Describe {
        #[command(flatten)]
        family: FamilyArgs,
        /// Chart point as `s,theta`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value = "III")]
        form: FormChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit A in Δx = Ax on a grid; exits 1 when the residual is above threshold.
    Fit {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "III")]
        form: FormChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a theorem verification suite (T1..T4).
    Verify {
        theorem: TheoremId,
        /// Grid points per axis on each family's default domain.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance override `name=value`.
        #[arg(long = "tol")]
        tol: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an OBJ mesh and a per-vertex K, H table.
    Mesh {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        /// OBJ output path.
        #[arg(long)]
        out: PathBuf,
        /// CSV output path; defaults to the OBJ path with a `.csv` extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate a case-analysis expression over a parameter grid.
    Sweep {
        /// Chart type: I, II or III.
        #[arg(long = "type")]
        sweep_type: SweepType,
        /// Case: III, IV or V.
        #[arg(long)]
        case: CaseId,
        /// Use the re-derived form of expressions whose literal transcription is inconsistent.
        #[arg(long)]
        corrected: bool,
        /// First axis as `lo:hi:n`.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Second axis as `lo:hi:n`.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// `k(s)` for type III sweeps, as for rev-null-axis (`c`, `sign` or `p0..p3`).
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Family id, see `mft list`.
    #[arg(long)]
    family: String,
    /// Family parameter `name=value`.
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Grid `s0:s1:ns,t0:t1:nt`; defaults to 20x20 over the family's domain.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Tolerance override `name=value`.
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Accepted for reproducibility of the run record.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow grids outside the family's default domain.
    #[arg(long)]
    force_domain: bool,
}

fn parse_pairs(items: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {item:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in {item:?}")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn tolerances(items: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for (k, v) in parse_pairs(items)? {
        tol.set(&k, v)?;
    }
    Ok(tol)
}

fn family(args: &FamilyArgs) -> Result<SurfaceFamily> {
    SurfaceFamily::from_spec(&args.family, &parse_pairs(&args.params)?)
}

fn grid_for(fam: &SurfaceFamily, run: &RunArgs) -> Result<GridSpec> {
    let grid = match &run.grid {
        Some(g) => g.parse()?,
        None => GridSpec::over_default(fam, 20),
    };
    if !run.force_domain && !grid.within(fam) {
        let d = fam.default_domain();
        return Err(Error::InvalidParameter(format!(
            "grid {grid} leaves the default domain s in [{}, {}], theta in [{}, {}] of {}; pass --force-domain to allow",
            d.s.0,
            d.s.1,
            d.theta.0,
            d.theta.1,
            fam.id()
        )));
    }
    Ok(grid)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Domain ends come from products like `0.1 * c`; print them without the
/// trailing representation noise.
fn tidy(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn list_text() -> Result<String> {
    let mut out = String::new();
    for kind in FamilyKind::ALL {
        let fam = SurfaceFamily::from_spec(kind.id(), &BTreeMap::new())?;
        let d = fam.default_domain();
        let defaults: Vec<String> = kind.param_defaults().iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!(
            "{} ({}), signature {}, chart type {}, default domain s in [{}, {}], theta in [{}, {}]; defaults {}\n",
            kind.id(),
            kind.param_schema(),
            kind.signature(),
            kind.chart().label(),
            tidy(d.s.0),
            tidy(d.s.1),
            tidy(d.theta.0),
            tidy(d.theta.1),
            defaults.join(" ")
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct DescribeReport {
    schema_version: u32,
    report: &'static str,
    family: String,
    params: BTreeMap<String, f64>,
    s: f64,
    theta: f64,
    #[serde(rename = "J")]
    form: String,
    position: [f64; 3],
    normal: [f64; 3],
    E: f64,
    F: f64,
    G: f64,
    L: f64,
    M: f64,
    N: f64,
    e11: f64,
    e12: f64,
    e22: f64,
    e11_normal: f64,
    e12_normal: f64,
    e22_normal: f64,
    #[serde(flatten)]
    curvature: CurvatureData,
    laplacian: [f64; 3],
}

fn describe(args: &FamilyArgs, at: &str, form: FormChoice, out: Option<&Path>) -> Result<bool> {
    let fam = family(args)?;
    let (s, t) = at.split_once(',').ok_or_else(|| Error::Parse(format!("--at expects s,theta, got {at:?}")))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad coordinate {v:?}")));
    let p = ChartPoint::new(parse(s)?, parse(t)?);
    let g = point_geometry(&fam, p, form)?;
    let fc = g.forms;
    let rep = DescribeReport {
        schema_version: SCHEMA_VERSION,
        report: "describe",
        family: fam.id().into(),
        params: fam.params().clone(),
        s: p.s,
        theta: p.theta,
        form: form.to_string(),
        position: g.position.to_array(),
        normal: fc.normal.to_array(),
        E: fc.E,
        F: fc.F,
        G: fc.G,
        L: fc.L,
        M: fc.M,
        N: fc.N,
        e11: fc.e11,
        e12: fc.e12,
        e22: fc.e22,
        e11_normal: fc.e11_normal,
        e12_normal: fc.e12_normal,
        e22_normal: fc.e22_normal,
        curvature: g.curvature,
        laplacian: g.laplacian.to_array(),
    };
    emit(&to_json(&rep)?, out)?;
    Ok(true)
}

fn fit(args: &FamilyArgs, run: &RunArgs, form: FormChoice, out: Option<&Path>) -> Result<bool> {
    let fam = family(args)?;
    let grid = grid_for(&fam, run)?;
    let tol = tolerances(&run.tol)?;
    let (report, _, _) = fit_family(&fam, &grid, form, &tol)?;
    emit(&to_json(&report)?, out)?;
    Ok(report.pass)
}

fn mesh(args: &FamilyArgs, run: &RunArgs, out: &Path, csv: Option<&Path>) -> Result<bool> {
    let fam = family(args)?;
    let grid = grid_for(&fam, run)?;
    let mesh = build_mesh(&fam, &grid)?;
    let csv_path = csv.map(Path::to_path_buf).unwrap_or_else(|| out.with_extension("csv"));
    let mut obj = BufWriter::new(fs::File::create(out)?);
    mesh.write_obj(&mut obj)?;
    obj.flush()?;
    let mut table = BufWriter::new(fs::File::create(&csv_path)?);
    mesh.write_csv(&mut table)?;
    table.flush()?;

    #[derive(Serialize)]
    struct MeshReport {
        schema_version: u32,
        report: &'static str,
        family: String,
        params: BTreeMap<String, f64>,
        grid: String,
        obj: String,
        csv: String,
        #[serde(flatten)]
        holes: mft_core::mesh::HoleReport,
    }
    let rep = MeshReport {
        schema_version: SCHEMA_VERSION,
        report: "mesh",
        family: fam.id().into(),
        params: fam.params().clone(),
        grid: grid.to_string(),
        obj: out.display().to_string(),
        csv: csv_path.display().to_string(),
        holes: mesh.hole_report(),
    };
    emit(&to_json(&rep)?, None)?;
    Ok(true)
}

fn axis(text: &str) -> Result<((f64, f64), usize)> {
    let bad = || Error::Parse(format!("axis must look like lo:hi:n, got {text:?}"));
    let f: Vec<&str> = text.split(':').collect();
    if f.len() != 3 {
        return Err(bad());
    }
    let lo = f[0].trim().parse().map_err(|_| bad())?;
    let hi = f[1].trim().parse().map_err(|_| bad())?;
    let n = f[2].trim().parse().map_err(|_| bad())?;
    Ok(((lo, hi), n))
}

fn sweep(t: SweepType, case: CaseId, corrected: bool, x: Option<&str>, y: Option<&str>, params: &[String], out: Option<&Path>) -> Result<bool> {
    let mut spec = SweepSpec::default_for(t, case);
    if corrected {
        spec.errata = Errata::Corrected;
    }
    if let Some(x) = x {
        (spec.x, spec.nx) = axis(x)?;
    }
    if let Some(y) = y {
        (spec.y, spec.ny) = axis(y)?;
    }
    if !params.is_empty() {
        let fam = SurfaceFamily::from_spec(FamilyKind::RevNullAxis.id(), &parse_pairs(params)?)?;
        spec.k = fam.null_profile().cloned().unwrap_or(NullProfile::Polynomial(vec![0.0, 0.0, 1.0]));
    }
    let rep = case_sweep(t, case, &spec)?;
    emit(&to_json(&rep)?, out)?;
    Ok(rep.witnessed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List => {
            emit(&list_text()?, None)?;
            Ok(true)
        }
        Command::Describe { family, at, form, out } => describe(&family, &at, form, out.as_deref()),
        Command::Fit { family, run, form, out } => fit(&family, &run, form, out.as_deref()),
        Command::Verify { theorem, n, seed, tol, out } => {
            let rep = verify_theorem(theorem, &tolerances(&tol)?, seed, n)?;
            emit(&to_json(&rep)?, out.as_deref())?;
            Ok(rep.pass)
        }
        Command::Mesh { family, run, out, csv } => mesh(&family, &run, &out, csv.as_deref()),
        Command::Sweep { sweep_type, case, corrected, x, y, params, out } => {
            sweep(sweep_type, case, corrected, x.as_deref(), y.as_deref(), &params, out.as_deref())
        }
    }
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
