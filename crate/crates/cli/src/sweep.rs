//! Grid sweeps: one CSV row per (grid point, seed).
//!
//! Columns, in order and stable:
//! `row,source,molecule,transform,geometry,n,J,gx,gz,ansatz,depth,seed,best_energy,best_per_site,exact_ground,refined_energy,energy_evaluations`.
//! Missing values are empty. Rows are ordered source, n, J, gx, gz, depth,
//! seed (outermost first) and row `r` anneals with seed `base + r`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use stabinit_core::oracle::SpsaConfig;

use crate::problem::{build_ansatz, AnnealArgs, AnsatzArgs, Source};
use crate::record::{exact_ground, parallel_map, run_seed};
use crate::UsageError;

pub const CSV_HEADER: &str = "row,source,molecule,transform,geometry,n,J,gx,gz,ansatz,depth,seed,best_energy,best_per_site,exact_ground,refined_energy,energy_evaluations";

#[derive(Args, Clone, Debug)]
#[group(id = "sweep_source", required = true, multiple = false, args = ["model", "hamiltonian", "fixtures"])]
pub struct SweepArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Hamiltonian files, or directories whose `*.ham` files are swept in name order.
    #[arg(long, num_args = 1..)]
    pub fixtures: Vec<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Grid: a value, a comma list, or `lo:hi:count` (inclusive, linear).
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long = "J", default_value = "1", allow_hyphen_values = true)]
    pub j: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub gx: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub gz: String,
    #[arg(long, default_value = "2")]
    pub depth: String,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// Skip dense diagonalization.
    #[arg(long = "skip-exact")]
    pub skip_exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a minimal SVG plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

/// Parses a grid spec into values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, UsageError> {
    let bad = |why: &str| UsageError::new(format!("malformed grid `{spec}`: {why}"));
    let number = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("not a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [lo, hi, count] => {
            let (lo, hi) = (number(lo)?, number(hi)?);
            let count: usize = count.trim().parse().map_err(|_| bad("count must be a positive integer"))?;
            match count {
                0 => Err(bad("count must be at least 1")),
                1 => Ok(vec![lo]),
                _ => Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()),
            }
        }
        [single] => single.split(',').map(number).collect(),
        _ => Err(bad("expected `lo:hi:count` or a comma list")),
    }
}

pub fn parse_int_grid(spec: &str) -> Result<Vec<usize>, UsageError> {
    parse_grid(spec)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(UsageError::new(format!("grid `{spec}` must contain non-negative integers, found {v}")))
            }
        })
        .collect()
}

fn ham_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            files.retain(|f| f.extension().is_some_and(|e| e == "ham"));
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// A Hamiltonian grid point before the depth/seed axes.
#[derive(Clone, Debug)]
struct Point {
    source: Source,
    j: Option<f64>,
    gx: Option<f64>,
    gz: Option<f64>,
}

#[derive(Clone, Debug)]
struct Job {
    row: usize,
    point: usize,
    depth: usize,
    seed: u64,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub row: usize,
    pub source: String,
    pub molecule: String,
    pub transform: String,
    pub geometry: String,
    pub n: usize,
    pub j: Option<f64>,
    pub gx: Option<f64>,
    pub gz: Option<f64>,
    pub ansatz: String,
    pub depth: usize,
    pub seed: u64,
    pub best_energy: f64,
    pub exact_ground: Option<f64>,
    pub refined_energy: Option<f64>,
    pub energy_evaluations: usize,
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl Row {
    pub fn csv(&self) -> String {
        [
            self.row.to_string(),
            self.source.clone(),
            self.molecule.clone(),
            self.transform.clone(),
            self.geometry.clone(),
            self.n.to_string(),
            opt(self.j),
            opt(self.gx),
            opt(self.gz),
            self.ansatz.clone(),
            self.depth.to_string(),
            self.seed.to_string(),
            self.best_energy.to_string(),
            (self.best_energy / self.n as f64).to_string(),
            opt(self.exact_ground),
            opt(self.refined_energy),
            self.energy_evaluations.to_string(),
        ]
        .join(",")
    }
}

fn points(args: &SweepArgs) -> Result<Vec<Point>> {
    if !args.fixtures.is_empty() || args.hamiltonian.is_some() {
        let files = match &args.hamiltonian {
            Some(h) => vec![h.clone()],
            None => ham_files(&args.fixtures)?,
        };
        if files.is_empty() {
            return Err(UsageError::new("--fixtures matched no .ham files").into());
        }
        return Ok(files.iter().map(|f| Point { source: Source::file(f), j: None, gx: None, gz: None }).collect());
    }
    let name = args.model.as_deref().expect("clap enforces a source");
    let ns: Vec<Option<usize>> = match &args.n {
        Some(spec) => parse_int_grid(spec)?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let (js, gxs, gzs) = (parse_grid(&args.j)?, parse_grid(&args.gx)?, parse_grid(&args.gz)?);
    let mut out = Vec::new();
    for &n in &ns {
        for &j in &js {
            for &gx in &gxs {
                for &gz in &gzs {
                    let source = Source::model(name, n, j, gx, gz, args.graph.clone());
                    let fields = name == "tfim";
                    out.push(Point {
                        source,
                        j: fields.then_some(j),
                        gx: fields.then_some(gx),
                        gz: fields.then_some(gz),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn run_sweep(args: &SweepArgs) -> Result<Vec<Row>> {
    let depths = parse_int_grid(&args.depth)?;
    let points = points(args)?;
    let built = parallel_map(args.anneal.threads, &points, |p| {
        let (h, echo) = p.source.build()?;
        let exact = if args.skip_exact { None } else { exact_ground(&h)? };
        Ok((h, echo, exact))
    })?;
    let mut jobs = Vec::new();
    for point in 0..points.len() {
        for &depth in &depths {
            for _ in 0..args.anneal.seeds {
                let row = jobs.len();
                jobs.push(Job { row, point, depth, seed: args.anneal.seed + row as u64 });
            }
        }
    }
    let spsa = args.anneal.spsa_rounds.map(|rounds| SpsaConfig { rounds, ..SpsaConfig::default() });
    parallel_map(args.anneal.threads, &jobs, |job| {
        let (h, echo, exact) = &built[job.point];
        let p = &points[job.point];
        let (ansatz, _) = build_ansatz(&args.ansatz.ansatz, h, job.depth)?;
        let out = run_seed(&ansatz, h, &args.anneal.config(job.seed, false), spsa.as_ref())?;
        let source = match echo {
            Source::File { path, .. } => path.display().to_string(),
            Source::Model { name, .. } => name.clone(),
        };
        let meta = |k: &str| echo.meta(k).unwrap_or_default().to_string();
        Ok(Row {
            row: job.row,
            source,
            molecule: meta("molecule"),
            transform: meta("transform"),
            geometry: meta("geometry"),
            n: h.n_qubits(),
            j: p.j,
            gx: p.gx,
            gz: p.gz,
            ansatz: args.ansatz.ansatz.clone(),
            depth: job.depth,
            seed: job.seed,
            best_energy: out.run.best_energy,
            exact_ground: *exact,
            refined_energy: out.run.refined.map(|r| r.energy),
            energy_evaluations: out.run.energy_evaluations,
        })
    })
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Heat map of the lowest energy over gx × gz when both vary, otherwise a
/// line plot of the lowest energy (and exact ground, if known) per point.
pub fn to_svg(rows: &[Row]) -> String {
    let distinct = |f: &dyn Fn(&Row) -> Option<f64>| {
        let mut v: Vec<f64> = rows.iter().filter_map(f).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let gxs = distinct(&|r| r.gx);
    let gzs = distinct(&|r| r.gz);
    if gxs.len() > 1 && gzs.len() > 1 {
        heat_map(rows, &gxs, &gzs)
    } else {
        line_plot(rows)
    }
}

const W: f64 = 480.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;

fn heat_map(rows: &[Row], gxs: &[f64], gzs: &[f64]) -> String {
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for r in rows {
        let i = gxs.iter().position(|&v| Some(v) == r.gx).expect("gx on grid");
        let k = gzs.iter().position(|&v| Some(v) == r.gz).expect("gz on grid");
        let e = cells.entry((i, k)).or_insert(f64::INFINITY);
        *e = e.min(r.best_energy);
    }
    let (lo, hi) = cells.values().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let (cw, ch) = ((W - 2.0 * PAD) / gxs.len() as f64, (H - 2.0 * PAD) / gzs.len() as f64);
    let mut s = svg_open("lowest Clifford energy");
    for (&(i, k), &v) in &cells {
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        let (r, b) = ((255.0 * t) as u8, (255.0 * (1.0 - t)) as u8);
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="{cw:.1}" height="{ch:.1}" fill="rgb({r},64,{b})"><title>gx={} gz={} E={v}</title></rect>"#,
            PAD + i as f64 * cw,
            H - PAD - (k + 1) as f64 * ch,
            gxs[i],
            gzs[k],
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">gx {}…{}</text>"#, W / 2.0, H - 12.0, gxs[0], gxs[gxs.len() - 1]);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">gz {}…{}</text>"#,
        H / 2.0,
        H / 2.0,
        gzs[0],
        gzs[gzs.len() - 1]
    );
    s.push_str("</svg>\n");
    s
}

fn line_plot(rows: &[Row]) -> String {
    // group seeds of the same point: consecutive rows sharing everything but the seed
    let mut series: Vec<(f64, Option<f64>)> = Vec::new();
    let mut last_key = None;
    for r in rows {
        let key = (r.source.clone(), r.n, r.j.map(f64::to_bits), r.gx.map(f64::to_bits), r.gz.map(f64::to_bits), r.depth);
        if last_key.as_ref() == Some(&key) {
            let e = series.last_mut().expect("nonempty");
            e.0 = e.0.min(r.best_energy);
        } else {
            series.push((r.best_energy, r.exact_ground));
            last_key = Some(key);
        }
    }
    let values = series.iter().flat_map(|(b, e)| std::iter::once(*b).chain(*e));
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |i: usize| PAD + (W - 2.0 * PAD) * if series.len() > 1 { i as f64 / (series.len() - 1) as f64 } else { 0.5 };
    let y = |v: f64| H - PAD - (H - 2.0 * PAD) * (v - lo) / span;
    let polyline = |pts: Vec<(usize, f64)>, colour: &str| {
        let coords: Vec<String> = pts.iter().map(|&(i, v)| format!("{:.1},{:.1}", x(i), y(v))).collect();
        format!(r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#, coords.join(" ")) + "\n"
    };
    let mut s = svg_open("lowest Clifford energy per point");
    s.push_str(&polyline(series.iter().enumerate().map(|(i, p)| (i, p.0)).collect(), "steelblue"));
    let exact: Vec<(usize, f64)> = series.iter().enumerate().filter_map(|(i, p)| p.1.map(|e| (i, e))).collect();
    if !exact.is_empty() {
        s.push_str(&polyline(exact, "darkorange"));
    }
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}">{lo:.4}</text>"#, H - PAD + 16.0);
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}">{hi:.4}</text>"#, PAD - 6.0);
    s.push_str("</svg>\n");
    s
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"11\">\n<title>{title}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

pub fn write_outputs(args: &SweepArgs, rows: &[Row]) -> Result<()> {
    crate::emit(args.out.as_deref(), &to_csv(rows))?;
    if let Some(path) = &args.svg {
        write_file(path, &to_svg(rows))?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
