use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use tilecolour::colourers::{standard_colouring, verify_colouring, Colouring, Target};
use tilecolour::oracle::{self, certificate, exact_chromatic, ColourProblem, OracleError};
use tilecolour::planargraph::build_graph;
use tilecolour::render_io::{
    self, read_document, render_svg, write_atomic, write_document, Document, RenderSpec,
};
use tilecolour::substitution::{generate_patch_with, seed_tile, DEFAULT_MAX_LEVEL};
use tilecolour::{Exec, Patch, Tiling, TilingGraph};

#[derive(Parser)]
#[command(
    name = "tilecolour",
    version,
    about = "Exact colourings of substitution tiling patches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a level-L patch.
    Generate(Opts),
    /// Colour a patch with the constructive scheme or the exact oracle.
    Color(Opts),
    /// Check a colouring file against a patch.
    Verify(Opts),
    /// Exact chromatic numbers of a patch.
    Oracle(Opts),
    /// Draw a patch, coloured, as SVG.
    Render(Opts),
    /// Check the claimed values for one tiling.
    Certify(Opts),
}

#[derive(Args, Clone, Default)]
struct Opts {
    /// key=value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tiling: Option<String>,
    #[arg(long)]
    level: Option<u32>,
    /// One mode, or a comma separated list for oracle.
    #[arg(long)]
    mode: Option<String>,
    /// paper or oracle
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Colouring file for verify and render.
    #[arg(long)]
    colouring: Option<PathBuf>,
    /// Quarter (or eighth, for AB) turns applied to the seed.
    #[arg(long)]
    seed_orientation: Option<u32>,
    #[arg(long)]
    margin: Option<u32>,
    /// Largest problem the oracle accepts.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    max_level: Option<u32>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Longer side of the SVG in pixels.
    #[arg(long)]
    size: Option<f64>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Refused(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Refused(_) => 3,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::LimitExceeded { .. } | OracleError::BudgetExhausted { .. } => {
                CliError::Refused(e.to_string())
            }
            e => CliError::Failed(e.to_string()),
        }
    }
}

impl From<render_io::IoError> for CliError {
    fn from(e: render_io::IoError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

macro_rules! failed_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                CliError::Failed(e.to_string())
            }
        }
    )*};
}
failed_from!(
    tilecolour::colourers::ColourError,
    tilecolour::planargraph::GraphError,
    tilecolour::substitution::SubstError
);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Algorithm {
    Paper,
    Oracle,
}

/// Flags merged over the config file.
#[derive(Debug)]
struct RunConfig {
    tiling: Option<Tiling>,
    level: Option<u32>,
    modes: Vec<Target>,
    algorithm: Algorithm,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    colouring: Option<PathBuf>,
    seed_orientation: u32,
    margin: u32,
    limit: usize,
    max_level: u32,
    svg: Option<PathBuf>,
    size: f64,
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key = value",
                path.display(),
                i + 1
            ))
        })?;
        let v = v.trim().trim_matches('"');
        map.insert(k.trim().replace('_', "-"), v.to_string());
    }
    Ok(map)
}

fn parsed<T: std::str::FromStr>(
    flag: Option<T>,
    file: Option<&String>,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    file.map(|s| {
        s.parse::<T>()
            .map_err(|e| CliError::Usage(format!("config {key}: {e}")))
    })
    .transpose()
}

impl RunConfig {
    fn resolve(opts: Opts) -> Result<RunConfig, CliError> {
        let file = match &opts.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        const KEYS: [&str; 14] = [
            "tiling",
            "level",
            "mode",
            "modes",
            "algorithm",
            "in",
            "out",
            "colouring",
            "seed-orientation",
            "margin",
            "limit",
            "max-level",
            "svg",
            "size",
        ];
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown config key {k:?}")));
        }
        let get = |k: &str| file.get(k);
        let tiling = parsed(opts.tiling, get("tiling"), "tiling")?
            .map(|s: String| s.parse::<Tiling>().map_err(CliError::Usage))
            .transpose()?;
        let mode = opts.mode.or_else(|| get("mode").or(get("modes")).cloned());
        let modes = match mode {
            Some(m) => m
                .split(',')
                .map(|s| s.trim().parse::<Target>().map_err(CliError::Usage))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        let algorithm = match parsed(opts.algorithm, get("algorithm"), "algorithm")?.as_deref() {
            None | Some("paper") => Algorithm::Paper,
            Some("oracle") => Algorithm::Oracle,
            Some(a) => {
                return Err(CliError::Usage(format!(
                    "unknown algorithm {a:?} (paper|oracle)"
                )))
            }
        };
        let cfg = RunConfig {
            tiling,
            level: parsed(opts.level, get("level"), "level")?,
            modes,
            algorithm,
            input: parsed(opts.input, get("in"), "in")?,
            out: parsed(opts.out, get("out"), "out")?,
            colouring: parsed(opts.colouring, get("colouring"), "colouring")?,
            seed_orientation: parsed(
                opts.seed_orientation,
                get("seed-orientation"),
                "seed-orientation",
            )?
            .unwrap_or(0),
            margin: parsed(opts.margin, get("margin"), "margin")?.unwrap_or(2),
            limit: parsed(opts.limit, get("limit"), "limit")?.unwrap_or(oracle::DEFAULT_LIMIT),
            max_level: parsed(opts.max_level, get("max-level"), "max-level")?
                .unwrap_or(DEFAULT_MAX_LEVEL),
            svg: parsed(opts.svg, get("svg"), "svg")?,
            size: parsed(opts.size, get("size"), "size")?.unwrap_or(800.0),
        };
        if let Some(l) = cfg.level {
            if l > cfg.max_level {
                return Err(CliError::Usage(format!(
                    "level {l} is above the max level {}",
                    cfg.max_level
                )));
            }
        }
        Ok(cfg)
    }

    fn tiling(&self) -> Result<Tiling, CliError> {
        self.tiling
            .ok_or_else(|| CliError::Usage("--tiling is required".into()))
    }

    fn single_mode(&self) -> Result<Target, CliError> {
        match self.modes.as_slice() {
            [m] => Ok(*m),
            [] => Err(CliError::Usage("--mode is required".into())),
            _ => Err(CliError::Usage("this command takes a single --mode".into())),
        }
    }

    fn generate(&self) -> Result<Patch, CliError> {
        let tiling = self.tiling()?;
        let level = self
            .level
            .ok_or_else(|| CliError::Usage("--level is required".into()))?;
        let seed = seed_tile(tiling.default_seed_kind(), level, self.seed_orientation)?;
        Ok(generate_patch_with(
            tiling,
            level,
            &seed,
            self.max_level,
            Exec::default(),
        )?)
    }

    /// The patch in `--in`, or a generated one.
    fn patch(&self) -> Result<Patch, CliError> {
        match &self.input {
            Some(p) => {
                let patch: Patch = read_document(p)?;
                if let Some(t) = self.tiling {
                    if t != patch.tiling {
                        return Err(CliError::Usage(format!(
                            "--tiling {t} but {} holds a {} patch",
                            p.display(),
                            patch.tiling
                        )));
                    }
                }
                Ok(patch)
            }
            None => self.generate(),
        }
    }
}

fn emit<D: Document>(out: Option<&Path>, d: &D) -> Result<(), CliError> {
    match out {
        Some(p) => write_document(p, d)?,
        None => print!("{}", render_io::to_canonical_string(d)),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &serde_json::Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    match out {
        Some(p) => write_atomic(p, &s)?,
        None => print!("{s}"),
    }
    Ok(())
}

fn write_svg(
    cfg: &RunConfig,
    path: &Path,
    patch: &Patch,
    g: &TilingGraph,
    c: &Colouring,
) -> Result<(), CliError> {
    let spec = RenderSpec::new(c.target).fit(g, cfg.size);
    write_atomic(path, &render_svg(patch, g, c, &spec))?;
    Ok(())
}

fn colour(
    cfg: &RunConfig,
    patch: &Patch,
    g: &TilingGraph,
    mode: Target,
) -> Result<Colouring, CliError> {
    match cfg.algorithm {
        Algorithm::Paper => Ok(standard_colouring(patch, g, mode)?),
        Algorithm::Oracle => {
            let r = exact_chromatic(&ColourProblem::from_tiling(g, mode), cfg.limit)?;
            Ok(Colouring::total(mode, r.chi, r.witness))
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate(o) => {
            let cfg = RunConfig::resolve(o)?;
            let patch = cfg.generate()?;
            emit(cfg.out.as_deref(), &patch)?;
            if let Some(svg) = &cfg.svg {
                let g = build_graph(&patch)?;
                let blank = Colouring {
                    target: Target::Face,
                    palette: 0,
                    assignment: vec![None; g.faces.len()],
                    tables_used: Vec::new(),
                };
                write_svg(&cfg, svg, &patch, &g, &blank)?;
            }
            eprintln!(
                "{} level {}: {} tiles",
                patch.tiling,
                patch.level,
                patch.tiles.len()
            );
        }
        Command::Color(o) => {
            let cfg = RunConfig::resolve(o)?;
            let mode = cfg.single_mode()?;
            let patch = cfg.patch()?;
            let g = build_graph(&patch)?;
            let c = colour(&cfg, &patch, &g, mode)?;
            let report = verify_colouring(&g, &c)?;
            emit(cfg.out.as_deref(), &c)?;
            if let Some(svg) = &cfg.svg {
                write_svg(&cfg, svg, &patch, &g, &c)?;
            }
            eprintln!("{} {mode} colouring, palette {}", patch.tiling, c.palette);
            if !report.is_proper() {
                return Err(CliError::Failed(format!(
                    "colouring is improper: {} conflicts",
                    report.conflicts.len()
                )));
            }
        }
        Command::Verify(o) => {
            let cfg = RunConfig::resolve(o)?;
            let path = cfg
                .colouring
                .clone()
                .ok_or_else(|| CliError::Usage("--colouring is required".into()))?;
            let c: Colouring = read_document(&path)?;
            let patch = cfg.patch()?;
            let g = build_graph(&patch)?;
            let report = verify_colouring(&g, &c)?;
            emit_json(
                cfg.out.as_deref(),
                &serde_json::json!({
                    "v": render_io::SCHEMA_VERSION,
                    "mode": c.target,
                    "palette": c.palette,
                    "colours_used": c.colours_used(),
                    "proper": report.is_proper(),
                    "conflicts": report.conflicts,
                    "out_of_palette": report.out_of_palette,
                }),
            )?;
            if !report.is_proper() {
                return Err(CliError::Failed("colouring is improper".into()));
            }
        }
        Command::Oracle(o) => {
            let cfg = RunConfig::resolve(o)?;
            let patch = cfg.patch()?;
            let g = build_graph(&patch)?;
            let modes = if cfg.modes.is_empty() {
                vec![Target::Vertex, Target::Edge, Target::Face]
            } else {
                cfg.modes.clone()
            };
            let mut certs = Vec::new();
            for mode in modes {
                let p = ColourProblem::from_tiling(&g, mode);
                let r = exact_chromatic(&p, cfg.limit)?;
                certs.push(certificate(&p, &r));
            }
            emit_json(
                cfg.out.as_deref(),
                &serde_json::to_value(&certs).expect("certificates serialise"),
            )?;
        }
        Command::Render(o) => {
            let cfg = RunConfig::resolve(o)?;
            let target = cfg
                .svg
                .clone()
                .or(cfg.out.clone())
                .ok_or_else(|| CliError::Usage("--svg is required".into()))?;
            let patch = cfg.patch()?;
            let g = build_graph(&patch)?;
            let c = match &cfg.colouring {
                Some(p) => read_document(p)?,
                None => colour(&cfg, &patch, &g, cfg.single_mode()?)?,
            };
            write_svg(&cfg, &target, &patch, &g, &c)?;
        }
        Command::Certify(o) => {
            let cfg = RunConfig::resolve(o)?;
            let tiling = cfg.tiling()?;
            let verdict = oracle::certify(tiling, cfg.level.unwrap_or(4), cfg.margin)?;
            emit_json(
                cfg.out.as_deref(),
                &serde_json::to_value(&verdict).expect("verdicts serialise"),
            )?;
            if !verdict.pass {
                return Err(CliError::Failed(format!(
                    "{tiling}: computed values do not match the claims"
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
