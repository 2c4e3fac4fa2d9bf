use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fillspec::eigen::EigenOptions;
use fillspec::isoperimetry::{self, CheegerKind};
use fillspec::profiles::{self, ProfileTable};
use fillspec::suite::{self, SuiteConfig};
use fillspec::{families, fillarea, fixtures, hqm, io, resistance, shelling, spectra};
use fillspec::{DiskDiagram, Presentation};

#[derive(Parser)]
#[command(name = "fillspec", version, about = "Spectral and filling invariants of disk diagrams")]
struct Cli {
    /// Eigen and linear solver residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads for the suite runner.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long = "out", global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a diagram from a family and print its JSON.
    Gen(GenArgs),
    /// First Dirichlet eigenvalues.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SpectrumKind::All)]
        kind: SpectrumKind,
    },
    /// Dirichlet Cheeger constants.
    Cheeger {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Primal)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = CheegerMode::Exact)]
        mode: CheegerMode,
        #[arg(long, default_value_t = isoperimetry::DEFAULT_CAP)]
        cap: usize,
    },
    /// Based filling length with a shelling certificate.
    Fl {
        #[arg(long = "in")]
        input: PathBuf,
        /// Basepoint; defaults to the diagram's basepoint.
        #[arg(long)]
        base: Option<usize>,
        #[arg(long, value_enum, default_value_t = FlMode::Exact)]
        mode: FlMode,
        #[arg(long, default_value_t = shelling::DEFAULT_CAP)]
        cap: usize,
    },
    /// Minimal relator insertions reducing a word to the empty word.
    Fillarea {
        /// Presentation file, or `builtin:NAME` (z2, fan, heisenberg, surface2).
        #[arg(long)]
        pres: String,
        /// Compact (`aabbAABB`, upper case inverts) or spaced (`a a b- b-`).
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 20)]
        max: usize,
    },
    /// Hereditary quasi-minimality over face sets.
    Hqmcheck {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the free completion of the diagram's presentation.
        #[arg(long)]
        pres: Option<String>,
        /// Apply the free completion to `--pres`.
        #[arg(long)]
        complete: bool,
        #[arg(long, value_enum, default_value_t = Variant::Hfmhqm)]
        variant: Variant,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 20)]
        max_area: usize,
    },
    /// Boundary loops of a face set.
    Multiboundary(FaceSetArgs),
    /// Face set with its enclosed faces adjoined.
    Holefill(FaceSetArgs),
    /// Effective resistance from a vertex to the boundary.
    Resistance {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "auto_eigmax")]
        source: Option<usize>,
        /// Use the maximising vertex of the first eigenfunction.
        #[arg(long)]
        auto_eigmax: bool,
    },
    /// Extremal-length inversion chain at the eigenfunction maximum.
    InversionCheck {
        #[arg(long = "in")]
        input: PathBuf,
        /// Filling length to include in the chain; computed greedily if absent.
        #[arg(long)]
        fl: Option<usize>,
    },
    /// Profile tables over families.
    Profile {
        #[arg(long, value_enum)]
        family: ProfileFamily,
        /// Largest parameter of the sweep.
        #[arg(long)]
        max: usize,
    },
    /// Acceptance criteria and invariants.
    Suite {
        /// Comma separated criterion numbers; all when absent.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        #[arg(long)]
        no_invariants: bool,
        #[arg(long)]
        quick: bool,
        /// Corrupt one rotation of the grid fixture.
        #[arg(long)]
        tamper_grid: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Convert diagrams or rewrite the fixture files.
    Export {
        #[command(subcommand)]
        what: ExportCmd,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    Diagram {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
        /// Overlay the face-dual graph (dot only).
        #[arg(long)]
        dual: bool,
    },
    Regressions {
        /// Required: the frozen values are only rewritten on request.
        #[arg(long)]
        regenerate: bool,
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Fan parameter.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Heisenberg parameter.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Surface genus.
    #[arg(long, default_value_t = 2)]
    g: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Grid,
    Fan,
    Heisenberg,
    Dipole,
    Collapse,
    CollapseUnfolded,
    Surface,
}

#[derive(Args)]
struct FaceSetArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma separated face ids.
    #[arg(long, value_delimiter = ',', required = true)]
    faces: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpectrumKind {
    Primal,
    Dual,
    DualWeighted,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Primal,
    DualWeighted,
    DualUnweighted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheegerMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Mhqm,
    Hfmhqm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileFamily {
    Grid,
    Heisenberg,
    Separation,
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

fn load(path: &Path) -> AnyResult<DiskDiagram> {
    Ok(io::from_json(&std::fs::read_to_string(path)?)?)
}

fn presentation(spec: &str) -> AnyResult<Presentation> {
    Ok(match spec.strip_prefix("builtin:") {
        Some("z2") => Presentation::z2(),
        Some("fan") => Presentation::fan(),
        Some("heisenberg") => Presentation::heisenberg(),
        Some("surface2") => Presentation::surface(2),
        Some(other) => return Err(format!("unknown builtin presentation `{other}`").into()),
        None => Presentation::parse(&std::fs::read_to_string(spec)?)?,
    })
}

/// Plain `key: value` lines for objects, pretty JSON otherwise.
fn text(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => serde_json::to_string_pretty(other).unwrap_or_default(),
    }
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn write_stdout(s: &str) {
    let mut o = std::io::stdout().lock();
    if let Err(e) = o.write_all(s.as_bytes()).and_then(|()| o.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

macro_rules! out {
    ($($t:tt)*) => { write_stdout(&format!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { write_stdout(&(format!($($t)*) + "\n")) };
}

fn emit(format: OutFormat, v: &Value) -> AnyResult<()> {
    match format {
        OutFormat::Json => outln!("{}", serde_json::to_string_pretty(v)?),
        OutFormat::Text => outln!("{}", text(v)),
        OutFormat::Csv => return Err("CSV output is only available for `profile`".into()),
    }
    Ok(())
}

fn run(cli: Cli) -> AnyResult<bool> {
    let opts = EigenOptions { tol: cli.tol, ..Default::default() };
    let out = cli.out;
    match cli.cmd {
        Cmd::Gen(a) => {
            let d = match a.family {
                Family::Grid => families::grid(a.p, a.q)?,
                Family::Fan => families::fan(a.m)?,
                Family::Heisenberg => families::heisenberg(a.n)?.diagram,
                Family::Dipole => families::dipole()?,
                Family::Collapse => families::collapse_fixture()?.d,
                Family::CollapseUnfolded => families::collapse_fixture()?.d_unfolded,
                Family::Surface => families::single_relator_disk(&Presentation::surface(a.g), 0)?,
            };
            outln!("{}", io::to_json(&d));
        }
        Cmd::Spectrum { input, kind } => {
            let d = load(&input)?;
            let mut v = serde_json::Map::new();
            if matches!(kind, SpectrumKind::Primal | SpectrumKind::All) {
                v.insert("lambda1".into(), serde_json::to_value(spectra::primal_lambda1(&d, &opts)?)?);
            }
            if matches!(kind, SpectrumKind::Dual | SpectrumKind::All) {
                v.insert("mu1_unweighted".into(), serde_json::to_value(spectra::dual_mu1_unweighted(&d, &opts)?)?);
            }
            if matches!(kind, SpectrumKind::DualWeighted | SpectrumKind::All) {
                v.insert("mu1_weighted".into(), serde_json::to_value(spectra::dual_mu1_weighted(&d, &opts)?)?);
            }
            emit(out, &Value::Object(v))?;
        }
        Cmd::Cheeger { input, kind, mode, cap } => {
            let d = load(&input)?;
            let kind = match kind {
                KindArg::Primal => CheegerKind::Primal,
                KindArg::DualWeighted => CheegerKind::DualWeighted,
                KindArg::DualUnweighted => CheegerKind::DualUnweighted,
            };
            let r = match (mode, kind) {
                (CheegerMode::Heuristic, k) => isoperimetry::cheeger_heuristic(&d, k, &opts)?,
                (CheegerMode::Exact, CheegerKind::Primal) => isoperimetry::cheeger_primal_exact(&d, cap)?,
                (CheegerMode::Exact, CheegerKind::DualWeighted) => isoperimetry::cheeger_dual_exact(&d, true, cap)?,
                (CheegerMode::Exact, CheegerKind::DualUnweighted) => isoperimetry::cheeger_dual_exact(&d, false, cap)?,
            };
            emit(out, &json!({ "kind": kind, "result": r }))?;
        }
        Cmd::Fl { input, base, mode, cap } => {
            let d = load(&input)?;
            let b = base.or(d.basepoint()).ok_or("no basepoint given and the diagram has none")?;
            let r = match mode {
                FlMode::Exact => shelling::fl_exact(&d, b, cap)?,
                FlMode::Greedy => shelling::fl_greedy(&d, b)?,
            };
            emit(out, &json!({ "fl": r.value, "radius": shelling::radius(&d, b)?, "certificate": r.certificate }))?;
        }
        Cmd::Fillarea { pres, word, max } => {
            let p = presentation(&pres)?;
            let w = if word.contains(char::is_whitespace) || word.contains('-') {
                p.parse_spaced_word(&word)?
            } else {
                p.parse_compact_word(&word)?
            };
            let r = fillarea::fillarea_oracle(&p, &w, max)?;
            emit(out, &json!({ "word": p.format_word(&w), "area": r.area, "witness": r.witness }))?;
        }
        Cmd::Hqmcheck { input, pres, complete, variant, kappa, max_area } => {
            let d = load(&input)?;
            let p = match pres {
                Some(s) if complete => presentation(&s)?.free_completion(),
                Some(s) => presentation(&s)?,
                None => d.presentation().free_completion(),
            };
            let v = match variant {
                Variant::Hfmhqm => hqm::hfmhqm_check(&d, &p, kappa, max_area)?,
                Variant::Mhqm => hqm::mhqm_check(&d, &p, kappa, max_area)?,
            };
            emit(out, &serde_json::to_value(&v)?)?;
            return Ok(v.holds());
        }
        Cmd::Multiboundary(a) => {
            let d = load(&a.input)?;
            let mb = isoperimetry::multiboundary(&d, &a.faces)?;
            let words: Vec<String> = mb
                .loops
                .iter()
                .map(|l| d.presentation().format_word(&l.iter().map(|&h| d.label(h)).collect::<Vec<_>>()))
                .collect();
            emit(out, &json!({ "loops": mb.loops, "words": words, "total_length": mb.total_length }))?;
        }
        Cmd::Holefill(a) => {
            let d = load(&a.input)?;
            let filled = isoperimetry::hole_fill(&d, &a.faces)?;
            emit(
                out,
                &json!({
                    "faces": filled,
                    "was_hole_free": isoperimetry::is_hole_free(&d, &a.faces)?,
                    "multiboundary_before": isoperimetry::multiboundary(&d, &a.faces)?.total_length,
                    "multiboundary_after": isoperimetry::multiboundary(&d, &filled)?.total_length,
                }),
            )?;
        }
        Cmd::Resistance { input, source, auto_eigmax } => {
            let d = load(&input)?;
            let v0 = match source {
                Some(v) if !auto_eigmax => v,
                _ => resistance::dirichlet_eigenfunction(&d, &opts)?.argmax,
            };
            emit(out, &json!({ "source": v0, "r_eff": resistance::effective_resistance(&d, v0)? }))?;
        }
        Cmd::InversionCheck { input, fl } => {
            let d = load(&input)?;
            let fl = match (fl, d.basepoint()) {
                (Some(l), _) => Some(l),
                (None, Some(b)) => Some(shelling::fl_greedy(&d, b)?.value),
                (None, None) => None,
            };
            let r = resistance::extremal_inversion_check(&d, &opts, fl)?;
            emit(out, &serde_json::to_value(&r)?)?;
            return Ok(r.verdict);
        }
        Cmd::Profile { family, max } => {
            let t: ProfileTable = match family {
                ProfileFamily::Grid => profiles::sweep_grid_profiles(max, &opts)?,
                ProfileFamily::Heisenberg => profiles::sweep_heisenberg(max, &opts)?,
                ProfileFamily::Separation => profiles::spectral_separation_report(max, &opts)?,
            };
            match out {
                OutFormat::Csv => t.write_csv(std::io::stdout().lock())?,
                OutFormat::Json => outln!("{}", serde_json::to_string_pretty(&t)?),
                OutFormat::Text => {
                    for r in &t.rows {
                        outln!("{:>6}  {:<16} {:<24} {}", r.n, r.params, r.quantity, r.value);
                    }
                }
            }
        }
        Cmd::Suite { criteria, no_invariants, quick, tamper_grid, seed } => {
            let cfg = SuiteConfig {
                criteria,
                invariants: !no_invariants,
                quick,
                tamper_grid,
                seed,
                eigen: opts,
                threads: cli.threads,
            };
            let report = suite::run_suite(&cfg);
            match out {
                OutFormat::Text => out!("{}", report.to_text()),
                _ => emit(out, &serde_json::to_value(&report)?)?,
            }
            return Ok(report.all_pass());
        }
        Cmd::Export { what } => match what {
            ExportCmd::Diagram { input, format, dual } => {
                let d = load(&input)?;
                match format {
                    ExportFormat::Json => outln!("{}", io::to_json(&d)),
                    ExportFormat::Dot => out!("{}", io::to_dot(&d, dual)),
                }
            }
            ExportCmd::Regressions { regenerate, dir } => {
                if !regenerate {
                    outln!("{}", serde_json::to_string_pretty(&fixtures::regressions()?)?);
                } else {
                    fixtures::regenerate(&dir, &opts)?;
                    eprintln!("wrote {} and {}", fixtures::COLLAPSE_FILE, fixtures::REGRESSIONS_FILE);
                }
            }
        },
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
