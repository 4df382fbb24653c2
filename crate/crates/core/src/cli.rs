//! Command-line front end. Every subcommand is a thin adapter over the
//! library; `run` writes the report and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::calibration;
use crate::corpus;
use crate::diagram::Diagram;
use crate::engine::Engine;
use crate::labelling::{bracket, enumerate_labellings, sigma};
use crate::relations;
use crate::report::{
    digest, CalibrationJson, ChainJson, DiagramSummary, HomologyJson, LabellingJson, RelationJson,
    Report, SummandJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "moykr",
    about = "Graph polynomials and KR graded dimensions of planar webs"
)]
struct Cli {
    /// Add wall-clock time to JSON reports (breaks byte-stability)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a diagram file
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rotation number from the Seifert circles
    Rotation {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Conservation-law labellings with their brackets (and σ_{m,n} given --m/--n)
    Labellings {
        file: PathBuf,
        #[arg(long, requires = "n", value_parser = clap::value_parser!(u32).range(1..))]
        m: Option<u32>,
        #[arg(long, requires = "m", value_parser = clap::value_parser!(u32).range(1..))]
        n: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// The graph polynomial P_n
    Eval {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Summands of the (n, m) composition product
    Decompose {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Nested chains of subgraphs with their degree shifts
    Chains {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Graded dimensions of KR_n and their parity
    Homology {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the relation suite and/or the interaction-table calibration
    Check {
        #[arg(long)]
        relations: bool,
        #[arg(long)]
        calibration: bool,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[arg(long)]
        json: bool,
    },
    /// List the builtin corpus, or print one entry's slice word
    Corpus { name: Option<String> },
}

fn engine_from_env() -> Engine {
    let engine = Engine::default();
    match std::env::var("MOY_MEMO_CAP")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(cap) => engine.with_memo_cap(cap),
        None => engine,
    }
}

struct Input {
    diagram: Diagram,
    digest: String,
}

fn load(path: &Path) -> Result<Input, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| format!("{}: {e}", path.display()))?;
    let diagram = Diagram::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Input {
        diagram,
        digest: digest(&bytes),
    })
}

fn signed(r: i64) -> String {
    if r > 0 {
        format!("+{r}")
    } else {
        r.to_string()
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

/// Parses `args` (including the program name) and executes the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let started = cli.timing.then(Instant::now);
    match execute(cli.command, started, out) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn emit(out: &mut dyn Write, mut report: Report, started: Option<Instant>) -> Result<(), Failure> {
    report.timing_ms = started.map(|t| t.elapsed().as_secs_f64() * 1e3);
    let s = serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{s}").map_err(|e| Failure::Internal(e.to_string()))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| Failure::Internal(e.to_string()))?
    };
}

fn execute(
    command: Command,
    started: Option<Instant>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let engine = engine_from_env();
    match command {
        Command::Validate { file, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let d = &input.diagram;
            if json {
                let mut r = Report::new("validate");
                r.input_digest = Some(input.digest);
                r.diagram = Some(DiagramSummary::from(d));
                emit(out, r, started)?;
            } else {
                say!(
                    out,
                    "ok: {} vertices, {} edges, {} circles, {} components",
                    d.num_vertices(),
                    d.num_edges(),
                    d.circles().count(),
                    d.num_components()
                );
            }
        }
        Command::Rotation { file, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let rot = input.diagram.rotation_number();
            if json {
                let mut r = Report::new("rotation");
                r.input_digest = Some(input.digest);
                r.rotation = Some(rot.clone());
                emit(out, r, started)?;
            } else {
                say!(out, "{}", signed(rot.total));
            }
        }
        Command::Labellings { file, m, n, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let d = &input.diagram;
            let rows: Vec<LabellingJson> = enumerate_labellings(d, None)
                .iter()
                .map(|f| LabellingJson {
                    bracket: bracket(d, f, engine.table()),
                    labels: f.as_map(),
                    sigma: m.zip(n).map(|(m, n)| sigma(d, f, m, n, engine.table())),
                })
                .collect();
            if json {
                let mut r = Report::new(match (m, n) {
                    (Some(m), Some(n)) => format!("labellings --m {m} --n {n}"),
                    _ => "labellings".to_string(),
                });
                r.input_digest = Some(input.digest);
                r.m = m;
                r.n = n;
                r.labellings = Some(rows);
                emit(out, r, started)?;
            } else {
                for row in rows {
                    let labels: Vec<String> = row
                        .labels
                        .iter()
                        .map(|(e, l)| format!("e{e}={l}"))
                        .collect();
                    let mut line = format!("{}  bracket={}", labels.join(" "), row.bracket);
                    if let Some(s) = row.sigma {
                        line.push_str(&format!(" sigma={s}"));
                    }
                    say!(out, "{}", line.trim_start());
                }
            }
        }
        Command::Eval { n, file, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let p = engine.eval_p(&input.diagram, n);
            if json {
                let mut r = Report::new(format!("eval --n {n}"));
                r.input_digest = Some(input.digest);
                r.n = Some(n);
                r.polynomial = Some(p);
                emit(out, r, started)?;
            } else {
                say!(out, "{p}");
            }
        }
        Command::Decompose { n, m, file, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let d = &input.diagram;
            let summands = engine.decompose(d, n, m);
            let total: crate::LaurentPoly = summands.iter().map(|s| s.contribution()).sum();
            let expected = engine.eval_p(d, n + m);
            if total != expected {
                return Err(Failure::Internal(format!(
                    "split sum {total} differs from P_{} = {expected}",
                    n + m
                )));
            }
            let r_total = d.rotation();
            if summands
                .iter()
                .any(|s| (s.left_parity + s.right_parity) % 2 != crate::engine::parity_of(r_total))
            {
                return Err(Failure::Internal(
                    "summand parities do not add up to r mod 2".into(),
                ));
            }
            if json {
                let mut r = Report::new(format!("decompose --n {n} --m {m}"));
                r.input_digest = Some(input.digest);
                r.n = Some(n);
                r.m = Some(m);
                r.polynomial = Some(total);
                r.summands = Some(summands.iter().map(SummandJson::from).collect());
                emit(out, r, started)?;
            } else {
                for s in &summands {
                    say!(
                        out,
                        "sigma={} left=[{}] right=[{}] parity={}+{}  {}",
                        s.sigma,
                        s.left_poly,
                        s.right_poly,
                        s.left_parity,
                        s.right_parity,
                        s.labelling
                    );
                }
                say!(out, "total: {total}");
            }
        }
        Command::Chains { n, file, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let chains = engine
                .chains(&input.diagram, n)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            if json {
                let mut r = Report::new(format!("chains --n {n}"));
                r.input_digest = Some(input.digest);
                r.n = Some(n);
                r.chains = Some(chains.iter().map(ChainJson::from).collect());
                emit(out, r, started)?;
            } else {
                for c in &chains {
                    let betas: Vec<String> = c.steps.iter().map(|s| s.beta.to_string()).collect();
                    let rots: Vec<String> =
                        c.steps.iter().map(|s| s.rotation.to_string()).collect();
                    say!(
                        out,
                        "delta={} betas=[{}] rotations=[{}]",
                        c.delta,
                        betas.join(","),
                        rots.join(",")
                    );
                }
                say!(out, "chains: {}", chains.len());
            }
        }
        Command::Homology { n, file, json } => {
            let input = load(&file).map_err(Failure::Input)?;
            let h = engine
                .homology_table(&input.diagram, n)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            if json {
                let mut r = Report::new(format!("homology --n {n}"));
                r.input_digest = Some(input.digest);
                r.n = Some(n);
                r.homology = Some(HomologyJson::from(&h));
                emit(out, r, started)?;
            } else {
                say!(out, "parity: {}", h.parity);
                for (deg, dim) in &h.dims {
                    say!(out, "q^{deg}: {dim}");
                }
                say!(out, "total: {}", h.total_dimension());
            }
        }
        Command::Check {
            relations: want_relations,
            calibration: want_calibration,
            n_max,
            json,
        } => {
            let (want_relations, want_calibration) = match (want_relations, want_calibration) {
                (false, false) => (true, false),
                other => other,
            };
            let mut ok = true;
            let mut report = Report::new(format!(
                "check{}{} --n-max {n_max}",
                if want_relations { " --relations" } else { "" },
                if want_calibration {
                    " --calibration"
                } else {
                    ""
                }
            ));
            if want_relations {
                let checks = relations::check_all(&engine, n_max);
                ok &= checks.iter().all(|c| c.passed);
                if !json {
                    for c in &checks {
                        say!(out, "{c}");
                    }
                    let passed = checks.iter().filter(|c| c.passed).count();
                    say!(out, "relations: {passed}/{} passed", checks.len());
                }
                report.relations = Some(checks.iter().map(RelationJson::from).collect());
            }
            if want_calibration {
                let cal = calibration::calibrate(n_max);
                let accepted: Vec<String> = cal.survivors().iter().map(|t| t.to_string()).collect();
                let selected = cal.selected();
                ok &= selected == Some(*engine.table());
                if !json {
                    say!(
                        out,
                        "calibration: {}/{} tables accepted",
                        accepted.len(),
                        cal.candidates.len()
                    );
                    for t in &accepted {
                        say!(out, "  accepted {t}");
                    }
                    match selected {
                        Some(t) => say!(out, "selected {t}"),
                        None => say!(out, "no unique table of the expected shape"),
                    }
                }
                report.calibration = Some(CalibrationJson {
                    accepted,
                    candidates: cal.candidates.len(),
                    selected: selected.map(|t| t.to_string()),
                });
            }
            if json {
                emit(out, report, started)?;
            }
            return Ok(if ok { EXIT_OK } else { EXIT_INTERNAL });
        }
        Command::Corpus { name: None } => {
            for e in corpus::ENTRIES {
                say!(out, "{}", e.name);
            }
        }
        Command::Corpus { name: Some(name) } => match corpus::ENTRIES
            .iter()
            .find(|e| e.name == name)
        {
            Some(e) => write!(out, "{}", e.source).map_err(|e| Failure::Internal(e.to_string()))?,
            None => return Err(Failure::Input(format!("no corpus entry named `{name}`"))),
        },
    }
    Ok(EXIT_OK)
}
