//! The `mmf` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chart::{chart_dataset_page, render_svg, ChartWindow};
use crate::grading::{parse_formula, TriDegree};
use crate::homotopy::{assemble_stem, expand_hidden_extensions, HiddenExtension};
use crate::mmfdata::{
    expressible, load_dataset, validate_dataset_with, Dataset, PageKey, Severity, ValidationPolicy, SHIPPED,
};
use crate::sseq::{
    compare_generators, forced_relations, infer_differential, turn_page, Differential, Generator, TurnWindow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LOAD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mmf", version, about = "Spectral sequence tables: validation, page turning, inference, charts")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every identity the dataset asserts.
    Validate {
        /// Dataset file; the built-in dataset when omitted.
        dataset: Option<PathBuf>,
        /// Largest accepted filtration jump of a hidden extension.
        #[arg(long, default_value_t = 1)]
        max_hidden_jump: i32,
        /// Accept any filtration jump.
        #[arg(long)]
        any_jump: bool,
        /// Also check that each page's generators are polynomials in the
        /// previous page's generators.
        #[arg(long)]
        strict: bool,
    },
    /// Compute the next page from page r and compare with the listed one.
    Turn {
        #[arg(long)]
        from: String,
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        max_stem: i32,
        #[arg(long, default_value_t = 8)]
        max_filtration: i32,
    },
    /// Solve a relation for the differential of an unknown.
    Infer {
        #[arg(long)]
        relation: String,
        #[arg(long)]
        unknown: String,
        #[arg(long)]
        page: String,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// List the relations forced on page r by d² = 0 and by survival.
    Forced {
        #[arg(long)]
        page: String,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Assemble the τ-families of one stem.
    Homotopy {
        #[arg(long)]
        stem: i32,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Render a page as SVG.
    Chart {
        #[arg(long)]
        page: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        max_stem: i32,
        #[arg(long, default_value_t = 12)]
        max_filtration: i32,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
}

struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

impl Outcome {
    fn new(code: i32, text: String, json: Value) -> Self {
        Self { code, text, json }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let format = cli.format;
    match execute(cli.command) {
        Ok(o) => {
            let _ = match format {
                Format::Text => write!(out, "{}", o.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
            };
            o.code
        }
        Err(f) => {
            let _ = match format {
                Format::Text => writeln!(err, "error: {}", f.message),
                Format::Json => writeln!(out, "{}", json!({"error": f.message, "exit": f.code})),
            };
            f.code
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<Dataset, Failure> {
    let text = match path {
        None => SHIPPED.to_string(),
        Some(p) => std::fs::read_to_string(p).map_err(|e| fail(EXIT_LOAD, format!("{}: {e}", p.display())))?,
    };
    load_dataset(&text).map_err(|e| fail(EXIT_LOAD, e.to_string()))
}

fn page_key(d: &Dataset, s: &str) -> Result<PageKey, Failure> {
    let k: PageKey = s.parse().map_err(|e: crate::mmfdata::LoadError| fail(EXIT_USAGE, e.to_string()))?;
    if !d.pages.contains_key(&k) {
        return Err(fail(EXIT_USAGE, format!("the dataset has no page {k}")));
    }
    Ok(k)
}

fn degree_json(d: TriDegree) -> Value {
    json!([d.s, d.f, d.w])
}

fn execute(c: Command) -> Result<Outcome, Failure> {
    match c {
        Command::Validate {
            dataset,
            max_hidden_jump,
            any_jump,
            strict,
        } => {
            let d = load(&dataset)?;
            let policy = ValidationPolicy {
                max_hidden_jump: (!any_jump).then_some(max_hidden_jump),
                expressibility: strict,
            };
            let r = validate_dataset_with(&d, policy);
            let json = json!({
                "ok": r.is_ok(),
                "checked": r.checked.iter().map(|(c, n)| (c.name().to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
                "findings": r.findings.iter().map(|f| json!({
                    "check": f.check.name(),
                    "severity": if f.severity == Severity::Error { "error" } else { "warning" },
                    "location": f.location,
                    "message": f.message,
                })).collect::<Vec<_>>(),
            });
            let code = if r.is_ok() { EXIT_OK } else { EXIT_FAILURE };
            Ok(Outcome::new(code, format!("{r}\n"), json))
        }
        Command::Turn {
            from,
            dataset,
            max_stem,
            max_filtration,
        } => {
            let d = load(&dataset)?;
            let key = page_key(&d, &from)?;
            let next = d.next_key(key).ok_or_else(|| fail(EXIT_USAGE, format!("page {key} has no successor")))?;
            let page = d.page(key).expect("key exists");
            let listed = d.pages[&next].generators();
            let forced: Vec<_> = forced_relations(&page, &listed)
                .into_iter()
                .filter_map(|o| o.value.known().cloned())
                .collect();
            let page = page.with_relations(forced);
            let window = TurnWindow {
                max_stem,
                max_filtration,
            };
            let np = turn_page(&page, window).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
            let a = &d.atoms;
            let in_window: Vec<Generator> = listed
                .into_iter()
                .filter(|g| window.contains(g.degree.s, g.degree.f))
                .collect();
            let diff = compare_generators(&np.indecomposables, &in_window, a);
            let complete = |deg: TriDegree| np.columns.get(&deg.column()).is_some_and(|c| c.complete);
            let mut text = String::new();
            let mut errors = 0;
            for c in &np.indecomposables {
                text += &format!("indecomposable {} {} {}\n", c.degree, c.representative.render(a), c.module);
            }
            text += &format!("matched {} listed generator(s)\n", diff.matched.len());
            for (deg, name) in &diff.missing {
                let sev = if complete(*deg) { "error" } else { "warning" };
                errors += usize::from(complete(*deg));
                text += &format!("{sev}: listed {deg} {name} not computed\n");
            }
            for c in &diff.extra {
                let sev = if complete(c.degree) { "error" } else { "warning" };
                errors += usize::from(complete(c.degree));
                text += &format!("{sev}: computed {} {} not listed\n", c.degree, c.representative.render(a));
            }
            let json = json!({
                "from": key.to_string(),
                "to": next.to_string(),
                "indecomposables": np.indecomposables.iter().map(|c| json!({
                    "degree": degree_json(c.degree),
                    "representative": c.representative.render(a),
                    "module": c.module.to_string(),
                })).collect::<Vec<_>>(),
                "matched": diff.matched.iter().map(|d| degree_json(*d)).collect::<Vec<_>>(),
                "missing": diff.missing.iter().map(|(d, n)| json!({"degree": degree_json(*d), "name": n, "complete": complete(*d)})).collect::<Vec<_>>(),
                "extra": diff.extra.iter().map(|c| json!({"degree": degree_json(c.degree), "representative": c.representative.render(a), "complete": complete(c.degree)})).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(if errors == 0 { EXIT_OK } else { EXIT_FAILURE }, text, json))
        }
        Command::Infer {
            relation,
            unknown,
            page,
            dataset,
        } => {
            let d = load(&dataset)?;
            let key = page_key(&d, &page)?;
            let a = &d.atoms;
            let rel = parse_formula(&relation, a).map_err(|e| fail(EXIT_USAGE, format!("--relation: {e}")))?;
            let x = parse_formula(&unknown, a).map_err(|e| fail(EXIT_USAGE, format!("--unknown: {e}")))?;
            let p = d.page(key).expect("key exists");
            let inf = infer_differential(&rel, &x, &p).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
            let r = p.r();
            let mut text = format!("d_{r}({}) = {}\n", inf.unknown, inf.solution.render(a));
            if inf.is_unique() {
                text += "unique\n";
            } else {
                for k in &inf.kernel {
                    text += &format!("ambiguous: may add {}\n", k.render(a));
                }
            }
            let listed = p.differentials.get(&x.expand(a)).filter(|e| !e.target.is_zero_literal());
            if let Some(e) = listed {
                let verdict = if inf.admits(&e.target_expr) { "admitted" } else { "REJECTED" };
                text += &format!("table value {}: {verdict}\n", e.target.render(a));
            }
            let json = json!({
                "table": listed.map(|e| json!({"value": e.target.render(a), "admitted": inf.admits(&e.target_expr)})),
                "page": r,
                "unknown": inf.unknown,
                "degree": degree_json(inf.degree),
                "cofactor": inf.cofactor.render(a),
                "rhs": inf.rhs.render(a),
                "solution": inf.solution.render(a),
                "unique": inf.is_unique(),
                "kernel": inf.kernel.iter().map(|k| k.render(a)).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(EXIT_OK, text, json))
        }
        Command::Forced { page, dataset } => {
            let d = load(&dataset)?;
            let key = page_key(&d, &page)?;
            let p = d.page(key).expect("key exists");
            let next = d.next_key(key).map(|k| d.pages[&k].generators()).unwrap_or_default();
            let a = &d.atoms;
            let obs = forced_relations(&p, &next);
            let mut text = String::new();
            let mut rows = Vec::new();
            for o in &obs {
                let deg = o.degree.map_or("?".to_string(), |x| x.to_string());
                let (value, known) = match &o.value {
                    Differential::Known(x) => (x.render(a), true),
                    Differential::Unknown { atom } => (format!("undetermined (no cover through {atom})"), false),
                };
                text += &format!("{} {deg}: {value}\n", o.origin);
                rows.push(json!({"origin": o.origin, "degree": o.degree.map(degree_json), "value": value, "known": known}));
            }
            Ok(Outcome::new(EXIT_OK, text, json!({"page": key.to_string(), "forced": rows})))
        }
        Command::Homotopy { stem, dataset } => {
            let d = load(&dataset)?;
            let a = &d.atoms;
            let base: Vec<HiddenExtension> = d.hidden_tau.iter().map(|h| h.extension.clone()).collect();
            let hidden = expand_hidden_extensions(&base, a, stem).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
            let asm = assemble_stem(stem, &d.einf_classes, &hidden, a).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
            let mut text = asm.to_string();
            let einf = d.pages.get(&PageKey::Infinity).map(|p| p.generators()).unwrap_or_default();
            let mut flagged = Vec::new();
            for h in hidden.iter().filter(|h| h.source_degree.s == stem && !base.contains(h)) {
                let present = |x: &crate::grading::Expression, deg: TriDegree| expressible(&d, &einf, x, deg);
                if !present(&h.source_expr, h.source_degree) || !present(&h.target_expr, h.target_degree) {
                    text += &format!("flagged: {} has an end outside the E_inf generators' products\n", h.label(a));
                    flagged.push(h.label(a));
                }
            }
            let json = json!({
                "stem": stem,
                "families": asm.families.iter().map(|f| json!({
                    "lead": f.lead().name,
                    "filtration": f.lead().degree.f,
                    "weight": f.lead().degree.w,
                    "module": f.module.to_string(),
                    "lower_bound": f.lower_bound,
                    "members": f.members.iter().map(|m| json!({"name": m.name, "degree": degree_json(m.degree)})).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "flagged": flagged,
            });
            Ok(Outcome::new(EXIT_OK, text, json))
        }
        Command::Chart {
            page,
            output,
            max_stem,
            max_filtration,
            dataset,
        } => {
            let d = load(&dataset)?;
            let key = page_key(&d, &page)?;
            let window = ChartWindow {
                max_stem,
                max_filtration,
            };
            let scene = chart_dataset_page(&d, key, window).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
            let svg = render_svg(&scene);
            let summary = json!({
                "page": key.to_string(),
                "dots": scene.dots.len(),
                "segments": scene.segments.len(),
                "partial": scene.partial,
                "omitted": scene.omitted,
            });
            match output {
                Some(path) => {
                    std::fs::write(&path, &svg).map_err(|e| fail(EXIT_LOAD, format!("{}: {e}", path.display())))?;
                    let text = format!("wrote {} ({} dots, {} segments)\n", path.display(), scene.dots.len(), scene.segments.len());
                    Ok(Outcome::new(EXIT_OK, text, summary))
                }
                None => Ok(Outcome::new(EXIT_OK, svg, summary)),
            }
        }
    }
}

#[cfg(test)]
mod tests;
