//! The `folia` command-line tool.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid surface, element
//! shape mismatch, failed selftest), 2 on a usage or parse error.

pub mod render;
pub mod selftest;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use folia::elements::{conform, inverse, multiply};
use folia::groups::validate_group;
use folia::surface::reduce_counting;
use folia::textio::{
    from_json, parse_element, parse_group, parse_surface_raw, print_element, print_group,
    print_normal_form, print_surface, to_json_value, Document,
};
use folia::{
    canonicalize, compute_group, eta_image, graph_diameter, height, is_reduced, normalize, realize,
    validate, GroupExpr, SurfaceTree, WreathElement,
};
use serde_json::{json, Value};

use crate::render::{render_svg, RenderConfig};

#[derive(Debug, Parser)]
#[command(
    name = "folia",
    version,
    about = "Homeotopy groups of striped surfaces"
)]
struct Cli {
    /// Emit the JSON mirror instead of the text DSL.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a surface file.
    Validate { file: PathBuf },
    /// Print the canonical form of a surface.
    Canon { file: PathBuf },
    /// Merge strips whose upper boundary is a single glued interval.
    Reduce { file: PathBuf },
    /// Diameter of the strip graph.
    Diameter { file: PathBuf },
    /// Image of the shift homomorphism on the root strip.
    Eta { file: PathBuf },
    /// Homeotopy group of a surface.
    Group {
        file: PathBuf,
        #[arg(long)]
        normalize: bool,
        /// Also report the height of the printed representation.
        #[arg(long)]
        height: bool,
    },
    /// A surface realizing a group expression.
    Realize { file: PathBuf },
    /// Draw a surface as SVG.
    Render {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Element arithmetic in the group described by GROUPFILE.
    #[command(subcommand)]
    Elem(ElemCommand),
    /// Run seeded property checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ElemCommand {
    Mul {
        group_file: PathBuf,
        a: String,
        b: String,
    },
    Inv {
        group_file: PathBuf,
        a: String,
    },
}

enum Failure {
    Domain(String),
    Usage(String),
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

fn domain(msg: impl std::fmt::Display) -> Failure {
    Failure::Domain(msg.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn load_surface(path: &Path) -> Result<SurfaceTree, Failure> {
    let text = read(path)?;
    let tree = if is_json(&text) {
        match from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))? {
            Document::Surface(t) => t,
            _ => {
                return Err(usage(format!(
                    "{}: expected a surface document",
                    path.display()
                )))
            }
        }
    } else {
        parse_surface_raw(&text).map_err(|e| usage(format!("{}:{e}", path.display())))?
    };
    if let Err(errors) = validate(&tree) {
        let lines: Vec<String> = errors
            .iter()
            .map(|e| format!("{}: {e}", path.display()))
            .collect();
        return Err(domain(lines.join("\n")));
    }
    Ok(tree)
}

fn load_group(path: &Path) -> Result<GroupExpr, Failure> {
    let text = read(path)?;
    if is_json(&text) {
        let g = match from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))? {
            Document::Group(g) => g,
            Document::NormalForm(nf) => nf.to_expr(),
            _ => {
                return Err(usage(format!(
                    "{}: expected a group document",
                    path.display()
                )))
            }
        };
        validate_group(&g).map_err(|errs| {
            domain(
                errs.iter()
                    .map(|e| format!("{}: {e}", path.display()))
                    .collect::<Vec<_>>()
                    .join("\n"),
            )
        })?;
        Ok(g)
    } else {
        parse_group(text.trim()).map_err(|e| match e {
            folia::TextError::Syntax(s) => usage(format!("{}:{s}", path.display())),
            other => domain(format!("{}: {other}", path.display())),
        })
    }
}

fn load_element(shape: &GroupExpr, text: &str) -> Result<WreathElement, Failure> {
    let raw = if is_json(text) {
        match from_json(text).map_err(usage)? {
            Document::Element(e) => e,
            _ => return Err(usage("expected an element document")),
        }
    } else {
        parse_element(text).map_err(|e| usage(format!("element: {e}")))?
    };
    conform(shape, raw).map_err(domain)
}

struct Output<'w> {
    json: bool,
    out: &'w mut dyn Write,
}

impl Output<'_> {
    fn line(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(|e| usage(format!("write failed: {e}")))
    }

    fn json(&mut self, mut v: Value) -> Result<(), Failure> {
        if let Value::Object(m) = &mut v {
            if !m.contains_key("v") {
                let mut tagged = serde_json::Map::new();
                tagged.insert("v".into(), json!(folia::textio::SCHEMA_VERSION));
                tagged.extend(std::mem::take(m));
                *m = tagged;
            }
        }
        self.line(&v.to_string())
    }

    fn doc(&mut self, doc: Document, text: String) -> Result<(), Failure> {
        if self.json {
            self.json(to_json_value(&doc))
        } else {
            self.line(&text)
        }
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn execute(cli: Cli, out: &mut Output<'_>) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let t = load_surface(&file)?;
            if out.json {
                out.json(json!({ "valid": true, "reduced": is_reduced(&t) }))
            } else {
                out.line("valid")
            }
        }
        Command::Canon { file } => {
            let c = canonicalize(&load_surface(&file)?).into_tree();
            let text = print_surface(&c);
            out.doc(Document::Surface(c), text)
        }
        Command::Reduce { file } => {
            let (r, splices) = reduce_counting(&load_surface(&file)?);
            if out.json {
                out.json(merge(
                    to_json_value(&Document::Surface(r)),
                    json!({ "splices": splices }),
                ))
            } else {
                out.line(&print_surface(&r))
            }
        }
        Command::Diameter { file } => {
            let d = graph_diameter(&load_surface(&file)?);
            if out.json {
                out.json(json!({ "diameter": d }))
            } else {
                out.line(&d.to_string())
            }
        }
        Command::Eta { file } => {
            let eta = eta_image(&load_surface(&file)?);
            out.doc(Document::Eta(eta), eta.to_string())
        }
        Command::Group {
            file,
            normalize: norm,
            height: with_height,
        } => {
            let g = compute_group(&load_surface(&file)?);
            let (doc, text, h) = if norm {
                let nf = normalize(&g);
                let h = height(&nf.to_expr());
                let text = print_normal_form(&nf);
                (Document::NormalForm(nf), text, h)
            } else {
                let h = height(&g);
                let text = print_group(&g);
                (Document::Group(g), text, h)
            };
            if out.json {
                let v = to_json_value(&doc);
                out.json(if with_height {
                    merge(v, json!({ "height": h }))
                } else {
                    v
                })
            } else {
                out.line(&text)?;
                if with_height {
                    out.line(&format!("height {h}"))?;
                }
                Ok(())
            }
        }
        Command::Realize { file } => {
            let t = realize(&load_group(&file)?);
            let text = print_surface(&t);
            out.doc(Document::Surface(t), text)
        }
        Command::Render {
            file,
            output,
            repeat,
            depth,
        } => {
            let cfg = RenderConfig {
                repeat,
                depth,
                ..RenderConfig::default()
            };
            cfg.validate().map_err(usage)?;
            let t = load_surface(&file)?;
            let svg = render_svg(&t, &cfg);
            fs::write(&output, svg).map_err(|e| usage(format!("{}: {e}", output.display())))?;
            let strips = render::drawn_strip_count(&t, &cfg);
            if out.json {
                out.json(json!({ "svg": output.display().to_string(), "strips": strips }))
            } else {
                out.line(&format!("wrote {} ({strips} strips)", output.display()))
            }
        }
        Command::Elem(ElemCommand::Mul { group_file, a, b }) => {
            let shape = load_group(&group_file)?;
            let (a, b) = (load_element(&shape, &a)?, load_element(&shape, &b)?);
            let r = multiply(&shape, &a, &b).map_err(domain)?;
            let text = print_element(&r);
            out.doc(Document::Element(r), text)
        }
        Command::Elem(ElemCommand::Inv { group_file, a }) => {
            let shape = load_group(&group_file)?;
            let a = load_element(&shape, &a)?;
            let r = inverse(&shape, &a).map_err(domain)?;
            let text = print_element(&r);
            out.doc(Document::Element(r), text)
        }
        Command::Selftest { seed, iters } => {
            let results = selftest::run_checks(seed, iters);
            let failed = results.iter().any(|r| r.passed != r.total);
            if out.json {
                let checks: Vec<Value> = results
                    .iter()
                    .map(|r| json!({ "name": r.name, "passed": r.passed, "total": r.total }))
                    .collect();
                out.json(json!({ "seed": seed, "iters": iters, "checks": checks }))?;
            } else {
                out.line(&format!("selftest seed={seed} iters={iters}"))?;
                for r in &results {
                    let status = if r.passed == r.total { "ok" } else { "FAIL" };
                    out.line(&format!("{:<30} {}/{} {status}", r.name, r.passed, r.total))?;
                }
            }
            if failed {
                Err(domain("selftest failed"))
            } else {
                Ok(())
            }
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return code;
        }
    };
    let mut out = Output {
        json: cli.json,
        out: stdout,
    };
    match execute(cli, &mut out) {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
