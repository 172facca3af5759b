//! `virtlink`: batch front end for the virtlink library.
//!
//! Exit codes: 0 when everything checked passes, 1 on usage, parse or
//! validation errors, 2 when a theoretical invariant fails.

mod output;
mod qtl;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use virtlink::characterization::{kernel_battery, nondegeneracy_probe, GramBasis};
use virtlink::diagram::read_tangle;
use virtlink::model::SymmetryPolicy;
use virtlink::random::{diagram_corpus, random_invariant_model, random_model, random_tangle, rng};
use virtlink::reidemeister::{check_algebraic, evaluate_trials, random_move_trials};
use virtlink::{enumerate_tangles, qt_evaluate, QuantumTangle, TangleTensor, VertexModel};

use output::{complex, g15, Format};

#[derive(Parser)]
#[command(
    name = "virtlink",
    version,
    about = "Vertex-model partition functions of virtual links and tangles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Seed for every sampled quantity (ChaCha8, seed_from_u64).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Tolerance for pass/fail decisions.
    #[arg(long, default_value_t = 1e-10, global = true)]
    tol: f64,
    /// Project model files onto the S2-invariant part instead of rejecting
    /// asymmetric input.
    #[arg(long, global = true)]
    symmetrize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f_R on .vld tangles and .qtl quantum tangles.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Residuals of the three Reidemeister conditions.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Random Reidemeister moves.
    Moves {
        #[command(subcommand)]
        action: MovesAction,
    },
    /// Determinant-kernel residuals on random tangles.
    Kernel {
        #[arg(long)]
        n: Option<usize>,
        /// Model file; a seeded random complex model of size --n otherwise.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Gram matrix over 4-tangles (CSV on stdout, min eigenvalue on stderr).
    Gram {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Rank probe: pairing-matrix rank against span rank.
    Probe {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 4)]
        arity: usize,
        #[arg(long, default_value_t = 1)]
        max_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// List isomorphism classes of loop-free k-tangles.
    Enumerate {
        #[arg(long)]
        arity: usize,
        #[arg(long, default_value_t = 1)]
        max_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded random tangles and models.
    Random {
        #[command(subcommand)]
        what: RandomWhat,
    },
}

#[derive(Subcommand)]
enum MovesAction {
    /// Apply --count random moves and report max |Δf_R|.
    Test {
        #[arg(long)]
        model: PathBuf,
        /// Starting diagrams; a seeded random corpus otherwise.
        diagrams: Vec<PathBuf>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum RandomWhat {
    /// A uniformly random wiring, as .vld.
    Tangle {
        #[arg(long, default_value_t = 2)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        arity: usize,
        #[command(flatten)]
        common: Common,
    },
    /// A random model, as JSON.
    Model {
        #[arg(long)]
        n: usize,
        /// Complex entries instead of real ones.
        #[arg(long)]
        complex: bool,
        /// A model satisfying all three Reidemeister conditions.
        #[arg(long, conflicts_with = "complex")]
        invariant: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Whether every checked invariant held.
#[derive(PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn load_model(path: &Path, common: &Common) -> Result<VertexModel> {
    let policy = if common.symmetrize {
        SymmetryPolicy::Symmetrize
    } else {
        SymmetryPolicy::Validate
    };
    VertexModel::read_json(path, policy)
        .with_context(|| format!("{}: cannot load model", path.display()))
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn eval(model: &Path, inputs: &[PathBuf], common: &Common, out: &mut String) -> Result<Verdict> {
    let model = load_model(model, common)?;
    let mut parsed = Vec::with_capacity(inputs.len());
    for path in inputs {
        let q = if path.extension().is_some_and(|e| e == "qtl") {
            qtl::read_manifest(path)?
        } else {
            QuantumTangle::from_tangle(&read_tangle(path)?)
        };
        parsed.push(q);
    }
    for (path, q) in inputs.iter().zip(&parsed) {
        let t = qt_evaluate(&model, q).with_context(|| path.display().to_string())?;
        emit_tensor(path, &t, common.format, out);
    }
    Ok(Verdict::Pass)
}

fn emit_tensor(path: &Path, t: &TangleTensor, format: Format, out: &mut String) {
    let name = path.display().to_string();
    let k = t.arity();
    let colors = |idx: usize| -> Vec<usize> {
        let mut c = vec![0; k];
        let mut x = idx;
        for slot in c.iter_mut().rev() {
            *slot = x % t.n() + 1;
            x /= t.n();
        }
        c
    };
    match format {
        Format::Text if k == 0 => out.push_str(&format!("{}\n", complex(t.data()[0]))),
        Format::Text => {
            out.push_str(&format!("# {name}: arity {k}, n = {}\n", t.n()));
            for (idx, z) in t.data().iter().enumerate() {
                let c: Vec<String> = colors(idx).iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("{} {}\n", c.join(" "), complex(*z)));
            }
        }
        Format::Csv => {
            for (idx, z) in t.data().iter().enumerate() {
                let c: Vec<String> = colors(idx).iter().map(|c| c.to_string()).collect();
                out.push_str(&format!(
                    "{name},{},{},{}\n",
                    c.join(" "),
                    g15(z.re),
                    g15(z.im)
                ));
            }
        }
        Format::JsonLines => {
            let values: Vec<[f64; 2]> = t.data().iter().map(|z| [z.re, z.im]).collect();
            out.push_str(&format!(
                "{}\n",
                json!({"input": name, "arity": k, "n": t.n(), "values": values})
            ));
        }
    }
}

fn check(model: &Path, common: &Common, out: &mut String) -> Result<Verdict> {
    let model = load_model(model, common)?;
    let r = check_algebraic(&model, common.tol);
    let rows = [
        ("r1", r.residual_r1, r.passes_r1()),
        ("r2", r.residual_r2, r.passes_r2()),
        ("r3", r.residual_r3, r.passes_r3()),
    ];
    let threshold = r.tol * r.scale;
    match common.format {
        Format::Text => {
            for (name, value, ok) in rows {
                out.push_str(&format!(
                    "residual_{name} {} {}\n",
                    g15(value),
                    pass_word(ok)
                ));
            }
            out.push_str(&format!("threshold {}\n", g15(threshold)));
        }
        Format::Csv => {
            out.push_str("condition,residual,threshold,pass\n");
            for (name, value, ok) in rows {
                out.push_str(&format!("{name},{},{},{ok}\n", g15(value), g15(threshold)));
            }
        }
        Format::JsonLines => {
            out.push_str(&format!("{}\n", serde_json::to_string(&r)?));
        }
    }
    Ok(Verdict::from(r.passes()))
}

fn moves_test(
    model: &Path,
    diagrams: &[PathBuf],
    count: usize,
    max_vertices: usize,
    common: &Common,
    out: &mut String,
) -> Result<Verdict> {
    let model = load_model(model, common)?;
    let corpus = if diagrams.is_empty() {
        diagram_corpus(common.seed, 20, 6, 1..=3)
    } else {
        diagrams
            .iter()
            .map(read_tangle)
            .collect::<virtlink::Result<_>>()?
    };
    let trials = evaluate_trials(
        &model,
        random_move_trials(&corpus, count, common.seed, max_vertices)?,
    )?;
    let max_delta = trials.iter().map(|t| t.delta()).fold(0.0, f64::max);
    let max_relative = trials
        .iter()
        .map(|t| t.relative_delta())
        .fold(0.0, f64::max);
    let ok = max_relative <= common.tol;
    match common.format {
        Format::Text => {
            out.push_str(&format!("moves {}\n", trials.len()));
            out.push_str(&format!("max_delta {}\n", g15(max_delta)));
            out.push_str(&format!(
                "max_relative_delta {} {}\n",
                g15(max_relative),
                pass_word(ok)
            ));
        }
        Format::Csv => {
            out.push_str("index,kind,vertices_before,vertices_after,delta\n");
            for (i, t) in trials.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{},{},{},{}\n",
                    t.trial.site.kind.name(),
                    t.trial.before.num_vertices(),
                    t.trial.after.num_vertices(),
                    g15(t.delta())
                ));
            }
        }
        Format::JsonLines => {
            for t in &trials {
                out.push_str(&format!(
                    "{}\n",
                    json!({
                        "kind": t.trial.site.kind.name(),
                        "mirrored": t.trial.site.mirrored,
                        "before": [t.f_before.re, t.f_before.im],
                        "after": [t.f_after.re, t.f_after.im],
                        "delta": t.delta(),
                    })
                ));
            }
        }
    }
    Ok(Verdict::from(ok))
}

fn kernel(
    n: Option<usize>,
    model: Option<&Path>,
    samples: usize,
    max_vertices: usize,
    common: &Common,
    out: &mut String,
) -> Result<Verdict> {
    let model = match (model, n) {
        (Some(path), _) => {
            let m = load_model(path, common)?;
            if n.is_some_and(|n| n != m.n()) {
                bail!(
                    "--n {} does not match the model's n = {}",
                    n.unwrap(),
                    m.n()
                );
            }
            m
        }
        (None, Some(n)) if n > 0 => random_model(&mut rng(common.seed), n, false),
        _ => bail!("give --n (positive) or --model"),
    };
    let report = kernel_battery(&model, samples, max_vertices, common.seed)?;
    let ok = report.passes(common.tol);
    let control_ok = report.negative_control > 1e-3;
    match common.format {
        Format::Text => {
            out.push_str(&format!(
                "n {}\nsamples {}\n",
                report.n,
                report.samples.len()
            ));
            out.push_str(&format!(
                "max_residual {} {}\n",
                g15(report.max_residual),
                pass_word(ok)
            ));
            out.push_str(&format!(
                "negative_control {} {}\n",
                g15(report.negative_control),
                pass_word(control_ok)
            ));
        }
        Format::Csv => {
            out.push_str("index,vertices,residual\n");
            for (i, s) in report.samples.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{},{}\n",
                    s.tangle.num_vertices(),
                    g15(s.residual)
                ));
            }
        }
        Format::JsonLines => {
            out.push_str(&format!(
                "{}\n",
                json!({
                    "n": report.n,
                    "samples": report.samples.len(),
                    "max_residual": report.max_residual,
                    "negative_control": report.negative_control,
                    "pass": ok && control_ok,
                })
            ));
        }
    }
    Ok(Verdict::from(ok && control_ok))
}

fn gram(model: &Path, max_vertices: usize, common: &Common, out: &mut String) -> Result<Verdict> {
    let model = load_model(model, common)?;
    let report = GramBasis::new(max_vertices)?.report(&model)?;
    for row in &report.gram {
        let cells: Vec<String> = row.iter().map(|x| g15(*x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    eprintln!(
        "min_eigenvalue {} {} (basis {})",
        g15(report.min_eigenvalue),
        pass_word(report.is_psd()),
        report.basis.len()
    );
    Ok(Verdict::from(report.is_psd()))
}

fn probe(
    model: &Path,
    arity: usize,
    max_vertices: usize,
    common: &Common,
    out: &mut String,
) -> Result<Verdict> {
    let model = load_model(model, common)?;
    let p = nondegeneracy_probe(&model, arity, max_vertices)?;
    match common.format {
        Format::Text => out.push_str(&format!(
            "basis {}\ngram_rank {}\nspan_rank {}\n",
            p.basis_size, p.gram_rank, p.span_rank
        )),
        Format::Csv => out.push_str(&format!(
            "basis,gram_rank,span_rank\n{},{},{}\n",
            p.basis_size, p.gram_rank, p.span_rank
        )),
        Format::JsonLines => out.push_str(&format!("{}\n", serde_json::to_string(&p)?)),
    }
    // unequal ranks are only an invariant failure for real models
    Ok(Verdict::from(p.passes() || !model.is_real(1e-12)))
}

fn enumerate(
    arity: usize,
    max_vertices: usize,
    common: &Common,
    out: &mut String,
) -> Result<Verdict> {
    let list = enumerate_tangles(arity, max_vertices)?;
    if common.format == Format::Csv {
        out.push_str("index,vertices,key\n");
    }
    for (i, t) in list.iter().enumerate() {
        let key = t.canonical_form().0.to_hex();
        match common.format {
            Format::Text => {
                out.push_str(&format!("# tangle {} key {key}\n{}\n", i + 1, t.to_vld()))
            }
            Format::Csv => out.push_str(&format!("{},{},{key}\n", i + 1, t.num_vertices())),
            Format::JsonLines => out.push_str(&format!(
                "{}\n",
                json!({"index": i + 1, "vertices": t.num_vertices(), "key": key, "vld": t.to_vld()})
            )),
        }
    }
    Ok(Verdict::Pass)
}

fn run(cli: Cli, out: &mut String) -> Result<Verdict> {
    match cli.command {
        Command::Eval {
            model,
            inputs,
            common,
        } => eval(&model, &inputs, &common, out),
        Command::Check { model, common } => check(&model, &common, out),
        Command::Moves {
            action:
                MovesAction::Test {
                    model,
                    diagrams,
                    count,
                    max_vertices,
                    common,
                },
        } => moves_test(&model, &diagrams, count, max_vertices, &common, out),
        Command::Kernel {
            n,
            model,
            samples,
            max_vertices,
            common,
        } => kernel(n, model.as_deref(), samples, max_vertices, &common, out),
        Command::Gram {
            model,
            max_vertices,
            common,
        } => gram(&model, max_vertices, &common, out),
        Command::Probe {
            model,
            arity,
            max_vertices,
            common,
        } => probe(&model, arity, max_vertices, &common, out),
        Command::Enumerate {
            arity,
            max_vertices,
            common,
        } => enumerate(arity, max_vertices, &common, out),
        Command::Random { what } => {
            match what {
                RandomWhat::Tangle {
                    vertices,
                    arity,
                    common,
                } => {
                    if arity % 2 != 0 {
                        bail!("--arity must be even");
                    }
                    out.push_str(&random_tangle(&mut rng(common.seed), vertices, arity).to_vld());
                }
                RandomWhat::Model {
                    n,
                    complex,
                    invariant,
                    common,
                } => {
                    if n == 0 {
                        bail!("--n must be positive");
                    }
                    let mut r = rng(common.seed);
                    let m = if invariant {
                        random_invariant_model(&mut r, n)
                    } else {
                        random_model(&mut r, n, !complex)
                    };
                    out.push_str(&m.to_json());
                    out.push('\n');
                }
            }
            Ok(Verdict::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // output is buffered so a failing command prints nothing partial
    let mut out = String::new();
    let verdict = run(cli, &mut out);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match verdict {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
