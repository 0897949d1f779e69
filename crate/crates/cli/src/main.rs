//! `parinv`: diagrams, invariant values, canonical forms and verification
//! suites for parabolic nilradicals.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 degenerate
//! orbit.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parinv_core::canonical::{CanonicalContext, CanonicalError};
use parinv_core::diagram::{parse_layers, render_diagram, Layer};
use parinv_core::io::{group_from_json, group_to_json, matrix_from_json, point_to_json};
use parinv_core::structure::{last_column_anchor, StructureSets};
use parinv_core::sweep::{sweep_json, MAX_SWEEP_N};
use parinv_core::verify::{all_passed, run_suite, Suite, VerifyConfig};
use parinv_core::{compute_base, BlockStructure, Generators, NilradMatrix, Root};

#[derive(Parser)]
#[command(name = "parinv", version, about = "Invariants and canonical orbit forms on parabolic nilradicals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Draw the root diagram of a block structure.
    Diagram {
        #[arg(long)]
        blocks: String,
        /// Comma-separated subset of s, phi, psi, t, principal.
        #[arg(long, default_value = "s,phi")]
        layers: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate every generator at a matrix.
    Invariants {
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        matrix: PathBuf,
        /// Group element file; also evaluate at the conjugate and compare.
        #[arg(long)]
        conjugate: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compute the canonical point of a matrix's orbit.
    Canonicalize {
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        matrix: PathBuf,
        /// Also print the conjugating group element.
        #[arg(long)]
        witness: bool,
        /// Check the witness and the projection agree.
        #[arg(long)]
        check: bool,
    },
    /// Run verification suites over all compositions up to a size.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, env = "PARINV_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write per-composition counts as a JSON snapshot.
    Sweep {
        #[arg(long)]
        n: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn bad_input(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Diagram {
            blocks,
            layers,
            format,
        } => cmd_diagram(&blocks, &layers, format),
        Command::Invariants {
            blocks,
            matrix,
            conjugate,
            format,
        } => cmd_invariants(&blocks, &matrix, conjugate.as_deref(), format),
        Command::Canonicalize {
            blocks,
            matrix,
            witness,
            check,
        } => cmd_canonicalize(&blocks, &matrix, witness, check),
        Command::Verify {
            max_n,
            trials,
            seed,
            suite,
            format,
        } => cmd_verify(max_n, trials, seed, &suite, format),
        Command::Sweep { n, out } => cmd_sweep(n, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn parse_blocks(s: &str) -> Result<BlockStructure, Failure> {
    s.parse::<BlockStructure>()
        .map_err(|e| bad_input(format!("--blocks {s:?}: {e}")))
}

fn load_matrix(bs: &BlockStructure, path: &Path) -> Result<NilradMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
    let x = matrix_from_json(&text).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
    if x.blocks() != bs {
        return Err(bad_input(format!(
            "{}: file blocks {} disagree with --blocks {bs}",
            path.display(),
            x.blocks()
        )));
    }
    Ok(x)
}

fn roots_json(roots: impl IntoIterator<Item = Root>) -> Value {
    Value::Array(roots.into_iter().map(|r| json!([r.row, r.col])).collect())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn cmd_diagram(blocks: &str, layers: &str, format: Format) -> Result<(), Failure> {
    let bs = parse_blocks(blocks)?;
    let layers: BTreeSet<Layer> = parse_layers(layers).map_err(bad_input)?;
    let bd = compute_base(&bs);
    let sets = match last_column_anchor(&bd) {
        Some(_) => Some(StructureSets::new(&bd).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?),
        None => None,
    };
    let text = render_diagram(&bd, sets.as_ref(), &layers);
    match format {
        Format::Text => print!("{text}"),
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("blocks".into(), json!(bs.sizes()));
            obj.insert("layers".into(), json!(layers.iter().map(|l| l.tag()).collect::<Vec<_>>()));
            obj.insert("base".into(), roots_json(bd.base.iter().copied()));
            obj.insert("phi".into(), roots_json(bd.phi.iter().copied()));
            match &sets {
                Some(s) => {
                    obj.insert(
                        "anchor".into(),
                        json!({
                            "m_tilde": s.anchor.m_tilde,
                            "m": s.anchor.m,
                            "r": s.anchor.r,
                            "ladder": roots_json(s.anchor.ladder.iter().copied()),
                        }),
                    );
                    obj.insert("psi".into(), roots_json(s.psi.iter().copied()));
                    obj.insert("t".into(), roots_json(s.shadow.iter().copied()));
                    obj.insert(
                        "principal_minors".into(),
                        Value::Array(
                            s.minors
                                .iter()
                                .map(|pm| json!({"block": pm.block, "rows": pm.rows, "cols": pm.cols}))
                                .collect(),
                        ),
                    );
                }
                None => {
                    obj.insert("anchor".into(), Value::Null);
                }
            }
            obj.insert("diagram".into(), json!(text));
            print_json(&Value::Object(obj));
        }
    }
    Ok(())
}

fn cmd_invariants(blocks: &str, matrix: &Path, conjugate: Option<&Path>, format: Format) -> Result<(), Failure> {
    let bs = parse_blocks(blocks)?;
    let x = load_matrix(&bs, matrix)?;
    let gens = Generators::new(&bs);
    let values = gens.values(&x);
    let conj_values = match conjugate {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
            let g = group_from_json(&text, bs.n()).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
            let y = g.adjoint(&x).map_err(|e| Failure {
                code: 1,
                message: e.to_string(),
            })?;
            Some(gens.values(&y))
        }
        None => None,
    };
    match format {
        Format::Text => {
            for (g, v) in gens.list.iter().zip(&values) {
                println!("{} = {v}", g.label());
            }
            if let Some(cv) = &conj_values {
                for (g, (a, b)) in gens.list.iter().zip(values.iter().zip(cv)) {
                    if a != b {
                        println!("{} differs at the conjugate: {b}", g.label());
                    }
                }
                println!("conjugate invariant: {}", if *cv == values { "yes" } else { "no" });
            }
        }
        Format::Json => {
            let list = |vals: &[parinv_core::Scalar]| -> Value {
                Value::Array(
                    gens.list
                        .iter()
                        .zip(vals)
                        .map(|(g, v)| json!({"label": g.label(), "i": g.root.row, "j": g.root.col, "value": v.to_string()}))
                        .collect(),
                )
            };
            let mut obj = json!({"blocks": bs.sizes(), "values": list(&values)});
            if let Some(cv) = &conj_values {
                obj["conjugate_values"] = list(cv);
                obj["invariant"] = json!(*cv == values);
            }
            print_json(&obj);
        }
    }
    match conj_values {
        Some(cv) if cv != values => Err(Failure {
            code: 1,
            message: "generator values changed under conjugation".into(),
        }),
        _ => Ok(()),
    }
}

fn canonical_failure(e: CanonicalError) -> Failure {
    let code = match e {
        CanonicalError::Degenerate(_)
        | CanonicalError::ZeroBaseMinor { .. }
        | CanonicalError::ZeroPhiInvariant { .. } => 3,
        _ => 1,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn cmd_canonicalize(blocks: &str, matrix: &Path, witness: bool, check: bool) -> Result<(), Failure> {
    let bs = parse_blocks(blocks)?;
    let x = load_matrix(&bs, matrix)?;
    let ctx = CanonicalContext::new(&bs).map_err(canonical_failure)?;
    let projected = ctx.pi_map(&x).map_err(canonical_failure)?;
    let w = ctx.canonicalize_witness(&x).map_err(canonical_failure)?;
    let point = serde_json::to_value(point_to_json(&w.point)).expect("serializable");
    if witness {
        let g = serde_json::to_value(group_to_json(&w.g)).expect("serializable");
        print_json(&json!({"point": point, "witness": g}));
    } else {
        print_json(&point);
    }
    if check {
        let image = w.g.adjoint(&x).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?;
        if image != w.point.to_matrix() {
            return Err(Failure {
                code: 1,
                message: "check failed: the witness does not conjugate the matrix to the canonical point".into(),
            });
        }
        if projected != w.point {
            return Err(Failure {
                code: 1,
                message: "check failed: reduction and projection disagree".into(),
            });
        }
        eprintln!("check passed");
    }
    Ok(())
}

fn cmd_verify(max_n: usize, trials: usize, seed: u64, suite: &str, format: Format) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(bad_input)?;
    let cfg = VerifyConfig { max_n, trials, seed };
    let mut reports = run_suite(suite, &cfg);
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    match format {
        Format::Text => {
            for r in &reports {
                println!("{r}");
            }
        }
        Format::Json => print_json(&serde_json::to_value(&reports).expect("serializable")),
    }
    if all_passed(&reports) {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "verification failed".into(),
        })
    }
}

fn cmd_sweep(n: usize, out: Option<&Path>) -> Result<(), Failure> {
    if n == 0 || n > MAX_SWEEP_N {
        return Err(bad_input(format!("--n must be in 1..={MAX_SWEEP_N}")));
    }
    let text = sweep_json(n);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| bad_input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
