//! Randomized and exhaustive verification suites over block structures.
//!
//! Each suite yields one [`VerifyReport`] per check. Trials run in parallel
//! but every random object comes from a `(seed, stream)` pair fixed by the
//! structure index and trial number, so reports are reproducible.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{compositions_up_to, BlockStructure};
use crate::canonical::{CanonicalContext, CanonicalError};
use crate::combinatorics::compute_base;
use crate::fixtures::{self, FixtureKind};
use crate::group::random_element;
use crate::invariants::{orbit_dim_bound, tangent_rank, Generators};
use crate::io::{matrix_to_json, MatrixFile};
use crate::lemmas::all_checks;
use crate::nilrad::NilradMatrix;
use crate::sampling::{rng, stream_id};
use crate::structure::{last_column_anchor, StructureSets};

/// Fresh points tried when a sample falls outside the generic locus.
pub const MAX_RESAMPLES: usize = 50;
/// Fresh points tried before a rank deficit counts as a failure.
pub const RANK_RETRIES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Combinatorics,
    Invariance,
    Independence,
    OrbitDim,
    Canonical,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "combinatorics" => Ok(Suite::Combinatorics),
            "invariance" => Ok(Suite::Invariance),
            "independence" => Ok(Suite::Independence),
            "orbit-dim" => Ok(Suite::OrbitDim),
            "canonical" => Ok(Suite::Canonical),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub blocks: Vec<usize>,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<(String, MatrixFile)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    /// Reported but excluded from the overall verdict.
    pub informational: bool,
    /// Random points discarded because they fell outside the generic locus.
    pub resampled: usize,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    fn new(name: impl Into<String>, seed: u64) -> Self {
        VerifyReport {
            name: name.into(),
            trials: 0,
            seed,
            passed: true,
            informational: false,
            resampled: 0,
            counterexample: None,
        }
    }

    fn absorb(&mut self, outcome: Outcome) {
        self.trials += outcome.trials;
        self.resampled += outcome.resampled;
        if let Some(cx) = outcome.failure {
            self.passed = false;
            self.counterexample.get_or_insert(cx);
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.informational) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (informational)",
        };
        write!(
            f,
            "{status:<20} {:<44} trials={:<6} seed={}",
            self.name, self.trials, self.seed
        )?;
        if self.resampled > 0 {
            write!(f, " resampled={}", self.resampled)?;
        }
        if let Some(cx) = &self.counterexample {
            let blocks: Vec<String> = cx.blocks.iter().map(ToString::to_string).collect();
            write!(f, "\n    first counterexample, blocks {}: {}", blocks.join(","), cx.detail)?;
        }
        Ok(())
    }
}

/// Whether every non-informational report passed.
pub fn all_passed(reports: &[VerifyReport]) -> bool {
    reports.iter().all(|r| r.passed || r.informational)
}

#[derive(Default)]
struct Outcome {
    trials: usize,
    resampled: usize,
    failure: Option<Counterexample>,
}

fn counterexample(bs: &BlockStructure, detail: &str, matrices: Vec<(String, MatrixFile)>) -> Counterexample {
    Counterexample {
        blocks: bs.sizes().to_vec(),
        detail: detail.to_string(),
        matrices,
    }
}

impl Outcome {
    fn record(&mut self, ok: bool, failure: impl FnOnce() -> Counterexample) {
        self.trials += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(failure());
        }
    }

    fn fail(bs: &BlockStructure, detail: String, matrices: Vec<(String, MatrixFile)>) -> Self {
        Outcome {
            trials: 1,
            resampled: 0,
            failure: Some(Counterexample {
                blocks: bs.sizes().to_vec(),
                detail,
                matrices,
            }),
        }
    }
}

/// All compositions of `n <= max_n` followed by the worked examples not
/// already among them.
pub fn structures(max_n: usize) -> Vec<BlockStructure> {
    let mut out = compositions_up_to(max_n);
    for ex in fixtures::examples() {
        if !out.contains(&ex) {
            out.push(ex);
        }
    }
    out
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<VerifyReport> {
    match suite {
        Suite::Combinatorics => combinatorics(cfg),
        Suite::Invariance => vec![invariance(cfg)],
        Suite::Independence => vec![independence(cfg)],
        Suite::OrbitDim => vec![orbit_dim(cfg)],
        Suite::Canonical => canonical(cfg),
        Suite::All => [
            Suite::Combinatorics,
            Suite::Invariance,
            Suite::Independence,
            Suite::OrbitDim,
            Suite::Canonical,
        ]
        .iter()
        .flat_map(|&s| run_suite(s, cfg))
        .collect(),
    }
}

/// Runs `check` over all structures in parallel and folds the outcomes in
/// structure order.
fn over_structures(
    name: &str,
    cfg: &VerifyConfig,
    list: &[BlockStructure],
    check: impl Fn(usize, &BlockStructure) -> Outcome + Sync,
) -> VerifyReport {
    let outcomes: Vec<Outcome> = list
        .par_iter()
        .enumerate()
        .map(|(k, bs)| check(k, bs))
        .collect();
    let mut report = VerifyReport::new(name, cfg.seed);
    for o in outcomes {
        report.absorb(o);
    }
    report
}

fn combinatorics(cfg: &VerifyConfig) -> Vec<VerifyReport> {
    let mut reports = Vec::new();
    for fx in fixtures::FIXTURES {
        let mut report = VerifyReport::new(format!("fixture: {}", fx.name), cfg.seed);
        let bs = fx.blocks();
        let bd = compute_base(&bs);
        let got: Result<String, String> = (|| {
            let sets = || StructureSets::new(&bd).map_err(|e| e.to_string());
            Ok(match fx.kind {
                FixtureKind::Base => format!("{:?}", bd.base),
                FixtureKind::Pairs => format!("{:?}", bd.phi),
                FixtureKind::Chains => format!("{:?}", sets()?.psi.into_iter().collect::<Vec<_>>()),
                FixtureKind::Shadow => format!("{:?}", sets()?.shadow.into_iter().collect::<Vec<_>>()),
                FixtureKind::Minors => format!(
                    "{:?}",
                    sets()?
                        .minors
                        .into_iter()
                        .map(|pm| (pm.rows, pm.cols))
                        .collect::<Vec<_>>()
                ),
            })
        })();
        let expected = match fx.kind {
            FixtureKind::Minors => format!("{:?}", fx.expected_minors()),
            _ => format!("{:?}", fx.expected_roots()),
        };
        let outcome = match got {
            Ok(g) if g == expected => Outcome {
                trials: 1,
                ..Outcome::default()
            },
            Ok(g) => Outcome::fail(&bs, format!("expected {expected}, got {g}"), vec![]),
            Err(e) => Outcome::fail(&bs, e, vec![]),
        };
        report.absorb(outcome);
        reports.push(report);
    }

    let list = structures(cfg.max_n);
    let prepared: Vec<_> = list
        .par_iter()
        .map(|bs| {
            let bd = compute_base(bs);
            let sets = last_column_anchor(&bd).map(|_| StructureSets::new(&bd));
            (bd, sets)
        })
        .collect();
    for check in all_checks() {
        let mut report = VerifyReport::new(format!("structure: {}", check.name), cfg.seed);
        report.informational = check.name == "chain-column-below-literal";
        for (bd, sets) in &prepared {
            let outcome = match sets {
                Some(Err(e)) => Outcome::fail(&bd.bs, e.to_string(), vec![]),
                _ => {
                    let sets = sets.as_ref().and_then(|s| s.as_ref().ok());
                    if check.anchored && sets.is_none() {
                        Outcome::default()
                    } else {
                        match check.run(bd, sets).into_iter().next() {
                            None => Outcome {
                                trials: 1,
                                ..Outcome::default()
                            },
                            Some(detail) => Outcome::fail(&bd.bs, detail, vec![]),
                        }
                    }
                }
            };
            report.absorb(outcome);
        }
        reports.push(report);
    }
    reports
}

fn invariance(cfg: &VerifyConfig) -> VerifyReport {
    let list = structures(cfg.max_n);
    over_structures("generators are conjugation invariant", cfg, &list, |k, bs| {
        let gens = Generators::new(bs);
        let mut outcome = Outcome::default();
        for t in 0..cfg.trials {
            let mut r = rng(cfg.seed, stream_id("invariance", k, t));
            let x = NilradMatrix::random(bs, &mut r);
            let g = random_element(bs.n(), &mut r, 1.0);
            let y = g.adjoint(&x).expect("conjugation preserves the nilradical");
            let (vx, vy) = (gens.values(&x), gens.values(&y));
            if let Some(pos) = (0..vx.len()).find(|&i| vx[i] != vy[i]) {
                return Outcome::fail(
                    bs,
                    format!("{} changes from {} to {}", gens.list[pos].label(), vx[pos], vy[pos]),
                    vec![("x".into(), matrix_to_json(&x)), ("conjugate".into(), matrix_to_json(&y))],
                );
            }
            outcome.trials += 1;
        }
        outcome
    })
}

fn independence(cfg: &VerifyConfig) -> VerifyReport {
    let list = structures(cfg.max_n);
    over_structures("jacobian has full rank", cfg, &list, |k, bs| {
        let gens = Generators::new(bs);
        let want = gens.len();
        let mut last = 0;
        for attempt in 0..RANK_RETRIES {
            let mut r = rng(cfg.seed, stream_id("independence", k, attempt));
            let x = NilradMatrix::random(bs, &mut r);
            last = gens.jacobian_rank(&x);
            if last == want {
                return Outcome {
                    trials: 1,
                    resampled: attempt,
                    failure: None,
                };
            }
        }
        Outcome::fail(bs, format!("rank {last} < {want} after {RANK_RETRIES} points"), vec![])
    })
}

fn orbit_dim(cfg: &VerifyConfig) -> VerifyReport {
    let list = structures(cfg.max_n);
    over_structures("generic orbit dimension", cfg, &list, |k, bs| {
        let bound = orbit_dim_bound(bs);
        let mut outcome = Outcome::default();
        for t in 0..cfg.trials {
            let mut r = rng(cfg.seed, stream_id("orbit-dim", k, t));
            let x = NilradMatrix::random(bs, &mut r);
            let rank = tangent_rank(&x);
            if rank != bound {
                let relation = if rank > bound { "exceeds" } else { "falls below" };
                return Outcome::fail(
                    bs,
                    format!("tangent rank {rank} {relation} the bound {bound}"),
                    vec![("x".into(), matrix_to_json(&x))],
                );
            }
            outcome.trials += 1;
        }
        outcome
    })
}

fn canonical(cfg: &VerifyConfig) -> Vec<VerifyReport> {
    let list = structures(cfg.max_n);
    let names = [
        "projection is constant on orbits",
        "witness conjugates to the projection",
        "canonical points are fixed",
    ];
    let per_structure: Vec<[Outcome; 3]> = list
        .par_iter()
        .enumerate()
        .map(|(k, bs)| canonical_one(cfg, k, bs))
        .collect();
    let mut reports: Vec<VerifyReport> = names.iter().map(|n| VerifyReport::new(*n, cfg.seed)).collect();
    for outcomes in per_structure {
        for (report, o) in reports.iter_mut().zip(outcomes) {
            report.absorb(o);
        }
    }
    reports
}

fn canonical_one(cfg: &VerifyConfig, k: usize, bs: &BlockStructure) -> [Outcome; 3] {
    let ctx = match CanonicalContext::new(bs) {
        Ok(c) => c,
        Err(e) => {
            return [
                Outcome::fail(bs, e.to_string(), vec![]),
                Outcome::default(),
                Outcome::default(),
            ]
        }
    };
    let mut out: [Outcome; 3] = Default::default();
    let mut stream = 0;
    for t in 0..cfg.trials {
        // draw a generic point
        let mut sample = None;
        for _ in 0..MAX_RESAMPLES {
            let mut r = rng(cfg.seed, stream_id("canonical", k, stream));
            stream += 1;
            let x = NilradMatrix::random(bs, &mut r);
            match (ctx.pi_map(&x), ctx.canonicalize_witness(&x)) {
                (Ok(p), Ok(w)) => {
                    sample = Some((x, p, w, r));
                    break;
                }
                (Err(CanonicalError::ZeroBaseMinor { .. } | CanonicalError::ZeroPhiInvariant { .. }), _)
                | (_, Err(CanonicalError::Degenerate(_))) => out[1].resampled += 1,
                (_, Err(e)) | (Err(e), _) => {
                    out[1] = Outcome::fail(bs, e.to_string(), vec![("x".into(), matrix_to_json(&x))]);
                    return out;
                }
            }
        }
        let Some((x, point, witness, mut r)) = sample else {
            out[1] = Outcome::fail(bs, format!("no generic point in {MAX_RESAMPLES} draws (trial {t})"), vec![]);
            return out;
        };
        let mats = |extra: Vec<(String, MatrixFile)>| {
            let mut v = vec![("x".to_string(), matrix_to_json(&x))];
            v.extend(extra);
            v
        };

        let g = random_element(bs.n(), &mut r, 1.0);
        let conj = g.adjoint(&x).expect("conjugation preserves the nilradical");
        let orbit_ok = match (ctx.pi_map(&conj), ctx.canonicalize_witness(&conj)) {
            (Ok(p), Ok(w)) => p == point && w.point == point,
            _ => false,
        };
        out[0].record(orbit_ok, || {
            counterexample(bs, "conjugate projects elsewhere", mats(vec![("conjugate".into(), matrix_to_json(&conj))]))
        });

        let image = witness.g.adjoint(&x).expect("conjugation preserves the nilradical");
        out[1].record(image == point.to_matrix() && witness.point == point, || {
            counterexample(bs, "witness image differs from projection", mats(vec![]))
        });

        let fixed = point.is_canonical() && ctx.pi_map(&point.to_matrix()).as_ref() == Ok(&point);
        out[2].record(fixed, || counterexample(bs, "projection moves a canonical point", mats(vec![])));
    }
    out
}
