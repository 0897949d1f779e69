//! Acceptance harness: one PASS/FAIL line per criterion, with trial counts
//! and runtime budgets pinned below. Exits nonzero if any criterion fails,
//! except criteria listed as known-false, which are reported as FAIL with
//! their analysis but do not gate the exit status.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use parinv_core::blocks::compositions_up_to;
use parinv_core::canonical::{monomial_table, CanonicalError};
use parinv_core::diagram::{parse_layers, render_diagram};
use parinv_core::group::random_element;
use parinv_core::invariants::{eval_l, eval_m, orbit_dim_bound, tangent_rank};
use parinv_core::lemmas::all_checks;
use parinv_core::linalg::{determinant, Matrix, Scalar};
use parinv_core::sampling::{random_nonzero_scalar, rng, stream_id};
use parinv_core::structure::last_column_anchor;
use parinv_core::{
    compute_base, BlockStructure, CanonicalContext, CanonicalPoint, Generators, NilradMatrix, Root, StructureSets,
};

const SEED: u64 = 0x5eed_2026;

const INVARIANCE_PAIRS: usize = 100;
const INVARIANCE_MAX_N: usize = 8;
const INDEPENDENCE_MAX_N: usize = 8;
const INDEPENDENCE_RETRIES: usize = 5;
const ORBIT_POINTS: usize = 10;
const ORBIT_MAX_N: usize = 7;
const CANONICAL_SAMPLES: usize = 25;
const CANONICAL_MAX_N: usize = 6;
const CANONICAL_RESAMPLES: usize = 50;
const MONOMIAL_MAX_N: usize = 8;
const LEMMA_MAX_N: usize = 8;
const ORACLE_MAX_N: usize = 4;
const ORACLE_POINTS: usize = 10;

const FIRST: &[usize] = &[1, 3, 2, 1, 3, 2, 2];
const SECOND: &[usize] = &[2, 2, 1, 3, 2, 1, 3];
const THIRD: &[usize] = &[1, 1, 4, 2];

const FIRST_BASE: &[(usize, usize)] = &[
    (1, 2), (2, 10), (3, 6), (4, 5), (5, 9), (6, 7), (7, 8), (9, 12), (10, 11), (11, 14), (12, 13),
];
const FIRST_PAIRS: &[(usize, usize)] = &[(2, 5), (2, 6), (5, 7), (8, 11), (8, 12), (9, 11), (11, 13)];
const FIRST_CHAINS: &[(usize, usize)] = &[
    (1, 2), (2, 5), (2, 6), (3, 6), (5, 7), (5, 9), (6, 7), (7, 8),
    (8, 11), (8, 12), (9, 11), (9, 12), (11, 13), (11, 14), (12, 13),
];
const FIRST_SHADOW: &[(usize, usize)] = &[
    (4, 7), (4, 8), (4, 9), (4, 11), (4, 12), (4, 13), (4, 14), (10, 13), (10, 14),
];
type MinorList = &'static [(&'static [usize], &'static [usize])];
const FIRST_MINORS: MinorList = &[
    (&[1], &[2]),
    (&[2, 3], &[5, 6]),
    (&[5, 6], &[7, 9]),
    (&[7], &[8]),
    (&[8, 9], &[11, 12]),
    (&[11, 12], &[13, 14]),
];
// Rows 9,10 take columns 11,13, not 11,12: column 12 belongs to the next
// minor, and row 9's chain roots sit in columns 11 and 13.
const SECOND_MINORS: MinorList = &[
    (&[1, 2], &[3, 4]),
    (&[3, 4], &[5, 7]),
    (&[5], &[6]),
    (&[6, 7, 8], &[9, 10, 14]),
    (&[9, 10], &[11, 13]),
    (&[11], &[12]),
];
const SECOND_CHAINS: &[(usize, usize)] = &[
    (1, 4), (2, 3), (3, 5), (3, 7), (4, 5), (5, 6), (6, 9), (6, 10),
    (6, 14), (7, 9), (7, 10), (8, 9), (9, 11), (9, 13), (10, 11), (11, 12),
];
const THIRD_BASE: &[(usize, usize)] = &[(1, 2), (2, 3), (5, 8), (6, 7)];
const THIRD_PAIRS: &[(usize, usize)] = &[(3, 7), (3, 8)];
const THIRD_CHAINS: &[(usize, usize)] = &[(1, 2), (2, 3), (3, 7), (3, 8)];

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    check: Check,
    /// Analysis for a criterion known to be false as stated.
    known_false: Option<&'static str>,
}

const LITERAL_ANALYSIS: &str = "the chain-column property read literally (a chain root in the \
     same column at row >= i) is false: in the first example the chain root (3,6) has column 5 \
     outside its block, and the only chain root there is (2,5), one row higher but in the same \
     block; the reading 'in the block of row i or a later block' holds for every composition";

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "diagram fixtures", budget: secs(1), check: diagram_fixtures, known_false: None },
        Criterion { id: 2, name: "borel structures", budget: secs(1), check: borel, known_false: None },
        Criterion { id: 3, name: "conjugation invariance", budget: secs(300), check: invariance, known_false: None },
        Criterion { id: 4, name: "independence", budget: secs(120), check: independence, known_false: None },
        Criterion { id: 5, name: "orbit dimension", budget: secs(300), check: orbit_dimension, known_false: None },
        Criterion { id: 6, name: "canonical round trip", budget: secs(600), check: canonical, known_false: None },
        Criterion { id: 7, name: "monomial structure", budget: secs(120), check: monomials, known_false: None },
        Criterion {
            id: 8,
            name: "structural properties",
            budget: secs(120),
            check: structural,
            known_false: Some(LITERAL_ANALYSIS),
        },
        Criterion { id: 9, name: "permutation oracle", budget: secs(60), check: oracle, known_false: None },
    ];
    let mut gating_failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.budget => Err(format!("over budget: {detail}")),
            other => other,
        };
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!(
            "{status} {:>2} {:<24} {:>8.2}s / {:>4}s  {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if result.is_err() {
            match c.known_false {
                Some(analysis) => println!("        known false as stated: {analysis}"),
                None => gating_failures += 1,
            }
        }
    }
    if gating_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn blocks(sizes: &[usize]) -> BlockStructure {
    BlockStructure::new(sizes.to_vec()).expect("valid blocks")
}

fn root_set(list: &[(usize, usize)]) -> BTreeSet<Root> {
    list.iter().map(|&p| Root::from(p)).collect()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

fn minors_of(sets: &StructureSets) -> Vec<(Vec<usize>, Vec<usize>)> {
    sets.minors.iter().map(|pm| (pm.rows.clone(), pm.cols.clone())).collect()
}

fn minor_list(list: MinorList) -> Vec<(Vec<usize>, Vec<usize>)> {
    list.iter().map(|(r, c)| (r.to_vec(), c.to_vec())).collect()
}

fn diagram_fixtures() -> Result<String, String> {
    let layers = parse_layers("s,phi,psi,t,principal").map_err(|e| e.to_string())?;

    let bd = compute_base(&blocks(FIRST));
    let sets = StructureSets::new(&bd).map_err(|e| e.to_string())?;
    expect_eq("first base", bd.base.iter().copied().collect::<BTreeSet<_>>(), root_set(FIRST_BASE))?;
    expect_eq("first base size", bd.base.len(), 11)?;
    expect_eq("first pairs", bd.phi.iter().copied().collect::<BTreeSet<_>>(), root_set(FIRST_PAIRS))?;
    expect_eq("first pairs size", bd.phi.len(), 7)?;
    expect_eq("first chains", sets.psi.clone(), root_set(FIRST_CHAINS))?;
    expect_eq("first shadow", sets.shadow.clone(), root_set(FIRST_SHADOW))?;
    expect_eq("first minors", minors_of(&sets), minor_list(FIRST_MINORS))?;
    render_diagram(&bd, Some(&sets), &layers);

    let bd = compute_base(&blocks(SECOND));
    let sets = StructureSets::new(&bd).map_err(|e| e.to_string())?;
    expect_eq("second chains", sets.psi.clone(), root_set(SECOND_CHAINS))?;
    expect_eq("second minors", minors_of(&sets), minor_list(SECOND_MINORS))?;

    let bd = compute_base(&blocks(THIRD));
    let sets = StructureSets::new(&bd).map_err(|e| e.to_string())?;
    expect_eq("third base", bd.base.iter().copied().collect::<BTreeSet<_>>(), root_set(THIRD_BASE))?;
    expect_eq("third pairs", bd.phi.iter().copied().collect::<BTreeSet<_>>(), root_set(THIRD_PAIRS))?;
    expect_eq("third chains", sets.psi.clone(), root_set(THIRD_CHAINS))?;
    render_diagram(&bd, Some(&sets), &layers);
    Ok("3 examples, 11 sets exact".into())
}

fn borel() -> Result<String, String> {
    for n in 2..=10 {
        let bs = BlockStructure::borel(n);
        let bd = compute_base(&bs);
        let diag: Vec<Root> = (1..n).map(|i| Root::new(i, i + 1)).collect();
        expect_eq(&format!("n={n} base"), bd.base.clone(), diag)?;
        expect_eq(&format!("n={n} pairs"), bd.phi.len(), 0)?;
        let x = NilradMatrix::random(&bs, &mut rng(SEED, stream_id("borel", n, 0)));
        let want: Vec<Scalar> = (1..n).map(|i| x.at(i, i + 1).clone()).collect();
        expect_eq(&format!("n={n} values"), Generators::new(&bs).values(&x), want)?;
    }
    Ok("n = 2..10".into())
}

/// All compositions up to `max_n`, optionally followed by the two n = 14
/// examples.
fn structures(max_n: usize, with_examples: bool) -> Vec<BlockStructure> {
    let mut list = compositions_up_to(max_n);
    if with_examples {
        list.push(blocks(FIRST));
        list.push(blocks(SECOND));
    }
    list
}

/// Runs `f` on every structure in parallel; the first error wins, counts
/// are summed otherwise.
fn each(list: &[BlockStructure], tag: &str, f: impl Fn(usize, &BlockStructure) -> Result<usize, String> + Sync) -> Result<usize, String> {
    list.par_iter()
        .enumerate()
        .map(|(k, bs)| f(k, bs).map_err(|e| format!("{tag}, blocks {bs}: {e}")))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn invariance() -> Result<String, String> {
    let list = structures(INVARIANCE_MAX_N, true);
    let pairs = each(&list, "invariance", |k, bs| {
        let gens = Generators::new(bs);
        for t in 0..INVARIANCE_PAIRS {
            let mut r = rng(SEED, stream_id("invariance", k, t));
            let x = NilradMatrix::random(bs, &mut r);
            let g = random_element(bs.n(), &mut r, 1.0);
            let y = g.adjoint(&x).map_err(|e| e.to_string())?;
            if gens.values(&x) != gens.values(&y) {
                return Err(format!("trial {t}: values change under conjugation"));
            }
        }
        Ok(INVARIANCE_PAIRS)
    })?;
    Ok(format!("{} structures, {pairs} pairs", list.len()))
}

fn independence() -> Result<String, String> {
    let list = structures(INDEPENDENCE_MAX_N, false);
    each(&list, "independence", |k, bs| {
        let gens = Generators::new(bs);
        for attempt in 0..INDEPENDENCE_RETRIES {
            let x = NilradMatrix::random(bs, &mut rng(SEED, stream_id("independence", k, attempt)));
            if gens.jacobian_rank(&x) == gens.len() {
                return Ok(1);
            }
        }
        Err(format!("rank below {} at {INDEPENDENCE_RETRIES} points", gens.len()))
    })?;
    let first = blocks(FIRST);
    let gens = Generators::new(&first);
    let x = NilradMatrix::random(&first, &mut rng(SEED, stream_id("independence-first", 0, 0)));
    expect_eq("first example rank", gens.jacobian_rank(&x), 18)?;
    Ok(format!("{} structures; first example rank 18", list.len()))
}

fn orbit_dimension() -> Result<String, String> {
    let list = structures(ORBIT_MAX_N, false);
    let points = each(&list, "orbit dimension", |k, bs| {
        let bound = orbit_dim_bound(bs);
        for t in 0..ORBIT_POINTS {
            let x = NilradMatrix::random(bs, &mut rng(SEED, stream_id("orbit", k, t)));
            let rank = tangent_rank(&x);
            if rank != bound {
                return Err(format!("point {t}: tangent rank {rank}, bound {bound}"));
            }
        }
        Ok(ORBIT_POINTS)
    })?;
    let first = blocks(FIRST);
    let x = NilradMatrix::random(&first, &mut rng(SEED, stream_id("orbit-first", 0, 0)));
    expect_eq("first example tangent rank", tangent_rank(&x), 64)?;
    expect_eq("first example bound", orbit_dim_bound(&first), 64)?;
    Ok(format!("{} structures, {points} points; first example 64", list.len()))
}

fn degenerate(e: &CanonicalError) -> bool {
    matches!(
        e,
        CanonicalError::ZeroBaseMinor { .. } | CanonicalError::ZeroPhiInvariant { .. } | CanonicalError::Degenerate(_)
    )
}

fn canonical() -> Result<String, String> {
    let list = structures(CANONICAL_MAX_N, false);
    let resampled = std::sync::atomic::AtomicUsize::new(0);
    let samples = each(&list, "canonical", |k, bs| {
        let ctx = CanonicalContext::new(bs).map_err(|e| e.to_string())?;
        let bd = compute_base(bs);
        let mut done = 0;
        let mut attempt = 0;
        while done < CANONICAL_SAMPLES {
            if attempt >= CANONICAL_SAMPLES + CANONICAL_RESAMPLES {
                return Err(format!("only {done} generic samples in {attempt} draws"));
            }
            let mut r = rng(SEED, stream_id("canonical", k, attempt));
            attempt += 1;
            let x = NilradMatrix::random(bs, &mut r);
            let g = random_element(bs.n(), &mut r, 1.0);
            let conj = g.adjoint(&x).map_err(|e| e.to_string())?;
            let (w, p, q) = match (ctx.canonicalize_witness(&x), ctx.pi_map(&x), ctx.pi_map(&conj)) {
                (Ok(w), Ok(p), Ok(q)) => (w, p, q),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) if degenerate(&e) => continue,
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Err(e.to_string()),
            };
            // (a) constant on orbits
            if p != q {
                return Err("projection differs between x and a conjugate".into());
            }
            // (b) the witness conjugates x exactly onto the projection
            if w.g.adjoint(&x).map_err(|e| e.to_string())? != w.point.to_matrix() || w.point != p {
                return Err("witness does not reach the projection".into());
            }
            // (c) canonical points with nonzero values are fixed
            let y = CanonicalPoint {
                bs: bs.clone(),
                coeffs: bd.generator_roots().into_iter().map(|g| (g, random_nonzero_scalar(&mut r))).collect(),
            };
            match ctx.pi_map(&y.to_matrix()) {
                Ok(fixed) if fixed == y => {}
                Ok(_) => return Err("a canonical point is moved by the projection".into()),
                Err(e) if degenerate(&e) => {}
                Err(e) => return Err(e.to_string()),
            }
            done += 1;
        }
        resampled.fetch_add(attempt - done, std::sync::atomic::Ordering::Relaxed);
        Ok(done)
    })?;
    Ok(format!(
        "{} structures, {samples} samples, {} resampled",
        list.len(),
        resampled.into_inner()
    ))
}

fn monomials() -> Result<String, String> {
    let list = structures(MONOMIAL_MAX_N, true);
    each(&list, "monomial table", |_, bs| {
        monomial_table(&compute_base(bs)).map(|_| 1).map_err(|e| e.to_string())
    })?;
    Ok(format!("{} structures", list.len()))
}

fn structural() -> Result<String, String> {
    let list = structures(LEMMA_MAX_N, false);
    let prepared: Vec<_> = list
        .iter()
        .map(|bs| {
            let bd = compute_base(bs);
            let sets = last_column_anchor(&bd).map(|_| StructureSets::new(&bd));
            (bd, sets)
        })
        .collect();
    let mut literal_failures = Vec::new();
    for (bd, sets) in &prepared {
        let sets = match sets {
            Some(Err(e)) => return Err(format!("blocks {}: {e}", bd.bs)),
            Some(Ok(s)) => Some(s),
            None => None,
        };
        for check in all_checks() {
            let failures = check.run(bd, sets);
            if failures.is_empty() {
                continue;
            }
            if check.name == "chain-column-below-literal" {
                literal_failures.push(format!("blocks {}: {}", bd.bs, failures[0]));
            } else {
                return Err(format!("{} on blocks {}: {}", check.name, bd.bs, failures[0]));
            }
        }
    }
    match literal_failures.first() {
        None => Ok(format!("{} structures, all checks", list.len())),
        Some(first) => Err(format!(
            "literal chain-column property fails on {} of {} structures (first: {first}); all other checks hold",
            literal_failures.len(),
            list.len()
        )),
    }
}

/// Determinant by summing over all permutations of the columns.
fn permutation_sum(a: &Matrix) -> Scalar {
    fn go(a: &Matrix, row: usize, used: &mut Vec<bool>, sign: bool, acc: Scalar, out: &mut Scalar) {
        let k = a.rows();
        if row == k {
            if sign {
                *out -= acc;
            } else {
                *out += acc;
            }
            return;
        }
        for c in 0..k {
            if used[c] {
                continue;
            }
            // columns already used to the right of c each add one inversion
            let inversions = used[c + 1..].iter().filter(|&&u| u).count();
            used[c] = true;
            go(a, row + 1, used, sign ^ (inversions % 2 == 1), &acc * &a[(row, c)], out);
            used[c] = false;
        }
    }
    let mut out = Scalar::from_integer(0.into());
    go(a, 0, &mut vec![false; a.rows()], false, Scalar::from_integer(1.into()), &mut out);
    out
}

fn minor_by_permutations(gamma: Root, base: &[Root], x: &NilradMatrix) -> Scalar {
    let inside: Vec<Root> = base.iter().copied().filter(|r| r.row > gamma.row && r.col < gamma.col).collect();
    let mut rows: Vec<usize> = inside.iter().map(|r| r.row - 1).chain([gamma.row - 1]).collect();
    let mut cols: Vec<usize> = inside.iter().map(|r| r.col - 1).chain([gamma.col - 1]).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    permutation_sum(&x.matrix().select(&rows, &cols))
}

fn oracle() -> Result<String, String> {
    let mut compared = 0;
    for (k, bs) in compositions_up_to(ORACLE_MAX_N).iter().enumerate() {
        let bd = compute_base(bs);
        for t in 0..ORACLE_POINTS {
            let x = NilradMatrix::random(bs, &mut rng(SEED, stream_id("oracle", k, t)));
            for &g in &bd.base {
                let want = minor_by_permutations(g, &bd.base, &x);
                expect_eq(&format!("blocks {bs}, minor {g}"), eval_m(g, &bd.base, &x), want)?;
                compared += 1;
            }
            for pair in &bd.pairs {
                let (a, b, c, d) = (pair.xi.row, pair.xi.col, pair.xi_prime.row, pair.xi_prime.col);
                let want: Scalar = (b..=c)
                    .map(|s| {
                        minor_by_permutations(Root::new(a, s), &bd.base, &x)
                            * minor_by_permutations(Root::new(s, d), &bd.base, &x)
                    })
                    .sum();
                expect_eq(&format!("blocks {bs}, pair at {}", pair.phi), eval_l(pair, &bd.base, &x), want)?;
                compared += 1;
            }
            // the permutation sum also cross-checks the library determinant
            let full = x.matrix().clone();
            expect_eq("full determinant", determinant(&full).map_err(|e| e.to_string())?, permutation_sum(&full))?;
        }
    }
    Ok(format!("{compared} generator values compared"))
}
