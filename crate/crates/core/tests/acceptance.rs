//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary is always printed. Each
//! criterion compares the library against an oracle that lives in test code.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use loometric::embed::{
    constructive_dimension, identity_deviation, solve_escalating, InfeasibleReason, Penalty,
};
use loometric::gh::{check_mnm, cover_order, find_mnm_partition, gh_bounds, gh_exact, GhError, DEFAULT_GH_BUDGET};
use loometric::random::{
    banded_integer_space, clustered_space, hypercube_space, line_space, random_permutation,
    rationalized_euclidean, regular_simplex,
};
use loometric::rational::{int, ratio, reciprocal, Rational};
use loometric::{
    dim_lower_bound, embed_line_branching, is_injective, isolation_strip, max_regular_simplex,
    perturb_to_injective, solve_loose_embedding, validate_metric, verify_loose, FiniteMetricSpace,
    Proof, SolverOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("GH oracle equivalence", gh_oracle),
        ("GH metric axioms", gh_axioms),
        ("loose-embedding soundness", embedding_soundness),
        ("obstruction completeness", obstruction_completeness),
        ("perturbation contract", perturbation_contract),
        ("witness-set checks", witness_checks),
        ("stripping", stripping),
        ("numerical hygiene", gradient_check),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}; {secs:.1}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn gh_corpus() -> Vec<(FiniteMetricSpace, FiniteMetricSpace)> {
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let square = space(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]]);
    let mut corpus = vec![
        (regular_simplex(6, int(1)), regular_simplex(5, int(1))),
        (regular_simplex(6, int(2)), square.clone()),
        (square.clone(), line_space(&[int(0), int(1), int(2), int(3)]).unwrap()),
        (
            line_space(&[int(0), int(1), int(3), int(7), int(15), int(31)]).unwrap(),
            line_space(&[int(0), int(2), int(4), int(6), int(8), int(10)]).unwrap(),
        ),
        (
            clustered_space(&mut rng, 2, 3, 0.05),
            clustered_space(&mut rng, 3, 2, 0.05),
        ),
    ];
    for _ in 0..7 {
        let nx = rng.random_range(4..=6);
        let ny = rng.random_range(4..=6);
        corpus.push((small_space(&mut rng, nx), small_space(&mut rng, ny)));
    }
    corpus
}

fn gh_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut instances = 0;
    for _ in 0..200 {
        let nx = rng.random_range(1..=4);
        let ny = rng.random_range(1..=4);
        let x = small_space(&mut rng, nx);
        let y = small_space(&mut rng, ny);
        let r = gh_exact(&x, &y, DEFAULT_GH_BUDGET);
        let (value, witness) = gh_by_relations(&x, &y);
        ensure!(r.is_exact(), "budget ran out at sizes {nx}x{ny}");
        ensure!(r.value == value, "value {} != oracle {} at sizes {nx}x{ny}", r.value, value);
        ensure!(r.correspondence.pairs() == witness.as_slice(), "witness is not the lexicographic minimum");
        instances += 1;
    }
    let corpus = gh_corpus();
    for (k, (x, y)) in corpus.iter().enumerate() {
        let r = gh_exact(x, y, DEFAULT_GH_BUDGET);
        let oracle = gh_by_maps(x, y);
        ensure!(r.is_exact(), "corpus {k}: budget ran out");
        ensure!(r.value == oracle, "corpus {k}: value {} != oracle {}", r.value, oracle);
        ensure!(
            r.correspondence.distortion(x, y) * ratio(1, 2) == r.value,
            "corpus {k}: witness does not attain the value"
        );
        let (lo, hi) = gh_bounds(x, y);
        ensure!(lo <= r.value && r.value <= hi, "corpus {k}: bounds do not bracket");
    }
    let secs = started.elapsed().as_secs_f64();
    ensure!(secs <= 60.0, "took {secs:.1}s");
    Ok(format!("{instances} random pairs up to 4x4, {} corpus pairs up to 6x6", corpus.len()))
}

fn gh_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gh = |a: &FiniteMetricSpace, b: &FiniteMetricSpace| {
        let r = gh_exact(a, b, DEFAULT_GH_BUDGET);
        assert!(r.is_exact());
        r.value
    };
    for t in 0..100 {
        let sizes: Vec<usize> = (0..3).map(|_| rng.random_range(1..=5)).collect();
        let x = small_space(&mut rng, sizes[0]);
        let y = small_space(&mut rng, sizes[1]);
        let z = small_space(&mut rng, sizes[2]);
        let (xy, yx) = (gh(&x, &y), gh(&y, &x));
        ensure!(xy == yx, "triple {t}: asymmetric {xy} vs {yx}");
        let (yz, xz) = (gh(&y, &z), gh(&x, &z));
        ensure!(xz <= &xy + &yz, "triple {t}: {xz} > {xy} + {yz}");
        ensure!(gh(&x, &x) == int(0), "triple {t}: gh(X, X) != 0");
    }
    for t in 0..50 {
        let n = rng.random_range(1..=7);
        let x = small_space(&mut rng, n);
        let sigma = random_permutation(&mut rng, n);
        let r = gh_exact(&x, &x.permute(&sigma), DEFAULT_GH_BUDGET);
        ensure!(r.is_exact() && r.value == int(0), "relabeling {t}: value {}", r.value);
    }
    Ok("100 triples up to size 5, 50 relabelings up to size 7".into())
}

fn embedding_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut line_ok = 0;
    for t in 0..100 {
        let n = rng.random_range(2..=32);
        let dim = rng.random_range(1..=4);
        let s = hypercube_space(&mut rng, n, dim);
        ensure!(is_injective(&s).is_ok(), "space {t} is not injective");
        if let Ok(e) = embed_line_branching(&s, t) {
            ensure!(verify_loose(&s, &e).unwrap().is_loose(), "line embedding {t} fails verify_loose");
            ensure!(is_loose_by_pairs(&s, &e), "line embedding {t} fails the pair oracle");
            line_ok += 1;
        }
    }
    let mut solved = 0;
    let mut dims = Vec::new();
    for t in 0..50 {
        let n = rng.random_range(2..=8);
        let s = match t % 3 {
            0 => {
                let lo = rng.random_range(1..=3);
                banded_integer_space(&mut rng, n, lo)
            }
            1 => small_space(&mut rng, n),
            _ => regular_simplex(n, int(1)),
        };
        let opts = SolverOptions {
            seed: t,
            ..SolverOptions::default()
        };
        let floor = dim_lower_bound(&s);
        let top = constructive_dimension(&s).max(floor);
        let tries = (floor..=(floor + 2).min(top)).chain(std::iter::once(top));
        if let Ok(e) = solve_escalating(&s, tries, &opts) {
            ensure!(verify_loose(&s, &e).unwrap().is_loose(), "solver embedding {t} fails verify_loose");
            ensure!(is_loose_by_pairs(&s, &e), "solver embedding {t} fails the pair oracle");
            dims.push(e.dim);
            solved += 1;
        }
    }
    Ok(format!(
        "{line_ok}/100 line embeddings, {solved}/50 solver embeddings (dims {:?}), all verified",
        dims
    ))
}

fn obstruction_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut certified = 0;
    for t in 0..500 {
        let n = rng.random_range(2..=10);
        let lo = rng.random_range(1..=3);
        let s = banded_integer_space(&mut rng, n, lo);
        let fast = max_regular_simplex(&s).unwrap();
        let slow = brute_force_simplex(&s);
        ensure!(fast == slow, "space {t}: {:?} != oracle {:?}", fast, slow);
        let k = slow.points.len();
        for d in 0..=k.saturating_sub(2) {
            let opts = SolverOptions {
                seed: t,
                ..SolverOptions::default()
            };
            let report = match solve_loose_embedding(&s, d, &opts) {
                Ok(_) => return Err(format!("space {t}: embedded into R^{d} despite a {k}-point simplex")),
                Err(r) => r,
            };
            ensure!(report.reason == InfeasibleReason::SimplexObstruction, "space {t}: wrong reason");
            let cert = report.certificate.ok_or(format!("space {t}: no certificate"))?;
            ensure!(cert.holds_in(&s) && cert.points.len() >= d + 2, "space {t}: bad certificate");
            certified += 1;
        }
    }
    Ok(format!("500 spaces match brute force, {certified} infeasible targets certified"))
}

fn perturbation_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut direct = 0;
    for t in 0..1000u64 {
        let n = rng.random_range(2..=16);
        let lo = rng.random_range(1..=4);
        let s = banded_integer_space(&mut rng, n, lo);
        let min = s.min_distance().unwrap();
        let eps = &min * ratio(1, rng.random_range(5..=1000));
        let out = perturb_to_injective(&s, &eps, t).map_err(|e| format!("space {t}: {e}"))?;
        ensure!(validate_metric(out.labels().to_vec(), out.to_matrix()).is_ok(), "space {t}: not a metric");
        ensure!(is_injective(&out).is_ok(), "space {t}: not injective");
        let dev = identity_deviation(&s, &out);
        ensure!(dev <= eps, "space {t}: entry moved by {dev} > {eps}");
        ensure!(&dev * ratio(1, 2) <= eps, "space {t}: certificate exceeds eps");
        if n <= 5 {
            let r = gh_exact(&s, &out, DEFAULT_GH_BUDGET);
            ensure!(r.is_exact() && r.value <= eps, "space {t}: gh {} > eps {}", r.value, eps);
            direct += 1;
        }
    }
    Ok(format!("1000 spaces up to 16 points, {direct} checked directly with gh_exact"))
}

fn witness_corpus() -> Vec<FiniteMetricSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..50)
        .map(|k| {
            let n: usize = rng.random_range(2..=8);
            match k % 3 {
                0 => {
                    let points: Vec<Vec<f64>> = (0..n)
                        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                        .collect();
                    rationalized_euclidean(&points, 64)
                }
                1 => clustered_space(&mut rng, 2 + k % 3, n / 2 + 1, 0.05)
                    .restrict(&(0..n).collect::<Vec<_>>()),
                _ => {
                    let lo = rng.random_range(2..=4);
                    banded_integer_space(&mut rng, n, lo).scaled(&ratio(1, 10))
                }
            }
        })
        .collect()
}

fn cover_golden() -> Result<usize, String> {
    let line = line_space(&[int(0), int(1), int(2), int(3)]).unwrap();
    let two = line_space(&[int(0), int(1)]).unwrap();
    let empty = FiniteMetricSpace::empty();
    let cases: Vec<(&FiniteMetricSpace, Vec<Vec<usize>>, Result<i64, GhError>)> = vec![
        (&line, vec![vec![0], vec![1], vec![2], vec![3]], Ok(0)),
        (&line, vec![vec![0, 1, 2, 3]], Ok(0)),
        (&two, vec![vec![0, 1], vec![1]], Ok(1)),
        (&line, vec![vec![0, 1], vec![0, 2], vec![0, 3]], Ok(2)),
        (&empty, vec![], Ok(-1)),
        (&empty, vec![vec![]], Ok(-1)),
        (&line, vec![vec![0, 1], vec![], vec![2, 3]], Ok(0)),
        (&line, vec![vec![0, 1], vec![1, 2], vec![2, 3]], Ok(1)),
        (&line, vec![vec![0, 1, 2, 3], vec![0, 1, 2], vec![0, 1], vec![0]], Ok(3)),
        (&line, vec![vec![0, 0, 1], vec![2, 3]], Ok(0)),
        (&line, vec![vec![0, 1], vec![2]], Err(GhError::NotACover { missing: 3 })),
    ];
    for (k, (s, cover, expected)) in cases.iter().enumerate() {
        let got = cover_order(s, cover);
        if &got != expected {
            return Err(format!("cover case {k}: {got:?} != {expected:?}"));
        }
        if let Ok(order) = got {
            let mut reversed = cover.clone();
            reversed.reverse();
            if cover_order(s, &reversed) != Ok(order) {
                return Err(format!("cover case {k}: order depends on member order"));
            }
        }
    }
    Ok(cases.len())
}

fn witness_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ms: Vec<u64> = (0..13).map(|k| 1u64 << k).collect();
    let mut flips = 0;
    for t in 0..100 {
        let n = rng.random_range(2..=8);
        let s = small_space(&mut rng, n).scaled(&ratio(1, 4));
        let blocks = rng.random_range(1..=n);
        let mut partition = vec![Vec::new(); blocks];
        for p in 0..n {
            partition[rng.random_range(0..blocks)].push(p);
        }
        partition.retain(|b| !b.is_empty());
        for nn in [1u64, 2, 4] {
            let holds: Vec<bool> = ms
                .iter()
                .map(|&m| check_mnm(&s, &partition, nn, m).unwrap().is_none())
                .collect();
            ensure!(holds.windows(2).all(|w| !w[0] || w[1]), "instance {t}: not monotone in M");
            if holds.first() != holds.last() {
                flips += 1;
            }
        }
        for &m in &ms {
            let by_n: Vec<bool> = [4u64, 2, 1]
                .iter()
                .map(|&nn| check_mnm(&s, &partition, nn, m).unwrap().is_none())
                .collect();
            ensure!(by_n.windows(2).all(|w| !w[0] || w[1]), "instance {t}: not monotone in N");
        }
    }

    let corpus = witness_corpus();
    let mut found = 0;
    let mut queries = 0;
    for (k, s) in corpus.iter().enumerate() {
        let partitions = set_partitions(s.len());
        for nn in [1u64, 2, 4, 8] {
            for mm in [4u64, 16, 64, 256] {
                queries += 1;
                let exhaustive = partitions.iter().any(|p| check_mnm(s, p, nn, mm).unwrap().is_none());
                let cut = find_mnm_partition(s, nn, mm);
                ensure!(
                    exhaustive == cut.is_some(),
                    "corpus {k} (N={nn}, M={mm}): exhaustive {exhaustive}, cuts {}",
                    cut.is_some()
                );
                if let Some(w) = cut {
                    ensure!(check_mnm(s, &w.blocks, nn, mm).unwrap().is_none(), "corpus {k}: bad witness");
                    found += 1;
                }
            }
        }
    }
    let golden = cover_golden()?;
    Ok(format!(
        "100 monotone instances ({flips} change along M), {queries} corpus queries agree ({found} witnesses), {golden} cover cases"
    ))
}

fn stripping() -> Outcome {
    let line = line_space(&[int(0), int(10), int(11), ratio(23, 2)]).unwrap();
    let f = isolation_strip(&line, &[int(5), int(1)]).unwrap();
    ensure!(f.layers == vec![vec![0], vec![1]] && f.residue == vec![2, 3], "4-point line: {:?}", f);

    // Index 0 is the point 0, index k is 1/k.
    let harmonic = |top: i64| {
        let positions: Vec<Rational> = std::iter::once(int(0)).chain((1..=top).map(|k| ratio(1, k))).collect();
        line_space(&positions).unwrap()
    };
    let thresholds = |count: i64| (1..=count).map(|t| ratio(1, t * (t + 1))).collect::<Vec<_>>();

    let full = isolation_strip(&harmonic(20), &thresholds(19)).unwrap();
    let mut expected: Vec<Vec<usize>> = (1..=19).map(|t| vec![t]).collect();
    expected[3] = vec![0, 4];
    expected[18] = vec![19, 20];
    ensure!(full.layers == expected && full.residue.is_empty(), "harmonic 20: {:?}", full.layers);

    let small = isolation_strip(&harmonic(5), &thresholds(4)).unwrap();
    ensure!(
        small.layers == vec![vec![1], vec![0, 2], vec![3], vec![4, 5]] && small.residue.is_empty(),
        "harmonic 5: {:?}",
        small.layers
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonempty = 0;
    for t in 0..100 {
        let n = rng.random_range(1..=10);
        let s = small_space(&mut rng, n);
        let mut values: Vec<Rational> = s.pairs().map(|(i, j)| s.dist(i, j).clone()).collect();
        values.push(int(1));
        let mut radii: Vec<Rational> = (0..rng.random_range(1..=4))
            .map(|_| values[rng.random_range(0..values.len())].clone())
            .collect();
        radii.sort_by(|a, b| b.cmp(a));
        radii.dedup();
        let first = isolation_strip(&s, &radii).unwrap();
        let rest = s.restrict(&first.residue);
        let again = isolation_strip(&rest, &radii).unwrap();
        ensure!(again.layers.iter().all(Vec::is_empty), "instance {t}: residue is not stable");
        ensure!(again.residue.len() == first.residue.len(), "instance {t}: residue shrank");
        if !first.residue.is_empty() {
            nonempty += 1;
        }
    }
    Ok(format!("fixtures match, 100 idempotence instances ({nonempty} with nonempty residue)"))
}

fn gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for t in 0..100 {
        let n = rng.random_range(2..=7);
        let dim = rng.random_range(1..=4);
        let s = small_space(&mut rng, n);
        let margin = rng.random_range(0.01..0.5);
        let p = Penalty::new(&s, dim, margin);
        let z: Vec<f64> = (0..p.variables()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut grad = vec![0.0; z.len()];
        let value = p.value_and_gradient(&z, &mut grad);
        ensure!((value - p.value(&z)).abs() <= 1e-12 * value.abs().max(1.0), "configuration {t}: values differ");
        let h = 1e-6;
        let mut diff2 = 0.0;
        let mut norm2 = 0.0;
        for k in 0..z.len() {
            let (mut up, mut down) = (z.clone(), z.clone());
            up[k] += h;
            down[k] -= h;
            let numeric = (p.value(&up) - p.value(&down)) / (2.0 * h);
            diff2 += (numeric - grad[k]).powi(2);
            norm2 += grad[k].powi(2);
        }
        let rel = diff2.sqrt() / norm2.sqrt().max(1e-300);
        worst = worst.max(rel);
        ensure!(rel <= 1e-5, "configuration {t}: relative error {rel:e}");
    }
    Ok(format!("100 configurations, worst relative error {worst:.1e}"))
}

fn determinism() -> Outcome {
    fn twice<T: PartialEq + std::fmt::Debug>(what: &str, f: impl Fn() -> T) -> Result<(), String> {
        let (a, b) = (f(), f());
        if a == b {
            Ok(())
        } else {
            Err(format!("{what} differs between runs"))
        }
    }
    let base = hypercube_space(&mut ChaCha8Rng::seed_from_u64(9), 14, 3);
    let tied = banded_integer_space(&mut ChaCha8Rng::seed_from_u64(9), 9, 2);
    let square = space(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]]);
    twice("hypercube sampling", || hypercube_space(&mut ChaCha8Rng::seed_from_u64(10), 12, 2))?;
    twice("permutation", || random_permutation(&mut ChaCha8Rng::seed_from_u64(10), 30))?;
    twice("embed_line_branching", || embed_line_branching(&base, 11))?;
    twice("perturb_to_injective", || perturb_to_injective(&tied, &ratio(1, 100), 12))?;
    twice("max_regular_simplex", || max_regular_simplex(&tied))?;
    twice("gh_exact", || gh_exact(&tied.restrict(&[0, 1, 2, 3, 4]), &square, DEFAULT_GH_BUDGET))?;
    twice("gh_bounds", || gh_bounds(&base, &tied))?;
    twice("find_mnm_partition", || find_mnm_partition(&base.scaled(&ratio(1, 2)), 1, 64))?;
    twice("isolation_strip", || isolation_strip(&base, &[reciprocal(2), reciprocal(4)]))?;
    let parallel = SolverOptions {
        seed: 13,
        parallel: true,
        ..SolverOptions::default()
    };
    let serial = SolverOptions {
        parallel: false,
        ..parallel.clone()
    };
    twice("solve_loose_embedding", || solve_loose_embedding(&square, 2, &parallel))?;
    ensure!(
        solve_loose_embedding(&square, 2, &parallel) == solve_loose_embedding(&square, 2, &serial),
        "parallel and serial solver runs differ"
    );
    let bounded = gh_exact(&regular_simplex(7, int(1)), &tied.restrict(&[0, 1, 2, 3, 4, 5, 6]), 50);
    twice("budgeted gh_exact", || gh_exact(&regular_simplex(7, int(1)), &tied.restrict(&[0, 1, 2, 3, 4, 5, 6]), 50))?;
    let proof = if matches!(bounded.proof, Proof::Exact) { "exact" } else { "bounds" };
    Ok(format!("11 seeded operations reproduce; budgeted GH gave {proof}"))
}
