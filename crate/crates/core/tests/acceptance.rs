//! End-to-end acceptance gate. Each test covers one criterion, enforces its
//! time budget, and prints a single pass line on success.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use menger_knots::knot::unit_square;
use menger_knots::lattice::{Cell, LatticePoint};
use menger_knots::menger::{
    cell_in_approximant, enumerate_retained, refinement_lemma_check, retained_count,
    touches_n_skeleton,
};
use menger_knots::moves::{apply_move, random_legal_move};
use menger_knots::{
    embed_in_menger, invariant_report, verify_certificate, CubicalKnot, MengerParams,
    PipelineConfig,
};

fn knot_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../knots")
        .join(name)
}

fn load_knot(name: &str) -> CubicalKnot {
    let text = std::fs::read_to_string(knot_path(name)).expect("bundled knot file");
    CubicalKnot::from_file_str(&text).unwrap().validated().unwrap()
}

fn finish(name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "{name}: took {elapsed:?}, budget {budget:?}"
    );
    println!("acceptance {name}: pass ({elapsed:?})");
}

#[test]
fn retention_counts() {
    let start = Instant::now();
    assert_eq!(
        retained_count(&MengerParams::new(3, 1, 1).unwrap()),
        BigUint::from(20u32)
    );
    for k in 0..=4usize {
        let params = MengerParams::new(3, 1, k).unwrap();
        assert_eq!(
            retained_count(&params),
            BigUint::from(20u32).pow(k as u32),
            "k={k}"
        );
        // enumeration agrees with the closed form at desk scale
        if k <= 3 {
            assert_eq!(
                BigUint::from(enumerate_retained(&params).count()),
                retained_count(&params)
            );
        }
    }
    assert_eq!(
        retained_count(&MengerParams::new(4, 2, 1).unwrap()),
        BigUint::from(72u32)
    );
    finish("retention counts", start, Duration::from_secs(10));
}

#[test]
fn incidence_counts() {
    let start = Instant::now();
    let v3 = Cell::vertex(LatticePoint::new(vec![0, 0, 0]));
    assert_eq!(v3.incident_cells(1).unwrap().len(), 6);
    assert_eq!(v3.incident_cells(2).unwrap().len(), 12);
    assert_eq!(v3.incident_cells(3).unwrap().len(), 8);
    let e3 = Cell::new(LatticePoint::new(vec![0, 0, 0]), vec![0]).unwrap();
    assert_eq!(e3.incident_cells(2).unwrap().len(), 4);
    assert_eq!(e3.incident_cells(3).unwrap().len(), 4);
    let v4 = Cell::vertex(LatticePoint::new(vec![0, 0, 0, 0]));
    assert_eq!(v4.incident_cells(1).unwrap().len(), 8);
    assert_eq!(v4.incident_cells(2).unwrap().len(), 24);
    assert_eq!(v4.incident_cells(3).unwrap().len(), 32);
    assert_eq!(v4.incident_cells(4).unwrap().len(), 16);
    // per-edge counts in dimension 4, by direct enumeration
    let e4 = Cell::new(LatticePoint::new(vec![0, 0, 0, 0]), vec![0]).unwrap();
    assert_eq!(e4.incident_cells(2).unwrap().len(), 6);
    assert_eq!(e4.incident_cells(3).unwrap().len(), 12);
    assert_eq!(e4.incident_cells(4).unwrap().len(), 8);
    finish("incidence counts", start, Duration::from_secs(1));
}

#[test]
fn digit_rule_matches_geometry() {
    let start = Instant::now();
    // A depth-1 subcube survives iff it meets the closed n-skeleton of the
    // parent cube. Geometric side: a subcube with digit vector d meets the
    // n-skeleton iff at most n coordinates of d equal 1 (the skeleton pins
    // at least m-n coordinates of [0,3]^m to {0,3}).
    for (m, n) in [(3usize, 1usize), (3, 2), (4, 1), (4, 2)] {
        let mut digits = vec![0u8; m];
        loop {
            let rule = touches_n_skeleton(&digits, n);
            // geometry: the subcube [d, d+1]^m meets a face of the parent
            // where >= m-n coordinates are pinned to 0 or 3
            let free = digits.iter().filter(|&&d| d == 1).count();
            let geometric = free <= n;
            assert_eq!(rule, geometric, "m={m} n={n} digits={digits:?}");
            // odometer over {0,1,2}^m
            let mut i = 0;
            while i < m {
                digits[i] += 1;
                if digits[i] < 3 {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        // cross-check the full membership predicate against enumeration at
        // depth 1: retained cubes are exactly those passing the digit rule
        let params = MengerParams::new(m, n, 1).unwrap();
        let retained: Vec<Vec<i64>> = enumerate_retained(&params)
            .map(|a| a.corner().coords)
            .collect();
        let mut corner = vec![0i64; m];
        loop {
            let cube = Cell::cube(LatticePoint::new(corner.clone()));
            let member = cell_in_approximant(&cube, &params).unwrap();
            assert_eq!(member, retained.contains(&corner), "m={m} n={n} {corner:?}");
            let mut i = 0;
            while i < m {
                corner[i] += 1;
                if corner[i] < 3 {
                    break;
                }
                corner[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    finish("digit rule vs geometry", start, Duration::from_secs(1));
}

#[test]
fn refinement_check() {
    let start = Instant::now();
    for (m, n) in [(3usize, 1usize), (4, 1), (4, 2), (5, 3)] {
        let report = refinement_lemma_check(m, n).unwrap();
        assert!(report.holds(), "m={m} n={n}: {:?}", report.counterexamples);
        assert!(report.faces_checked > 0 && report.sub_faces_checked > 0);
    }
    finish("refinement check", start, Duration::from_secs(60));
}

#[test]
fn pipeline_embeds_corpus() {
    let knots: Vec<(&str, CubicalKnot)> = vec![
        ("square", unit_square()),
        ("trefoil", load_knot("trefoil.knot")),
        ("figure8", load_knot("figure8.knot")),
    ];
    let primes = [3u64, 5, 7];
    for (name, knot) in knots {
        let start = Instant::now();
        let cfg = PipelineConfig { target_depth: 3, ..PipelineConfig::default() };
        let before = invariant_report(&knot, &primes, cfg.seed).unwrap();
        let cert = embed_in_menger(&knot, &cfg).unwrap();
        verify_certificate(&cert).unwrap();
        for k in 1..=3usize {
            let p = MengerParams::new(3, 1, k).unwrap();
            assert!(
                cert.final_knot.in_approximant(&p).unwrap(),
                "{name}: containment fails at depth {k}"
            );
        }
        // one triadic subdivision must stay contained one level deeper
        let finer = cert.final_knot.subdivide();
        let p4 = MengerParams::new(3, 1, 4).unwrap();
        assert!(finer.in_approximant(&p4).unwrap(), "{name}: depth-4 extension");
        let after = invariant_report(&cert.final_knot, &primes, cfg.seed).unwrap();
        assert_eq!(before, after, "{name}: Fox colorings changed");
        finish(&format!("pipeline [{name}]"), start, Duration::from_secs(300));
    }
    // expected coloring profiles of the bundled corpus
    let expect = |k: &CubicalKnot, want: [(u64, u64); 3]| {
        let got = invariant_report(k, &primes, 0).unwrap();
        assert_eq!(got, BTreeMap::from(want));
    };
    expect(&unit_square(), [(3, 3), (5, 5), (7, 7)]);
    expect(&load_knot("trefoil.knot"), [(3, 9), (5, 5), (7, 7)]);
    expect(&load_knot("figure8.knot"), [(3, 3), (5, 25), (7, 7)]);
}

#[test]
fn move_fuzz() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut knot = load_knot("trefoil.knot");
    let mut applied = 0usize;
    while applied < 10_000 {
        let mv = random_legal_move(&knot, &mut rng).expect("a legal move exists");
        let next = apply_move(&knot, &mv).unwrap();
        next.validate().unwrap_or_else(|v| panic!("move {applied} broke the knot: {v}"));
        // every legal move must be invertible; a spike removed across the
        // vertex-list wrap point restores the cycle with a rotated basepoint
        let back = apply_move(&next, &mv.inverse()).unwrap();
        assert!(back.cyclically_equal(&knot), "move {applied} not invertible");
        knot = next;
        applied += 1;
    }
    finish("move fuzz (10000 moves)", start, Duration::from_secs(120));
}

#[test]
fn determinism() {
    let start = Instant::now();
    let knot = load_knot("trefoil.knot");
    let cfg = PipelineConfig { target_depth: 2, ..PipelineConfig::default() };
    let a = embed_in_menger(&knot, &cfg).unwrap().to_json();
    let b = embed_in_menger(&knot, &cfg).unwrap().to_json();
    assert_eq!(a, b, "certificates differ between runs");
    let ra = invariant_report(&knot, &[3, 5, 7], 7).unwrap();
    let rb = invariant_report(&knot, &[3, 5, 7], 7).unwrap();
    assert_eq!(ra, rb);
    finish("determinism", start, Duration::from_secs(300));
}
