//! Constructive containment: isotopes a cubical knot into the depth-k Menger
//! approximant M^3_1 by staged rerouting, emitting a replayable move log and
//! a self-contained certificate.
//!
//! Stage l repairs depth-l containment while preserving every shallower
//! depth: each elementary move sweeps one unit square, and a swept square
//! confined to a retained depth-(l-1) cube cannot break depths < l, because
//! retained addresses are closed under prefixes. Rerouting is done with
//! straight-segment pushes: a collinear run of r edges is displaced one unit
//! sideways by one spike followed by r-1 slides. When a stage stalls the
//! whole knot is subdivided by 3 (which preserves all established
//! containments address-for-address) and the stage is retried with finer
//! maneuvering resolution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::invariants::invariant_report;
use crate::knot::{edge_dir, edge_to_cell, CubicalKnot, Point3};
use crate::lattice::{address_of, pow3, Cell, CubeAddress, LatticePoint};
use crate::menger::{
    cell_in_approximant_scaled, containing_cubes, is_retained, refinement_lemma_check,
    MengerParams,
};
use crate::moves::{apply_move, MoveRecord};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Depth k of the target approximant M^3_1.
    pub target_depth: usize,
    /// How many times the knot may be subdivided by 3 after a stalled stage.
    pub max_autoscale: usize,
    /// Cap on simulated elementary pushes across the whole run.
    pub push_budget: usize,
    /// Consecutive non-improving accepted fixes tolerated before a stage
    /// is declared stalled.
    pub stall_limit: usize,
    /// Seed for the projection directions used by the invariant audit.
    pub seed: u64,
    /// Odd primes for the Fox coloring audit.
    pub primes: Vec<u64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            target_depth: 3,
            max_autoscale: 3,
            push_budget: 200_000,
            stall_limit: 16,
            seed: 0,
            primes: vec![3, 5, 7],
        }
    }
}

/// One entry of the replayable log. `Move` entries are elementary isotopy
/// moves; the others are the (topologically trivial) normalizations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LogEntry {
    /// Rigid translation by an integer offset.
    Translate { offset: Point3 },
    /// Reinterpretation of the grid units: the coordinates are unchanged,
    /// the domain becomes [0, 3^scale_exp]^3.
    SetScale { scale_exp: usize },
    /// Factor-3 subdivision: coordinates tripled, scale exponent bumped.
    Subdivide,
    /// An elementary spike/unspike/slide move.
    Move { record: MoveRecord },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MengerCertificate {
    pub version: u32,
    pub m: usize,
    pub n: usize,
    pub target_depth: usize,
    pub config: PipelineConfig,
    pub original: CubicalKnot,
    pub final_knot: CubicalKnot,
    pub log: Vec<LogEntry>,
    /// Per final edge, in traversal order: a retained depth-k cube having
    /// the edge on its boundary grid (lexicographically least such cube).
    pub witnesses: Vec<CubeAddress>,
    /// Identifier of the subdivision-refinement check that extends this
    /// depth-k certificate to every deeper approximant.
    pub lemma_ref: String,
    pub invariants_before: BTreeMap<u64, u64>,
    pub invariants_after: BTreeMap<u64, u64>,
    pub sha256: String,
}

impl MengerCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(format!("bad JSON: {e}")))
    }

    /// Hash of the certificate body with the hash field blanked.
    pub fn content_hash(&self) -> String {
        let mut body = self.clone();
        body.sha256 = String::new();
        let bytes = serde_json::to_vec(&body).expect("certificate serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn neg(d: (u8, i8)) -> (u8, i8) {
    (d.0, -d.1)
}

fn step(p: Point3, d: (u8, i8), times: i64) -> Point3 {
    let mut q = p;
    q[d.0 as usize] += d.1 as i64 * times;
    q
}

/// Displaces the straight run of `r` edges starting at vertex `v0` (first
/// edge direction `ea`) one unit along `w`, keeping the run endpoints fixed.
/// Realized as one spike and r-1 slides; sweeps exactly the r unit squares
/// between the old and new positions.
fn push_run(
    knot: &CubicalKnot,
    v0: Point3,
    ea: (u8, i8),
    r: usize,
    w: (u8, i8),
) -> Result<(CubicalKnot, Vec<MoveRecord>)> {
    let mut cur = knot.clone();
    let mut recs = Vec::with_capacity(r);
    let mv = MoveRecord::spike(v0, ea, w);
    cur = apply_move(&cur, &mv)?;
    recs.push(mv);
    for t in 1..r {
        let anchor = step(v0, ea, t as i64);
        let mv = MoveRecord::slide(anchor, neg(w), ea);
        cur = apply_move(&cur, &mv)?;
        recs.push(mv);
    }
    Ok((cur, recs))
}

/// The maximal straight run of edges through edge `b`: start vertex index,
/// first-edge direction, and edge count.
fn straight_run(knot: &CubicalKnot, b: usize, bad_only: Option<&[usize]>) -> (usize, (u8, i8), usize) {
    let n = knot.vertices.len();
    let dir_of = |i: usize| {
        let a = knot.vertices[i % n];
        let c = knot.vertices[(i + 1) % n];
        edge_dir(&a, &c).expect("unit edge")
    };
    let is_ok = |i: usize| {
        dir_of(i) == dir_of(b) && bad_only.is_none_or(|bad| bad.contains(&(i % n)))
    };
    let mut start = b;
    let mut r = 1usize;
    while r < n - 2 && is_ok(start + n - 1) {
        start = (start + n - 1) % n;
        r += 1;
    }
    let mut end = b;
    while r < n - 2 && is_ok(end + 1) {
        end = (end + 1) % n;
        r += 1;
    }
    (start, dir_of(b), r)
}

struct Candidate {
    knot: CubicalKnot,
    recs: Vec<MoveRecord>,
    bad_after: usize,
}

/// One greedy fix for stage `l`: finds the best legal push of a straight run
/// through a bad edge. Candidates are scored geometrically (occupancy
/// lookups plus a local bad-edge delta); only the winner is materialized into
/// real moves. Returns the number of push layers examined.
fn stage_fix(
    knot: &CubicalKnot,
    l: usize,
    bad: &[usize],
    budget_left: usize,
) -> Result<(Option<Candidate>, usize)> {
    let params = MengerParams::new(3, 1, l)?;
    let coarse = if l >= 2 { Some(MengerParams::new(3, 1, l - 1)?) } else { None };
    let s = knot.scale_exp;
    let side = pow3(s);
    let occupied = knot.vertex_set();
    // candidate runs through every bad edge, deduplicated; tight runs (bad
    // edges only) come first so ties favor minimal disturbance
    let mut runs: Vec<(usize, (u8, i8), usize)> = Vec::new();
    for &b in bad {
        for run in [straight_run(knot, b, Some(bad)), straight_run(knot, b, None)] {
            if !runs.contains(&run) {
                runs.push(run);
            }
        }
    }
    let d_max = pow3(s - l + 1) as usize;
    let edge_good = |a: Point3, c: Point3| -> Result<bool> {
        cell_in_approximant_scaled(&edge_to_cell(&a, &c), s, &params)
    };
    let in_domain = |p: &Point3| p.iter().all(|&c| c >= 0 && c <= side);

    // best = (bad_after, d, tie break) plus (run start, ea, r, w, d)
    type Key = (usize, usize, usize);
    type Best = (Key, usize, (u8, i8), usize, (u8, i8), usize);
    let mut best: Option<Best> = None;
    let mut spent = 0usize;

    'runs: for (run_ix, &(start, ea, r)) in runs.iter().enumerate() {
        // positions of the run vertices v_0..v_r
        let v: Vec<Point3> = (0..=r as i64).map(|t| step(knot.vertices[start], ea, t)).collect();
        let bad_removed = (0..r)
            .filter(|t| bad.contains(&((start + t) % knot.vertices.len())))
            .count();
        let dirs: Vec<(u8, i8)> = (0..3u8)
            .filter(|&a| a != ea.0)
            .flat_map(|a| [(a, 1i8), (a, -1i8)])
            .collect();
        for (w_ix, &w) in dirs.iter().enumerate() {
            // bad count among riser edges accumulated across layers
            let mut riser_bad = 0usize;
            for d in 1..=d_max {
                if spent >= budget_left {
                    break 'runs;
                }
                spent += 1;
                // layer d: all displaced vertices must be free and in range
                let layer: Vec<Point3> =
                    v.iter().map(|p| step(*p, w, d as i64)).collect();
                if layer.iter().any(|p| !in_domain(p) || occupied.contains(p)) {
                    break; // larger d sweeps through the same obstacle
                }
                // swept squares between layers d-1 and d must not disturb
                // depths below l
                if let Some(coarse) = &coarse {
                    let mut confined = true;
                    for vt in &v[..r] {
                        let p = step(*vt, w, (d - 1) as i64);
                        let square = unit_square_cell(p, ea, w);
                        if !cell_in_approximant_scaled(&square, s, coarse)? {
                            confined = false;
                            break;
                        }
                    }
                    if !confined {
                        break;
                    }
                }
                // local score: riser edges grow by one on each side, the top
                // run lands at offset d; everything else is unchanged
                for p in [v[0], v[r]] {
                    let a = step(p, w, (d - 1) as i64);
                    let c = step(p, w, d as i64);
                    if !edge_good(a, c)? {
                        riser_bad += 1;
                    }
                }
                let mut top_bad = 0usize;
                for t in 0..r {
                    if !edge_good(layer[t], layer[t + 1])? {
                        top_bad += 1;
                    }
                }
                let bad_after = bad.len() - bad_removed + riser_bad + top_bad;
                let key: Key = (bad_after, d, w_ix + dirs.len() * run_ix);
                if best.as_ref().is_none_or(|(k, ..)| key < *k) {
                    best = Some((key, start, ea, r, w, d));
                }
            }
        }
    }

    // materialize the winning candidate as real moves, one layer at a time
    let Some((key, start, ea, r, w, d)) = best else {
        return Ok((None, spent));
    };
    let mut cur = knot.clone();
    let mut base = knot.vertices[start];
    let mut recs = Vec::new();
    for _ in 0..d {
        let (next, layer_recs) = push_run(&cur, base, ea, r, w)?;
        cur = next;
        base = step(base, w, 1);
        recs.extend(layer_recs);
    }
    debug_assert_eq!(cur.bad_edges(&params)?.len(), key.0);
    Ok((Some(Candidate { knot: cur, recs, bad_after: key.0 }), spent))
}

/// Canonical 2-cell spanned by `p`, `p+ea`, `p+w`, `p+ea+w`.
fn unit_square_cell(p: Point3, ea: (u8, i8), w: (u8, i8)) -> Cell {
    let mut corner = p;
    if ea.1 < 0 {
        corner[ea.0 as usize] -= 1;
    }
    if w.1 < 0 {
        corner[w.0 as usize] -= 1;
    }
    Cell::new(LatticePoint::new(corner.to_vec()), vec![ea.0, w.0]).expect("unit square")
}

/// Brings the knot into [0, 3^s]^3 with s >= target_depth, logging the
/// normalization steps.
fn normalize(knot: &CubicalKnot, target_depth: usize, log: &mut Vec<LogEntry>) -> CubicalKnot {
    let (lo, _) = knot.bounds();
    let mut cur = knot.clone();
    if lo != [0, 0, 0] {
        let offset = [-lo[0], -lo[1], -lo[2]];
        cur = cur.translate(offset);
        log.push(LogEntry::Translate { offset });
    }
    let (_, hi) = cur.bounds();
    let extent = hi.iter().copied().max().unwrap_or(0);
    let mut s = cur.scale_exp;
    while pow3(s) < extent {
        s += 1;
    }
    if s != cur.scale_exp {
        cur.scale_exp = s;
        log.push(LogEntry::SetScale { scale_exp: s });
    }
    while cur.scale_exp < target_depth {
        cur = cur.subdivide();
        log.push(LogEntry::Subdivide);
    }
    cur
}

/// Isotopes `knot` into the depth-k approximant M^3_1 and certifies the
/// result. Deterministic for a fixed input and configuration.
pub fn embed_in_menger(knot: &CubicalKnot, config: &PipelineConfig) -> Result<MengerCertificate> {
    knot.validate().map_err(|v| Error::InvalidKnot(v.to_string()))?;
    if config.target_depth == 0 {
        return Err(Error::Parameter("target depth must be >= 1".into()));
    }
    let invariants_before = invariant_report(knot, &config.primes, config.seed)?;

    let mut log = Vec::new();
    let mut cur = normalize(knot, config.target_depth, &mut log);
    let mut budget = config.push_budget;

    let mut autoscale_used = 0usize;
    'attempt: loop {
        let mut stalled = false;
        'stages: for l in 1..=config.target_depth {
            let params = MengerParams::new(3, 1, l)?;
            let mut stall = 0usize;
            loop {
                let bad = cur.bad_edges(&params)?;
                if bad.is_empty() {
                    continue 'stages;
                }
                if budget == 0 {
                    return Err(Error::Pipeline(
                        "push budget exhausted before reaching the target depth".into(),
                    ));
                }
                let (cand, spent) = stage_fix(&cur, l, &bad, budget)?;
                budget = budget.saturating_sub(spent);
                if std::env::var_os("MENGER_KNOTS_TRACE").is_some() {
                    eprintln!(
                        "trace: l={l} s={} edges={} bad={} cand={:?} stall={stall}",
                        cur.scale_exp,
                        cur.vertices.len(),
                        bad.len(),
                        cand.as_ref().map(|c| c.bad_after),
                    );
                }
                let Some(cand) = cand else {
                    stalled = true;
                    break 'stages;
                };
                // apply only pushes that improve the bad-edge count, or hold
                // it level a bounded number of times; a best candidate that
                // makes things worse means this resolution is too tight
                if cand.bad_after < bad.len() {
                    stall = 0;
                } else if cand.bad_after == bad.len() && stall < config.stall_limit {
                    stall += 1;
                } else {
                    stalled = true;
                    break 'stages;
                }
                for mv in &cand.recs {
                    log.push(LogEntry::Move { record: *mv });
                }
                cur = cand.knot;
            }
        }
        if !stalled {
            break 'attempt;
        }
        if autoscale_used >= config.max_autoscale {
            return Err(Error::Pipeline(format!(
                "stage stalled after {autoscale_used} subdivisions; giving up"
            )));
        }
        autoscale_used += 1;
        cur = cur.subdivide();
        log.push(LogEntry::Subdivide);
    }

    let target = MengerParams::new(3, 1, config.target_depth)?;
    debug_assert!(cur.in_approximant(&target)?);

    let witnesses = edge_witnesses(&cur, &target)?;
    let lemma = refinement_lemma_check(3, 1)?;
    if !lemma.holds() {
        return Err(Error::Pipeline("refinement check found a counterexample".into()));
    }
    let invariants_after = invariant_report(&cur, &config.primes, config.seed)?;
    if invariants_after != invariants_before {
        return Err(Error::Pipeline(format!(
            "invariant audit changed: {invariants_before:?} -> {invariants_after:?}"
        )));
    }

    let mut cert = MengerCertificate {
        version: 1,
        m: 3,
        n: 1,
        target_depth: config.target_depth,
        config: config.clone(),
        original: knot.clone(),
        final_knot: cur,
        log,
        witnesses,
        lemma_ref: lemma.id(),
        invariants_before,
        invariants_after,
        sha256: String::new(),
    };
    cert.sha256 = cert.content_hash();
    Ok(cert)
}

/// For each edge, the lexicographically least retained depth-k cube
/// containing it.
fn edge_witnesses(knot: &CubicalKnot, params: &MengerParams) -> Result<Vec<CubeAddress>> {
    let mut out = Vec::with_capacity(knot.vertices.len());
    for i in 0..knot.vertices.len() {
        let cell = knot.edge_cell(i);
        let mut corners: Vec<Vec<i64>> = containing_cubes(&cell, knot.scale_exp, params.k)?;
        corners.sort();
        let witness = corners
            .into_iter()
            .map(|c| address_of(&LatticePoint::new(c), params.k))
            .find_map(|a| match a {
                Ok(addr) if is_retained(&addr, params.n) => Some(addr),
                _ => None,
            })
            .ok_or_else(|| {
                Error::Certificate(format!("edge {i} has no retained containing cube"))
            })?;
        out.push(witness);
    }
    Ok(out)
}

fn replay(original: &CubicalKnot, log: &[LogEntry]) -> Result<CubicalKnot> {
    let mut cur = original.clone();
    for (i, entry) in log.iter().enumerate() {
        cur = match entry {
            LogEntry::Translate { offset } => cur.translate(*offset),
            LogEntry::SetScale { scale_exp } => {
                let mut k = cur.clone();
                k.scale_exp = *scale_exp;
                if !k.in_domain() {
                    return Err(Error::Certificate(format!(
                        "log entry {i}: rescaled knot leaves the domain"
                    )));
                }
                k
            }
            LogEntry::Subdivide => cur.subdivide(),
            LogEntry::Move { record } => apply_move(&cur, record)
                .map_err(|e| Error::Certificate(format!("log entry {i}: {e}")))?,
        };
    }
    Ok(cur)
}

/// Full independent check of a certificate: hash, knot validity, move-by-move
/// replay of the log, witness containment for every final edge, and the
/// invariant audit recomputed from scratch.
pub fn verify_certificate(cert: &MengerCertificate) -> Result<()> {
    if cert.version != 1 {
        return Err(Error::Certificate(format!("unsupported version {}", cert.version)));
    }
    if cert.m != 3 || cert.n != 1 {
        return Err(Error::Certificate(format!(
            "certificates cover M^3_1 only, got m={} n={}",
            cert.m, cert.n
        )));
    }
    if cert.sha256 != cert.content_hash() {
        return Err(Error::Certificate("content hash mismatch".into()));
    }
    cert.original
        .validate()
        .map_err(|v| Error::Certificate(format!("original knot: {v}")))?;
    cert.final_knot
        .validate()
        .map_err(|v| Error::Certificate(format!("final knot: {v}")))?;

    let replayed = replay(&cert.original, &cert.log)?;
    if replayed.vertices != cert.final_knot.vertices
        || replayed.scale_exp != cert.final_knot.scale_exp
    {
        return Err(Error::Certificate("log replay does not reproduce the final knot".into()));
    }
    if !cert.final_knot.in_domain() {
        return Err(Error::Certificate("final knot leaves the domain".into()));
    }

    let k = cert.target_depth;
    let s = cert.final_knot.scale_exp;
    if k > s {
        return Err(Error::Certificate("target depth exceeds final scale".into()));
    }
    let n_edges = cert.final_knot.vertices.len();
    if cert.witnesses.len() != n_edges {
        return Err(Error::Certificate(format!(
            "expected {n_edges} witnesses, found {}",
            cert.witnesses.len()
        )));
    }
    let t = pow3(s - k);
    for (i, addr) in cert.witnesses.iter().enumerate() {
        if !addr.is_well_formed() || addr.depth() != k || addr.ambient_dim() != Some(3) {
            return Err(Error::Certificate(format!("witness {i} is malformed")));
        }
        if !is_retained(addr, cert.n) {
            return Err(Error::Certificate(format!("witness {i} names a removed cube")));
        }
        let corner = addr.corner().coords;
        let cell = cert.final_knot.edge_cell(i);
        for (j, &cj) in corner.iter().enumerate() {
            let lo = cell.corner.coords[j];
            let hi = lo + i64::from(cell.axes.contains(&(j as u8)));
            if lo < cj * t || hi > (cj + 1) * t {
                return Err(Error::Certificate(format!(
                    "witness {i} does not contain edge {i}"
                )));
            }
        }
    }

    let primes: Vec<u64> = cert.invariants_before.keys().copied().collect();
    let seed = cert.config.seed;
    let before = invariant_report(&cert.original, &primes, seed)?;
    let after = invariant_report(&cert.final_knot, &primes, seed)?;
    if before != cert.invariants_before {
        return Err(Error::Certificate("stored input invariants do not recompute".into()));
    }
    if after != cert.invariants_after {
        return Err(Error::Certificate("stored output invariants do not recompute".into()));
    }
    if before != after {
        return Err(Error::Certificate("invariant audit mismatch across the isotopy".into()));
    }
    Ok(())
}
