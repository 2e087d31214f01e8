//! Knot-type evidence: generic projection of a cubical knot to a crossing
//! diagram and Fox p-coloring counts. All crossing arithmetic is exact
//! integer/rational; degenerate directions are rejected, never perturbed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{CubicalKnot, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub over_arc: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotDiagram {
    pub crossings: Vec<Crossing>,
    pub arcs: usize,
    /// Crossing visits in traversal order: (crossing index, passes over).
    pub traversal: Vec<(usize, bool)>,
}

impl KnotDiagram {
    pub fn unknotted() -> Self {
        KnotDiagram { crossings: Vec::new(), arcs: 1, traversal: Vec::new() }
    }

    /// Debug dump: `O1+ U2- ...` in traversal order.
    pub fn gauss_code(&self) -> String {
        let mut parts = Vec::new();
        for &(c, over) in &self.traversal {
            let sign = if self.crossings[c].sign >= 0 { '+' } else { '-' };
            parts.push(format!("{}{}{}", if over { 'O' } else { 'U' }, c + 1, sign));
        }
        parts.join(" ")
    }
}

fn dot(a: &Point3, b: &Point3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &Point3, b: &Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn cross2(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// An exact projection frame: two integer vectors spanning the plane
/// orthogonal to the viewing direction.
fn frame(direction: &Point3) -> Result<(Point3, Point3)> {
    if *direction == [0, 0, 0] {
        return Err(Error::Parameter("projection direction must be nonzero".into()));
    }
    let axes = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let u = axes
        .iter()
        .map(|e| cross3(direction, e))
        .find(|u| *u != [0, 0, 0])
        .expect("nonzero direction has a non-parallel axis");
    let v = cross3(direction, &u);
    Ok((u, v))
}

/// Exact parameter location of a crossing along the knot: edge index plus a
/// rational offset num/den in (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ParamPos {
    edge: usize,
    num: i64,
    den: i64, // > 0
}

fn param_less(a: &ParamPos, b: &ParamPos) -> bool {
    if a.edge != b.edge {
        return a.edge < b.edge;
    }
    (a.num as i128) * (b.den as i128) < (b.num as i128) * (a.den as i128)
}

#[derive(Debug)]
struct RawCrossing {
    over_pos: ParamPos,
    under_pos: ParamPos,
    sign: i8,
    // exact projected location, for triple-point detection: (x*lcm, y*lcm, lcm)
    point: (i128, i128, i128),
}

/// Projects the knot along `direction` and extracts the crossing diagram.
/// Degenerate directions (edge parallel to the view, collinear overlaps,
/// crossings at projected vertices, triple points) are rejected with the
/// offending edge pair named.
pub fn project(knot: &CubicalKnot, direction: &Point3) -> Result<KnotDiagram> {
    knot.validate().map_err(|v| Error::InvalidKnot(v.to_string()))?;
    let (u, v) = frame(direction)?;
    let n = knot.vertices.len();
    let proj: Vec<(i64, i64)> = knot
        .vertices
        .iter()
        .map(|p| (dot(p, &u), dot(p, &v)))
        .collect();
    let height: Vec<i64> = knot.vertices.iter().map(|p| dot(p, direction)).collect();

    // every edge must remain a segment
    for i in 0..n {
        let j = (i + 1) % n;
        if proj[i] == proj[j] {
            return Err(Error::Degenerate(format!(
                "edge {i} is parallel to the projection direction"
            )));
        }
    }

    let mut raw: Vec<RawCrossing> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let p1 = proj[i];
            let p2 = proj[(i + 1) % n];
            let q1 = proj[j];
            let q2 = proj[(j + 1) % n];
            let r = (p2.0 - p1.0, p2.1 - p1.1);
            let s = (q2.0 - q1.0, q2.1 - q1.1);
            let rxs = cross2(r, s);
            let qp = (q1.0 - p1.0, q1.1 - p1.1);
            if rxs == 0 {
                if cross2(qp, r) != 0 {
                    continue; // parallel, different lines
                }
                // collinear: project onto r and compare intervals
                let rr = r.0 * r.0 + r.1 * r.1;
                let t0 = qp.0 * r.0 + qp.1 * r.1;
                let t1 = t0 + (s.0 * r.0 + s.1 * r.1);
                let (lo, hi) = (t0.min(t1), t0.max(t1));
                let overlap_lo = lo.max(0);
                let overlap_hi = hi.min(rr);
                if adjacent {
                    // shared endpoint; any further overlap is a fold-back
                    if overlap_hi - overlap_lo > 0 {
                        return Err(Error::Degenerate(format!(
                            "edges {i} and {j} fold back collinearly in projection"
                        )));
                    }
                } else if overlap_hi >= overlap_lo {
                    return Err(Error::Degenerate(format!(
                        "edges {i} and {j} overlap collinearly in projection"
                    )));
                }
                continue;
            }
            if adjacent {
                continue;
            }
            // t on edge i, w on edge j; intersection iff both in [0,1]
            let t_num = cross2(qp, s);
            let w_num = cross2(qp, r);
            let (t_num, w_num, den) = if rxs > 0 {
                (t_num, w_num, rxs)
            } else {
                (-t_num, -w_num, -rxs)
            };
            if t_num < 0 || t_num > den || w_num < 0 || w_num > den {
                continue;
            }
            if t_num == 0 || t_num == den || w_num == 0 || w_num == den {
                return Err(Error::Degenerate(format!(
                    "edges {i} and {j} cross at a projected vertex"
                )));
            }
            // heights at the intersection, common denominator `den`
            let hi1 = height[i] as i128 * (den - t_num) as i128
                + height[(i + 1) % n] as i128 * t_num as i128;
            let hj1 = height[j] as i128 * (den - w_num) as i128
                + height[(j + 1) % n] as i128 * w_num as i128;
            debug_assert_ne!(hi1, hj1, "embedded edges cannot share a 3-space point");
            let i_over = hi1 > hj1;
            let (over_edge, over_num, under_edge, under_num) = if i_over {
                (i, t_num, j, w_num)
            } else {
                (j, w_num, i, t_num)
            };
            let (over_dir, under_dir) = if i_over { (r, s) } else { (s, r) };
            let sign = if cross2(over_dir, under_dir) > 0 { 1 } else { -1 };
            // exact projected point with denominator den
            let px = p1.0 as i128 * den as i128 + r.0 as i128 * t_num as i128;
            let py = p1.1 as i128 * den as i128 + r.1 as i128 * t_num as i128;
            raw.push(RawCrossing {
                over_pos: ParamPos { edge: over_edge, num: over_num, den },
                under_pos: ParamPos { edge: under_edge, num: under_num, den },
                sign,
                point: (px, py, den as i128),
            });
        }
    }

    // triple points: two crossings at the same exact projected location
    for a in 0..raw.len() {
        for b in a + 1..raw.len() {
            let (x1, y1, d1) = raw[a].point;
            let (x2, y2, d2) = raw[b].point;
            if x1 * d2 == x2 * d1 && y1 * d2 == y2 * d1 {
                return Err(Error::Degenerate("triple point in projection".into()));
            }
        }
    }

    if raw.is_empty() {
        return Ok(KnotDiagram::unknotted());
    }

    // order all crossing visits along the knot
    #[derive(Clone, Copy)]
    struct Event {
        pos: ParamPos,
        crossing: usize,
        over: bool,
    }
    let mut events = Vec::with_capacity(raw.len() * 2);
    for (c, rc) in raw.iter().enumerate() {
        events.push(Event { pos: rc.over_pos, crossing: c, over: true });
        events.push(Event { pos: rc.under_pos, crossing: c, over: false });
    }
    events.sort_by(|a, b| {
        if param_less(&a.pos, &b.pos) {
            std::cmp::Ordering::Less
        } else if param_less(&b.pos, &a.pos) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });

    // arcs split at under events; arc index = number of under events passed,
    // with the arc after the last under event wrapping to index 0
    let total_unders = raw.len();
    let mut arc = 0usize; // arc containing the traversal start (wraps to 0)
    let mut over_arc = vec![usize::MAX; raw.len()];
    let mut under_in = vec![usize::MAX; raw.len()];
    let mut under_out = vec![usize::MAX; raw.len()];
    let mut unders_seen = 0usize;
    let mut traversal = Vec::with_capacity(events.len());
    for ev in &events {
        traversal.push((ev.crossing, ev.over));
        if ev.over {
            over_arc[ev.crossing] = arc;
        } else {
            under_in[ev.crossing] = arc;
            unders_seen += 1;
            arc = if unders_seen == total_unders { 0 } else { unders_seen };
            under_out[ev.crossing] = arc;
        }
    }

    let crossings: Vec<Crossing> = (0..raw.len())
        .map(|c| Crossing {
            over_arc: over_arc[c],
            under_in: under_in[c],
            under_out: under_out[c],
            sign: raw[c].sign,
        })
        .collect();
    Ok(KnotDiagram { crossings, arcs: total_unders, traversal })
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Number of Fox p-colorings: functions arcs -> Z/p with
/// 2*over = under_in + under_out (mod p) at every crossing. Computed as
/// p^(nullity) by exact Gaussian elimination mod p.
pub fn fox_colorings(diagram: &KnotDiagram, p: u64) -> Result<u64> {
    if !is_odd_prime(p) {
        return Err(Error::Parameter(format!("{p} is not an odd prime")));
    }
    let arcs = diagram.arcs;
    let mut rows: Vec<Vec<u64>> = diagram
        .crossings
        .iter()
        .map(|c| {
            let mut row = vec![0u64; arcs];
            row[c.over_arc] = (row[c.over_arc] + 2) % p;
            row[c.under_in] = (row[c.under_in] + p - 1) % p;
            row[c.under_out] = (row[c.under_out] + p - 1) % p;
            row
        })
        .collect();

    let mut rank = 0usize;
    for col in 0..arcs {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_inverse(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    let sub = pv * f % p;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    let nullity = arcs - rank;
    Ok(p.pow(nullity as u32))
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Projects with seeded random directions, retrying on degeneracy, and
/// returns Fox coloring counts per prime. Deterministic given the seed.
pub fn invariant_report(
    knot: &CubicalKnot,
    primes: &[u64],
    seed: u64,
) -> Result<BTreeMap<u64, u64>> {
    let diagram = project_generic(knot, seed)?;
    let mut out = BTreeMap::new();
    for &p in primes {
        out.insert(p, fox_colorings(&diagram, p)?);
    }
    Ok(out)
}

/// Seeded retry loop around [`project`]; directions are small random
/// integer vectors, the knot itself is never perturbed.
pub fn project_generic(knot: &CubicalKnot, seed: u64) -> Result<KnotDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = None;
    for _ in 0..64 {
        let direction: Point3 = [
            rng.gen_range(-9..=9),
            rng.gen_range(-9..=9),
            rng.gen_range(-9..=9),
        ];
        if direction.iter().filter(|&&c| c != 0).count() < 2 {
            continue; // axis or zero directions are degenerate for lattice knots
        }
        match project(knot, &direction) {
            Ok(d) => return Ok(d),
            Err(e @ Error::Degenerate(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Degenerate("no generic direction found".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::unit_square;

    /// Brute-force oracle: count colorings by enumerating all p^arcs maps.
    fn fox_brute(diagram: &KnotDiagram, p: u64) -> u64 {
        let arcs = diagram.arcs;
        let total = (p as u128).pow(arcs as u32);
        let mut count = 0;
        for mut x in 0..total {
            let mut coloring = vec![0u64; arcs];
            for c in coloring.iter_mut() {
                *c = (x % p as u128) as u64;
                x /= p as u128;
            }
            let ok = diagram.crossings.iter().all(|c| {
                (2 * coloring[c.over_arc]) % p
                    == (coloring[c.under_in] + coloring[c.under_out]) % p
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    fn trefoil_diagram() -> KnotDiagram {
        // standard alternating 3-crossing diagram
        KnotDiagram {
            crossings: vec![
                Crossing { over_arc: 0, under_in: 1, under_out: 2, sign: 1 },
                Crossing { over_arc: 1, under_in: 2, under_out: 0, sign: 1 },
                Crossing { over_arc: 2, under_in: 0, under_out: 1, sign: 1 },
            ],
            arcs: 3,
            traversal: vec![(0, true), (1, false), (2, true), (0, false), (1, true), (2, false)],
        }
    }

    fn figure_eight_diagram() -> KnotDiagram {
        // standard 4-crossing diagram
        KnotDiagram {
            crossings: vec![
                Crossing { over_arc: 2, under_in: 0, under_out: 1, sign: 1 },
                Crossing { over_arc: 0, under_in: 2, under_out: 3, sign: -1 },
                Crossing { over_arc: 3, under_in: 1, under_out: 2, sign: 1 },
                Crossing { over_arc: 1, under_in: 3, under_out: 0, sign: -1 },
            ],
            arcs: 4,
            traversal: Vec::new(),
        }
    }

    #[test]
    fn unknot_has_p_colorings() {
        let d = KnotDiagram::unknotted();
        for p in [3, 5, 7] {
            assert_eq!(fox_colorings(&d, p).unwrap(), p);
        }
    }

    #[test]
    fn trefoil_colorings_match_brute_force() {
        let d = trefoil_diagram();
        assert_eq!(fox_colorings(&d, 3).unwrap(), 9);
        assert_eq!(fox_colorings(&d, 5).unwrap(), 5);
        for p in [3, 5, 7] {
            assert_eq!(fox_colorings(&d, p).unwrap(), fox_brute(&d, p), "p={p}");
        }
    }

    #[test]
    fn figure_eight_colorings_match_brute_force() {
        let d = figure_eight_diagram();
        assert_eq!(fox_colorings(&d, 5).unwrap(), 25);
        assert_eq!(fox_colorings(&d, 3).unwrap(), 3);
        for p in [3, 5, 7] {
            assert_eq!(fox_colorings(&d, p).unwrap(), fox_brute(&d, p), "p={p}");
        }
    }

    #[test]
    fn rejects_non_prime_modulus() {
        let d = trefoil_diagram();
        assert!(fox_colorings(&d, 9).is_err());
        assert!(fox_colorings(&d, 2).is_err());
    }

    #[test]
    fn square_projects_without_crossings() {
        let d = project(&unit_square(), &[1, 2, 5]).unwrap();
        assert_eq!(d.crossings.len(), 0);
        assert_eq!(d.arcs, 1);
        assert_eq!(d.gauss_code(), "");
    }

    #[test]
    fn axis_direction_on_stacked_edges_is_degenerate() {
        // a knot with two edges stacked along z: project along z
        let k = CubicalKnot::new(
            vec![
                [0, 0, 0],
                [1, 0, 0],
                [1, 1, 0],
                [1, 1, 1],
                [1, 0, 1],
                [1, 0, 2],
                [0, 0, 2],
                [0, 0, 1],
            ],
            1,
        );
        assert!(k.validate().is_ok());
        assert!(matches!(project(&k, &[0, 0, 1]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn invariant_report_unit_square() {
        let r = invariant_report(&unit_square(), &[3, 5, 7], 42).unwrap();
        assert_eq!(r[&3], 3);
        assert_eq!(r[&5], 5);
        assert_eq!(r[&7], 7);
    }

    #[test]
    fn projection_is_deterministic() {
        let k = unit_square().scale(2).unwrap();
        let d1 = project_generic(&k, 11).unwrap();
        let d2 = project_generic(&k, 11).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn reidemeister_moves_preserve_colorings() {
        // R1: kink on the unknot: one crossing, one arc (over = under_in =
        // under_out), versus the crossingless unknot
        let kink = KnotDiagram {
            crossings: vec![Crossing { over_arc: 0, under_in: 0, under_out: 0, sign: 1 }],
            arcs: 1,
            traversal: vec![(0, true), (0, false)],
        };
        // R2: poke between two strands of an unknot: two crossings, two arcs
        let poke = KnotDiagram {
            crossings: vec![
                Crossing { over_arc: 0, under_in: 1, under_out: 0, sign: 1 },
                Crossing { over_arc: 0, under_in: 0, under_out: 1, sign: -1 },
            ],
            arcs: 2,
            traversal: Vec::new(),
        };
        for p in [3, 5, 7] {
            assert_eq!(fox_colorings(&kink, p).unwrap(), p);
            assert_eq!(fox_colorings(&poke, p).unwrap(), p);
            assert_eq!(fox_colorings(&kink, p).unwrap(), fox_brute(&kink, p));
            assert_eq!(fox_colorings(&poke, p).unwrap(), fox_brute(&poke, p));
        }
        // R3 on the trefoil: slide an over-strand across a crossing; the
        // arc incidences below are the post-move diagram
        let trefoil = trefoil_diagram();
        let trefoil_r3 = KnotDiagram {
            crossings: vec![
                Crossing { over_arc: 0, under_in: 1, under_out: 2, sign: 1 },
                Crossing { over_arc: 2, under_in: 0, under_out: 1, sign: 1 },
                Crossing { over_arc: 1, under_in: 2, under_out: 0, sign: 1 },
            ],
            arcs: 3,
            traversal: Vec::new(),
        };
        for p in [3, 5, 7] {
            assert_eq!(
                fox_colorings(&trefoil, p).unwrap(),
                fox_colorings(&trefoil_r3, p).unwrap()
            );
        }
    }

    #[test]
    fn coloring_count_is_power_of_p() {
        let d = figure_eight_diagram();
        for p in [3u64, 5, 7, 11] {
            let c = fox_colorings(&d, p).unwrap();
            let mut x = c;
            while x.is_multiple_of(p) {
                x /= p;
            }
            assert_eq!(x, 1, "count {c} is not a power of {p}");
        }
    }
}
