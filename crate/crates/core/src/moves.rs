//! Elementary isotopy moves on cubical knots. Each move rewrites the knot
//! across a single unit square whose interior is disjoint from the rest of
//! the knot, so every legal move is an ambient isotopy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{CubicalKnot, Point3};
use crate::lattice::{Cell, LatticePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Spike,
    Unspike,
    Slide,
}

/// One elementary move, anchored at a traversal vertex.
///
/// With `ea = edge_sign * e(edge_axis)` and `w = push_sign * e(push_axis)`:
///
/// * spike: the edge `anchor -> anchor+ea` becomes the three-edge detour
///   `anchor -> anchor+w -> anchor+ea+w -> anchor+ea`;
/// * unspike: the inverse rewrite at the same anchor;
/// * slide: the corner `anchor-ea -> anchor -> anchor+w` becomes
///   `anchor-ea -> anchor-ea+w -> anchor+w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub anchor: Point3,
    pub edge_axis: u8,
    pub push_axis: u8,
    pub edge_sign: i8,
    pub push_sign: i8,
}

fn step(p: &Point3, axis: u8, sign: i8) -> Point3 {
    let mut q = *p;
    q[axis as usize] += sign as i64;
    q
}

impl MoveRecord {
    pub fn spike(anchor: Point3, edge: (u8, i8), push: (u8, i8)) -> Self {
        MoveRecord {
            kind: MoveKind::Spike,
            anchor,
            edge_axis: edge.0,
            push_axis: push.0,
            edge_sign: edge.1,
            push_sign: push.1,
        }
    }

    pub fn unspike(anchor: Point3, edge: (u8, i8), push: (u8, i8)) -> Self {
        MoveRecord { kind: MoveKind::Unspike, ..MoveRecord::spike(anchor, edge, push) }
    }

    pub fn slide(anchor: Point3, edge: (u8, i8), push: (u8, i8)) -> Self {
        MoveRecord { kind: MoveKind::Slide, ..MoveRecord::spike(anchor, edge, push) }
    }

    /// The record that exactly undoes this move.
    pub fn inverse(&self) -> MoveRecord {
        match self.kind {
            MoveKind::Spike => MoveRecord { kind: MoveKind::Unspike, ..*self },
            MoveKind::Unspike => MoveRecord { kind: MoveKind::Spike, ..*self },
            MoveKind::Slide => {
                let ea = step(&[0, 0, 0], self.edge_axis, self.edge_sign);
                let eb = step(&[0, 0, 0], self.push_axis, self.push_sign);
                let anchor = [
                    self.anchor[0] - ea[0] + eb[0],
                    self.anchor[1] - ea[1] + eb[1],
                    self.anchor[2] - ea[2] + eb[2],
                ];
                MoveRecord {
                    kind: MoveKind::Slide,
                    anchor,
                    edge_axis: self.push_axis,
                    push_axis: self.edge_axis,
                    edge_sign: self.push_sign,
                    push_sign: self.edge_sign,
                }
            }
        }
    }

    /// The unit square swept by this move, as a canonical 2-cell.
    pub fn swept_square(&self) -> Cell {
        let ea = (self.edge_axis, self.edge_sign);
        let w = (self.push_axis, self.push_sign);
        let corners: [Point3; 4] = match self.kind {
            MoveKind::Spike | MoveKind::Unspike => {
                let a = self.anchor;
                let b = step(&a, ea.0, ea.1);
                [a, b, step(&a, w.0, w.1), step(&b, w.0, w.1)]
            }
            MoveKind::Slide => {
                let c = self.anchor;
                let u = step(&c, ea.0, -ea.1);
                [c, u, step(&c, w.0, w.1), step(&u, w.0, w.1)]
            }
        };
        let mut min = corners[0];
        for c in &corners[1..] {
            for i in 0..3 {
                min[i] = min[i].min(c[i]);
            }
        }
        let mut axes = vec![self.edge_axis, self.push_axis];
        axes.sort_unstable();
        Cell::new(LatticePoint::new(min.to_vec()), axes).expect("axes in range")
    }

    fn well_formed(&self) -> Result<()> {
        if self.edge_axis > 2 || self.push_axis > 2 || self.edge_axis == self.push_axis {
            return Err(Error::IllegalMove(format!(
                "bad axis pair ({}, {})",
                self.edge_axis, self.push_axis
            )));
        }
        if self.edge_sign.abs() != 1 || self.push_sign.abs() != 1 {
            return Err(Error::IllegalMove("signs must be +/-1".into()));
        }
        Ok(())
    }
}

/// Applies one move with full legality checking, returning the new knot.
/// Illegal moves are rejected with the obstruction named.
pub fn apply_move(knot: &CubicalKnot, mv: &MoveRecord) -> Result<CubicalKnot> {
    mv.well_formed()?;
    let n = knot.vertices.len();
    let verts = &knot.vertices;
    let vset = knot.vertex_set();
    let at = |i: usize| verts[i % n];
    let ea = (mv.edge_axis, mv.edge_sign);
    let w = (mv.push_axis, mv.push_sign);

    match mv.kind {
        MoveKind::Spike => {
            let a = mv.anchor;
            let b = step(&a, ea.0, ea.1);
            let i = (0..n)
                .find(|&i| at(i) == a && at(i + 1) == b)
                .ok_or_else(|| {
                    Error::IllegalMove(format!("edge {a:?} -> {b:?} not on the knot"))
                })?;
            let p = step(&a, w.0, w.1);
            let q = step(&b, w.0, w.1);
            for v in [p, q] {
                if vset.contains(&v) {
                    return Err(Error::IllegalMove(format!("occupied vertex {v:?}")));
                }
            }
            let mut vertices = verts.clone();
            vertices.splice(i + 1..i + 1, [p, q]);
            Ok(CubicalKnot { vertices, scale_exp: knot.scale_exp })
        }
        MoveKind::Unspike => {
            let a = mv.anchor;
            let b = step(&a, ea.0, ea.1);
            let p = step(&a, w.0, w.1);
            let q = step(&b, w.0, w.1);
            let i = (0..n)
                .find(|&i| at(i) == a && at(i + 1) == p && at(i + 2) == q && at(i + 3) == b)
                .ok_or_else(|| {
                    Error::IllegalMove(format!(
                        "spike {a:?} -> {p:?} -> {q:?} -> {b:?} not on the knot"
                    ))
                })?;
            if n - 2 < 4 {
                return Err(Error::IllegalMove(
                    "unspike would leave fewer than 4 vertices".into(),
                ));
            }
            if knot.edge_set().contains(&crate::knot::edge_key(&a, &b)) {
                return Err(Error::IllegalMove(format!(
                    "occupied edge {a:?} -> {b:?}"
                )));
            }
            let mut vertices = Vec::with_capacity(n - 2);
            for (j, &v) in verts.iter().enumerate() {
                if (j + n - (i + 1) % n).is_multiple_of(n) || (j + n - (i + 2) % n).is_multiple_of(n) {
                    continue;
                }
                vertices.push(v);
            }
            Ok(CubicalKnot { vertices, scale_exp: knot.scale_exp })
        }
        MoveKind::Slide => {
            let c = mv.anchor;
            let u = step(&c, ea.0, -ea.1);
            let v = step(&c, w.0, w.1);
            let i = (0..n)
                .find(|&i| at(i) == u && at(i + 1) == c && at(i + 2) == v)
                .ok_or_else(|| {
                    Error::IllegalMove(format!(
                        "corner {u:?} -> {c:?} -> {v:?} not on the knot"
                    ))
                })?;
            let nv = step(&u, w.0, w.1);
            if vset.contains(&nv) {
                return Err(Error::IllegalMove(format!("occupied vertex {nv:?}")));
            }
            let mut vertices = verts.clone();
            vertices[(i + 1) % n] = nv;
            Ok(CubicalKnot { vertices, scale_exp: knot.scale_exp })
        }
    }
}

/// All legal moves available on a knot, deterministically ordered. Used by
/// fuzzing and by the rerouting search.
pub fn enumerate_legal_moves(knot: &CubicalKnot) -> Vec<MoveRecord> {
    let n = knot.vertices.len();
    let mut out = Vec::new();
    for i in 0..n {
        let prev = knot.vertices[(i + n - 1) % n];
        let a = knot.vertices[i];
        let b = knot.vertices[(i + 1) % n];
        let c = knot.vertices[(i + 2) % n];
        let d = knot.vertices[(i + 3) % n];
        if let Some(ea) = crate::knot::edge_dir(&a, &b) {
            // spikes of edge a -> b in the four perpendicular directions
            for axis in 0..3u8 {
                if axis == ea.0 {
                    continue;
                }
                for sign in [1i8, -1] {
                    let mv = MoveRecord::spike(a, ea, (axis, sign));
                    if apply_move(knot, &mv).is_ok() {
                        out.push(mv);
                    }
                }
            }
            // unspike of pattern a -> b -> c -> d
            if let (Some(eb), Some(ec)) =
                (crate::knot::edge_dir(&b, &c), crate::knot::edge_dir(&c, &d))
            {
                if ec.0 == ea.0 && ec.1 == -ea.1 && eb.0 != ea.0 {
                    let mv = MoveRecord::unspike(a, eb, ea);
                    if apply_move(knot, &mv).is_ok() {
                        out.push(mv);
                    }
                }
            }
            // slide at corner prev -> a -> b
            if let Some(ein) = crate::knot::edge_dir(&prev, &a) {
                if ein.0 != ea.0 {
                    let mv = MoveRecord::slide(a, ein, ea);
                    if apply_move(knot, &mv).is_ok() {
                        out.push(mv);
                    }
                }
            }
        }
    }
    out
}

/// Samples one legal move uniformly-ish: random anchor position, random
/// kind and direction, bounded retries. Used by fuzz suites.
pub fn random_legal_move<R: rand::Rng>(knot: &CubicalKnot, rng: &mut R) -> Option<MoveRecord> {
    let n = knot.vertices.len();
    for _ in 0..200 {
        let i = rng.gen_range(0..n);
        let prev = knot.vertices[(i + n - 1) % n];
        let a = knot.vertices[i];
        let b = knot.vertices[(i + 1) % n];
        let c = knot.vertices[(i + 2) % n];
        let d = knot.vertices[(i + 3) % n];
        let ea = crate::knot::edge_dir(&a, &b)?;
        let candidate = match rng.gen_range(0..4u8) {
            // unspikes drawn more often to keep fuzzed knots from ballooning
            0 => {
                let axis = [0, 1, 2].into_iter().filter(|&x| x != ea.0).nth(rng.gen_range(0..2))?;
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                MoveRecord::spike(a, ea, (axis, sign))
            }
            1 => {
                let ein = crate::knot::edge_dir(&prev, &a)?;
                if ein.0 == ea.0 {
                    continue;
                }
                MoveRecord::slide(a, ein, ea)
            }
            _ => {
                let (Some(eb), Some(ec)) =
                    (crate::knot::edge_dir(&b, &c), crate::knot::edge_dir(&c, &d))
                else {
                    continue;
                };
                if !(ec.0 == ea.0 && ec.1 == -ea.1 && eb.0 != ea.0) {
                    continue;
                }
                MoveRecord::unspike(a, eb, ea)
            }
        };
        if apply_move(knot, &candidate).is_ok() {
            return Some(candidate);
        }
    }
    None
}
