//! Cubical knots: closed embedded unit-step lattice polygons in Z^3,
//! carrying a scale exponent s (domain-bound coordinates live in [0, 3^s]^3).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{pow3, Cell, LatticePoint};
use crate::menger::{cell_in_approximant_scaled, MengerParams};

pub type Point3 = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicalKnot {
    pub vertices: Vec<Point3>,
    pub scale_exp: usize,
}

/// First violated invariant, with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnotViolation {
    TooShort { len: usize },
    NotUnitStep { index: usize, from: Point3, to: Point3 },
    RepeatedVertex { index: usize, point: Point3 },
}

impl fmt::Display for KnotViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotViolation::TooShort { len } => {
                write!(f, "closed lattice polygon needs at least 4 vertices, got {len}")
            }
            KnotViolation::NotUnitStep { index, from, to } => write!(
                f,
                "edge {index}: {from:?} -> {to:?} is not a unit step along one axis"
            ),
            KnotViolation::RepeatedVertex { index, point } => {
                write!(f, "self-intersection: vertex {point:?} repeated at position {index}")
            }
        }
    }
}

fn unit_axis(from: &Point3, to: &Point3) -> Option<(u8, i8)> {
    let d: Vec<i64> = (0..3).map(|i| to[i] - from[i]).collect();
    let mut found = None;
    for (i, &x) in d.iter().enumerate() {
        match x {
            0 => {}
            1 | -1 => {
                if found.is_some() {
                    return None;
                }
                found = Some((i as u8, x as i8));
            }
            _ => return None,
        }
    }
    found
}

impl CubicalKnot {
    pub fn new(vertices: Vec<Point3>, scale_exp: usize) -> Self {
        CubicalKnot { vertices, scale_exp }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Confirms all invariants; on failure reports the first violation.
    pub fn validate(&self) -> std::result::Result<(), KnotViolation> {
        let n = self.vertices.len();
        if n < 4 {
            return Err(KnotViolation::TooShort { len: n });
        }
        for i in 0..n {
            let from = self.vertices[i];
            let to = self.vertices[(i + 1) % n];
            if unit_axis(&from, &to).is_none() {
                return Err(KnotViolation::NotUnitStep { index: i, from, to });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for (i, v) in self.vertices.iter().enumerate() {
            if !seen.insert(*v) {
                return Err(KnotViolation::RepeatedVertex { index: i, point: *v });
            }
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate().map_err(|v| Error::InvalidKnot(v.to_string()))?;
        Ok(self)
    }

    /// Directed edges in cyclic order.
    pub fn edges(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Canonical 1-cell of the i-th edge (minimal corner + axis).
    pub fn edge_cell(&self, i: usize) -> Cell {
        let n = self.vertices.len();
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % n];
        edge_to_cell(&a, &b)
    }

    pub fn vertex_set(&self) -> HashSet<Point3> {
        self.vertices.iter().copied().collect()
    }

    /// Canonical undirected edge set: (min corner, axis).
    pub fn edge_set(&self) -> HashSet<(Point3, u8)> {
        self.edges().map(|(a, b)| edge_key(&a, &b)).collect()
    }

    /// Every vertex multiplied by `factor`, every edge subdivided into
    /// `factor` unit edges. The scale exponent is unchanged; use
    /// [`CubicalKnot::subdivide`] for the triadic rescaling that tracks it.
    pub fn scale(&self, factor: i64) -> Result<CubicalKnot> {
        if factor < 1 {
            return Err(Error::Parameter(format!("scale factor must be >= 1, got {factor}")));
        }
        if factor == 1 {
            return Ok(self.clone());
        }
        let n = self.vertices.len();
        let mut vertices = Vec::with_capacity(n * factor as usize);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let d: Point3 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            for t in 0..factor {
                vertices.push([
                    a[0] * factor + d[0] * t,
                    a[1] * factor + d[1] * t,
                    a[2] * factor + d[2] * t,
                ]);
            }
        }
        Ok(CubicalKnot { vertices, scale_exp: self.scale_exp })
    }

    /// Factor-3 rescaling into the next-finer triadic domain.
    pub fn subdivide(&self) -> CubicalKnot {
        let mut k = self.scale(3).expect("factor 3");
        k.scale_exp = self.scale_exp + 1;
        k
    }

    pub fn translate(&self, d: Point3) -> CubicalKnot {
        CubicalKnot {
            vertices: self
                .vertices
                .iter()
                .map(|v| [v[0] + d[0], v[1] + d[1], v[2] + d[2]])
                .collect(),
            scale_exp: self.scale_exp,
        }
    }

    pub fn bounds(&self) -> (Point3, Point3) {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for v in &self.vertices {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    /// True iff all coordinates lie in [0, 3^scale_exp]^3.
    pub fn in_domain(&self) -> bool {
        let side = pow3(self.scale_exp);
        self.vertices
            .iter()
            .all(|v| v.iter().all(|&c| c >= 0 && c <= side))
    }

    /// Canonical cyclic form: lexicographically smallest vertex first, then
    /// the lexicographically smaller of its two neighbors second.
    pub fn canonicalized(&self) -> CubicalKnot {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let start = (0..n).min_by_key(|&i| self.vertices[i]).unwrap();
        let next = self.vertices[(start + 1) % n];
        let prev = self.vertices[(start + n - 1) % n];
        let forward = next <= prev;
        let mut vertices = Vec::with_capacity(n);
        for j in 0..n {
            let idx = if forward { (start + j) % n } else { (start + n - j) % n };
            vertices.push(self.vertices[idx]);
        }
        CubicalKnot { vertices, scale_exp: self.scale_exp }
    }

    /// True iff the two knots trace the same oriented cycle, allowing a
    /// different starting vertex.
    pub fn cyclically_equal(&self, other: &CubicalKnot) -> bool {
        let n = self.vertices.len();
        if self.scale_exp != other.scale_exp || n != other.vertices.len() {
            return false;
        }
        (0..n).any(|shift| (0..n).all(|j| self.vertices[(shift + j) % n] == other.vertices[j]))
    }

    /// True iff every edge lies in some retained depth-k cube, the depth-k
    /// grid being rescaled exactly to the knot's scale.
    pub fn in_approximant(&self, params: &MengerParams) -> Result<bool> {
        if params.m != 3 {
            return Err(Error::Parameter("knot containment requires m = 3".into()));
        }
        if params.k > self.scale_exp {
            return Err(Error::Parameter(format!(
                "depth {} exceeds knot scale exponent {}",
                params.k, self.scale_exp
            )));
        }
        for i in 0..self.vertices.len() {
            let cell = self.edge_cell(i);
            if !cell_in_approximant_scaled(&cell, self.scale_exp, params)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of edges failing depth-k containment.
    pub fn bad_edges(&self, params: &MengerParams) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            let cell = self.edge_cell(i);
            if !cell_in_approximant_scaled(&cell, self.scale_exp, params)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Serializes to the ASCII knot file format. Byte-stable.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("cubical-knot v1 m=3 scale={}\n", self.scale_exp);
        for v in &self.vertices {
            s.push_str(&format!("{} {} {}\n", v[0], v[1], v[2]));
        }
        s
    }

    /// Parses the ASCII knot file format (comments start with '#').
    pub fn from_file_str(text: &str) -> Result<CubicalKnot> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty knot file".into()))?;
        let mut scale_exp = None;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("cubical-knot") || fields.next() != Some("v1") {
            return Err(Error::Parse(format!("bad header: {header:?}")));
        }
        for f in fields {
            match f.split_once('=') {
                Some(("m", "3")) => {}
                Some(("m", other)) => {
                    return Err(Error::Parse(format!("unsupported ambient dimension m={other}")))
                }
                Some(("scale", s)) => {
                    scale_exp = Some(s.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("bad scale in header: {s:?}"))
                    })?)
                }
                _ => return Err(Error::Parse(format!("bad header field: {f:?}"))),
            }
        }
        let scale_exp =
            scale_exp.ok_or_else(|| Error::Parse("header missing scale=<s>".into()))?;
        let mut vertices = Vec::new();
        for line in lines {
            let coords: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad vertex line: {line:?}"))))
                .collect::<Result<_>>()?;
            if coords.len() != 3 {
                return Err(Error::Parse(format!("vertex line needs 3 integers: {line:?}")));
            }
            vertices.push([coords[0], coords[1], coords[2]]);
        }
        Ok(CubicalKnot { vertices, scale_exp })
    }
}

pub fn edge_to_cell(a: &Point3, b: &Point3) -> Cell {
    let (axis, sign) = unit_axis(a, b).expect("unit edge");
    let corner = if sign > 0 { *a } else { *b };
    Cell::new(LatticePoint::new(corner.to_vec()), vec![axis]).expect("axis in range")
}

/// Canonical undirected key of a unit edge: (min corner, axis).
pub fn edge_key(a: &Point3, b: &Point3) -> (Point3, u8) {
    let (axis, sign) = unit_axis(a, b).expect("unit edge");
    ((if sign > 0 { *a } else { *b }), axis)
}

/// Direction of a unit edge, if it is one.
pub fn edge_dir(a: &Point3, b: &Point3) -> Option<(u8, i8)> {
    unit_axis(a, b)
}

pub fn unit_square() -> CubicalKnot {
    CubicalKnot::new(
        vec![[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
        1,
    )
}
