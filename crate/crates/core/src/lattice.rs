//! Integer-lattice geometry: points, axis-aligned cells of the canonical
//! cubulation, incidence queries, and base-3 address arithmetic for triadic
//! subdivision. Everything is exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the ambient dimension for desk-scale enumeration.
pub const DEFAULT_MAX_DIM: usize = 6;

/// A point of the integer lattice Z^m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }
}

/// An axis-aligned d-cell of the canonical cubulation, in canonical form:
/// minimal-coordinate corner plus the sorted set of spanned axes.
///
/// The cell is `corner + [0,1]^axes x {0}^(other axes)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub corner: LatticePoint,
    pub axes: Vec<u8>,
}

impl Cell {
    /// Builds a cell, sorting and deduplicating the axis set.
    pub fn new(corner: LatticePoint, mut axes: Vec<u8>) -> Result<Self> {
        axes.sort_unstable();
        axes.dedup();
        let m = corner.dim();
        if let Some(&a) = axes.iter().find(|&&a| a as usize >= m) {
            return Err(Error::Parameter(format!(
                "axis {a} out of range for ambient dimension {m}"
            )));
        }
        Ok(Cell { corner, axes })
    }

    pub fn vertex(corner: LatticePoint) -> Self {
        Cell { corner, axes: Vec::new() }
    }

    /// Unit m-cube with the given minimal corner.
    pub fn cube(corner: LatticePoint) -> Self {
        let m = corner.dim();
        Cell { corner, axes: (0..m as u8).collect() }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.corner.dim()
    }

    /// All d-faces of this cell, each exactly once, in canonical form.
    /// Count is C(dim, d) * 2^(dim - d).
    pub fn faces(&self, d: usize) -> Result<Vec<Cell>> {
        let dim = self.dim();
        if d > dim {
            return Err(Error::Parameter(format!(
                "face dimension {d} exceeds cell dimension {dim}"
            )));
        }
        let mut out = Vec::new();
        for kept in subsets(&self.axes, d) {
            let dropped: Vec<u8> = self
                .axes
                .iter()
                .copied()
                .filter(|a| !kept.contains(a))
                .collect();
            // Each dropped axis is pinned to offset 0 or 1.
            for mask in 0u32..(1 << dropped.len()) {
                let mut corner = self.corner.clone();
                for (bit, &a) in dropped.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        corner.coords[a as usize] += 1;
                    }
                }
                out.push(Cell { corner, axes: kept.clone() });
            }
        }
        out.sort();
        Ok(out)
    }

    /// All d-cells of the canonical cubulation C^m containing this cell.
    /// Count is C(m - dim, d - dim) * 2^(d - dim).
    pub fn incident_cells(&self, d: usize) -> Result<Vec<Cell>> {
        let dim = self.dim();
        let m = self.ambient_dim();
        if d < dim || d > m {
            return Err(Error::Parameter(format!(
                "incidence dimension {d} outside [{dim}, {m}]"
            )));
        }
        let free: Vec<u8> = (0..m as u8).filter(|a| !self.axes.contains(a)).collect();
        let mut out = Vec::new();
        for extra in subsets(&free, d - dim) {
            // The containing cell spans our axes plus `extra`; on each extra
            // axis its corner sits at our coordinate or one below.
            for mask in 0u32..(1 << extra.len()) {
                let mut corner = self.corner.clone();
                for (bit, &a) in extra.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        corner.coords[a as usize] -= 1;
                    }
                }
                let mut axes: Vec<u8> = self.axes.clone();
                axes.extend_from_slice(&extra);
                axes.sort_unstable();
                out.push(Cell { corner, axes });
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Nested base-3 address of a level-k subcube of the unit hypercube.
/// Level 0 digits are the most significant (coarsest subdivision).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeAddress {
    pub levels: Vec<Vec<u8>>,
}

impl CubeAddress {
    pub fn root() -> Self {
        CubeAddress { levels: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.levels.first().map(|v| v.len())
    }

    /// Checks digit ranges and uniform level width.
    pub fn is_well_formed(&self) -> bool {
        let Some(m) = self.ambient_dim() else { return true };
        self.levels.iter().all(|lv| lv.len() == m && lv.iter().all(|&d| d < 3))
    }

    /// Minimal corner of the addressed cube, in integer units of 3^(-depth).
    pub fn corner(&self) -> LatticePoint {
        let m = self.ambient_dim().unwrap_or(0);
        let mut coords = vec![0i64; m];
        for level in &self.levels {
            for (c, &d) in coords.iter_mut().zip(level.iter()) {
                *c = *c * 3 + d as i64;
            }
        }
        LatticePoint { coords }
    }
}

/// Base-3 address of the depth-k cube with the given minimal corner, the
/// corner being expressed in integer units of 3^(-k).
pub fn address_of(corner: &LatticePoint, k: usize) -> Result<CubeAddress> {
    let side = pow3(k);
    if corner.coords.iter().any(|&c| c < 0 || c >= side) {
        return Err(Error::OutOfBounds(format!(
            "corner {:?} outside [0, 3^{k})^m",
            corner.coords
        )));
    }
    let m = corner.dim();
    let mut levels = vec![vec![0u8; m]; k];
    for (i, &c) in corner.coords.iter().enumerate() {
        let mut rest = c;
        for level in (0..k).rev() {
            levels[level][i] = (rest % 3) as u8;
            rest /= 3;
        }
    }
    Ok(CubeAddress { levels })
}

/// Inverse of [`address_of`]: the minimal corner of the addressed cube.
pub fn cube_of(addr: &CubeAddress) -> LatticePoint {
    addr.corner()
}

/// 3^k as i64. Panics on overflow (k is always desk-scale here).
pub fn pow3(k: usize) -> i64 {
    3i64.checked_pow(k as u32).expect("3^k overflow")
}

/// Binomial coefficient as u128.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn subsets(items: &[u8], size: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(items: &[u8], size: usize, start: usize, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, size, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, size, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cube3() -> Cell {
        Cell::cube(LatticePoint::new(vec![0, 0, 0]))
    }

    #[test]
    fn faces_of_3_cube() {
        let c = cube3();
        assert_eq!(c.faces(2).unwrap().len(), 6);
        assert_eq!(c.faces(1).unwrap().len(), 12);
        assert_eq!(c.faces(0).unwrap().len(), 8);
        assert_eq!(c.faces(3).unwrap(), vec![c]);
    }

    #[test]
    fn faces_of_4_cube() {
        let c = Cell::cube(LatticePoint::new(vec![0, 0, 0, 0]));
        assert_eq!(c.faces(3).unwrap().len(), 8);
        assert_eq!(c.faces(2).unwrap().len(), 24);
    }

    // Independent oracle: a d-face of `cell` is any canonical cell whose
    // vertex set is a subset of the cell's vertex set, found by scanning a
    // small box around the corner.
    fn faces_by_enumeration(cell: &Cell, d: usize) -> Vec<Cell> {
        let m = cell.ambient_dim();
        let verts: HashSet<Vec<i64>> = cell
            .faces(0)
            .unwrap()
            .into_iter()
            .map(|c| c.corner.coords)
            .collect();
        let mut out = Vec::new();
        let all_axes: Vec<u8> = (0..m as u8).collect();
        for axes in subsets(&all_axes, d) {
            for v in &verts {
                let cand = Cell { corner: LatticePoint::new(v.clone()), axes: axes.clone() };
                let cand_verts: HashSet<Vec<i64>> = cand
                    .faces(0)
                    .unwrap()
                    .into_iter()
                    .map(|c| c.corner.coords)
                    .collect();
                if cand_verts.is_subset(&verts) {
                    out.push(cand);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn faces_match_enumeration_oracle() {
        for m in 2..=4usize {
            let cell = Cell::cube(LatticePoint::new(vec![0; m]));
            for d in 0..=m {
                assert_eq!(cell.faces(d).unwrap(), faces_by_enumeration(&cell, d));
            }
        }
    }

    #[test]
    fn incidence_counts_c3() {
        let v = Cell::vertex(LatticePoint::new(vec![0, 0, 0]));
        assert_eq!(v.incident_cells(1).unwrap().len(), 6);
        assert_eq!(v.incident_cells(2).unwrap().len(), 12);
        assert_eq!(v.incident_cells(3).unwrap().len(), 8);
        let e = Cell::new(LatticePoint::new(vec![0, 0, 0]), vec![0]).unwrap();
        assert_eq!(e.incident_cells(2).unwrap().len(), 4);
        assert_eq!(e.incident_cells(3).unwrap().len(), 4);
    }

    #[test]
    fn incidence_counts_c4_edge() {
        let e = Cell::new(LatticePoint::new(vec![0, 0, 0, 0]), vec![0]).unwrap();
        assert_eq!(e.incident_cells(2).unwrap().len(), 6);
        assert_eq!(e.incident_cells(3).unwrap().len(), 12);
        assert_eq!(e.incident_cells(4).unwrap().len(), 8);
    }

    #[test]
    fn incidence_matches_closed_formula() {
        // Exhaustive around the origin for all 0 <= dim <= d <= m <= 5.
        for m in 1..=5usize {
            let all_axes: Vec<u8> = (0..m as u8).collect();
            for dim in 0..=m {
                for axes in subsets(&all_axes, dim) {
                    let cell = Cell::new(LatticePoint::new(vec![0; m]), axes).unwrap();
                    for d in dim..=m {
                        let got = cell.incident_cells(d).unwrap();
                        let expect = binomial(m - dim, d - dim) << (d - dim);
                        assert_eq!(got.len() as u128, expect, "m={m} dim={dim} d={d}");
                        // Each result must actually contain the cell.
                        for big in &got {
                            let fs = big.faces(dim).unwrap();
                            assert!(fs.contains(&cell));
                        }
                        // And be unique.
                        let set: HashSet<_> = got.iter().cloned().collect();
                        assert_eq!(set.len(), got.len());
                    }
                }
            }
        }
    }

    #[test]
    fn incidence_rejects_low_dim() {
        let e = Cell::new(LatticePoint::new(vec![0, 0, 0]), vec![1]).unwrap();
        assert!(e.incident_cells(0).is_err());
    }

    #[test]
    fn address_examples() {
        let a = address_of(&LatticePoint::new(vec![0, 0, 0]), 1).unwrap();
        assert_eq!(a.levels, vec![vec![0, 0, 0]]);
        let a = address_of(&LatticePoint::new(vec![1, 1, 1]), 1).unwrap();
        assert_eq!(a.levels, vec![vec![1, 1, 1]]);
        let a = address_of(&LatticePoint::new(vec![4, 4, 4]), 2).unwrap();
        assert_eq!(a.levels, vec![vec![1, 1, 1], vec![1, 1, 1]]);
        assert!(address_of(&LatticePoint::new(vec![9, 0, 0]), 2).is_err());
        assert!(address_of(&LatticePoint::new(vec![-1, 0, 0]), 2).is_err());
    }

    #[test]
    fn address_round_trip_exhaustive() {
        // cube_of . address_of = identity for 1 <= depth <= 4, m <= 4.
        // Depth 0 is excluded: the root address carries no digits, so the
        // ambient dimension (and hence the corner) is not recoverable.
        for m in 1..=4usize {
            for k in 1..=4usize {
                let side = pow3(k);
                let total = (side as u128).pow(m as u32);
                if total > 200_000 {
                    continue;
                }
                let mut corner = vec![0i64; m];
                loop {
                    let addr = address_of(&LatticePoint::new(corner.clone()), k).unwrap();
                    assert!(addr.is_well_formed());
                    assert_eq!(cube_of(&addr).coords, corner);
                    // odometer
                    let mut i = 0;
                    loop {
                        if i == m {
                            break;
                        }
                        corner[i] += 1;
                        if corner[i] < side {
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
        }
    }
}
