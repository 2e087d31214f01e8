//! Quad-mesh export of the 3-dimensional approximant: outward boundary
//! faces of the union of retained cubes, shared interior faces culled.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use crate::error::{Error, Result};
use crate::lattice::pow3;
use crate::menger::{enumerate_retained, MengerParams};

pub const MAX_MESH_DEPTH: usize = 5;

/// Writes an ASCII mesh: `v x y z` per vertex and `f i j k l` per quad,
/// 1-indexed, vertices in lexicographic coordinate order. Coordinates are
/// integers in units of 3^-k; the header comment records the unit.
pub fn export_approximant_mesh<W: Write>(params: &MengerParams, out: &mut W) -> Result<()> {
    if params.m != 3 {
        return Err(Error::Parameter("mesh export supports m = 3 only".into()));
    }
    if params.k > MAX_MESH_DEPTH {
        return Err(Error::Resource(format!(
            "mesh depth {} exceeds cap {MAX_MESH_DEPTH}",
            params.k
        )));
    }
    let quads = boundary_quads(params);

    let mut vertex_ids: BTreeMap<[i64; 3], usize> = BTreeMap::new();
    for q in &quads {
        for v in q {
            vertex_ids.entry(*v).or_insert(0);
        }
    }
    for (i, (_, id)) in vertex_ids.iter_mut().enumerate() {
        *id = i + 1;
    }

    writeln!(
        out,
        "# menger approximant mesh m={} n={} k={}",
        params.m, params.n, params.k
    )?;
    writeln!(out, "# coordinates are integers in units of 3^-{}", params.k)?;
    for v in vertex_ids.keys() {
        writeln!(out, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for q in &quads {
        let ids: Vec<usize> = q.iter().map(|v| vertex_ids[v]).collect();
        writeln!(out, "f {} {} {} {}", ids[0], ids[1], ids[2], ids[3])?;
    }
    Ok(())
}

/// Boundary quads of the union of retained depth-k cubes, each quad as four
/// corner vertices in cyclic order, deterministically sorted.
pub fn boundary_quads(params: &MengerParams) -> Vec<[[i64; 3]; 4]> {
    let retained: HashSet<[i64; 3]> = enumerate_retained(params)
        .map(|a| {
            // a depth-0 address has no digits; its corner is the origin
            let c = a.corner().coords;
            [0, 1, 2].map(|i| c.get(i).copied().unwrap_or(0))
        })
        .collect();
    let side = pow3(params.k);
    let mut quads = Vec::new();
    for cube in &retained {
        for axis in 0..3usize {
            for dir in [-1i64, 1] {
                let mut neighbor = *cube;
                neighbor[axis] += dir;
                let exposed = neighbor[axis] < 0
                    || neighbor[axis] >= side
                    || !retained.contains(&neighbor);
                if !exposed {
                    continue;
                }
                // face lies at cube[axis] (dir = -1) or cube[axis] + 1
                let (a, b) = match axis {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let mut corner = *cube;
                if dir == 1 {
                    corner[axis] += 1;
                }
                let mut quad = [corner; 4];
                quad[1][a] += 1;
                quad[2][a] += 1;
                quad[2][b] += 1;
                quad[3][b] += 1;
                quads.push(quad);
            }
        }
    }
    quads.sort();
    quads
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::menger::is_retained;
    use crate::lattice::address_of;

    #[test]
    fn depth_zero_is_a_cube() {
        let p = MengerParams::new(3, 1, 0).unwrap();
        assert_eq!(boundary_quads(&p).len(), 6);
        let mut buf = Vec::new();
        export_approximant_mesh(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 8);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 6);
    }

    /// Face-count oracle: unit faces belonging to exactly one retained cube.
    fn boundary_face_count_oracle(params: &MengerParams) -> usize {
        let side = pow3(params.k);
        let retained = |c: &[i64; 3]| {
            if c.iter().any(|&x| x < 0 || x >= side) {
                return false;
            }
            let addr = address_of(&vec![c[0], c[1], c[2]].into(), params.k).unwrap();
            is_retained(&addr, params.n)
        };
        let mut count = 0;
        for x in 0..side {
            for y in 0..side {
                for z in 0..side {
                    let c = [x, y, z];
                    if !retained(&c) {
                        continue;
                    }
                    for axis in 0..3 {
                        for dir in [-1i64, 1] {
                            let mut nb = c;
                            nb[axis] += dir;
                            if !retained(&nb) {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn depth_one_and_two_match_oracle() {
        for k in [1usize, 2] {
            let p = MengerParams::new(3, 1, k).unwrap();
            assert_eq!(boundary_quads(&p).len(), boundary_face_count_oracle(&p), "k={k}");
        }
    }

    #[test]
    fn depth_two_has_400_cube_support() {
        let p = MengerParams::new(3, 1, 2).unwrap();
        assert_eq!(enumerate_retained(&p).count(), 400);
        assert!(!boundary_quads(&p).is_empty());
    }

    #[test]
    fn deterministic_output() {
        let p = MengerParams::new(3, 1, 1).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        export_approximant_mesh(&p, &mut a).unwrap();
        export_approximant_mesh(&p, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn depth_cap_enforced() {
        let p = MengerParams::new(3, 1, 6).unwrap();
        let mut buf = Vec::new();
        assert!(export_approximant_mesh(&p, &mut buf).is_err());
    }
}
