//! The Menger approximant engine: digit-rule retention, streaming
//! enumeration of retained cubes, counting, point/cell containment at any
//! depth, and the refinement lemma checker that turns the inverse limit into
//! a finite property.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{address_of, binomial, pow3, Cell, CubeAddress, DEFAULT_MAX_DIM};

/// Parameters of the approximant M^m_n(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MengerParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl MengerParams {
    pub fn new(m: usize, n: usize, k: usize) -> Result<Self> {
        if !(2..=DEFAULT_MAX_DIM).contains(&m) {
            return Err(Error::Parameter(format!(
                "ambient dimension m={m} outside [2, {DEFAULT_MAX_DIM}]"
            )));
        }
        if n >= m {
            return Err(Error::Parameter(format!("need 0 <= n < m, got n={n}, m={m}")));
        }
        Ok(MengerParams { m, n, k })
    }
}

/// Counting summary for one approximant stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RetentionReport {
    pub params: MengerParams,
    pub retained_count: BigUint,
    pub removed_count: BigUint,
}

/// True iff a subcube with these base-3 digits meets the n-skeleton of its
/// parent cube: at most n digits equal to 1.
pub fn touches_n_skeleton(digits: &[u8], n: usize) -> bool {
    digits.iter().filter(|&&d| d == 1).count() <= n
}

/// True iff the addressed cube survives every subdivision level.
pub fn is_retained(addr: &CubeAddress, n: usize) -> bool {
    addr.levels.iter().all(|lv| touches_n_skeleton(lv, n))
}

/// Number of retained digit vectors at a single level:
/// r = sum_{j=0}^{n} C(m,j) * 2^(m-j).
pub fn retained_per_level(m: usize, n: usize) -> u128 {
    (0..=n).map(|j| binomial(m, j) << (m - j)).sum()
}

/// Number of retained depth-k cubes: r^k.
pub fn retained_count(params: &MengerParams) -> BigUint {
    BigUint::from(retained_per_level(params.m, params.n)).pow(params.k as u32)
}

pub fn retention_report(params: &MengerParams) -> RetentionReport {
    let retained = retained_count(params);
    let total = BigUint::from(3u32).pow((params.m * params.k) as u32);
    RetentionReport {
        params: *params,
        removed_count: &total - &retained,
        retained_count: retained,
    }
}

/// Lazy lexicographic stream of all retained depth-k addresses.
///
/// Retention is levelwise, so the stream is the k-fold product of the sorted
/// single-level digit vectors; lexicographic on concatenated digits.
pub fn enumerate_retained(params: &MengerParams) -> RetainedCubes {
    let mut level_options = Vec::new();
    let mut digits = vec![0u8; params.m];
    loop {
        if touches_n_skeleton(&digits, params.n) {
            level_options.push(digits.clone());
        }
        // odometer, most significant digit first for lexicographic order
        let mut i = params.m;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX {
            break;
        }
    }
    RetainedCubes { level_options, indices: vec![0; params.k], done: false }
}

pub struct RetainedCubes {
    level_options: Vec<Vec<u8>>,
    indices: Vec<usize>,
    done: bool,
}

impl Iterator for RetainedCubes {
    type Item = CubeAddress;

    fn next(&mut self) -> Option<CubeAddress> {
        if self.done {
            return None;
        }
        let levels: Vec<Vec<u8>> = self
            .indices
            .iter()
            .map(|&i| self.level_options[i].clone())
            .collect();
        // advance, last level fastest
        let mut pos = self.indices.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.indices[pos] += 1;
            if self.indices[pos] < self.level_options.len() {
                break;
            }
            self.indices[pos] = 0;
        }
        Some(CubeAddress { levels })
    }
}

/// Depth-k grid cubes (as depth-k grid corners) containing a cell given at
/// the finer scale 3^s, s >= k. At most 2^(m - dim) candidates.
pub fn containing_cubes(cell: &Cell, scale_exp: usize, k: usize) -> Result<Vec<Vec<i64>>> {
    if k > scale_exp {
        return Err(Error::Parameter(format!(
            "depth {k} exceeds cell scale exponent {scale_exp}"
        )));
    }
    let m = cell.ambient_dim();
    let side = pow3(scale_exp);
    for (i, &c) in cell.corner.coords.iter().enumerate() {
        let hi = if cell.axes.contains(&(i as u8)) { c + 1 } else { c };
        if c < 0 || hi > side {
            return Err(Error::OutOfBounds(format!(
                "cell corner {:?} outside [0, 3^{scale_exp}]^{m}",
                cell.corner.coords
            )));
        }
    }
    let t = pow3(scale_exp - k);
    let grid = pow3(k);
    let mut candidates: Vec<Vec<i64>> = vec![Vec::new()];
    for i in 0..m {
        let c = cell.corner.coords[i];
        let spanning = cell.axes.contains(&(i as u8));
        let mut opts = Vec::new();
        let q = c.div_euclid(t);
        if spanning {
            if q < grid {
                opts.push(q);
            }
        } else {
            if c % t == 0 && q >= 1 {
                opts.push(q - 1);
            }
            if q < grid {
                opts.push(q);
            }
        }
        if opts.is_empty() {
            return Ok(Vec::new());
        }
        let mut next = Vec::new();
        for base in &candidates {
            for &o in &opts {
                let mut v = base.clone();
                v.push(o);
                next.push(v);
            }
        }
        candidates = next;
    }
    Ok(candidates)
}

/// True iff some retained depth-k cube contains the cell. The cell lives at
/// integer scale 3^s (`scale_exp`); k <= s.
pub fn cell_in_approximant_scaled(
    cell: &Cell,
    scale_exp: usize,
    params: &MengerParams,
) -> Result<bool> {
    for corner in containing_cubes(cell, scale_exp, params.k)? {
        let addr = address_of(&corner.into(), params.k)?;
        if is_retained(&addr, params.n) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Same-scale form: the cell's coordinates are at integer scale 3^k.
pub fn cell_in_approximant(cell: &Cell, params: &MengerParams) -> Result<bool> {
    cell_in_approximant_scaled(cell, params.k, params)
}

/// One counterexample of the refinement lemma (expected: none).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementCounterexample {
    pub face_axes: Vec<u8>,
    pub face_offsets: Vec<u8>,
    pub sub_face_corner: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementReport {
    pub m: usize,
    pub n: usize,
    pub faces_checked: usize,
    pub sub_faces_checked: usize,
    pub counterexamples: Vec<RefinementCounterexample>,
}

impl RefinementReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Stable identifier used by certificates to name the lemma instance
    /// they rely on.
    pub fn id(&self) -> String {
        format!(
            "refinement-lemma m={} n={} counterexamples={}",
            self.m,
            self.n,
            self.counterexamples.len()
        )
    }
}

/// Exhaustively verifies, for one subdivision step of a retained cube C:
/// every triadic sub-n-face of every n-face of C is a face of some subcube
/// of C that passes the digit rule. By translation and scale invariance of
/// the rule, checking the unit cube covers every retained cube at every
/// depth; this is what extends a depth-s certificate to all deeper levels.
pub fn refinement_lemma_check(m: usize, n: usize) -> Result<RefinementReport> {
    if m > 5 {
        return Err(Error::Parameter("refinement check supports m <= 5".into()));
    }
    if n >= m {
        return Err(Error::Parameter(format!("need n < m, got n={n}, m={m}")));
    }
    let axes_all: Vec<u8> = (0..m as u8).collect();
    let mut faces_checked = 0usize;
    let mut sub_faces_checked = 0usize;
    let mut counterexamples = Vec::new();

    // all retained single-level digit vectors
    let mut retained_digits = Vec::new();
    let mut digits = vec![0u8; m];
    'outer: loop {
        if touches_n_skeleton(&digits, n) {
            retained_digits.push(digits.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                break 'outer;
            }
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }

    for face_axes in combinations(&axes_all, n) {
        let fixed: Vec<u8> = axes_all
            .iter()
            .copied()
            .filter(|a| !face_axes.contains(a))
            .collect();
        for off_mask in 0u32..(1 << fixed.len()) {
            faces_checked += 1;
            let offsets: Vec<u8> = (0..fixed.len())
                .map(|b| (off_mask >> b & 1) as u8)
                .collect();
            // sub-n-faces of the face, scaled by 3: corner digit in {0,1,2}
            // on face axes, 3*offset on fixed axes
            let mut sub = vec![0u8; n];
            loop {
                sub_faces_checked += 1;
                let mut corner = vec![0i64; m];
                for (j, &a) in face_axes.iter().enumerate() {
                    corner[a as usize] = sub[j] as i64;
                }
                for (j, &a) in fixed.iter().enumerate() {
                    corner[a as usize] = 3 * offsets[j] as i64;
                }
                let sub_face =
                    Cell::new(corner.clone().into(), face_axes.clone()).expect("valid axes");
                // search all retained subcubes for one having sub_face as a face
                let mut witnessed = false;
                'search: for q in &retained_digits {
                    let cube = Cell::cube(
                        q.iter().map(|&d| d as i64).collect::<Vec<i64>>().into(),
                    );
                    for f in cube.faces(n).expect("n <= m") {
                        if f == sub_face {
                            witnessed = true;
                            break 'search;
                        }
                    }
                }
                if !witnessed {
                    counterexamples.push(RefinementCounterexample {
                        face_axes: face_axes.clone(),
                        face_offsets: offsets.clone(),
                        sub_face_corner: corner,
                    });
                }
                // odometer over sub digits
                let mut j = 0;
                loop {
                    if j == n {
                        break;
                    }
                    sub[j] += 1;
                    if sub[j] < 3 {
                        break;
                    }
                    sub[j] = 0;
                    j += 1;
                }
                if j == n {
                    break;
                }
            }
        }
    }

    Ok(RefinementReport { m, n, faces_checked, sub_faces_checked, counterexamples })
}

fn combinations(items: &[u8], size: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[u8], size: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}
