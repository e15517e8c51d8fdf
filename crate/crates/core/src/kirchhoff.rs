//! Exact spanning-tree counts of finite grid graphs.
//!
//! The matrix-tree theorem makes the count of spanning trees of a connected
//! graph equal to any cofactor of its Laplacian. For cubes of side `n` in
//! `Z^d` (free boundary) the reduced Laplacian is an integer matrix of size
//! `n^d - 1`, and its determinant is evaluated with fraction-free (Bareiss)
//! elimination: every intermediate entry stays an integer, so the count is
//! exact. These counts drive the finite-size entropy `log tau(G_n) / n^d`,
//! which approaches the series value from below as `n` grows — the ground
//! truth the series implementation is checked against.

use alloc::vec;
use alloc::vec::Vec;

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::real::{Dir, Engine};
use crate::{Error, Result};

/// Default cap on `n^d`; larger graphs are refused rather than attempted.
pub const DEFAULT_VERTEX_CAP: u64 = 4096;

/// Cube of side `n` in `Z^d` with nearest-neighbor edges and free boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridGraph {
    dimension: u32,
    side: u32,
}

impl GridGraph {
    pub fn new(dimension: u32, side: u32) -> Result<GridGraph> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        if side < 2 {
            return Err(Error::InvalidArgument("side length must be at least 2"));
        }
        Ok(GridGraph { dimension, side })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn vertex_count(&self) -> u64 {
        (self.side as u64).pow(self.dimension)
    }

    /// `d * n^(d-1) * (n-1)` edges.
    pub fn edge_count(&self) -> u64 {
        self.dimension as u64 * (self.side as u64).pow(self.dimension - 1) * (self.side as u64 - 1)
    }

    /// Vertex coordinates from its index (row-major, base `n`).
    fn coords(&self, mut v: u64) -> Vec<u32> {
        let n = self.side as u64;
        let mut c = Vec::with_capacity(self.dimension as usize);
        for _ in 0..self.dimension {
            c.push((v % n) as u32);
            v /= n;
        }
        c
    }

    /// Undirected edge list as index pairs.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        let n = self.side as u64;
        let mut out = Vec::with_capacity(self.edge_count() as usize);
        for v in 0..self.vertex_count() {
            let coords = self.coords(v);
            let mut stride = 1u64;
            for axis in 0..self.dimension as usize {
                if coords[axis] + 1 < self.side {
                    out.push((v, v + stride));
                }
                stride *= n;
            }
        }
        out
    }
}

/// Exact spanning-tree count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCount(pub BigUint);

impl core::fmt::Display for TreeCount {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Spanning-tree count via the reduced-Laplacian determinant, deleting
/// vertex 0. Refuses graphs over [`DEFAULT_VERTEX_CAP`] vertices.
pub fn tree_count(g: &GridGraph) -> Result<TreeCount> {
    tree_count_capped(g, DEFAULT_VERTEX_CAP)
}

pub fn tree_count_capped(g: &GridGraph, cap: u64) -> Result<TreeCount> {
    if g.vertex_count() > cap {
        return Err(Error::SizeCapExceeded {
            vertices: g.vertex_count(),
            cap,
        });
    }
    tree_count_deleting(g, 0)
}

/// Same count with an arbitrary vertex's row/column deleted; the result is
/// independent of the choice (matrix-tree theorem), which the tests exercise.
pub fn tree_count_deleting(g: &GridGraph, deleted: u64) -> Result<TreeCount> {
    let n = g.vertex_count();
    if deleted >= n {
        return Err(Error::OutOfRange("deleted vertex outside the graph"));
    }
    let m = (n - 1) as usize;
    // index mapping that skips the deleted vertex
    let reduced = |v: u64| -> Option<usize> {
        use core::cmp::Ordering::*;
        match v.cmp(&deleted) {
            Less => Some(v as usize),
            Equal => None,
            Greater => Some((v - 1) as usize),
        }
    };

    let mut mat = vec![vec![BigInt::zero(); m]; m];
    for (a, b) in g.edges() {
        let ra = reduced(a);
        let rb = reduced(b);
        if let Some(i) = ra {
            mat[i][i] += 1;
        }
        if let Some(j) = rb {
            mat[j][j] += 1;
        }
        if let (Some(i), Some(j)) = (ra, rb) {
            mat[i][j] -= 1;
            mat[j][i] -= 1;
        }
    }
    let det = bareiss_determinant(mat);
    debug_assert!(!det.is_negative(), "reduced Laplacian is positive definite");
    Ok(TreeCount(det.magnitude().clone()))
}

/// Fraction-free (Bareiss) determinant. All divisions are exact, so the
/// computation stays in integers; row swaps track the sign.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    let mut sign = 1i8;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &pivot * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev; // exact by the Bareiss identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exhaustive spanning-tree count by filtering edge subsets; the oracle the
/// determinant route is validated against. Only for tiny graphs.
pub fn tree_count_exhaustive(g: &GridGraph) -> Result<BigUint> {
    let v = g.vertex_count();
    if v > 10 {
        return Err(Error::SizeCapExceeded {
            vertices: v,
            cap: 10,
        });
    }
    let edges = g.edges();
    let e = edges.len();
    let need = (v - 1) as usize;
    let mut count: u64 = 0;
    // iterate over subsets of size need
    let mut idx: Vec<usize> = (0..need).collect();
    if need == 0 {
        return Ok(BigUint::one());
    }
    if need > e {
        return Ok(BigUint::zero());
    }
    loop {
        // union-find over the chosen edges
        let mut parent: Vec<u16> = (0..v as u16).collect();
        fn find(parent: &mut [u16], mut x: u16) -> u16 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let mut acyclic = true;
        for &i in &idx {
            let (a, b) = edges[i];
            let ra = find(&mut parent, a as u16);
            let rb = find(&mut parent, b as u16);
            if ra == rb {
                acyclic = false;
                break;
            }
            parent[ra as usize] = rb;
        }
        if acyclic {
            count += 1; // |V|-1 acyclic edges on |V| vertices span
        }
        // next combination in lexicographic order
        let mut i = need;
        loop {
            if i == 0 {
                return Ok(BigUint::from(count));
            }
            i -= 1;
            if idx[i] != i + e - need {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..need {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Finite-size entropy `log tau(G_n) / n^d`.
pub fn entropy_estimate(eng: &mut Engine, d: u32, n: u32) -> Result<BigFloat> {
    let g = GridGraph::new(d, n)?;
    let tau = tree_count(&g)?;
    let tau_f = eng.from_biguint_exact(&tau.0);
    let log = eng.ln(&tau_f, Dir::Near);
    let volume = eng.from_u64(g.vertex_count());
    Ok(eng.div(&log, &volume, Dir::Near))
}

/// One row of a convergence report.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub side: u32,
    pub tree_count: TreeCount,
    pub entropy: BigFloat,
    /// `reference - entropy` when a series reference value was supplied.
    pub gap: Option<BigFloat>,
}

/// Finite-size entropies for `n = 2..=n_max`, with gaps against a reference
/// value (typically the series estimate of `h_d`).
pub fn convergence_report(
    eng: &mut Engine,
    d: u32,
    n_max: u32,
    reference: Option<&BigFloat>,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let g = GridGraph::new(d, n)?;
        let tau = tree_count(&g)?;
        let tau_f = eng.from_biguint_exact(&tau.0);
        let log = eng.ln(&tau_f, Dir::Near);
        let volume = eng.from_u64(g.vertex_count());
        let entropy = eng.div(&log, &volume, Dir::Near);
        let gap = reference.map(|r| eng.sub(r, &entropy, Dir::Near));
        rows.push(ConvergenceRow {
            side: n,
            tree_count: tau,
            entropy,
            gap,
        });
    }
    Ok(rows)
}
