//! The complete graph `K_n` and its canonical edge order.
//!
//! Edges are indexed lexicographically over pairs `(u, v)` with `u < v`,
//! vertices 0-based. For `K_4` the order is `01 02 03 12 13 23`.

use crate::error::{domain, Result};

pub fn edge_count(n: usize) -> Result<usize> {
    if n < 2 {
        return domain(format!("complete graph needs n >= 2, got {n}"));
    }
    Ok(n * (n - 1) / 2)
}

pub fn edge_index(u: usize, v: usize, n: usize) -> Result<usize> {
    if u >= v || v >= n {
        return domain(format!("edge ({u},{v}) is not a pair u < v < {n}"));
    }
    Ok(raw_index(u, v, n))
}

pub fn edge_endpoints(e: usize, n: usize) -> Result<(usize, usize)> {
    let m = edge_count(n)?;
    if e >= m {
        return domain(format!("edge index {e} out of range for K_{n} ({m} edges)"));
    }
    // Row u owns indices [start(u), start(u) + n - 1 - u).
    let mut u = 0;
    let mut start = 0;
    loop {
        let row = n - 1 - u;
        if e < start + row {
            return Ok((u, u + 1 + (e - start)));
        }
        start += row;
        u += 1;
    }
}

#[inline]
fn raw_index(u: usize, v: usize, n: usize) -> usize {
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// `K_n` with a precomputed endpoint table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteGraph {
    n: usize,
    endpoints: Vec<(usize, usize)>,
}

impl CompleteGraph {
    pub fn new(n: usize) -> Result<Self> {
        let m = edge_count(n)?;
        let mut endpoints = Vec::with_capacity(m);
        for u in 0..n {
            for v in u + 1..n {
                endpoints.push((u, v));
            }
        }
        Ok(Self { n, endpoints })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn index(&self, u: usize, v: usize) -> Result<usize> {
        edge_index(u, v, self.n)
    }

    /// Endpoints of edge `e`. Panics if `e` is out of range.
    #[inline]
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.endpoints.iter().copied()
    }
}
