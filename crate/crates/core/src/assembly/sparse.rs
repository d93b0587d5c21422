use std::collections::BTreeMap;
use std::io::Write;

use crate::format::fmt_g17;
use crate::pencil::SymmetricMatrix;

/// Symmetric matrix holding its upper triangle row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    rows: Vec<BTreeMap<usize, f64>>,
}

impl SparseSymmetric {
    pub fn new(n: usize) -> Self {
        Self { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `value` at `(i, j)` and, implicitly, at `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        *self.rows[r].entry(c).or_insert(0.0) += value;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        self.rows[r].get(&c).copied().unwrap_or(0.0)
    }

    /// Stored upper-triangle entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, &v) in row {
                y[i] += v * x[j];
                if j != i {
                    y[j] += v * x[i];
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, &v) in row {
                m.add(i, j, v);
            }
        }
        m
    }

    /// Full (both triangles) `i j value` triplets in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut full: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, &v) in row {
                full[i].insert(j, v);
                full[j].insert(i, v);
            }
        }
        full.into_iter()
            .enumerate()
            .flat_map(|(i, row)| row.into_iter().map(move |(j, v)| (i, j, v)))
            .collect()
    }

    pub fn write_coo<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (i, j, v) in self.triplets() {
            writeln!(out, "{i} {j} {}", fmt_g17(v))?;
        }
        out.flush()
    }
}
