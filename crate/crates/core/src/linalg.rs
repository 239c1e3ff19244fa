//! Exact linear algebra: rational kernels and small matrices over [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::coeff::{Rational, Scalar};
use crate::error::{Error, Result};

/// Sparse rational row.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incremental row reduction. Rows are kept with pivot 1 and reduced
/// against each other, so the state is always in reduced echelon form.
#[derive(Clone, Debug, Default)]
pub struct RowReducer {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        RowReducer { ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let hit = row.keys().find(|c| self.rows.contains_key(c)).copied();
            let Some(col) = hit else { return row };
            let factor = row.remove(&col).expect("present");
            for (&c, v) in &self.rows[&col] {
                if c == col {
                    continue;
                }
                let entry = row.entry(c).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    row.remove(&c);
                }
            }
        }
    }

    /// Adds an equation; returns `true` if it raised the rank.
    pub fn push(&mut self, row: SparseRow) -> bool {
        let row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut row = self.reduce(row);
        let Some((&pivot, lead)) = row.iter().next() else { return false };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(f) = other.remove(&pivot) {
                for (&c, v) in &row {
                    if c == pivot {
                        continue;
                    }
                    let entry = other.entry(c).or_insert_with(Rational::zero);
                    *entry -= &f * v;
                    if entry.is_zero() {
                        other.remove(&c);
                    }
                }
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    /// Kernel basis in reduced row echelon form.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.ncols];
            v[f] = Rational::one();
            for (&p, row) in &self.rows {
                if let Some(a) = row.get(&f) {
                    v[p] = -a.clone();
                }
            }
            basis.push(v);
        }
        rref(basis)
    }
}

/// Reduced row echelon form with zero rows dropped. Pivots are chosen
/// leftmost, then by smallest row index.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut lead = 0;
    for col in 0..ncols {
        let Some(pivot) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(lead, pivot);
        let inv = rows[lead][col].recip();
        for v in rows[lead].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    rows.truncate(lead);
    rows
}

/// Kernel of a dense rational matrix, as a reduced echelon basis.
pub fn exact_kernel(matrix: &[Vec<Rational>], ncols: usize) -> Result<Vec<Vec<Rational>>> {
    let mut red = RowReducer::new(ncols);
    for row in matrix {
        if row.len() != ncols {
            return Err(Error::DimensionMismatch(ncols, row.len()));
        }
        red.push(row.iter().cloned().enumerate().collect());
    }
    Ok(red.kernel())
}

/// Dense square or rectangular matrix over [`Scalar`].
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn scale(&self, s: &Scalar) -> ScalarMatrix {
        ScalarMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row: Result<Vec<_>> = (0..self.cols).map(|c| self.get(r, c).to_json()).collect();
            rows.push(serde_json::Value::Array(row?));
        }
        Ok(serde_json::Value::Array(rows))
    }

    /// Rank over `Q(i, sqrt 2)`; entries must not involve `h`.
    pub fn rank(&self) -> Result<usize> {
        if !self.data.iter().all(Scalar::is_h_free) {
            return Err(Error::InvalidArgument("rank needs h-free entries".into()));
        }
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else { continue };
            for c in 0..m.cols {
                m.data.swap(rank * m.cols + c, pivot * m.cols + c);
            }
            let inv = m.get(rank, col).inverse().expect("nonzero field element is invertible");
            for r in rank + 1..m.rows {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col) * &inv;
                for c in col..m.cols {
                    let v = m.get(r, c) - &(&f * m.get(rank, c));
                    m.set(r, c, v);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        Ok(rank)
    }
}

impl Mul for &ScalarMatrix {
    type Output = ScalarMatrix;
    fn mul(self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = ScalarMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }
}

impl Add for &ScalarMatrix {
    type Output = ScalarMatrix;
    fn add(self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shape mismatch");
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ScalarMatrix {
    type Output = ScalarMatrix;
    fn sub(self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shape mismatch");
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScalarMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
