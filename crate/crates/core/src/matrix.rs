//! Dense matrices of polynomials; column `j` is the image of the `j`-th
//! source basis vector.

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::module::{FreeModuleRef, Vector};
use crate::poly::Polynomial;
use crate::ring::{Ring, RingRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: RingRef,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl Matrix {
    pub fn zero(ring: &RingRef, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, entries: vec![vec![Polynomial::zero(ring); cols]; rows] }
    }

    pub fn from_columns(ring: &RingRef, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zero(ring, rows, columns.len());
        for (j, v) in columns.iter().enumerate() {
            for (i, p) in v.to_polys().into_iter().enumerate() {
                m.entries[i][j] = p;
            }
        }
        m
    }

    pub fn from_rows(ring: &RingRef, entries: Vec<Vec<Polynomial>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix".into()));
        }
        Ok(Matrix { ring: ring.clone(), rows, cols, entries })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i][j] = p;
    }

    pub fn column(&self, j: usize, module: &FreeModuleRef) -> Vector {
        let col: Vec<Polynomial> = (0..self.rows).map(|i| self.entries[i][j].clone()).collect();
        Vector::from_polys(module, &col).expect("matching rank")
    }

    pub fn columns(&self, module: &FreeModuleRef) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j, module)).collect()
    }

    pub fn row_vectors(&self, module: &FreeModuleRef) -> Vec<Vector> {
        self.transpose().columns(module)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || !Ring::same(&self.ring, &other.ring) {
            return Err(Error::InvalidArgument("matrix shapes do not match".into()));
        }
        let mut out = Matrix::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.entries[k][j];
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i][j] = out.entries[i][j].add(&a.mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|p| p.is_zero()))
    }

    pub fn remove_row(&mut self, i: usize) {
        self.entries.remove(i);
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, j: usize) {
        for r in &mut self.entries {
            r.remove(j);
        }
        self.cols -= 1;
    }

    /// Replaces column `dst` by `a * col[dst] + b * col[src]`.
    pub fn combine_columns(&mut self, dst: usize, a: &Polynomial, src: usize, b: &Polynomial) -> Result<()> {
        for i in 0..self.rows {
            let x = a.mul(&self.entries[i][dst])?;
            let y = b.mul(&self.entries[i][src])?;
            self.entries[i][dst] = x.add(&y)?;
        }
        Ok(())
    }

    pub fn scale_column(&mut self, j: usize, c: &Coeff) {
        for i in 0..self.rows {
            self.entries[i][j] = self.entries[i][j].scale(c);
        }
    }

    /// Applies a ring map to every entry.
    pub fn map(&self, target: &RingRef, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Matrix> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { ring: target.clone(), rows: self.rows, cols: self.cols, entries })
    }
}
