//! Dense row-major matrices over a prime field.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// A dense matrix with entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FieldMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::InvalidParameter(format!(
                "entry {bad} not reduced mod {}",
                field.modulus()
            )));
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn random<R: Rng>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.field.modulus());
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise scaling by a field element.
    pub fn scale(&self, k: u64) -> Self {
        let data = self.data.iter().map(|&a| self.field.mul(a, k)).collect();
        Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// In-place `self += other * k`; the workhorse of encoders and decoders.
    pub fn add_scaled(&mut self, other: &Self, k: u64) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = self.field.add(*a, self.field.mul(b, k));
        }
        Ok(())
    }

    /// Schoolbook matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.modulus() as u128;
        let mut data = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u128;
                if a == 0 {
                    continue;
                }
                let row = k * other.cols;
                for j in 0..other.cols {
                    let cell = &mut data[i * other.cols + j];
                    *cell = ((*cell as u128 + a * other.data[row + j] as u128) % p) as u64;
                }
            }
        }
        Ok(Self {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Copy of the `rows x cols` window anchored at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "window {rows}x{cols}@({r0},{c0}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            data.extend_from_slice(&self.data[r * self.cols + c0..r * self.cols + c0 + cols]);
        }
        Ok(Self {
            field: self.field,
            rows,
            cols,
            data,
        })
    }

    /// Writes `block` into the window anchored at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Self) -> Result<()> {
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "block {}x{}@({r0},{c0}) outside {}x{}",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        for r in 0..block.rows {
            let src = &block.data[r * block.cols..(r + 1) * block.cols];
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(src);
        }
        Ok(())
    }

    /// Zero-pads to a larger shape; explicit opt-in for callers whose
    /// dimensions do not divide evenly.
    pub fn zero_pad(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows || cols < self.cols {
            return Err(Error::DimensionMismatch(
                "padding cannot shrink a matrix".into(),
            ));
        }
        let mut out = Self::zero(self.field, rows, cols);
        out.place(0, 0, self)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::seeded_rng;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn construction_validates_entries() {
        assert!(FieldMatrix::new(f7(), 2, 2, vec![0, 1, 2, 7]).is_err());
        assert!(FieldMatrix::new(f7(), 2, 2, vec![0, 1, 2]).is_err());
        assert!(FieldMatrix::new(f7(), 2, 2, vec![0, 1, 2, 3]).is_ok());
    }

    #[test]
    fn product_matches_schoolbook() {
        let f = PrimeField::new(7).unwrap();
        let mut rng = seeded_rng(3, 0);
        let a = FieldMatrix::random(f, 2, 2, &mut rng);
        let b = FieldMatrix::random(f, 2, 2, &mut rng);
        let c = a.mul(&b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0u64;
                for k in 0..2 {
                    acc = (acc + a.get(i, k) * b.get(k, j)) % 7;
                }
                assert_eq!(c.get(i, j), acc);
            }
        }
    }

    #[test]
    fn zero_times_anything_is_zero() {
        let a = FieldMatrix::zero(f7(), 3, 2);
        let mut rng = seeded_rng(1, 0);
        let b = FieldMatrix::random(f7(), 2, 4, &mut rng);
        assert!(a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn submatrix_place_roundtrip() {
        let mut rng = seeded_rng(9, 0);
        let m = FieldMatrix::random(f7(), 4, 6, &mut rng);
        let block = m.submatrix(2, 3, 2, 3).unwrap();
        let mut copy = m.clone();
        copy.place(2, 3, &block).unwrap();
        assert_eq!(copy, m);
        assert!(m.submatrix(3, 0, 2, 2).is_err());
    }

    #[test]
    fn conformability_errors() {
        let a = FieldMatrix::zero(f7(), 2, 3);
        let b = FieldMatrix::zero(f7(), 2, 3);
        assert!(a.mul(&b).is_err());
        let g = PrimeField::new(11).unwrap();
        let c = FieldMatrix::zero(g, 3, 2);
        assert!(matches!(a.mul(&c), Err(Error::FieldMismatch(7, 11))));
    }
}
