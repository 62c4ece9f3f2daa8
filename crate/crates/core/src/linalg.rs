//! k×k matrices over GF(q) and their block action on points of (F_q^n)^k.
//!
//! k is tiny throughout (the interesting scale lives in n), so matrices are
//! dense and elimination is the plain Gaussian kind. Points store their k·n
//! coordinates flat in block-major order: coordinate (j, ℓ) sits at j·n + ℓ.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    k: usize,
    /// row-major, length k*k
    entries: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    field: FieldSpec,
    k: usize,
    n: usize,
    /// block-major, length k*n
    coords: Vec<FieldElement>,
}

impl Matrix {
    pub fn new(field: FieldSpec, k: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if k == 0 || entries.len() != k * k {
            return Err(Error::DimensionMismatch(format!(
                "k={k} needs {} entries, got {}",
                k * k,
                entries.len()
            )));
        }
        Ok(Matrix { field, k, entries })
    }

    /// Row-major integer entries, reduced into the field (negatives allowed).
    pub fn from_ints(field: &FieldSpec, k: usize, entries: &[i64]) -> Result<Self> {
        let elems = entries.iter().map(|&v| field.from_int(v)).collect();
        Matrix::new(field.clone(), k, elems)
    }

    pub fn identity(field: &FieldSpec, k: usize) -> Self {
        let mut entries = vec![field.zero(); k * k];
        for i in 0..k {
            entries[i * k + i] = field.one();
        }
        Matrix {
            field: field.clone(),
            k,
            entries,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row * self.k + col]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    fn check_compat(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!(
                "k mismatch: {} vs {}",
                self.k, other.k
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compat(other)?;
        let f = &self.field;
        let k = self.k;
        let mut out = vec![f.zero(); k * k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = f.zero();
                for s in 0..k {
                    acc = f.add(&acc, &f.mul(self.entry(i, s), other.entry(s, j)));
                }
                out[i * k + j] = acc;
            }
        }
        Matrix::new(f.clone(), k, out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compat(other)?;
        let f = &self.field;
        let out = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Matrix::new(f.clone(), self.k, out)
    }

    /// Determinant by Gaussian elimination with pivoting.
    pub fn det(&self) -> FieldElement {
        let f = &self.field;
        let k = self.k;
        let mut a = self.entries.clone();
        let mut det = f.one();
        for col in 0..k {
            let pivot_row = (col..k).find(|&r| !f.is_zero(&a[r * k + col]));
            let pr = match pivot_row {
                Some(r) => r,
                None => return f.zero(),
            };
            if pr != col {
                for j in 0..k {
                    a.swap(pr * k + j, col * k + j);
                }
                det = f.neg(&det);
            }
            let pivot = a[col * k + col].clone();
            det = f.mul(&det, &pivot);
            let pinv = f.inv(&pivot).expect("pivot nonzero");
            for r in col + 1..k {
                let factor = f.mul(&a[r * k + col], &pinv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..k {
                    let sub = f.mul(&factor, &a[col * k + j]);
                    a[r * k + j] = f.sub(&a[r * k + j], &sub);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan; errors on singular input.
    pub fn inverse(&self) -> Result<Matrix> {
        let f = &self.field;
        let k = self.k;
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(f, k).entries;
        for col in 0..k {
            let pr = (col..k)
                .find(|&r| !f.is_zero(&a[r * k + col]))
                .ok_or(Error::SingularMatrix)?;
            if pr != col {
                for j in 0..k {
                    a.swap(pr * k + j, col * k + j);
                    inv.swap(pr * k + j, col * k + j);
                }
            }
            let pinv = f.inv(&a[col * k + col])?;
            for j in 0..k {
                a[col * k + j] = f.mul(&a[col * k + j], &pinv);
                inv[col * k + j] = f.mul(&inv[col * k + j], &pinv);
            }
            for r in 0..k {
                if r == col || f.is_zero(&a[r * k + col]) {
                    continue;
                }
                let factor = a[r * k + col].clone();
                for j in 0..k {
                    let s1 = f.mul(&factor, &a[col * k + j]);
                    a[r * k + j] = f.sub(&a[r * k + j], &s1);
                    let s2 = f.mul(&factor, &inv[col * k + j]);
                    inv[r * k + j] = f.sub(&inv[r * k + j], &s2);
                }
            }
        }
        Matrix::new(f.clone(), k, inv)
    }

    /// Block action on a point: output block j, component ℓ is
    /// Σ_s M[j][s] · x^(s)(ℓ).
    pub fn apply_block(&self, x: &Point) -> Result<Point> {
        if self.field != x.field {
            return Err(Error::FieldMismatch);
        }
        if self.k != x.k {
            return Err(Error::DimensionMismatch(format!(
                "matrix k={} vs point k={}",
                self.k, x.k
            )));
        }
        let f = &self.field;
        let mut coords = vec![f.zero(); x.k * x.n];
        for j in 0..x.k {
            for l in 0..x.n {
                let mut acc = f.zero();
                for s in 0..x.k {
                    acc = f.add(&acc, &f.mul(self.entry(j, s), x.coord(s, l)));
                }
                coords[j * x.n + l] = acc;
            }
        }
        Ok(Point {
            field: f.clone(),
            k: x.k,
            n: x.n,
            coords,
        })
    }
}

impl Point {
    pub fn new(field: FieldSpec, k: usize, n: usize, coords: Vec<FieldElement>) -> Result<Self> {
        if k == 0 || n == 0 || coords.len() != k * n {
            return Err(Error::DimensionMismatch(format!(
                "point k={k}, n={n} needs {} coordinates, got {}",
                k * n,
                coords.len()
            )));
        }
        Ok(Point {
            field,
            k,
            n,
            coords,
        })
    }

    pub fn from_ints(field: &FieldSpec, k: usize, n: usize, coords: &[i64]) -> Result<Self> {
        let elems = coords.iter().map(|&v| field.from_int(v)).collect();
        Point::new(field.clone(), k, n, elems)
    }

    pub fn zero(field: &FieldSpec, k: usize, n: usize) -> Self {
        Point {
            field: field.clone(),
            k,
            n,
            coords: vec![field.zero(); k * n],
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Coordinate (block j, component ℓ).
    pub fn coord(&self, j: usize, l: usize) -> &FieldElement {
        &self.coords[j * self.n + l]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.field.is_zero(c))
    }

    fn check_compat(&self, other: &Point) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.k != other.k || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "point shape ({}, {}) vs ({}, {})",
                self.k, self.n, other.k, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        self.check_compat(other)?;
        let f = &self.field;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Point::new(f.clone(), self.k, self.n, coords)
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.check_compat(other)?;
        let f = &self.field;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Point::new(f.clone(), self.k, self.n, coords)
    }

    /// Flat index in 0..q^{kn} under the block-major coordinate order; pairs
    /// with `from_flat_index` for stable point enumeration.
    pub fn flat_index(&self) -> u128 {
        let q = self.field.q() as u128;
        let mut idx = 0u128;
        for c in self.coords.iter().rev() {
            idx = idx * q + self.field.index_of(c) as u128;
        }
        idx
    }

    pub fn from_flat_index(field: &FieldSpec, k: usize, n: usize, mut idx: u128) -> Point {
        let q = field.q() as u128;
        let mut coords = Vec::with_capacity(k * n);
        for _ in 0..k * n {
            coords.push(field.from_index((idx % q) as u64));
            idx /= q;
        }
        Point {
            field: field.clone(),
            k,
            n,
            coords,
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}
