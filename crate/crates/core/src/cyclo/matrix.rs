use num_complex::Complex64;

use super::{CycloNumber, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix over a [`Scalar`].
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        self.map(T::to_complex)
    }

    /// Matrix product. Zero entries are skipped, which keeps the exact
    /// projector products (one third dense) cheap.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "multiply",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i * other.cols + j].add_assign_ref(&a.mul_ref(b));
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = a.mul_ref(other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, "add", |a, b| {
            let mut a = a.clone();
            a.add_assign_ref(b);
            a
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, "sub", |a, b| a.clone() - b.clone())
    }

    fn zip(&self, other: &Self, op: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            t.add_assign_ref(self.get(i, i));
        }
        t
    }

    /// Largest entrywise distance, measured in the complex embedding.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.to_complex() - b.to_complex()).norm())
            .fold(0.0, f64::max)
    }

    /// `A·A† = I`, exactly on the exact path or to `tol` per entry on the float path.
    pub fn is_unitary_within(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let Ok(prod) = self.multiply(&self.adjoint()) else {
            return false;
        };
        let id = Self::identity(self.rows);
        prod.data
            .iter()
            .zip(&id.data)
            .all(|(a, b)| (a.clone() - b.clone()).is_negligible(tol))
    }

    /// Exact unitarity on the exact path; `1e-12` entrywise on the float path.
    pub fn is_unitary(&self) -> bool {
        self.is_unitary_within(1e-12)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| (self.get(i, j).clone() - self.get(j, i).conj()).is_negligible(1e-12))
            })
    }

    /// Rank by Gaussian elimination; entries with `|x| ≤ tol` count as zero
    /// (exact path: only exact zeros).
    pub fn rank_within(&self, tol: f64) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = if T::is_exact() {
                (rank..m.rows).find(|&r| !m.get(r, col).is_zero())
            } else {
                (rank..m.rows)
                    .filter(|&r| !m.get(r, col).is_negligible(tol))
                    .max_by(|&r, &s| {
                        m.get(r, col)
                            .to_complex()
                            .norm()
                            .total_cmp(&m.get(s, col).to_complex().norm())
                    })
            };
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            let inv = m.get(rank, col).inv().expect("nonzero pivot");
            for r in rank + 1..m.rows {
                let f = m.get(r, col).mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let d = f.mul_ref(m.get(rank, c));
                    let v = m.get(r, c).clone() - d;
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Determinant of a square matrix by elimination.
    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "determinant",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(T::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = det.mul_ref(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = m.get(r, col).mul_ref(&inv);
                for c in col..n {
                    let v = m.get(r, c).clone() - f.mul_ref(m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `self · x = rhs` for square, nonsingular `self`.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.rows;
        if !self.is_square() || rhs.len() != n {
            return Err(Error::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: (rhs.len(), 1),
            });
        }
        let mut m = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = if T::is_exact() {
                (col..n).find(|&r| !m.get(r, col).is_zero())
            } else {
                (col..n).max_by(|&r, &s| {
                    m.get(r, col)
                        .to_complex()
                        .norm()
                        .total_cmp(&m.get(s, col).to_complex().norm())
                })
            };
            let p = pivot.ok_or(Error::Singular)?;
            let inv = m.get(p, col).inv().ok_or(Error::Singular)?;
            m.swap_rows(p, col);
            b.swap(p, col);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.get(r, col).mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).clone() - f.mul_ref(m.get(col, c));
                    m.set(r, c, v);
                }
                b[r] = b[r].clone() - f.mul_ref(&b[col]);
            }
        }
        Ok((0..n).map(|i| b[i].mul_ref(&m.get(i, i).inv().expect("pivot"))).collect())
    }

    /// `self · v`.
    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.dim(), 1),
            });
        }
        let mut out = vec![T::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, x) in self.row(i).iter().zip(v.amplitudes()) {
                if !a.is_zero() && !x.is_zero() {
                    o.add_assign_ref(&a.mul_ref(x));
                }
            }
        }
        StateVector::from_amplitudes(out)
    }
}

impl DenseMatrix<CycloNumber> {
    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.rank_within(0.0)
    }
}

/// Index of a ket given as ternary digits, leftmost digit most significant.
pub fn ket_index(digits: &[u8]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * 3 + d as usize)
}

/// The `n`-digit ternary label of basis index `index`.
pub fn ket_label(index: usize, n: usize) -> String {
    let mut digits = vec![b'0'; n];
    let mut i = index;
    for d in digits.iter_mut().rev() {
        *d = b'0' + (i % 3) as u8;
        i /= 3;
    }
    String::from_utf8(digits).expect("ascii")
}

/// Amplitudes over the `3ⁿ` computational basis kets, leftmost ket symbol
/// most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    sites: usize,
    amps: Vec<T>,
}

impl<T: Scalar> StateVector<T> {
    pub fn from_amplitudes(amps: Vec<T>) -> Result<Self> {
        let mut dim = 1;
        let mut sites = 0;
        while dim < amps.len() {
            dim *= 3;
            sites += 1;
        }
        if dim != amps.len() {
            return Err(Error::InvalidArgument(format!(
                "state dimension {} is not a power of 3",
                amps.len()
            )));
        }
        Ok(Self { sites, amps })
    }

    pub fn zeros(sites: usize) -> Self {
        Self {
            sites,
            amps: vec![T::zero(); 3usize.pow(sites as u32)],
        }
    }

    pub fn basis(sites: usize, index: usize) -> Self {
        let mut s = Self::zeros(sites);
        s.amps[index] = T::one();
        s
    }

    /// Basis state from a ket label such as `"01201"`.
    pub fn from_ket(label: &str) -> Result<Self> {
        let digits = parse_ket(label)?;
        Ok(Self::basis(digits.len(), ket_index(&digits)))
    }

    pub fn num_sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> &T {
        &self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<T> {
        self.amps
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op: "inner",
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        let mut acc = T::zero();
        for (a, b) in self.amps.iter().zip(&other.amps) {
            if !a.is_zero() && !b.is_zero() {
                acc.add_assign_ref(&a.conj().mul_ref(b));
            }
        }
        Ok(acc)
    }

    /// `Σ|amp|²` as a scalar (real-valued).
    pub fn norm_sqr(&self) -> T {
        self.inner(self).expect("same dimension")
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            sites: self.sites,
            amps: self.amps.iter().map(|a| a.mul_ref(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(Self {
            sites: self.sites,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| {
                    let mut a = a.clone();
                    a.add_assign_ref(b);
                    a
                })
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn nonzero_count(&self) -> usize {
        self.amps.iter().filter(|a| !a.is_zero()).count()
    }

    /// First basis index with a nonzero amplitude.
    pub fn leading_index(&self) -> Option<usize> {
        self.amps.iter().position(|a| !a.is_zero())
    }

    pub fn to_complex(&self) -> StateVector<Complex64> {
        StateVector {
            sites: self.sites,
            amps: self.amps.iter().map(T::to_complex).collect(),
        }
    }

    /// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)` evaluated in the scalar field. Exact on the
    /// exact path (the value is real).
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        let ov = self.inner(other)?;
        let num = ov.conj().mul_ref(&ov);
        let den = self.norm_sqr().mul_ref(&other.norm_sqr());
        let inv = den.inv().ok_or(Error::Singular)?;
        Ok(num.mul_ref(&inv))
    }

    pub fn as_column(&self) -> DenseMatrix<T> {
        DenseMatrix::new(self.dim(), 1, self.amps.clone()).expect("nonempty")
    }
}

impl StateVector<Complex64> {
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(&Complex64::new(1.0 / n, 0.0))
    }
}

pub(crate) fn parse_ket(label: &str) -> Result<Vec<u8>> {
    let label = label.trim().trim_start_matches('|').trim_end_matches('⟩').trim_end_matches('>');
    if label.is_empty() {
        return Err(Error::Parse("empty ket".into()));
    }
    label
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            _ => Err(Error::Parse(format!("bad ket symbol {c:?} in {label:?}"))),
        })
        .collect()
}
