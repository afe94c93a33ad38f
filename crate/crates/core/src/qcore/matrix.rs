use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: "positive dimensions".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Convenience constructor from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows[0].as_ref().len();
        let mut entries = Vec::with_capacity(n * m);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), m, "ragged rows");
            entries.extend_from_slice(r);
        }
        Self::from_vec(n, m, entries).expect("non-empty rows")
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Complex>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&x| Complex::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn column(amplitudes: &[Complex]) -> Self {
        Self::from_vec(amplitudes.len(), 1, amplitudes.to_vec()).expect("non-empty vector")
    }

    /// Outer product |u⟩⟨v| of two amplitude vectors.
    pub fn outer(u: &[Complex], v: &[Complex]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    /// |i⟩⟨j| in dimension d.
    pub fn basis_op(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.entries[r * self.cols + c]
    }

    pub fn shape(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right operand", self.cols),
                found: rhs.shape(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.entries[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self.get(i, j);
            }
        }
        out
    }

    /// Kronecker product; entry `(i*rb + k, j*cb + l)` is `a(i,j) * b(k,l)`.
    pub fn tensor(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (rb, cb) = (rhs.rows, rhs.cols);
        let mut out = ComplexMatrix::zeros(self.rows * rb, self.cols * cb);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rb {
                    for l in 0..cb {
                        out[(i * rb + k, j * cb + l)] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_shape(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_shape(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, s: Complex) -> ComplexMatrix {
        ComplexMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.scale(Complex::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry difference; infinite if the shapes differ.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&rhs.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(rhs) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.dagger(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .dagger()
                .matmul(self)
                .map(|p| p.approx_eq(&ComplexMatrix::identity(self.rows), tol))
                .unwrap_or(false)
    }

    /// Multiplies by the phase that makes the first nonzero entry (in
    /// column-major scan order) real and positive. Two gates that differ only
    /// by a global phase have identical canonical forms.
    pub fn phase_canonical(&self) -> ComplexMatrix {
        const EPS: f64 = 1e-9;
        let pivot = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .find(|z| z.norm() > EPS);
        match pivot {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }

    /// Equality up to a global phase.
    pub fn phase_eq(&self, rhs: &ComplexMatrix, tol: f64) -> bool {
        self.phase_canonical().approx_eq(&rhs.phase_canonical(), tol)
    }

    /// Treats a column matrix as an amplitude vector.
    pub fn as_vector(&self) -> Option<&[Complex]> {
        (self.cols == 1).then_some(&self.entries[..])
    }

    fn check_same_shape(&self, rhs: &ComplexMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch { expected: self.shape(), found: rhs.shape() });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Serialized as a list of rows, each a list of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            let row: Vec<[f64; 2]> = (0..self.cols)
                .map(|c| {
                    let z = self.get(r, c);
                    [z.re, z.im]
                })
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Inner product ⟨u|v⟩.
pub fn inner(u: &[Complex], v: &[Complex]) -> Complex {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Applies a square matrix to an amplitude vector.
pub fn apply(m: &ComplexMatrix, v: &[Complex]) -> Result<Vec<Complex>> {
    if m.cols() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", m.cols()),
            found: format!("length {}", v.len()),
        });
    }
    Ok((0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c) * v[c]).sum()).collect())
}
