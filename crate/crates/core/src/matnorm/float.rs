use std::fmt;
use std::io::{Read, Write};

use nalgebra::DMatrix;

use super::MatNormError;

/// Tolerance on `‖gᵀg - I‖_max` for matrices claimed orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

/// Square matrix of doubles.
#[derive(Clone, PartialEq)]
pub struct FloatMatrix {
    inner: DMatrix<f64>,
}

impl FloatMatrix {
    pub fn identity(n: usize) -> Self {
        Self { inner: DMatrix::identity(n, n) }
    }

    pub fn from_dmatrix(inner: DMatrix<f64>) -> Result<Self, MatNormError> {
        if inner.nrows() != inner.ncols() {
            return Err(MatNormError::NotSquare);
        }
        Ok(Self { inner })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatNormError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatNormError::NotSquare);
        }
        Ok(Self { inner: DMatrix::from_fn(n, n, |i, j| rows[i][j]) })
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatNormError> {
        if self.dim() != other.dim() {
            return Err(MatNormError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(Self { inner: &self.inner * &other.inner })
    }

    pub fn transpose(&self) -> Self {
        Self { inner: self.inner.transpose() }
    }

    pub fn determinant(&self) -> f64 {
        self.inner.determinant()
    }

    /// `‖gᵀg - I‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        (self.inner.transpose() * &self.inner - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// Errors unless the matrix is orthogonal within tolerance with positive determinant.
    pub fn check_special_orthogonal(&self) -> Result<(), MatNormError> {
        let defect = self.orthogonality_defect();
        if defect > ORTHOGONALITY_TOLERANCE {
            return Err(MatNormError::NotOrthogonal(defect));
        }
        let det = self.determinant();
        if det <= 0.0 {
            return Err(MatNormError::NotSpecial(det));
        }
        Ok(())
    }

    /// Top-left `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self { inner: self.inner.view((0, 0), (k, k)).into_owned() }
    }

    /// `diag(self, I_{m - n})`.
    pub fn pad_identity(&self, m: usize) -> Self {
        let n = self.dim();
        assert!(m >= n, "cannot pad to a smaller size");
        let mut inner = DMatrix::identity(m, m);
        inner.view_mut((0, 0), (n, n)).copy_from(&self.inner);
        Self { inner }
    }

    /// Singular values of `self - I`, descending.
    pub fn displacement_singular_values(&self) -> Vec<f64> {
        let n = self.dim();
        let d = &self.inner - DMatrix::<f64>::identity(n, n);
        let mut s: Vec<f64> = d.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), MatNormError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for i in 0..self.dim() {
            w.write_record(self.inner.row(i).iter().map(ToString::to_string))
                .map_err(|e| MatNormError::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| MatNormError::Parse(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, MatNormError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| MatNormError::Parse(e.to_string()))?;
            let row = record
                .iter()
                .map(|c| c.trim().parse::<f64>().map_err(|_| MatNormError::Parse(c.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Debug for FloatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim())
            .map(|i| self.inner.row(i).iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Rotation by `theta` in the plane of coordinates `i`, `j` (zero-based),
/// taking `e_i` towards `e_j`.
pub fn planar_rotation(n: usize, i: usize, j: usize, theta: f64) -> FloatMatrix {
    let mut m = DMatrix::identity(n, n);
    let (s, c) = theta.sin_cos();
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(j, i)] = s;
    m[(i, j)] = -s;
    FloatMatrix { inner: m }
}

/// The rotation in `span{x, e_n}` carrying the unit vector `x` to `e_n` and
/// fixing the orthogonal complement. `x = e_n` gives the identity and
/// `x = -e_n` the half-turn in the last coordinate plane.
pub fn elementary_rotation(x: &[f64], n: usize) -> Result<FloatMatrix, MatNormError> {
    if x.len() != n || n == 0 {
        return Err(MatNormError::DimensionMismatch { left: x.len(), right: n });
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(MatNormError::NotUnit(norm));
    }
    let last = n - 1;
    let c = x[last];
    let s = x[..last].iter().map(|v| v * v).sum::<f64>().sqrt();
    if s == 0.0 {
        if c > 0.0 {
            return Ok(FloatMatrix::identity(n));
        }
        if n < 2 {
            return Err(MatNormError::NotSpecial(-1.0));
        }
        return Ok(planar_rotation(n, last - 1, last, std::f64::consts::PI));
    }
    // u: unit vector in the plane orthogonal to e_n; x = c·e_n + s·u
    let u: Vec<f64> = x[..last].iter().map(|v| v / s).chain(std::iter::once(0.0)).collect();
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            let e_i = if i == last { 1.0 } else { 0.0 };
            let e_j = if j == last { 1.0 } else { 0.0 };
            m[(i, j)] += (c - 1.0) * (u[i] * u[j] + e_i * e_j) + s * (e_i * u[j] - u[i] * e_j);
        }
    }
    Ok(FloatMatrix { inner: m })
}
