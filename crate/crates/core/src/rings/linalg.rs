//! Exact linear algebra over the coefficient backends.
//!
//! `solve_linear` succeeds exactly when the matrix is invertible over the
//! ring itself, not merely over its fraction field. Fields use Gaussian
//! elimination; `Z` and `Z[ζ_m]` use a fraction-free Bareiss determinant, a
//! unit test on it, and the adjugate solve (Cramer's rule); split rings are
//! solved one component at a time.

use super::{Ring, RingElement, RingError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl Matrix {
    /// Row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<RingElement>) -> Result<Self, RingError> {
        if entries.len() != rows * cols {
            return Err(RingError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn column(entries: Vec<RingElement>) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        self.rows == self.cols && *self == Self::identity(ring, self.rows)
    }

    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Result<Matrix, RingError> {
        if self.cols != other.rows {
            return Err(RingError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(ring.zero(), |acc, k| {
                ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)))
            })
        }))
    }

    fn check_ring(&self, ring: &Ring) -> Result<(), RingError> {
        match self.entries.iter().find(|e| !ring.contains(e)) {
            Some(e) => Err(RingError::DescriptorMismatch(format!(
                "entry {e:?} is not an element of {ring}"
            ))),
            None => Ok(()),
        }
    }

    /// Component `k` of a matrix over a split ring.
    fn component(&self, k: usize) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| match e {
                    RingElement::Split(v) => v[k].clone(),
                    _ => unreachable!("split-ring matrix"),
                })
                .collect(),
        }
    }

    fn from_components(parts: &[Matrix]) -> Matrix {
        let (rows, cols) = (parts[0].rows, parts[0].cols);
        let entries = (0..rows * cols)
            .map(|idx| RingElement::Split(parts.iter().map(|m| m.entries[idx].clone()).collect()))
            .collect();
        Matrix { rows, cols, entries }
    }
}

/// Determinant by fraction-free Bareiss elimination with row pivoting.
pub fn determinant(ring: &Ring, a: &Matrix) -> Result<RingElement, RingError> {
    if a.rows != a.cols {
        return Err(RingError::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    a.check_ring(ring)?;
    if let Some((base, group)) = ring.split_parts() {
        let parts = (0..group.order())
            .map(|k| determinant(base, &a.component(k)))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(RingElement::Split(parts));
    }
    let n = a.rows;
    let mut m: Vec<Vec<RingElement>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !ring.is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(ring.zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(&ring.mul(&m[i][j], &m[k][k]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = ring
                    .exact_div(&t, &prev)
                    .expect("Bareiss divisions are exact");
            }
            m[i][k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { ring.one() } else { m[n - 1][n - 1].clone() };
    Ok(if negate { ring.neg(&det) } else { det })
}

/// Solves `A·x = b` for square `A` (any number of right-hand columns).
/// Returns `None` when `A` is not invertible over the ring.
pub fn solve_linear(ring: &Ring, a: &Matrix, b: &Matrix) -> Result<Option<Matrix>, RingError> {
    if a.rows != a.cols {
        return Err(RingError::DimensionMismatch(format!(
            "coefficient matrix is {}x{}",
            a.rows, a.cols
        )));
    }
    if b.rows != a.rows {
        return Err(RingError::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {}",
            b.rows, a.rows
        )));
    }
    a.check_ring(ring)?;
    b.check_ring(ring)?;
    if let Some((base, group)) = ring.split_parts() {
        let mut parts = Vec::with_capacity(group.order());
        for k in 0..group.order() {
            match solve_linear(base, &a.component(k), &b.component(k))? {
                Some(x) => parts.push(x),
                None => return Ok(None),
            }
        }
        if parts.is_empty() {
            return Ok(Some(Matrix::zero(ring, b.rows, b.cols)));
        }
        return Ok(Some(Matrix::from_components(&parts)));
    }
    if ring.is_field() {
        return Ok(gauss_jordan(ring, a, b));
    }
    debug_assert!(ring.is_char_zero_domain());
    let det = determinant(ring, a)?;
    let Some(det_inv) = ring.invert(&det) else {
        return Ok(None);
    };
    // x_i = det(A with column i replaced by b) · det⁻¹, i.e. adj(A)·b·det⁻¹
    let n = a.rows;
    let mut x = Matrix::zero(ring, n, b.cols);
    for c in 0..b.cols {
        for i in 0..n {
            let replaced = Matrix::from_fn(n, n, |r, s| {
                if s == i {
                    b.get(r, c).clone()
                } else {
                    a.get(r, s).clone()
                }
            });
            x.set(i, c, ring.mul(&determinant(ring, &replaced)?, &det_inv));
        }
    }
    Ok(Some(x))
}

#[allow(clippy::needless_range_loop)]
fn gauss_jordan(ring: &Ring, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.rows;
    let w = n + b.cols;
    let mut m: Vec<Vec<RingElement>> = (0..n)
        .map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect())
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !ring.is_zero(&m[i][k]))?;
        m.swap(k, piv);
        let inv = ring.invert(&m[k][k]).expect("nonzero field element");
        for j in k..w {
            m[k][j] = ring.mul(&m[k][j], &inv);
        }
        for i in 0..n {
            if i == k || ring.is_zero(&m[i][k]) {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..w {
                let t = ring.mul(&f, &m[k][j]);
                m[i][j] = ring.sub(&m[i][j], &t);
            }
        }
    }
    Some(Matrix::from_fn(n, b.cols, |i, j| m[i][n + j].clone()))
}

/// Rank over a field.
#[allow(clippy::needless_range_loop)]
pub fn rank(ring: &Ring, a: &Matrix) -> Result<usize, RingError> {
    if !ring.is_field() {
        return Err(RingError::WrongRingVariant("field"));
    }
    a.check_ring(ring)?;
    let mut m: Vec<Vec<RingElement>> = (0..a.rows).map(|i| a.row(i).to_vec()).collect();
    let mut r = 0;
    for c in 0..a.cols {
        let Some(piv) = (r..a.rows).find(|&i| !ring.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, piv);
        let inv = ring.invert(&m[r][c]).unwrap();
        for i in r + 1..a.rows {
            let f = ring.mul(&m[i][c], &inv);
            for j in c..a.cols {
                let t = ring.mul(&f, &m[r][j]);
                m[i][j] = ring.sub(&m[i][j], &t);
            }
        }
        r += 1;
    }
    Ok(r)
}
