//! Dense complex linear algebra used by every construction and verdict.
//!
//! Storage is row-major. Bipartite operators on `C^m ⊗ C^n` use the composite
//! index `(i, k) ↦ i·n + k`, so the entry at `((i,k),(j,l))` is the `(k,l)`
//! entry of block `B_ij` in `M = Σ e_ij ⊗ B_ij`. The 9×9 matrices in the
//! tests are written in exactly this 3×3-blocks-of-3×3 layout.
//!
//! Hermitian eigendecompositions are delegated to `nalgebra`, and SVDs are
//! derived from them; everything else (tensor products, partial transpose, projectors, rank
//! thresholds) is done here on the row-major representation.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = Complex64;

/// Default relative threshold for numerical rank, kernels and ranges.
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Default absolute floor used by [`is_psd`].
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Maximum relative asymmetry `‖M − Mᴴ‖_F / ‖M‖_F` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Row-major dense complex matrix.
///
/// Zero-sized dimensions are allowed; an empty subspace is carried as a
/// matrix with zero columns.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParam("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input; intended for
    /// literals in constructors and tests.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Column vector.
    pub fn column(entries: &[C64]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |a_ij − b_ij|`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Relative asymmetry `‖M − Mᴴ‖_F / ‖M‖_F` (zero for the zero matrix).
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt() / norm
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= rel_tol
    }

    /// `(M + Mᴴ)/2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Matrix product; panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Spectral norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    /// Determinant via LU; panics if not square.
    pub fn determinant(&self) -> C64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        self.to_nalgebra().determinant()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A square matrix on `C^m ⊗ C^n` together with its local dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    m: usize,
    n: usize,
    mat: DenseMatrix,
}

impl BipartiteOperator {
    pub fn new(m: usize, n: usize, mat: DenseMatrix) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParam("local dimensions must be positive".into()));
        }
        if mat.rows() != m * n || mat.cols() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} for {m}⊗{n}, got {1}x{2}",
                m * n,
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self { m, n, mat })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mat(&self) -> &DenseMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> DenseMatrix {
        self.mat
    }

    /// Entry at composite position `((i,k),(j,l))`.
    #[inline]
    pub fn block_entry(&self, i: usize, k: usize, j: usize, l: usize) -> C64 {
        self.mat[(i * self.n + k, j * self.n + l)]
    }

    /// Same operator scaled to unit trace. Fails for traceless input.
    pub fn trace_normalized(&self) -> Result<Self> {
        let tr = self.mat.trace();
        if tr.norm() == 0.0 {
            return Err(Error::InvalidParam("cannot normalise a traceless operator".into()));
        }
        Ok(Self {
            m: self.m,
            n: self.n,
            mat: self.mat.scale(tr.inv()),
        })
    }
}

/// Orthonormal basis (as columns) for a kernel or range.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DenseMatrix,
    tol: f64,
}

impl Subspace {
    pub fn new(basis: DenseMatrix, tol: f64) -> Self {
        Self {
            ambient_dim: basis.rows(),
            basis,
            tol,
        }
    }

    pub fn empty(ambient_dim: usize, tol: f64) -> Self {
        Self::new(DenseMatrix::zeros(ambient_dim, 0), tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Coordinates `Bᴴ v` of `v` in the basis.
    pub fn coordinates(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        (0..self.dim())
            .map(|c| (0..self.ambient_dim).map(|r| self.basis[(r, c)].conj() * v[r]).sum())
            .collect()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let coords = self.coordinates(v);
        (0..self.ambient_dim)
            .map(|r| (0..self.dim()).map(|c| self.basis[(r, c)] * coords[c]).sum())
            .collect()
    }

    /// `‖v − Πv‖ / ‖v‖`, the relative distance of `v` from the subspace.
    /// The zero vector has residual 0.
    pub fn residual(&self, v: &[C64]) -> f64 {
        let norm = vec_norm(v);
        if norm == 0.0 {
            return 0.0;
        }
        let p = self.project(v);
        v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / norm
    }
}

/// Kronecker product `a ⊗ b` under the composite index convention.
pub fn tensor(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    DenseMatrix::from_fn(ra * rb, ca * cb, |r, c| a[(r / rb, c / cb)] * b[(r % rb, c % cb)])
}

/// `x ⊗ y` for plain vectors.
pub fn tensor_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().flat_map(|&xi| y.iter().map(move |&yk| xi * yk)).collect()
}

/// Transpose on the first tensor factor: `out((i,k),(j,l)) = in((j,k),(i,l))`.
pub fn partial_transpose(s: &BipartiteOperator) -> BipartiteOperator {
    let (m, n) = (s.m, s.n);
    let mat = DenseMatrix::from_fn(m * n, m * n, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        s.mat[(j * n + k, i * n + l)]
    });
    BipartiteOperator { m, n, mat }
}

/// Rank-one projector `v vᴴ` (not normalised).
pub fn outer(v: &[C64]) -> DenseMatrix {
    DenseMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `v / ‖v‖`; returns `None` for the zero vector.
pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let n = vec_norm(v);
    (n > 0.0).then(|| v.iter().map(|z| z / n).collect())
}

/// Hermitian inner product `(u|v) = Σ u_i v̄_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: DenseMatrix,
}

fn ensure_hermitian(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(m.symmetrized())
}

/// Eigendecomposition of the symmetrised matrix after an asymmetry check.
pub fn hermitian_eig(m: &DenseMatrix) -> Result<HermitianEigen> {
    let sym = ensure_hermitian(m)?;
    let n = sym.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: DenseMatrix::zeros(0, 0),
        });
    }
    Ok(sorted_eig(&sym))
}

fn sorted_eig(sym: &DenseMatrix) -> HermitianEigen {
    let n = sym.rows();
    let eig = SymmetricEigen::new(sym.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    HermitianEigen { values, vectors }
}

/// Thin SVD, singular values descending.
struct Svd {
    u: DenseMatrix,
    sigma: Vec<f64>,
    v: DenseMatrix,
}

/// SVD read off the Hermitian eigenproblem of `[[0, M], [Mᴴ, 0]]`, whose
/// eigenvalues are `±σᵢ` (plus `|rows − cols|` zeros) with eigenvectors
/// `(uᵢ; ±vᵢ)/√2`. nalgebra's complex SVD occasionally returns factors that
/// do not reproduce the input, while its Hermitian eigensolver is reliable.
fn svd(m: &DenseMatrix) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    let k = rows.min(cols);
    if k == 0 {
        return Svd {
            u: DenseMatrix::zeros(rows, 0),
            sigma: vec![],
            v: DenseMatrix::zeros(cols, 0),
        };
    }
    let n = rows + cols;
    let mut aug = DenseMatrix::zeros(n, n);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, rows + j)] = m[(i, j)];
            aug[(rows + j, i)] = m[(i, j)].conj();
        }
    }
    let eig = sorted_eig(&aug);
    let top: Vec<usize> = (0..k).map(|c| n - 1 - c).collect();
    let s2 = std::f64::consts::SQRT_2;
    let sigma = top.iter().map(|&c| eig.values[c].max(0.0)).collect();
    let u = DenseMatrix::from_fn(rows, k, |i, c| eig.vectors[(i, top[c])] * s2);
    let v = DenseMatrix::from_fn(cols, k, |i, c| eig.vectors[(rows + i, top[c])] * s2);
    Svd { u, sigma, v }
}

/// Singular values in descending order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    svd(m).sigma
}

fn rank_from_sigma(sigma: &[f64], rel_tol: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    sigma.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Number of singular values above `rel_tol · σ_max`; zero for the zero matrix.
pub fn numerical_rank(m: &DenseMatrix, rel_tol: f64) -> usize {
    rank_from_sigma(&singular_values(m), rel_tol)
}

/// Orthonormal basis of the numerical null space (right singular vectors
/// with `σ ≤ rel_tol · σ_max`).
pub fn kernel_basis(m: &DenseMatrix, rel_tol: f64) -> Subspace {
    let cols = m.cols();
    let dec = svd(m);
    let rank = rank_from_sigma(&dec.sigma, rel_tol);
    if rank == 0 {
        return Subspace::new(DenseMatrix::identity(cols), rel_tol);
    }
    // Orthonormal complement of the leading right singular vectors.
    let vr = DenseMatrix::from_fn(cols, rank, |i, c| dec.v[(i, c)]);
    let complement = &DenseMatrix::identity(cols) - &vr.matmul(&vr.adjoint());
    let eig = sorted_eig(&complement.symmetrized());
    let basis = DenseMatrix::from_fn(cols, cols - rank, |i, c| eig.vectors[(i, rank + c)]);
    Subspace::new(basis, rel_tol)
}

/// Orthonormal basis of the numerical column space.
pub fn range_basis(m: &DenseMatrix, rel_tol: f64) -> Subspace {
    let dec = svd(m);
    let rank = rank_from_sigma(&dec.sigma, rel_tol);
    let basis = DenseMatrix::from_fn(m.rows(), rank, |i, c| dec.u[(i, c)]);
    Subspace::new(basis, rel_tol)
}

/// Minimum eigenvalue against the floor `−abs_tol · max(1, ‖m‖₂)`.
pub fn is_psd(m: &DenseMatrix, abs_tol: f64) -> Result<bool> {
    let eig = hermitian_eig(m)?;
    Ok(psd_from_spectrum(&eig.values, abs_tol))
}

pub(crate) fn psd_from_spectrum(values: &[f64], abs_tol: f64) -> bool {
    let Some(&min) = values.first() else {
        return true;
    };
    let norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    min >= -abs_tol * norm.max(1.0)
}

/// `B Bᴴ` for the subspace basis `B`; the zero matrix for an empty subspace.
pub fn projector(s: &Subspace) -> DenseMatrix {
    s.basis.matmul(&s.basis.adjoint())
}

/// Entrywise product.
pub fn hadamard(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "hadamard of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(DenseMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect(),
    })
}

/// Realises a PSD Gram matrix: returns `V` (k rows, `rank(g)` columns) with
/// `V Vᴴ = g`, so that row `i` is the `i`-th abstract vector and
/// `g_ij = (v_i | v_j)`.
pub fn gram_realization(g: &DenseMatrix, rel_tol: f64) -> Result<DenseMatrix> {
    let eig = hermitian_eig(g)?;
    if !psd_from_spectrum(&eig.values, DEFAULT_ABS_TOL) {
        return Err(Error::NotPsd(eig.values[0]));
    }
    let k = g.rows();
    let lmax = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    // Descending so the leading column carries the dominant direction.
    let kept: Vec<usize> = (0..k).rev().filter(|&c| eig.values[c] > rel_tol * lmax).collect();
    Ok(DenseMatrix::from_fn(k, kept.len(), |i, c| {
        let col = kept[c];
        eig.vectors[(i, col)] * eig.values[col].sqrt()
    }))
}
