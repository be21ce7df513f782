//! Small dense complex linear algebra.
//!
//! Only what the walk operators need: products, adjoints, characteristic
//! polynomials of 6×6 blocks, null spaces by complete pivoting, and an
//! eigen-solver for normal matrices seeded with approximate eigenvalues.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖self − I‖_max`
    pub fn distance_from_identity(&self) -> f64 {
        self.max_abs_diff(&Self::identity(self.rows))
    }

    /// `‖A†A − I‖_max`
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).distance_from_identity()
    }

    pub fn trace(&self) -> C {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Characteristic polynomial `det(zI − A)` by Faddeev–LeVerrier, lowest degree first.
    pub fn char_poly(&self) -> Vec<C> {
        let n = self.rows;
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += coeffs[n - k + 1];
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -am.trace() / k as f64;
        }
        coeffs
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

pub fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Basis of the numerical null space of `a`, assuming its nullity is `dim`.
///
/// Gaussian elimination with complete pivoting is stopped after
/// `cols − dim` pivots; the free columns are then back-substituted.
pub fn null_space(a: &CMatrix, dim: usize) -> Vec<Vec<C>> {
    let (rows, cols) = (a.rows(), a.cols());
    let rank = cols.saturating_sub(dim).min(rows);
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..cols).collect();

    for p in 0..rank {
        let (mut bi, mut bj, mut best) = (p, p, -1.0);
        for i in p..rows {
            for j in p..cols {
                let v = m[(i, j)].norm();
                if v > best {
                    (bi, bj, best) = (i, j, v);
                }
            }
        }
        if bi != p {
            for j in 0..cols {
                let t = m[(p, j)];
                m[(p, j)] = m[(bi, j)];
                m[(bi, j)] = t;
            }
        }
        if bj != p {
            for i in 0..rows {
                let t = m[(i, p)];
                m[(i, p)] = m[(i, bj)];
                m[(i, bj)] = t;
            }
            perm.swap(p, bj);
        }
        let piv = m[(p, p)];
        if piv.norm() == 0.0 {
            continue;
        }
        for i in p + 1..rows {
            let f = m[(i, p)] / piv;
            if f == ZERO {
                continue;
            }
            for j in p..cols {
                let t = m[(p, j)];
                m[(i, j)] -= f * t;
            }
        }
    }

    (rank..cols)
        .map(|free| {
            let mut x = vec![ZERO; cols];
            x[free] = ONE;
            for p in (0..rank).rev() {
                let piv = m[(p, p)];
                let s: C = (p + 1..cols).map(|j| m[(p, j)] * x[j]).sum();
                x[p] = if piv.norm() == 0.0 { ZERO } else { -s / piv };
            }
            let mut out = vec![ZERO; cols];
            for (pos, &col) in perm.iter().enumerate() {
                out[col] = x[pos];
            }
            out
        })
        .collect()
}

/// Modified Gram–Schmidt, run twice for orthogonality to working precision.
pub fn orthonormalize(vectors: &mut [Vec<C>]) {
    for _ in 0..2 {
        for i in 0..vectors.len() {
            for j in 0..i {
                let (head, tail) = vectors.split_at_mut(i);
                let proj = inner(&head[j], &tail[0]);
                for (t, h) in tail[0].iter_mut().zip(&head[j]) {
                    *t -= proj * h;
                }
            }
            let nv = norm(&vectors[i]);
            if nv > 0.0 {
                vectors[i].iter_mut().for_each(|z| *z /= nv);
            }
        }
    }
}

/// Rotates `v` so its first component of modulus above 1e−10 is real positive,
/// and scales it to unit norm.
pub fn fix_phase(v: &mut [C]) {
    let nv = norm(v);
    if nv > 0.0 {
        v.iter_mut().for_each(|z| *z /= nv);
    }
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-10) {
        let rot = first.conj() / first.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// Eigenpair of a small normal matrix.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: C,
    pub vector: Vec<C>,
}

/// Groups values by single linkage at distance `tol`.
pub fn cluster(values: &[C], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// LU factorization with partial pivoting.
pub struct Lu {
    m: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Exactly singular pivots are replaced by a tiny multiple of the matrix scale,
    /// which is what inverse iteration at an exact eigenvalue needs.
    pub fn factor(a: &CMatrix) -> Self {
        let n = a.rows();
        let mut m = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        for p in 0..n {
            let bi = (p..n).max_by(|&i, &j| m[(i, p)].norm().total_cmp(&m[(j, p)].norm())).unwrap();
            if bi != p {
                for j in 0..n {
                    let t = m[(p, j)];
                    m[(p, j)] = m[(bi, j)];
                    m[(bi, j)] = t;
                }
                perm.swap(p, bi);
            }
            if m[(p, p)].norm() <= 1e-300 {
                m[(p, p)] = C::new(1e-16 * scale, 0.0);
            }
            let piv = m[(p, p)];
            for i in p + 1..n {
                let f = m[(i, p)] / piv;
                m[(i, p)] = f;
                if f == ZERO {
                    continue;
                }
                for j in p + 1..n {
                    let t = m[(p, j)];
                    m[(i, j)] -= f * t;
                }
            }
        }
        Self { m, perm }
    }

    pub fn solve(&self, b: &[C]) -> Vec<C> {
        let n = self.m.rows();
        let mut y: Vec<C> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.m[(i, j)] * y[j];
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.m[(i, j)] * y[j];
                y[i] -= t;
            }
            y[i] /= self.m[(i, i)];
        }
        y
    }
}

/// Complete eigen-decomposition of a small normal matrix from approximate eigenvalues.
///
/// Approximations are clustered. Each cluster's invariant subspace starts as
/// the null space of `A − μI` with the cluster's multiplicity as nullity, is
/// sharpened by shifted block inverse iteration, and is then diagonalized by
/// Rayleigh–Ritz. Clusters that turn out not to be degenerate are split by
/// diagonalizing the compressed matrix. All returned vectors are orthonormal.
pub fn normal_eigen(a: &CMatrix, approx: &[C], unit_modulus: bool) -> Result<Vec<EigenPair>> {
    normal_eigen_depth(a, approx, unit_modulus, 0)
}

fn normal_eigen_depth(a: &CMatrix, approx: &[C], unit_modulus: bool, depth: usize) -> Result<Vec<EigenPair>> {
    let n = a.rows();
    if approx.len() != n {
        return Err(Error::NumericalFailure(format!(
            "{} eigenvalue estimates for a {n}×{n} matrix",
            approx.len()
        )));
    }
    let scale = approx.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut out = Vec::with_capacity(n);
    for group in cluster(approx, 1e-3 * scale) {
        let center = group.iter().map(|&i| approx[i]).sum::<C>() / group.len() as f64;
        let radius = group.iter().map(|&i| (approx[i] - center).norm()).fold(0.0, f64::max);
        out.extend(refine_cluster(a, center, radius, group.len(), unit_modulus, scale, depth)?);
    }
    Ok(out)
}

fn refine_cluster(
    a: &CMatrix,
    center: C,
    radius: f64,
    m: usize,
    unit_modulus: bool,
    scale: f64,
    depth: usize,
) -> Result<Vec<EigenPair>> {
    let n = a.rows();
    let shifted = |mu: C| {
        let mut s = a.clone();
        for i in 0..n {
            s[(i, i)] -= mu;
        }
        s
    };
    let mut basis = null_space(&shifted(center), m);
    orthonormalize(&mut basis);

    if m < n {
        // Offset the shift so no member of the cluster dominates the iteration.
        let eta = (2.0 * radius).max(1e-7 * scale);
        let dir = if unit_modulus && center.norm() > 0.0 { center / center.norm() } else { C::from_polar(1.0, 0.5) };
        let lu = Lu::factor(&shifted(center + dir * eta));
        for _ in 0..60 {
            let mut next: Vec<Vec<C>> = basis.iter().map(|q| lu.solve(q)).collect();
            orthonormalize(&mut next);
            basis = next;
            if subspace_residual(a, &basis) <= 1e-14 * scale {
                break;
            }
        }
    }

    let images: Vec<Vec<C>> = basis.iter().map(|q| a.mul_vec(q)).collect();
    let compressed = CMatrix::from_fn(m, m, |i, j| inner(&basis[i], &images[j]));
    let mut mu = compressed.trace() / m as f64;
    if unit_modulus && mu.norm() > 0.0 {
        mu /= mu.norm();
    }
    let spread = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| {
            let d = if i == j { compressed[(i, j)] - mu } else { compressed[(i, j)] };
            d.norm()
        })
        .fold(0.0, f64::max);

    if m == 1 || spread <= 1e-9 * scale {
        return Ok(basis.into_iter().map(|vector| EigenPair { value: mu, vector }).collect());
    }

    // The cluster holds distinct eigenvalues; diagonalize the compressed matrix.
    if m > 4 || depth > 4 {
        return Err(Error::NumericalFailure(format!(
            "cannot split a non-degenerate eigenvalue cluster of size {m}"
        )));
    }
    let normalized = CMatrix::from_fn(m, m, |i, j| {
        let d = if i == j { compressed[(i, j)] - mu } else { compressed[(i, j)] };
        d / spread
    });
    let estimates = poly::roots_low_degree(&normalized.char_poly());
    let sub = normal_eigen_depth(&normalized, &estimates, false, depth + 1)?;
    let mut out = Vec::with_capacity(m);
    for pair in sub {
        let mut v = vec![ZERO; n];
        for (coef, q) in pair.vector.iter().zip(&basis) {
            for (o, x) in v.iter_mut().zip(q) {
                *o += coef * x;
            }
        }
        let lambda = inner(&v, &a.mul_vec(&v)) / inner(&v, &v);
        let lambda = if unit_modulus { lambda / lambda.norm() } else { lambda };
        out.push(EigenPair { value: lambda, vector: v });
    }
    Ok(out)
}

/// `max_j ‖A q_j − Σ_i ⟨q_i, A q_j⟩ q_i‖` for an orthonormal set.
fn subspace_residual(a: &CMatrix, basis: &[Vec<C>]) -> f64 {
    let mut worst: f64 = 0.0;
    for q in basis {
        let mut r = a.mul_vec(q);
        for b in basis {
            let c = inner(b, &r);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        worst = worst.max(norm(&r));
    }
    worst
}
