//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qwalk_core::linalg::CMatrix;
use qwalk_core::{CoinClass, CoinMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type C = Complex64;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Eigenvalues of a dense unitary matrix via nalgebra.
///
/// `(U + U†)/2` and `(U − U†)/2i` commute, so an eigenbasis of a generic real
/// combination of the two diagonalizes `U`; the eigenvalues are then read off
/// as Rayleigh quotients. Hermitian solvers converge unconditionally, unlike
/// the Schur iteration on strongly degenerate unitaries.
pub fn dense_eigenvalues(m: &CMatrix) -> Vec<C> {
    let n = m.rows();
    let u = DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let ua = u.adjoint();
    let alpha = 0.618_033_988_749_895;
    let h = (&u + &ua) * C::new(0.5, 0.0) + (&u - &ua) * C::new(0.0, -0.5 * alpha);
    let q = h.symmetric_eigen().eigenvectors;
    let d = q.adjoint() * u * &q;
    (0..n).map(|i| d[(i, i)]).collect()
}

/// Max distance of a greedy nearest-neighbour pairing; bounds the optimal
/// bottleneck pairing from above.
pub fn pairing_distance(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different size");
    let mut rest = b.to_vec();
    let mut worst: f64 = 0.0;
    for &x in a {
        let (i, d) = rest
            .iter()
            .enumerate()
            .map(|(i, &y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(d);
        rest.swap_remove(i);
    }
    worst
}

pub fn random_class(r: &mut StdRng) -> CoinClass {
    CoinClass::ALL[r.random_range(0..4)]
}

pub fn random_coin(r: &mut StdRng) -> CoinMatrix {
    let class = random_class(r);
    CoinMatrix::from_theta(class, r.random_range(-std::f64::consts::PI..std::f64::consts::PI)).unwrap()
}

pub fn random_unit_vector(r: &mut StdRng, len: usize) -> Vec<C> {
    let v: Vec<C> = (0..len).map(|_| C::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / nrm).collect()
}

/// Periodic local extremum test: `v[i]` is not exceeded, or not undercut, by either neighbour.
pub fn is_local_extremum(v: &[f64], i: usize) -> bool {
    let n = v.len();
    let (l, r) = (v[(i + n - 1) % n], v[(i + 1) % n]);
    (v[i] >= l && v[i] >= r) || (v[i] <= l && v[i] <= r)
}
