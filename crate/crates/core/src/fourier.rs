//! Momentum-space reduction of the walk.
//!
//! A discrete Fourier transform over the rotation index turns `U` into N
//! independent 6×6 blocks `U(k)`. Each block has `±1` as eigenvalues; the
//! remaining quartic is solved in closed form.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coin::{CoinClass, CoinMatrix};
use crate::error::{input, Error, Result};
use crate::evolve::{state_index, step_local_into, WalkState};
use crate::export::fmt_f64;
use crate::linalg::{self, CMatrix, EigenPair};
use crate::poly;

type C = Complex64;

/// Residual above which `eigen_numeric` reports failure.
pub const EIGEN_FAIL_TOL: f64 = 1e-6;
/// Residual bound on full-space eigenvectors.
pub const FULL_RESIDUAL_TOL: f64 = 1e-8;

/// `e^{−2πim/N}` for `m = 0..N`.
fn twiddles(n: usize) -> Vec<C> {
    (0..n).map(|m| C::from_polar(1.0, -2.0 * PI * m as f64 / n as f64)).collect()
}

/// `Ψ(k) = Σ_r e^{−2πikr/N} ψ(r)` for every k.
pub fn dft_state(state: &WalkState) -> Vec<[C; 6]> {
    let n = state.n();
    let w = twiddles(n);
    let local: Vec<[C; 6]> = (0..n).map(|r| state.local_vector(r)).collect();
    (0..n)
        .map(|k| {
            let mut acc = [C::new(0.0, 0.0); 6];
            for (r, v) in local.iter().enumerate() {
                let ph = w[(k * r) % n];
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += ph * x;
                }
            }
            acc
        })
        .collect()
}

/// `ψ(r) = (1/N) Σ_k e^{+2πikr/N} Ψ(k)`.
///
/// The result is normalized exactly when `(1/N) Σ_k ‖Ψ(k)‖² = 1`.
pub fn idft_state(blocks: &[[C; 6]], n: usize) -> Result<WalkState> {
    if n < 3 {
        return input(format!("walk needs n >= 3, got {n}"));
    }
    if blocks.len() != n {
        return input(format!("expected {n} momentum blocks, got {}", blocks.len()));
    }
    let w = twiddles(n);
    let mut amps = vec![C::new(0.0, 0.0); 6 * n];
    for r in 0..n {
        for (k, b) in blocks.iter().enumerate() {
            let ph = w[(k * r) % n].conj() / n as f64;
            for (j, x) in b.iter().enumerate() {
                amps[state_index(j / 2, j % 2, r, n)] += ph * x;
            }
        }
    }
    Ok(WalkState::from_parts(n, amps, 0))
}

#[derive(Debug, Clone)]
pub struct FourierBlock {
    pub k: usize,
    pub n: usize,
    pub matrix: CMatrix,
}

impl FourierBlock {
    /// `φ = 2πk/N`
    pub fn phi(&self) -> f64 {
        2.0 * PI * self.k as f64 / self.n as f64
    }
}

pub fn build_uk(coin: &CoinMatrix, n: usize, k: usize) -> Result<FourierBlock> {
    if n < 3 {
        return input(format!("walk needs n >= 3, got {n}"));
    }
    if k >= n {
        return input(format!("momentum index {k} out of range for n = {n}"));
    }
    let e = C::from_polar(1.0, -2.0 * PI * k as f64 / n as f64);
    let c = |i: usize, j: usize| C::new(coin.entry(i, j), 0.0);
    let mut m = CMatrix::zeros(6, 6);
    for j in 0..3 {
        m[(0, 2 * j)] = c(0, j) * e;
        m[(1, 2 * j + 1)] = c(0, j) * e.conj();
        m[(2, 2 * j)] = c(1, j);
        m[(3, 2 * j + 1)] = c(1, j);
        m[(4, 2 * j + 1)] = c(2, j);
        m[(5, 2 * j)] = c(2, j);
    }
    Ok(FourierBlock { k, n, matrix: m })
}

/// Eigen-decomposition of one block, sorted by phase.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub k: usize,
    pub eigenvalues: Vec<C>,
    pub eigenvectors: Vec<[C; 6]>,
    pub residuals: Vec<f64>,
}

/// Phase in (−π, π], with values within 1e−12 of −1 mapped to π.
pub fn phase(z: C) -> f64 {
    let p = z.arg();
    if p <= -PI + 1e-12 && (z + 1.0).norm() <= 1e-12 {
        PI
    } else {
        p
    }
}

fn residual(m: &CMatrix, lambda: C, v: &[C]) -> f64 {
    let mv = m.mul_vec(v);
    mv.iter().zip(v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum::<f64>().sqrt()
}

fn assemble(block: &FourierBlock, mut items: Vec<(C, Vec<C>)>) -> EigenSystem {
    for (_, v) in items.iter_mut() {
        linalg::fix_phase(v);
    }
    items.sort_by(|a, b| phase(a.0).total_cmp(&phase(b.0)).then(a.0.im.total_cmp(&b.0.im)));
    let residuals = items.iter().map(|(l, v)| residual(&block.matrix, *l, v)).collect();
    EigenSystem {
        k: block.k,
        eigenvalues: items.iter().map(|(l, _)| *l).collect(),
        eigenvectors: items.iter().map(|(_, v)| std::array::from_fn(|i| v[i])).collect(),
        residuals,
    }
}

/// Numeric path: deflate the characteristic sextic by `z² − 1`, solve the
/// quartic by Ferrari, then refine and take eigenvectors from null spaces.
pub fn eigen_numeric(block: &FourierBlock) -> Result<EigenSystem> {
    let chi = block.matrix.char_poly();
    let z2m1 = [C::new(-1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)];
    let (quartic, rem) = poly::divide(&chi, &z2m1);
    let rem_size = rem.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rem_size > 1e-10 {
        return Err(Error::NumericalFailure(format!(
            "characteristic polynomial of U({}) not divisible by z²−1 (remainder {rem_size:e})",
            block.k
        )));
    }
    let mut estimates = vec![C::new(1.0, 0.0), C::new(-1.0, 0.0)];
    estimates.extend(poly::roots_low_degree(&quartic).into_iter().map(|z| if z.norm() > 0.0 { z / z.norm() } else { z }));
    let pairs = linalg::normal_eigen(&block.matrix, &estimates, true)?;
    let sys = assemble(block, pairs.into_iter().map(|p| (p.value, p.vector)).collect());
    if let Some(worst) = sys.residuals.iter().copied().find(|&r| r > EIGEN_FAIL_TOL) {
        return Err(Error::NumericalFailure(format!("eigenvector residual {worst:e} in U({})", block.k)));
    }
    Ok(sys)
}

fn sqrt_pos(v: f64) -> f64 {
    v.max(0.0).sqrt()
}

/// `cos ± i√(1 − cos²)`, with cosines within a few ulps of ±1 snapped.
fn unit_pair(cos: f64) -> [C; 2] {
    let cos = if 1.0 - cos.abs() <= 4.0 * f64::EPSILON { cos.signum() } else { cos.clamp(-1.0, 1.0) };
    let sin = sqrt_pos(1.0 - cos * cos);
    [C::new(cos, sin), C::new(cos, -sin)]
}

/// The six eigenvalues of `U(k)` from the closed forms for each class.
pub fn closed_form_eigenvalues(coin: &CoinMatrix, n: usize, k: usize) -> [C; 6] {
    let (x, y) = (coin.x(), coin.y());
    let phi = 2.0 * PI * k as f64 / n as f64;
    let (sin, cos) = phi.sin_cos();
    let u = x * (1.0 + 2.0 * cos);
    let (a, b) = match coin.class() {
        CoinClass::X => (
            [C::new((x + 1.0) / 2.0, sqrt_pos((1.0 - x) * (x + 3.0)) / 2.0); 2],
            [C::new((u - 1.0) / 2.0, sqrt_pos((1.0 + u) * (3.0 - u)) / 2.0); 2],
        ),
        CoinClass::Y => (
            [C::new((x - 1.0) / 2.0, sqrt_pos((1.0 + x) * (3.0 - x)) / 2.0); 2],
            [C::new((u + 1.0) / 2.0, sqrt_pos((1.0 - u) * (3.0 + u)) / 2.0); 2],
        ),
        CoinClass::Z | CoinClass::W => {
            let s = coin.class().sign();
            let mid = (s - x - y + x * cos) / 2.0;
            let half = sqrt_pos(1.0 + 2.0 * s * y * cos + y * y - (x * sin).powi(2)) / 2.0;
            (unit_pair(mid + half), unit_pair(mid - half))
        }
    };
    let (a, b) = match coin.class() {
        CoinClass::X | CoinClass::Y => ([a[0], a[0].conj()], [b[0], b[0].conj()]),
        _ => (a, b),
    };
    [C::new(1.0, 0.0), C::new(-1.0, 0.0), a[0], a[1], b[0], b[1]]
}

/// Eigenvector formulas accompanying the closed-form spectra, with the last
/// component fixed to 1. `None` when a denominator is below 1e−8.
pub fn theorem_eigenvector(coin: &CoinMatrix, phi: f64, l: C) -> Option<[C; 6]> {
    let (x, y) = (C::new(coin.x(), 0.0), C::new(coin.y(), 0.0));
    let one = C::new(1.0, 0.0);
    let e = C::from_polar(1.0, phi);
    let l2 = l * l;
    let (d1, d2, v) = match coin.class() {
        CoinClass::X => {
            let z = one - x - y;
            let d1 = one - l * x - l * x * e + l2 * x * e;
            let d2 = x - l * x - l * x / e + l2 / e;
            let v = [l * (l * z + y), l * z + y, l * (z + l * y * e), z + l * y / e, l * (x - l * x - l * x * e + l2 * e)];
            (d1, d2, v)
        }
        CoinClass::Y => {
            let w = one + x + y;
            let d1 = -one + l * x + l * x * e + l2 * x * e;
            let d2 = -x - l * x - l * x / e + l2 / e;
            let v = [-l * (l * w + y), -(l * w + y), l * (w + l * y * e), w + l * y / e, l * (-x - l * x - l * x * e + l2 * e)];
            (d1, d2, v)
        }
        CoinClass::Z => {
            let z = one - x - y;
            let d1 = -one + l * z + l * x * e + l2 * y * e;
            let d2 = -y - l * x - l * z / e + l2 / e;
            let v = [l * (l - one) * z, (l - one) * z, l * (l * e - one) * x, (l / e - one) * x, l * (-y - l * x - l * e * z + l2 * e)];
            (d1, d2, v)
        }
        CoinClass::W => {
            let w = one + x + y;
            let d1 = one + l * w - l * x * e + l2 * y * e;
            let d2 = y - l * x + l * w / e + l2 / e;
            let v = [-l * (l + one) * w, -(l + one) * w, l * (l * e + one) * x, (l / e + one) * x, l * (y - l * x + l * e * w + l2 * e)];
            (d1, d2, v)
        }
    };
    if d1.norm() <= 1e-8 || d2.norm() <= 1e-8 {
        return None;
    }
    Some([v[0] / d1, v[1] / d2, v[2] / d1, v[3] / d2, v[4] / d1, one])
}

/// Closed-form spectrum of `U(k)` for a coin of the given class.
///
/// Eigenvectors come from the closed-form formulas where they are well
/// conditioned and the eigenvalue is simple, otherwise from the null-space solver.
pub fn eigen_closed_form(class: CoinClass, coin: &CoinMatrix, n: usize, k: usize) -> Result<EigenSystem> {
    if coin.class() != class {
        return input(format!("coin belongs to class {}, not {class}", coin.class()));
    }
    let block = build_uk(coin, n, k)?;
    let values = closed_form_eigenvalues(coin, n, k);
    let mut numeric: Vec<Option<EigenPair>> = linalg::normal_eigen(&block.matrix, &values, true)?.into_iter().map(Some).collect();
    let mut items = Vec::with_capacity(6);
    for (i, &l) in values.iter().enumerate() {
        let simple = values.iter().enumerate().all(|(j, &o)| j == i || (o - l).norm() > 1e-6);
        let formula = theorem_eigenvector(coin, block.phi(), l)
            .filter(|_| simple)
            .map(|v| {
                let mut v = v.to_vec();
                linalg::fix_phase(&mut v);
                v
            })
            .filter(|v| residual(&block.matrix, l, v) <= 1e-9);
        let slot = numeric
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.as_ref().map(|p| (j, (p.value - l).norm())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(j, _)| j)
            .expect("as many numeric pairs as eigenvalues");
        let fallback = numeric[slot].take().expect("unused slot").vector;
        items.push((l, formula.unwrap_or(fallback)));
    }
    Ok(assemble(&block, items))
}

/// Eigen-decompositions of every block in ascending k.
pub fn block_spectra(coin: &CoinMatrix, n: usize, parallel: bool) -> Result<Vec<EigenSystem>> {
    let one = |k: usize| build_uk(coin, n, k).and_then(|b| eigen_numeric(&b));
    if parallel {
        (0..n).into_par_iter().map(one).collect()
    } else {
        (0..n).map(one).collect()
    }
}

/// An eigenpair of the full operator `U`.
#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub k: usize,
    pub j: usize,
    pub value: C,
    /// Length 6N, `ν_j(k) ⊗ e^{2πikr/N}/√N` in the walk index layout.
    pub vector: Vec<C>,
}

/// Lifts a block eigenvector to the position basis.
pub fn lift(nu: &[C; 6], n: usize, k: usize) -> Vec<C> {
    let w = twiddles(n);
    let norm = 1.0 / (n as f64).sqrt();
    let mut out = vec![C::new(0.0, 0.0); 6 * n];
    for r in 0..n {
        let ph = w[(k * r) % n].conj() * norm;
        for (j, x) in nu.iter().enumerate() {
            out[state_index(j / 2, j % 2, r, n)] = ph * x;
        }
    }
    out
}

/// All 6N eigenpairs of `U`, each checked against `‖Uv − λv‖ ≤ 1e−8`.
pub fn full_spectrum(coin: &CoinMatrix, n: usize) -> Result<Vec<SpectralPair>> {
    let systems = block_spectra(coin, n, false)?;
    let mut out = Vec::with_capacity(6 * n);
    let mut image = vec![C::new(0.0, 0.0); 6 * n];
    for sys in systems {
        for (j, (l, nu)) in sys.eigenvalues.iter().zip(&sys.eigenvectors).enumerate() {
            let v = lift(nu, n, sys.k);
            step_local_into(&v, &mut image, coin, n);
            let res = image.iter().zip(&v).map(|(a, b)| (a - l * b).norm_sqr()).sum::<f64>().sqrt();
            if res > FULL_RESIDUAL_TOL {
                return Err(Error::NumericalFailure(format!("full eigenvector (k={}, j={j}) residual {res:e}", sys.k)));
            }
            out.push(SpectralPair { k: sys.k, j, value: *l, vector: v });
        }
    }
    Ok(out)
}

/// Columns `k,j,re,im,phase,residual`.
pub fn spectrum_csv(systems: &[EigenSystem]) -> String {
    let mut out = String::from("k,j,re,im,phase,residual\n");
    for sys in systems {
        for (j, (l, r)) in sys.eigenvalues.iter().zip(&sys.residuals).enumerate() {
            writeln!(out, "{},{j},{},{},{},{}", sys.k, fmt_f64(l.re), fmt_f64(l.im), fmt_f64(phase(*l)), fmt_f64(*r)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multiset_distance(a: &[C], b: &[C]) -> f64 {
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
            rest.remove(i);
        }
        worst
    }

    #[test]
    fn dft_of_origin_state_is_flat() {
        let st = WalkState::basis(5, 2, 1, 0).unwrap();
        for psi in dft_state(&st) {
            assert!((psi[5] - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn dft_phase_example() {
        let st = WalkState::basis(4, 0, 0, 2).unwrap();
        assert!((dft_state(&st)[1][0] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn dft_roundtrip() {
        let n = 7;
        let raw: Vec<C> = (0..6 * n).map(|i| C::new((i as f64).sin(), (2.0 * i as f64).cos())).collect();
        let nrm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let st = WalkState::new(n, raw.iter().map(|z| z / nrm).collect()).unwrap();
        let back = idft_state(&dft_state(&st), n).unwrap();
        for (a, b) in st.amplitudes().iter().zip(back.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(idft_state(&dft_state(&st)[1..], n).is_err());
    }

    #[test]
    fn single_momentum_has_flat_profile() {
        let n = 6;
        let mut blocks = vec![[C::new(0.0, 0.0); 6]; n];
        blocks[2][0] = C::new((n as f64).sqrt(), 0.0);
        let st = idft_state(&blocks, n).unwrap();
        for r in 0..n {
            assert!((st.amplitude(0, 0, r).norm() - 1.0 / (n as f64).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn block_examples() {
        let g = CoinMatrix::grover();
        let b0 = build_uk(&g, 4, 0).unwrap();
        assert!(b0.matrix.row(0).iter().chain(b0.matrix.row(5)).all(|z| z.im == 0.0));
        let b1 = build_uk(&g, 4, 1).unwrap();
        assert!((b1.matrix[(0, 0)] - C::from_polar(-1.0 / 3.0, -PI / 2.0)).norm() < 1e-15);
        assert!(b1.matrix.unitarity_defect() < 1e-12);
        assert!(build_uk(&g, 4, 4).is_err());
    }

    #[test]
    fn grover_k0_closed_form() {
        let sys = eigen_closed_form(CoinClass::X, &CoinMatrix::grover(), 8, 0).unwrap();
        let s = 2.0 * 2f64.sqrt() / 3.0;
        let want = [-1.0, 1.0, -1.0, -1.0].map(|v| C::new(v, 0.0));
        let want = [want[0], want[1], C::new(1.0 / 3.0, s), C::new(1.0 / 3.0, -s), want[2], want[3]];
        assert!(multiset_distance(&sys.eigenvalues, &want) < 1e-12);
        assert!(sys.residuals.iter().all(|&r| r < 1e-9));
    }

    #[test]
    fn identity_coin_spectrum() {
        let id = CoinMatrix::from_theta(CoinClass::X, 0.0).unwrap();
        for k in 0..5 {
            let sys = eigen_numeric(&build_uk(&id, 5, k).unwrap()).unwrap();
            let ph = 2.0 * PI * k as f64 / 5.0;
            let want = [C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::from_polar(1.0, ph), C::from_polar(1.0, -ph)];
            assert!(multiset_distance(&sys.eigenvalues, &want) < 1e-12, "k={k}: {:?}", sys.eigenvalues);
            assert!(sys.residuals.iter().all(|&r| r < 1e-12));
        }
    }

    #[test]
    fn closed_form_agrees_with_numeric() {
        for class in CoinClass::ALL {
            for theta in [-2.9, -1.0, 0.4, 2.2] {
                let coin = CoinMatrix::from_theta(class, theta).unwrap();
                for k in 0..7 {
                    let cf = eigen_closed_form(class, &coin, 7, k).unwrap();
                    let nu = eigen_numeric(&build_uk(&coin, 7, k).unwrap()).unwrap();
                    assert!(multiset_distance(&cf.eigenvalues, &nu.eigenvalues) < 1e-9, "{class} {theta} {k}");
                    assert!(cf.residuals.iter().all(|&r| r < 1e-9));
                }
            }
        }
    }

    #[test]
    fn formula_vectors_solve_the_block() {
        let coin = CoinMatrix::from_theta(CoinClass::W, 1.3).unwrap();
        let block = build_uk(&coin, 9, 2).unwrap();
        for l in closed_form_eigenvalues(&coin, 9, 2) {
            if let Some(v) = theorem_eigenvector(&coin, block.phi(), l) {
                let nv = linalg::norm(&v);
                assert!(residual(&block.matrix, l, &v) / nv < 1e-12);
            }
        }
    }

    #[test]
    fn class_mismatch_rejected() {
        assert!(eigen_closed_form(CoinClass::Y, &CoinMatrix::grover(), 4, 0).is_err());
    }

    #[test]
    fn sorted_and_phase_fixed() {
        let sys = eigen_numeric(&build_uk(&CoinMatrix::grover(), 6, 1).unwrap()).unwrap();
        let phases: Vec<f64> = sys.eigenvalues.iter().map(|&z| phase(z)).collect();
        assert!(phases.windows(2).all(|w| w[0] <= w[1]));
        for v in &sys.eigenvectors {
            let first = v.iter().find(|z| z.norm() > 1e-10).unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
            assert!((linalg::norm(v) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn full_spectrum_of_identity_coin() {
        let id = CoinMatrix::from_theta(CoinClass::X, 0.0).unwrap();
        let pairs = full_spectrum(&id, 4).unwrap();
        assert_eq!(pairs.len(), 24);
        let got: Vec<C> = pairs.iter().map(|p| p.value).collect();
        let mut want = Vec::new();
        for k in 0..4 {
            let e = C::from_polar(1.0, PI * k as f64 / 2.0);
            want.extend([C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), e, e.conj()]);
        }
        assert!(multiset_distance(&got, &want) < 1e-12);
    }

    #[test]
    fn spectrum_csv_rows() {
        let sys = block_spectra(&CoinMatrix::grover(), 5, true).unwrap();
        assert_eq!(spectrum_csv(&sys).lines().count(), 31);
    }
}
