//! Time-averaged vertex probabilities `P̄(s, r, T) = (1/T) Σ_{t<T} P(s, r, t)`.
//!
//! Computed by direct stepping, by the spectral double sum with exact
//! geometric time averages, and in the `T → ∞` limit.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coin::{CoinClass, CoinMatrix};
use crate::error::{input, Result};
use crate::evolve::{accumulate_probabilities, step_local_into, WalkState};
use crate::export::fmt_f64;
use crate::fourier::{block_spectra, dft_state, EigenSystem};
use crate::linalg;

type C = Complex64;

/// Eigenvalues closer than this are treated as equal in the finite-T average.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Grouping tolerance for the infinite-time limit.
pub const LIMIT_GROUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub coin_amplitudes: [C; 3],
    pub s0: usize,
    pub r0: usize,
}

impl InitialCondition {
    pub fn new(coin_amplitudes: [C; 3], s0: usize, r0: usize) -> Result<Self> {
        let norm2: f64 = coin_amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return input(format!("coin amplitudes have norm² {norm2}, expected 1"));
        }
        if s0 > 1 {
            return input(format!("reflection bit must be 0 or 1, got {s0}"));
        }
        Ok(Self { coin_amplitudes, s0, r0 })
    }

    /// `(|0⟩ + |1⟩ + |2⟩)/√3` at `(s0, r0)`.
    pub fn uniform(s0: usize, r0: usize) -> Result<Self> {
        Self::new([C::new(1.0 / 3f64.sqrt(), 0.0); 3], s0, r0)
    }

    /// `|l⟩` at `(s0, r0)`.
    pub fn basis(l: usize, s0: usize, r0: usize) -> Result<Self> {
        if l > 2 {
            return input(format!("coin direction must be 0, 1 or 2, got {l}"));
        }
        let mut a = [C::new(0.0, 0.0); 3];
        a[l] = C::new(1.0, 0.0);
        Self::new(a, s0, r0)
    }

    pub fn state(&self, n: usize) -> Result<WalkState> {
        WalkState::localized(n, self.s0, self.r0, self.coin_amplitudes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageMethod {
    Direct,
    Spectral,
    Limit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeAveragedResult {
    pub n: usize,
    /// Number of averaged steps; `None` for the infinite-time limit.
    pub t: Option<u64>,
    pub pbar: Vec<f64>,
    pub method: AverageMethod,
    pub coin: CoinMatrix,
    pub init: InitialCondition,
    /// Limit at `(0, r0)` and `(1, r0)` keeping only equal-index terms of the
    /// double sum; set by [`limit_time_avg`].
    pub diagonal_origin: Option<[f64; 2]>,
}

impl TimeAveragedResult {
    pub fn at(&self, s: usize, r: usize) -> f64 {
        self.pbar[s * self.n + r]
    }

    pub fn total(&self) -> f64 {
        self.pbar.iter().sum()
    }

    /// Columns `theta_or_n,s,r,pbar`; the first column carries the coin angle.
    pub fn to_csv(&self) -> String {
        let label = fmt_f64(self.coin.theta().unwrap_or(f64::NAN));
        let mut out = String::from("theta_or_n,s,r,pbar\n");
        for s in 0..2 {
            for r in 0..self.n {
                writeln!(out, "{label},{s},{r},{}", fmt_f64(self.at(s, r))).unwrap();
            }
        }
        out
    }
}

fn check_t(t: u64) -> Result<()> {
    if t < 1 {
        return input("T must be at least 1");
    }
    Ok(())
}

/// Direct simulation with O(N) steps.
pub fn time_avg_direct(coin: &CoinMatrix, n: usize, init: &InitialCondition, t: u64) -> Result<TimeAveragedResult> {
    check_t(t)?;
    let state = init.state(n)?;
    let mut cur = state.amplitudes().to_vec();
    let mut next = vec![C::new(0.0, 0.0); cur.len()];
    let mut acc = vec![0.0; 2 * n];
    for step in 0..t {
        accumulate_probabilities(&cur, n, &mut acc, 1.0);
        if step + 1 < t {
            step_local_into(&cur, &mut next, coin, n);
            std::mem::swap(&mut cur, &mut next);
        }
    }
    let scale = 1.0 / t as f64;
    acc.iter_mut().for_each(|p| *p *= scale);
    Ok(TimeAveragedResult { n, t: Some(t), pbar: acc, method: AverageMethod::Direct, coin: *coin, init: *init, diagonal_origin: None })
}

/// `(1/T) Σ_{t<T} (λ·conj(λ'))^t` in the numerically stable sine form.
pub fn geometric_average(l: C, lp: C, t: u64) -> C {
    if (l - lp).norm() <= DEGENERACY_TOL {
        return C::new(1.0, 0.0);
    }
    let alpha = (l * lp.conj()).arg();
    let tf = t as f64;
    let half = alpha / 2.0;
    C::from_polar(1.0, (tf - 1.0) * half) * ((tf * half).sin() / (tf * half.sin()))
}

/// Per-eigenpair data: `a = ⟨ν ⊗ φ_k, ψ₀⟩` times the s-selected components of ν.
struct Expansion {
    k: usize,
    lambda: C,
    /// `[s][l] = a · ν[2l + s]`
    w: [[C; 3]; 2],
}

fn expansions(systems: &[EigenSystem], init: &InitialCondition, n: usize) -> Result<Vec<Expansion>> {
    let psi_k = dft_state(&init.state(n)?);
    let norm = 1.0 / (n as f64).sqrt();
    let mut out = Vec::with_capacity(6 * n);
    for sys in systems {
        let big_psi = &psi_k[sys.k];
        for (&lambda, nu) in sys.eigenvalues.iter().zip(&sys.eigenvectors) {
            let a: C = nu.iter().zip(big_psi).map(|(v, p)| v.conj() * p).sum::<C>() * norm;
            let w = std::array::from_fn(|s| std::array::from_fn(|l| a * nu[2 * l + s]));
            out.push(Expansion { k: sys.k, lambda, w });
        }
    }
    Ok(out)
}

/// `P̄(s, r) = (1/N) Σ_{k,k'} M_s[k,k'] e^{2πi(k−k')r/N}` with
/// `M_s[k,k'] = Σ_{j,j'} G(λ, λ') ⟨w'_s, w_s⟩`.
fn double_sum(ex: &[Expansion], n: usize, weight: impl Fn(usize, usize) -> C) -> Vec<f64> {
    // accumulate by momentum difference d = k − k' mod N
    let mut by_diff = [vec![C::new(0.0, 0.0); n], vec![C::new(0.0, 0.0); n]];
    for (i, e) in ex.iter().enumerate() {
        for (ip, ep) in ex.iter().enumerate() {
            let g = weight(i, ip);
            if g == C::new(0.0, 0.0) {
                continue;
            }
            let d = (e.k + n - ep.k) % n;
            for (s, acc) in by_diff.iter_mut().enumerate() {
                let overlap: C = (0..3).map(|l| e.w[s][l] * ep.w[s][l].conj()).sum();
                acc[d] += g * overlap;
            }
        }
    }
    let mut pbar = vec![0.0; 2 * n];
    for s in 0..2 {
        for r in 0..n {
            let v: C = (0..n)
                .map(|d| by_diff[s][d] * C::from_polar(1.0, 2.0 * PI * ((d * r) % n) as f64 / n as f64))
                .sum();
            pbar[s * n + r] = v.re / n as f64;
        }
    }
    pbar
}

/// Spectral evaluation independent of T.
pub fn time_avg_spectral(coin: &CoinMatrix, n: usize, init: &InitialCondition, t: u64) -> Result<TimeAveragedResult> {
    check_t(t)?;
    let systems = block_spectra(coin, n, false)?;
    let ex = expansions(&systems, init, n)?;
    let pbar = double_sum(&ex, n, |i, j| geometric_average(ex[i].lambda, ex[j].lambda, t));
    Ok(TimeAveragedResult { n, t: Some(t), pbar, method: AverageMethod::Spectral, coin: *coin, init: *init, diagonal_origin: None })
}

/// `T → ∞` limit with eigenvalues grouped across all blocks.
pub fn limit_time_avg(coin: &CoinMatrix, n: usize, init: &InitialCondition) -> Result<TimeAveragedResult> {
    let systems = block_spectra(coin, n, false)?;
    let ex = expansions(&systems, init, n)?;
    let values: Vec<C> = ex.iter().map(|e| e.lambda).collect();
    let mut group = vec![0usize; ex.len()];
    for (g, members) in linalg::cluster(&values, LIMIT_GROUP_TOL).iter().enumerate() {
        for &i in members {
            group[i] = g;
        }
    }
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let pbar = double_sum(&ex, n, |i, j| if group[i] == group[j] { one } else { zero });

    // same (k, j) only: (1/N) Σ |a|² ‖ν_s‖², independent of the rotation offset
    let mut diag = [0.0; 2];
    for e in &ex {
        for (s, d) in diag.iter_mut().enumerate() {
            *d += e.w[s].iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        }
    }
    Ok(TimeAveragedResult {
        n,
        t: None,
        pbar,
        method: AverageMethod::Limit,
        coin: *coin,
        init: *init,
        diagonal_origin: Some(diag),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Theta,
    N,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    /// Vertices `(s, r)` reported at every point.
    pub vertices: Vec<(usize, usize)>,
    /// `(parameter, P̄ at each vertex)` in ascending parameter order.
    pub points: Vec<(f64, Vec<f64>)>,
}

impl SweepResult {
    /// Columns `theta_or_n,s,r,pbar`, one row per (point, vertex).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta_or_n,s,r,pbar\n");
        for (param, values) in &self.points {
            let label = match self.axis {
                SweepAxis::Theta => fmt_f64(*param),
                SweepAxis::N => format!("{}", *param as u64),
            };
            for (&(s, r), v) in self.vertices.iter().zip(values) {
                writeln!(out, "{label},{s},{r},{}", fmt_f64(*v)).unwrap();
            }
        }
        out
    }
}

/// `grid` equidistant angles from −π to π inclusive.
pub fn theta_grid(grid: usize) -> Vec<f64> {
    (0..grid).map(|i| -PI + 2.0 * PI * i as f64 / (grid - 1) as f64).collect()
}

fn map_points<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

pub fn sweep_theta(
    class: CoinClass,
    grid: usize,
    n: usize,
    init: &InitialCondition,
    t: u64,
    vertices: &[(usize, usize)],
    parallel: bool,
) -> Result<SweepResult> {
    if grid < 2 {
        return input(format!("theta grid needs at least 2 points, got {grid}"));
    }
    for &(s, r) in vertices {
        crate::cayley::vertex_index(s as u8, r, n)?;
    }
    let points = map_points(&theta_grid(grid), parallel, |&theta| {
        let coin = CoinMatrix::from_theta(class, theta)?;
        let avg = time_avg_direct(&coin, n, init, t)?;
        Ok((theta, vertices.iter().map(|&(s, r)| avg.at(s, r)).collect()))
    })?;
    Ok(SweepResult { axis: SweepAxis::Theta, vertices: vertices.to_vec(), points })
}

/// P̄ at the initial vertex for each ring size.
pub fn sweep_n(
    class: CoinClass,
    theta: f64,
    ns: &[usize],
    init: &InitialCondition,
    t: u64,
    parallel: bool,
) -> Result<SweepResult> {
    let coin = CoinMatrix::from_theta(class, theta)?;
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.iter().find(|&&n| n < 3) {
        return input(format!("walk needs n >= 3, got {bad}"));
    }
    let points = map_points(&sorted, parallel, |&n| {
        let avg = time_avg_direct(&coin, n, init, t)?;
        Ok((n as f64, vec![avg.at(init.s0, init.r0)]))
    })?;
    Ok(SweepResult { axis: SweepAxis::N, vertices: vec![(init.s0, init.r0)], points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_step_is_indicator() {
        let init = InitialCondition::uniform(1, 2).unwrap();
        let avg = time_avg_direct(&CoinMatrix::grover(), 5, &init, 1).unwrap();
        assert!((avg.at(1, 2) - 1.0).abs() < 1e-15);
        let sp = time_avg_spectral(&CoinMatrix::grover(), 5, &init, 1).unwrap();
        assert!((sp.at(1, 2) - 1.0).abs() < 1e-12);
        assert!(time_avg_direct(&CoinMatrix::grover(), 5, &init, 0).is_err());
    }

    #[test]
    fn stay_state_never_moves() {
        let id = CoinMatrix::from_theta(CoinClass::X, 0.0).unwrap();
        let init = InitialCondition::basis(1, 0, 3).unwrap();
        for t in [1, 7, 40] {
            assert!((time_avg_spectral(&id, 6, &init, t).unwrap().at(0, 3) - 1.0).abs() < 1e-12);
        }
        assert!((limit_time_avg(&id, 6, &init).unwrap().at(0, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn direct_matches_spectral() {
        let init = InitialCondition::new([C::new(0.6, 0.0), C::new(0.0, 0.8), C::new(0.0, 0.0)], 0, 1).unwrap();
        for class in CoinClass::ALL {
            let coin = CoinMatrix::from_theta(class, 0.9).unwrap();
            let a = time_avg_direct(&coin, 7, &init, 60).unwrap();
            let b = time_avg_spectral(&coin, 7, &init, 60).unwrap();
            let diff = a.pbar.iter().zip(&b.pbar).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-10, "{class}: {diff}");
            assert!((a.total() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn limit_normalized_and_positive_at_start() {
        let init = InitialCondition::basis(2, 1, 0).unwrap();
        let lim = limit_time_avg(&CoinMatrix::grover(), 8, &init).unwrap();
        assert!((lim.total() - 1.0).abs() < 1e-8);
        assert!(lim.at(1, 0) > 0.0);
        let diag = lim.diagonal_origin.unwrap();
        assert!(diag[0] >= 0.0 && diag[1] > 0.0);
    }

    #[test]
    fn geometric_average_limits() {
        let l = C::from_polar(1.0, 0.3);
        assert_eq!(geometric_average(l, l, 10), C::new(1.0, 0.0));
        let direct: C = (0..10).map(|t| (l * C::from_polar(1.0, -1.1)).powu(t)).sum::<C>() / 10.0;
        assert!((geometric_average(l, C::from_polar(1.0, 1.1), 10) - direct).norm() < 1e-14);
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(theta_grid(2), vec![-PI, PI]);
        let init = InitialCondition::uniform(0, 0).unwrap();
        let sw = sweep_theta(CoinClass::X, 5, 4, &init, 3, &[(0, 0), (1, 2)], false).unwrap();
        assert_eq!(sw.points.len(), 5);
        assert!(sw.points.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(sw.to_csv().lines().count(), 11);
        assert!(sweep_theta(CoinClass::X, 1, 4, &init, 3, &[(0, 0)], false).is_err());
    }

    #[test]
    fn sweep_n_matches_direct() {
        let init = InitialCondition::uniform(1, 0).unwrap();
        let sw = sweep_n(CoinClass::X, PI, &[9, 4], &init, 20, true).unwrap();
        assert_eq!(sw.points[0].0, 4.0);
        let direct = time_avg_direct(&CoinMatrix::grover(), 9, &init, 20).unwrap();
        assert_eq!(sw.points[1].1[0], direct.at(1, 0));
        assert!(sweep_n(CoinClass::X, PI, &[2], &init, 20, false).is_err());
    }

    #[test]
    fn csv_rows() {
        let init = InitialCondition::uniform(0, 0).unwrap();
        let avg = time_avg_direct(&CoinMatrix::grover(), 4, &init, 5).unwrap();
        assert_eq!(avg.to_csv().lines().count(), 9);
    }
}
