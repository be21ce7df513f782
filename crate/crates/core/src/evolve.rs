//! Shift and evolution operators and direct time stepping.
//!
//! Amplitude `ψ(l, s, r)` lives at index `l·2N + s·N + r`. Coin direction 0
//! moves along the cycle orientation (`r+1` on the inner cycle, `r−1` on the
//! outer), direction 1 stays, direction 2 switches cycles.

use std::fmt::Write;

use num_complex::Complex64;

use crate::coin::CoinMatrix;
use crate::error::{input, Result};
use crate::export::fmt_f64;
use crate::linalg::CMatrix;

type C = Complex64;

/// Normalization tolerance accepted for user-built states.
pub const NORM_TOL: f64 = 1e-10;

#[inline]
pub fn state_index(l: usize, s: usize, r: usize, n: usize) -> usize {
    l * 2 * n + s * n + r
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    amplitudes: Vec<C>,
    time: u64,
}

impl WalkState {
    /// Wraps an amplitude vector of length 6n; it must be normalized.
    pub fn new(n: usize, amplitudes: Vec<C>) -> Result<Self> {
        if n < 3 {
            return input(format!("walk needs n >= 3, got {n}"));
        }
        if amplitudes.len() != 6 * n {
            return input(format!("expected {} amplitudes, got {}", 6 * n, amplitudes.len()));
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return input(format!("state norm² is {norm2}, expected 1"));
        }
        Ok(Self { n, amplitudes, time: 0 })
    }

    /// `|l⟩|s⟩|r⟩`
    pub fn basis(n: usize, l: usize, s: usize, r: usize) -> Result<Self> {
        if l > 2 {
            return input(format!("coin direction must be 0, 1 or 2, got {l}"));
        }
        let mut coin = [C::new(0.0, 0.0); 3];
        coin[l] = C::new(1.0, 0.0);
        Self::localized(n, s, r, coin)
    }

    /// `(a₀|0⟩ + a₁|1⟩ + a₂|2⟩) ⊗ |s⟩|r⟩`
    pub fn localized(n: usize, s: usize, r: usize, coin: [C; 3]) -> Result<Self> {
        if s > 1 || r >= n {
            return input(format!("vertex ({s}, {r}) out of range for n = {n}"));
        }
        let mut amps = vec![C::new(0.0, 0.0); 6 * n];
        for (l, &a) in coin.iter().enumerate() {
            amps[state_index(l, s, r, n)] = a;
        }
        Self::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amplitudes
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn amplitude(&self, l: usize, s: usize, r: usize) -> C {
        self.amplitudes[state_index(l, s, r, self.n)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// The six amplitudes at rotation `r`, ordered `j = 2l + s`.
    pub fn local_vector(&self, r: usize) -> [C; 6] {
        std::array::from_fn(|j| self.amplitude(j / 2, j % 2, r))
    }

    pub(crate) fn from_parts(n: usize, amplitudes: Vec<C>, time: u64) -> Self {
        Self { n, amplitudes, time }
    }

    /// Columns `l,s,r,re,im`, one row per basis state in index order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,s,r,re,im\n");
        for l in 0..3 {
            for s in 0..2 {
                for r in 0..self.n {
                    let z = self.amplitude(l, s, r);
                    writeln!(out, "{l},{s},{r},{},{}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionOperator {
    n: usize,
    coin: Option<CoinMatrix>,
    matrix: CMatrix,
}

impl EvolutionOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` for the bare shift `S`.
    pub fn coin(&self) -> Option<&CoinMatrix> {
        self.coin.as_ref()
    }

    pub fn is_shift_only(&self) -> bool {
        self.coin.is_none()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Destination index of basis state `(l, s, r)` under the shift.
pub fn shift_target(l: usize, s: usize, r: usize, n: usize) -> (usize, usize, usize) {
    match l {
        0 if s == 0 => (0, 0, (r + 1) % n),
        0 => (0, 1, (r + n - 1) % n),
        1 => (1, s, r),
        _ => (2, 1 - s, r),
    }
}

pub fn build_shift(n: usize) -> Result<EvolutionOperator> {
    if n < 3 {
        return input(format!("walk needs n >= 3, got {n}"));
    }
    let mut m = CMatrix::zeros(6 * n, 6 * n);
    for l in 0..3 {
        for s in 0..2 {
            for r in 0..n {
                let (l2, s2, r2) = shift_target(l, s, r, n);
                m[(state_index(l2, s2, r2, n), state_index(l, s, r, n))] = C::new(1.0, 0.0);
            }
        }
    }
    Ok(EvolutionOperator { n, coin: None, matrix: m })
}

/// `U = S·(C ⊗ I₂ ⊗ I_N)` as a dense 6N×6N matrix.
pub fn build_evolution(coin: &CoinMatrix, n: usize) -> Result<EvolutionOperator> {
    if n < 3 {
        return input(format!("walk needs n >= 3, got {n}"));
    }
    // column (j, s, r) feeds c_lj into the shifted image of (l, s, r)
    let mut matrix = CMatrix::zeros(6 * n, 6 * n);
    for l in 0..3 {
        for s in 0..2 {
            for r in 0..n {
                let (l2, s2, r2) = shift_target(l, s, r, n);
                let row = state_index(l2, s2, r2, n);
                for j in 0..3 {
                    matrix[(row, state_index(j, s, r, n))] = C::new(coin.entry(l, j), 0.0);
                }
            }
        }
    }
    Ok(EvolutionOperator { n, coin: Some(*coin), matrix })
}

pub fn step_dense(state: &WalkState, u: &EvolutionOperator) -> Result<WalkState> {
    if state.n != u.n {
        return input(format!("state has n = {}, operator has n = {}", state.n, u.n));
    }
    Ok(WalkState::from_parts(state.n, u.matrix.mul_vec(&state.amplitudes), state.time + 1))
}

/// One step in O(N) without forming `U`.
///
/// Equivalent to `ψ(r, t+1) = M₁ψ(r+1, t) + M₂ψ(r−1, t) + M₃ψ(r, t)` where the
/// 6×6 blocks carry the coin entries on the rows that move, stay or switch.
pub fn step_local(state: &WalkState, coin: &CoinMatrix) -> WalkState {
    let n = state.n;
    let mut out = vec![C::new(0.0, 0.0); 6 * n];
    step_local_into(&state.amplitudes, &mut out, coin, n);
    WalkState::from_parts(n, out, state.time + 1)
}

pub(crate) fn step_local_into(src: &[C], dst: &mut [C], coin: &CoinMatrix, n: usize) {
    let c = coin.entries();
    for s in 0..2 {
        for r in 0..n {
            let a = [
                src[state_index(0, s, r, n)],
                src[state_index(1, s, r, n)],
                src[state_index(2, s, r, n)],
            ];
            for (l, row) in c.iter().enumerate() {
                let v = a[0] * row[0] + a[1] * row[1] + a[2] * row[2];
                let (l2, s2, r2) = shift_target(l, s, r, n);
                dst[state_index(l2, s2, r2, n)] = v;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub p: Vec<f64>,
    pub time: u64,
}

pub fn position_probabilities(state: &WalkState) -> PositionDistribution {
    let n = state.n;
    let mut p = vec![0.0; 2 * n];
    accumulate_probabilities(&state.amplitudes, n, &mut p, 1.0);
    PositionDistribution { p, time: state.time }
}

/// `acc[s·N + r] += weight · Σ_l |ψ(l, s, r)|²`
pub(crate) fn accumulate_probabilities(amps: &[C], n: usize, acc: &mut [f64], weight: f64) {
    for (i, z) in amps.iter().enumerate() {
        acc[i % (2 * n)] += weight * z.norm_sqr();
    }
}

/// `U^t ψ₀` by repeated dense steps.
pub fn evolve_t(state0: &WalkState, u: &EvolutionOperator, t: i64) -> Result<WalkState> {
    if t < 0 {
        return input(format!("time must be non-negative, got {t}"));
    }
    let mut state = state0.clone();
    for _ in 0..t {
        state = step_dense(&state, u)?;
    }
    Ok(state)
}
