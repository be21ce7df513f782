//! Discrete-time quantum walks on the dihedral Cayley graph Cay(D_N, {a, b})
//! with three-state generalized Grover coins.
//!
//! The position space has 2N vertices `(s, r)`; the coin space has three
//! directions (rotate, stay, switch cycle). States use the layout
//! `l·2N + s·N + r`.

pub mod cayley;
pub mod coin;
pub mod error;
pub mod evolve;
pub mod export;
pub mod fourier;
pub mod linalg;
pub mod localize;
pub mod period;
pub mod poly;

pub use cayley::{build_cayley, is_reversible, vertex_index, CayleyGraph, DihedralVertex};
pub use coin::{classify_coin, normalize_angle, CoinClass, CoinClassification, CoinMatrix, SignedPermutation};
pub use error::{Error, Result};
pub use evolve::{
    build_evolution, build_shift, evolve_t, position_probabilities, step_dense, step_local, EvolutionOperator,
    PositionDistribution, WalkState,
};
pub use fourier::{
    build_uk, dft_state, eigen_closed_form, eigen_numeric, full_spectrum, idft_state, EigenSystem, FourierBlock,
};
pub use localize::{
    limit_time_avg, sweep_n, sweep_theta, time_avg_direct, time_avg_spectral, AverageMethod, InitialCondition,
    SweepAxis, SweepResult, TimeAveragedResult,
};
pub use period::{
    brute_force_period, niven_check, spectral_period, theorem_period, BruteMode, PeriodMethod, PeriodOutcome,
    PeriodResult,
};

/// Convenience constructor for [`CoinMatrix::from_theta`].
pub fn coin_from_theta(class: CoinClass, theta: f64) -> Result<CoinMatrix> {
    CoinMatrix::from_theta(class, theta)
}

/// Convenience constructor for [`CoinMatrix::from_xy`].
pub fn coin_from_xy(class: CoinClass, x: f64, y: f64) -> Result<CoinMatrix> {
    CoinMatrix::from_xy(class, x, y)
}
