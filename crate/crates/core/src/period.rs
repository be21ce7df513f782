//! Periodicity of the walk: smallest τ ≥ 1 with `U^τ = I`.
//!
//! Three independent routes: closed-form period formulas for the special
//! coins of each class, rational recognition of the eigenphases, and brute
//! force powers of `U`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::coin::{normalize_angle, CoinClass, CoinMatrix};
use crate::error::{input, Error, Result};
use crate::evolve::build_evolution;
use crate::export::raw_f64;
use crate::fourier::{block_spectra, closed_form_eigenvalues, phase};

type C = Complex64;

/// Tolerance when matching θ against the special angles of the formulas.
pub const THETA_MATCH_TOL: f64 = 1e-12;
/// `‖U^τ − I‖_max` bound for accepting a period.
pub const PERIOD_TOL: f64 = 1e-8;
/// `|λ^q − 1|` bound for accepting an eigenphase as rational.
pub const ROOT_OF_UNITY_TOL: f64 = 1e-10;
/// Largest denominator tried when recognizing a cosine as rational.
pub const COSINE_DENOMINATOR_MAX: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodMethod {
    Theorem,
    Spectral,
    Brute,
}

impl fmt::Display for PeriodMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeriodMethod::Theorem => "theorem",
            PeriodMethod::Spectral => "spectral",
            PeriodMethod::Brute => "brute",
        })
    }
}

/// An eigenvalue whose phase is not a rational multiple of π.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub k: Option<usize>,
    pub lambda: C,
    pub cosine: f64,
    /// `cos φ = p/q` when recognized, which by Niven's theorem forces φ/π irrational.
    pub cosine_rational: Option<(i64, u64)>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.k {
            write!(f, "k={k}: ")?;
        }
        write!(f, "lambda={:.12}{:+.12}i, cos phi=", self.lambda.re, self.lambda.im)?;
        match self.cosine_rational {
            Some((p, q)) => write!(f, "{p}/{q}"),
            None => write!(f, "{:.12}", self.cosine),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PeriodOutcome {
    Finite(u128),
    Aperiodic(Witness),
    Unknown(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodFormulaTerm {
    pub k: usize,
    pub m_k: u64,
    pub p_k: u64,
    pub c_k: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenphaseRational {
    pub lambda: C,
    pub p: i64,
    pub q: u64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodResult {
    pub outcome: PeriodOutcome,
    pub method: PeriodMethod,
    pub terms: Vec<PeriodFormulaTerm>,
    pub note: Option<String>,
}

impl PeriodResult {
    fn new(outcome: PeriodOutcome, method: PeriodMethod) -> Self {
        Self { outcome, method, terms: Vec::new(), note: None }
    }

    pub fn tau(&self) -> Option<u128> {
        match self.outcome {
            PeriodOutcome::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_aperiodic(&self) -> bool {
        matches!(self.outcome, PeriodOutcome::Aperiodic(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.outcome, PeriodOutcome::Unknown(_))
    }

    /// `{method, outcome, tau?, witness?, cap?, terms}`
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            method: PeriodMethod,
            outcome: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            tau: Option<Box<RawValue>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            witness: Option<WitnessDoc>,
            #[serde(skip_serializing_if = "Option::is_none")]
            cap: Option<u64>,
            terms: &'a [PeriodFormulaTerm],
            #[serde(skip_serializing_if = "Option::is_none")]
            note: Option<&'a str>,
        }
        #[derive(Serialize)]
        struct WitnessDoc {
            #[serde(skip_serializing_if = "Option::is_none")]
            k: Option<usize>,
            re: Box<RawValue>,
            im: Box<RawValue>,
            cosine: Box<RawValue>,
            #[serde(skip_serializing_if = "Option::is_none")]
            cosine_rational: Option<String>,
            description: String,
        }
        let (outcome, tau, witness, cap) = match &self.outcome {
            PeriodOutcome::Finite(t) => {
                ("finite", Some(RawValue::from_string(t.to_string()).expect("integer is JSON")), None, None)
            }
            PeriodOutcome::Aperiodic(w) => (
                "aperiodic",
                None,
                Some(WitnessDoc {
                    k: w.k,
                    re: raw_f64(w.lambda.re),
                    im: raw_f64(w.lambda.im),
                    cosine: raw_f64(w.cosine),
                    cosine_rational: w.cosine_rational.map(|(p, q)| format!("{p}/{q}")),
                    description: w.to_string(),
                }),
                None,
            ),
            PeriodOutcome::Unknown(c) => ("unknown", None, None, Some(*c)),
        };
        let doc = Doc { method: self.method, outcome, tau, witness, cap, terms: &self.terms, note: self.note.as_deref() };
        serde_json::to_string(&doc).expect("serializable")
    }
}

impl fmt::Display for PeriodResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            PeriodOutcome::Finite(t) => write!(f, "{}: finite, tau = {t}", self.method),
            PeriodOutcome::Aperiodic(w) => write!(f, "{}: aperiodic ({w})", self.method),
            PeriodOutcome::Unknown(c) => write!(f, "{}: unknown up to {c}", self.method),
        }?;
        match &self.note {
            Some(note) => write!(f, " [{note}]"),
            None => Ok(()),
        }
    }
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Capacity(format!("lcm({a}, {b}) exceeds 128 bits")))
}

/// Last continued-fraction convergent `p/q` of `x` with `q ≤ q_max`.
pub fn best_rational(x: f64, q_max: u64) -> (i64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > q_max as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
        if !v.is_finite() {
            break;
        }
    }
    if q1 == 0 {
        (x.round() as i64, 1)
    } else {
        (p1 as i64, q1 as u64)
    }
}

/// True iff `c` is within 1e−10 of 0, ±1/2 or ±1, the only rational cosines
/// of rational multiples of π.
pub fn niven_check(c: f64) -> Result<bool> {
    if !c.is_finite() || c.abs() > 1.0 + 1e-12 {
        return input(format!("cosine must lie in [-1, 1], got {c}"));
    }
    Ok([0.0, 0.5, -0.5, 1.0, -1.0].iter().any(|v| (c - v).abs() <= 1e-10))
}

/// `a/b` in lowest terms.
fn reduce(a: u64, b: u64) -> (u64, u64) {
    let g = gcd(a as u128, b as u128) as u64;
    (a / g, b / g)
}

/// `lcm{base, c_k·p_k}` over k = 0..N−1 where `num·k/N = m_k/p_k` reduced.
fn formula_period(
    n: usize,
    base: u128,
    numerator: u64,
    c_of: impl Fn(u64) -> u64,
) -> Result<(u128, Vec<PeriodFormulaTerm>)> {
    let mut tau = base;
    let mut terms = Vec::with_capacity(n);
    for k in 0..n {
        let (m_k, p_k) = reduce(numerator * k as u64, n as u64);
        let c_k = c_of(m_k);
        tau = lcm(tau, c_k as u128 * p_k as u128)?;
        terms.push(PeriodFormulaTerm { k, m_k, p_k, c_k });
    }
    Ok((tau, terms))
}

fn odd_doubles(m: u64) -> u64 {
    if m.is_multiple_of(2) {
        1
    } else {
        2
    }
}

/// First closed-form eigenvalue, scanning k upwards, whose cosine is not one
/// of Niven's values; prefers cosines recognizable as rational.
fn formula_witness(class: CoinClass, theta: f64, n: usize) -> Result<Option<Witness>> {
    let coin = CoinMatrix::from_theta(class, theta)?;
    let mut fallback = None;
    for k in 0..n {
        for lambda in closed_form_eigenvalues(&coin, n, k) {
            let cosine = lambda.re.clamp(-1.0, 1.0);
            if niven_check(cosine)? {
                continue;
            }
            let (p, q) = best_rational(cosine, COSINE_DENOMINATOR_MAX);
            let rational = ((cosine - p as f64 / q as f64).abs() <= 1e-10).then_some((p, q));
            let w = Witness { k: Some(k), lambda, cosine, cosine_rational: rational };
            if rational.is_some() {
                return Ok(Some(w));
            }
            fallback.get_or_insert(w);
        }
    }
    Ok(fallback)
}

/// Period from the closed-form formulas of each class.
///
/// X: θ=0 → lcm{2, c_k p_k} with 2k/N; θ=±2π/3 → 6.
/// Y: θ=π → lcm{2, 2p_k} with (N−2)k/N; θ=±π/3 → 6.
/// Z: θ=2π/3 → lcm{2, 2p_k} with k/N; θ=−2π/3 → 4; θ=0 → lcm{4, c_k p_k} with 2k/N.
/// W: θ=2π/3 → lcm{2, 2p_k} with 2k/N; θ=−2π/3 → 4; θ=0 → lcm{4, 2p_k} with 2k/N.
/// Every other angle is aperiodic. `c_k` is 1 for even `m_k` and 2 for odd.
pub fn theorem_period(class: CoinClass, theta: f64, n: usize) -> Result<PeriodResult> {
    if !theta.is_finite() {
        return input(format!("theta must be finite, got {theta}"));
    }
    if n < 3 {
        return input(format!("walk needs n >= 3, got {n}"));
    }
    let th = normalize_angle(theta);
    let near = |target: f64| (normalize_angle(th - target)).abs() <= THETA_MATCH_TOL;
    let third = 2.0 * PI / 3.0;
    let sixth = PI / 3.0;
    let finite = |tau: u128, terms: Vec<PeriodFormulaTerm>| PeriodResult {
        outcome: PeriodOutcome::Finite(tau),
        method: PeriodMethod::Theorem,
        terms,
        note: None,
    };
    let constant = |tau: u128| finite(tau, Vec::new());
    let hit = match class {
        CoinClass::X if near(0.0) => Some(formula_period(n, 2, 2, odd_doubles).map(|(t, v)| finite(t, v))?),
        CoinClass::X if near(third) || near(-third) => Some(constant(6)),
        CoinClass::Y if near(PI) => {
            Some(formula_period(n, 2, n as u64 - 2, |_| 2).map(|(t, v)| finite(t, v))?)
        }
        CoinClass::Y if near(sixth) || near(-sixth) => Some(constant(6)),
        CoinClass::Z if near(third) => Some(formula_period(n, 2, 1, |_| 2).map(|(t, v)| finite(t, v))?),
        CoinClass::Z if near(-third) => Some(constant(4)),
        CoinClass::Z if near(0.0) => Some(formula_period(n, 4, 2, odd_doubles).map(|(t, v)| finite(t, v))?),
        CoinClass::W if near(third) => Some(formula_period(n, 2, 2, |_| 2).map(|(t, v)| finite(t, v))?),
        CoinClass::W if near(-third) => Some(constant(4)),
        CoinClass::W if near(0.0) => Some(formula_period(n, 4, 2, |_| 2).map(|(t, v)| finite(t, v))?),
        _ => None,
    };
    if let Some(r) = hit {
        return Ok(r);
    }
    let witness = formula_witness(class, th, n)?;
    let mut result = PeriodResult::new(
        PeriodOutcome::Aperiodic(witness.clone().unwrap_or(Witness {
            k: None,
            lambda: C::new(1.0, 0.0),
            cosine: 1.0,
            cosine_rational: Some((1, 1)),
        })),
        PeriodMethod::Theorem,
    );
    if witness.is_none() {
        result.note = Some("every closed-form eigenvalue has a Niven cosine; the aperiodic verdict has no witness".into());
        return Ok(result);
    }
    let specials = [0.0, third, -third, PI, sixth, -sixth];
    if let Some(s) = specials.iter().find(|&&s| {
        let d = normalize_angle(th - s).abs();
        d > THETA_MATCH_TOL && d <= 1e-6
    }) {
        result.note = Some(format!("theta is {:.3e} away from the special angle {s:.15}", normalize_angle(th - s).abs()));
    }
    Ok(result)
}

fn pow_u128(z: C, mut e: u128) -> C {
    let mut base = z;
    let mut acc = C::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
            base /= base.norm();
        }
    }
    acc
}

/// Rational recognition of every eigenphase of every block.
pub fn eigenphase_rationals(coin: &CoinMatrix, n: usize, q_max: u64) -> Result<Vec<(usize, EigenphaseRational)>> {
    let mut out = Vec::with_capacity(6 * n);
    for sys in block_spectra(coin, n, false)? {
        for &lambda in &sys.eigenvalues {
            let frac = phase(lambda) / (2.0 * PI);
            let (p, q) = best_rational(frac, q_max);
            let verified = (pow_u128(lambda, q as u128) - 1.0).norm() <= ROOT_OF_UNITY_TOL;
            out.push((sys.k, EigenphaseRational { lambda, p, q, verified }));
        }
    }
    Ok(out)
}

fn max_eigen_power_defect(values: &[C], t: u128) -> f64 {
    values.iter().map(|&l| (pow_u128(l, t) - 1.0).norm()).fold(0.0, f64::max)
}

fn prime_factors(mut t: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= t {
        if t.is_multiple_of(p) {
            out.push(p);
            while t.is_multiple_of(p) {
                t /= p;
            }
        }
        p += 1;
    }
    if t > 1 {
        out.push(t);
    }
    out
}

/// Period from eigenphases recognized as rational multiples of 2π.
pub fn spectral_period(coin: &CoinMatrix, n: usize, q_max: u64) -> Result<PeriodResult> {
    if q_max < 2 {
        return input(format!("q_max must be at least 2, got {q_max}"));
    }
    let rationals = eigenphase_rationals(coin, n, q_max)?;
    if let Some((k, bad)) = rationals.iter().find(|(_, r)| !r.verified).copied() {
        for (k, r) in rationals.iter().filter(|(_, r)| !r.verified) {
            let c = r.lambda.re.clamp(-1.0, 1.0);
            let (p, q) = best_rational(c, COSINE_DENOMINATOR_MAX);
            if (c - p as f64 / q as f64).abs() <= 1e-10 && !niven_check(c)? {
                let w = Witness { k: Some(*k), lambda: r.lambda, cosine: c, cosine_rational: Some((p, q)) };
                return Ok(PeriodResult::new(PeriodOutcome::Aperiodic(w), PeriodMethod::Spectral));
            }
        }
        let mut result = PeriodResult::new(PeriodOutcome::Unknown(q_max), PeriodMethod::Spectral);
        result.note = Some(format!(
            "eigenvalue {:.12}{:+.12}i in block k={k} has no recognizable rational phase",
            bad.lambda.re, bad.lambda.im
        ));
        return Ok(result);
    }

    let mut tau = 1u128;
    for (_, r) in &rationals {
        tau = lcm(tau, r.q as u128)?;
    }
    let values: Vec<C> = rationals.iter().map(|(_, r)| r.lambda).collect();
    // shrink to the smallest divisor that still annihilates every eigenvalue
    loop {
        let smaller = prime_factors(tau)
            .into_iter()
            .map(|p| tau / p)
            .find(|&d| max_eigen_power_defect(&values, d) <= PERIOD_TOL);
        match smaller {
            Some(d) => tau = d,
            None => break,
        }
    }
    let defect = if tau <= 1000 {
        build_evolution(coin, n)?.matrix().pow(tau as u64).distance_from_identity()
    } else {
        max_eigen_power_defect(&values, tau)
    };
    if defect > PERIOD_TOL {
        return Err(Error::NumericalFailure(format!("‖U^{tau} − I‖ = {defect:e} despite rational eigenphases")));
    }
    Ok(PeriodResult::new(PeriodOutcome::Finite(tau), PeriodMethod::Spectral))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteMode {
    /// Repeated multiplication of the dense operator, max-entry norm.
    Dense,
    /// Powers of the numerically computed eigenvalues, spectral norm.
    EigenPower,
}

/// Smallest `t ≤ t_max` with `‖U^t − I‖ ≤ tol`.
pub fn brute_force_period(coin: &CoinMatrix, n: usize, t_max: u64, tol: f64, mode: BruteMode) -> Result<PeriodResult> {
    if t_max < 1 {
        return input("t_max must be at least 1");
    }
    let found = match mode {
        BruteMode::Dense => {
            let u = build_evolution(coin, n)?;
            let mut power = u.matrix().clone();
            let mut found = None;
            for t in 1..=t_max {
                if power.distance_from_identity() <= tol {
                    found = Some(t);
                    break;
                }
                if t < t_max {
                    power = u.matrix() * &power;
                }
            }
            found
        }
        BruteMode::EigenPower => {
            let phases: Vec<f64> = block_spectra(coin, n, false)?
                .iter()
                .flat_map(|s| s.eigenvalues.iter().map(|&l| phase(l)))
                .collect();
            (1..=t_max).find(|&t| {
                phases.iter().all(|&p| (C::from_polar(1.0, (t as f64 * p) % (2.0 * PI)) - 1.0).norm() <= tol)
            })
        }
    };
    Ok(match found {
        Some(t) => PeriodResult::new(PeriodOutcome::Finite(t as u128), PeriodMethod::Brute),
        None => PeriodResult::new(PeriodOutcome::Unknown(t_max), PeriodMethod::Brute),
    })
}

/// One row of the W-class comparison between the formula and the numerical routes.
#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub theta_label: &'static str,
    pub n: usize,
    pub theorem: PeriodResult,
    pub spectral: PeriodResult,
    pub brute: PeriodResult,
}

impl Discrepancy {
    pub fn agrees(&self) -> bool {
        let key = |r: &PeriodResult| match r.outcome {
            PeriodOutcome::Finite(t) => Some(t),
            _ => None,
        };
        key(&self.theorem) == key(&self.brute)
    }
}

/// Compares the W formulas with spectral and brute force periods at the
/// formula angles {0, ±2π/3} and the signed-permutation angles {π, ±π/3}.
pub fn w_class_report(ns: &[usize], t_max: u64) -> Result<Vec<Discrepancy>> {
    let angles: [(&'static str, f64); 6] = [
        ("0", 0.0),
        ("2pi/3", 2.0 * PI / 3.0),
        ("-2pi/3", -2.0 * PI / 3.0),
        ("pi", PI),
        ("pi/3", PI / 3.0),
        ("-pi/3", -PI / 3.0),
    ];
    let mut out = Vec::new();
    for &(label, theta) in &angles {
        for &n in ns {
            let coin = CoinMatrix::from_theta(CoinClass::W, theta)?;
            out.push(Discrepancy {
                theta_label: label,
                n,
                theorem: theorem_period(CoinClass::W, theta, n)?,
                spectral: spectral_period(&coin, n, 10_000)?,
                brute: brute_force_period(&coin, n, t_max, PERIOD_TOL, BruteMode::Dense)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin(class: CoinClass, theta: f64) -> CoinMatrix {
        CoinMatrix::from_theta(class, theta).unwrap()
    }

    #[test]
    fn formula_examples() {
        for n in 3..9 {
            assert_eq!(theorem_period(CoinClass::X, 2.0 * PI / 3.0, n).unwrap().tau(), Some(6));
            assert_eq!(theorem_period(CoinClass::Z, -2.0 * PI / 3.0, n).unwrap().tau(), Some(4));
            assert!(theorem_period(CoinClass::X, PI, n).unwrap().is_aperiodic());
        }
        assert_eq!(theorem_period(CoinClass::X, 0.0, 4).unwrap().tau(), Some(4));
        assert_eq!(theorem_period(CoinClass::X, 4.0 * PI / 3.0, 5).unwrap().tau(), Some(6));
    }

    #[test]
    fn formula_terms_are_reduced() {
        let r = theorem_period(CoinClass::X, 0.0, 12).unwrap();
        assert_eq!(r.terms.len(), 12);
        for t in &r.terms {
            assert_eq!(gcd(t.m_k as u128, t.p_k as u128), 1);
            assert_eq!(t.m_k * 12, 2 * t.k as u64 * t.p_k);
        }
    }

    #[test]
    fn grover_witness_is_one_third() {
        let r = theorem_period(CoinClass::X, PI, 4).unwrap();
        match r.outcome {
            PeriodOutcome::Aperiodic(w) => assert_eq!(w.cosine_rational, Some((1, 3))),
            other => panic!("{other:?}"),
        }
        let r = spectral_period(&CoinMatrix::grover(), 4, 10_000).unwrap();
        match r.outcome {
            PeriodOutcome::Aperiodic(w) => assert_eq!(w.cosine_rational, Some((1, 3))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spectral_examples() {
        assert_eq!(spectral_period(&coin(CoinClass::X, 0.0), 6, 10_000).unwrap().tau(), Some(6));
        assert_eq!(spectral_period(&coin(CoinClass::X, 2.0 * PI / 3.0), 5, 10_000).unwrap().tau(), Some(6));
        assert!(spectral_period(&coin(CoinClass::X, 0.0), 6, 1).is_err());
    }

    #[test]
    fn brute_examples() {
        let r = brute_force_period(&coin(CoinClass::X, 2.0 * PI / 3.0), 3, 10, PERIOD_TOL, BruteMode::Dense).unwrap();
        assert_eq!(r.tau(), Some(6));
        let r = brute_force_period(&coin(CoinClass::Y, PI), 5, 20, PERIOD_TOL, BruteMode::Dense).unwrap();
        assert_eq!(r.tau(), Some(10));
        let r = brute_force_period(&CoinMatrix::grover(), 3, 10_000, PERIOD_TOL, BruteMode::EigenPower).unwrap();
        assert_eq!(r.outcome, PeriodOutcome::Unknown(10_000));
    }

    #[test]
    fn niven_examples() {
        assert!(niven_check(0.5).unwrap());
        assert!(!niven_check(1.0 / 3.0).unwrap());
        assert!(niven_check(1.0).unwrap());
        assert!(niven_check(1.5).is_err());
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(best_rational(1.0 / 3.0, 1000), (1, 3));
        assert_eq!(best_rational(-0.25, 1000), (-1, 4));
        assert_eq!(best_rational(PI, 1000), (355, 113));
        assert_eq!(best_rational(0.0, 10), (0, 1));
    }

    #[test]
    fn lcm_overflow_is_reported() {
        assert_eq!(lcm(4, 6).unwrap(), 12);
        assert!(matches!(lcm(u128::MAX, u128::MAX - 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn near_miss_gets_note() {
        let r = theorem_period(CoinClass::X, 2.0 * PI / 3.0 + 1e-9, 5).unwrap();
        assert!(r.is_aperiodic());
        assert!(r.note.is_some());
    }

    #[test]
    fn json_fields() {
        let v: serde_json::Value =
            serde_json::from_str(&theorem_period(CoinClass::X, 0.0, 4).unwrap().to_json()).unwrap();
        assert_eq!(v["method"], "theorem");
        assert_eq!(v["outcome"], "finite");
        assert_eq!(v["tau"], 4);
        assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    }
}
