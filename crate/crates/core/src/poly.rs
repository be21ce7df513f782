//! Roots of low-degree complex polynomials.
//!
//! Coefficients are stored lowest degree first: `c[0] + c[1] z + ... + c[d] z^d`.

use num_complex::Complex64;

type C = Complex64;

pub fn eval(coeffs: &[C], z: C) -> C {
    coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_derivative(coeffs: &[C], z: C) -> C {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(C::new(0.0, 0.0), |acc, (i, &c)| acc * z + c * i as f64)
}

/// Divides `p` by the monic `divisor`, returning (quotient, remainder).
pub fn divide(p: &[C], divisor: &[C]) -> (Vec<C>, Vec<C>) {
    let dd = divisor.len() - 1;
    let lead = divisor[dd];
    let mut rem = p.to_vec();
    if p.len() <= dd {
        return (vec![C::new(0.0, 0.0)], rem);
    }
    let mut quot = vec![C::new(0.0, 0.0); p.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd] / lead;
        quot[i] = q;
        for (j, &d) in divisor.iter().enumerate() {
            rem[i + j] -= q * d;
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

pub fn quadratic(a: C, b: C, c: C) -> [C; 2] {
    // a z^2 + b z + c
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let s = if (b.conj() * disc).re >= 0.0 { b + disc } else { b - disc };
    if s.norm() == 0.0 {
        let r = (-c / a).sqrt();
        return [r, -r];
    }
    let q = -0.5 * s;
    [q / a, c / q]
}

/// Roots of the monic cubic `z^3 + a z^2 + b z + c` by Cardano's formula.
pub fn cubic(a: C, b: C, c: C) -> [C; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let omega = C::new(-0.5, 3f64.sqrt() / 2.0);

    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u3a = -q / 2.0 + disc;
    let u3b = -q / 2.0 - disc;
    let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };
    if u3.norm() == 0.0 {
        return [shift; 3];
    }
    let u = u3.powf(1.0 / 3.0);
    let mut out = [C::new(0.0, 0.0); 3];
    let mut uk = u;
    for root in out.iter_mut() {
        let v = -p / (3.0 * uk);
        *root = uk + v + shift;
        uk *= omega;
    }
    out
}

/// Largest relative move allowed by [`newton_polish`].
const POLISH_REACH: f64 = 1e-3;

/// Roots of the monic quartic `z^4 + a z^3 + b z^2 + c z + d` by Ferrari's method.
///
/// The resolvent cubic root of largest magnitude is used. When the roots are
/// clustered (tiny discriminant) each root is polished by at most 50 Newton steps.
pub fn ferrari(a: C, b: C, c: C, d: C) -> [C; 4] {
    // depressed quartic y^4 + p y^2 + q y + r with z = y - a/4
    let shift = -a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    let roots = if q.norm() < 1e-14 {
        // biquadratic
        let [w1, w2] = quadratic(C::new(1.0, 0.0), p, r);
        let (s1, s2) = (w1.sqrt(), w2.sqrt());
        [s1, -s1, s2, -s2]
    } else {
        // resolvent: 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0
        let res = cubic(p, (p * p / 4.0) - r, -q * q / 8.0);
        let m = res
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        let s = (2.0 * m).sqrt();
        let t = q / (2.0 * s);
        let [y1, y2] = quadratic(C::new(1.0, 0.0), s, p / 2.0 + m - t);
        let [y3, y4] = quadratic(C::new(1.0, 0.0), -s, p / 2.0 + m + t);
        [y1, y2, y3, y4]
    };
    let mut out = roots.map(|y| y + shift);

    let coeffs = [d, c, b, a, C::new(1.0, 0.0)];
    if discriminant_scale(&out) < 1e-12 {
        for z in out.iter_mut() {
            *z = newton_polish(&coeffs, *z, 50);
        }
    }
    out
}

/// Smallest pairwise root separation; a proxy for the discriminant magnitude.
fn discriminant_scale(roots: &[C]) -> f64 {
    let mut prod = 1.0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            prod *= (roots[i] - roots[j]).norm_sqr();
        }
    }
    prod
}

/// Newton iteration confined to a small disc around the start, so a root of
/// a near-multiple cluster cannot be dragged onto a different cluster.
pub fn newton_polish(coeffs: &[C], mut z: C, max_iter: usize) -> C {
    let start = z;
    let reach = POLISH_REACH * start.norm().max(1.0);
    let mut best = (eval(coeffs, z).norm(), z);
    for _ in 0..max_iter {
        let d = eval_derivative(coeffs, z);
        if d.norm() == 0.0 {
            break;
        }
        z -= eval(coeffs, z) / d;
        if (z - start).norm() > reach {
            break;
        }
        let f = eval(coeffs, z).norm();
        if f < best.0 {
            best = (f, z);
        }
        if f == 0.0 {
            break;
        }
    }
    best.1
}

/// All roots of a polynomial of degree at most four, in closed form.
pub fn roots_low_degree(coeffs: &[C]) -> Vec<C> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let lead = *c.last().unwrap();
    let m: Vec<C> = c.iter().map(|&z| z / lead).collect();
    match m.len() - 1 {
        0 => vec![],
        1 => vec![-m[0]],
        2 => quadratic(C::new(1.0, 0.0), m[1], m[0]).to_vec(),
        3 => cubic(m[2], m[1], m[0]).to_vec(),
        4 => ferrari(m[3], m[2], m[1], m[0]).to_vec(),
        d => panic!("closed-form roots requested for degree {d}"),
    }
}
