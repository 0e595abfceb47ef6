//! Real roots of polynomials of degree at most three.
//!
//! Cubics go through the depressed form `t^3 + p t + q`: the trigonometric
//! branch when three real roots exist, a sign-stable Cardano branch otherwise.
//! Every root gets a Newton correction against the original coefficients.

use crate::scalar::{lit, Real};

/// Relative size below which a leading coefficient is treated as zero.
pub const DEGREE_TOL: f64 = 1e-10;

/// Real roots of `c[0] + c[1] x + c[2] x^2 + c[3] x^3`, ascending.
///
/// `scale` is the magnitude of the roots of interest. A leading coefficient
/// whose contribution `|c_k| scale^k` is below `DEGREE_TOL` times the largest
/// such contribution is dropped, so round-off in a structurally vanishing
/// term cannot produce a spurious root near infinity. Repeated roots are
/// reported once. An identically zero polynomial yields no roots.
pub fn real_roots<T: Real>(c: [T; 4], scale: T) -> Vec<T> {
    let s = if scale > T::zero() && scale.is_finite() {
        scale
    } else {
        T::one()
    };
    let mut weighted = [T::zero(); 4];
    let mut sp = T::one();
    for k in 0..4 {
        weighted[k] = c[k].abs() * sp;
        sp = sp * s;
    }
    let big = weighted.iter().fold(T::zero(), |m, &v| m.max(v));
    if big == T::zero() || !big.is_finite() {
        return Vec::new();
    }
    let cut = lit::<T>(DEGREE_TOL) * big;
    let mut degree = 3;
    while degree > 0 && weighted[degree] <= cut {
        degree -= 1;
    }
    let coeffs = &c[..=degree];
    let mut roots = match degree {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => quadratic(c[2], c[1], c[0]),
        _ => cubic(c[3], c[2], c[1], c[0]),
    };
    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    roots.dedup_by(|a, b| (*a - *b).abs() <= lit::<T>(1e-12) * a.abs().max(b.abs()));
    roots
}

fn eval<T: Real>(c: &[T], x: T) -> (T, T) {
    let mut p = T::zero();
    let mut dp = T::zero();
    for &ck in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp)
}

fn polish<T: Real>(c: &[T], mut x: T) -> T {
    let (mut px, _) = eval(c, x);
    for _ in 0..3 {
        let (p, dp) = eval(c, x);
        if dp == T::zero() || p == T::zero() {
            break;
        }
        let cand = x - p / dp;
        let (pc, _) = eval(c, cand);
        if pc.abs() < px.abs() {
            x = cand;
            px = pc;
        } else {
            break;
        }
    }
    x
}

/// Roots of `a x^2 + b x + c` with `a != 0`.
fn quadratic<T: Real>(a: T, b: T, c: T) -> Vec<T> {
    let disc = b * b - lit::<T>(4.0) * a * c;
    if disc < T::zero() {
        // Near-double roots can land just below zero through round-off.
        if disc.abs() <= lit::<T>(1e-12) * (b * b).max((lit::<T>(4.0) * a * c).abs()) {
            return vec![-b / (lit::<T>(2.0) * a)];
        }
        return Vec::new();
    }
    if disc == T::zero() {
        return vec![-b / (lit::<T>(2.0) * a)];
    }
    let sq = disc.sqrt();
    let q = -(b + b.signum() * sq) / lit::<T>(2.0);
    if q == T::zero() {
        return vec![T::zero()];
    }
    vec![q / a, c / q]
}

/// Roots of `a x^3 + b x^2 + c x + d` with `a != 0`.
fn cubic<T: Real>(a: T, b: T, c: T, d: T) -> Vec<T> {
    let three = lit::<T>(3.0);
    let two = lit::<T>(2.0);
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / three;
    let p = c - b * b / three;
    let q = two * b * b * b / lit::<T>(27.0) - b * c / three + d;

    let scale = p.abs().sqrt().max(q.abs().cbrt()).max(shift.abs());
    if scale == T::zero() {
        return vec![-shift];
    }

    let half_q = q / two;
    let third_p = p / three;
    let disc = half_q * half_q + third_p * third_p * third_p;

    if disc < T::zero() {
        // Three distinct real roots.
        let r = two * (-third_p).sqrt();
        let arg = (three * q / (two * p) * (-three / p).sqrt())
            .max(-T::one())
            .min(T::one());
        let phi = arg.acos() / three;
        let tau = two * T::PI() / three;
        return (0..3)
            .map(|k| r * (phi - tau * T::from_usize(k).unwrap()).cos() - shift)
            .collect();
    }

    let sq = disc.sqrt();
    let big_a = -half_q.signum() * (half_q.abs() + sq).cbrt();
    let big_b = if big_a == T::zero() {
        T::zero()
    } else {
        -third_p / big_a
    };
    let t1 = big_a + big_b;
    let mut out = vec![t1 - shift];
    let spread = (big_a - big_b).abs();
    if spread <= lit::<T>(1e-7) * big_a.abs().max(big_b.abs()).max(scale) {
        out.push(-t1 / two - shift);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(r: &[f64]) -> [f64; 4] {
        // (x - r0)(x - r1)(x - r2)
        let (a, b, c) = (r[0], r[1], r[2]);
        [-a * b * c, a * b + a * c + b * c, -(a + b + c), 1.0]
    }

    #[test]
    fn three_distinct_roots() {
        let r: Vec<f64> = real_roots(from_roots(&[1.0, 2.0, 3.0]), 1.0);
        assert_eq!(r.len(), 3);
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12, "{x} vs {e}");
        }
    }

    #[test]
    fn single_real_root() {
        // (x - 2)(x^2 + 1)
        let r: Vec<f64> = real_roots([-2.0, 1.0, -2.0, 1.0], 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn triple_root() {
        let r: Vec<f64> = real_roots(from_roots(&[0.5, 0.5, 0.5]), 1.0);
        assert!(!r.is_empty());
        for x in r {
            assert!((x - 0.5).abs() < 1e-5);
        }
    }

    #[test]
    fn double_root_reported() {
        let r: Vec<f64> = real_roots(from_roots(&[1.0, 1.0, -2.0]), 1.0);
        assert!(r.iter().any(|x| (x + 2.0).abs() < 1e-10));
        assert!(r.iter().any(|x| (x - 1.0).abs() < 1e-6));
    }

    #[test]
    fn vanishing_leading_coefficient_is_dropped() {
        // Quadratic -1.3 u^2 + 0.46 u + 0.14 with round-off in the cubic term.
        let c: [f64; 4] = [0.138, 0.463, -1.3325, 1.2e-14];
        let r = real_roots(c, 6.6);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.abs() < 10.0));
    }

    #[test]
    fn lower_degrees() {
        assert_eq!(real_roots([2.0, -1.0, 0.0, 0.0], 1.0), vec![2.0]);
        let q = real_roots([-1.0, 0.0, 1.0, 0.0], 1.0);
        assert_eq!(q.len(), 2);
        assert!(real_roots([1.0, 0.0, 1.0, 0.0], 1.0).is_empty());
        assert!(real_roots([0.0f64; 4], 1.0).is_empty());
    }

    #[test]
    fn works_in_f32() {
        let r = real_roots([-6.0f32, 11.0, -6.0, 1.0], 1.0);
        assert_eq!(r.len(), 3);
        assert!((r[2] - 3.0).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn recovers_planted_roots(
            a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0,
        ) {
            let mut planted = [a, b, c];
            planted.sort_by(|x, y| x.partial_cmp(y).unwrap());
            prop_assume!(planted[1] - planted[0] > 1e-2 && planted[2] - planted[1] > 1e-2);
            let r = real_roots(from_roots(&planted), 10.0);
            prop_assert_eq!(r.len(), 3);
            for (x, e) in r.iter().zip(planted) {
                prop_assert!((x - e).abs() < 1e-8 * (1.0 + e.abs()));
            }
        }

        #[test]
        fn every_root_is_a_zero(c0 in -5.0f64..5.0, c1 in -5.0f64..5.0, c2 in -5.0f64..5.0, c3 in 0.1f64..5.0) {
            let c = [c0, c1, c2, c3];
            for x in real_roots(c, 1.0) {
                let (p, _) = eval(&c, x);
                let mag = c.iter().enumerate().map(|(k, v)| v.abs() * x.abs().powi(k as i32)).sum::<f64>();
                prop_assert!(p.abs() <= 1e-10 * mag.max(1.0));
            }
        }
    }
}
