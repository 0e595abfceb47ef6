//! Adaptive explicit integration (Dormand-Prince 5(4)) and relaxation to
//! steady state.
//!
//! Step control is the PI controller of Hairer & Wanner's DOPRI5; the local
//! error of every accepted step is bounded componentwise by
//! `abs_tol + rel_tol * max(|x_old|, |x_new|)`. Sample output between steps
//! uses the method's fourth-order continuous extension.

use crate::error::{Error, Result};
use crate::model::{rhs, ModelParameters, StateVector, N_SPECIES};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    /// fmol/cm^2.
    pub abs_tol: T,
    /// Upper bound on the step size, s.
    pub max_step: T,
    /// Horizon for [`relax_to_steady`], s.
    pub t_max: T,
    /// Relaxation stops once `|rhs|_inf < steady_norm_tol * max(1, |x|_inf)`.
    pub steady_norm_tol: T,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-8),
            abs_tol: lit(1e-12),
            max_step: lit(1e3),
            t_max: lit(1e6),
            steady_norm_tol: lit(1e-10),
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("t_max", self.t_max),
            ("steady_norm_tol", self.steady_norm_tol),
        ];
        for (name, v) in checks {
            if !(v > T::zero()) || v.is_nan() {
                return Err(Error::InvalidParameter {
                    name,
                    value: to_f64(v),
                    reason: "must be > 0",
                });
            }
        }
        Ok(())
    }
}

/// Right-hand side of an autonomous or time-dependent ODE system.
pub trait OdeSystem<T, const N: usize> {
    fn derivative(&self, t: T, x: &[T; N], dx: &mut [T; N]);
}

impl<T, F, const N: usize> OdeSystem<T, N> for F
where
    F: Fn(T, &[T; N], &mut [T; N]),
{
    fn derivative(&self, t: T, x: &[T; N], dx: &mut [T; N]) {
        self(t, x, dx)
    }
}

/// The receptor model as an ODE system.
#[derive(Debug, Clone, Copy)]
pub struct ModelSystem<'a, T>(pub &'a ModelParameters<T>);

impl<T: Real> OdeSystem<T, N_SPECIES> for ModelSystem<'_, T> {
    fn derivative(&self, _t: T, x: &[T; N_SPECIES], dx: &mut [T; N_SPECIES]) {
        *dx = rhs(&StateVector(*x), self.0).0;
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const PI_BETA: f64 = 0.04;

/// Stepper state of the Dormand-Prince pair.
pub struct Dopri5<'s, T, S, const N: usize> {
    sys: &'s S,
    cfg: IntegratorConfig<T>,
    t: T,
    x: [T; N],
    dx: [T; N],
    h: T,
    facold: T,
    last_rejected: bool,
    // Continuous extension of the last accepted step on [t_prev, t].
    t_prev: T,
    cont: [[T; N]; 5],
    accepted: usize,
    rejected: usize,
}

/// `a + h * sum(c_i * k_i)`.
#[inline]
fn combine<T: Real, const N: usize>(a: &[T; N], h: T, terms: &[(f64, &[T; N])]) -> [T; N] {
    let mut out = *a;
    for &(c, k) in terms {
        let hc = h * lit::<T>(c);
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o = *o + hc * *ki;
        }
    }
    out
}

fn all_finite<T: Real, const N: usize>(v: &[T; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

impl<'s, T: Real, S: OdeSystem<T, N>, const N: usize> Dopri5<'s, T, S, N> {
    /// Starts at `(t0, x0)`; `span_hint` bounds the first step.
    pub fn new(sys: &'s S, t0: T, x0: [T; N], cfg: IntegratorConfig<T>, span_hint: T) -> Result<Self> {
        cfg.validate()?;
        let mut dx = [T::zero(); N];
        sys.derivative(t0, &x0, &mut dx);
        if !all_finite(&dx) || !all_finite(&x0) {
            return Err(Error::NonFiniteDerivative {
                t: to_f64(t0),
                last_state: x0.iter().map(|&v| to_f64(v)).collect(),
            });
        }
        let mut me = Self {
            sys,
            cfg,
            t: t0,
            x: x0,
            dx,
            h: T::zero(),
            facold: lit(1e-4),
            last_rejected: false,
            t_prev: t0,
            cont: [x0, [T::zero(); N], [T::zero(); N], [T::zero(); N], [T::zero(); N]],
            accepted: 0,
            rejected: 0,
        };
        me.h = me.initial_step(span_hint.abs());
        Ok(me)
    }

    pub fn t(&self) -> T {
        self.t
    }
    pub fn state(&self) -> &[T; N] {
        &self.x
    }
    /// Derivative at the current point (kept from the last stage).
    pub fn derivative(&self) -> &[T; N] {
        &self.dx
    }
    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }
    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    fn scale(&self, a: T, b: T) -> T {
        self.cfg.abs_tol + self.cfg.rel_tol * a.abs().max(b.abs())
    }

    fn initial_step(&self, span: T) -> T {
        let n = T::from_usize(N.max(1)).unwrap();
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..N {
            let sk = self.scale(self.x[i], self.x[i]);
            d0 = d0 + (self.x[i] / sk).powi(2);
            d1 = d1 + (self.dx[i] / sk).powi(2);
        }
        d0 = (d0 / n).sqrt();
        d1 = (d1 / n).sqrt();
        let mut h0 = if d0 < lit(1e-5) || d1 < lit(1e-5) {
            lit(1e-6)
        } else {
            lit::<T>(0.01) * d0 / d1
        };
        h0 = h0.min(self.cfg.max_step);
        if span > T::zero() {
            h0 = h0.min(span);
        }
        let x1 = combine(&self.x, h0, &[(1.0, &self.dx)]);
        let mut f1 = [T::zero(); N];
        self.sys.derivative(self.t + h0, &x1, &mut f1);
        let mut d2 = T::zero();
        for i in 0..N {
            let sk = self.scale(self.x[i], self.x[i]);
            d2 = d2 + ((f1[i] - self.dx[i]) / sk).powi(2);
        }
        d2 = (d2 / n).sqrt() / h0;
        let dmax = d1.max(d2);
        let h1 = if dmax <= lit(1e-15) {
            (h0 * lit(1e-3)).max(lit(1e-6))
        } else {
            (lit::<T>(0.01) / dmax).powf(lit(0.2))
        };
        let mut h = (lit::<T>(100.0) * h0).min(h1).min(self.cfg.max_step);
        if span > T::zero() {
            h = h.min(span);
        }
        h
    }

    /// Advances by one accepted step without passing `t_limit`.
    pub fn step(&mut self, t_limit: T) -> Result<()> {
        let expo1 = lit::<T>(0.2 - PI_BETA * 0.75);
        loop {
            let remaining = t_limit - self.t;
            if remaining <= T::zero() {
                return Ok(());
            }
            let mut h = self.h.min(self.cfg.max_step);
            // Avoid leaving a sliver shorter than a tenth of a step.
            if h >= remaining || remaining - h < lit::<T>(0.1) * h {
                h = remaining;
            }
            if h <= lit::<T>(10.0) * T::epsilon() * self.t.abs().max(T::one()) {
                return Err(Error::StepSizeUnderflow {
                    t: to_f64(self.t),
                    h: to_f64(h),
                    last_state: self.x.iter().map(|&v| to_f64(v)).collect(),
                });
            }

            let (t, x, k1) = (self.t, self.x, self.dx);
            let mut k2 = [T::zero(); N];
            let mut k3 = [T::zero(); N];
            let mut k4 = [T::zero(); N];
            let mut k5 = [T::zero(); N];
            let mut k6 = [T::zero(); N];
            let mut k7 = [T::zero(); N];
            let y = combine(&x, h, &[(A21, &k1)]);
            self.sys.derivative(t + lit::<T>(C2) * h, &y, &mut k2);
            let y = combine(&x, h, &[(A31, &k1), (A32, &k2)]);
            self.sys.derivative(t + lit::<T>(C3) * h, &y, &mut k3);
            let y = combine(&x, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            self.sys.derivative(t + lit::<T>(C4) * h, &y, &mut k4);
            let y = combine(&x, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            self.sys.derivative(t + lit::<T>(C5) * h, &y, &mut k5);
            let y = combine(
                &x,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            );
            self.sys.derivative(t + h, &y, &mut k6);
            let x_new = combine(
                &x,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            self.sys.derivative(t + h, &x_new, &mut k7);

            let mut err = T::zero();
            for i in 0..N {
                let e = h
                    * (lit::<T>(E1) * k1[i]
                        + lit::<T>(E3) * k3[i]
                        + lit::<T>(E4) * k4[i]
                        + lit::<T>(E5) * k5[i]
                        + lit::<T>(E6) * k6[i]
                        + lit::<T>(E7) * k7[i]);
                err = err.max((e / self.scale(x[i], x_new[i])).abs());
            }
            if !err.is_finite() || !all_finite(&k7) {
                // Overflow from an oversized trial step: shrink and retry.
                self.h = h * lit(0.1);
                self.rejected += 1;
                self.last_rejected = true;
                continue;
            }

            let fac11 = err.powf(expo1);
            if err <= T::one() {
                let fac = (fac11 / self.facold.powf(lit(PI_BETA)) / lit(SAFETY))
                    .min(lit(1.0 / FAC_MIN))
                    .max(lit(1.0 / FAC_MAX));
                let mut h_new = h / fac;
                if self.last_rejected {
                    h_new = h_new.min(h);
                }
                self.facold = err.max(lit(1e-4));

                let mut ydiff = [T::zero(); N];
                let mut bspl = [T::zero(); N];
                let mut c3 = [T::zero(); N];
                let mut c4 = [T::zero(); N];
                for i in 0..N {
                    ydiff[i] = x_new[i] - x[i];
                    bspl[i] = h * k1[i] - ydiff[i];
                    c3[i] = ydiff[i] - h * k7[i] - bspl[i];
                    c4[i] = h
                        * (lit::<T>(D1) * k1[i]
                            + lit::<T>(D3) * k3[i]
                            + lit::<T>(D4) * k4[i]
                            + lit::<T>(D5) * k5[i]
                            + lit::<T>(D6) * k6[i]
                            + lit::<T>(D7) * k7[i]);
                }
                self.cont = [x, ydiff, bspl, c3, c4];
                self.t_prev = t;
                self.t = if h == remaining { t_limit } else { t + h };
                self.x = x_new;
                self.dx = k7;
                self.h = h_new;
                self.last_rejected = false;
                self.accepted += 1;
                return Ok(());
            }
            let fac = (fac11 / lit(SAFETY)).min(lit(1.0 / FAC_MIN));
            self.h = h / fac;
            self.last_rejected = true;
            self.rejected += 1;
        }
    }

    /// Evaluates the continuous extension at `t` inside the last step.
    pub fn dense(&self, t: T) -> [T; N] {
        let h = self.t - self.t_prev;
        if h == T::zero() {
            return self.x;
        }
        let s = (t - self.t_prev) / h;
        let s1 = T::one() - s;
        let [c0, c1, c2, c3, c4] = &self.cont;
        let mut out = [T::zero(); N];
        for i in 0..N {
            out[i] = c0[i] + s * (c1[i] + s1 * (c2[i] + s * (c3[i] + s1 * c4[i])));
        }
        out
    }
}

/// Integrates `sys` from `(t0, x0)` and returns the state at every requested
/// time (ascending, all `>= t0`).
pub fn integrate_system<T, S, const N: usize>(
    sys: &S,
    t0: T,
    x0: [T; N],
    times: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<Vec<[T; N]>>
where
    T: Real,
    S: OdeSystem<T, N>,
{
    let t_end = times.last().copied().unwrap_or(t0);
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidTimeSpan {
            start: to_f64(t0),
            end: to_f64(t_end),
        });
    }
    let mut stepper = Dopri5::new(sys, t0, x0, *cfg, t_end - t0)?;
    let mut out = Vec::with_capacity(times.len());
    for &ts in times {
        while stepper.t() < ts {
            stepper.step(t_end)?;
        }
        out.push(if ts == stepper.t() {
            *stepper.state()
        } else {
            stepper.dense(ts)
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub state: StateVector<T>,
}

/// Samples of one model trajectory, in increasing time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub points: Vec<TrajectoryPoint<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn final_state(&self) -> Option<&StateVector<T>> {
        self.points.last().map(|p| &p.state)
    }

    /// Largest `|w^T x(t) - w^T x(t0)| / w^T x(t0)` over the samples.
    pub fn receptor_drift(&self) -> T {
        let Some(first) = self.points.first() else {
            return T::zero();
        };
        let base = first.state.receptor_total();
        if base == T::zero() {
            return self
                .points
                .iter()
                .fold(T::zero(), |m, p| m.max(p.state.receptor_total().abs()));
        }
        self.points.iter().fold(T::zero(), |m, p| {
            m.max(((p.state.receptor_total() - base) / base).abs())
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_initial<T: Real>(x0: &StateVector<T>) -> Result<()> {
    match x0.first_invalid() {
        Some((index, value)) => Err(Error::InvalidInitialState {
            index,
            value: to_f64(value),
        }),
        None => Ok(()),
    }
}

/// Integrates the model over `t_span` and returns `samples` equally spaced
/// points including both ends (at least two).
pub fn integrate<T: Real>(
    x0: &StateVector<T>,
    params: &ModelParameters<T>,
    t_span: (T, T),
    samples: usize,
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    let (t0, t1) = t_span;
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidTimeSpan {
            start: to_f64(t0),
            end: to_f64(t1),
        });
    }
    let n = samples.max(2);
    let dt = (t1 - t0) / T::from_usize(n - 1).unwrap();
    let times: Vec<T> = (0..n)
        .map(|i| {
            if i == n - 1 {
                t1
            } else {
                t0 + dt * T::from_usize(i).unwrap()
            }
        })
        .collect();
    integrate_at(x0, params, t0, &times, cfg)
}

/// Integrates the model from `t0` and samples it at `times`.
pub fn integrate_at<T: Real>(
    x0: &StateVector<T>,
    params: &ModelParameters<T>,
    t0: T,
    times: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    check_initial(x0)?;
    let states = integrate_system(&ModelSystem(params), t0, x0.0, times, cfg)?;
    Ok(Trajectory {
        points: times
            .iter()
            .zip(states)
            .map(|(&t, s)| TrajectoryPoint {
                t,
                state: StateVector(s),
            })
            .collect(),
    })
}

/// Outcome of [`relax_to_steady`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation<T> {
    pub state: StateVector<T>,
    /// Time reached, s.
    pub t: T,
    pub converged: bool,
    /// `|rhs(state)|_inf`.
    pub rhs_norm: T,
    pub steps: usize,
}

/// Integrates from `x0` until the derivative is negligible or `t_max` passes.
///
/// Non-convergence is reported through `converged`, not as an error.
pub fn relax_to_steady<T: Real>(
    x0: &StateVector<T>,
    params: &ModelParameters<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Relaxation<T>> {
    check_initial(x0)?;
    let sys = ModelSystem(params);
    let mut stepper = Dopri5::new(&sys, T::zero(), x0.0, *cfg, cfg.t_max)?;
    let settled = |x: &[T; N_SPECIES], dx: &[T; N_SPECIES]| {
        let scale = StateVector(*x).inf_norm().max(T::one());
        crate::scalar::inf_norm(dx) < cfg.steady_norm_tol * scale
    };
    let mut converged = settled(stepper.state(), stepper.derivative());
    while !converged && stepper.t() < cfg.t_max {
        stepper.step(cfg.t_max)?;
        converged = settled(stepper.state(), stepper.derivative());
    }
    Ok(Relaxation {
        state: StateVector(*stepper.state()),
        t: stepper.t(),
        converged,
        rhs_norm: crate::scalar::inf_norm(stepper.derivative()),
        steps: stepper.accepted_steps(),
    })
}
