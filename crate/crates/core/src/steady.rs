//! Steady states: semianalytic reduction to a scalar conservation equation,
//! plus a numeric relaxation + Newton path.
//!
//! The bilinear terms `R1^2, R2^2, R1*VR1, R2*VR2` are promoted to extra
//! variables, which makes the steady-state equations linear in a 16-entry
//! expanded vector. Eleven dependent variables are eliminated in favour of
//! `(R1, R2, X1, X2, Y1)`; `VR1` then has a closed form, `R2` solves a cubic,
//! and `R1` is fixed by receptor conservation.

use crate::cubic::real_roots;
use crate::error::{Error, Result};
use crate::integrator::{relax_to_steady, IntegratorConfig};
use crate::linalg::{numeric_rank, Lu};
use crate::model::{
    jacobian, rhs, ModelParameters, Species, StateVector, N_FLUXES, N_SPECIES, RECEPTOR_WEIGHTS,
    STOICHIOMETRY,
};
use crate::roots::{brent, BrentTolerance};
use crate::scalar::{lit, to_f64, Real};

/// Length of the expanded vector.
pub const N_EXPANDED: usize = 16;
/// Expanded-vector indices of `R1^2`, `R2^2`, `R1*VR1`, `R2*VR2`.
pub const X1: usize = 12;
pub const X2: usize = 13;
pub const Y1: usize = 14;
pub const Y2: usize = 15;

/// Dependent variables, in coefficient-row order.
pub const DEPENDENT: [usize; 11] = [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, Y2];
/// Free variables, in coefficient-column order.
pub const FREE: [usize; 5] = [0, 1, X1, X2, Y1];

// Used when every bilinear column is zero: R2 becomes dependent and the
// (inert) Y2 free.
const DEPENDENT_LINEAR: [usize; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
const FREE_LINEAR: [usize; 5] = [0, X1, X2, Y1, Y2];

/// Number of probes in the bracketing scan of the conservation residual.
pub const SCAN_PROBES: usize = 64;
/// Lower end of the scan, relative to `R_total`.
pub const SCAN_LOWER: f64 = 1e-9;

/// Steady-state equations as a linear map of the expanded vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedSystem<T> {
    /// Fluxes as linear forms, 20 x 16.
    pub flux_matrix: [[T; N_EXPANDED]; N_FLUXES],
    /// `Gamma * flux_matrix`, 12 x 16.
    pub matrix: [[T; N_EXPANDED]; N_SPECIES],
    pub r_total: T,
}

/// `(x, R1^2, R2^2, R1*VR1, R2*VR2)`.
pub fn expand_state<T: Real>(x: &StateVector<T>) -> [T; N_EXPANDED] {
    use Species::*;
    let mut e = [T::zero(); N_EXPANDED];
    e[..N_SPECIES].copy_from_slice(&x.0);
    e[X1] = x[R1] * x[R1];
    e[X2] = x[R2] * x[R2];
    e[Y1] = x[R1] * x[VR1];
    e[Y2] = x[R2] * x[VR2];
    e
}

/// Builds the expanded system for `params`.
///
/// At `beta = 0` the matrix is still well defined; whether the elimination
/// succeeds is decided by [`eliminate_dependents`].
pub fn expanded_matrix<T: Real>(params: &ModelParameters<T>) -> ExpandedSystem<T> {
    use Species::*;
    let k = params.rates();
    let two = lit::<T>(2.0);
    let f1 = params.f();
    let f2 = T::one() - f1;
    let v0 = params.v0();
    let mut a = [[T::zero(); N_EXPANDED]; N_FLUXES];
    let mut put = |row: usize, col: usize, v: T| a[row][col] = a[row][col] + v;

    put(0, X1, two * k.b / f1);
    put(0, RR1 as usize, -k.d);
    put(1, X2, two * k.b / f2);
    put(1, RR2 as usize, -k.d);
    put(2, Y1, k.b / f1);
    put(2, VRR1 as usize, -k.d);
    put(3, Y2, k.b / f2);
    put(3, VRR2 as usize, -k.d);
    put(4, RR1 as usize, two * k.a * v0);
    put(4, VRR1 as usize, -k.c);
    put(5, RR2 as usize, two * k.a * v0);
    put(5, VRR2 as usize, -k.c);
    put(6, VRR1 as usize, k.a_i);
    put(6, D1 as usize, -two * k.c_i);
    put(7, VRR2 as usize, k.a_i);
    put(7, D2 as usize, -two * k.c_i);
    put(8, RVR1 as usize, k.b_i);
    put(8, D1 as usize, -k.d_i);
    put(9, RVR2 as usize, k.b_i);
    put(9, D2 as usize, -k.d_i);
    put(10, Y1, k.a_s / f1);
    put(10, RVR1 as usize, -k.c);
    put(11, Y2, k.a_s / f2);
    put(11, RVR2 as usize, -k.c);
    put(12, R1 as usize, k.a * v0);
    put(12, VR1 as usize, -k.c);
    put(13, R2 as usize, k.a * v0);
    put(13, VR2 as usize, -k.c);
    let monomer = [true, false, true, false, false, false];
    for n in 0..6 {
        let m = if monomer[n] { T::one() } else { params.beta() };
        put(14 + n, 2 * n, m * params.k1());
        put(14 + n, 2 * n + 1, -m * params.k2());
    }

    let mut matrix = [[T::zero(); N_EXPANDED]; N_SPECIES];
    for (i, row) in STOICHIOMETRY.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g == 0 {
                continue;
            }
            let g = T::from_i8(g).unwrap();
            for c in 0..N_EXPANDED {
                matrix[i][c] = matrix[i][c] + g * a[j][c];
            }
        }
    }
    ExpandedSystem {
        flux_matrix: a,
        matrix,
        r_total: params.r_total(),
    }
}

impl<T: Real> ExpandedSystem<T> {
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<T>> = self.matrix.iter().map(|r| r.to_vec()).collect();
        numeric_rank(&rows, lit(1e-10))
    }

    /// `matrix * e`.
    pub fn apply(&self, e: &[T; N_EXPANDED]) -> [T; N_SPECIES] {
        let mut out = [T::zero(); N_SPECIES];
        for (o, row) in out.iter_mut().zip(self.matrix.iter()) {
            *o = row.iter().zip(e.iter()).fold(T::zero(), |s, (a, b)| s + *a * *b);
        }
        out
    }

    /// True when none of the bilinear variables enters the equations
    /// (no on-surface dimerization).
    pub fn is_linear(&self) -> bool {
        self.matrix
            .iter()
            .all(|row| row[X1..].iter().all(|v| *v == T::zero()))
    }
}

/// Dependent variables as linear combinations of the free ones,
/// `y_i = sum_j a[i][j] * free_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationCoefficients<T> {
    /// 11 x 5; rows follow `dependent`, columns follow `free`.
    pub a: [[T; 5]; 11],
    pub dependent: [usize; 11],
    pub free: [usize; 5],
}

impl<T: Real> EliminationCoefficients<T> {
    /// Whether the reduced set for a purely linear system was used.
    pub fn is_linear(&self) -> bool {
        self.dependent == DEPENDENT_LINEAR
    }

    /// Dependent values predicted from the free entries of an expanded vector.
    pub fn predict(&self, e: &[T; N_EXPANDED]) -> [T; 11] {
        let mut out = [T::zero(); 11];
        for (o, row) in out.iter_mut().zip(self.a.iter()) {
            *o = row
                .iter()
                .zip(self.free.iter())
                .fold(T::zero(), |s, (c, &j)| s + *c * e[j]);
        }
        out
    }
}

/// Drops the first species equation (implied by the other eleven through
/// conservation) and solves the remaining rows for the dependent variables.
///
/// Fails with [`Error::SingularElimination`] when the 11 x 11 dependent block
/// is numerically singular. If the system has no bilinear terms at all the
/// block is singular by construction (its `Y2` column is zero); `R2` then
/// takes the place of `Y2` in the dependent set.
pub fn eliminate_dependents<T: Real>(sys: &ExpandedSystem<T>) -> Result<EliminationCoefficients<T>> {
    let (dependent, free) = if sys.is_linear() {
        (DEPENDENT_LINEAR, FREE_LINEAR)
    } else {
        (DEPENDENT, FREE)
    };
    let rows = &sys.matrix[1..];
    let mut block = [[T::zero(); 11]; 11];
    for (i, row) in rows.iter().enumerate() {
        for (j, &c) in dependent.iter().enumerate() {
            block[i][j] = row[c];
        }
    }
    let lu = Lu::factor(block).ok_or(Error::SingularElimination)?;
    let mut a = [[T::zero(); 5]; 11];
    for (j, &c) in free.iter().enumerate() {
        let mut rhs_col = [T::zero(); 11];
        for (i, row) in rows.iter().enumerate() {
            rhs_col[i] = -row[c];
        }
        let sol = lu.solve(&rhs_col);
        for i in 0..11 {
            a[i][j] = sol[i];
        }
    }
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::SingularElimination);
    }
    Ok(EliminationCoefficients {
        a,
        dependent,
        free,
    })
}

fn state_from<T: Real>(r1: T, r2: T, dependents: &[T]) -> StateVector<T> {
    let mut x = StateVector::zeros();
    x[Species::R1] = r1;
    x[Species::R2] = r2;
    x.0[2..].copy_from_slice(&dependents[..10]);
    x
}

/// Every state consistent with the reduced equations at a given `r1`, one per
/// positive real root of the cubic in `R2`, in ascending order of `R2`.
pub fn assemble_branches<T: Real>(
    r1: T,
    coeffs: &EliminationCoefficients<T>,
    params: &ModelParameters<T>,
) -> Result<Vec<StateVector<T>>> {
    if !(r1 > T::zero()) || !r1.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r1",
            value: to_f64(r1),
            reason: "must be finite and > 0",
        });
    }
    let a = &coeffs.a;
    if coeffs.is_linear() {
        // Bilinear columns vanish, so only the r1 column contributes.
        let dep: Vec<T> = a.iter().map(|row| row[0] * r1).collect();
        return Ok(vec![state_from(r1, dep[0], &dep[1..])]);
    }

    let r1sq = r1 * r1;
    let den = T::one() - a[2][4] * r1;
    if den.abs() < lit(1e-12) {
        return Err(Error::SingularSlice { r1: to_f64(r1) });
    }
    // VR1, VR2 and Y2 as quadratics in R2: [const, R2, R2^2].
    let vr1 = [
        (a[2][0] * r1 + a[2][2] * r1sq) / den,
        a[2][1] / den,
        a[2][3] / den,
    ];
    let row_quad = |i: usize| {
        let g = a[i][4] * r1;
        [
            a[i][0] * r1 + a[i][2] * r1sq + g * vr1[0],
            a[i][1] + g * vr1[1],
            a[i][3] + g * vr1[2],
        ]
    };
    let vr2 = row_quad(3);
    let y2 = row_quad(10);
    // R2 * VR2(R2) = Y2(R2).
    let cubic = [-y2[0], vr2[0] - y2[1], vr2[1] - y2[2], vr2[2]];
    let mut out = Vec::new();
    for r2 in real_roots(cubic, params.r_total()) {
        if !(r2 > T::zero()) {
            continue;
        }
        let vr1_val = vr1[0] + r2 * (vr1[1] + r2 * vr1[2]);
        let free = [r1, r2, r1sq, r2 * r2, r1 * vr1_val];
        let dep: Vec<T> = a
            .iter()
            .map(|row| row.iter().zip(free.iter()).fold(T::zero(), |s, (c, v)| s + *c * *v))
            .collect();
        out.push(state_from(r1, r2, &dep));
    }
    Ok(out)
}

/// The state at `r1` when the cubic has exactly one positive root.
pub fn assemble_state<T: Real>(
    r1: T,
    coeffs: &EliminationCoefficients<T>,
    params: &ModelParameters<T>,
) -> Result<StateVector<T>> {
    let mut branches = assemble_branches(r1, coeffs, params)?;
    if branches.len() != 1 {
        return Err(Error::CubicRootCount {
            r1: to_f64(r1),
            count: branches.len(),
        });
    }
    Ok(branches.pop().unwrap())
}

/// `w^T x(r1) - R_total` on the unique branch at `r1`.
pub fn conservation_residual<T: Real>(
    r1: T,
    coeffs: &EliminationCoefficients<T>,
    params: &ModelParameters<T>,
) -> Result<T> {
    Ok(assemble_state(r1, coeffs, params)?.receptor_total() - params.r_total())
}

/// One probe of the bracketing scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanProbe<T> {
    pub r1: T,
    /// Conservation residual on each branch; empty if assembly failed.
    pub residuals: Vec<T>,
}

/// Sign scan of the conservation residual over log-spaced `r1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationScan<T> {
    pub probes: Vec<ScanProbe<T>>,
    /// `(probe index, branch index)` of every sign change between probe `i`
    /// and `i + 1`. Branches are matched by position when both probes carry
    /// the same number of branches.
    pub sign_changes: Vec<(usize, usize)>,
}

impl<T> ConservationScan<T> {
    pub fn root_count(&self) -> usize {
        self.sign_changes.len()
    }
}

/// Probes the residual at [`SCAN_PROBES`] log-spaced points of
/// `(SCAN_LOWER * R_total, R_total)`.
pub fn scan_conservation<T: Real>(
    coeffs: &EliminationCoefficients<T>,
    params: &ModelParameters<T>,
) -> ConservationScan<T> {
    let r_total = params.r_total();
    let lo = (r_total * lit(SCAN_LOWER)).ln();
    let hi = r_total.ln();
    let last = T::from_usize(SCAN_PROBES - 1).unwrap();
    let probes: Vec<ScanProbe<T>> = (0..SCAN_PROBES)
        .map(|i| {
            let r1 = if i == SCAN_PROBES - 1 {
                r_total
            } else {
                (lo + (hi - lo) * T::from_usize(i).unwrap() / last).exp()
            };
            let residuals = assemble_branches(r1, coeffs, params)
                .map(|bs| bs.iter().map(|x| x.receptor_total() - r_total).collect())
                .unwrap_or_default();
            ScanProbe { r1, residuals }
        })
        .collect();
    let mut sign_changes = Vec::new();
    for (i, w) in probes.windows(2).enumerate() {
        let (p, q) = (&w[0].residuals, &w[1].residuals);
        if p.len() != q.len() {
            continue;
        }
        for (b, (gp, gq)) in p.iter().zip(q.iter()).enumerate() {
            // A zero on a probe is attributed to the interval on its right.
            if *gp == T::zero() || (gp.signum() != gq.signum() && *gq != T::zero()) {
                sign_changes.push((i, b));
            }
        }
    }
    // A zero exactly at the last probe.
    if let Some(end) = probes.last() {
        for (b, g) in end.residuals.iter().enumerate() {
            if *g == T::zero() {
                sign_changes.push((SCAN_PROBES - 1, b));
            }
        }
    }
    ConservationScan {
        probes,
        sign_changes,
    }
}

/// Which algorithm produced a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverPath {
    Semianalytic,
    Numeric,
}

impl SolverPath {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverPath::Semianalytic => "semianalytic",
            SolverPath::Numeric => "numeric",
        }
    }
}

impl std::fmt::Display for SolverPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Requested algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolverPreference {
    /// Semianalytic with numeric fallback; `beta = 0` goes straight to the
    /// numeric path.
    #[default]
    Auto,
    Semianalytic,
    Numeric,
}

impl std::str::FromStr for SolverPreference {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(Self::Auto),
            "semianalytic" => Ok(Self::Semianalytic),
            "numeric" => Ok(Self::Numeric),
            other => Err(Error::Config(format!("unknown solver `{other}`"))),
        }
    }
}

impl std::fmt::Display for SolverPreference {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::Semianalytic => "semianalytic",
            Self::Numeric => "numeric",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateResult<T> {
    pub state: StateVector<T>,
    /// `|rhs(state)|_inf`, fmol/(cm^2 s).
    pub residual_inf_norm: T,
    /// Root of the conservation residual (equals `state[R1]`).
    pub r1_root: T,
    /// Sign changes of the conservation residual on the scan; 1 for the
    /// numeric path, which finds a single state.
    pub root_count: usize,
    pub path: SolverPath,
    /// Further steady states when more than one root was found.
    pub alternatives: Vec<StateVector<T>>,
}

/// Relative residual bound of the result contract (floored by precision).
pub fn residual_tolerance<T: Real>() -> T {
    lit::<T>(1e-10).max(lit::<T>(1e4) * T::epsilon())
}

/// Relative conservation bound of the result contract.
pub fn conservation_tolerance<T: Real>() -> T {
    lit::<T>(1e-9).max(lit::<T>(1e4) * T::epsilon())
}

struct Defect<T> {
    residual: T,
    conservation: T,
}

impl<T: Real> Defect<T> {
    fn of(x: &StateVector<T>, p: &ModelParameters<T>) -> Self {
        Self {
            residual: rhs(x, p).inf_norm(),
            conservation: (x.receptor_total() - p.r_total()).abs(),
        }
    }
    /// Both parts relative to their contract bounds; <= 1 means satisfied.
    fn merit(&self, x: &StateVector<T>, p: &ModelParameters<T>) -> T {
        let rs = residual_tolerance::<T>() * x.inf_norm().max(T::one());
        let cs = conservation_tolerance::<T>() * p.r_total();
        (self.residual / rs).max(self.conservation / cs)
    }
}

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_MAX_HALVINGS: usize = 30;

/// Damped Newton on the last eleven steady-state equations plus
/// conservation. Returns the best state seen and its merit.
fn newton_polish<T: Real>(x0: &StateVector<T>, p: &ModelParameters<T>) -> (StateVector<T>, T) {
    let mut x = *x0;
    let mut merit = Defect::of(&x, p).merit(&x, p);
    let w: [T; N_SPECIES] = RECEPTOR_WEIGHTS.map(|v| T::from_i64(v).unwrap());
    for _ in 0..NEWTON_MAX_ITER {
        // Stop only once well inside the contract so later rounding is harmless.
        if merit <= lit(1e-2) {
            break;
        }
        let f = rhs(&x, p);
        let j = jacobian(&x, p);
        let mut mat = [[T::zero(); N_SPECIES]; N_SPECIES];
        let mut res = [T::zero(); N_SPECIES];
        for i in 1..N_SPECIES {
            mat[i - 1] = j[i];
            res[i - 1] = -f.0[i];
        }
        mat[N_SPECIES - 1] = w;
        res[N_SPECIES - 1] = p.r_total() - x.receptor_total();
        let Some(lu) = Lu::factor(mat) else {
            break;
        };
        let dx = lu.solve(&res);
        let mut lambda = T::one();
        let mut improved = false;
        for _ in 0..NEWTON_MAX_HALVINGS {
            let mut cand = x;
            for i in 0..N_SPECIES {
                cand.0[i] = x.0[i] + lambda * dx[i];
            }
            let m = Defect::of(&cand, p).merit(&cand, p);
            if m < merit {
                x = cand;
                merit = m;
                improved = true;
                break;
            }
            lambda = lambda * lit(0.5);
        }
        if !improved {
            break;
        }
    }
    (x, merit)
}

fn finish<T: Real>(
    x: StateVector<T>,
    p: &ModelParameters<T>,
    root_count: usize,
    path: SolverPath,
    alternatives: Vec<StateVector<T>>,
) -> Result<SteadyStateResult<T>> {
    let d = Defect::of(&x, p);
    if d.merit(&x, p) > T::one() {
        return Err(Error::ResidualContract {
            residual: to_f64(d.residual),
            conservation: to_f64(d.conservation),
        });
    }
    Ok(SteadyStateResult {
        state: x,
        residual_inf_norm: d.residual,
        r1_root: x[Species::R1],
        root_count,
        path,
        alternatives,
    })
}

/// Semianalytic path only: scan, Brent refinement on every bracket, then
/// Newton polish. The returned state is the root with the smallest `r1`;
/// any others are listed in `alternatives`.
pub fn solve_steady_semianalytic<T: Real>(params: &ModelParameters<T>) -> Result<SteadyStateResult<T>> {
    let coeffs = eliminate_dependents(&expanded_matrix(params))?;
    let scan = scan_conservation(&coeffs, params);
    if scan.sign_changes.is_empty() {
        return Err(Error::NoBracket);
    }
    let r_total = params.r_total();
    let f_tol = lit::<T>(1e-12).max(lit::<T>(10.0) * T::epsilon()) * r_total;
    let mut states = Vec::with_capacity(scan.sign_changes.len());
    for &(i, b) in &scan.sign_changes {
        let lo = &scan.probes[i];
        let state = if i + 1 == scan.probes.len() || lo.residuals[b] == T::zero() {
            assemble_branches(lo.r1, &coeffs, params)?[b]
        } else {
            let hi = &scan.probes[i + 1];
            let branch_at = |r1: T| -> Result<StateVector<T>> {
                let bs = assemble_branches(r1, &coeffs, params)?;
                if bs.len() != lo.residuals.len() {
                    return Err(Error::CubicRootCount {
                        r1: to_f64(r1),
                        count: bs.len(),
                    });
                }
                Ok(bs[b])
            };
            let tol = BrentTolerance {
                x_tol: T::epsilon() * lo.r1,
                f_tol,
                max_iter: 200,
            };
            let r1 = brent(
                |r| Ok(branch_at(r)?.receptor_total() - r_total),
                lo.r1,
                hi.r1,
                lo.residuals[b],
                hi.residuals[b],
                tol,
            )?;
            branch_at(r1)?
        };
        let (polished, _) = newton_polish(&state, params);
        states.push(polished);
    }
    states.sort_by(|a, b| {
        a[Species::R1]
            .partial_cmp(&b[Species::R1])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let root_count = states.len();
    let mut iter = states.into_iter();
    let first = iter.next().unwrap();
    finish(first, params, root_count, SolverPath::Semianalytic, iter.collect())
}

/// Numeric path: relaxation from `x_init` (default: all receptors as
/// monomers split `f : 1 - f`), then damped Newton.
pub fn solve_steady_numeric<T: Real>(
    params: &ModelParameters<T>,
    x_init: Option<&StateVector<T>>,
) -> Result<SteadyStateResult<T>> {
    solve_steady_numeric_with(params, x_init, &IntegratorConfig::default())
}

pub fn solve_steady_numeric_with<T: Real>(
    params: &ModelParameters<T>,
    x_init: Option<&StateVector<T>>,
    cfg: &IntegratorConfig<T>,
) -> Result<SteadyStateResult<T>> {
    let x0 = x_init
        .copied()
        .unwrap_or_else(|| StateVector::partitioned_monomers(params.r_total(), params.f()));
    let relaxed = relax_to_steady(&x0, params, cfg)?;
    let (x, merit) = newton_polish(&relaxed.state, params);
    if merit > T::one() {
        return Err(Error::NewtonFailed {
            residual: to_f64(rhs(&x, params).inf_norm()),
            best_state: x.to_f64_vec(),
        });
    }
    finish(x, params, 1, SolverPath::Numeric, Vec::new())
}

/// Steady state with the default (auto) strategy.
pub fn solve_steady_state<T: Real>(params: &ModelParameters<T>) -> Result<SteadyStateResult<T>> {
    solve_steady(params, SolverPreference::Auto)
}

pub fn solve_steady<T: Real>(
    params: &ModelParameters<T>,
    preference: SolverPreference,
) -> Result<SteadyStateResult<T>> {
    match preference {
        SolverPreference::Semianalytic => solve_steady_semianalytic(params),
        SolverPreference::Numeric => solve_steady_numeric(params, None),
        SolverPreference::Auto => {
            if params.beta() == T::zero() {
                return solve_steady_numeric(params, None);
            }
            solve_steady_semianalytic(params).or_else(|_| solve_steady_numeric(params, None))
        }
    }
}
