//! Species, parameters, stoichiometry and mass-action rate laws of the
//! two-domain receptor model.
//!
//! Domain 1 is the high-density (HD) domain of relative area `f`, domain 2
//! the low-density remainder. All surface concentrations are effective
//! concentrations (amount in the domain divided by the *total* membrane
//! area) in fmol/cm^2; the free ligand `V0` is a constant in nM.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::geometry::{exchange_rates, ExchangeRates, GeometryParameters};
use crate::scalar::{inf_norm, lit, to_f64, Real};

pub const N_SPECIES: usize = 12;
pub const N_FLUXES: usize = 20;

/// State entries in their fixed order; even indices are the high-density copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(usize)]
pub enum Species {
    R1,
    R2,
    RR1,
    RR2,
    VR1,
    VR2,
    VRR1,
    VRR2,
    RVR1,
    RVR2,
    D1,
    D2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    High,
    Low,
}

impl Species {
    pub const ALL: [Species; N_SPECIES] = [
        Species::R1,
        Species::R2,
        Species::RR1,
        Species::RR2,
        Species::VR1,
        Species::VR2,
        Species::VRR1,
        Species::VRR2,
        Species::RVR1,
        Species::RVR2,
        Species::D1,
        Species::D2,
    ];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub const fn name(self) -> &'static str {
        match self {
            Species::R1 => "R1",
            Species::R2 => "R2",
            Species::RR1 => "RR1",
            Species::RR2 => "RR2",
            Species::VR1 => "VR1",
            Species::VR2 => "VR2",
            Species::VRR1 => "VRR1",
            Species::VRR2 => "VRR2",
            Species::RVR1 => "RVR1",
            Species::RVR2 => "RVR2",
            Species::D1 => "D1",
            Species::D2 => "D2",
        }
    }

    /// Receptors per complex.
    pub const fn receptor_weight(self) -> i64 {
        RECEPTOR_WEIGHTS[self as usize]
    }

    pub const fn domain(self) -> Domain {
        if (self as usize) % 2 == 0 {
            Domain::High
        } else {
            Domain::Low
        }
    }

    /// The same species in the other domain.
    pub fn partner(self) -> Species {
        Self::ALL[(self as usize) ^ 1]
    }

    pub const fn is_dimer(self) -> bool {
        RECEPTOR_WEIGHTS[self as usize] == 2
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Left null vector of the stoichiometry matrix: receptors per species.
pub const RECEPTOR_WEIGHTS: [i64; N_SPECIES] = [1, 1, 2, 2, 1, 1, 2, 2, 2, 2, 2, 2];

/// Flux labels in column order of the stoichiometry matrix.
pub const FLUX_LABELS: [&str; N_FLUXES] = [
    "phi11", "phi12", "phi21", "phi22", "phi31", "phi32", "phi41", "phi42", "phi51", "phi52",
    "phi61", "phi62", "phi71", "phi72", "phi1", "phi2", "phi3", "phi4", "phi5", "phi6",
];

/// Stoichiometry matrix, rows in species order, columns in flux order.
#[rustfmt::skip]
pub const STOICHIOMETRY: [[i8; N_FLUXES]; N_SPECIES] = [
    [-2,  0, -1,  0,  0,  0,  0,  0,  0,  0, -1,  0, -1,  0, -1,  0,  0,  0,  0,  0],
    [ 0, -2,  0, -1,  0,  0,  0,  0,  0,  0,  0, -1,  0, -1,  1,  0,  0,  0,  0,  0],
    [ 1,  0,  0,  0, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1,  0,  0,  0,  0],
    [ 0,  1,  0,  0,  0, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  0,  0,  0,  0],
    [ 0,  0, -1,  0,  0,  0,  0,  0,  0,  0, -1,  0,  1,  0,  0,  0, -1,  0,  0,  0],
    [ 0,  0,  0, -1,  0,  0,  0,  0,  0,  0,  0, -1,  0,  1,  0,  0,  1,  0,  0,  0],
    [ 0,  0,  1,  0,  1,  0, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1,  0,  0],
    [ 0,  0,  0,  1,  0,  1,  0, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  0,  0],
    [ 0,  0,  0,  0,  0,  0,  0,  0, -1,  0,  1,  0,  0,  0,  0,  0,  0,  0, -1,  0],
    [ 0,  0,  0,  0,  0,  0,  0,  0,  0, -1,  0,  1,  0,  0,  0,  0,  0,  0,  1,  0],
    [ 0,  0,  0,  0,  0,  0,  1,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1],
    [ 0,  0,  0,  0,  0,  0,  0,  1,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1],
];

/// One reversible reaction in its conventional forward direction.
#[derive(Debug, Clone, Copy)]
pub struct Reaction {
    pub label: &'static str,
    pub reactants: &'static [(Species, u8)],
    pub products: &'static [(Species, u8)],
}

/// The 20 reversible reactions (ligand omitted, it is held constant),
/// in flux order.
pub fn reaction_scheme() -> [Reaction; N_FLUXES] {
    use Species::*;
    macro_rules! rx {
        ($l:expr, [$($r:expr),*], [$($p:expr),*]) => {
            Reaction { label: $l, reactants: &[$($r),*], products: &[$($p),*] }
        };
    }
    [
        rx!("R1 + R1 <-> RR1", [(R1, 2)], [(RR1, 1)]),
        rx!("R2 + R2 <-> RR2", [(R2, 2)], [(RR2, 1)]),
        rx!("VR1 + R1 <-> VRR1", [(VR1, 1), (R1, 1)], [(VRR1, 1)]),
        rx!("VR2 + R2 <-> VRR2", [(VR2, 1), (R2, 1)], [(VRR2, 1)]),
        rx!("RR1 + V <-> VRR1", [(RR1, 1)], [(VRR1, 1)]),
        rx!("RR2 + V <-> VRR2", [(RR2, 1)], [(VRR2, 1)]),
        rx!("VRR1 <-> D1", [(VRR1, 1)], [(D1, 1)]),
        rx!("VRR2 <-> D2", [(VRR2, 1)], [(D2, 1)]),
        rx!("RVR1 <-> D1", [(RVR1, 1)], [(D1, 1)]),
        rx!("RVR2 <-> D2", [(RVR2, 1)], [(D2, 1)]),
        rx!("VR1 + R1 <-> RVR1", [(VR1, 1), (R1, 1)], [(RVR1, 1)]),
        rx!("VR2 + R2 <-> RVR2", [(VR2, 1), (R2, 1)], [(RVR2, 1)]),
        rx!("R1 + V <-> VR1", [(R1, 1)], [(VR1, 1)]),
        rx!("R2 + V <-> VR2", [(R2, 1)], [(VR2, 1)]),
        rx!("R1 <-> R2", [(R1, 1)], [(R2, 1)]),
        rx!("RR1 <-> RR2", [(RR1, 1)], [(RR2, 1)]),
        rx!("VR1 <-> VR2", [(VR1, 1)], [(VR2, 1)]),
        rx!("VRR1 <-> VRR2", [(VRR1, 1)], [(VRR2, 1)]),
        rx!("RVR1 <-> RVR2", [(RVR1, 1)], [(RVR2, 1)]),
        rx!("D1 <-> D2", [(D1, 1)], [(D2, 1)]),
    ]
}

/// Stoichiometry plus the flux ordering it is paired with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionNetwork {
    gamma: [[i8; N_FLUXES]; N_SPECIES],
}

impl Default for ReactionNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl ReactionNetwork {
    pub fn new() -> Self {
        Self {
            gamma: STOICHIOMETRY,
        }
    }

    /// Builds the stoichiometry column by column from [`reaction_scheme`].
    pub fn from_scheme() -> Self {
        let mut gamma = [[0i8; N_FLUXES]; N_SPECIES];
        for (j, rx) in reaction_scheme().iter().enumerate() {
            for &(s, n) in rx.reactants {
                gamma[s.index()][j] -= n as i8;
            }
            for &(s, n) in rx.products {
                gamma[s.index()][j] += n as i8;
            }
        }
        Self { gamma }
    }

    pub fn stoichiometry(&self) -> &[[i8; N_FLUXES]; N_SPECIES] {
        &self.gamma
    }

    pub fn flux_labels(&self) -> &'static [&'static str; N_FLUXES] {
        &FLUX_LABELS
    }

    pub fn nonzero_count(&self) -> usize {
        self.gamma.iter().flatten().filter(|&&v| v != 0).count()
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self
            .gamma
            .iter()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect();
        crate::linalg::integer_rank(&rows)
    }

    /// `w^T Gamma` for an integer weight vector.
    pub fn left_product(&self, w: &[i64; N_SPECIES]) -> [i64; N_FLUXES] {
        let mut out = [0i64; N_FLUXES];
        for (wi, row) in w.iter().zip(&self.gamma) {
            for (o, &g) in out.iter_mut().zip(row) {
                *o += wi * g as i64;
            }
        }
        out
    }

    /// `Gamma * phi`.
    pub fn apply<T: Real>(&self, phi: &[T; N_FLUXES]) -> [T; N_SPECIES] {
        let mut out = [T::zero(); N_SPECIES];
        for (o, row) in out.iter_mut().zip(&self.gamma) {
            for (&g, &p) in row.iter().zip(phi) {
                if g != 0 {
                    *o = *o + T::from_i8(g).unwrap() * p;
                }
            }
        }
        out
    }
}

/// The stoichiometry does not depend on parameter values; they only enter
/// through flux evaluation.
pub fn build_network<T: Real>(_params: &ModelParameters<T>) -> ReactionNetwork {
    ReactionNetwork::new()
}

/// Mass-action rate constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConstants<T> {
    /// Receptor-receptor dimerisation, cm^2/(fmol s).
    pub b: T,
    /// Dimer dissociation, 1/s.
    pub d: T,
    /// Ligand binding, 1/(nM s).
    pub a: T,
    /// Ligand unbinding (also the reverse of VR + R -> RVR), 1/s.
    pub c: T,
    /// VRR -> Delta, 1/s.
    pub a_i: T,
    /// Delta -> VRR, 1/s.
    pub c_i: T,
    /// RVR -> Delta, 1/s.
    pub b_i: T,
    /// Delta -> RVR, 1/s.
    pub d_i: T,
    /// On-surface capture VR + R -> RVR, cm^2/(fmol s).
    pub a_s: T,
}

impl<T: Real> RateConstants<T> {
    /// Published rate table.
    pub fn reference() -> Self {
        Self {
            b: lit(0.1),
            d: lit(0.01),
            a: lit(0.0044),
            c: lit(0.026),
            a_i: lit(0.949),
            c_i: lit(0.026),
            b_i: lit(0.446),
            d_i: lit(0.02),
            a_s: lit(0.21),
        }
    }

    pub fn named(&self) -> [(&'static str, T); 9] {
        [
            ("b", self.b),
            ("d", self.d),
            ("a", self.a),
            ("c", self.c),
            ("a_i", self.a_i),
            ("c_i", self.c_i),
            ("b_i", self.b_i),
            ("d_i", self.d_i),
            ("a_s", self.a_s),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: to_f64(v),
                    reason: "rate constants must be finite and >= 0",
                });
            }
        }
        Ok(())
    }
}

/// One immutable parameter point: rates, geometry, ligand and receptor total.
///
/// The exchange constants are derived on construction and cannot be set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParameters<T> {
    rates: RateConstants<T>,
    geometry: GeometryParameters<T>,
    v0: T,
    r_total: T,
    exchange: ExchangeRates<T>,
}

impl<T: Real> ModelParameters<T> {
    pub fn new(
        rates: RateConstants<T>,
        geometry: GeometryParameters<T>,
        v0: T,
        r_total: T,
    ) -> Result<Self> {
        rates.validate()?;
        if !(v0 >= T::zero()) || !v0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "v0",
                value: to_f64(v0),
                reason: "must be finite and >= 0",
            });
        }
        if !(r_total > T::zero()) || !r_total.is_finite() {
            return Err(Error::InvalidParameter {
                name: "r_total",
                value: to_f64(r_total),
                reason: "must be finite and > 0",
            });
        }
        let exchange = exchange_rates(&geometry)?;
        Ok(Self {
            rates,
            geometry,
            v0,
            r_total,
            exchange,
        })
    }

    /// Reference point: published rates and geometry, V0 = 0.1 nM,
    /// R_total = 6.6 fmol/cm^2.
    pub fn reference() -> Self {
        Self::new(
            RateConstants::reference(),
            GeometryParameters::reference(),
            lit(0.1),
            lit(6.6),
        )
        .expect("reference parameters are valid")
    }

    pub fn with_rates(&self, rates: RateConstants<T>) -> Result<Self> {
        Self::new(rates, self.geometry, self.v0, self.r_total)
    }

    pub fn with_geometry(&self, geometry: GeometryParameters<T>) -> Result<Self> {
        Self::new(self.rates, geometry, self.v0, self.r_total)
    }

    pub fn with_v0(&self, v0: T) -> Result<Self> {
        Self::new(self.rates, self.geometry, v0, self.r_total)
    }

    pub fn with_r_total(&self, r_total: T) -> Result<Self> {
        Self::new(self.rates, self.geometry, self.v0, r_total)
    }

    pub fn rates(&self) -> &RateConstants<T> {
        &self.rates
    }
    pub fn geometry(&self) -> &GeometryParameters<T> {
        &self.geometry
    }
    pub fn exchange(&self) -> &ExchangeRates<T> {
        &self.exchange
    }
    pub fn v0(&self) -> T {
        self.v0
    }
    pub fn r_total(&self) -> T {
        self.r_total
    }
    pub fn f(&self) -> T {
        self.geometry.f
    }
    pub fn alpha(&self) -> T {
        self.geometry.alpha
    }
    pub fn beta(&self) -> T {
        self.geometry.beta
    }
    pub fn k1(&self) -> T {
        self.exchange.k1
    }
    pub fn k2(&self) -> T {
        self.exchange.k2
    }
    pub fn delta(&self) -> T {
        self.exchange.delta
    }
}

/// The 12 effective concentrations, fmol/cm^2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector<T>(pub [T; N_SPECIES]);

impl<T: Real> StateVector<T> {
    pub fn zeros() -> Self {
        Self([T::zero(); N_SPECIES])
    }

    pub fn new(values: [T; N_SPECIES]) -> Self {
        Self(values)
    }

    pub fn as_array(&self) -> &[T; N_SPECIES] {
        &self.0
    }

    /// All receptors as monomers, split `f : (1 - f)` between the domains.
    pub fn partitioned_monomers(r_total: T, f: T) -> Self {
        let mut x = Self::zeros();
        x[Species::R1] = r_total * f;
        x[Species::R2] = r_total * (T::one() - f);
        x
    }

    /// Receptor-weighted total `w^T x`.
    pub fn receptor_total(&self) -> T {
        self.0
            .iter()
            .zip(RECEPTOR_WEIGHTS)
            .fold(T::zero(), |acc, (&v, w)| acc + T::from_i64(w).unwrap() * v)
    }

    pub fn inf_norm(&self) -> T {
        inf_norm(&self.0)
    }

    /// First entry that is negative or not finite.
    pub fn first_invalid(&self) -> Option<(usize, T)> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= T::zero()) || !v.is_finite())
            .map(|(i, v)| (i, *v))
    }

    /// `max_i |x_i - y_i| / max(max_i |y_i|, tiny)`.
    pub fn rel_inf_distance(&self, reference: &Self) -> T {
        let num = self
            .0
            .iter()
            .zip(&reference.0)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        num / reference.inf_norm().max(T::min_positive_value())
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.0.iter().map(|&v| to_f64(v)).collect()
    }
}

impl<T> Index<Species> for StateVector<T> {
    type Output = T;
    fn index(&self, s: Species) -> &T {
        &self.0[s as usize]
    }
}

impl<T> IndexMut<Species> for StateVector<T> {
    fn index_mut(&mut self, s: Species) -> &mut T {
        &mut self.0[s as usize]
    }
}

impl<T> Index<usize> for StateVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for StateVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

/// Evaluates the 20 fluxes `(phi11, phi12, ..., phi72, phi1, ..., phi6)`.
///
/// Negative entries are accepted (root finders probe outside the positive
/// orthant); non-finite input propagates into the output.
pub fn flux_vector<T: Real>(x: &StateVector<T>, p: &ModelParameters<T>) -> [T; N_FLUXES] {
    use Species::*;
    let k = &p.rates;
    let two = lit::<T>(2.0);
    let f1 = p.f();
    let f2 = T::one() - f1;
    let (k1, k2) = (p.k1(), p.k2());
    let beta = p.beta();
    let v0 = p.v0;
    let exch = |s1: Species, s2: Species| k1 * x[s1] - k2 * x[s2];
    [
        two * k.b / f1 * x[R1] * x[R1] - k.d * x[RR1],
        two * k.b / f2 * x[R2] * x[R2] - k.d * x[RR2],
        k.b / f1 * x[R1] * x[VR1] - k.d * x[VRR1],
        k.b / f2 * x[R2] * x[VR2] - k.d * x[VRR2],
        two * k.a * v0 * x[RR1] - k.c * x[VRR1],
        two * k.a * v0 * x[RR2] - k.c * x[VRR2],
        k.a_i * x[VRR1] - two * k.c_i * x[D1],
        k.a_i * x[VRR2] - two * k.c_i * x[D2],
        k.b_i * x[RVR1] - k.d_i * x[D1],
        k.b_i * x[RVR2] - k.d_i * x[D2],
        k.a_s / f1 * x[R1] * x[VR1] - k.c * x[RVR1],
        k.a_s / f2 * x[R2] * x[VR2] - k.c * x[RVR2],
        k.a * v0 * x[R1] - k.c * x[VR1],
        k.a * v0 * x[R2] - k.c * x[VR2],
        exch(R1, R2),
        beta * exch(RR1, RR2),
        exch(VR1, VR2),
        beta * exch(VRR1, VRR2),
        beta * exch(RVR1, RVR2),
        beta * exch(D1, D2),
    ]
}

/// Time derivative `Gamma * Phi(x)`.
pub fn rhs<T: Real>(x: &StateVector<T>, p: &ModelParameters<T>) -> StateVector<T> {
    StateVector(ReactionNetwork::new().apply(&flux_vector(x, p)))
}

/// Partial derivatives of the fluxes, `d phi_j / d x_i` (20 x 12).
pub fn flux_jacobian<T: Real>(
    x: &StateVector<T>,
    p: &ModelParameters<T>,
) -> [[T; N_SPECIES]; N_FLUXES] {
    use Species::*;
    let k = &p.rates;
    let two = lit::<T>(2.0);
    let f1 = p.f();
    let f2 = T::one() - f1;
    let (k1, k2, beta) = (p.k1(), p.k2(), p.beta());
    let mut j = [[T::zero(); N_SPECIES]; N_FLUXES];
    let mut set = |row: usize, s: Species, v: T| j[row][s as usize] = j[row][s as usize] + v;

    set(0, R1, lit::<T>(4.0) * k.b / f1 * x[R1]);
    set(0, RR1, -k.d);
    set(1, R2, lit::<T>(4.0) * k.b / f2 * x[R2]);
    set(1, RR2, -k.d);
    set(2, R1, k.b / f1 * x[VR1]);
    set(2, VR1, k.b / f1 * x[R1]);
    set(2, VRR1, -k.d);
    set(3, R2, k.b / f2 * x[VR2]);
    set(3, VR2, k.b / f2 * x[R2]);
    set(3, VRR2, -k.d);
    set(4, RR1, two * k.a * p.v0);
    set(4, VRR1, -k.c);
    set(5, RR2, two * k.a * p.v0);
    set(5, VRR2, -k.c);
    set(6, VRR1, k.a_i);
    set(6, D1, -two * k.c_i);
    set(7, VRR2, k.a_i);
    set(7, D2, -two * k.c_i);
    set(8, RVR1, k.b_i);
    set(8, D1, -k.d_i);
    set(9, RVR2, k.b_i);
    set(9, D2, -k.d_i);
    set(10, R1, k.a_s / f1 * x[VR1]);
    set(10, VR1, k.a_s / f1 * x[R1]);
    set(10, RVR1, -k.c);
    set(11, R2, k.a_s / f2 * x[VR2]);
    set(11, VR2, k.a_s / f2 * x[R2]);
    set(11, RVR2, -k.c);
    set(12, R1, k.a * p.v0);
    set(12, VR1, -k.c);
    set(13, R2, k.a * p.v0);
    set(13, VR2, -k.c);
    let pairs = [(R1, R2), (RR1, RR2), (VR1, VR2), (VRR1, VRR2), (RVR1, RVR2), (D1, D2)];
    for (n, (s1, s2)) in pairs.into_iter().enumerate() {
        let m = if s1.is_dimer() { beta } else { T::one() };
        set(14 + n, s1, m * k1);
        set(14 + n, s2, -m * k2);
    }
    j
}

/// Jacobian of [`rhs`], `Gamma * dPhi/dx` (12 x 12).
pub fn jacobian<T: Real>(x: &StateVector<T>, p: &ModelParameters<T>) -> [[T; N_SPECIES]; N_SPECIES] {
    let jf = flux_jacobian(x, p);
    let mut out = [[T::zero(); N_SPECIES]; N_SPECIES];
    for (i, row) in STOICHIOMETRY.iter().enumerate() {
        for (r, &g) in row.iter().enumerate() {
            if g != 0 {
                let g = T::from_i8(g).unwrap();
                for c in 0..N_SPECIES {
                    out[i][c] = out[i][c] + g * jf[r][c];
                }
            }
        }
    }
    out
}

/// Signalling complexes and receptor totals per domain, fmol/cm^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables<T> {
    pub signal_total: T,
    pub signal_hd: T,
    pub signal_ld: T,
    pub receptors_hd: T,
    pub receptors_ld: T,
    pub receptors_total: T,
}

/// Signalling complexes are RVR and Delta; receptor totals weight every
/// dimeric species by two.
pub fn observables<T: Real>(x: &StateVector<T>) -> Observables<T> {
    use Species::*;
    let two = lit::<T>(2.0);
    let signal_hd = x[RVR1] + x[D1];
    let signal_ld = x[RVR2] + x[D2];
    let receptors_hd = x[R1] + two * x[RR1] + x[VR1] + two * x[VRR1] + two * x[RVR1] + two * x[D1];
    let receptors_ld = x[R2] + two * x[RR2] + x[VR2] + two * x[VRR2] + two * x[RVR2] + two * x[D2];
    Observables {
        signal_total: signal_hd + signal_ld,
        signal_hd,
        signal_ld,
        receptors_hd,
        receptors_ld,
        receptors_total: receptors_hd + receptors_ld,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn only(s: Species, v: f64) -> StateVector<f64> {
        let mut x = StateVector::zeros();
        x[s] = v;
        x
    }

    fn random_state(rng: &mut StdRng) -> StateVector<f64> {
        let mut x = StateVector::zeros();
        for i in 0..N_SPECIES {
            x[i] = 10f64.powf(rng.gen_range(-6.0..2.0));
        }
        x
    }

    #[test]
    fn species_order_and_weights() {
        assert_eq!(Species::ALL.len(), N_SPECIES);
        for (i, s) in Species::ALL.iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(Species::from_index(i), Some(*s));
            assert_eq!(s.partner().partner(), *s);
            assert_ne!(s.domain(), s.partner().domain());
        }
        assert_eq!(Species::VR2.receptor_weight(), 1);
        assert_eq!(Species::D1.receptor_weight(), 2);
        assert_eq!(Species::RVR2.name(), "RVR2");
        assert!(Species::from_index(12).is_none());
    }

    #[test]
    fn stoichiometry_matches_reaction_scheme() {
        assert_eq!(ReactionNetwork::new(), ReactionNetwork::from_scheme());
    }

    #[test]
    fn stoichiometry_structure() {
        let net = build_network(&ModelParameters::<f64>::reference());
        assert!(net
            .stoichiometry()
            .iter()
            .flatten()
            .all(|v| matches!(v, -2 | -1 | 0 | 1)));
        assert_eq!(net.nonzero_count(), 44);
        assert_eq!(net.rank(), 11);
        assert_eq!(net.left_product(&RECEPTOR_WEIGHTS), [0; N_FLUXES]);
        assert_eq!(net.flux_labels()[14], "phi1");
    }

    #[test]
    fn zero_state_has_zero_fluxes() {
        let p = ModelParameters::<f64>::reference();
        assert!(flux_vector(&StateVector::zeros(), &p).iter().all(|&v| v == 0.0));
        assert_eq!(rhs(&StateVector::zeros(), &p), StateVector::zeros());
    }

    #[test]
    fn monomer_in_hd_domain_fluxes() {
        let p = ModelParameters::<f64>::reference();
        let phi = flux_vector(&only(Species::R1, 1.0), &p);
        assert!((phi[0] - 2.0).abs() < 1e-15);
        assert!((phi[12] - 4.4e-4).abs() < 1e-18);
        assert_eq!(phi[14], p.k1());
        assert!((phi[14] - 0.0277).abs() / 0.0277 < 1e-3);
        for (j, v) in phi.iter().enumerate() {
            if ![0, 12, 14].contains(&j) {
                assert_eq!(*v, 0.0, "{}", FLUX_LABELS[j]);
            }
        }

        let dx = rhs(&only(Species::R1, 1.0), &p);
        let expected_r1 = -2.0 * 2.0 - 4.4e-4 - p.k1();
        assert!((dx[Species::R1] - expected_r1).abs() < 1e-15);
        assert!((dx[Species::R1] + 4.02814).abs() < 1e-4);
        assert!((dx[Species::RR1] - 2.0).abs() < 1e-15);
        assert!((dx[Species::VR1] - 4.4e-4).abs() < 1e-18);
        assert_eq!(dx[Species::R2], p.k1());
    }

    #[test]
    fn dimer_in_hd_domain_fluxes() {
        let p = ModelParameters::<f64>::reference();
        let phi = flux_vector(&only(Species::RR1, 1.0), &p);
        assert!((phi[0] + 0.01).abs() < 1e-16);
        assert!((phi[4] - 2.0 * 0.0044 * 0.1).abs() < 1e-18);
        assert_eq!(phi[15], 0.5 * p.k1());
        assert!((phi[15] - 0.01385).abs() / 0.01385 < 1e-3);
    }

    #[test]
    fn delta_reverse_term_carries_factor_two() {
        let p = ModelParameters::<f64>::reference();
        let phi = flux_vector(&only(Species::D1, 1.0), &p);
        assert!((phi[6] + 2.0 * 0.026).abs() < 1e-16);
        assert!((phi[8] + 0.02).abs() < 1e-16);
    }

    #[test]
    fn rhs_conserves_receptors() {
        let mut rng = StdRng::seed_from_u64(7);
        let p = ModelParameters::<f64>::reference();
        for _ in 0..1000 {
            let x = random_state(&mut rng);
            let phi = flux_vector(&x, &p);
            let scale = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let drift = rhs(&x, &p).receptor_total();
            assert!(drift.abs() < 1e-12 * scale, "{drift} vs {scale}");
        }
    }

    #[test]
    fn exchange_vanishes_for_symmetric_domains() {
        let p = ModelParameters::<f64>::reference();
        let g = GeometryParameters {
            f: 0.5,
            alpha: 1.0,
            ..*p.geometry()
        };
        let p = p.with_geometry(g).unwrap();
        let mut x = StateVector::zeros();
        for (n, s) in Species::ALL.iter().step_by(2).enumerate() {
            x[*s] = 0.3 + n as f64;
            x[s.partner()] = 0.3 + n as f64;
        }
        let phi = flux_vector(&x, &p);
        assert!(phi[14..].iter().all(|v| v.abs() < 1e-16));
    }

    #[test]
    fn exchange_vanishes_for_uniform_physical_concentration() {
        let base = ModelParameters::<f64>::reference();
        for f in [0.05, 0.1, 0.3, 0.5] {
            let g = GeometryParameters {
                f,
                alpha: 1.0,
                ..*base.geometry()
            };
            let p = base.with_geometry(g).unwrap();
            let mut x = StateVector::zeros();
            for (n, s) in Species::ALL.iter().step_by(2).enumerate() {
                let c = 0.7 * (n + 1) as f64;
                x[*s] = f * c;
                x[s.partner()] = (1.0 - f) * c;
            }
            let phi = flux_vector(&x, &p);
            for v in &phi[14..] {
                assert!(v.abs() < 1e-15, "f = {f}: {v}");
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(11);
        let p = ModelParameters::<f64>::reference();
        for _ in 0..20 {
            let mut x = StateVector::zeros();
            for i in 0..N_SPECIES {
                x[i] = rng.gen_range(0.01..5.0);
            }
            let jac = jacobian(&x, &p);
            for c in 0..N_SPECIES {
                let h = 1e-6 * x[c].abs().max(1e-6);
                let mut xp = x;
                let mut xm = x;
                xp[c] += h;
                xm[c] -= h;
                let (fp, fm) = (rhs(&xp, &p), rhs(&xm, &p));
                for r in 0..N_SPECIES {
                    let fd = (fp[r] - fm[r]) / (2.0 * h);
                    let tol = 1e-6 * (1.0 + fd.abs().max(jac[r][c].abs()));
                    assert!((fd - jac[r][c]).abs() < tol, "({r},{c}) {fd} vs {}", jac[r][c]);
                }
            }
        }
    }

    #[test]
    fn observables_examples() {
        let o = observables(&StateVector::<f64>::zeros());
        assert_eq!(o.signal_total, 0.0);
        assert_eq!(o.receptors_total, 0.0);

        let mut x = StateVector::zeros();
        x[Species::RVR1] = 1.0;
        x[Species::D2] = 2.0;
        let o = observables(&x);
        assert_eq!(o.signal_hd, 1.0);
        assert_eq!(o.signal_ld, 2.0);
        assert_eq!(o.signal_total, 3.0);
        assert_eq!(o.receptors_total, 6.0);
        assert_eq!(o.receptors_total, x.receptor_total());
    }

    #[test]
    fn observables_are_consistent() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let x = random_state(&mut rng);
            let o = observables(&x);
            assert!((o.signal_total - o.signal_hd - o.signal_ld).abs() < 1e-12 * o.signal_total);
            assert!(
                (o.receptors_total - x.receptor_total()).abs() < 1e-12 * o.receptors_total
            );
        }
    }

    #[test]
    fn parameter_validation() {
        let p = ModelParameters::<f64>::reference();
        assert!(p.with_v0(-1.0).is_err());
        assert!(p.with_r_total(0.0).is_err());
        let mut r = *p.rates();
        r.a_s = -0.1;
        assert!(matches!(
            p.with_rates(r),
            Err(Error::InvalidParameter { name: "a_s", .. })
        ));
        assert!((p.k1() * p.f() * p.delta() - 1.0).abs() < 1e-15);
        assert!((p.k2() * (1.0 - p.f()) * p.delta() - p.alpha()).abs() < 1e-14);
    }

    #[test]
    fn evaluates_in_f32() {
        let p = ModelParameters::<f32>::reference();
        let x = StateVector::<f32>::partitioned_monomers(6.6, 0.1);
        let dx = rhs(&x, &p);
        assert!(dx.receptor_total().abs() < 1e-4);
        assert!((x.receptor_total() - 6.6).abs() < 1e-5);
    }
}
