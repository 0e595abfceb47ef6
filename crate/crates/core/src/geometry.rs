//! Membrane geometry and inter-domain exchange constants.
//!
//! The high-density domain is modelled as a spherical cap of relative area
//! `f` on a spherical cell. Its rim length `L0` and the boundary exit
//! permeability `gamma_out` set a common time constant
//! `delta = A_cell / (L0 * gamma_out)`, from which
//! `k1 = 1 / (delta * f)` and `k2 = alpha / (delta * (1 - f))`.
//!
//! Lengths are in micrometres at the interface, converted to centimetres
//! before combining with `gamma_out` (cm/s).

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Micrometres to centimetres.
pub const UM_TO_CM: f64 = 1e-4;
/// Square micrometres to square centimetres.
pub const UM2_TO_CM2: f64 = 1e-8;

/// Largest supported high-density fraction (a hemispherical cap).
pub const MAX_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParameters<T> {
    /// Total membrane area, um^2.
    pub a_cell_um2: T,
    /// Cell radius in um; derived from `a_cell_um2` assuming a sphere when `None`.
    pub r_cell_um: Option<T>,
    /// Boundary exit permeability, cm/s.
    pub gamma_out: T,
    /// Fraction of the membrane covered by the high-density domain.
    pub f: T,
    /// Attractiveness: ratio of inbound to outbound permeability.
    pub alpha: T,
    /// Mobility factor applied to the exchange of every dimeric species.
    pub beta: T,
}

impl<T: Real> GeometryParameters<T> {
    /// Reference geometry: 1000 um^2 cell, gamma_out = 8.23e-6 cm/s,
    /// f = 0.1, alpha = 5, beta = 0.5.
    pub fn reference() -> Self {
        Self {
            a_cell_um2: lit(1000.0),
            r_cell_um: None,
            gamma_out: lit(8.23e-6),
            f: lit(0.1),
            alpha: lit(5.0),
            beta: lit(0.5),
        }
    }

    /// Cell radius in um, explicit or sphere-derived.
    pub fn radius_um(&self) -> T {
        self.r_cell_um
            .unwrap_or_else(|| sphere_radius(self.a_cell_um2))
    }

    pub fn validate(&self) -> Result<()> {
        check_fraction(self.f)?;
        positive("a_cell_um2", self.a_cell_um2)?;
        positive("gamma_out", self.gamma_out)?;
        positive("alpha", self.alpha)?;
        if let Some(r) = self.r_cell_um {
            positive("r_cell_um", r)?;
        }
        if !(self.beta >= T::zero()) || !self.beta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: to_f64(self.beta),
                reason: "must be finite and >= 0",
            });
        }
        Ok(())
    }
}

/// Rim length, time constant and exchange rate constants for one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeRates<T> {
    /// Boundary length, um.
    pub l0_um: T,
    /// Common exchange time constant, s.
    pub delta: T,
    /// Exit rate constant of the high-density domain, 1/s.
    pub k1: T,
    /// Entry rate constant into the high-density domain, 1/s.
    pub k2: T,
}

/// Radius of a sphere with surface area `a_um2`.
pub fn sphere_radius<T: Real>(a_um2: T) -> T {
    (a_um2 / (lit::<T>(4.0) * T::PI())).sqrt()
}

/// Rim length (um) of a spherical cap covering fraction `f` of a cell of
/// area `a_cell_um2` and radius `r_cell_um`:
/// `2 pi sqrt(r^2 - (r - A f / (2 pi r))^2)`.
pub fn boundary_length<T: Real>(f: T, r_cell_um: T, a_cell_um2: T) -> Result<T> {
    check_fraction(f)?;
    positive("r_cell_um", r_cell_um)?;
    positive("a_cell_um2", a_cell_um2)?;
    let two_pi = lit::<T>(2.0) * T::PI();
    let cap_height = a_cell_um2 * f / (two_pi * r_cell_um);
    let offset = r_cell_um - cap_height;
    let radicand = r_cell_um * r_cell_um - offset * offset;
    if !(radicand > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "r_cell_um",
            value: to_f64(r_cell_um),
            reason: "cap height exceeds the cell diameter",
        });
    }
    Ok(two_pi * radicand.sqrt())
}

/// Computes `L0`, `delta`, `k1` and `k2` for a geometry.
pub fn exchange_rates<T: Real>(g: &GeometryParameters<T>) -> Result<ExchangeRates<T>> {
    g.validate()?;
    let l0_um = boundary_length(g.f, g.radius_um(), g.a_cell_um2)?;
    let area_cm2 = g.a_cell_um2 * lit(UM2_TO_CM2);
    let l0_cm = l0_um * lit(UM_TO_CM);
    let delta = area_cm2 / (l0_cm * g.gamma_out);
    Ok(ExchangeRates {
        l0_um,
        delta,
        k1: T::one() / (delta * g.f),
        k2: g.alpha / (delta * (T::one() - g.f)),
    })
}

fn check_fraction<T: Real>(f: T) -> Result<()> {
    if f > T::zero() && f <= lit(MAX_FRACTION) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "f",
            value: to_f64(f),
            reason: "must lie in (0, 0.5]",
        })
    }
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: to_f64(v),
            reason: "must be finite and > 0",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_radius_is_about_8_9_um() {
        let r = sphere_radius(1000.0f64);
        assert!((r - 8.9206).abs() < 1e-4);
    }

    #[test]
    fn boundary_length_matches_hand_evaluation() {
        // r = 8.9: cap height 100/(2 pi 8.9) = 1.78823, rim 2 pi sqrt(79.21 - 7.11177^2)
        let l: f64 = boundary_length(0.1, 8.9, 1000.0).unwrap();
        assert!((l - 33.6213).abs() < 1e-3, "{l}");
        let l: f64 = boundary_length(0.1, sphere_radius(1000.0), 1000.0).unwrap();
        assert!((l - 33.6).abs() < 0.05);
        let half: f64 = boundary_length(0.5, 8.9, 1000.0).unwrap();
        assert!((half - 55.9).abs() < 0.05, "{half}");
        // On the sphere itself f = 0.5 is the great circle.
        let r: f64 = sphere_radius(1000.0);
        let gc = boundary_length(0.5, r, 1000.0).unwrap();
        assert!((gc - 2.0 * std::f64::consts::PI * r).abs() < 1e-9);
    }

    #[test]
    fn boundary_length_vanishes_with_the_cap() {
        let small: f64 = boundary_length(1e-9, 8.9, 1000.0).unwrap();
        assert!(small < 1e-2);
        assert!(boundary_length(1e-6, 8.9, 1000.0).unwrap() > small);
    }

    #[test]
    fn rejects_out_of_range_fraction() {
        for f in [0.0, -0.1, 0.51, 1.0, f64::NAN] {
            assert!(matches!(
                boundary_length(f, 8.9, 1000.0),
                Err(Error::InvalidParameter { name: "f", .. })
            ));
        }
        assert!(boundary_length(0.1, 0.0, 1000.0).is_err());
    }

    #[test]
    fn reference_exchange_rates() {
        let x = exchange_rates(&GeometryParameters::<f64>::reference()).unwrap();
        assert!((x.delta - 361.0).abs() < 1.0, "delta {}", x.delta);
        assert!((x.k1 - 0.0277).abs() / 0.0277 < 1e-3, "k1 {}", x.k1);
        // Table value 0.0154 is printed to three significant figures.
        assert!((x.k2 - 0.0154).abs() <= 0.00005, "k2 {}", x.k2);
    }

    #[test]
    fn symmetric_geometry_gives_equal_rates() {
        let g = GeometryParameters {
            f: 0.5,
            alpha: 1.0,
            ..GeometryParameters::reference()
        };
        let x = exchange_rates::<f64>(&g).unwrap();
        assert!((x.k1 - x.k2).abs() <= 1e-15 * x.k1);
    }

    #[test]
    fn rejects_invalid_geometry() {
        let base = GeometryParameters::<f64>::reference();
        for g in [
            GeometryParameters { alpha: 0.0, ..base },
            GeometryParameters { beta: -0.1, ..base },
            GeometryParameters { gamma_out: 0.0, ..base },
            GeometryParameters { a_cell_um2: -1.0, ..base },
            GeometryParameters { r_cell_um: Some(0.0), ..base },
        ] {
            assert!(exchange_rates(&g).is_err(), "{g:?}");
        }
    }

    #[test]
    fn delta_strictly_decreasing_in_f() {
        let base = GeometryParameters::<f64>::reference();
        let deltas: Vec<f64> = (1..=100)
            .map(|i| {
                let g = GeometryParameters { f: 0.005 * i as f64, ..base };
                exchange_rates(&g).unwrap().delta
            })
            .collect();
        assert!(deltas.windows(2).all(|w| w[1] < w[0]));
    }

    proptest! {
        #[test]
        fn rate_identities(f in 1e-3f64..=0.5, alpha in 0.1f64..20.0) {
            let g = GeometryParameters { f, alpha, ..GeometryParameters::reference() };
            let x = exchange_rates(&g).unwrap();
            prop_assert!((x.k1 * f * x.delta - 1.0).abs() < 1e-12);
            prop_assert!((x.k2 * (1.0 - f) * x.delta / alpha - 1.0).abs() < 1e-12);
            // Exchange balance k1 S1 = k2 S2 means S1/f = alpha S2/(1-f).
            let ratio = x.k1 / x.k2;
            prop_assert!((ratio - (1.0 - f) / (alpha * f)).abs() < 1e-12 * ratio);
            let s2 = 1.0;
            let s1 = x.k2 / x.k1 * s2;
            prop_assert!((s1 / f - alpha * s2 / (1.0 - f)).abs() < 1e-10 * (s1 / f));
        }
    }
}
