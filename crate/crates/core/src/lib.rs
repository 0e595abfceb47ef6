//! Two-domain receptor kinetics: VEGF receptors that dimerize, bind ligand
//! and exchange between a high-density (HD) membrane domain and the rest of
//! the cell surface (LD).
//!
//! The model has 12 species (six complexes, each in both domains) and 20
//! reversible fluxes. The crate provides the right-hand side and Jacobian,
//! the geometry behind the exchange constants, an adaptive integrator, a
//! semianalytic steady-state solver with a numeric fallback, and a parallel
//! parameter sweep with CSV export.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, and sweeps run in `f64` only.
//!
//! ```
//! use domainkin::{solve_steady_state, ModelParams, observables};
//!
//! let p = ModelParams::reference();
//! let ss = solve_steady_state(&p).unwrap();
//! let o = observables(&ss.state);
//! assert!((o.receptors_total - 6.6).abs() < 1e-8);
//! ```

pub mod config;
pub mod cubic;
pub mod error;
pub mod geometry;
pub mod integrator;
pub mod linalg;
pub mod model;
pub mod roots;
pub mod scalar;
pub mod steady;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
pub use geometry::{boundary_length, exchange_rates, sphere_radius, ExchangeRates, GeometryParameters};
pub use integrator::{integrate, integrate_at, relax_to_steady, IntegratorConfig, Relaxation, Trajectory};
pub use model::{
    build_network, flux_vector, jacobian, observables, rhs, ModelParameters, Observables, RateConstants,
    ReactionNetwork, Species, StateVector, N_FLUXES, N_SPECIES, RECEPTOR_WEIGHTS,
};
pub use scalar::Real;
pub use steady::{
    assemble_state, conservation_residual, eliminate_dependents, expanded_matrix, solve_steady,
    solve_steady_numeric, solve_steady_semianalytic, solve_steady_state, EliminationCoefficients,
    ExpandedSystem, SolverPath, SolverPreference, SteadyStateResult,
};
pub use sweep::{run_sweep, run_timecourse, InitialState, Scenario, SweepConfig, SweepRow};
pub use validate::{run_validation, ValidationReport};

pub type ModelParams = ModelParameters<f64>;
pub type Rates = RateConstants<f64>;
pub type Geometry = GeometryParameters<f64>;
pub type State = StateVector<f64>;
pub type SteadyState = SteadyStateResult<f64>;
pub type ModelParams32 = ModelParameters<f32>;
pub type State32 = StateVector<f32>;
pub type SteadyState32 = SteadyStateResult<f32>;
