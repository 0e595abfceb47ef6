//! Self-check suite behind the `validate` subcommand.

use std::fmt;

use rayon::prelude::*;

use crate::geometry::{exchange_rates, GeometryParameters};
use crate::integrator::{integrate, IntegratorConfig};
use crate::model::{ModelParameters, RateConstants, ReactionNetwork, Species, StateVector, RECEPTOR_WEIGHTS};
use crate::steady::{
    expanded_matrix, residual_tolerance, solve_steady_numeric, solve_steady_semianalytic, solve_steady_state,
};
use crate::sweep::{Scenario, SweepConfig};

/// Table values of the exchange constants at the reference geometry.
pub const TABLE_K1: f64 = 0.0277;
pub const TABLE_K2: f64 = 0.0154;
/// Half a unit in the last printed digit of the table.
pub const TABLE_ROUNDING: f64 = 5e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check { name, passed, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn structure(report: &mut ValidationReport) {
    let net = ReactionNetwork::new();
    let scheme = ReactionNetwork::from_scheme();
    report.push(
        "stoichiometry",
        net == scheme && net.nonzero_count() == 44,
        format!(
            "printed matrix {} the reaction list, {} nonzeros",
            if net == scheme { "matches" } else { "differs from" },
            net.nonzero_count()
        ),
    );
    let rank_g = net.rank();
    let rank_e = expanded_matrix(&ModelParameters::<f64>::reference()).rank();
    report.push(
        "rank",
        rank_g == 11 && rank_e == 11,
        format!("rank(Gamma) = {rank_g}, rank(expanded) = {rank_e}"),
    );
    let left = net.left_product(&RECEPTOR_WEIGHTS);
    report.push(
        "left null vector",
        left.iter().all(|&v| v == 0),
        format!("w^T Gamma = {left:?}"),
    );
}

fn exchange(report: &mut ValidationReport) {
    match exchange_rates(&GeometryParameters::<f64>::reference()) {
        Ok(x) => {
            let rel1 = (x.k1 - TABLE_K1) / TABLE_K1;
            report.push(
                "k1 table",
                rel1.abs() <= 1e-3,
                format!("k1 = {:.6} vs {TABLE_K1} (relative {rel1:+.2e})", x.k1),
            );
            let rel2 = (x.k2 - TABLE_K2) / TABLE_K2;
            report.push(
                "k2 table",
                (x.k2 - TABLE_K2).abs() <= TABLE_ROUNDING,
                format!(
                    "k2 = {:.6} vs {TABLE_K2} (relative {rel2:+.2e}; within table rounding {TABLE_ROUNDING:e})",
                    x.k2
                ),
            );
        }
        Err(e) => report.push("exchange constants", false, e.to_string()),
    }
}

fn dual_path(report: &mut ValidationReport) {
    let cfg = SweepConfig {
        scenarios: Scenario::ALL.to_vec(),
        alpha: vec![1.0, 5.0, 10.0],
        f: vec![0.05, 0.3],
        v0: vec![0.01, 1.0],
        beta: vec![0.5, 0.25],
        ..SweepConfig::default()
    };
    let points = cfg.points();
    let outcomes: Vec<Result<(f64, bool), String>> = points
        .par_iter()
        .map(|pt| {
            let p = cfg.params_at(pt).map_err(|e| e.to_string())?;
            let a = solve_steady_semianalytic(&p).map_err(|e| e.to_string())?;
            let b = solve_steady_numeric(&p, None).map_err(|e| e.to_string())?;
            let contract = [&a, &b].iter().all(|r| {
                r.residual_inf_norm < residual_tolerance::<f64>() * r.state.inf_norm().max(1.0)
                    && (r.state.receptor_total() - p.r_total()).abs() < 1e-9 * p.r_total()
            });
            Ok((a.state.rel_inf_distance(&b.state), contract && a.root_count == 1))
        })
        .collect();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut contract_ok = true;
    for (pt, o) in points.iter().zip(outcomes) {
        match o {
            Ok((dev, ok)) => {
                worst = worst.max(dev);
                contract_ok &= ok;
            }
            Err(e) => failures.push(format!("{pt:?}: {e}")),
        }
    }
    report.push(
        "dual-path grid",
        failures.is_empty() && worst <= 1e-8,
        format!("{} points, max relative deviation {worst:.2e}", points.len()),
    );
    report.push(
        "residual contract",
        failures.is_empty() && contract_ok,
        if failures.is_empty() {
            "every grid result within residual and conservation bounds, single root".to_string()
        } else {
            failures.join("; ")
        },
    );
}

fn symmetry(report: &mut ValidationReport) {
    let base = ModelParameters::<f64>::reference();
    let mut worst = 0.0f64;
    let mut err = None;
    for (f, v0) in [(0.1, 0.1), (0.3, 5.0)] {
        let g = GeometryParameters {
            f,
            alpha: 1.0,
            beta: 0.5,
            ..*base.geometry()
        };
        let res = base
            .with_geometry(g)
            .and_then(|p| p.with_v0(v0))
            .and_then(|p| solve_steady_state(&p));
        match res {
            Ok(r) => {
                for s in Species::ALL.iter().step_by(2) {
                    let hd = r.state[*s] / f;
                    let ld = r.state[s.partner()] / (1.0 - f);
                    worst = worst.max((hd - ld).abs() / hd.abs());
                }
            }
            Err(e) => err = Some(e.to_string()),
        }
    }
    report.push(
        "symmetry limit",
        err.is_none() && worst <= 1e-8,
        err.unwrap_or_else(|| format!("max relative mismatch {worst:.2e}")),
    );
}

fn closed_form(report: &mut ValidationReport) {
    let base = ModelParameters::<f64>::reference();
    let rates = RateConstants {
        b: 0.0,
        a_s: 0.0,
        ..*base.rates()
    };
    let p = match base.with_rates(rates).and_then(|p| p.with_v0(0.0)) {
        Ok(p) => p,
        Err(e) => return report.push("monomer closed form", false, e.to_string()),
    };
    let r1 = p.r_total() * p.k2() / (p.k1() + p.k2());
    let mut worst = 0.0f64;
    let mut err = None;
    for res in [solve_steady_semianalytic(&p), solve_steady_numeric(&p, None)] {
        match res {
            Ok(r) => worst = worst.max((r.state[Species::R1] - r1).abs() / r1),
            Err(e) => err = Some(e.to_string()),
        }
    }
    report.push(
        "monomer closed form",
        err.is_none() && worst <= 1e-10,
        err.unwrap_or_else(|| format!("both paths, max relative error {worst:.2e}")),
    );
}

fn conservation(report: &mut ValidationReport) {
    let p = ModelParameters::<f64>::reference();
    let mut x0 = StateVector::partitioned_monomers(2.2, 0.5);
    x0[Species::RR1] = 1.1;
    x0[Species::D2] = 0.55;
    match integrate(&x0, &p, (0.0, 1e5), 201, &IntegratorConfig::default()) {
        Ok(tr) => {
            let drift = tr.receptor_drift();
            report.push(
                "trajectory conservation",
                drift < 1e-9,
                format!("relative drift {drift:.2e} over 1e5 s"),
            );
        }
        Err(e) => report.push("trajectory conservation", false, e.to_string()),
    }
}

/// Runs every check.
pub fn run_validation() -> ValidationReport {
    let mut report = ValidationReport::default();
    structure(&mut report);
    exchange(&mut report);
    dual_path(&mut report);
    symmetry(&mut report);
    closed_form(&mut report);
    conservation(&mut report);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pristine_build_passes() {
        let report = run_validation();
        assert!(report.all_passed(), "{report}");
        let text = report.to_string();
        assert!(text.lines().any(|l| l.starts_with("PASS k1 table")));
        assert!(text.ends_with("0 failed"));
    }
}
