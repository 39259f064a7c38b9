//! Energy change under a slow ramp of the well depth, and the sign audit.
//!
//! In the quasi-static limit the vacuum energy obeys `dξ/dη = −Q(η)`, so
//! the Casimir energy at depth `η_f` is `−∫₀^{η_f} Q(η) dη`.

use rayon::prelude::*;
use serde::Serialize;

use crate::capri::{capri_charge_integral, total_charge_point_split, QuadratureConfig};
use crate::error::{Error, Result};
use crate::mode_sum::{free_vacuum_density, total_charge_mode_sum, RegulatorConfig};
use crate::model::{ChargeMethod, ChargeReport, WellParameters};

pub const DEFAULT_RAMP_STEPS: usize = 64;

/// Ramp of the well depth from zero to `eta_final`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RampSpec {
    pub eta_final: f64,
    /// Number of η intervals; even and at least 4.
    pub n_steps: usize,
    pub charge_method: ChargeMethod,
}

impl RampSpec {
    pub fn new(eta_final: f64, charge_method: ChargeMethod) -> Self {
        Self {
            eta_final,
            n_steps: DEFAULT_RAMP_STEPS,
            charge_method,
        }
    }

    pub fn with_steps(mut self, n_steps: usize) -> Self {
        self.n_steps = n_steps;
        self
    }

    pub fn validate(&self, m: f64) -> Result<()> {
        if !self.eta_final.is_finite() || self.eta_final <= 0.0 {
            return Err(Error::invalid(
                "eta_final",
                format!("must be finite and > 0, got {}", self.eta_final),
            ));
        }
        if self.eta_final > m {
            return Err(Error::Regime(format!(
                "ramp target eta_final = {} exceeds m = {m}",
                self.eta_final
            )));
        }
        if self.n_steps < 4 || !self.n_steps.is_multiple_of(2) {
            return Err(Error::invalid(
                "n_steps",
                format!("must be even and >= 4, got {}", self.n_steps),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..=self.n_steps)
            .map(|i| self.eta_final * i as f64 / self.n_steps as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Zero => "zero",
        }
    }
}

/// Charges and cumulative energy change along a ramp.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub well: WellParameters,
    pub ramp: RampSpec,
    pub eta_grid: Vec<f64>,
    pub charges: Vec<f64>,
    /// Cumulative trapezoid of `−Q` up to each grid point.
    pub energy_delta: Vec<f64>,
    /// Final energy change with one Richardson step against the half grid.
    pub casimir_energy: f64,
    pub casimir_sign: Sign,
}

impl EnergyTrace {
    /// Discrete sign theorem: a charge of fixed sign on every `η > 0` grid
    /// point forces the opposite sign on the final energy.
    pub fn sign_theorem_holds(&self) -> bool {
        let inner = &self.charges[1..];
        if inner.iter().all(|&q| q < 0.0) {
            self.casimir_energy > 0.0
        } else if inner.iter().all(|&q| q > 0.0) {
            self.casimir_energy < 0.0
        } else {
            true
        }
    }

    /// True when `energy_delta` is monotone along the grid.
    pub fn is_monotone(&self) -> bool {
        let d = &self.energy_delta;
        d.windows(2).all(|w| w[1] >= w[0]) || d.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Well charge at one depth under the chosen method.
pub fn charge_at(
    well: &WellParameters,
    method: ChargeMethod,
    quad: &QuadratureConfig,
    reg: &RegulatorConfig,
) -> Result<ChargeReport> {
    match method {
        ChargeMethod::ModeSum => total_charge_mode_sum(well, reg),
        ChargeMethod::PointSplitContour => capri_charge_integral(well, quad),
        ChargeMethod::PointSplitComposite => total_charge_point_split(well, quad),
    }
}

/// Integrates `dξ/dη = −Q(η)` from zero to `ramp.eta_final` for the well
/// geometry of `well_template` (its own depth is ignored).
pub fn casimir_energy_adiabatic(
    well_template: &WellParameters,
    ramp: &RampSpec,
    quad: &QuadratureConfig,
    reg: &RegulatorConfig,
) -> Result<EnergyTrace> {
    ramp.validate(well_template.m())?;
    let eta_grid = ramp.grid();
    let charges = eta_grid
        .par_iter()
        .map(|&eta| {
            let well = well_template.with_eta(eta)?;
            charge_at(&well, ramp.charge_method, quad, reg).map(|r| r.value)
        })
        .collect::<Result<Vec<f64>>>()?;

    let h = ramp.eta_final / ramp.n_steps as f64;
    let mut energy_delta = Vec::with_capacity(charges.len());
    let mut acc = 0.0;
    energy_delta.push(acc);
    for w in charges.windows(2) {
        acc -= 0.5 * h * (w[0] + w[1]);
        energy_delta.push(acc);
    }
    let fine = acc;
    let coarse = -2.0 * h * trapezoid_weighted(charges.iter().step_by(2).copied());
    let casimir_energy = (4.0 * fine - coarse) / 3.0;

    let trace = EnergyTrace {
        well: well_template.with_eta(ramp.eta_final)?,
        ramp: *ramp,
        eta_grid,
        charges,
        energy_delta,
        casimir_energy,
        casimir_sign: Sign::of(casimir_energy),
    };
    if !trace.sign_theorem_holds() {
        return Err(Error::NonConvergence {
            what: "energy trace contradicts the sign of its charges".into(),
            spread: casimir_energy.abs(),
            tol: 0.0,
        });
    }
    Ok(trace)
}

/// Unit-spacing trapezoid sum of a sequence.
fn trapezoid_weighted(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    0.5 * (v[0] + v[n - 1]) + v[1..n - 1].iter().sum::<f64>()
}

/// Outcome of the minimum-energy requirement `Q > 0` for one method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    /// Free field, or a charge indistinguishable from zero.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodVerdict {
    pub method: ChargeMethod,
    pub charge: f64,
    pub error_estimate: f64,
    pub verdict: Verdict,
    /// From a matching trace when one was supplied, otherwise implied by the sign theorem.
    pub casimir_sign: Sign,
    pub casimir_from_trace: bool,
    /// Negative charge together with positive Casimir energy.
    pub contradiction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub well: WellParameters,
    /// Largest free-vacuum density found over the well region.
    pub free_field_density: f64,
    pub free_field_null: bool,
    pub methods: Vec<MethodVerdict>,
    pub contradiction: bool,
}

pub const FREE_FIELD_TOL: f64 = 1e-10;

/// Sign-consistency verdict for a set of charge reports on the same well.
///
/// Reports for other wells are ignored. Never fails: numerical problems in
/// the free-field probe show up as `free_field_null = false`.
pub fn sign_consistency_audit(well: &WellParameters, reports: &[ChargeReport], traces: &[EnergyTrace]) -> AuditReport {
    let probe = RegulatorConfig::for_mass(well.m());
    let h = well.half_width();
    let free_field_density = [-0.75 * h, -0.25 * h, 0.0, 0.5 * h, 0.9 * h]
        .iter()
        .map(|&z| {
            free_vacuum_density(well.m(), z, &probe)
                .map(f64::abs)
                .unwrap_or(f64::NAN)
        })
        .fold(0.0, f64::max);
    let free_field_null = free_field_density.is_finite() && free_field_density < FREE_FIELD_TOL;

    let methods: Vec<MethodVerdict> = reports
        .iter()
        .filter(|r| r.well == *well)
        .map(|r| {
            let verdict = if well.is_free() || r.value.abs() <= r.error_estimate {
                Verdict::Vacuous
            } else if r.value > 0.0 {
                Verdict::Satisfied
            } else {
                Verdict::Violated
            };
            let trace = traces.iter().find(|t| {
                t.ramp.charge_method == r.method
                    && t.well.m() == well.m()
                    && t.well.a() == well.a()
                    && t.ramp.eta_final == well.eta()
            });
            let (casimir_sign, casimir_from_trace) = match trace {
                Some(t) => (t.casimir_sign, true),
                None => (Sign::of(-r.value), false),
            };
            let contradiction = verdict == Verdict::Violated && casimir_sign == Sign::Positive;
            MethodVerdict {
                method: r.method,
                charge: r.value,
                error_estimate: r.error_estimate,
                verdict,
                casimir_sign,
                casimir_from_trace,
                contradiction,
            }
        })
        .collect();
    let contradiction = methods.iter().any(|m| m.contradiction);
    AuditReport {
        well: *well,
        free_field_density,
        free_field_null,
        methods,
        contradiction,
    }
}
