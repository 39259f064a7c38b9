//! Vacuum charge density as a plain sum over eigenmodes (no point splitting).
//!
//! The sea and sky densities are free-subtracted momentum integrals
//! `Σ_j ∫ dp/2π (|ψ_η|² − |ψ_0|²)` over the continuum; the bound-state
//! density is a finite sum. The momentum integral is cut at `p_max` and
//! weighted by `exp(-damping * p)`; the damping is removed again by a linear
//! extrapolation from `damping` and `damping/2`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChargeMethod, ChargeReport, SettingsDigest, WellParameters};
use crate::quadrature::{pairwise_sum, uniform_edges, GaussLegendre};
use crate::spectrum::{bound_state_energies, free_mode, scattering_mode, Branch, Parity, SpectralMode};

const PANEL_ORDER: usize = 16;

/// Cutoff and quadrature settings for the momentum and position integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegulatorConfig {
    /// Momentum cutoff Λ.
    pub p_max: f64,
    /// Momentum quadrature nodes.
    pub n_p: usize,
    /// Exponential damping scale applied as `exp(-damping * p)`.
    pub damping: f64,
    /// Gauss–Legendre nodes for the integral over `|z| < a/2`.
    pub z_nodes: usize,
}

impl RegulatorConfig {
    /// Defaults for mass `m`: `p_max = 50 m`, 4096 momentum nodes,
    /// damping `1e-3 / m`, 256 position nodes.
    pub fn for_mass(m: f64) -> Self {
        Self {
            p_max: 50.0 * m,
            n_p: 4096,
            damping: 1e-3 / m,
            z_nodes: 256,
        }
    }

    /// Both cutoff and node count doubled.
    pub fn doubled(&self) -> Self {
        Self {
            p_max: 2.0 * self.p_max,
            n_p: 2 * self.n_p,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_max > 0.0) || !self.p_max.is_finite() {
            return Err(Error::invalid(
                "p_max",
                format!("must be finite and > 0, got {}", self.p_max),
            ));
        }
        if self.n_p < 16 {
            return Err(Error::invalid(
                "n_p",
                format!("need at least 16 nodes, got {}", self.n_p),
            ));
        }
        if !(self.damping >= 0.0) || !self.damping.is_finite() {
            return Err(Error::invalid(
                "damping",
                format!("must be finite and >= 0, got {}", self.damping),
            ));
        }
        if self.z_nodes < 1 {
            return Err(Error::invalid("z_nodes", "need at least one node"));
        }
        Ok(())
    }

    pub fn digest(&self) -> SettingsDigest {
        SettingsDigest::new()
            .with("p_max", self.p_max)
            .with("n_p", self.n_p as f64)
            .with("damping", self.damping)
            .with("z_nodes", self.z_nodes as f64)
    }
}

impl Default for RegulatorConfig {
    fn default() -> Self {
        Self::for_mass(1.0)
    }
}

/// Momentum nodes and weights on `[0, p_max]`: a quadratically graded
/// stretch below `min(4m, p_max/2)` where thresholds and near-threshold
/// resonances live, then uniform panels.
fn momentum_rule(m: f64, reg: &RegulatorConfig) -> (Vec<f64>, Vec<f64>) {
    let panels = (reg.n_p / PANEL_ORDER).max(2);
    let graded = (panels / 4).max(1);
    let uniform = panels - graded;
    let split = (4.0 * m).min(0.5 * reg.p_max);
    let mut edges: Vec<f64> = (0..=graded)
        .map(|i| {
            let t = i as f64 / graded as f64;
            split * t * t
        })
        .collect();
    edges.extend(uniform_edges(split, reg.p_max, uniform).into_iter().skip(1));
    GaussLegendre::new(PANEL_ORDER).composite(&edges)
}

/// Damping weights `(exp(-εp), exp(-εp/2))` and the extrapolation that
/// combines the two damped integrals into the undamped limit.
struct Damping(f64);

impl Damping {
    fn weights(&self, p: f64) -> (f64, f64) {
        ((-self.0 * p).exp(), (-0.5 * self.0 * p).exp())
    }

    fn extrapolate(&self, full: f64, half: f64) -> f64 {
        if self.0 > 0.0 {
            2.0 * half - full
        } else {
            full
        }
    }
}

/// Free-subtracted continuum densities `(rho_sea, rho_sky)` at each position.
fn continuum_profiles(well: &WellParameters, zs: &[f64], reg: &RegulatorConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    well.require_subcritical()?;
    reg.validate()?;
    if well.is_free() {
        return Ok((vec![0.0; zs.len()], vec![0.0; zs.len()]));
    }
    let (ps, ws) = momentum_rule(well.m(), reg);
    let damping = Damping(reg.damping);
    let nz = zs.len();
    // per node: [sea at full damping, sea at half, sky at full, sky at half] per z
    let per_node: Vec<Vec<f64>> = ps
        .par_iter()
        .zip(ws.par_iter())
        .map(|(&p, &w)| -> Result<Vec<f64>> {
            let (d_full, d_half) = damping.weights(p);
            let scale = w / (2.0 * PI);
            let mut out = vec![0.0; 4 * nz];
            for (b, branch) in [Branch::Sea, Branch::Sky].into_iter().enumerate() {
                let modes = [
                    scattering_mode(well, p, Parity::Even, branch)?,
                    scattering_mode(well, p, Parity::Odd, branch)?,
                ];
                for (i, &z) in zs.iter().enumerate() {
                    // free modes carry exactly 2 for the parity pair
                    let excess = modes[0].density(z) + modes[1].density(z) - 2.0;
                    out[(2 * b) * nz + i] = scale * d_full * excess;
                    out[(2 * b + 1) * nz + i] = scale * d_half * excess;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let column = |k: usize| -> f64 {
        let terms: Vec<f64> = per_node.iter().map(|row| row[k]).collect();
        pairwise_sum(&terms)
    };
    let mut sea = Vec::with_capacity(nz);
    let mut sky = Vec::with_capacity(nz);
    for i in 0..nz {
        sea.push(damping.extrapolate(column(i), column(nz + i)));
        sky.push(damping.extrapolate(column(2 * nz + i), column(3 * nz + i)));
    }
    Ok((sea, sky))
}

/// Change of the Dirac-sea density caused by the well, at position `z`.
pub fn rho_sea(well: &WellParameters, z: f64, reg: &RegulatorConfig) -> Result<f64> {
    Ok(continuum_profiles(well, &[z], reg)?.0[0])
}

/// Change of the Dirac-sky (positive continuum) density, at position `z`.
pub fn rho_sky(well: &WellParameters, z: f64, reg: &RegulatorConfig) -> Result<f64> {
    Ok(continuum_profiles(well, &[z], reg)?.1[0])
}

/// Bound-state density `Σ_i χ_i†χ_i` at `z`.
///
/// Fails with [`Error::FreeField`] for `eta = 0`; use
/// [`vacuum_density`] when the free field must be handled as zero.
pub fn rho_b(well: &WellParameters, z: f64) -> Result<f64> {
    let modes = bound_state_energies(well)?.modes();
    Ok(bound_density(&modes, z))
}

fn bound_density(modes: &[SpectralMode], z: f64) -> f64 {
    modes.iter().map(|m| m.density(z)).sum()
}

/// The free-vacuum density: `Σ_j ∫ dp/2π (ν₀†ν₀ − μ₀†μ₀)` at `z`.
pub fn free_vacuum_density(m: f64, z: f64, reg: &RegulatorConfig) -> Result<f64> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::invalid("m", format!("mass must be finite and > 0, got {m}")));
    }
    reg.validate()?;
    let (ps, ws) = momentum_rule(m, reg);
    let damping = Damping(reg.damping);
    let mut full = Vec::with_capacity(ps.len());
    let mut half = Vec::with_capacity(ps.len());
    for (&p, &w) in ps.iter().zip(&ws) {
        let mut integrand = 0.0;
        for parity in Parity::BOTH {
            integrand +=
                free_mode(m, p, parity, Branch::Sea)?.density(z) - free_mode(m, p, parity, Branch::Sky)?.density(z);
        }
        let (d_full, d_half) = damping.weights(p);
        full.push(w / (2.0 * PI) * d_full * integrand);
        half.push(w / (2.0 * PI) * d_half * integrand);
    }
    Ok(damping.extrapolate(pairwise_sum(&full), pairwise_sum(&half)))
}

/// Vacuum density with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VacuumDensity {
    /// `(rho_sea − rho_sky − rho_b) / 2`.
    pub value: f64,
    pub sea: f64,
    pub sky: f64,
    pub bound: f64,
}

impl VacuumDensity {
    /// `rho_sea + rho_sky + rho_b`, zero when positive and negative energy
    /// states balance.
    pub fn symmetry_residual(&self) -> f64 {
        self.sea + self.sky + self.bound
    }
}

/// Vacuum expectation of the charge density at each position.
pub fn vacuum_density_profile(well: &WellParameters, zs: &[f64], reg: &RegulatorConfig) -> Result<Vec<VacuumDensity>> {
    let (sea, sky) = continuum_profiles(well, zs, reg)?;
    let modes = if well.is_free() {
        Vec::new()
    } else {
        bound_state_energies(well)?.modes()
    };
    Ok(zs
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let bound = bound_density(&modes, z);
            VacuumDensity {
                value: 0.5 * (sea[i] - sky[i] - bound),
                sea: sea[i],
                sky: sky[i],
                bound,
            }
        })
        .collect())
}

pub fn vacuum_density(well: &WellParameters, z: f64, reg: &RegulatorConfig) -> Result<VacuumDensity> {
    Ok(vacuum_density_profile(well, &[z], reg)?[0])
}

/// Gauss–Legendre nodes and weights on `(-a/2, a/2)`.
pub fn well_rule(well: &WellParameters, z_nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let h = well.half_width();
    let order = z_nodes.clamp(1, PANEL_ORDER);
    let panels = (z_nodes / order).max(1);
    GaussLegendre::new(order).composite(&uniform_edges(-h, h, panels))
}

/// Well charge at one resolution: the integral of each density ingredient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSumCharge {
    /// Integral of `(rho_sea − rho_sky − rho_b) / 2`.
    pub value: f64,
    pub sea: f64,
    pub sky: f64,
    pub bound: f64,
}

pub fn mode_sum_breakdown(well: &WellParameters, reg: &RegulatorConfig) -> Result<ModeSumCharge> {
    let (zs, wz) = well_rule(well, reg.z_nodes);
    let profile = vacuum_density_profile(well, &zs, reg)?;
    let integrate = |f: &dyn Fn(&VacuumDensity) -> f64| -> f64 {
        let terms: Vec<f64> = profile.iter().zip(&wz).map(|(d, w)| w * f(d)).collect();
        pairwise_sum(&terms)
    };
    Ok(ModeSumCharge {
        value: integrate(&|d| d.value),
        sea: integrate(&|d| d.sea),
        sky: integrate(&|d| d.sky),
        bound: integrate(&|d| d.bound),
    })
}

/// Total mode-sum charge in `|z| < a/2`.
///
/// Evaluated at the given regulator and with cutoff and node count doubled;
/// the continuum tail falls off as `1/Λ²`, so the pair is combined as
/// `(4 Q(2Λ) − Q(Λ)) / 3`. The error estimate is `|Q(2Λ) − Q(Λ)|`.
pub fn total_charge_mode_sum(well: &WellParameters, reg: &RegulatorConfig) -> Result<ChargeReport> {
    well.require_subcritical()?;
    reg.validate()?;
    let digest = reg.digest().with("cutoff_richardson", 1.0);
    if well.is_free() {
        return Ok(ChargeReport::new(*well, 0.0, ChargeMethod::ModeSum, 0.0, digest));
    }
    let coarse = mode_sum_breakdown(well, reg)?.value;
    let fine = mode_sum_breakdown(well, &reg.doubled())?.value;
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(ChargeReport::new(
        *well,
        value,
        ChargeMethod::ModeSum,
        (fine - coarse).abs(),
        digest,
    ))
}
