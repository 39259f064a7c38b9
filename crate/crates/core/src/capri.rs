//! Point-split vacuum charge.
//!
//! The regular part of the point-split density is a principal-value integral
//! along the imaginary energy axis `E = iy`, with a simple pole at `E = 0`.
//! Inside the well the point-split density carries an additional constant
//! `eta/pi`, so the well charge is the contour integral plus `eta*a/pi`.
//!
//! Wavenumbers `k = sqrt(E² − m²)` and `k' = sqrt((E+η)² − m²)` are taken
//! with non-negative imaginary part. For `k` this is the decaying (physical)
//! sheet of the resolvent at every point of the contour. The integrands are
//! even in `k'`, so that choice only serves to keep `e^{2ik'a}` bounded:
//! `cos(k'a)` and `sin(k'a)` are never formed, only their ratios
//!
//! ```text
//! tan(k'a) = -i (q − 1)/(q + 1),              q = e^{2ik'a},
//! cos(2k'z)/cos(k'a) = (e^{ik'(a+2z)} + e^{ik'(a−2z)})/(1 + q),
//! ```
//!
//! and `Δ/cos(k'a) = k k' + i[m² − E(E+η)] tan(k'a)`.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChargeMethod, ChargeReport, SettingsDigest, WellParameters};
use crate::quadrature::{pv_quadrature, PvConfig};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Contour extent and principal-value settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Contour half-extent on the imaginary axis.
    pub y_max: f64,
    /// Nodes per half-contour.
    pub n_nodes: usize,
    /// Exclusion radius around `E = 0`.
    pub pv_delta: f64,
    /// Number of exclusion halvings used for the extrapolation.
    pub pv_richardson: usize,
    /// Largest acceptable extrapolation spread.
    pub tol: f64,
}

impl QuadratureConfig {
    /// Defaults for mass `m`: `y_max = 200 m`, 8192 nodes, exclusion
    /// `1e-4 m`, three halvings, tolerance `1e-4`.
    pub fn for_mass(m: f64) -> Self {
        Self {
            y_max: 200.0 * m,
            n_nodes: 8192,
            pv_delta: 1e-4 * m,
            pv_richardson: 3,
            tol: 1e-4,
        }
    }

    pub fn doubled(&self) -> Self {
        Self {
            y_max: 2.0 * self.y_max,
            n_nodes: 2 * self.n_nodes,
            ..*self
        }
    }

    pub fn validate(&self, m: f64) -> Result<()> {
        if !(self.y_max > m) || !self.y_max.is_finite() {
            return Err(Error::invalid(
                "y_max",
                format!("must exceed m = {m}, got {}", self.y_max),
            ));
        }
        if !(self.pv_delta > 0.0) || self.pv_delta >= self.y_max {
            return Err(Error::invalid(
                "pv_delta",
                format!("must lie in (0, y_max), got {}", self.pv_delta),
            ));
        }
        if self.n_nodes < 64 {
            return Err(Error::invalid(
                "n_nodes",
                format!("need at least 64 nodes, got {}", self.n_nodes),
            ));
        }
        if self.pv_richardson == 0 {
            return Err(Error::invalid("pv_richardson", "need at least one halving"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tol", "tolerance must be > 0"));
        }
        Ok(())
    }

    pub fn digest(&self) -> SettingsDigest {
        SettingsDigest::new()
            .with("y_max", self.y_max)
            .with("n_nodes", self.n_nodes as f64)
            .with("pv_delta", self.pv_delta)
            .with("pv_richardson", self.pv_richardson as f64)
            .with("tol", self.tol)
    }

    fn pv(&self) -> PvConfig {
        PvConfig {
            delta: self.pv_delta,
            halvings: self.pv_richardson,
            nodes: self.n_nodes,
            tol: self.tol,
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::for_mass(1.0)
    }
}

fn sqrt_upper(w: Complex64) -> Complex64 {
    let r = w.sqrt();
    if r.im < 0.0 {
        -r
    } else {
        r
    }
}

/// Quantities of the integrand at one contour point `E = iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub energy: Complex64,
    pub k: Complex64,
    pub kprime: Complex64,
    /// `m² − E(E + η)`.
    pub gap: Complex64,
    /// `e^{2ik'a}`, bounded by one in modulus.
    pub phase: Complex64,
    /// `Δ / cos(k'a)`.
    pub delta_over_cos: Complex64,
}

impl ContourPoint {
    pub fn new(well: &WellParameters, y: f64) -> Self {
        let m = well.m();
        let eta = well.eta();
        let a = well.a();
        let energy = Complex64::new(0.0, y);
        let k = sqrt_upper(energy * energy - m * m);
        let kprime = sqrt_upper((energy + eta) * (energy + eta) - m * m);
        let gap = m * m - energy * (energy + eta);
        let phase = (I * kprime * (2.0 * a)).exp();
        let delta_over_cos = k * kprime + I * gap * tan_from_phase(phase);
        Self {
            energy,
            k,
            kprime,
            gap,
            phase,
            delta_over_cos,
        }
    }

    pub fn tan_kprime_a(&self) -> Complex64 {
        tan_from_phase(self.phase)
    }

    /// `cos(2k'z) / cos(k'a)`.
    fn cos_ratio(&self, a: f64, z: f64) -> Complex64 {
        let left = (I * self.kprime * (a + 2.0 * z)).exp();
        let right = (I * self.kprime * (a - 2.0 * z)).exp();
        (left + right) / (1.0 + self.phase)
    }

    /// Density integrand with respect to `y` (the `dE = i dy` included).
    pub fn density_integrand(&self, well: &WellParameters, z: f64) -> Complex64 {
        let m = well.m();
        let eta = well.eta();
        let e = self.energy;
        let free = 1.0 / (e * self.gap);
        let bracket = eta * (e + eta) / self.gap - self.cos_ratio(well.a(), z);
        let bound = eta / (self.k * self.kprime * self.delta_over_cos) * bracket;
        I * (m * m / (2.0 * PI)) * self.k * (free + bound)
    }

    /// Integrand of the well charge with respect to `y`.
    pub fn charge_integrand(&self, well: &WellParameters) -> Complex64 {
        let m = well.m();
        let eta = well.eta();
        let a = well.a();
        let e = self.energy;
        let kk = self.k * self.kprime;
        let first = self.k * a * (1.0 / (e * self.gap) + eta * eta * (e + eta) / (kk * self.delta_over_cos * self.gap));
        let second = eta * self.tan_kprime_a() / (self.kprime * self.kprime * self.delta_over_cos);
        I * (m * m / (2.0 * PI)) * (first - second)
    }
}

fn tan_from_phase(q: Complex64) -> Complex64 {
    -I * (q - 1.0) / (q + 1.0)
}

/// Smallest moduli of the denominators met on the quadrature nodes.
const SINGULAR_FLOOR: f64 = 1e-6;

/// Outcome of one contour integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourResult {
    pub value: f64,
    /// Imaginary part of the integral, zero up to rounding.
    pub imag_residue: f64,
    pub spread: f64,
    /// Geometric estimate of `∫_{|y| > y_max}`, already included in `value`.
    pub tail: f64,
    pub error_estimate: f64,
    pub delta: f64,
}

fn contour_integral<F>(well: &WellParameters, quad: &QuadratureConfig, integrand: F) -> Result<ContourResult>
where
    F: Fn(&ContourPoint) -> Complex64,
{
    well.require_subcritical()?;
    quad.validate(well.m())?;
    let min_delta = Cell::new(f64::INFINITY);
    let min_gap = Cell::new(f64::INFINITY);
    let f = |y: f64| {
        let point = ContourPoint::new(well, y);
        min_delta.set(min_delta.get().min(point.delta_over_cos.norm()));
        min_gap.set(min_gap.get().min(point.gap.norm()));
        integrand(&point)
    };
    let pv = pv_quadrature(f, -quad.y_max, quad.y_max, 0.0, &quad.pv())?;
    if min_delta.get() < SINGULAR_FLOOR || min_gap.get() < SINGULAR_FLOOR {
        return Err(Error::SingularContour(format!(
            "min |Δ/cos(k'a)| = {:e}, min |m² − E(E+η)| = {:e} on the nodes",
            min_delta.get(),
            min_gap.get()
        )));
    }
    // the folded integrand decays as a power of y; sum the geometric series of octaves
    let [inner, outer] = pv.outer_octaves;
    let ratio = outer.re / inner.re;
    let tail = if ratio.is_finite() && ratio > 0.0 && ratio < 0.5 {
        outer.re * ratio / (1.0 - ratio)
    } else {
        0.0
    };
    let value = pv.value.re + tail;
    let tail_error = if tail == 0.0 { outer.re.abs() } else { tail.abs() };
    Ok(ContourResult {
        value,
        imag_residue: pv.value.im,
        spread: pv.spread,
        tail,
        error_estimate: pv.spread + tail_error,
        delta: pv.delta,
    })
}

fn check_interior(well: &WellParameters, z: f64) -> Result<()> {
    if !(z.abs() < well.half_width()) {
        return Err(Error::OutOfRegion {
            z,
            half_width: well.half_width(),
        });
    }
    Ok(())
}

/// Regular part of the point-split density at `z`, `|z| < a/2`.
pub fn capri_density_detailed(well: &WellParameters, z: f64, quad: &QuadratureConfig) -> Result<ContourResult> {
    check_interior(well, z)?;
    contour_integral(well, quad, |p| p.density_integrand(well, z))
}

pub fn capri_density(well: &WellParameters, z: f64, quad: &QuadratureConfig) -> Result<f64> {
    Ok(capri_density_detailed(well, z, quad)?.value)
}

/// [`capri_density`] on many positions, evaluated in parallel.
pub fn capri_density_profile(well: &WellParameters, zs: &[f64], quad: &QuadratureConfig) -> Result<Vec<f64>> {
    zs.par_iter().map(|&z| capri_density(well, z, quad)).collect()
}

/// Contour form of the well charge, without the point-split correction.
pub fn capri_charge_detailed(well: &WellParameters, quad: &QuadratureConfig) -> Result<ContourResult> {
    contour_integral(well, quad, |p| p.charge_integrand(well))
}

pub fn capri_charge_integral(well: &WellParameters, quad: &QuadratureConfig) -> Result<ChargeReport> {
    let r = capri_charge_detailed(well, quad)?;
    let digest = quad
        .digest()
        .with("pv_delta_effective", r.delta)
        .with("tail", r.tail)
        .with("imag_residue", r.imag_residue);
    Ok(ChargeReport::new(
        *well,
        r.value,
        ChargeMethod::PointSplitContour,
        r.error_estimate,
        digest,
    ))
}

/// Point-split correction to the density inside the well: `eta/pi`.
pub fn delta_rho(well: &WellParameters, z: f64) -> Result<f64> {
    check_interior(well, z)?;
    Ok(well.eta() / PI)
}

/// Point-split well charge `Q' = Q + eta*a/pi`.
pub fn total_charge_point_split(well: &WellParameters, quad: &QuadratureConfig) -> Result<ChargeReport> {
    ChargeReport::point_split_composite(&capri_charge_integral(well, quad)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_well;

    #[test]
    fn free_field_contour_vanishes() {
        let well = validate_well(1.0, 1.0, 0.0).unwrap();
        let quad = QuadratureConfig::default();
        for z in [0.0, 0.3, -0.45] {
            assert!(capri_density(&well, z, &quad).unwrap().abs() < quad.tol);
        }
        assert!(capri_charge_integral(&well, &quad).unwrap().value.abs() < quad.tol);
    }

    #[test]
    fn density_is_even_in_z() {
        let well = validate_well(1.0, 1.0, 1.0).unwrap();
        let quad = QuadratureConfig::default();
        for z in [0.1, 0.25, 0.49] {
            let d = capri_density(&well, z, &quad).unwrap() - capri_density(&well, -z, &quad).unwrap();
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn density_self_converges() {
        let well = validate_well(1.0, 1.0, 1.0).unwrap();
        let quad = QuadratureConfig::default();
        let base = capri_density(&well, 0.0, &quad).unwrap();
        let fine = capri_density(
            &well,
            0.0,
            &QuadratureConfig {
                n_nodes: 4 * quad.n_nodes,
                ..quad
            },
        )
        .unwrap();
        assert!((base - fine).abs() < 1e-4);
    }

    #[test]
    fn out_of_region_and_regime_errors() {
        let well = validate_well(1.0, 1.0, 0.5).unwrap();
        let quad = QuadratureConfig::default();
        assert!(matches!(
            capri_density(&well, 0.5, &quad),
            Err(Error::OutOfRegion { .. })
        ));
        assert!(matches!(delta_rho(&well, -0.7), Err(Error::OutOfRegion { .. })));
        let deep = validate_well(1.0, 1.0, 1.1).unwrap();
        assert!(matches!(capri_charge_integral(&deep, &quad), Err(Error::Regime(_))));
        let bad = QuadratureConfig { n_nodes: 10, ..quad };
        assert!(capri_charge_integral(&well, &bad).is_err());
    }

    #[test]
    fn delta_rho_values() {
        let w1 = validate_well(1.0, 1.0, 1.0).unwrap();
        assert!((delta_rho(&w1, 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        let w0 = validate_well(1.0, 1.0, 0.0).unwrap();
        assert_eq!(delta_rho(&w0, 0.2).unwrap(), 0.0);
        let wh = validate_well(1.0, 1.0, 0.5).unwrap();
        assert!((delta_rho(&wh, -0.49).unwrap() - 0.159_154_943_091_895_3).abs() < 1e-15);
    }

    #[test]
    fn contour_results_are_real() {
        let well = validate_well(1.0, 5.0, 0.5).unwrap();
        let r = capri_charge_detailed(&well, &QuadratureConfig::default()).unwrap();
        assert!(r.imag_residue.abs() <= 1e-10 * r.value.abs());
    }

    #[test]
    fn published_contour_rows() {
        let quad = QuadratureConfig::default();
        for (a, eta, published, tol) in [
            (1.0, 0.5, -0.103, 0.002),
            (10.0, 0.1, -0.306, 0.002),
            (5.0, 1.0, -1.46, 0.005),
        ] {
            let well = validate_well(1.0, a, eta).unwrap();
            let q = capri_charge_integral(&well, &quad).unwrap();
            assert!((q.value - published).abs() < tol, "a={a} eta={eta}: {}", q.value);
        }
        for (a, eta, published, tol) in [
            (1.0, 1.0, 0.115, 0.005),
            (5.0, 0.1, 0.012, 0.002),
            (10.0, 0.5, 0.063, 0.002),
        ] {
            let well = validate_well(1.0, a, eta).unwrap();
            let q = total_charge_point_split(&well, &quad).unwrap();
            assert!((q.value - published).abs() < tol, "a={a} eta={eta}: {}", q.value);
        }
    }
}
