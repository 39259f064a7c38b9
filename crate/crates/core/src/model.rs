//! Physical configuration and shared result records.
//!
//! Natural units (ħ = c = 1) are used everywhere. Charges are electron
//! numbers: no factor of the elementary charge is ever applied.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Square-well configuration: electron mass `m`, well width `a` and depth `eta`.
///
/// The potential is `-eta` for `|z| < a/2` and zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellParameters {
    m: f64,
    a: f64,
    eta: f64,
}

impl WellParameters {
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.a
    }

    /// True when `eta <= m`: the spectrum then has no negative-energy bound states.
    pub fn no_negative_bound_states(&self) -> bool {
        self.eta <= self.m
    }

    pub fn is_free(&self) -> bool {
        self.eta == 0.0
    }

    /// Potential energy at position `z`.
    pub fn potential(&self, z: f64) -> f64 {
        if z.abs() < self.half_width() {
            -self.eta
        } else {
            0.0
        }
    }

    /// Same well with a different depth.
    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        validate_well(self.m, self.a, eta)
    }

    /// Rejects `eta > m`, the regime the charge formulas do not cover.
    pub fn require_subcritical(&self) -> Result<()> {
        if self.no_negative_bound_states() {
            Ok(())
        } else {
            Err(Error::Regime(format!(
                "eta = {} exceeds m = {}; only 0 <= eta <= m is supported",
                self.eta, self.m
            )))
        }
    }

    /// The charge added by the point-split correction over the well, `eta*a/pi`.
    pub fn point_split_shift(&self) -> f64 {
        self.eta * self.a / PI
    }
}

/// Checks a parameter triple and builds a [`WellParameters`].
///
/// `eta > m` is accepted here; downstream operations refuse it.
pub fn validate_well(m: f64, a: f64, eta: f64) -> Result<WellParameters> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::invalid("m", format!("mass must be finite and > 0, got {m}")));
    }
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::invalid("a", format!("width must be finite and > 0, got {a}")));
    }
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::invalid(
            "eta",
            format!("depth must be finite and >= 0, got {eta}"),
        ));
    }
    Ok(WellParameters { m, a, eta })
}

/// How a charge or density was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ChargeMethod {
    /// Mode sum over sea, sky and bound states without point splitting.
    #[serde(rename = "mode-sum")]
    ModeSum,
    /// Principal-value contour integral along the imaginary energy axis.
    #[serde(rename = "contour")]
    PointSplitContour,
    /// Contour result plus the point-split correction `eta/pi` per unit length.
    #[serde(rename = "point-split")]
    PointSplitComposite,
}

impl ChargeMethod {
    pub fn label(&self) -> &'static str {
        match self {
            ChargeMethod::ModeSum => "mode-sum",
            ChargeMethod::PointSplitContour => "contour",
            ChargeMethod::PointSplitComposite => "point-split",
        }
    }
}

impl std::fmt::Display for ChargeMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Record of the numeric knobs used for a result.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SettingsDigest(BTreeMap<String, f64>);

impl SettingsDigest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.0.insert(key.to_owned(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn merged(mut self, other: &SettingsDigest) -> Self {
        for (k, v) in other.iter() {
            self.0.insert(k.to_owned(), v);
        }
        self
    }
}

/// Total charge in the well region `|z| < a/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeReport {
    pub well: WellParameters,
    pub value: f64,
    pub method: ChargeMethod,
    pub error_estimate: f64,
    pub settings_digest: SettingsDigest,
}

impl ChargeReport {
    pub fn new(
        well: WellParameters,
        value: f64,
        method: ChargeMethod,
        error_estimate: f64,
        settings_digest: SettingsDigest,
    ) -> Self {
        debug_assert!(error_estimate >= 0.0);
        Self {
            well,
            value,
            method,
            error_estimate: error_estimate.abs(),
            settings_digest,
        }
    }

    /// Builds the point-split charge `Q' = Q + eta*a/pi` from a contour report.
    pub fn point_split_composite(contour: &ChargeReport) -> Result<ChargeReport> {
        if contour.method != ChargeMethod::PointSplitContour {
            return Err(Error::invalid(
                "method",
                format!("composite needs a contour report, got {}", contour.method),
            ));
        }
        let well = contour.well;
        Ok(ChargeReport {
            well,
            value: contour.value + well.point_split_shift(),
            method: ChargeMethod::PointSplitComposite,
            error_estimate: contour.error_estimate,
            settings_digest: contour.settings_digest.clone(),
        })
    }
}

/// Charge density sampled on an increasing grid of positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeProfile {
    positions: Vec<f64>,
    densities: Vec<f64>,
    method: ChargeMethod,
    well: WellParameters,
}

impl ChargeProfile {
    pub fn new(positions: Vec<f64>, densities: Vec<f64>, method: ChargeMethod, well: WellParameters) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::invalid("positions", "profile grid is empty"));
        }
        if positions.len() != densities.len() {
            return Err(Error::invalid(
                "densities",
                format!("{} densities for {} positions", densities.len(), positions.len()),
            ));
        }
        if positions.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("positions", "grid must be strictly increasing"));
        }
        if let Some(i) = densities.iter().position(|d| !d.is_finite()) {
            return Err(Error::invalid(
                "densities",
                format!("non-finite density at z = {}", positions[i]),
            ));
        }
        Ok(Self {
            positions,
            densities,
            method,
            well,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn method(&self) -> ChargeMethod {
        self.method
    }

    pub fn well(&self) -> &WellParameters {
        &self.well
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}
