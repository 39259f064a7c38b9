//! Eigenmodes of `H = -iσ₁ d/dz + mσ₃ + V(z)` for the square well.
//!
//! Writing the spinor as `ψ = (u, i v)` with real `u`, `v` turns the Dirac
//! equation into the real system
//!
//! ```text
//! u' = -(W + m) v,    v' = (W - m) u,    W = E - V,
//! ```
//!
//! whose propagator over a constant-potential stretch of length `z` is
//! `C(z) 1 + S(z) M` with `C = cos(kz)`, `S = sin(kz)/k` and `k² = W² - m²`
//! (continued to `cosh`/`sinh` when `k² < 0`). Both are entire in `k²`, so
//! thresholds need no special casing.
//!
//! Modes are labelled by parity under `ψ(z) → σ₃ψ(-z)`: even modes have `u`
//! even and `v` odd, odd modes the reverse. Continuum modes are
//! delta-normalized against `dp/2π` so that, for the free field, the two
//! parities together carry density exactly 2 at every `z`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::WellParameters;
use crate::quadrature::{first_derivative_weights, uniform_edges, GaussLegendre};

/// Spectral branch of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Positive-energy continuum, `E >= m`.
    Sky,
    /// Negative-energy continuum, `E <= -m`.
    Sea,
    /// Positive-energy bound state, `0 < E < m`.
    Bound,
}

/// Degeneracy label of the continuum (and the symmetry class of bound states).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];
}

/// `(cos(kz), sin(kz)/k)` as entire functions of `k²`.
pub(crate) fn cos_sinc(k2: f64, z: f64) -> (f64, f64) {
    let x = k2 * z * z;
    if x.abs() < 1e-3 {
        // Taylor series in x; eight terms are far below rounding for |x| < 1e-3
        let (mut c, mut s) = (0.0, 0.0);
        let (mut tc, mut ts) = (1.0, 1.0);
        for n in 0..8 {
            c += tc;
            s += ts;
            let nf = n as f64;
            tc *= -x / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0));
            ts *= -x / ((2.0 * nf + 2.0) * (2.0 * nf + 3.0));
        }
        (c, s * z)
    } else if k2 > 0.0 {
        let k = k2.sqrt();
        let (sn, cs) = (k * z).sin_cos();
        (cs, sn / k)
    } else {
        let kappa = (-k2).sqrt();
        ((kappa * z).cosh(), (kappa * z).sinh() / kappa)
    }
}

/// Solution started at the origin with definite parity, before scaling.
fn origin_solution(w: f64, m: f64, parity: Parity, z: f64) -> (f64, f64) {
    let (c, s) = cos_sinc(w * w - m * m, z);
    match parity {
        Parity::Even => (c, (w - m) * s),
        Parity::Odd => ((w + m) * s, -c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Exterior {
    /// Same constant potential everywhere (free field).
    None,
    /// Oscillating continuation with `k² = E² - m² > 0`.
    Oscillating,
    /// `e^{-κ ζ}` decay of a bound state.
    Decaying { kappa: f64 },
}

/// One eigensolution of the square-well Dirac equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    branch: Branch,
    energy: f64,
    momentum: Option<f64>,
    parity: Parity,
    m: f64,
    depth: f64,
    half_width: f64,
    exterior: Exterior,
    scale: f64,
    edge: (f64, f64),
}

impl SpectralMode {
    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Exterior momentum `p1` (continuum modes only).
    pub fn momentum(&self) -> Option<f64> {
        self.momentum
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Interior wavenumber squared, `(E + eta)² - m²`.
    pub fn interior_k2(&self) -> f64 {
        let w = self.energy + self.depth;
        w * w - self.m * self.m
    }

    /// Real pair `(u, v)` with `ψ = (u, i v)`.
    pub fn components(&self, z: f64) -> (f64, f64) {
        let t = z.abs();
        let (u, v) = if t <= self.half_width {
            origin_solution(self.energy + self.depth, self.m, self.parity, t)
        } else {
            let zeta = t - self.half_width;
            let (u0, v0) = self.edge;
            match self.exterior {
                Exterior::None => unreachable!("free modes have no exterior"),
                Exterior::Oscillating => {
                    let e = self.energy;
                    let (c, s) = cos_sinc(e * e - self.m * self.m, zeta);
                    (c * u0 - (e + self.m) * s * v0, (e - self.m) * s * u0 + c * v0)
                }
                Exterior::Decaying { kappa } => {
                    let decay = (-kappa * zeta).exp();
                    (u0 * decay, u0 * kappa / (self.energy + self.m) * decay)
                }
            }
        };
        let (u, v) = (self.scale * u, self.scale * v);
        match (self.parity, z < 0.0) {
            (_, false) => (u, v),
            (Parity::Even, true) => (u, -v),
            (Parity::Odd, true) => (-u, v),
        }
    }

    /// The two spinor components at `z`.
    pub fn spinor(&self, z: f64) -> [Complex64; 2] {
        let (u, v) = self.components(z);
        [Complex64::new(u, 0.0), Complex64::new(0.0, v)]
    }

    /// `ψ†ψ` at `z`.
    pub fn density(&self, z: f64) -> f64 {
        let (u, v) = self.components(z);
        u * u + v * v
    }
}

fn check_momentum(p1: f64, allow_zero: bool) -> Result<()> {
    if !p1.is_finite() || p1 < 0.0 || (!allow_zero && p1 == 0.0) {
        let need = if allow_zero { ">= 0" } else { "> 0" };
        return Err(Error::invalid(
            "p1",
            format!("momentum must be finite and {need}, got {p1}"),
        ));
    }
    Ok(())
}

fn continuum_energy(m: f64, p1: f64, branch: Branch) -> Result<f64> {
    let e = (p1 * p1 + m * m).sqrt();
    match branch {
        Branch::Sky => Ok(e),
        Branch::Sea => Ok(-e),
        Branch::Bound => Err(Error::invalid("branch", "continuum modes are sky or sea")),
    }
}

/// Free plane-wave mode with `E = ±sqrt(p1² + m²)`.
pub fn free_mode(m: f64, p1: f64, parity: Parity, branch: Branch) -> Result<SpectralMode> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::invalid("m", format!("mass must be finite and > 0, got {m}")));
    }
    check_momentum(p1, true)?;
    let energy = continuum_energy(m, p1, branch)?;
    // amplitudes sqrt((E ± m)/E) keep p1 = 0 regular on both branches
    let ratio = match parity {
        Parity::Even => (energy + m) / energy,
        Parity::Odd => (energy - m) / energy,
    };
    Ok(SpectralMode {
        branch,
        energy,
        momentum: Some(p1),
        parity,
        m,
        depth: 0.0,
        half_width: f64::INFINITY,
        exterior: Exterior::None,
        scale: ratio.max(0.0).sqrt(),
        edge: (0.0, 0.0),
    })
}

/// Scattering mode of the well: interior wavenumber `sqrt((E+eta)² - m²)`,
/// exterior momentum `p1`, both components continuous at `±a/2`.
pub fn scattering_mode(well: &WellParameters, p1: f64, parity: Parity, branch: Branch) -> Result<SpectralMode> {
    well.require_subcritical()?;
    check_momentum(p1, false)?;
    let m = well.m();
    let energy = continuum_energy(m, p1, branch)?;
    let h = well.half_width();
    let (u0, v0) = origin_solution(energy + well.eta(), m, parity, h);
    // (E - m) u² + (E + m) v² is conserved outside; it fixes the asymptotic amplitude
    let invariant = (energy - m) * u0 * u0 + (energy + m) * v0 * v0;
    let scale = p1 / (energy * invariant).sqrt();
    Ok(SpectralMode {
        branch,
        energy,
        momentum: Some(p1),
        parity,
        m,
        depth: well.eta(),
        half_width: h,
        exterior: Exterior::Oscillating,
        scale,
        edge: (u0, v0),
    })
}

/// Matching function whose zeros in `(0, m)` are the bound-state energies
/// of the given parity: the interior solution at `a/2` must be parallel to
/// the decaying exterior solution `(1, κ/(E + m))`.
pub fn bound_matching(well: &WellParameters, energy: f64, parity: Parity) -> f64 {
    let m = well.m();
    let (u0, v0) = origin_solution(energy + well.eta(), m, parity, well.half_width());
    let kappa = (m * m - energy * energy).max(0.0).sqrt();
    (energy + m) * v0 - kappa * u0
}

/// Number of uniform scan intervals used to bracket bound-state roots.
pub const BOUND_SCAN_INTERVALS: usize = 2048;

/// A bound state: energy and parity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub energy: f64,
    pub parity: Parity,
}

/// Positive-energy bound states of a well, ordered by energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundStateSet {
    pub well: WellParameters,
    states: Vec<BoundState>,
}

impl BoundStateSet {
    pub fn states(&self) -> &[BoundState] {
        &self.states
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Unit-normalized eigenmodes, one per bound state.
    pub fn modes(&self) -> Vec<SpectralMode> {
        self.states
            .iter()
            .map(|s| bound_mode(&self.well, s.energy, s.parity))
            .collect()
    }
}

/// Bound-state energies in `(0, m)`, bracketed on a uniform scan and refined
/// by bisection to `1e-12` relative.
pub fn bound_state_energies(well: &WellParameters) -> Result<BoundStateSet> {
    bound_state_energies_with(well, BOUND_SCAN_INTERVALS)
}

pub fn bound_state_energies_with(well: &WellParameters, intervals: usize) -> Result<BoundStateSet> {
    if well.is_free() {
        return Err(Error::FreeField);
    }
    well.require_subcritical()?;
    let m = well.m();
    let n = intervals.max(2);
    let mut states = Vec::new();
    for parity in Parity::BOTH {
        let f = |e: f64| bound_matching(well, e, parity);
        let mut prev_e = 0.0;
        let mut prev_f = f(prev_e);
        for i in 1..=n {
            let e = m * i as f64 / n as f64;
            let fe = f(e);
            if prev_f == 0.0 && prev_e > 0.0 {
                states.push(BoundState { energy: prev_e, parity });
            } else if prev_f * fe < 0.0 {
                let root = bisect(&f, prev_e, e, prev_f);
                if root > 0.0 && root < m {
                    states.push(BoundState { energy: root, parity });
                }
            }
            prev_e = e;
            prev_f = fe;
        }
    }
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(BoundStateSet { well: *well, states })
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * mid.abs() || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn bound_mode(well: &WellParameters, energy: f64, parity: Parity) -> SpectralMode {
    let m = well.m();
    let h = well.half_width();
    let w = energy + well.eta();
    let kappa = (m * m - energy * energy).sqrt();
    let (u0, _) = origin_solution(w, m, parity, h);

    // interior norm on panels fine enough for the interior oscillation
    let k = (w * w - m * m).abs().sqrt();
    let panels = ((k * h).ceil() as usize).max(1);
    let rule = GaussLegendre::new(24);
    let interior: f64 = rule.integrate_panels(
        |z| {
            let (u, v) = origin_solution(w, m, parity, z);
            u * u + v * v
        },
        &uniform_edges(0.0, h, panels),
    );
    let v_edge = u0 * kappa / (energy + m);
    let exterior = (u0 * u0 + v_edge * v_edge) / (2.0 * kappa);
    let norm = 2.0 * (interior + exterior);

    SpectralMode {
        branch: Branch::Bound,
        energy,
        momentum: None,
        parity,
        m,
        depth: well.eta(),
        half_width: h,
        exterior: Exterior::Decaying { kappa },
        scale: 1.0 / norm.sqrt(),
        edge: (u0, v_edge),
    }
}

/// Step of the finite-difference stencil used by [`mode_residual`].
pub const RESIDUAL_STEP: f64 = 1e-3;
const STENCIL_HALF: i32 = 4;

/// `max_z ‖(H₀ + V − E)ψ(z)‖` with `∂/∂z` from eighth-order finite
/// differences; stencils switch to one-sided near `±a/2` so they never
/// straddle the potential jump. Points exactly at `±a/2` count as interior.
pub fn mode_residual(mode: &SpectralMode, well: &WellParameters, z_grid: &[f64]) -> f64 {
    spinor_residual(|z| mode.components(z), mode.m, mode.energy(), well, z_grid)
}

/// Residual instrument for an arbitrary spinor `ψ = (u, i v)` given as the
/// real pair `components(z) = (u, v)`.
pub fn spinor_residual<F>(components: F, m: f64, energy: f64, well: &WellParameters, z_grid: &[f64]) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let h = well.half_width();
    let inside = |z: f64| z.abs() <= h;
    z_grid
        .iter()
        .map(|&z| {
            let region = inside(z);
            let central: Vec<i32> = (-STENCIL_HALF..=STENCIL_HALF).collect();
            let offsets: Vec<i32> = if central.iter().all(|&j| inside(z + j as f64 * RESIDUAL_STEP) == region) {
                central
            } else if (region && z > 0.0) || (!region && z < 0.0) {
                (-2 * STENCIL_HALF..=0).collect()
            } else {
                (0..=2 * STENCIL_HALF).collect()
            };
            let xs: Vec<f64> = offsets.iter().map(|&j| z + j as f64 * RESIDUAL_STEP).collect();
            let weights = first_derivative_weights(z, &xs);
            let (mut du, mut dv) = (0.0, 0.0);
            for (&x, &wt) in xs.iter().zip(&weights) {
                let (u, v) = components(x);
                du += wt * u;
                dv += wt * v;
            }
            let (u, v) = components(z);
            let pot = if region { -well.eta() } else { 0.0 };
            // ψ = (u, i v): first row is real, second is i times a real number
            let r1 = dv + (m + pot - energy) * u;
            let r2 = du + (m - pot + energy) * v;
            (r1 * r1 + r2 * r2).sqrt()
        })
        .fold(0.0, f64::max)
}
