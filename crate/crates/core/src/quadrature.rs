//! Quadrature building blocks: Gauss–Legendre panels, fixed-order
//! summation, Richardson tables and a principal-value integrator.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be summed, scaled and compared by magnitude.
pub trait Accumulate: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Accumulate for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Accumulate for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Pairwise (cascade) summation in a fixed order, so results do not depend
/// on how the terms were produced.
pub fn pairwise_sum<T: Accumulate>(terms: &[T]) -> T {
    match terms.len() {
        0 => T::zero(),
        1 => terms[0],
        n if n <= 8 => terms[1..].iter().fold(terms[0], |acc, &t| acc + t),
        n => {
            let (lo, hi) = terms.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<T: Accumulate, F: Fn(f64) -> T>(&self, f: F, lo: f64, hi: f64) -> T {
        let terms: Vec<T> = self.mapped(lo, hi).map(|(x, w)| f(x) * w).collect();
        pairwise_sum(&terms)
    }

    /// Composite rule over consecutive panels given by `edges`.
    pub fn integrate_panels<T: Accumulate, F: Fn(f64) -> T>(&self, f: F, edges: &[f64]) -> T {
        let terms: Vec<T> = edges.windows(2).map(|e| self.integrate(&f, e[0], e[1])).collect();
        pairwise_sum(&terms)
    }

    /// Composite nodes and weights over `edges`, in increasing order.
    pub fn composite(&self, edges: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(self.order() * edges.len());
        let mut ws = Vec::with_capacity(self.order() * edges.len());
        for e in edges.windows(2) {
            for (x, w) in self.mapped(e[0], e[1]) {
                xs.push(x);
                ws.push(w);
            }
        }
        (xs, ws)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n` equal panels between `lo` and `hi` (returns `n + 1` edges).
pub fn uniform_edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / n as f64
            }
        })
        .collect()
}

/// Richardson table for a sequence computed at steps `h, h/2, h/4, ...`
/// whose error expands in the given powers of `h`.
///
/// Returns the diagonal of the table; the last entry is the best estimate.
pub fn richardson_diagonal<T: Accumulate>(sequence: &[T], powers: &[i32]) -> Vec<T> {
    assert!(!sequence.is_empty());
    let mut row: Vec<T> = vec![sequence[0]];
    let mut diagonal = vec![sequence[0]];
    for (j, &s) in sequence.iter().enumerate().skip(1) {
        let mut next = vec![s];
        for k in 1..=j {
            let p = powers[(k - 1).min(powers.len() - 1)];
            let factor = 2f64.powi(p) - 1.0;
            let improved = next[k - 1] + (next[k - 1] - row[k - 1]) * (1.0 / factor);
            next.push(improved);
        }
        diagonal.push(next[j]);
        row = next;
    }
    diagonal
}

/// Settings for [`pv_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvConfig {
    /// Initial half-width of the excluded interval around the pole.
    pub delta: f64,
    /// Number of times the exclusion is halved for the extrapolation.
    pub halvings: usize,
    /// Node budget for the symmetric part around the pole.
    pub nodes: usize,
    /// Largest acceptable spread between the last two extrapolants.
    pub tol: f64,
}

impl Default for PvConfig {
    fn default() -> Self {
        Self {
            delta: 1e-4,
            halvings: 3,
            nodes: 8192,
            tol: 1e-4,
        }
    }
}

/// Result of a principal-value integral.
#[derive(Debug, Clone)]
pub struct PvEstimate<T> {
    pub value: T,
    /// `|last extrapolant - previous extrapolant|`.
    pub spread: f64,
    /// Exclusion half-width actually used for the first estimate.
    pub delta: f64,
    /// Paired contributions of the two outermost octaves `[r/4, r/2]` and
    /// `[r/2, r]` of the symmetric region of half-width `r`.
    pub outer_octaves: [T; 2],
    pub extrapolants: Vec<T>,
}

const PANEL_ORDER: usize = 16;

/// Principal value of `∫_lo^hi f(x) dx` for `f` with at most a simple pole at `pole`.
///
/// The symmetric region `[pole - r, pole + r]` is folded onto
/// `g(t) = f(pole + t) + f(pole - t)`, which is regular, and integrated over
/// octaves `[r 2^-(k+1), r 2^-k]` down to the exclusion radius. The
/// exclusion is then halved `halvings` times and the sequence extrapolated
/// to zero radius (error terms odd in the radius). Whatever lies outside
/// the symmetric region is integrated as an ordinary integral.
pub fn pv_quadrature<T, F>(f: F, lo: f64, hi: f64, pole: f64, cfg: &PvConfig) -> Result<PvEstimate<T>>
where
    T: Accumulate,
    F: Fn(f64) -> T,
{
    if !(lo < pole && pole < hi) {
        return Err(Error::invalid(
            "pole",
            format!("pole {pole} must lie strictly inside ({lo}, {hi})"),
        ));
    }
    if !(cfg.delta > 0.0) {
        return Err(Error::invalid("pv_delta", "exclusion radius must be > 0"));
    }
    if cfg.halvings == 0 {
        return Err(Error::invalid("pv_richardson", "need at least one halving"));
    }
    let r = (pole - lo).min(hi - pole);
    let octaves = ((r / cfg.delta).log2().ceil() as usize).max(2);
    let delta = r / 2f64.powi(octaves as i32);
    let sub = (cfg.nodes / (octaves * PANEL_ORDER)).max(1);
    let rule = GaussLegendre::new(PANEL_ORDER);
    let folded = |t: f64| f(pole + t) + f(pole - t);
    let octave = |k: usize| {
        let top = r / 2f64.powi(k as i32);
        rule.integrate_panels(folded, &uniform_edges(0.5 * top, top, sub))
    };

    // innermost first so the base sum has a fixed, size-ordered layout
    let contributions: Vec<T> = (0..octaves).rev().map(octave).collect();
    let mut running = pairwise_sum(&contributions);

    let mut rest = Vec::new();
    if pole - r > lo {
        let len = pole - r - lo;
        let n = sub * ((len / r).ceil() as usize).max(1);
        rest.push(rule.integrate_panels(&f, &uniform_edges(lo, pole - r, n)));
    }
    if pole + r < hi {
        let len = hi - pole - r;
        let n = sub * ((len / r).ceil() as usize).max(1);
        rest.push(rule.integrate_panels(&f, &uniform_edges(pole + r, hi, n)));
    }
    let regular = pairwise_sum(&rest);

    let mut sequence = vec![running + regular];
    for j in 0..cfg.halvings {
        running = running + octave(octaves + j);
        sequence.push(running + regular);
    }
    let extrapolants = richardson_diagonal(&sequence, &[1, 3, 5, 7, 9]);
    let n = extrapolants.len();
    let value = extrapolants[n - 1];
    let spread = (extrapolants[n - 1] - extrapolants[n - 2]).magnitude();
    if !(spread <= cfg.tol) {
        return Err(Error::NonConvergence {
            what: "principal-value extrapolation".into(),
            spread,
            tol: cfg.tol,
        });
    }
    // contributions are innermost first
    let outer_octaves = [contributions[octaves - 2], contributions[octaves - 1]];
    Ok(PvEstimate {
        value,
        spread,
        delta,
        outer_octaves,
        extrapolants,
    })
}

/// Finite-difference weights for the first derivative at `x0` using the
/// stencil points `xs` (Fornberg's recursion).
pub fn first_derivative_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // c[j][k]: weight of point j for derivative order k (k = 0, 1)
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}
