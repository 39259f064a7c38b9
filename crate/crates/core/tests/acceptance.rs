//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vacuum_charge::capri::{capri_charge_integral, total_charge_point_split, QuadratureConfig};
use vacuum_charge::casimir::{casimir_energy_adiabatic, RampSpec};
use vacuum_charge::mode_sum::{free_vacuum_density, total_charge_mode_sum, vacuum_density_profile, RegulatorConfig};
use vacuum_charge::quadrature::{pv_quadrature, PvConfig};
use vacuum_charge::report::{TABLE_1, TABLE_2};
use vacuum_charge::spectrum::{bound_state_energies, mode_residual, scattering_mode, Branch, Parity};
use vacuum_charge::{validate_well, ChargeMethod, WellParameters};

const GRID: [(f64, f64); 9] = [
    (1.0, 0.1),
    (1.0, 0.5),
    (1.0, 1.0),
    (5.0, 0.1),
    (5.0, 0.5),
    (5.0, 1.0),
    (10.0, 0.1),
    (10.0, 0.5),
    (10.0, 1.0),
];

type Criterion = (&'static str, fn() -> Outcome);
type PvCase = (&'static str, fn(f64) -> f64, f64, f64, f64, f64, f64);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn well(a: f64, eta: f64) -> WellParameters {
    validate_well(1.0, a, eta).unwrap()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn table_1() -> Outcome {
    let quad = QuadratureConfig::default();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut failed = Vec::new();
    for row in &TABLE_1 {
        let start = Instant::now();
        let q = capri_charge_integral(&well(row.a, row.eta), &quad);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        match q {
            Ok(q) => {
                let dev = (q.value - row.value).abs();
                worst = worst.max(dev / row.tolerance);
                if dev > row.tolerance || elapsed > Duration::from_secs(10) {
                    failed.push(format!("(a={}, eta={}) got {:.5}", row.a, row.eta, q.value));
                }
            }
            Err(e) => failed.push(format!("(a={}, eta={}) {e}", row.a, row.eta)),
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "9 rows, worst deviation {:.2} of tolerance, slowest row {:?} {}",
            worst,
            slowest,
            failed.join("; ")
        ),
    )
}

fn table_2() -> Outcome {
    let quad = QuadratureConfig::default();
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    for row in &TABLE_2 {
        let w = well(row.a, row.eta);
        let contour = capri_charge_integral(&w, &quad).unwrap();
        let split = total_charge_point_split(&w, &quad).unwrap();
        let dev = (split.value - row.value).abs();
        worst = worst.max(dev / row.tolerance);
        let exact = split.value == contour.value + row.eta * row.a / std::f64::consts::PI;
        if dev > row.tolerance || !exact {
            failed.push(format!(
                "(a={}, eta={}) got {:.5}, exact shift {exact}",
                row.a, row.eta, split.value
            ));
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "9 rows, worst deviation {worst:.2} of tolerance, shift identity exact {}",
            failed.join("; ")
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let quad = QuadratureConfig::default();
    let reg = RegulatorConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for eta in [0.1, 0.5, 1.0] {
        let w = well(1.0, eta);
        let ms = total_charge_mode_sum(&w, &reg).unwrap();
        let c = capri_charge_integral(&w, &quad).unwrap();
        let diff = (ms.value - c.value).abs();
        let ok = diff <= ms.error_estimate && ms.error_estimate <= 0.01;
        pass &= ok;
        parts.push(format!("eta={eta}: |diff| {diff:.1e} vs est {:.1e}", ms.error_estimate));
    }
    outcome(pass, parts.join(", "))
}

fn free_vacuum() -> Outcome {
    let reg = RegulatorConfig::default();
    let worst = linspace(-10.0, 10.0, 101)
        .iter()
        .map(|&z| free_vacuum_density(1.0, z, &reg).unwrap().abs())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-10,
        format!("max |rho_free| = {worst:.1e} on 101 points in [-10, 10]"),
    )
}

fn symmetry_relation() -> Outcome {
    let reg = RegulatorConfig::default();
    let zs = linspace(-1.0, 1.0, 201);
    let residual = |w: &WellParameters, r: &RegulatorConfig| {
        vacuum_density_profile(w, &zs, r)
            .unwrap()
            .iter()
            .map(|d| d.symmetry_residual().abs())
            .fold(0.0, f64::max)
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for eta in [0.1, 0.5, 1.0] {
        let w = well(1.0, eta);
        let base = residual(&w, &reg);
        let doubled = residual(&w, &reg.doubled());
        pass &= base < 1e-2 && doubled < base;
        parts.push(format!("eta={eta}: {base:.1e} -> {doubled:.1e}"));
    }
    outcome(
        pass,
        format!(
            "max |sea+sky+b| on 201 points, default -> doubled: {}",
            parts.join(", ")
        ),
    )
}

fn casimir_signs() -> Outcome {
    let quad = QuadratureConfig::default();
    let reg = RegulatorConfig::default();
    let mut failed = Vec::new();
    for (a, eta) in GRID {
        let template = well(a, 0.0);
        let ms = casimir_energy_adiabatic(
            &template,
            &RampSpec::new(eta, ChargeMethod::ModeSum).with_steps(4),
            &quad,
            &reg,
        )
        .unwrap();
        let ps = casimir_energy_adiabatic(
            &template,
            &RampSpec::new(eta, ChargeMethod::PointSplitComposite),
            &quad,
            &reg,
        )
        .unwrap();
        if !(ms.casimir_energy > 0.0 && ps.casimir_energy < 0.0) {
            failed.push(format!(
                "(a={a}, eta={eta}) ms {:+.4} ps {:+.4}",
                ms.casimir_energy, ps.casimir_energy
            ));
        }
    }

    // independent 11-point trapezoid over contour charges
    let oracle_q: Vec<f64> = linspace(0.0, 1.0, 11)
        .iter()
        .map(|&eta| capri_charge_integral(&well(1.0, eta), &quad).unwrap().value)
        .collect();
    let oracle = -0.1 * (0.5 * (oracle_q[0] + oracle_q[10]) + oracle_q[1..10].iter().sum::<f64>());
    let ms = casimir_energy_adiabatic(
        &well(1.0, 0.0),
        &RampSpec::new(1.0, ChargeMethod::ModeSum).with_steps(10),
        &quad,
        &reg,
    )
    .unwrap();
    let dev = (ms.casimir_energy - oracle).abs();
    if dev > 1e-3 {
        failed.push(format!("oracle deviation {dev:.1e}"));
    }
    outcome(
        failed.is_empty(),
        format!(
            "9 configs: mode-sum > 0, point-split < 0; (a=1, eta_f=1) mode-sum {:+.6} vs oracle {:+.6} {}",
            ms.casimir_energy,
            oracle,
            failed.join("; ")
        ),
    )
}

fn pv_suite() -> Outcome {
    let cfg = PvConfig::default();
    let cases: [PvCase; 3] = [
        ("1/y", |y| 1.0 / y, -1.0, 1.0, 0.0, 0.0, 1e-12),
        (
            "1/(y(y^2+1))",
            |y| 1.0 / (y * (y * y + 1.0)),
            -10.0,
            10.0,
            0.0,
            0.0,
            1e-10,
        ),
        ("1/(y-1)", |y| 1.0 / (y - 1.0), -2.0, 2.0, 1.0, -(3.0f64).ln(), 1e-8),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, f, lo, hi, pole, expected, tol) in cases {
        let est = pv_quadrature(f, lo, hi, pole, &cfg).unwrap();
        let err = (est.value - expected).abs();
        pass &= err < tol && est.spread < 1e-8;
        parts.push(format!("{name}: err {err:.1e}, spread {:.1e}", est.spread));
    }
    outcome(pass, parts.join(", "))
}

/// Bound-state matching written out directly: interior solution at `a/2`
/// against the decaying exterior, for each parity.
fn matching_oracle(w: &WellParameters, e: f64, even: bool) -> f64 {
    let (m, h) = (w.m(), w.half_width());
    let big_w = e + w.eta();
    let k2 = big_w * big_w - m * m;
    let (c, s) = if k2 > 0.0 {
        let k = k2.sqrt();
        ((k * h).cos(), (k * h).sin() / k)
    } else if k2 < 0.0 {
        let q = (-k2).sqrt();
        ((q * h).cosh(), (q * h).sinh() / q)
    } else {
        (1.0, h)
    };
    let (u, v) = if even {
        (c, (big_w - m) * s)
    } else {
        ((big_w + m) * s, -c)
    };
    let kappa = (m * m - e * e).sqrt();
    (e + m) * v - kappa * u
}

fn dense_scan_roots(w: &WellParameters) -> Vec<f64> {
    let n = 100_000;
    let m = w.m();
    let mut roots = Vec::new();
    for even in [true, false] {
        let f = |e: f64| matching_oracle(w, e, even);
        let es: Vec<f64> = (1..n).map(|i| m * i as f64 / n as f64).collect();
        for pair in es.windows(2) {
            let (mut lo, mut hi) = (pair[0], pair[1]);
            let (flo, fhi) = (f(lo), f(hi));
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if flo * fhi >= 0.0 {
                continue;
            }
            let mut fl = flo;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm * fl <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    fl = fm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

fn spectral_correctness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20240611);
    let mut worst_continuum = 0.0f64;
    for _ in 0..20 {
        let (a, eta) = GRID[rng.gen_range(0..GRID.len())];
        let w = well(a, eta);
        let p = rng.gen_range(0.05..8.0);
        let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let branch = if rng.gen_bool(0.5) { Branch::Sky } else { Branch::Sea };
        let mode = scattering_mode(&w, p, parity, branch).unwrap();
        let zs = linspace(-1.5 * a, 1.5 * a, 301);
        worst_continuum = worst_continuum.max(mode_residual(&mode, &w, &zs));
    }

    let mut worst_bound = 0.0f64;
    let mut worst_root = 0.0f64;
    let mut count_ok = true;
    let mut states = 0;
    for (a, eta) in GRID {
        let w = well(a, eta);
        let set = bound_state_energies(&w).unwrap();
        let zs = linspace(-1.5 * a, 1.5 * a, 301);
        for mode in set.modes() {
            worst_bound = worst_bound.max(mode_residual(&mode, &w, &zs));
        }
        let oracle = dense_scan_roots(&w);
        let found = set.energies();
        states += found.len();
        if oracle.len() != found.len() {
            count_ok = false;
            continue;
        }
        for (x, y) in oracle.iter().zip(&found) {
            worst_root = worst_root.max((x - y).abs());
        }
    }
    outcome(
        worst_continuum < 1e-8 && worst_bound < 1e-8 && worst_root < 1e-10 && count_ok,
        format!(
            "continuum residual {worst_continuum:.1e} (20 modes), bound residual {worst_bound:.1e} ({states} states), root deviation {worst_root:.1e}, counts match {count_ok}"
        ),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_vacuum-charge");
    let dir = std::env::temp_dir().join(format!("vacuum-charge-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("tables-{run}.csv"));
        let status = Command::new(bin)
            .args(["reproduce-tables", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        outputs.push((status.success(), std::fs::read(&path).unwrap_or_default()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    let identical = outputs[0].1 == outputs[1].1 && !outputs[0].1.is_empty();
    outcome(
        identical && outputs[0].0 && outputs[1].0,
        format!("two runs, {} bytes each, identical {identical}", outputs[0].1.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table 1 via contour", table_1),
        ("table 2 via point splitting", table_2),
        ("mode sum equals contour", oracle_equivalence),
        ("free vacuum density vanishes", free_vacuum),
        ("sea/sky/bound symmetry relation", symmetry_relation),
        ("casimir sign split", casimir_signs),
        ("principal-value suite", pv_suite),
        ("spectral correctness", spectral_correctness),
        ("reproduce-tables determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        if !result.pass {
            failures += 1;
        }
        println!(
            "{} [{}] {name}: {} ({:.1?})",
            if result.pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail.trim_end(),
            start.elapsed()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
