//! Verification harnesses behind `verify-transforms` and `verify-operator`.
//!
//! Each suite runs named checks and collects pass/fail lines with measured
//! quantities, so the CLI can print a table and exit nonzero on any failure.

use crate::chebyshev::{
    forward_direct, projection_error, series_product, ChebSeries, ErrorNorm, NodalField,
    Orientation, SpectralGrid,
};
use crate::config::SimConfig;
use crate::kernel::{beta_closed_form, beta_quadrature, KernelFamily, KernelSpec};
use crate::operator::rhs_quadrature_oracle;
use crate::scenario::build_workspace;
use crate::stepper::run;
use std::fmt::Write as _;

/// One named check.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A suite's outcome.
#[derive(Debug, Clone)]
pub struct Report {
    pub title: String,
    pub lines: Vec<CheckLine>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        self.lines.push(CheckLine {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.title);
        for line in &self.lines {
            let mark = if line.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{mark}] {:<42} {}", line.name, line.detail);
        }
        let verdict = if self.passed() {
            "all checks passed"
        } else {
            "FAILURES present"
        };
        let _ = writeln!(out, "-- {verdict}");
        out
    }
}

fn lcg_values(seed: u64, len: usize) -> Vec<f64> {
    let mut state = seed;
    (0..len)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

fn reference_grid(n: usize) -> SpectralGrid {
    SpectralGrid::new(n, -1.0, 1.0, Orientation::HighAtPlusOne).unwrap()
}

/// Options for the transform suite.
#[derive(Debug, Clone, Copy)]
pub struct TransformSuiteOptions {
    /// Largest grid degree exercised (doublings of 4 up to this bound).
    pub max_degree: usize,
    /// Harness self-check: corrupt one coefficient so the round trip must
    /// fail. Only tests set this.
    pub inject_fault: bool,
}

impl Default for TransformSuiteOptions {
    fn default() -> Self {
        TransformSuiteOptions {
            max_degree: 256,
            inject_fault: false,
        }
    }
}

/// Round trips, linearity, orthogonality, the product formula against its
/// pointwise oracle, and projection decay.
pub fn verify_transforms(opts: TransformSuiteOptions) -> Report {
    let mut report = Report {
        title: "chebyshev transform suite".to_string(),
        lines: Vec::new(),
    };

    let mut degrees: Vec<usize> = Vec::new();
    let mut n = 4usize;
    while n <= opts.max_degree {
        degrees.push(n);
        n *= 2;
    }
    if degrees.is_empty() {
        degrees.push(opts.max_degree.max(2));
    }

    // round trip nodal -> coefficients -> nodal
    let mut worst = 0.0f64;
    for &n in &degrees {
        let g = reference_grid(n);
        let u = NodalField::new(lcg_values(n as u64, n + 1));
        let mut c = g.forward(&u).unwrap();
        if opts.inject_fault {
            c.coeffs_mut()[n / 2] += 1e-3;
        }
        let back = g.inverse(&c).unwrap();
        for (a, b) in back.values().iter().zip(u.values()) {
            worst = worst.max((a - b).abs());
        }
    }
    report.check(
        "round trip (all N)",
        worst <= 1e-12,
        format!("max abs error {worst:.3e} (tol 1e-12)"),
    );

    // linearity
    let mut worst = 0.0f64;
    for &n in &degrees {
        let g = reference_grid(n);
        let u = NodalField::new(lcg_values(2 * n as u64 + 1, n + 1));
        let v = NodalField::new(lcg_values(3 * n as u64 + 7, n + 1));
        let (alpha, beta_c) = (0.7, -1.3);
        let mixed = NodalField::new(
            u.values()
                .iter()
                .zip(v.values())
                .map(|(a, b)| alpha * a + beta_c * b)
                .collect(),
        );
        let cu = g.forward(&u).unwrap();
        let cv = g.forward(&v).unwrap();
        let cm = g.forward(&mixed).unwrap();
        for ((m, a), b) in cm.coeffs().iter().zip(cu.coeffs()).zip(cv.coeffs()) {
            worst = worst.max((m - (alpha * a + beta_c * b)).abs());
        }
    }
    report.check(
        "linearity",
        worst <= 1e-12,
        format!("max abs error {worst:.3e} (tol 1e-12)"),
    );

    // orthogonality: T_k transforms to the unit coefficient vector
    let mut worst = 0.0f64;
    let g = reference_grid(*degrees.last().unwrap());
    for k in [0usize, 1, 2, 5, g.n_modes() / 2, g.n_modes()] {
        if k > g.n_modes() {
            continue;
        }
        let tk = ChebSeries::new((0..=k).map(|i| if i == k { 1.0 } else { 0.0 }).collect());
        let nodal = g.inverse(&tk).unwrap();
        let c = g.forward(&nodal).unwrap();
        for (i, &v) in c.coeffs().iter().enumerate() {
            let expected = if i == k { 1.0 } else { 0.0 };
            worst = worst.max((v - expected).abs());
        }
    }
    report.check(
        "T_k orthogonality",
        worst <= 1e-12,
        format!("max abs error {worst:.3e} (tol 1e-12)"),
    );

    // product formula against the pointwise-multiply-then-transform oracle
    let mut worst = 0.0f64;
    for &n in &[4usize, 8, 16, 32, 64] {
        if n > opts.max_degree.max(4) {
            continue;
        }
        for trial in 0..20u64 {
            let a = ChebSeries::new(lcg_values(1000 + trial * 2 + n as u64, n + 1));
            let b = ChebSeries::new(lcg_values(2000 + trial * 3 + n as u64, n + 1));
            let product = series_product(&a, &b).unwrap();
            let g2 = reference_grid(2 * n);
            let pointwise = NodalField::new(
                g2.nodes()
                    .iter()
                    .map(|&z| a.evaluate(z) * b.evaluate(z))
                    .collect(),
            );
            let oracle = forward_direct(&pointwise, &g2).unwrap();
            for (x, y) in product.coeffs().iter().zip(oracle.coeffs()) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    report.check(
        "product vs pointwise oracle",
        worst <= 1e-12,
        format!("max abs error {worst:.3e} (tol 1e-12)"),
    );

    // projection decay for an analytic function
    let decay_degrees = [4usize, 8, 16, 32];
    let errs: Vec<f64> = decay_degrees
        .iter()
        .map(|&n| projection_error(f64::exp, &reference_grid(n), ErrorNorm::L2Weighted))
        .collect();
    let mut decays = true;
    for w in errs.windows(2) {
        if w[0] > 1e-13 && !(w[1] <= w[0] * 0.1 || w[1] <= 1e-13) {
            decays = false;
        }
    }
    report.check(
        "exp(z) spectral decay",
        decays,
        format!(
            "errors {}",
            errs.iter()
                .map(|e| format!("{e:.2e}"))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
    );

    // |z| has limited smoothness: algebraic rate
    let abs_degrees = [8usize, 16, 32];
    let abs_errs: Vec<f64> = abs_degrees
        .iter()
        .map(|&n| projection_error(f64::abs, &reference_grid(n), ErrorNorm::L2Weighted))
        .collect();
    let slope = (abs_errs[2].ln() - abs_errs[0].ln()) / ((32f64).ln() - (8f64).ln());
    report.check(
        "|z| algebraic rate",
        (-2.5..=-0.5).contains(&slope) && abs_errs[0] > abs_errs[1] && abs_errs[1] > abs_errs[2],
        format!("log-log slope {slope:.2} (expected in [-2.5, -0.5])"),
    );

    report
}

/// Operator suite: beta cross-check, a spectral-vs-oracle discrepancy table
/// at the initial state, and self-convergence of full trajectories across a
/// resolution ladder.
pub fn verify_operator(config: &SimConfig, n_list: &[usize]) -> Report {
    let mut report = Report {
        title: format!("operator suite ({})", config.label),
        lines: Vec::new(),
    };

    // beta: closed form vs quadrature for the active delta
    if config.kernel_family == KernelFamily::Distributed {
        let closed = beta_closed_form(config.delta).unwrap();
        let quad = beta_quadrature(KernelFamily::Distributed, config.delta, 0.0).unwrap();
        let diff = (closed - quad).abs();
        report.check(
            format!("beta cross-check (delta = {})", config.delta),
            diff <= 1e-8,
            format!("closed {closed:.9} vs quadrature {quad:.9}, |diff| {diff:.2e}"),
        );
    }

    // spectral vs oracle discrepancy at t = 0 (characterization: reported,
    // not gated; the transform convolution is the published prescription,
    // not an identity)
    for &n in n_list {
        let mut c = config.clone();
        c.n_modes = n;
        let (grid, workspace) = match build_workspace(&c) {
            Ok(x) => x,
            Err(e) => {
                report.check(format!("workspace N={n}"), false, e.to_string());
                continue;
            }
        };
        let theta0 = NodalField::sample_physical(&grid, |z| c.ic.evaluate(z, c.z_max));
        let spectral = match workspace.rhs_spectral(&theta0, &c.soil) {
            Ok(r) => r,
            Err(e) => {
                report.check(format!("rhs_spectral N={n}"), false, e.to_string());
                continue;
            }
        };
        let kernel = KernelSpec::for_grid(c.kernel_family, c.delta, &grid).unwrap();
        let oracle = rhs_quadrature_oracle(
            &theta0,
            &grid,
            &kernel,
            &c.soil,
            workspace.sink(),
            workspace.gravity(),
            10,
        );
        let mut max_diff = 0.0f64;
        for (a, b) in spectral.values().iter().zip(oracle.values()) {
            max_diff = max_diff.max((a - b).abs());
        }
        let scale = oracle.max_abs().max(1e-300);
        report.check(
            format!("spectral vs oracle at t=0, N={n}"),
            max_diff.is_finite(),
            format!(
                "max |diff| {max_diff:.3e} ({:.2} relative to oracle scale {scale:.3e})",
                max_diff / scale
            ),
        );
    }

    // self-convergence of full trajectories
    if n_list.len() >= 2 {
        let mut finals: Vec<(usize, ChebSeries)> = Vec::new();
        let mut failed = false;
        for &n in n_list {
            let mut c = config.clone();
            c.n_modes = n;
            let (grid, workspace) = build_workspace(&c).expect("workspace already validated");
            let bc = c.boundary_conditions();
            match run(
                |z| c.ic.evaluate(z, c.z_max),
                &workspace,
                &c.soil,
                &bc,
                c.t_final,
                c.dt,
                1,
            ) {
                Ok(traj) => {
                    let series = grid
                        .forward(&traj.final_state().theta)
                        .expect("final state matches its grid");
                    finals.push((n, series));
                }
                Err((_, e)) => {
                    report.check(format!("trajectory N={n}"), false, e.to_string());
                    failed = true;
                }
            }
        }
        if !failed {
            // distances between successive resolutions, measured in the
            // weighted discrete norm on a dense reference grid
            let dense = reference_grid(512);
            let mut distances: Vec<(usize, usize, f64)> = Vec::new();
            for pair in finals.windows(2) {
                let (n_a, ref a) = pair[0];
                let (n_b, ref b) = pair[1];
                let mut acc = 0.0;
                for (h, &z) in dense.nodes().iter().enumerate() {
                    let d = a.evaluate(z) - b.evaluate(z);
                    acc += dense.weights()[h] * d * d;
                }
                distances.push((n_a, n_b, acc.sqrt()));
            }
            let mut monotone = true;
            for w in distances.windows(2) {
                if !(w[1].2 < w[0].2) {
                    monotone = false;
                }
            }
            let mut detail = distances
                .iter()
                .map(|(a, b, d)| format!("d({a},{b}) = {d:.3e}"))
                .collect::<Vec<_>>()
                .join(", ");
            if distances.len() >= 2 {
                for w in distances.windows(2) {
                    let order = (w[0].2 / w[1].2).log2();
                    let _ = write!(detail, ", order {order:.2}");
                }
            }
            report.check(
                "self-convergence (successive distances decrease)",
                monotone,
                detail,
            );
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    #[test]
    fn transform_suite_passes() {
        let report = verify_transforms(TransformSuiteOptions {
            max_degree: 64,
            inject_fault: false,
        });
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn degenerate_max_degree_still_passes() {
        // polynomial exactness only at the smallest admissible grid
        let report = verify_transforms(TransformSuiteOptions {
            max_degree: 2,
            inject_fault: false,
        });
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn injected_fault_fails_the_suite() {
        let report = verify_transforms(TransformSuiteOptions {
            max_degree: 16,
            inject_fault: true,
        });
        assert!(!report.passed());
    }

    #[test]
    fn operator_suite_zero_conductivity_discrepancy_vanishes() {
        // with K numerically zero the right-hand side reduces to the sink on
        // both routes
        let mut config = preset("example-4.1").unwrap();
        config.soil = crate::soil::SoilParams::new(0.075, 0.287, 0.036, 1.56, 1e-300).unwrap();
        config.ic = crate::config::InitialProfile::Affine {
            at_top: 0.2,
            at_bottom: 0.2,
        };
        config.t_final = 0.6;
        let report = verify_operator(&config, &[8, 16]);
        assert!(report.passed(), "{}", report.render());
        for line in &report.lines {
            if line.name.starts_with("spectral vs oracle") {
                // the reported absolute discrepancy is tiny
                let max_diff: f64 = line
                    .detail
                    .split_whitespace()
                    .nth(2)
                    .unwrap()
                    .parse()
                    .unwrap();
                assert!(max_diff <= 1e-12, "{}", line.detail);
            }
        }
    }

    #[test]
    fn report_renders_pass_and_fail() {
        let mut r = Report {
            title: "t".into(),
            lines: vec![],
        };
        r.check("a", true, "ok".into());
        assert!(r.passed());
        r.check("b", false, "bad".into());
        assert!(!r.passed());
        let text = r.render();
        assert!(text.contains("[PASS] a"));
        assert!(text.contains("[FAIL] b"));
    }
}
