//! wasm-bindgen surface for the browser demo (`www/index.html`).
//!
//! Three interactive operations, all returning self-contained SVG markup:
//! scenario simulation with kernel/horizon overrides, influence-function
//! shapes with their normalization constant, and Chebyshev projection-error
//! decay.

use periflow::chebyshev::{projection_error, ErrorNorm, Orientation, SpectralGrid};
use periflow::config::{preset, preset_names};
use periflow::kernel::{compute_beta, influence, scaled_influence, KernelFamily};
use periflow::output::{curves_svg, decay_plot_svg, to_svg, TrajectoryRecord};
use periflow::scenario::run_scenario;
use wasm_bindgen::prelude::*;

/// Comma-separated preset names.
#[wasm_bindgen]
pub fn presets() -> String {
    preset_names().join(",")
}

/// Run a preset scenario, optionally overriding the kernel family, the
/// horizon and the resolution (`n_modes = 0` keeps the preset value).
/// Returns the moisture-profile SVG; instability is reported in the figure
/// caption rather than as an error so the blow-up experiment is visible.
#[wasm_bindgen]
pub fn simulate_svg(
    preset_name: &str,
    family: &str,
    delta: f64,
    n_modes: usize,
) -> Result<String, String> {
    let mut config = preset(preset_name).map_err(|e| e.to_string())?;
    config.kernel_family = family.parse::<KernelFamily>().map_err(|e| e.to_string())?;
    config.delta = delta;
    if n_modes > 0 {
        config.n_modes = n_modes;
    }
    if !(config.delta > 0.0 && config.delta < 1.0) {
        return Err(format!("delta must be in (0, 1), got {delta}"));
    }
    let outcome = run_scenario(&config).map_err(|e| e.to_string())?;
    Ok(render_with_caption(&outcome.record))
}

fn render_with_caption(record: &TrajectoryRecord) -> String {
    let d = &record.diagnostics;
    let caption = if !d.completed {
        format!(
            "aborted: {} (clamps {})",
            d.failure.clone().unwrap_or_default(),
            d.clamp_count
        )
    } else if d.clamp_count >= 1000 {
        format!(
            "unstable: clamp counter {} over {} steps",
            d.clamp_count, d.steps
        )
    } else {
        format!(
            "steps {}, clamps {}, theta in [{:.4}, {:.4}]",
            d.steps, d.clamp_count, d.theta_min, d.theta_max
        )
    };
    let svg = to_svg(record);
    svg.replace(
        "</svg>",
        &format!("<text x=\"12\" y=\"472\" font-size=\"11\" fill=\"#555\">{caption}</text></svg>"),
    )
}

/// Influence function and scaled kernel over `[-1, 1]` with the
/// normalization constant in the legend.
#[wasm_bindgen]
pub fn kernel_svg(family: &str, delta: f64) -> Result<String, String> {
    let family: KernelFamily = family
        .parse()
        .map_err(|e: periflow::kernel::KernelError| e.to_string())?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(format!("delta must be in (0, 1), got {delta}"));
    }
    // regularization floor of a representative evaluation grid
    let grid = SpectralGrid::new(200, -1.0, 1.0, Orientation::HighAtPlusOne).unwrap();
    let z_floor = grid
        .nodes()
        .iter()
        .map(|z| z.abs())
        .filter(|&r| r > 1e-12)
        .fold(f64::INFINITY, f64::min);
    let beta = compute_beta(family, delta, z_floor).map_err(|e| e.to_string())?;
    let samples = 600usize;
    let xs: Vec<f64> = (0..=samples)
        .map(|i| -1.0 + 2.0 * i as f64 / samples as f64)
        .collect();
    let phi: Vec<(f64, f64)> = xs
        .iter()
        .map(|&z| (z, influence(family, delta, z)))
        .collect();
    let phibar: Vec<(f64, f64)> = xs
        .iter()
        .map(|&z| (z, scaled_influence(family, delta, z, z_floor)))
        .collect();
    let beta_label = if beta.regularized {
        format!("beta = {:.6} (regularized)", beta.value)
    } else {
        format!("beta = {:.6}", beta.value)
    };
    Ok(curves_svg(
        &format!("{family} influence function, delta = {delta}"),
        "z (reference)",
        &[
            ("phi(z)".to_string(), phi),
            (format!("phi(z)/|z|, {beta_label}"), phibar),
        ],
    ))
}

/// Projection-error decay of the discrete Chebyshev expansion for a chosen
/// test function, on log-log axes over N = 4..128.
#[wasm_bindgen]
pub fn projection_decay_svg(function: &str) -> Result<String, String> {
    let f: fn(f64) -> f64 = match function {
        "exp" => f64::exp,
        "abs" => f64::abs,
        "runge" => |z| 1.0 / (1.0 + 25.0 * z * z),
        "step-like" => |z| (10.0 * z).tanh(),
        other => {
            return Err(format!(
                "unknown function '{other}' (try exp, abs, runge, step-like)"
            ))
        }
    };
    let mut points = Vec::new();
    let mut n = 4usize;
    while n <= 128 {
        let grid = SpectralGrid::new(n, -1.0, 1.0, Orientation::HighAtPlusOne).unwrap();
        let err = projection_error(f, &grid, ErrorNorm::L2Weighted);
        points.push((n as f64, err.max(1e-17)));
        n *= 2;
    }
    Ok(decay_plot_svg(
        &format!("projection error of {function}(z), weighted L2 norm"),
        &[(function.to_string(), points)],
    ))
}
