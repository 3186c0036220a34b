//! Influence functions and the scaled kernel `phibar(z) = phi(z) / |z|`.
//!
//! Three families, all even in `z` (reference coordinates):
//!
//! - `uniform`: `2/delta` on `|z| <= delta`, zero outside;
//! - `linear`: `1 - |z|/delta` on `|z| <= delta`, zero outside;
//! - `distributed`: `(|z| - 1 + delta)/delta` on `|z| >= 1 - delta`, zero
//!   inside — mass concentrated near the domain boundary.
//!
//! For the uniform and linear families `phi(z)/|z|` is not integrable at the
//! origin; they are retained for the destabilization experiment, with the
//! division regularized by the smallest nonzero node magnitude of the active
//! grid. The distributed family needs no regularization for `delta < 1`
//! because `phi` vanishes identically in a neighbourhood of zero.

use crate::chebyshev::{NodalField, SpectralGrid};
use crate::quadrature;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("kernel horizon delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("unknown kernel family '{0}' (expected uniform, linear or distributed)")]
    UnknownFamily(String),
}

/// Influence-function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    Uniform,
    Linear,
    Distributed,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 3] = [
        KernelFamily::Uniform,
        KernelFamily::Linear,
        KernelFamily::Distributed,
    ];

    /// Whether `phi(z)/|z|` needs the division regularized at the origin.
    pub fn needs_regularization(self) -> bool {
        !matches!(self, KernelFamily::Distributed)
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KernelFamily::Uniform => "uniform",
            KernelFamily::Linear => "linear",
            KernelFamily::Distributed => "distributed",
        };
        f.write_str(s)
    }
}

impl FromStr for KernelFamily {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, KernelError> {
        match s {
            "uniform" => Ok(KernelFamily::Uniform),
            "linear" => Ok(KernelFamily::Linear),
            "distributed" => Ok(KernelFamily::Distributed),
            other => Err(KernelError::UnknownFamily(other.to_string())),
        }
    }
}

fn check_delta(delta: f64) -> Result<(), KernelError> {
    if delta.is_finite() && delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(KernelError::InvalidDelta(delta))
    }
}

/// Influence function `phi(z)`; even by construction. Pair differences feed
/// arguments up to `|z| = 2`, where the family formulas remain valid.
pub fn influence(family: KernelFamily, delta: f64, z: f64) -> f64 {
    let r = z.abs();
    match family {
        KernelFamily::Uniform => {
            if r <= delta {
                2.0 / delta
            } else {
                0.0
            }
        }
        KernelFamily::Linear => {
            if r <= delta {
                1.0 - r / delta
            } else {
                0.0
            }
        }
        KernelFamily::Distributed => {
            if r >= 1.0 - delta {
                (r - 1.0 + delta) / delta
            } else {
                0.0
            }
        }
    }
}

/// Scaled kernel `phibar(z) = phi(z) / |z|`, with the division regularized by
/// `z_floor` for families whose support reaches the origin. The distributed
/// family vanishes identically near zero, so `phibar(0) = 0` there.
pub fn scaled_influence(family: KernelFamily, delta: f64, z: f64, z_floor: f64) -> f64 {
    let phi = influence(family, delta, z);
    if phi == 0.0 {
        return 0.0;
    }
    match family {
        KernelFamily::Distributed => phi / z.abs(),
        _ => phi / z.abs().max(z_floor),
    }
}

/// Closed-form normalization of the distributed family:
/// `beta = 2 (1 + ((1 - delta)/delta) ln(1 - delta))`.
pub fn beta_closed_form(delta: f64) -> Result<f64, KernelError> {
    check_delta(delta)?;
    Ok(2.0 * (1.0 + (1.0 - delta) / delta * (1.0 - delta).ln()))
}

/// `beta = int_{-1}^{1} phibar(z) dz` by adaptive Gauss-Kronrod quadrature,
/// split at the kink points of the integrand.
pub fn beta_quadrature(family: KernelFamily, delta: f64, z_floor: f64) -> Result<f64, KernelError> {
    check_delta(delta)?;
    let splits: Vec<f64> = match family {
        KernelFamily::Distributed => vec![-(1.0 - delta), 1.0 - delta],
        _ => vec![-delta, -z_floor, 0.0, z_floor, delta],
    };
    let f = move |z: f64| scaled_influence(family, delta, z, z_floor);
    Ok(quadrature::adaptive_split(&f, -1.0, 1.0, 1e-12, &splits))
}

/// Normalization constant with provenance: closed form for the distributed
/// family, regularized quadrature (flagged) otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaValue {
    pub value: f64,
    /// True when the value depends on the origin regularization instead of a
    /// convergent integral.
    pub regularized: bool,
}

/// Compute `beta` for a family. Uniform and linear kernels have a
/// logarithmically divergent integral at the origin; the returned value then
/// reflects the `z_floor` regularization and is flagged as such.
pub fn compute_beta(
    family: KernelFamily,
    delta: f64,
    z_floor: f64,
) -> Result<BetaValue, KernelError> {
    check_delta(delta)?;
    match family {
        KernelFamily::Distributed => Ok(BetaValue {
            value: beta_closed_form(delta)?,
            regularized: false,
        }),
        _ => Ok(BetaValue {
            value: beta_quadrature(family, delta, z_floor)?,
            regularized: true,
        }),
    }
}

/// An influence function bound to a grid: horizon, normalization, the nodal
/// samples of `phibar` that feed the forward transform, and the
/// regularization floor taken from the grid.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub delta: f64,
    pub beta: BetaValue,
    pub nodal_values: NodalField,
    pub z_floor: f64,
}

impl KernelSpec {
    /// Sample `phibar` at the nodes of `grid`. The regularization floor is
    /// the smallest node magnitude that is not the (numerically) zero center
    /// node of even grids.
    pub fn for_grid(
        family: KernelFamily,
        delta: f64,
        grid: &SpectralGrid,
    ) -> Result<Self, KernelError> {
        check_delta(delta)?;
        let z_floor = smallest_nonzero_node(grid);
        let nodal_values = NodalField::new(
            grid.nodes()
                .iter()
                .map(|&z| scaled_influence(family, delta, z, z_floor))
                .collect(),
        );
        let beta = compute_beta(family, delta, z_floor)?;
        Ok(KernelSpec {
            family,
            delta,
            beta,
            nodal_values,
            z_floor,
        })
    }
}

fn smallest_nonzero_node(grid: &SpectralGrid) -> f64 {
    grid.nodes()
        .iter()
        .map(|z| z.abs())
        .filter(|&r| r > 1e-12)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::Orientation;

    #[test]
    fn distributed_influence_branches() {
        assert_eq!(influence(KernelFamily::Distributed, 0.15, 1.0), 1.0);
        assert_eq!(influence(KernelFamily::Distributed, 0.15, 0.5), 0.0);
        assert_eq!(influence(KernelFamily::Distributed, 0.15, -0.5), 0.0);
        let v = influence(KernelFamily::Uniform, 0.15, 0.1);
        assert!((v - 2.0 / 0.15).abs() < 1e-12);
        let v = influence(KernelFamily::Linear, 0.2, 0.1);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scaled_influence_distributed() {
        assert_eq!(
            scaled_influence(KernelFamily::Distributed, 0.15, 0.0, 0.1),
            0.0
        );
        assert_eq!(
            scaled_influence(KernelFamily::Distributed, 0.15, 1.0, 0.1),
            1.0
        );
        let v = scaled_influence(KernelFamily::Distributed, 0.15, 0.925, 0.1);
        let expected = ((0.925 - 0.85) / 0.15) / 0.925;
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.54054).abs() < 1e-5);
    }

    #[test]
    fn scaled_influence_is_even() {
        let mut state = 7u64;
        let mut rand = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for family in KernelFamily::ALL {
            for _ in 0..1000 {
                let z = rand();
                let a = scaled_influence(family, 0.3, z, 0.01);
                let b = scaled_influence(family, 0.3, -z, 0.01);
                assert_eq!(a, b);
                assert!(a >= 0.0);
            }
        }
    }

    #[test]
    fn distributed_support_vanishes_inside() {
        for i in 0..100 {
            let z = -0.849 + 1.698 * i as f64 / 99.0;
            assert_eq!(
                scaled_influence(KernelFamily::Distributed, 0.15, z, 0.1),
                0.0
            );
        }
    }

    #[test]
    fn beta_closed_form_values() {
        // delta = 0.15: 2 (1 + (0.85/0.15) ln 0.85)
        let b = beta_closed_form(0.15).unwrap();
        assert!((b - 0.158119).abs() < 1e-6, "beta = {b}");
        // delta = 0.5: 2 (1 + ln 0.5)
        let b = beta_closed_form(0.5).unwrap();
        assert!((b - 0.613706).abs() < 1e-6);
        // delta -> 1 limit is 2
        let b = beta_closed_form(1.0 - 1e-12).unwrap();
        assert!((b - 2.0).abs() < 1e-9);
        assert!(beta_closed_form(0.0).is_err());
        assert!(beta_closed_form(1.0).is_err());
    }

    #[test]
    fn beta_closed_form_matches_quadrature() {
        for delta in [0.05, 0.15, 0.3, 0.5] {
            let closed = beta_closed_form(delta).unwrap();
            let quad = beta_quadrature(KernelFamily::Distributed, delta, 0.0).unwrap();
            assert!(
                (closed - quad).abs() <= 1e-8,
                "delta {delta}: closed {closed} vs quadrature {quad}"
            );
        }
    }

    #[test]
    fn beta_monotone_in_delta() {
        let mut prev = 0.0;
        for i in 1..=20 {
            let delta = 0.9 * i as f64 / 20.0;
            let b = beta_closed_form(delta).unwrap();
            assert!(b > prev, "beta not increasing at delta = {delta}");
            prev = b;
        }
    }

    #[test]
    fn regularized_families_are_flagged() {
        let b = compute_beta(KernelFamily::Uniform, 0.15, 0.01).unwrap();
        assert!(b.regularized);
        assert!(b.value > 0.0);
        let b = compute_beta(KernelFamily::Distributed, 0.15, 0.01).unwrap();
        assert!(!b.regularized);
    }

    #[test]
    fn sampling_on_n4_grid() {
        let grid = SpectralGrid::new(4, -1.0, 1.0, Orientation::HighAtPlusOne).unwrap();
        let spec = KernelSpec::for_grid(KernelFamily::Distributed, 0.15, &grid).unwrap();
        // only |z| >= 0.85 is inside the support and |±sqrt(2)/2| < 0.85
        let expected = [1.0, 0.0, 0.0, 0.0, 1.0];
        for (v, e) in spec.nodal_values.values().iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!(KernelSpec::for_grid(KernelFamily::Distributed, 0.0, &grid).is_err());
        assert!(KernelSpec::for_grid(KernelFamily::Distributed, -0.1, &grid).is_err());
    }

    #[test]
    fn sampled_kernel_is_palindromic() {
        let grid = SpectralGrid::new(9, 0.0, 30.0, Orientation::LowAtPlusOne).unwrap();
        for family in KernelFamily::ALL {
            let spec = KernelSpec::for_grid(family, 0.3, &grid).unwrap();
            let v = spec.nodal_values.values();
            for h in 0..v.len() {
                assert_eq!(v[h], v[v.len() - 1 - h], "family {family}, node {h}");
            }
        }
    }

    #[test]
    fn z_floor_skips_numerically_zero_center_node() {
        // even node counts carry a node at (numerically) zero; the floor must
        // come from the neighbouring node instead
        let grid = SpectralGrid::new(8, -1.0, 1.0, Orientation::HighAtPlusOne).unwrap();
        let spec = KernelSpec::for_grid(KernelFamily::Uniform, 0.5, &grid).unwrap();
        let expected = (std::f64::consts::PI / 8.0).sin();
        assert!((spec.z_floor - expected).abs() < 1e-15);
        // center node value uses the floor, not the (zero) node coordinate
        let center = spec.nodal_values.values()[4];
        assert!((center - (2.0 / 0.5) / expected).abs() < 1e-12);
    }
}
