//! Van Genuchten-Mualem constitutive relations.
//!
//! The moisture content `theta` is the evolved state; these functions map it
//! to effective saturation, matric head `h_m` (cm, nonpositive), hydraulic
//! conductivity `K` (cm/s) and total hydraulic potential `H = h_m + z` (cm).
//!
//! Retention: `theta(h) = theta_r + (theta_s - theta_r) (1 + (alpha |h|)^n)^{-m}`
//! with `m = 1 - 1/n`; conductivity is the Mualem form
//! `K = K_s S_e^l [1 - (1 - S_e^{1/m})^m]^2` with pore-connectivity exponent
//! `l = 1/2` by convention (configurable).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SoilError {
    #[error("residual/saturated contents must satisfy 0 <= theta_r < theta_s <= 1, got {theta_r} / {theta_s}")]
    InvalidContents { theta_r: f64, theta_s: f64 },
    #[error("alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("van Genuchten n must exceed 1, got {0}")]
    InvalidN(f64),
    #[error("saturated conductivity must be positive, got {0}")]
    InvalidKSat(f64),
}

/// Floor on effective saturation; keeps `h_m` finite as `theta` approaches
/// the residual content so the explicit stepper never receives an infinite
/// right-hand side.
pub const SATURATION_FLOOR: f64 = 1e-10;

/// Parameter set for one homogeneous soil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoilParams {
    pub theta_r: f64,
    pub theta_s: f64,
    /// 1/cm
    pub alpha: f64,
    pub n_vg: f64,
    /// cm/s
    pub k_sat: f64,
    /// Mualem pore-connectivity exponent (0.5 unless overridden).
    pub connectivity: f64,
}

impl SoilParams {
    pub fn new(
        theta_r: f64,
        theta_s: f64,
        alpha: f64,
        n_vg: f64,
        k_sat: f64,
    ) -> Result<Self, SoilError> {
        if !(0.0..=1.0).contains(&theta_s) || !(0.0..1.0).contains(&theta_r) || theta_r >= theta_s {
            return Err(SoilError::InvalidContents { theta_r, theta_s });
        }
        if !(alpha > 0.0) {
            return Err(SoilError::InvalidAlpha(alpha));
        }
        if !(n_vg > 1.0) {
            return Err(SoilError::InvalidN(n_vg));
        }
        if !(k_sat > 0.0) {
            return Err(SoilError::InvalidKSat(k_sat));
        }
        Ok(SoilParams {
            theta_r,
            theta_s,
            alpha,
            n_vg,
            k_sat,
            connectivity: 0.5,
        })
    }

    /// `m = 1 - 1/n`, always in (0, 1) for valid parameters.
    pub fn m_vg(&self) -> f64 {
        1.0 - 1.0 / self.n_vg
    }
}

/// Effective saturation clamped into `[SATURATION_FLOOR, 1]`, together with
/// whether the clamp fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveSaturation {
    pub value: f64,
    pub clamped: bool,
}

/// `S_e = (theta - theta_r) / (theta_s - theta_r)`, clamped.
pub fn effective_saturation(theta: f64, p: &SoilParams) -> EffectiveSaturation {
    let raw = (theta - p.theta_r) / (p.theta_s - p.theta_r);
    if raw < SATURATION_FLOOR {
        EffectiveSaturation {
            value: SATURATION_FLOOR,
            clamped: true,
        }
    } else if raw > 1.0 {
        EffectiveSaturation {
            value: 1.0,
            clamped: true,
        }
    } else {
        EffectiveSaturation {
            value: raw,
            clamped: false,
        }
    }
}

/// Matric head (cm, <= 0) from the inverted retention curve:
/// `h_m = -(1/alpha) (S_e^{-1/m} - 1)^{1/n}`.
pub fn matric_head(theta: f64, p: &SoilParams) -> f64 {
    let se = effective_saturation(theta, p).value;
    if se >= 1.0 {
        return 0.0;
    }
    let m = p.m_vg();
    let inner = se.powf(-1.0 / m) - 1.0;
    -(inner.powf(1.0 / p.n_vg)) / p.alpha
}

/// Forward retention curve `theta(h_m)`; used to close the round trip in
/// tests and diagnostics.
pub fn water_content(h_m: f64, p: &SoilParams) -> f64 {
    if h_m >= 0.0 {
        return p.theta_s;
    }
    let m = p.m_vg();
    let ah = (p.alpha * h_m.abs()).powf(p.n_vg);
    p.theta_r + (p.theta_s - p.theta_r) * (1.0 + ah).powf(-m)
}

/// Mualem hydraulic conductivity (cm/s), nondecreasing in `theta` with
/// `K(theta_s) = K_s`.
pub fn conductivity(theta: f64, p: &SoilParams) -> f64 {
    let se = effective_saturation(theta, p).value;
    let m = p.m_vg();
    let core = 1.0 - (1.0 - se.powf(1.0 / m)).powf(m);
    p.k_sat * se.powf(p.connectivity) * core * core
}

/// Total hydraulic potential `H = h_m + z` (cm), with `z` the physical
/// coordinate.
pub fn hydraulic_potential(theta: f64, z_phys: f64, p: &SoilParams) -> f64 {
    matric_head(theta, p) + z_phys
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Example soil: theta_r 0.075, theta_s 0.287, alpha 0.036, n 1.56,
    /// K_s 0.94e-3 cm/s.
    fn loam() -> SoilParams {
        SoilParams::new(0.075, 0.287, 0.036, 1.56, 0.94e-3).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SoilParams::new(0.3, 0.2, 0.1, 1.5, 1.0).is_err());
        assert!(SoilParams::new(0.1, 0.4, -0.1, 1.5, 1.0).is_err());
        assert!(SoilParams::new(0.1, 0.4, 0.1, 1.0, 1.0).is_err());
        assert!(SoilParams::new(0.1, 0.4, 0.1, 1.5, 0.0).is_err());
    }

    #[test]
    fn saturation_limits_and_clamps() {
        let p = loam();
        let s = effective_saturation(p.theta_s, &p);
        assert_eq!(s.value, 1.0);
        assert!(!s.clamped);
        let s = effective_saturation(p.theta_r, &p);
        assert_eq!(s.value, SATURATION_FLOOR);
        assert!(s.clamped);
        let s = effective_saturation(2.0, &p);
        assert_eq!(s.value, 1.0);
        assert!(s.clamped);
    }

    #[test]
    fn saturation_at_theta_02() {
        let p = loam();
        // oracle: direct arithmetic (0.2 - 0.075) / (0.287 - 0.075)
        let expected = 0.125 / 0.212;
        let s = effective_saturation(0.2, &p).value;
        assert!((s - expected).abs() < 1e-15);
        assert!((s - 0.589623).abs() < 1e-6);
    }

    #[test]
    fn matric_head_values() {
        let p = loam();
        assert_eq!(matric_head(p.theta_s, &p), 0.0);

        // oracle: evaluate the inversion formula step by step at
        // s_e = 0.125/0.212
        let se: f64 = 0.125 / 0.212;
        let m = 1.0 - 1.0 / 1.56;
        let expected = -((se.powf(-1.0 / m) - 1.0).powf(1.0 / 1.56)) / 0.036;
        let h = matric_head(0.2, &p);
        assert!((h - expected).abs() < 1e-12);
        assert!((h - (-60.35)).abs() < 0.05, "h_m = {h}");
    }

    #[test]
    fn matric_head_strictly_increasing() {
        let p = loam();
        let mut state = 42u64;
        let mut rand = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let a = p.theta_r + 1e-6 + rand() * (p.theta_s - p.theta_r - 2e-6);
            let b = p.theta_r + 1e-6 + rand() * (p.theta_s - p.theta_r - 2e-6);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if hi - lo > 1e-12 {
                assert!(matric_head(lo, &p) < matric_head(hi, &p));
            }
        }
    }

    #[test]
    fn conductivity_values() {
        let p = loam();
        assert!((conductivity(p.theta_s, &p) - 0.94e-3).abs() < 1e-18);
        assert!(conductivity(p.theta_r, &p) < 1e-12 * p.k_sat);

        // oracle: Mualem formula at s_e = 0.125/0.212
        let se: f64 = 0.125 / 0.212;
        let m = 1.0 - 1.0 / 1.56;
        let core = 1.0 - (1.0 - se.powf(1.0 / m)).powf(m);
        let expected = 0.94e-3 * se.sqrt() * core * core;
        let k = conductivity(0.2, &p);
        assert!((k - expected).abs() < 1e-18);
        assert!((k - 5.77e-6).abs() < 0.01e-6, "K = {k:e}");
    }

    #[test]
    fn potential_is_head_plus_elevation() {
        let p = loam();
        assert_eq!(hydraulic_potential(p.theta_s, 0.0, &p), 0.0);
        assert_eq!(hydraulic_potential(p.theta_s, 30.0, &p), 30.0);
        let h = hydraulic_potential(0.2, 10.0, &p);
        assert!((h - (-50.35)).abs() < 0.05, "H = {h}");
        // affine in z at fixed theta
        let d1 = hydraulic_potential(0.2, 7.0, &p) - hydraulic_potential(0.2, 3.0, &p);
        assert!((d1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn retention_round_trip() {
        for p in [
            loam(),
            SoilParams::new(0.1060, 0.4686, 0.0104, 1.3954, 1.5162e-4).unwrap(),
            SoilParams::new(0.0286, 0.3658, 0.0280, 2.2390, 0.0063).unwrap(),
        ] {
            let mut theta = p.theta_r + 1e-6;
            while theta <= p.theta_s {
                let h = matric_head(theta, &p);
                let back = water_content(h, &p);
                assert!(
                    (back - theta).abs() < 1e-10,
                    "round trip {theta} -> {h} -> {back}"
                );
                theta += (p.theta_s - p.theta_r) / 97.0;
            }
        }
    }

    #[test]
    fn conductivity_monotone_and_bounded() {
        for p in [
            loam(),
            SoilParams::new(0.1060, 0.4686, 0.0104, 1.3954, 1.5162e-4).unwrap(),
            SoilParams::new(0.0286, 0.3658, 0.0280, 2.2390, 0.0063).unwrap(),
        ] {
            let mut prev = -1.0;
            for i in 0..=1000 {
                let theta = i as f64 / 1000.0;
                let k = conductivity(theta, &p);
                assert!(k.is_finite() && (0.0..=p.k_sat * (1.0 + 1e-12)).contains(&k));
                assert!(k >= prev - 1e-18);
                prev = k;
            }
        }
    }

    #[test]
    fn no_non_finite_outputs_on_unit_interval() {
        let p = loam();
        for i in 0..=1000 {
            let theta = i as f64 / 1000.0;
            assert!(matric_head(theta, &p).is_finite());
            assert!(conductivity(theta, &p).is_finite());
            assert!(hydraulic_potential(theta, 15.0, &p).is_finite());
        }
    }
}
