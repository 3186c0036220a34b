//! Scalar quadrature helpers shared by the kernel normalization and the
//! direct-quadrature operator oracle.
//!
//! Adaptive integration bisects on a Gauss-Kronrod 7-15 panel; the composite
//! Simpson rule below is the workhorse of the right-hand-side oracle, applied
//! per smooth piece between known kink points of the integrand.

// node/weight tables carry their full published precision
#![allow(clippy::excessive_precision)]

/// Kronrod abscissae for the G7-K15 pair (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639207,
    0.949107912342758524526,
    0.864864423359769072790,
    0.741531185599394439864,
    0.586087235467691130294,
    0.405845151377397166907,
    0.207784955007898467601,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224964,
    0.063092092629978553291,
    0.104790010322250183840,
    0.140653259715525918745,
    0.169004726639267902827,
    0.190350578064785409913,
    0.204432940075298892414,
    0.209482141084727828013,
];

/// 7-point Gauss weights for abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693271,
    0.279705391489276667901,
    0.381830050505118944950,
    0.417959183673469387755,
];

/// One Gauss-Kronrod 7-15 panel over `[a, b]`: returns the K15 value and an
/// error estimate from the G7/K15 difference.
pub fn gauss_kronrod_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gauss_kronrod_panel(f, a, b);
        if err <= tol || depth >= 48 || (b - a).abs() < 1e-14 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// Adaptive integration with mandatory subdivision at the interior
/// `split_points` (kinks of the integrand), so each adaptive panel sees a
/// smooth function.
pub fn adaptive_split(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    split_points: &[f64],
) -> f64 {
    let mut cuts: Vec<f64> = split_points
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let piece_tol = tol / cuts.len() as f64;
    cuts.windows(2)
        .map(|w| adaptive(f, w[0], w[1], piece_tol))
        .sum()
}

/// Composite Simpson rule with `intervals` subintervals (rounded up to an
/// even count) over `[a, b]`.
pub fn composite_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_is_exact_for_high_degree_polynomials() {
        // K15 integrates polynomials up to degree 22 exactly; this doubles as
        // a transcription check of the node/weight tables.
        let f = |x: f64| 5.0 * x.powi(12) - 3.0 * x.powi(7) + x.powi(4) - 2.0;
        let (value, _) = gauss_kronrod_panel(&f, -1.0, 1.0);
        let exact = 2.0 * (5.0 / 13.0 + 1.0 / 5.0 - 2.0);
        assert!((value - exact).abs() < 1e-13, "{value} vs {exact}");
    }

    #[test]
    fn adaptive_matches_analytic_integrals() {
        let v = adaptive(&f64::exp, -1.0, 1.0, 1e-12);
        let exact = 1f64.exp() - (-1f64).exp();
        assert!((v - exact).abs() < 1e-12);

        let v = adaptive(&|x: f64| 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, 1e-12);
        let exact = 2.0 / 5.0 * (5.0f64).atan();
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn split_handles_kinks() {
        let f = |x: f64| x.abs();
        let v = adaptive_split(&f, -1.0, 1.0, 1e-13, &[0.0]);
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_converges_fourth_order() {
        let f = |x: f64| (7.5 * x).sin() + (4.0 * x).cos();
        let exact = 2.0 * (4.0f64).sin() / 4.0;
        let coarse = (composite_simpson(&f, -1.0, 1.0, 8) - exact).abs();
        let fine = (composite_simpson(&f, -1.0, 1.0, 16) - exact).abs();
        assert!(fine < coarse / 12.0, "coarse {coarse}, fine {fine}");
    }
}
