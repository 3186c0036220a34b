//! Chebyshev spectral core.
//!
//! Grids of Gauss-Lobatto collocation points `z_h = cos(h pi / N)`, the
//! discrete Chebyshev transform pair, exact coefficient-space products of two
//! series, convolution by coefficient-wise multiplication, and projection
//! error measurement in the weighted discrete L2 norm.
//!
//! The fast transform path goes through a complex FFT of the even-symmetric
//! extension of the nodal data (one plan per grid, reused by forward and
//! inverse). The O(N^2) summation of the defining formulas is retained in
//! [`forward_direct`] / [`inverse_direct`] as the test oracle.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

/// Errors from grid construction and transform plumbing.
#[derive(Debug, Error)]
pub enum ChebError {
    #[error("n_modes must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("degenerate physical interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("nodal field has {found} values, grid needs {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("series degree {found} exceeds grid degree {expected}")]
    DegreeTooLarge { expected: usize, found: usize },
    #[error("series degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cannot pad a series of degree {from} down to degree {to}")]
    PadBelowDegree { from: usize, to: usize },
}

/// Which physical endpoint sits at the reference node `z_0 = +1`.
///
/// By default the low physical coordinate (the soil surface, `z = 0`) maps to
/// reference `+1`; the flag exists so the sign of the gravity term can never
/// hide in an implicit convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `phys_lo` at reference `+1` (node index 0). Default.
    LowAtPlusOne,
    /// `phys_hi` at reference `+1`.
    HighAtPlusOne,
}

/// Gauss-Lobatto collocation grid on `[-1, 1]` with an affine map onto a
/// physical interval.
///
/// Carries the quadrature weights `w_h` and normalization constants
/// `gamma_k` of the discrete Chebyshev transform, plus one FFT plan of size
/// `2N` shared by the forward and inverse fast paths.
#[derive(Clone)]
pub struct SpectralGrid {
    n_modes: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    gammas: Vec<f64>,
    phys_lo: f64,
    phys_hi: f64,
    map_scale: f64,
    map_offset: f64,
    orientation: Orientation,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n_modes", &self.n_modes)
            .field("phys_lo", &self.phys_lo)
            .field("phys_hi", &self.phys_hi)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl SpectralGrid {
    /// Build a grid with `n_modes` collocation intervals (`n_modes + 1`
    /// nodes) mapped onto `[phys_lo, phys_hi]`.
    pub fn new(
        n_modes: usize,
        phys_lo: f64,
        phys_hi: f64,
        orientation: Orientation,
    ) -> Result<Self, ChebError> {
        if n_modes < 2 {
            return Err(ChebError::DegreeTooSmall(n_modes));
        }
        if !(phys_lo < phys_hi) || !phys_lo.is_finite() || !phys_hi.is_finite() {
            return Err(ChebError::DegenerateInterval(phys_lo, phys_hi));
        }
        let n = n_modes;
        // cos(h pi / N) written as sin(pi (N - 2h) / (2N)): identical in exact
        // arithmetic, but the integer antisymmetry of the argument makes the
        // grid exactly palindromic (z_{N-h} == -z_h) and puts an exact zero at
        // the midpoint of even grids.
        let nodes: Vec<f64> = (0..=n)
            .map(|h| {
                let k = n as f64 - 2.0 * h as f64;
                (PI * k / (2.0 * n as f64)).sin()
            })
            .collect();
        let mut weights = vec![PI / n as f64; n + 1];
        weights[0] = PI / (2.0 * n as f64);
        weights[n] = PI / (2.0 * n as f64);
        let mut gammas = vec![PI / 2.0; n + 1];
        gammas[0] = PI;
        gammas[n] = PI;

        // phys = map_offset + map_scale * zeta
        let half = 0.5 * (phys_hi - phys_lo);
        let map_scale = match orientation {
            Orientation::LowAtPlusOne => -half,
            Orientation::HighAtPlusOne => half,
        };
        let map_offset = 0.5 * (phys_lo + phys_hi);

        let fft = FftPlanner::new().plan_fft_forward(2 * n);

        Ok(SpectralGrid {
            n_modes,
            nodes,
            weights,
            gammas,
            phys_lo,
            phys_hi,
            map_scale,
            map_offset,
            orientation,
            fft,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Number of collocation nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.n_modes + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reference nodes, strictly decreasing from `+1` to `-1`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights `w_h` (`pi/2N` at the ends, `pi/N` inside).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Transform normalization constants `gamma_k` (`pi` at `k = 0, N`,
    /// `pi/2` inside).
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn phys_lo(&self) -> f64 {
        self.phys_lo
    }

    pub fn phys_hi(&self) -> f64 {
        self.phys_hi
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Signed slope of the reference-to-physical map.
    pub fn map_scale(&self) -> f64 {
        self.map_scale
    }

    pub fn map_offset(&self) -> f64 {
        self.map_offset
    }

    /// |d phys / d zeta|, the Jacobian of the affine map.
    pub fn jacobian(&self) -> f64 {
        self.map_scale.abs()
    }

    pub fn ref_to_phys(&self, zeta: f64) -> f64 {
        self.map_offset + self.map_scale * zeta
    }

    pub fn phys_to_ref(&self, z: f64) -> f64 {
        (z - self.map_offset) / self.map_scale
    }

    /// Physical coordinates of the collocation nodes, in node order.
    pub fn physical_nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|&z| self.ref_to_phys(z)).collect()
    }

    /// Discrete Chebyshev transform: nodal values to coefficients
    /// `u_k = (1/gamma_k) sum_h u(z_h) T_k(z_h) w_h`, computed in
    /// O(N log N) through the even extension FFT.
    pub fn forward(&self, u: &NodalField) -> Result<ChebSeries, ChebError> {
        let n = self.n_modes;
        if u.len() != n + 1 {
            return Err(ChebError::LengthMismatch {
                expected: n + 1,
                found: u.len(),
            });
        }
        let v = u.values();
        let mut buf = vec![Complex::new(0.0, 0.0); 2 * n];
        for (j, &x) in v.iter().enumerate() {
            buf[j].re = x;
        }
        for j in 1..n {
            buf[2 * n - j].re = v[j];
        }
        self.fft.process(&mut buf);
        let scale_end = 1.0 / (2.0 * n as f64);
        let scale_mid = 1.0 / n as f64;
        let coeffs = (0..=n)
            .map(|k| {
                let s = if k == 0 || k == n {
                    scale_end
                } else {
                    scale_mid
                };
                buf[k].re * s
            })
            .collect();
        Ok(ChebSeries::new(coeffs))
    }

    /// Inverse discrete Chebyshev transform: `u(z_h) = sum_k u_k T_k(z_h)`.
    ///
    /// Series of degree below `N` are padded implicitly; a degree above `N`
    /// is an error.
    pub fn inverse(&self, c: &ChebSeries) -> Result<NodalField, ChebError> {
        let n = self.n_modes;
        if c.degree() > n {
            return Err(ChebError::DegreeTooLarge {
                expected: n,
                found: c.degree(),
            });
        }
        let coeffs = c.coeffs();
        let at = |k: usize| -> f64 {
            if k < coeffs.len() {
                coeffs[k]
            } else {
                0.0
            }
        };
        let mut buf = vec![Complex::new(0.0, 0.0); 2 * n];
        buf[0].re = at(0);
        buf[n].re = at(n);
        for k in 1..n {
            let half = 0.5 * at(k);
            buf[k].re = half;
            buf[2 * n - k].re = half;
        }
        self.fft.process(&mut buf);
        let values = (0..=n).map(|h| buf[h].re).collect();
        Ok(NodalField::new(values))
    }
}

/// Field of nodal values `u(z_h)`, dual to [`ChebSeries`].
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    values: Vec<f64>,
}

impl NodalField {
    pub fn new(values: Vec<f64>) -> Self {
        NodalField { values }
    }

    pub fn zeros(len: usize) -> Self {
        NodalField {
            values: vec![0.0; len],
        }
    }

    pub fn constant(c: f64, len: usize) -> Self {
        NodalField {
            values: vec![c; len],
        }
    }

    /// Sample a function of the physical coordinate at the grid nodes.
    pub fn sample_physical(grid: &SpectralGrid, f: impl Fn(f64) -> f64) -> Self {
        NodalField {
            values: grid
                .nodes()
                .iter()
                .map(|&z| f(grid.ref_to_phys(z)))
                .collect(),
        }
    }

    /// Sample a function of the reference coordinate at the grid nodes.
    pub fn sample_reference(grid: &SpectralGrid, f: impl Fn(f64) -> f64) -> Self {
        NodalField {
            values: grid.nodes().iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Index of the first non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<usize> for NodalField {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Chebyshev coefficient vector `u_k`, k = 0..=degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a Chebyshev series needs a constant term"
        );
        ChebSeries { coeffs }
    }

    pub fn zeros(degree: usize) -> Self {
        ChebSeries {
            coeffs: vec![0.0; degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Zero-pad to the requested degree; the represented function is
    /// unchanged.
    pub fn pad_to(&self, degree: usize) -> Result<ChebSeries, ChebError> {
        if degree < self.degree() {
            return Err(ChebError::PadBelowDegree {
                from: self.degree(),
                to: degree,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, 0.0);
        Ok(ChebSeries { coeffs })
    }

    /// Evaluate the series at one reference coordinate by the Clenshaw
    /// recurrence.
    pub fn evaluate(&self, z: f64) -> f64 {
        let c = &self.coeffs;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &ck in c.iter().skip(1).rev() {
            let b0 = 2.0 * z * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        z * b1 - b2 + c[0]
    }
}

/// Direct O(N^2) evaluation of the forward transform, the test oracle for
/// the FFT path. Chebyshev values come from the three-term recurrence at the
/// actual node coordinates, not from the cosine-angle identity the fast path
/// relies on.
pub fn forward_direct(u: &NodalField, grid: &SpectralGrid) -> Result<ChebSeries, ChebError> {
    let n = grid.n_modes();
    if u.len() != n + 1 {
        return Err(ChebError::LengthMismatch {
            expected: n + 1,
            found: u.len(),
        });
    }
    let mut coeffs = vec![0.0; n + 1];
    for h in 0..=n {
        let z = grid.nodes()[h];
        let wu = grid.weights()[h] * u[h];
        let mut t_prev = 1.0;
        let mut t_curr = z;
        coeffs[0] += wu;
        if n >= 1 {
            coeffs[1] += wu * z;
        }
        for c in coeffs.iter_mut().skip(2) {
            let t_next = 2.0 * z * t_curr - t_prev;
            *c += wu * t_next;
            t_prev = t_curr;
            t_curr = t_next;
        }
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c /= grid.gammas()[k];
    }
    Ok(ChebSeries::new(coeffs))
}

/// Direct O(N^2) inverse transform (Clenshaw evaluation at every node), the
/// test oracle for the FFT path.
pub fn inverse_direct(c: &ChebSeries, grid: &SpectralGrid) -> Result<NodalField, ChebError> {
    if c.degree() > grid.n_modes() {
        return Err(ChebError::DegreeTooLarge {
            expected: grid.n_modes(),
            found: c.degree(),
        });
    }
    Ok(NodalField::new(
        grid.nodes().iter().map(|&z| c.evaluate(z)).collect(),
    ))
}

/// Exact coefficients of the product of two degree-N series as a degree-2N
/// series, by the three-branch convolution formula for first-kind Chebyshev
/// polynomials.
pub fn series_product(a: &ChebSeries, b: &ChebSeries) -> Result<ChebSeries, ChebError> {
    if a.degree() != b.degree() {
        return Err(ChebError::DegreeMismatch(a.degree(), b.degree()));
    }
    let n = a.degree();
    let a = a.coeffs();
    let b = b.coeffs();
    let mut out = vec![0.0; 2 * n + 1];

    let mut s = 2.0 * a[0] * b[0];
    for l in 1..=n {
        s += a[l] * b[l];
    }
    out[0] = 0.5 * s;

    for j in 1..=n {
        let mut s = 0.0;
        for l in 0..=j {
            s += a[j - l] * b[l];
        }
        for l in 0..=(n - j) {
            s += a[j + l] * b[l];
        }
        for l in j..=n {
            s += a[l - j] * b[l];
        }
        out[j] = 0.5 * s;
    }

    for j in (n + 1)..=(2 * n) {
        let mut s = 0.0;
        for l in (j - n)..=n {
            s += a[j - l] * b[l];
        }
        out[j] = 0.5 * s;
    }

    Ok(ChebSeries::new(out))
}

/// Convolution by the transform prescription: multiply coefficient vectors
/// entrywise and evaluate the result at the nodes of `g`.
///
/// Both series must already live at the degree of `g`. This mirrors the
/// Fourier convolution identity verbatim; for Chebyshev expansions it is an
/// approximation whose discrepancy against direct quadrature is measured by
/// the operator test suite rather than assumed.
pub fn convolve(
    kernel_coeffs: &ChebSeries,
    field_coeffs: &ChebSeries,
    g: &SpectralGrid,
) -> Result<NodalField, ChebError> {
    if kernel_coeffs.degree() != g.n_modes() {
        return Err(ChebError::DegreeMismatch(
            kernel_coeffs.degree(),
            g.n_modes(),
        ));
    }
    if field_coeffs.degree() != g.n_modes() {
        return Err(ChebError::DegreeMismatch(
            field_coeffs.degree(),
            g.n_modes(),
        ));
    }
    let product = ChebSeries::new(
        kernel_coeffs
            .coeffs()
            .iter()
            .zip(field_coeffs.coeffs())
            .map(|(a, b)| a * b)
            .collect(),
    );
    g.inverse(&product)
}

/// Norms available for projection-error measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    /// Discrete L2 norm weighted by `1/sqrt(1 - z^2)` (Gauss-Lobatto
    /// quadrature with the grid weights).
    L2Weighted,
}

/// Distance between `u` and its degree-N discrete Chebyshev expansion in the
/// weighted L2 norm, measured by Gauss-Lobatto quadrature on a dense
/// reference grid (so that interpolation-at-nodes exactness cannot hide the
/// error).
pub fn projection_error(u: impl Fn(f64) -> f64, g: &SpectralGrid, _norm: ErrorNorm) -> f64 {
    let samples = NodalField::sample_reference(g, &u);
    let series = g
        .forward(&samples)
        .expect("sampled field matches its own grid");
    let m = (8 * g.n_modes()).max(512);
    let mut acc = 0.0;
    for h in 0..=m {
        let z = (PI * (m as f64 - 2.0 * h as f64) / (2.0 * m as f64)).sin();
        let w = if h == 0 || h == m {
            PI / (2.0 * m as f64)
        } else {
            PI / m as f64
        };
        let d = u(z) - series.evaluate(z);
        acc += w * d * d;
    }
    acc.sqrt()
}

/// Weights integrating plain `dz` (not the Chebyshev-weighted measure) over
/// `[-1, 1]` against nodal values on the grid: the Clenshaw-Curtis rule on
/// Gauss-Lobatto points. Exact for polynomials up to the grid degree.
pub fn clenshaw_curtis_weights(g: &SpectralGrid) -> Vec<f64> {
    let n = g.n_modes();
    (0..=n)
        .map(|h| {
            let theta = h as f64 * PI / n as f64;
            let mut s = 0.0;
            let mut j = 0usize;
            while j <= n {
                // integral of T_j over [-1,1]: 2/(1-j^2) for even j, 0 for odd
                let integral = 2.0 / (1.0 - (j * j) as f64);
                s += integral / g.gammas()[j] * (j as f64 * theta).cos();
                j += 2;
            }
            g.weights()[h] * s
        })
        .collect()
}

/// Barycentric Lagrange interpolation through Gauss-Lobatto nodal data.
///
/// Exact at the nodes; evaluates the degree-N interpolant elsewhere. The
/// simplified weights `(-1)^h` (halved at the endpoints) are the standard
/// Chebyshev-extreme-point form.
pub struct Barycentric {
    nodes: Vec<f64>,
    lambdas: Vec<f64>,
}

impl Barycentric {
    pub fn on_grid(g: &SpectralGrid) -> Self {
        let n = g.n_modes();
        let lambdas = (0..=n)
            .map(|h| {
                let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
                if h == 0 || h == n {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();
        Barycentric {
            nodes: g.nodes().to_vec(),
            lambdas,
        }
    }

    /// Evaluate the interpolant of `values` at reference coordinate `z`.
    pub fn eval(&self, values: &[f64], z: f64) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&zh, &lam), &v) in self.nodes.iter().zip(&self.lambdas).zip(values) {
            let d = z - zh;
            if d.abs() < 1e-300 {
                return v;
            }
            let t = lam / d;
            num += t * v;
            den += t;
        }
        num / den
    }
}
