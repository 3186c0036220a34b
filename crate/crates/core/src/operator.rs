//! Assembly of the nonlocal right-hand side.
//!
//! Two independent routes to
//!
//! ```text
//! L(theta)(z) = int phibar(z' - z) (K(z) + K(z'))/2 (H(z') - H(z)) dz' + S(z)
//! ```
//!
//! 1. [`RhsWorkspace::rhs_spectral`] — the collocated transform scheme: the
//!    integral is decomposed into
//!    `1/2 [ (phibar*Lambda) + K (phibar*H) - H (phibar*K) - beta Lambda ] + S`
//!    with `Lambda = K H`, every convolution realized as an inverse transform
//!    of coefficient-wise products on the `2N+1`-node grid (the product of
//!    two degree-N series has degree 2N, so every term is carried at that
//!    degree for consistency).
//! 2. [`rhs_quadrature_oracle`] — direct composite quadrature of the
//!    integral, independent of all transform code, used to characterize the
//!    spectral path.
//!
//! Physical units: `K` in cm/s, `H` in cm, kernel arguments in reference
//! coordinates; the affine map's Jacobian multiplies the integral once.

use crate::chebyshev::{
    clenshaw_curtis_weights, convolve, series_product, Barycentric, ChebError, NodalField,
    SpectralGrid,
};
use crate::kernel::{scaled_influence, KernelError, KernelFamily, KernelSpec};
use crate::soil::{conductivity, matric_head, SoilParams};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("non-finite right-hand side at node {node}")]
    NonFinite { node: usize },
    #[error(transparent)]
    Cheb(#[from] ChebError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Preassembled state for repeated right-hand-side evaluations on one grid:
/// the `2N` evaluation grid, the kernel samples and their transform, the
/// normalization `beta`, and the sink term on both grids.
#[derive(Debug, Clone)]
pub struct RhsWorkspace {
    coarse: SpectralGrid,
    fine: SpectralGrid,
    kernel: KernelSpec,
    kernel_coeffs: crate::chebyshev::ChebSeries,
    sink_coarse: NodalField,
    sink_fine: NodalField,
    gravity: bool,
}

impl RhsWorkspace {
    /// Build the workspace for a coarse grid of `N` collocation intervals.
    /// The evaluation grid has `2N` intervals on the same physical domain.
    pub fn new(
        coarse: &SpectralGrid,
        family: KernelFamily,
        delta: f64,
    ) -> Result<Self, OperatorError> {
        let fine = SpectralGrid::new(
            2 * coarse.n_modes(),
            coarse.phys_lo(),
            coarse.phys_hi(),
            coarse.orientation(),
        )?;
        let kernel = KernelSpec::for_grid(family, delta, &fine)?;
        let kernel_coeffs = fine.forward(&kernel.nodal_values)?;
        Ok(RhsWorkspace {
            sink_coarse: NodalField::zeros(coarse.len()),
            sink_fine: NodalField::zeros(fine.len()),
            coarse: coarse.clone(),
            fine,
            kernel,
            kernel_coeffs,
            gravity: true,
        })
    }

    pub fn coarse_grid(&self) -> &SpectralGrid {
        &self.coarse
    }

    pub fn fine_grid(&self) -> &SpectralGrid {
        &self.fine
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn beta(&self) -> f64 {
        self.kernel.beta.value
    }

    pub fn sink(&self) -> &NodalField {
        &self.sink_coarse
    }

    /// Constant volumetric sink (1/s) applied at every node.
    pub fn set_sink_constant(&mut self, value: f64) {
        self.sink_coarse = NodalField::constant(value, self.coarse.len());
        self.sink_fine = NodalField::constant(value, self.fine.len());
    }

    /// Sink profile sampled from a function of the physical coordinate.
    pub fn set_sink_profile(&mut self, f: impl Fn(f64) -> f64) {
        self.sink_coarse = NodalField::sample_physical(&self.coarse, &f);
        self.sink_fine = NodalField::sample_physical(&self.fine, &f);
    }

    /// Toggle the elevation term of the hydraulic potential. Only test
    /// harnesses turn gravity off (a flat saturated potential is otherwise
    /// unreachable).
    pub fn set_gravity(&mut self, on: bool) {
        self.gravity = on;
    }

    pub fn gravity(&self) -> bool {
        self.gravity
    }

    /// Nodal conductivity and total potential from the moisture content.
    fn soil_fields(&self, theta: &NodalField, soil: &SoilParams) -> (NodalField, NodalField) {
        let phys = self.coarse.physical_nodes();
        let mut k = Vec::with_capacity(theta.len());
        let mut h = Vec::with_capacity(theta.len());
        for (i, &t) in theta.values().iter().enumerate() {
            k.push(conductivity(t, soil));
            let z = if self.gravity { phys[i] } else { 0.0 };
            h.push(matric_head(t, soil) + z);
        }
        (NodalField::new(k), NodalField::new(h))
    }

    /// The collocated transform scheme, evaluated at the coarse nodes.
    ///
    /// `theta` lives on the `N+1` grid; `K` and `H` are lifted to the
    /// `2N+1` grid by zero padding their coefficient vectors, the bracket is
    /// assembled there, and the result is restricted back to the coarse
    /// nodes (which form an exact subset of the fine nodes).
    pub fn rhs_spectral(
        &self,
        theta: &NodalField,
        soil: &SoilParams,
    ) -> Result<NodalField, OperatorError> {
        let n = self.coarse.n_modes();
        if theta.len() != n + 1 {
            return Err(OperatorError::Cheb(ChebError::LengthMismatch {
                expected: n + 1,
                found: theta.len(),
            }));
        }
        let (k_nodal, h_nodal) = self.soil_fields(theta, soil);
        let k_hat = self.coarse.forward(&k_nodal)?;
        let h_hat = self.coarse.forward(&h_nodal)?;
        let lambda_hat = series_product(&h_hat, &k_hat)?;
        let k_pad = k_hat.pad_to(2 * n)?;
        let h_pad = h_hat.pad_to(2 * n)?;

        let conv_lambda = convolve(&self.kernel_coeffs, &lambda_hat, &self.fine)?;
        let conv_h = convolve(&self.kernel_coeffs, &h_pad, &self.fine)?;
        let conv_k = convolve(&self.kernel_coeffs, &k_pad, &self.fine)?;
        let k_fine = self.fine.inverse(&k_pad)?;
        let h_fine = self.fine.inverse(&h_pad)?;
        let lambda_fine = self.fine.inverse(&lambda_hat)?;

        let beta = self.kernel.beta.value;
        let jac = self.coarse.jacobian();
        let mut out = Vec::with_capacity(n + 1);
        for h in 0..=n {
            let i = 2 * h; // coarse node h coincides with fine node 2h
            let bracket = conv_lambda[i] + k_fine[i] * conv_h[i]
                - h_fine[i] * conv_k[i]
                - beta * lambda_fine[i];
            out.push(0.5 * jac * bracket + self.sink_coarse[h]);
        }
        let field = NodalField::new(out);
        if let Some(node) = field.first_non_finite() {
            return Err(OperatorError::NonFinite { node });
        }
        Ok(field)
    }
}

/// Direct-quadrature evaluation of the nonlocal operator at the grid nodes:
/// for each collocation point, the integrand is integrated over the whole
/// reference domain by a composite Simpson rule split at the kernel's kink
/// points, with `K` and `H` interpolated barycentrically from their nodal
/// values. Entirely independent of the transform machinery.
///
/// `mesh_mult` scales the auxiliary mesh: the budget is
/// `mesh_mult * (2N + 1)` points across `[-1, 1]`.
pub fn rhs_quadrature_oracle(
    theta: &NodalField,
    grid: &SpectralGrid,
    kernel: &KernelSpec,
    soil: &SoilParams,
    sink: &NodalField,
    gravity: bool,
    mesh_mult: usize,
) -> NodalField {
    assert_eq!(theta.len(), grid.len(), "theta length must match the grid");
    assert_eq!(sink.len(), grid.len(), "sink length must match the grid");
    let phys = grid.physical_nodes();
    let k_nodal: Vec<f64> = theta
        .values()
        .iter()
        .map(|&t| conductivity(t, soil))
        .collect();
    let h_nodal: Vec<f64> = theta
        .values()
        .iter()
        .enumerate()
        .map(|(i, &t)| matric_head(t, soil) + if gravity { phys[i] } else { 0.0 })
        .collect();

    let bary = Barycentric::on_grid(grid);
    let budget = mesh_mult * (2 * grid.n_modes() + 1);
    let jac = grid.jacobian();

    // kink offsets of phibar(u) relative to the collocation point
    let offsets: Vec<f64> = match kernel.family {
        KernelFamily::Distributed => vec![-(1.0 - kernel.delta), 1.0 - kernel.delta],
        _ => vec![
            -kernel.delta,
            -kernel.z_floor,
            0.0,
            kernel.z_floor,
            kernel.delta,
        ],
    };

    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(h, &zeta)| {
            let k_here = k_nodal[h];
            let h_here = h_nodal[h];
            let integrand = |zp: f64| {
                let phibar =
                    scaled_influence(kernel.family, kernel.delta, zp - zeta, kernel.z_floor);
                if phibar == 0.0 {
                    return 0.0;
                }
                let k_there = bary.eval(&k_nodal, zp);
                let h_there = bary.eval(&h_nodal, zp);
                phibar * 0.5 * (k_here + k_there) * (h_there - h_here)
            };
            let mut cuts: Vec<f64> = offsets
                .iter()
                .map(|o| zeta + o)
                .filter(|&x| x > -1.0 && x < 1.0)
                .collect();
            cuts.push(-1.0);
            cuts.push(1.0);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            let mut integral = 0.0;
            for w in cuts.windows(2) {
                let len = w[1] - w[0];
                let intervals = ((budget as f64) * len / 2.0).ceil() as usize;
                integral += crate::quadrature::composite_simpson(&integrand, w[0], w[1], intervals);
            }
            jac * integral + sink[h]
        })
        .collect();

    NodalField::new(values)
}

/// Quadrature-weighted integral of the interaction part of an oracle
/// right-hand side: `int (rhs - sink) dz` over the physical domain
/// (Clenshaw-Curtis weights on the collocation nodes). Pairwise moisture
/// exchanges cancel, so on a closed domain this vanishes to quadrature
/// tolerance.
pub fn mass_balance(rhs: &NodalField, grid: &SpectralGrid, sink: &NodalField) -> f64 {
    assert_eq!(rhs.len(), grid.len());
    assert_eq!(sink.len(), grid.len());
    let cc = clenshaw_curtis_weights(grid);
    let jac = grid.jacobian();
    rhs.values()
        .iter()
        .zip(sink.values())
        .zip(&cc)
        .map(|((r, s), w)| (r - s) * w * jac)
        .sum()
}
