//! Explicit Euler time integration with Dirichlet boundary enforcement.
//!
//! Each step advances `theta <- theta + dt * rhs(theta)`, overwrites the two
//! boundary nodes with the Dirichlet traces evaluated at the new time, then
//! clamps any node that left `[theta_r - tol, theta_s + tol]` back to the
//! physical range while counting the clamps. A non-finite update aborts the
//! run with the offending node, time, and right-hand-side norm — that is the
//! expected observable of the uniform/linear-kernel blow-up experiment.

use crate::chebyshev::{NodalField, Orientation, SpectralGrid};
use crate::operator::{OperatorError, RhsWorkspace};
use crate::soil::SoilParams;
use thiserror::Error;

/// Slack around the physical range before a clamp fires.
pub const RANGE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum StepError {
    #[error(
        "non-finite moisture update at node {node} (t = {t} s, step {step}, |rhs| = {rhs_norm:e})"
    )]
    NonFinite {
        node: usize,
        t: f64,
        step: u64,
        rhs_norm: f64,
    },
    #[error("initial condition out of [0, 1] at node {node}: {value}")]
    InvalidInitial { node: usize, value: f64 },
    #[error("time step must be positive, got {0}")]
    InvalidDt(f64),
    #[error("final time must be nonnegative, got {0}")]
    InvalidFinalTime(f64),
}

impl From<OperatorError> for StepError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::NonFinite { node } => StepError::NonFinite {
                node,
                t: f64::NAN,
                step: 0,
                rhs_norm: f64::NAN,
            },
            other => panic!("workspace/grid mismatch inside a run: {other}"),
        }
    }
}

/// One Dirichlet trace, constant or affine in time over `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryFunction {
    Constant(f64),
    /// Interpolates `start` at `t = 0` to `end` at `t = t_final`.
    AffineInT {
        start: f64,
        end: f64,
        t_final: f64,
    },
}

impl BoundaryFunction {
    pub fn value_at(&self, t: f64) -> f64 {
        match *self {
            BoundaryFunction::Constant(v) => v,
            BoundaryFunction::AffineInT {
                start,
                end,
                t_final,
            } => {
                if t_final == 0.0 {
                    start
                } else {
                    start + (end - start) * (t / t_final)
                }
            }
        }
    }
}

/// Dirichlet traces at the two physical boundaries: `top` at `z = phys_lo`
/// (the surface), `bottom` at `z = phys_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConditions {
    pub top: BoundaryFunction,
    pub bottom: BoundaryFunction,
}

impl BoundaryConditions {
    /// Node indices carrying the (top, bottom) traces for a grid.
    fn node_indices(grid: &SpectralGrid) -> (usize, usize) {
        match grid.orientation() {
            Orientation::LowAtPlusOne => (0, grid.n_modes()),
            Orientation::HighAtPlusOne => (grid.n_modes(), 0),
        }
    }
}

/// Per-state diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub theta_min: f64,
    pub theta_max: f64,
    /// Cumulative count of range clamps since the start of the run.
    pub clamp_count: u64,
    /// Max-abs right-hand side of the step that produced this state.
    pub rhs_norm: f64,
}

/// Moisture state at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub step_index: u64,
    pub theta: NodalField,
    pub diagnostics: Diagnostics,
}

fn scan_range(theta: &NodalField) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in theta.values() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Sample the initial profile at the grid nodes, overwrite the boundary
/// nodes with the Dirichlet traces at `t = 0`, and reject profiles outside
/// `[0, 1]`.
pub fn init_state(
    ic: impl Fn(f64) -> f64,
    grid: &SpectralGrid,
    bc: &BoundaryConditions,
) -> Result<SimState, StepError> {
    let mut theta = NodalField::sample_physical(grid, ic);
    for (node, &value) in theta.values().iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(StepError::InvalidInitial { node, value });
        }
    }
    let (top, bottom) = BoundaryConditions::node_indices(grid);
    theta.values_mut()[top] = bc.top.value_at(0.0);
    theta.values_mut()[bottom] = bc.bottom.value_at(0.0);
    let (theta_min, theta_max) = scan_range(&theta);
    Ok(SimState {
        t: 0.0,
        step_index: 0,
        theta,
        diagnostics: Diagnostics {
            theta_min,
            theta_max,
            clamp_count: 0,
            rhs_norm: 0.0,
        },
    })
}

/// One explicit Euler step.
pub fn step(
    state: &SimState,
    dt: f64,
    workspace: &RhsWorkspace,
    soil: &SoilParams,
    bc: &BoundaryConditions,
) -> Result<SimState, StepError> {
    if !(dt > 0.0) {
        return Err(StepError::InvalidDt(dt));
    }
    let rhs = match workspace.rhs_spectral(&state.theta, soil) {
        Ok(r) => r,
        Err(OperatorError::NonFinite { node }) => {
            return Err(StepError::NonFinite {
                node,
                t: state.t,
                step: state.step_index,
                rhs_norm: f64::NAN,
            })
        }
        Err(other) => return Err(other.into()),
    };
    let rhs_norm = rhs.max_abs();
    let t_next = state.t + dt;

    let mut theta = NodalField::new(
        state
            .theta
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(th, r)| th + dt * r)
            .collect(),
    );
    if let Some(node) = theta.first_non_finite() {
        return Err(StepError::NonFinite {
            node,
            t: t_next,
            step: state.step_index + 1,
            rhs_norm,
        });
    }

    let grid = workspace.coarse_grid();
    let (top, bottom) = BoundaryConditions::node_indices(grid);
    theta.values_mut()[top] = bc.top.value_at(t_next);
    theta.values_mut()[bottom] = bc.bottom.value_at(t_next);

    let mut clamps = state.diagnostics.clamp_count;
    for v in theta.values_mut() {
        if *v < soil.theta_r - RANGE_TOL {
            *v = soil.theta_r;
            clamps += 1;
        } else if *v > soil.theta_s + RANGE_TOL {
            *v = soil.theta_s;
            clamps += 1;
        }
    }

    let (theta_min, theta_max) = scan_range(&theta);
    Ok(SimState {
        t: t_next,
        step_index: state.step_index + 1,
        theta,
        diagnostics: Diagnostics {
            theta_min,
            theta_max,
            clamp_count: clamps,
            rhs_norm,
        },
    })
}

/// A simulation's snapshots, in time order. The final entry is the state at
/// the final time.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<SimState>,
    pub steps_taken: u64,
}

impl Trajectory {
    pub fn final_state(&self) -> &SimState {
        self.snapshots
            .last()
            .expect("a trajectory holds at least the initial state")
    }
}

/// Integrate from `t = 0` to `t_final` with fixed `dt`, emitting
/// `snapshots + 1` states (including the initial one) at a uniform step
/// cadence. `t_final = 0` returns just the initial snapshot.
pub fn run(
    ic: impl Fn(f64) -> f64,
    workspace: &RhsWorkspace,
    soil: &SoilParams,
    bc: &BoundaryConditions,
    t_final: f64,
    dt: f64,
    snapshots: usize,
) -> Result<Trajectory, (Trajectory, StepError)> {
    let init = match init_state(&ic, workspace.coarse_grid(), bc) {
        Ok(s) => s,
        Err(e) => {
            return Err((
                Trajectory {
                    snapshots: Vec::new(),
                    steps_taken: 0,
                },
                e,
            ))
        }
    };
    if !(t_final >= 0.0) {
        return Err((
            Trajectory {
                snapshots: vec![init],
                steps_taken: 0,
            },
            StepError::InvalidFinalTime(t_final),
        ));
    }
    let n_steps = if t_final == 0.0 {
        0
    } else {
        (t_final / dt).round().max(1.0) as u64
    };
    let cadence = snapshot_steps(n_steps, snapshots);

    let mut out = Vec::with_capacity(cadence.len() + 1);
    let mut state = init;
    out.push(state.clone());
    let mut next_snap = 0usize;
    for k in 1..=n_steps {
        state = match step(&state, dt, workspace, soil, bc) {
            Ok(s) => s,
            Err(e) => {
                return Err((
                    Trajectory {
                        snapshots: out,
                        steps_taken: k - 1,
                    },
                    e,
                ))
            }
        };
        if next_snap < cadence.len() && cadence[next_snap] == k {
            out.push(state.clone());
            next_snap += 1;
        }
    }
    Ok(Trajectory {
        snapshots: out,
        steps_taken: n_steps,
    })
}

/// Step indices at which snapshots are emitted (excluding step 0).
fn snapshot_steps(n_steps: u64, snapshots: usize) -> Vec<u64> {
    if n_steps == 0 || snapshots == 0 {
        return if n_steps == 0 { vec![] } else { vec![n_steps] };
    }
    let k = snapshots.min(n_steps as usize) as u64;
    let mut out: Vec<u64> = (1..=k).map(|i| i * n_steps / k).collect();
    out.dedup();
    if *out.last().unwrap() != n_steps {
        out.push(n_steps);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelFamily;
    use crate::soil::SoilParams;

    fn loam() -> SoilParams {
        SoilParams::new(0.075, 0.287, 0.036, 1.56, 0.94e-3).unwrap()
    }

    fn workspace(n: usize, z_max: f64) -> RhsWorkspace {
        let grid = SpectralGrid::new(n, 0.0, z_max, Orientation::LowAtPlusOne).unwrap();
        RhsWorkspace::new(&grid, KernelFamily::Distributed, 0.15).unwrap()
    }

    #[test]
    fn initial_profile_endpoints() {
        // affine profile of the first scenario: 0.2234 - (1 - z/Z) * 0.0848/2
        let z_max = 30.0;
        let grid = SpectralGrid::new(10, 0.0, z_max, Orientation::LowAtPlusOne).unwrap();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.2234),
            bottom: BoundaryFunction::Constant(0.1368),
        };
        let ic = |z: f64| 0.2234 - (1.0 - z / z_max) * 0.0848 / 2.0;
        assert!((ic(0.0) - 0.1810).abs() < 1e-12);
        assert!((ic(z_max) - 0.2234).abs() < 1e-12);
        let state = init_state(ic, &grid, &bc).unwrap();
        // boundary overwrite wins at the nodes
        assert_eq!(state.theta[0], 0.2234);
        assert_eq!(state.theta[10], 0.1368);
    }

    #[test]
    fn constant_profile_with_overwrite() {
        let grid = SpectralGrid::new(8, 0.0, 30.0, Orientation::LowAtPlusOne).unwrap();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.25),
            bottom: BoundaryFunction::Constant(0.12),
        };
        let state = init_state(|_| 0.2, &grid, &bc).unwrap();
        assert_eq!(state.theta[0], 0.25);
        assert_eq!(state.theta[8], 0.12);
        for &v in &state.theta.values()[1..8] {
            assert_eq!(v, 0.2);
        }
    }

    #[test]
    fn cubic_profile_value_at_surface() {
        // nonlinear profile -0.05 (z/Z)^3 + 0.25 evaluates to 0.25 at z = 0
        let ic = |z: f64| -0.05 * (z / 70.0f64).powi(3) + 0.25;
        assert!((ic(0.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_initial_rejected() {
        let grid = SpectralGrid::new(8, 0.0, 30.0, Orientation::LowAtPlusOne).unwrap();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.2),
            bottom: BoundaryFunction::Constant(0.2),
        };
        assert!(matches!(
            init_state(|_| 1.5, &grid, &bc),
            Err(StepError::InvalidInitial { .. })
        ));
    }

    #[test]
    fn zero_rhs_leaves_state_unchanged() {
        let w = workspace(8, 30.0);
        let soil = loam();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(soil.theta_r),
            bottom: BoundaryFunction::Constant(soil.theta_r),
        };
        let s0 = init_state(|_| soil.theta_r, &w.coarse_grid().clone(), &bc).unwrap();
        let s1 = step(&s0, 0.5, &w, &soil, &bc).unwrap();
        assert_eq!(s1.theta, s0.theta);
        assert!((s1.t - 0.5).abs() < 1e-15);
        assert_eq!(s1.step_index, 1);
    }

    /// Soil with conductivity small enough to underflow every interaction
    /// term: the degenerate K = 0 configuration.
    fn inert_soil() -> SoilParams {
        SoilParams::new(0.075, 0.287, 0.036, 1.56, 1e-300).unwrap()
    }

    #[test]
    fn constant_sink_advances_interior_linearly() {
        let mut w = workspace(8, 30.0);
        let soil = inert_soil();
        let c = 1.0e-4;
        w.set_sink_constant(c);
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.2),
            bottom: BoundaryFunction::Constant(0.2),
        };
        let dt = 0.25;
        let s0 = init_state(|_| 0.2, &w.coarse_grid().clone(), &bc).unwrap();
        let s1 = step(&s0, dt, &w, &soil, &bc).unwrap();
        let s2 = step(&s1, dt, &w, &soil, &bc).unwrap();
        for h in 1..8 {
            assert!((s1.theta[h] - (0.2 + dt * c)).abs() < 1e-15);
            assert!((s2.theta[h] - (0.2 + 2.0 * dt * c)).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_traces_are_exact_after_every_step() {
        let w = workspace(8, 30.0);
        let soil = loam();
        let bc = BoundaryConditions {
            top: BoundaryFunction::AffineInT {
                start: 0.2234,
                end: 0.181,
                t_final: 10.0,
            },
            bottom: BoundaryFunction::AffineInT {
                start: 0.1368,
                end: 0.1174,
                t_final: 10.0,
            },
        };
        let mut state = init_state(|_| 0.2, &w.coarse_grid().clone(), &bc).unwrap();
        for _ in 0..20 {
            state = step(&state, 0.5, &w, &soil, &bc).unwrap();
            assert_eq!(state.theta[0], bc.top.value_at(state.t));
            assert_eq!(state.theta[8], bc.bottom.value_at(state.t));
        }
    }

    #[test]
    fn sink_only_trajectory_matches_exact_solution() {
        // with K = 0 the scheme is exact for any dt: theta = theta0 + t c
        for dt in [0.1, 0.5, 2.0] {
            let mut w = workspace(8, 30.0);
            let soil = inert_soil();
            let c = 5.0e-5;
            w.set_sink_constant(c);
            let theta0 = 0.2;
            let bc = BoundaryConditions {
                top: BoundaryFunction::AffineInT {
                    start: theta0,
                    end: theta0 + 10.0 * c,
                    t_final: 10.0,
                },
                bottom: BoundaryFunction::AffineInT {
                    start: theta0,
                    end: theta0 + 10.0 * c,
                    t_final: 10.0,
                },
            };
            let traj = run(|_| theta0, &w, &soil, &bc, 10.0, dt, 5).unwrap();
            for snap in &traj.snapshots {
                for &v in snap.theta.values() {
                    assert!(
                        (v - (theta0 + snap.t * c)).abs() < 1e-12,
                        "dt {dt}, t {}: {v}",
                        snap.t
                    );
                }
            }
        }
    }

    #[test]
    fn zero_duration_returns_initial_only() {
        let w = workspace(8, 30.0);
        let soil = loam();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.2),
            bottom: BoundaryFunction::Constant(0.2),
        };
        let traj = run(|_| 0.2, &w, &soil, &bc, 0.0, 0.1, 5).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(traj.steps_taken, 0);
        assert_eq!(traj.final_state().t, 0.0);
    }

    #[test]
    fn snapshot_cadence_counts() {
        assert_eq!(
            snapshot_steps(1000, 10),
            (1..=10).map(|i| i * 100).collect::<Vec<_>>()
        );
        assert_eq!(snapshot_steps(5, 10), vec![1, 2, 3, 4, 5]);
        assert_eq!(snapshot_steps(0, 10), Vec::<u64>::new());
    }

    #[test]
    fn determinism_bitwise() {
        let w = workspace(12, 30.0);
        let soil = loam();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.22),
            bottom: BoundaryFunction::Constant(0.14),
        };
        let ic = |z: f64| 0.14 + 0.08 * (z / 30.0);
        let a = run(ic, &w, &soil, &bc, 5.0, 0.05, 4).unwrap();
        let b = run(ic, &w, &soil, &bc, 5.0, 0.05, 4).unwrap();
        assert_eq!(a.snapshots.len(), b.snapshots.len());
        for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
            assert_eq!(x.theta, y.theta);
        }
    }

    #[test]
    fn flipped_orientation_swaps_boundary_nodes() {
        let grid = SpectralGrid::new(8, 0.0, 30.0, Orientation::HighAtPlusOne).unwrap();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.25),
            bottom: BoundaryFunction::Constant(0.12),
        };
        let state = init_state(|_| 0.2, &grid, &bc).unwrap();
        // z = 0 (the top trace) now sits at the last node
        assert_eq!(state.theta[8], 0.25);
        assert_eq!(state.theta[0], 0.12);
    }

    #[test]
    fn injected_nan_surfaces_as_step_failure() {
        let w = workspace(8, 30.0);
        let soil = loam();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.2),
            bottom: BoundaryFunction::Constant(0.2),
        };
        let mut state = init_state(|_| 0.2, &w.coarse_grid().clone(), &bc).unwrap();
        state.theta.values_mut()[4] = f64::NAN;
        match step(&state, 0.1, &w, &soil, &bc) {
            Err(StepError::NonFinite { .. }) => {}
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }
}
