//! Scenario execution: build the engine out of a [`SimConfig`], integrate,
//! and collect a [`TrajectoryRecord`], keeping whatever was computed when a
//! run aborts.

use crate::chebyshev::SpectralGrid;
use crate::config::SimConfig;
use crate::operator::{OperatorError, RhsWorkspace};
use crate::output::TrajectoryRecord;
use crate::stepper::{run, StepError, Trajectory};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Step(#[from] StepError),
}

/// A finished (or aborted) scenario.
#[derive(Debug)]
pub struct ScenarioOutcome {
    pub record: TrajectoryRecord,
    pub trajectory: Trajectory,
    /// The step failure that ended the run early, if any.
    pub failure: Option<StepError>,
}

impl ScenarioOutcome {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Build the grid and workspace a config describes.
pub fn build_workspace(config: &SimConfig) -> Result<(SpectralGrid, RhsWorkspace), OperatorError> {
    let grid = SpectralGrid::new(config.n_modes, 0.0, config.z_max, config.orientation)?;
    let mut workspace = RhsWorkspace::new(&grid, config.kernel_family, config.delta)?;
    workspace.set_sink_constant(config.sink_rate());
    Ok((grid, workspace))
}

/// Run a scenario to completion or first failure.
pub fn run_scenario(config: &SimConfig) -> Result<ScenarioOutcome, ScenarioError> {
    let (grid, workspace) = build_workspace(config)?;
    let bc = config.boundary_conditions();
    let ic = |z: f64| config.ic.evaluate(z, config.z_max);
    match run(
        ic,
        &workspace,
        &config.soil,
        &bc,
        config.t_final,
        config.dt,
        config.snapshots,
    ) {
        Ok(trajectory) => {
            let record = TrajectoryRecord::from_trajectory(config, &grid, &trajectory, None);
            Ok(ScenarioOutcome {
                record,
                trajectory,
                failure: None,
            })
        }
        Err((partial, err)) => {
            if partial.snapshots.is_empty() {
                // the initial condition itself was rejected
                return Err(err.into());
            }
            let record =
                TrajectoryRecord::from_trajectory(config, &grid, &partial, Some(err.to_string()));
            Ok(ScenarioOutcome {
                record,
                trajectory: partial,
                failure: Some(err),
            })
        }
    }
}
