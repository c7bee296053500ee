//! Planar bimanual tactile manipulation benchmark.
//!
//! Two velocity-commanded tool-centre-points (TCPs) with circular tactile
//! tips push rigid objects on a frictional plane under a quasi-static
//! contact model. Three episodic tasks — bi-pushing, bi-reorienting and
//! bi-gathering — expose a uniform reset/step interface with shaped
//! rewards, a subgoal goal-update mechanism, a two-phase curriculum and
//! random force perturbations. A self-contained PPO learner, scripted
//! controllers and an experiment runner sit on top.
//!
//! Entry points:
//! - [`config::RunConfig`] — load/validate a run configuration.
//! - [`tasks::TaskEnv`] — the episodic environments.
//! - [`policy`] — PPO training, checkpoints, scripted controllers.
//! - [`bench`] — train/eval/ablate/sweep/replay experiment commands.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod bench;
pub mod config;
pub mod error;
pub mod geom;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod tactile;
pub mod tasks;

pub use config::{RunConfig, TaskKind};
pub use error::{Error, Result};
pub use geom::{angle_dist, wrap_angle, Pose2};
pub use rng::SeededRng;
