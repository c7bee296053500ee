//! Per-episode logs: one row per step plus terminal status, exportable as
//! CSV (documented column schema, see `docs/formats.md`) and JSON.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Event {
    Perturbation { force: f64, direction: f64, target: usize },
    /// The subgoal target line was rebuilt.
    GoalUpdate,
    /// Rebuild skipped because the anchors coincided.
    GumDegenerate,
    /// Pushing waypoint or reorientation subgoal advanced to `index`.
    SubgoalAdvance { index: usize },
}

impl Event {
    fn encode(&self) -> String {
        match self {
            Event::Perturbation { force, direction, target } => {
                format!("perturbation:{force}:{direction}:{target}")
            }
            Event::GoalUpdate => "goal_update".to_string(),
            Event::GumDegenerate => "gum_degenerate".to_string(),
            Event::SubgoalAdvance { index } => format!("subgoal_advance:{index}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalStatus {
    Running,
    Success,
    Timeout,
    WorkspaceViolation { arm: usize },
}

impl TerminalStatus {
    pub fn label(&self) -> String {
        match self {
            TerminalStatus::Running => "running".into(),
            TerminalStatus::Success => "success".into(),
            TerminalStatus::Timeout => "timeout".into(),
            TerminalStatus::WorkspaceViolation { arm } => format!("workspace_violation:{arm}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub step: usize,
    /// `[x, y, theta]` per object.
    pub object_poses: Vec<[f64; 3]>,
    pub tcp_poses: [[f64; 3]; 2],
    pub action: Vec<f64>,
    pub reward: f64,
    /// Signed reward terms; they sum to `reward`.
    pub terms: Vec<(String, f64)>,
    pub depths: [f64; 2],
    pub tilts: [f64; 2],
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub task: String,
    pub seed: u64,
    /// Goal family tag: linear | sinusoid | fixed_angle | gathering.
    pub goal_kind: String,
    /// Family parameters: `[k]`, `[a]`, `[goal_theta]` or `[epsilon]`.
    pub goal_params: Vec<f64>,
    /// Pushing waypoints / reorientation ladder as `[x, y, theta]`.
    pub waypoints: Vec<[f64; 3]>,
    /// Object poses at reset, `[x, y, theta]` each.
    pub start_poses: Vec<[f64; 3]>,
    pub steps: Vec<StepRow>,
    pub status: TerminalStatus,
}

impl EpisodeRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per step. Columns: `step`, per-object pose triples, TCP pose
    /// triples, action components, `reward`, one column per reward term,
    /// contact depths/tilts, and a `;`-joined `events` column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let n_obj = self.steps.first().map_or(0, |r| r.object_poses.len());
        let n_act = self.steps.first().map_or(0, |r| r.action.len());
        let term_names: Vec<String> = self
            .steps
            .first()
            .map(|r| r.terms.iter().map(|(n, _)| n.clone()).collect())
            .unwrap_or_default();

        let mut header = vec!["step".to_string()];
        for i in 0..n_obj {
            for c in ["x", "y", "theta"] {
                header.push(format!("obj{}_{c}", i + 1));
            }
        }
        for i in 0..2 {
            for c in ["x", "y", "theta"] {
                header.push(format!("tcp{}_{c}", i + 1));
            }
        }
        for i in 0..n_act {
            header.push(format!("action_{i}"));
        }
        header.push("reward".to_string());
        for t in &term_names {
            header.push(format!("term_{t}"));
        }
        header.extend(["depth1", "depth2", "tilt1", "tilt2", "events"].map(String::from));
        out.push_str(&header.join(","));
        out.push('\n');

        for row in &self.steps {
            let mut cells: Vec<String> = vec![row.step.to_string()];
            for p in &row.object_poses {
                cells.extend(p.iter().map(|v| v.to_string()));
            }
            for p in &row.tcp_poses {
                cells.extend(p.iter().map(|v| v.to_string()));
            }
            cells.extend(row.action.iter().map(|v| v.to_string()));
            cells.push(row.reward.to_string());
            for (_, v) in &row.terms {
                cells.push(v.to_string());
            }
            cells.push(row.depths[0].to_string());
            cells.push(row.depths[1].to_string());
            cells.push(row.tilts[0].to_string());
            cells.push(row.tilts[1].to_string());
            let events: Vec<String> = row.events.iter().map(Event::encode).collect();
            cells.push(events.join(";"));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        let _ = writeln!(out, "# status,{}", self.status.label());
        out
    }
}
