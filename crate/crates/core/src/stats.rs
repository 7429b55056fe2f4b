//! Per-run accounting.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matching::MatchingStats;

/// Version of the JSON layout of [`RunStats`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// Two perfect matchings.
    Phase1,
    /// Cycle stitching.
    Phase2,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Phase1 => "phase1-failure",
            Phase::Phase2 => "phase2-failure",
        })
    }
}

/// The step of the pipeline that was running when a run failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    Setup,
    FirstMatching,
    SecondMatching,
    CycleCover,
    Greedy,
    AddCycle,
    Close,
}

impl Step {
    pub fn phase(self) -> Phase {
        match self {
            Step::Setup | Step::FirstMatching | Step::SecondMatching => Phase::Phase1,
            Step::CycleCover | Step::Greedy | Step::AddCycle | Step::Close => Phase::Phase2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure {
        phase: Phase,
        step: Step,
        /// Stable error tag, see [`Error::kind`](crate::Error::kind).
        kind: String,
        message: String,
    },
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }

    pub fn phase(&self) -> Option<Phase> {
        match self {
            Outcome::Success => None,
            Outcome::Failure { phase, .. } => Some(*phase),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub phase1_ms: f64,
    pub phase2_ms: f64,
}

/// Counters for one call of [`find_hamilton_cycle`](crate::find_hamilton_cycle).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub schema: u32,
    pub n: usize,
    pub p: f64,
    pub graph_seed: u64,
    pub algo_seed: u64,
    pub outcome: Outcome,
    pub oracle_calls_total: u64,
    pub oracle_calls_max_per_vertex: u64,
    pub phase1_calls: u64,
    pub phase2_calls: u64,
    pub matchings: Vec<MatchingStats>,
    pub cycles_in_cover: usize,
    /// Neighbour samples drawn per vertex in phase 2.
    pub sample_size: usize,
    pub greedy_steps: u64,
    pub phase2_rotations: u64,
    pub joins: u64,
    /// Size of the used set when phase 2 stopped.
    pub used_vertices: usize,
    pub wall: PhaseTimes,
}

impl RunStats {
    pub fn new(n: usize, p: f64, graph_seed: u64, algo_seed: u64) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            n,
            p,
            graph_seed,
            algo_seed,
            outcome: Outcome::Success,
            oracle_calls_total: 0,
            oracle_calls_max_per_vertex: 0,
            phase1_calls: 0,
            phase2_calls: 0,
            matchings: Vec::new(),
            cycles_in_cover: 0,
            sample_size: 0,
            greedy_steps: 0,
            phase2_rotations: 0,
            joins: 0,
            used_vertices: 0,
            wall: PhaseTimes::default(),
        }
    }

    /// Neighbourhood entries exposed by both matchings together.
    pub fn exposed_edges(&self) -> u64 {
        self.matchings.iter().map(|m| m.exposed_edges).sum()
    }
}
