//! Temporal simulation: run a recommendation algorithm step by step under
//! two-sided departures until the platform reaches a fixed point.

use serde::{Deserialize, Serialize};

use crate::algorithms::{cr1_recommend, cr2_recommend, fl_solve, lc_recommend, uc_recommend};
use crate::error::Result;
use crate::model::{
    surviving_players, total_engagement, Instance, Matching, PlatformState, StableSetReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Uc,
    Fl,
    Lc,
    Cr1,
    Cr2,
}

impl std::str::FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "uc" => Ok(Self::Uc),
            "fl" => Ok(Self::Fl),
            "lc" => Ok(Self::Lc),
            "cr1" => Ok(Self::Cr1),
            "cr2" => Ok(Self::Cr2),
            other => Err(format!("unknown algorithm '{other}' (expected uc, fl, lc, cr1, cr2)")),
        }
    }
}

impl std::fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Uc => "uc",
            Self::Fl => "fl",
            Self::Lc => "lc",
            Self::Cr1 => "cr1",
            Self::Cr2 => "cr2",
        };
        f.write_str(name)
    }
}

/// One simulated time step: the state at its start, the recommendations
/// issued, and the total engagement those recommendations produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub state: PlatformState,
    pub matching: Matching,
    pub engagement: f64,
}

/// A full run: per-step records up to the first fixed point, the step index
/// where the state stopped changing, and the long-term engagement (the
/// per-step engagement at the fixed point, 0 when everyone left). For the
/// deterministic algorithms here the post-convergence engagement is constant
/// and equals the long-run time average.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub converged_at: usize,
    pub long_term_engagement: f64,
}

/// Runs `algorithm` from the full initial state, recording each step until
/// the state repeats (fixed point). A state can lose players at most
/// `U + C` times, so the loop is capped at `U + C + 2` iterations.
pub fn run_dynamics(inst: &Instance, algorithm: AlgorithmKind) -> Result<Trajectory> {
    // The farsighted algorithm commits to a maximum stable set up front and
    // replays its recommendations every step; players outside the stable set
    // are handed the lowest-index creators of the stable set at t = 0 and
    // depart on their own.
    let fl_plan: Option<StableSetReport> = match algorithm {
        AlgorithmKind::Fl => Some(fl_solve(inst)?),
        _ => None,
    };
    let recommend = |state: &PlatformState| -> Matching {
        match algorithm {
            AlgorithmKind::Uc => uc_recommend(inst, state),
            AlgorithmKind::Lc => lc_recommend(inst, state),
            AlgorithmKind::Cr1 => cr1_recommend(inst, state),
            AlgorithmKind::Cr2 => cr2_recommend(inst, state),
            AlgorithmKind::Fl => {
                let plan = fl_plan.as_ref().unwrap();
                let filler: Vec<usize> = plan
                    .state
                    .active_creators
                    .iter()
                    .copied()
                    .take(inst.k)
                    .collect();
                let mut m = Matching::new();
                for &i in &state.active_users {
                    if plan.state.contains_user(i) {
                        m.set(i, plan.matching.get(i).clone());
                    } else {
                        m.set(i, filler.iter().copied().collect());
                    }
                }
                m
            }
        }
    };

    let mut state = inst.full_state();
    let mut steps = Vec::new();
    let cap = inst.num_users() + inst.num_creators() + 2;
    loop {
        let matching = recommend(&state);
        let engagement = total_engagement(inst, &state, &matching)?;
        let next = surviving_players(inst, &state, &matching);
        steps.push(TrajectoryStep { state: state.clone(), matching, engagement });
        if next == state {
            let converged_at = steps.len() - 1;
            let long_term_engagement = if state.is_empty() { 0.0 } else { engagement };
            return Ok(Trajectory { steps, converged_at, long_term_engagement });
        }
        state = next;
        assert!(steps.len() < cap, "dynamics failed to converge within {cap} steps");
    }
}

/// Long-term engagement of `algorithm` divided by the farsighted optimum.
/// `None` when the optimum is zero (the ratio is conditioned on nonzero
/// farsighted engagement).
pub fn approximation_ratio(inst: &Instance, algorithm: AlgorithmKind) -> Result<Option<f64>> {
    let fl = run_dynamics(inst, AlgorithmKind::Fl)?.long_term_engagement;
    if fl <= 0.0 {
        return Ok(None);
    }
    let alg = run_dynamics(inst, algorithm)?.long_term_engagement;
    Ok(Some(alg / fl))
}
