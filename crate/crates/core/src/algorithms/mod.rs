//! Recommendation algorithms: the exact farsighted solver and its oracle,
//! the user-centric greedy, local clustering, and the creator-centric pair.

mod cr;
mod exact;
mod flow;
mod lc;
mod uc;

pub use cr::{
    apply_augmenting_path, cr1_recommend, cr2_recommend, find_augmenting_path, potential_audience,
    AugmentingPath, PathTerminal,
};
pub use exact::{
    brute_force_mss, brute_force_mss_with_caps, fl_solve, fl_solve_with_cap, solve_fixed_sets,
    solve_fixed_sets_with_k, submodularity_check, BruteForceCaps, FL_CREATOR_CAP,
};
pub use lc::{happy_distance, lc_recommend, neighborhood_ball_contains, neighborhood_ball_radius};
pub use uc::uc_recommend;
