//! Exact solvers: the engagement maximizer over fixed player sets, the
//! maximum-stable-set solver behind the farsighted (FL) algorithm, an
//! exhaustive oracle for small instances, and the submodularity checker for
//! the one-sided (no user constraints) regime.

use std::collections::BTreeSet;

use crate::algorithms::flow::MinCostFlow;
use crate::error::{Error, Result};
use crate::model::{check_stable_set, Instance, Matching, PlatformState, StableSetReport};

/// Largest creator count `fl_solve` accepts before refusing to enumerate
/// creator subsets.
pub const FL_CREATOR_CAP: usize = 20;

/// Hard caps for the exhaustive oracle.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceCaps {
    pub max_users: usize,
    pub max_creators: usize,
    pub max_k: usize,
}

impl Default for BruteForceCaps {
    fn default() -> Self {
        Self { max_users: 8, max_creators: 4, max_k: 2 }
    }
}

/// Engagement values are turned into integer arc costs with this multiplier.
/// The flow decides the structure of the matching only; the reported
/// engagement is recomputed exactly from the integral assignment.
const COST_SCALE: f64 = 1e9;

/// Maximum-engagement matching in which every user in `users` receives
/// exactly `k` happy creators from `creators` and every creator in `creators`
/// receives at least `a_bar` users. `None` when no such matching exists,
/// which signals that the pair is not a stable set.
pub fn solve_fixed_sets(
    inst: &Instance,
    users: &BTreeSet<usize>,
    creators: &BTreeSet<usize>,
) -> Result<Option<(Matching, f64)>> {
    solve_fixed_sets_with_k(inst, users, creators, inst.k)
}

/// As [`solve_fixed_sets`] but with an explicit per-user recommendation
/// count. The submodularity checker passes `min(k, |creators|)` so the
/// objective stays defined when fewer than `k` creators are offered.
pub fn solve_fixed_sets_with_k(
    inst: &Instance,
    users: &BTreeSet<usize>,
    creators: &BTreeSet<usize>,
    k: usize,
) -> Result<Option<(Matching, f64)>> {
    if let Some(&i) = users.iter().next_back() {
        if i >= inst.num_users() {
            return Err(Error::Precondition(format!("user {i} out of range")));
        }
    }
    if let Some(&j) = creators.iter().next_back() {
        if j >= inst.num_creators() {
            return Err(Error::Precondition(format!("creator {j} out of range")));
        }
    }

    if k == 0 || users.is_empty() {
        // Nothing can be assigned: feasible iff no creator needs audience.
        if !creators.is_empty() && inst.a_bar > 0 {
            return Ok(None);
        }
        let mut m = Matching::new();
        for &i in users {
            m.set(i, BTreeSet::new());
        }
        return Ok(Some((m, 0.0)));
    }
    if creators.len() < k {
        // Users cannot receive k distinct creators.
        return Ok(None);
    }
    // Audience demand cannot exceed the recommendation supply, and no
    // creator can see more users than exist.
    if creators.len() * inst.a_bar > users.len() * k || inst.a_bar > users.len() {
        return Ok(None);
    }

    let user_ids: Vec<usize> = users.iter().copied().collect();
    let creator_ids: Vec<usize> = creators.iter().copied().collect();
    let nu = user_ids.len();
    let nc = creator_ids.len();

    // Node layout: source, sink, users, creators, super source, super sink.
    let source = 0;
    let sink = 1;
    let user_node = |ui: usize| 2 + ui;
    let creator_node = |ci: usize| 2 + nu + ci;
    let super_source = 2 + nu + nc;
    let super_sink = super_source + 1;
    let mut net = MinCostFlow::new(super_sink + 1);

    // source -> user carries a fixed demand of k recommendations, modeled as
    // excess at both endpoints; creator -> sink has lower bound a_bar.
    let mut required: i64 = 0;
    for ui in 0..nu {
        net.add_edge(super_source, user_node(ui), k as i64, 0);
        required += k as i64;
    }
    net.add_edge(source, super_sink, (nu * k) as i64, 0);
    for ci in 0..nc {
        let slack = (nu - inst.a_bar) as i64;
        if slack > 0 {
            net.add_edge(creator_node(ci), sink, slack, 0);
        }
        if inst.a_bar > 0 {
            net.add_edge(creator_node(ci), super_sink, inst.a_bar as i64, 0);
            net.add_edge(super_source, sink, inst.a_bar as i64, 0);
            required += inst.a_bar as i64;
        }
    }
    net.add_edge(sink, source, (nu * k) as i64, 0);

    // Happy pairs only; cost favors higher engagement. The offset by 1 keeps
    // costs nonnegative, which is sound because every feasible flow uses
    // exactly |users|·k assignment arcs.
    let mut arc_ids = Vec::new();
    for (ui, &i) in user_ids.iter().enumerate() {
        for (ci, &j) in creator_ids.iter().enumerate() {
            if inst.pair_happy(i, j) {
                let cost = ((1.0 - inst.pair_engagement(i, j)) * COST_SCALE).round().max(0.0) as i64;
                let id = net.add_edge(user_node(ui), creator_node(ci), 1, cost);
                arc_ids.push((i, j, id));
            }
        }
    }

    let (flow, _) = net.flow(super_source, super_sink, required);
    if flow < required {
        return Ok(None);
    }

    let mut m = Matching::new();
    for &i in users {
        m.set(i, BTreeSet::new());
    }
    let mut engagement = 0.0;
    for (i, j, id) in arc_ids {
        if net.edge_flow(id) > 0 {
            m.assign(i, j);
            engagement += inst.pair_engagement(i, j);
        }
    }
    Ok(Some((m, engagement)))
}

/// Maximum stable set: enumerates creator subsets (pruned by the subset size
/// and the audience-supply bound), pairs each with every user happy with at
/// least `k` of its creators, and solves the fixed-sets problem. Including
/// every such user is weakly optimal: engagement terms are nonnegative and
/// extra users only add audience.
pub fn fl_solve(inst: &Instance) -> Result<StableSetReport> {
    fl_solve_with_cap(inst, FL_CREATOR_CAP)
}

pub fn fl_solve_with_cap(inst: &Instance, creator_cap: usize) -> Result<StableSetReport> {
    let c = inst.num_creators();
    if c > creator_cap {
        return Err(Error::ResourceLimit(format!(
            "{c} creators exceed the subset-enumeration cap {creator_cap}"
        )));
    }
    let u = inst.num_users();
    let mut best: Option<(Matching, f64, PlatformState)> = None;
    for mask in 1u64..(1u64 << c) {
        let subset: BTreeSet<usize> = (0..c).filter(|j| mask >> j & 1 == 1).collect();
        if subset.len() < inst.k || subset.len() * inst.a_bar > u * inst.k {
            continue;
        }
        let eligible: BTreeSet<usize> = (0..u)
            .filter(|&i| subset.iter().filter(|&&j| inst.pair_happy(i, j)).count() >= inst.k)
            .collect();
        if eligible.len() * inst.k < subset.len() * inst.a_bar {
            continue;
        }
        if let Some((m, eng)) = solve_fixed_sets(inst, &eligible, &subset)? {
            let better = match &best {
                Some((_, best_eng, _)) => eng > *best_eng,
                None => eng > 0.0,
            };
            if better {
                best = Some((m, eng, PlatformState { active_users: eligible, active_creators: subset }));
            }
        }
    }
    let (matching, state) = match best {
        Some((m, _, state)) => (m, state),
        None => (Matching::new(), PlatformState::empty()),
    };
    Ok(check_stable_set(inst, &state, &matching))
}

/// Exhaustive maximum-stable-set oracle: enumerates creator subsets and, per
/// user, every happy `k`-subset of the chosen creators (or exclusion). Kept
/// independent of the flow solver so the two can cross-check each other.
pub fn brute_force_mss(inst: &Instance) -> Result<StableSetReport> {
    brute_force_mss_with_caps(inst, BruteForceCaps::default())
}

pub fn brute_force_mss_with_caps(inst: &Instance, caps: BruteForceCaps) -> Result<StableSetReport> {
    let (u, c) = (inst.num_users(), inst.num_creators());
    if u > caps.max_users || c > caps.max_creators || inst.k > caps.max_k {
        return Err(Error::ResourceLimit(format!(
            "instance ({u} users, {c} creators, k={}) exceeds oracle caps ({}, {}, {})",
            inst.k, caps.max_users, caps.max_creators, caps.max_k
        )));
    }

    struct Search<'a> {
        inst: &'a Instance,
        creators: Vec<usize>,
        options: Vec<Vec<Vec<usize>>>,
        audiences: Vec<usize>,
        choice: Vec<Option<usize>>,
        best: Option<(f64, Vec<Option<usize>>, Vec<usize>)>,
    }

    impl Search<'_> {
        fn recurse(&mut self, user: usize, engagement: f64) {
            if user == self.options.len() {
                if self.creators.iter().enumerate().any(|(ci, _)| self.audiences[ci] < self.inst.a_bar) {
                    return;
                }
                let better = match &self.best {
                    Some((best_eng, _, _)) => engagement > *best_eng,
                    None => true,
                };
                if better {
                    self.best = Some((engagement, self.choice.clone(), self.creators.clone()));
                }
                return;
            }
            // Exclude this user.
            self.choice[user] = None;
            self.recurse(user + 1, engagement);
            // Or assign one of her happy k-subsets.
            for opt in 0..self.options[user].len() {
                let gain: f64 = self.options[user][opt]
                    .iter()
                    .map(|&ci| self.inst.pair_engagement(user, self.creators[ci]))
                    .sum();
                for idx in 0..self.options[user][opt].len() {
                    let ci = self.options[user][opt][idx];
                    self.audiences[ci] += 1;
                }
                self.choice[user] = Some(opt);
                self.recurse(user + 1, engagement + gain);
                for idx in 0..self.options[user][opt].len() {
                    let ci = self.options[user][opt][idx];
                    self.audiences[ci] -= 1;
                }
            }
            self.choice[user] = None;
        }
    }

    let mut overall: Option<(f64, PlatformState, Matching)> = None;
    for mask in 0u64..(1u64 << c) {
        let creators: Vec<usize> = (0..c).filter(|j| mask >> j & 1 == 1).collect();
        let mut options = Vec::with_capacity(u);
        for i in 0..u {
            let happy: Vec<usize> = creators
                .iter()
                .enumerate()
                .filter(|(_, &j)| inst.pair_happy(i, j))
                .map(|(ci, _)| ci)
                .collect();
            options.push(k_subsets(&happy, inst.k));
        }
        let mut search = Search {
            inst,
            audiences: vec![0; creators.len()],
            choice: vec![None; u],
            best: None,
            options,
            creators,
        };
        search.recurse(0, 0.0);
        if let Some((eng, choice, creators)) = search.best {
            let better = match &overall {
                Some((best_eng, _, _)) => eng > *best_eng,
                None => true,
            };
            if better {
                let mut matching = Matching::new();
                let mut active_users = BTreeSet::new();
                for (i, opt) in choice.iter().enumerate() {
                    if let Some(opt) = opt {
                        active_users.insert(i);
                        matching.set(i, search.options[i][*opt].iter().map(|&ci| creators[ci]).collect());
                    }
                }
                let state = PlatformState {
                    active_users,
                    active_creators: creators.iter().copied().collect(),
                };
                overall = Some((eng, state, matching));
            }
        }
    }
    let (state, matching) = match overall {
        Some((_, state, matching)) => (state, matching),
        None => (PlatformState::empty(), Matching::new()),
    };
    Ok(check_stable_set(inst, &state, &matching))
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for idx in start..items.len() {
            current.push(items[idx]);
            go(items, k, idx + 1, current, out);
            current.pop();
        }
    }
    go(items, k, 0, &mut current, &mut out);
    out
}

/// Checks the diminishing-returns inequality
/// `f(U, C ∪ {c0, c1}) − f(U, C ∪ {c1}) ≤ f(U, C ∪ {c0}) − f(U, C)`
/// where `f` is the fixed-sets engagement maximizer, with each user's
/// recommendation count lowered to the creator-set size when it is smaller
/// than `k`. Requires `e_bar = 0`; vacuously true when any term is
/// infeasible.
pub fn submodularity_check(
    inst: &Instance,
    users: &BTreeSet<usize>,
    creators: &BTreeSet<usize>,
    c0: usize,
    c1: usize,
) -> Result<bool> {
    if inst.e_bar != 0.0 {
        return Err(Error::Precondition(format!(
            "submodularity of the fixed-users objective requires e_bar = 0, got {}",
            inst.e_bar
        )));
    }
    if c0 == c1 {
        return Err(Error::Precondition("c0 and c1 must be distinct creators".into()));
    }
    if creators.contains(&c0) || creators.contains(&c1) {
        return Err(Error::Precondition("c0 and c1 must lie outside the base creator set".into()));
    }
    let f = |set: &BTreeSet<usize>| -> Result<Option<f64>> {
        let k = inst.k.min(set.len());
        Ok(solve_fixed_sets_with_k(inst, users, set, k)?.map(|(_, eng)| eng))
    };
    let with = |extra: &[usize]| -> BTreeSet<usize> {
        let mut s = creators.clone();
        s.extend(extra.iter().copied());
        s
    };
    let (f01, f1, f0, fbase) = (
        f(&with(&[c0, c1]))?,
        f(&with(&[c1]))?,
        f(&with(&[c0]))?,
        f(creators)?,
    );
    match (f01, f1, f0, fbase) {
        (Some(f01), Some(f1), Some(f0), Some(fbase)) => Ok(f01 - f1 <= f0 - fbase + 1e-9),
        _ => Ok(true),
    }
}
