//! The creator-centric (CR) algorithms. Both repeatedly pick the unexamined
//! creator whose potential audience is smallest and try to satisfy her
//! audience constraint: CR1 by assigning the whole potential audience
//! directly, CR2 by routing audience through augmenting paths so earlier
//! assignments can be redistributed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{audience_sizes, Instance, Matching, PlatformState};

/// Users that are happy with creator `j` and still have capacity for more
/// recommendations under the working matching.
pub fn potential_audience(
    inst: &Instance,
    state: &PlatformState,
    m: &Matching,
    j: usize,
) -> BTreeSet<usize> {
    state
        .active_users
        .iter()
        .copied()
        .filter(|&i| inst.pair_happy(i, j) && m.get(i).len() < inst.k)
        .collect()
}

fn smallest_potential_audience(
    inst: &Instance,
    state: &PlatformState,
    m: &Matching,
    remaining: &BTreeSet<usize>,
) -> Option<(usize, BTreeSet<usize>)> {
    remaining
        .iter()
        .map(|&j| (j, potential_audience(inst, state, m, j)))
        .min_by_key(|(j, audience)| (audience.len(), *j))
}

/// CR1: examine creators in order of smallest potential audience. If the
/// audience suffices, assign all of it; otherwise skip the creator for good.
/// Users may end the pass with fewer than `k` recommendations.
pub fn cr1_recommend(inst: &Instance, state: &PlatformState) -> Matching {
    let mut m = Matching::new();
    for &i in &state.active_users {
        m.set(i, BTreeSet::new());
    }
    let mut remaining: BTreeSet<usize> = state.active_creators.clone();
    while let Some((j, audience)) = smallest_potential_audience(inst, state, &m, &remaining) {
        remaining.remove(&j);
        if audience.len() >= inst.a_bar {
            for i in audience {
                m.assign(i, j);
            }
        }
    }
    m
}

/// Where an augmenting path terminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathTerminal {
    /// A user with spare recommendation capacity; applying the path adds one
    /// edge overall.
    User(usize),
    /// A creator already above the audience threshold; applying the path
    /// keeps the edge count and shifts one audience unit.
    Creator(usize),
}

/// Alternating path starting at a creator: creator→user edges are absent
/// from the matching, user→creator edges are present. Nodes at even
/// positions are creators, odd positions users, and no node repeats.
#[derive(Debug, Clone)]
pub struct AugmentingPath {
    pub nodes: Vec<usize>,
    pub terminal: PathTerminal,
}

impl AugmentingPath {
    pub fn start_creator(&self) -> usize {
        self.nodes[0]
    }
}

/// Breadth-first search from creator `j` for a shortest augmenting path.
/// Paths ending at a user are preferred over paths ending at a creator even
/// when longer; neighbors are explored in ascending index order, so the
/// result is deterministic.
pub fn find_augmenting_path(
    inst: &Instance,
    state: &PlatformState,
    m: &Matching,
    j: usize,
) -> Option<AugmentingPath> {
    assert!(state.contains_creator(j), "creator {j} is not active");
    let audiences = audience_sizes(state, m);

    // parent[node] for path reconstruction, per side.
    let mut user_parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut creator_parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue: VecDeque<(bool, usize)> = VecDeque::new(); // (is_creator, index)
    queue.push_back((true, j));
    let mut creator_fallback: Option<usize> = None;

    let rebuild_user_path = |end_user: usize, user_parent: &BTreeMap<usize, usize>, creator_parent: &BTreeMap<usize, usize>| {
        let mut nodes = vec![end_user];
        let mut creator = user_parent[&end_user];
        loop {
            nodes.push(creator);
            if creator == j {
                break;
            }
            let user = creator_parent[&creator];
            nodes.push(user);
            creator = user_parent[&user];
        }
        nodes.reverse();
        nodes
    };

    while let Some((is_creator, v)) = queue.pop_front() {
        if is_creator {
            // Odd edges: creator -> happy user, edge absent from matching.
            for &i in &state.active_users {
                if user_parent.contains_key(&i) || !inst.pair_happy(i, v) || m.get(i).contains(&v) {
                    continue;
                }
                user_parent.insert(i, v);
                if m.get(i).len() < inst.k {
                    let nodes = rebuild_user_path(i, &user_parent, &creator_parent);
                    return Some(AugmentingPath { nodes, terminal: PathTerminal::User(i) });
                }
                queue.push_back((false, i));
            }
        } else {
            // Even edges: user -> creator, edge present in the matching.
            for &c in m.get(v) {
                if c == j || creator_parent.contains_key(&c) {
                    continue;
                }
                creator_parent.insert(c, v);
                if audiences.get(&c).copied().unwrap_or(0) > inst.a_bar && creator_fallback.is_none() {
                    creator_fallback = Some(c);
                }
                queue.push_back((true, c));
            }
        }
    }

    creator_fallback.map(|c| {
        let user = creator_parent[&c];
        let mut nodes = rebuild_user_path(user, &user_parent, &creator_parent);
        nodes.push(c);
        AugmentingPath { nodes, terminal: PathTerminal::Creator(c) }
    })
}

/// Applies a path by toggling its edges: absent creator→user edges are
/// added, present user→creator edges removed. The start creator gains one
/// audience unit; a creator terminal loses one; every other audience and
/// recommendation count is unchanged.
pub fn apply_augmenting_path(m: &Matching, path: &AugmentingPath) -> Result<Matching> {
    let nodes = &path.nodes;
    if nodes.len() < 2 {
        return Err(Error::InvalidPath("path needs at least one edge".into()));
    }
    match path.terminal {
        PathTerminal::User(u) => {
            if nodes.len() % 2 != 0 || *nodes.last().unwrap() != u {
                return Err(Error::InvalidPath("user-terminal path must end on its user".into()));
            }
        }
        PathTerminal::Creator(c) => {
            if nodes.len() % 2 == 0 || *nodes.last().unwrap() != c || nodes.len() < 3 {
                return Err(Error::InvalidPath("creator-terminal path must end on its creator".into()));
            }
        }
    }
    let mut out = m.clone();
    for t in 0..nodes.len() - 1 {
        let (a, b) = (nodes[t], nodes[t + 1]);
        if t % 2 == 0 {
            // creator a -> user b: must be absent, gets added.
            if out.get(b).contains(&a) {
                return Err(Error::InvalidPath(format!("edge (user {b}, creator {a}) already matched")));
            }
            out.assign(b, a);
        } else {
            // user a -> creator b: must be present, gets removed.
            if !out.unassign(a, b) {
                return Err(Error::InvalidPath(format!("edge (user {a}, creator {b}) not matched")));
            }
        }
    }
    Ok(out)
}

/// CR2: like CR1, but each examined creator absorbs audience through
/// augmenting paths until none remain. If she still falls short of `a_bar`,
/// every path applied for her is rolled back and she is skipped.
pub fn cr2_recommend(inst: &Instance, state: &PlatformState) -> Matching {
    let mut m = Matching::new();
    for &i in &state.active_users {
        m.set(i, BTreeSet::new());
    }
    let mut remaining: BTreeSet<usize> = state.active_creators.clone();
    while let Some((j, _)) = smallest_potential_audience(inst, state, &m, &remaining) {
        remaining.remove(&j);
        let snapshot = m.clone();
        while let Some(path) = find_augmenting_path(inst, state, &m, j) {
            m = apply_augmenting_path(&m, &path).expect("BFS produced a valid path");
        }
        let audience = audience_sizes(state, &m).get(&j).copied().unwrap_or(0);
        if audience < inst.a_bar {
            m = snapshot;
        }
    }
    m
}
