//! Domain types for the two-sided matching market: type vectors, problem
//! instances, platform states, matchings, and the participation constraints
//! that drive departures.
//!
//! All types are immutable value data and all operations are pure functions,
//! so everything here is safe to share across threads.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing an engagement value against the happiness
/// threshold. Several constructions place pairs exactly on the boundary;
/// floating point must not flip them.
pub const HAPPY_TOLERANCE: f64 = 1e-9;

/// Tolerance for the unit-norm invariant of type vectors.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// A point on the nonnegative part of the unit sphere: a user's preference
/// profile or a creator's content profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TypeVector(Vec<f64>);

impl TypeVector {
    /// Validates coordinates: all nonnegative and Euclidean norm 1 within
    /// [`NORM_TOLERANCE`]. Vectors failing validation are rejected, never
    /// silently renormalized.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidVector("empty coordinate list".into()));
        }
        for (i, &x) in coords.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidVector(format!("coordinate {i} is not finite")));
            }
            if x < 0.0 {
                return Err(Error::InvalidVector(format!("coordinate {i} is negative ({x})")));
            }
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidVector(format!("norm {norm} is not 1 within {NORM_TOLERANCE}")));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Dot product with another vector of the same dimension.
    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl<'de> Deserialize<'de> for TypeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        TypeVector::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Full problem data: player type vectors plus the scalar market parameters.
///
/// JSON schema (field names are fixed):
/// `{ "dim": int, "k": int, "e_bar": float, "a_bar": int,
///    "users": [[float,...],...], "creators": [[float,...],...] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    /// Dimensionality of the type space.
    pub dim: usize,
    /// Recommendations per user.
    pub k: usize,
    /// User engagement threshold: a user is happy with a creator when their
    /// dot product is at least this value.
    pub e_bar: f64,
    /// Creator audience threshold.
    pub a_bar: usize,
    pub users: Vec<TypeVector>,
    pub creators: Vec<TypeVector>,
}

#[derive(Deserialize)]
struct RawInstance {
    dim: usize,
    k: usize,
    e_bar: f64,
    a_bar: usize,
    users: Vec<TypeVector>,
    creators: Vec<TypeVector>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.users, raw.creators, raw.k, raw.e_bar, raw.a_bar, raw.dim)
    }
}

impl Instance {
    pub fn new(
        users: Vec<TypeVector>,
        creators: Vec<TypeVector>,
        k: usize,
        e_bar: f64,
        a_bar: usize,
        dim: usize,
    ) -> Result<Self> {
        if users.is_empty() || creators.is_empty() {
            return Err(Error::InvalidInstance("need at least one user and one creator".into()));
        }
        if k < 1 {
            return Err(Error::InvalidInstance("k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&e_bar) {
            return Err(Error::InvalidInstance(format!("e_bar {e_bar} not in [0, 1]")));
        }
        for (label, vecs) in [("user", &users), ("creator", &creators)] {
            for (i, v) in vecs.iter().enumerate() {
                if v.dim() != dim {
                    return Err(Error::InvalidInstance(format!(
                        "{label} {i} has dimension {} but instance dim is {dim}",
                        v.dim()
                    )));
                }
            }
        }
        Ok(Self { dim, k, e_bar, a_bar, users, creators })
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_creators(&self) -> usize {
        self.creators.len()
    }

    /// Engagement of the (user, creator) index pair.
    pub fn pair_engagement(&self, user: usize, creator: usize) -> f64 {
        self.users[user].dot(&self.creators[creator])
    }

    /// Whether the (user, creator) index pair is happy under `e_bar`.
    pub fn pair_happy(&self, user: usize, creator: usize) -> bool {
        is_happy(&self.users[user], &self.creators[creator], self.e_bar)
    }

    /// The state containing every initial player.
    pub fn full_state(&self) -> PlatformState {
        PlatformState {
            active_users: (0..self.num_users()).collect(),
            active_creators: (0..self.num_creators()).collect(),
        }
    }
}

/// The players still on the platform at some time step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatformState {
    pub active_users: BTreeSet<usize>,
    pub active_creators: BTreeSet<usize>,
}

impl PlatformState {
    pub fn empty() -> Self {
        Self { active_users: BTreeSet::new(), active_creators: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.active_users.is_empty() && self.active_creators.is_empty()
    }

    pub fn contains_user(&self, i: usize) -> bool {
        self.active_users.contains(&i)
    }

    pub fn contains_creator(&self, j: usize) -> bool {
        self.active_creators.contains(&j)
    }
}

/// Per-user sets of assigned creators at one time step. A user may carry
/// fewer than `k` assignments mid-algorithm or when too few creators remain;
/// [`check_stable_set`] flags that as a violation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub assignments: BTreeMap<usize, BTreeSet<usize>>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Creator set assigned to `user` (empty if the user has no entry).
    pub fn get(&self, user: usize) -> &BTreeSet<usize> {
        static EMPTY: BTreeSet<usize> = BTreeSet::new();
        self.assignments.get(&user).unwrap_or(&EMPTY)
    }

    pub fn assign(&mut self, user: usize, creator: usize) {
        self.assignments.entry(user).or_default().insert(creator);
    }

    pub fn set(&mut self, user: usize, creators: BTreeSet<usize>) {
        self.assignments.insert(user, creators);
    }

    pub fn unassign(&mut self, user: usize, creator: usize) -> bool {
        match self.assignments.get_mut(&user) {
            Some(set) => set.remove(&creator),
            None => false,
        }
    }

    /// Total number of (user, creator) edges.
    pub fn num_edges(&self) -> usize {
        self.assignments.values().map(|s| s.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayerKind {
    User,
    Creator,
}

/// One unsatisfied participation constraint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub kind: PlayerKind,
    pub index: usize,
    pub reason: String,
}

/// Outcome of validating a (state, matching) pair against all participation
/// constraints, with its total engagement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StableSetReport {
    pub state: PlatformState,
    pub matching: Matching,
    pub engagement: f64,
    pub is_stable: bool,
    pub violations: Vec<Violation>,
}

/// Engagement a user obtains from one creator: the dot product of their
/// types. In [0, 1] for valid type vectors.
pub fn engagement(u: &TypeVector, c: &TypeVector) -> Result<f64> {
    if u.dim() != c.dim() {
        return Err(Error::DimensionMismatch(u.dim(), c.dim()));
    }
    Ok(u.dot(c))
}

/// Whether the user is happy with the creator: engagement at least
/// `e_bar`, up to [`HAPPY_TOLERANCE`].
pub fn is_happy(u: &TypeVector, c: &TypeVector, e_bar: f64) -> bool {
    u.dot(c) >= e_bar - HAPPY_TOLERANCE
}

/// Total engagement of a matching: the sum over active users of their
/// per-creator engagements. Users who depart after this step still count;
/// they consumed the content before leaving.
pub fn total_engagement(inst: &Instance, state: &PlatformState, m: &Matching) -> Result<f64> {
    for (&i, creators) in &m.assignments {
        if !state.contains_user(i) && !creators.is_empty() {
            return Err(Error::InactivePlayer(format!("user {i} is not active")));
        }
    }
    let mut total = 0.0;
    for &i in &state.active_users {
        for &j in m.get(i) {
            if !state.contains_creator(j) {
                return Err(Error::InactivePlayer(format!("creator {j} assigned to user {i} is not active")));
            }
            total += inst.pair_engagement(i, j);
        }
    }
    Ok(total)
}

/// Audience size of every active creator: how many active users are assigned
/// to her. Creators with no users map to 0.
pub fn audience_sizes(state: &PlatformState, m: &Matching) -> BTreeMap<usize, usize> {
    let mut sizes: BTreeMap<usize, usize> =
        state.active_creators.iter().map(|&j| (j, 0)).collect();
    for &i in &state.active_users {
        for &j in m.get(i) {
            if let Some(count) = sizes.get_mut(&j) {
                *count += 1;
            }
        }
    }
    sizes
}

/// Players whose participation constraints the matching satisfies: users
/// with exactly `k` assignments, all happy; creators with audience at least
/// `a_bar`. Always a subset of the input state.
pub fn surviving_players(inst: &Instance, state: &PlatformState, m: &Matching) -> PlatformState {
    let audiences = audience_sizes(state, m);
    let active_users = state
        .active_users
        .iter()
        .copied()
        .filter(|&i| {
            let assigned = m.get(i);
            assigned.len() == inst.k
                && assigned
                    .iter()
                    .all(|&j| state.contains_creator(j) && inst.pair_happy(i, j))
        })
        .collect();
    let active_creators = state
        .active_creators
        .iter()
        .copied()
        .filter(|j| audiences.get(j).copied().unwrap_or(0) >= inst.a_bar)
        .collect();
    PlatformState { active_users, active_creators }
}

/// Checks whether (state, matching) is a stable set: every participation
/// constraint satisfied. The report lists one violation per unsatisfied
/// constraint; `is_stable` iff the list is empty.
pub fn check_stable_set(inst: &Instance, state: &PlatformState, m: &Matching) -> StableSetReport {
    let mut violations = Vec::new();
    let mut engagement_total = 0.0;
    for &i in &state.active_users {
        let assigned = m.get(i);
        if assigned.len() != inst.k {
            violations.push(Violation {
                kind: PlayerKind::User,
                index: i,
                reason: format!("has {} recommendations, needs exactly {}", assigned.len(), inst.k),
            });
        }
        for &j in assigned {
            if !state.contains_creator(j) {
                violations.push(Violation {
                    kind: PlayerKind::User,
                    index: i,
                    reason: format!("assigned to inactive creator {j}"),
                });
                continue;
            }
            engagement_total += inst.pair_engagement(i, j);
            if !inst.pair_happy(i, j) {
                violations.push(Violation {
                    kind: PlayerKind::User,
                    index: i,
                    reason: format!(
                        "unhappy with creator {j}: engagement {} below {}",
                        inst.pair_engagement(i, j),
                        inst.e_bar
                    ),
                });
            }
        }
    }
    let audiences = audience_sizes(state, m);
    for &j in &state.active_creators {
        let audience = audiences.get(&j).copied().unwrap_or(0);
        if audience < inst.a_bar {
            violations.push(Violation {
                kind: PlayerKind::Creator,
                index: j,
                reason: format!("audience {audience} below {}", inst.a_bar),
            });
        }
    }
    StableSetReport {
        state: state.clone(),
        matching: m.clone(),
        engagement: engagement_total,
        is_stable: violations.is_empty(),
        violations,
    }
}
