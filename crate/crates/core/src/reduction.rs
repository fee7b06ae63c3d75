//! Executable hardness reductions: build a matching-market instance from a
//! graph so that stable sets correspond one-to-one to independent sets, with
//! engagement proportional to the independent set's size.
//!
//! Users play the role of edges and creators the role of vertices. The type
//! vectors realize "user i is happy with creator j iff edge i touches vertex
//! j", with every happy pair's engagement equal to the threshold, via a
//! polynomial identity: `-(j-p)²(j-q)²` is maximized exactly at `j ∈ {p,q}`
//! and factors into a dot product of a per-edge and a per-vertex vector.
//! Nonnegativity shifts, per-pair normalization, and two balancing
//! coordinates then make all vectors nonnegative unit vectors in six
//! dimensions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{check_stable_set, Instance, Matching, PlatformState, StableSetReport, TypeVector};

/// Simple undirected graph with 0-based vertex ids.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self { n, edges })
    }

    /// Parses an edge list, one `u v` pair per line, vertices 1-indexed.
    /// The vertex count is the largest label seen.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                let tok = tok.ok_or_else(|| {
                    Error::InvalidGraph(format!("line {}: expected 'u v'", lineno + 1))
                })?;
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("line {}: bad vertex '{tok}'", lineno + 1)))?;
                if v == 0 {
                    return Err(Error::InvalidGraph(format!("line {}: vertices are 1-indexed", lineno + 1)));
                }
                Ok(v)
            };
            let a = parse(parts.next())?;
            let b = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::InvalidGraph(format!("line {}: expected exactly two labels", lineno + 1)));
            }
            n = n.max(a).max(b);
            edges.push((a - 1, b - 1));
        }
        Graph::new(n, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        match degrees.first() {
            Some(&d) if degrees.iter().all(|&x| x == d) => Some(d),
            _ => None,
        }
    }

    pub fn is_independent(&self, s: &BTreeSet<usize>) -> bool {
        self.edges.iter().all(|&(a, b)| !(s.contains(&a) && s.contains(&b)))
    }
}

/// The shared vector construction. Labels are 1-based inside the formulas so
/// they match across graph sizes.
struct Basis {
    n: usize,
    g_norm: f64,
    h_norm: f64,
}

impl Basis {
    /// `g_floor` is 1 for the plain reduction and sqrt(2) for the fixed-k
    /// variant, which needs the threshold at most 1/sqrt(2).
    fn new(n: usize, g_floor: f64) -> Self {
        let mut basis = Self { n, g_norm: g_floor, h_norm: 1.0 };
        for p in 1..=n {
            for q in p..=n {
                let v = basis.g3(p as f64, q as f64);
                basis.g_norm = basis.g_norm.max(v.iter().map(|x| x * x).sum::<f64>().sqrt());
            }
        }
        for j in 1..=n {
            let v = Self::h3(n as f64, j as f64);
            basis.h_norm = basis.h_norm.max(v.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
        basis
    }

    /// Per-edge polynomial coefficients, divided by the maximum of the
    /// shifted product polynomial (attained at j ∈ {p, q}) so that every
    /// edge's peak engagement aligns at the same value.
    fn g3(&self, p: f64, q: f64) -> [f64; 5] {
        let n = self.n as f64;
        let denom = n * n * n * n + n * n * (p * p + 4.0 * p * q + q * q) + p * p * q * q;
        [
            1.0 / denom,
            (p + q) / denom,
            (p * p + 4.0 * p * q + q * q) / denom,
            (p * p * q + q * q * p) / denom,
            (p * p * q * q) / denom,
        ]
    }

    /// Shifted per-vertex polynomial values (fifth component identically 0).
    fn h3(n: f64, j: f64) -> [f64; 5] {
        [n * n * n * n - j * j * j * j, 2.0 * j * j * j, n * n - j * j, 2.0 * j, 0.0]
    }

    /// Engagement threshold: the aligned maximum after both normalizations.
    fn e_bar(&self) -> f64 {
        1.0 / (self.g_norm * self.h_norm)
    }

    /// Unit user vector for the (1-based) vertex pair `(p, q)`.
    fn user_vector(&self, p: usize, q: usize) -> TypeVector {
        let g = self.g3(p as f64, q as f64);
        let first4: Vec<f64> = g[..4].iter().map(|x| x / self.g_norm).collect();
        let sq: f64 = first4.iter().map(|x| x * x).sum();
        let mut coords = first4;
        coords.push((1.0 - sq).max(0.0).sqrt());
        coords.push(0.0);
        TypeVector::new(coords).expect("construction yields a nonnegative unit vector")
    }

    /// Unit creator vector for the (1-based) vertex `j`.
    fn creator_vector(&self, j: usize) -> TypeVector {
        let h = Self::h3(self.n as f64, j as f64);
        let first4: Vec<f64> = h[..4].iter().map(|x| x / self.h_norm).collect();
        let sq: f64 = first4.iter().map(|x| x * x).sum();
        let mut coords = first4;
        coords.push(0.0);
        coords.push((1.0 - sq).max(0.0).sqrt());
        TypeVector::new(coords).expect("construction yields a nonnegative unit vector")
    }
}

/// Type vectors realizing the incidence structure of `g`: one user per edge,
/// one creator per vertex, all in six dimensions, with `u_i · c_j = e_bar`
/// exactly when edge `i` touches vertex `j` and strictly less otherwise.
pub fn reduction_type_vectors(g: &Graph) -> (Vec<TypeVector>, Vec<TypeVector>, f64) {
    let basis = Basis::new(g.num_vertices(), 1.0);
    let users = g
        .edges()
        .iter()
        .map(|&(a, b)| basis.user_vector(a + 1, b + 1))
        .collect();
    let creators = (1..=g.num_vertices()).map(|j| basis.creator_vector(j)).collect();
    (users, creators, basis.e_bar())
}

/// Reduction from a regular graph: `k = 1`, audience threshold equal to the
/// degree, so a creator survives only by absorbing all her incident users.
pub fn reduce_regular(g: &Graph) -> Result<Instance> {
    let delta = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition("graph is not regular".into()))?;
    if delta < 1 {
        return Err(Error::Precondition("regular reduction needs degree >= 1".into()));
    }
    let (users, creators, e_bar) = reduction_type_vectors(g);
    Instance::new(users, creators, 1, e_bar, delta, 6)
}

/// Auxiliary users appended by the general reduction, grouped by vertex in
/// ascending order: vertex `v` receives `max_degree - deg(v)` users whose
/// type is the diagonal edge vector `g(v, v)`, happy with `v` alone.
fn aux_counts(g: &Graph) -> Vec<usize> {
    let delta = g.max_degree();
    (0..g.num_vertices()).map(|v| delta - g.degree(v)).collect()
}

/// Reduction from an arbitrary simple graph: pads every vertex's potential
/// audience up to the maximum degree with auxiliary users.
pub fn reduce_general(g: &Graph) -> Result<Instance> {
    let delta = g.max_degree();
    if delta < 1 {
        return Err(Error::Precondition("general reduction needs at least one edge".into()));
    }
    let basis = Basis::new(g.num_vertices(), 1.0);
    let mut users: Vec<TypeVector> = g
        .edges()
        .iter()
        .map(|&(a, b)| basis.user_vector(a + 1, b + 1))
        .collect();
    for (v, count) in aux_counts(g).into_iter().enumerate() {
        for _ in 0..count {
            users.push(basis.user_vector(v + 1, v + 1));
        }
    }
    let creators = (1..=g.num_vertices()).map(|j| basis.creator_vector(j)).collect();
    Instance::new(users, creators, 1, basis.e_bar(), delta, 6)
}

/// Reduction that fixes the per-user recommendation count at `k >= 3`, in
/// seven dimensions. Each original user gains `k - 1` private satellite
/// creators; each satellite creator is fed by `a_bar - 1` satellite users,
/// who in turn finish their own recommendation lists at one global creator.
pub fn reduce_fixed_k(g: &Graph, k: usize) -> Result<Instance> {
    let delta = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition("fixed-k reduction needs a regular graph".into()))?;
    if delta < 3 {
        return Err(Error::Precondition(format!("fixed-k reduction needs degree >= 3, got {delta}")));
    }
    if k < 3 {
        return Err(Error::Precondition(format!("fixed-k reduction needs k >= 3, got {k}")));
    }
    let basis = Basis::new(g.num_vertices(), 2f64.sqrt());
    let e_bar = basis.e_bar();
    let a_bar = delta;

    let extend7 = |v: &TypeVector| -> Vec<f64> {
        let mut coords = v.coords().to_vec();
        coords.push(0.0);
        coords
    };
    let original_users: Vec<Vec<f64>> = g
        .edges()
        .iter()
        .map(|&(a, b)| extend7(&basis.user_vector(a + 1, b + 1)))
        .collect();

    let satellite_creator = |u: &[f64]| -> TypeVector {
        let mut coords: Vec<f64> = u[..5].iter().map(|x| e_bar * x).collect();
        coords.push((1.0 - e_bar * e_bar).max(0.0).sqrt());
        coords.push(0.0);
        TypeVector::new(coords).expect("unit by construction")
    };
    let satellite_user = |u: &[f64]| -> TypeVector {
        let mut coords: Vec<f64> = u[..5].iter().map(|x| e_bar * e_bar * x).collect();
        let root = (1.0 - e_bar * e_bar).max(0.0).sqrt();
        coords.push(e_bar * root);
        coords.push(root);
        TypeVector::new(coords).expect("unit by construction")
    };

    let mut creators: Vec<TypeVector> = (1..=g.num_vertices())
        .map(|j| TypeVector::new(extend7(&basis.creator_vector(j))).expect("unit"))
        .collect();
    for u in &original_users {
        for _ in 0..k - 1 {
            creators.push(satellite_creator(u));
        }
    }
    let mut x_type = vec![0.0; 7];
    x_type[6] = 1.0;
    creators.push(TypeVector::new(x_type)?);

    let mut users: Vec<TypeVector> = original_users
        .iter()
        .map(|u| TypeVector::new(u.clone()))
        .collect::<Result<_>>()?;
    for u in &original_users {
        for _ in 0..a_bar - 1 {
            users.push(satellite_user(u));
        }
    }
    Instance::new(users, creators, k, e_bar, a_bar, 7)
}

/// Maps a stable set of a reduced instance (from [`reduce_regular`] or
/// [`reduce_general`]) back to its vertex set, which is guaranteed to be
/// independent.
pub fn stable_to_independent(
    g: &Graph,
    inst: &Instance,
    report: &StableSetReport,
) -> Result<BTreeSet<usize>> {
    if !report.is_stable {
        return Err(Error::Precondition("report does not describe a stable set".into()));
    }
    if inst.num_creators() != g.num_vertices() {
        return Err(Error::Precondition(
            "instance does not look like a vertex-per-creator reduction of this graph".into(),
        ));
    }
    let vertices: BTreeSet<usize> = report
        .state
        .active_creators
        .iter()
        .copied()
        .filter(|&j| j < g.num_vertices())
        .collect();
    if !g.is_independent(&vertices) {
        return Err(Error::Precondition(
            "stable set maps to a dependent vertex set; instance/report mismatch".into(),
        ));
    }
    Ok(vertices)
}

/// Builds the unique stable set induced by an independent vertex set: users
/// are the edges touching exactly one chosen vertex (assigned to it) plus,
/// for general reductions, the auxiliary users of every chosen vertex.
pub fn independent_to_stable(g: &Graph, inst: &Instance, s: &BTreeSet<usize>) -> Result<StableSetReport> {
    if !g.is_independent(s) {
        return Err(Error::Precondition("vertex set is not independent".into()));
    }
    if let Some(&v) = s.iter().next_back() {
        if v >= g.num_vertices() {
            return Err(Error::Precondition(format!("vertex {v} out of range")));
        }
    }
    let m = g.num_edges();
    let has_aux = inst.num_users() > m;
    let mut matching = Matching::new();
    let mut active_users = BTreeSet::new();
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        let touches: Vec<usize> = [a, b].into_iter().filter(|v| s.contains(v)).collect();
        if touches.len() == 1 {
            active_users.insert(i);
            matching.set(i, [touches[0]].into_iter().collect());
        }
    }
    if has_aux {
        let mut next = m;
        for (v, count) in aux_counts(g).into_iter().enumerate() {
            for _ in 0..count {
                if s.contains(&v) {
                    active_users.insert(next);
                    matching.set(next, [v].into_iter().collect());
                }
                next += 1;
            }
        }
        if next != inst.num_users() {
            return Err(Error::Precondition(
                "instance user count does not match the reduction layout for this graph".into(),
            ));
        }
    } else if inst.num_users() != m {
        return Err(Error::Precondition(
            "instance user count does not match the reduction layout for this graph".into(),
        ));
    }
    let state = PlatformState { active_users, active_creators: s.clone() };
    Ok(check_stable_set(inst, &state, &matching))
}
