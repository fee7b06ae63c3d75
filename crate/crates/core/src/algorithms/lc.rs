//! The local-clustering (LC) algorithm: scan users, and whenever the
//! neighborhood around a user holds enough unassigned users and enough
//! creators, match them all in one block.

use std::collections::BTreeSet;

use crate::model::{Instance, Matching, PlatformState, HAPPY_TOLERANCE};

/// Maximum Euclidean distance between the types of a happy user–creator
/// pair: `2·sin(arccos(e_bar)/2)`. Nonnegative unit vectors with dot product
/// at least `e_bar` are exactly those within this distance.
pub fn happy_distance(e_bar: f64) -> f64 {
    2.0 * (e_bar.clamp(-1.0, 1.0).acos() / 2.0).sin()
}

/// Radius of the formal neighborhood ball: points of the unit sphere on the
/// ball's boundary sit at geodesic angle `arcsin(d/2)` from the center, so
/// they span a circle of chord diameter exactly `d` (the happy distance).
pub fn neighborhood_ball_radius(e_bar: f64) -> f64 {
    let d = happy_distance(e_bar);
    2.0 * ((d / 2.0).asin() / 2.0).sin()
}

/// Membership in the neighborhood ball of `center`: within
/// [`neighborhood_ball_radius`]. Any two members of such a ball lie within
/// the happy distance of each other, hence are mutually happy.
pub fn neighborhood_ball_contains(center: &crate::model::TypeVector, x: &crate::model::TypeVector, e_bar: f64) -> bool {
    center.distance(x) <= neighborhood_ball_radius(e_bar) + HAPPY_TOLERANCE
}

/// One pass of the clustering algorithm over the active players.
///
/// Users are scanned in index order. For an unassigned user `i`, the
/// neighborhood collects the unassigned active users and the active creators
/// within the happy distance of `u_i`. If it holds at least `a_bar` users
/// and at least `k` creators, all those users are assigned the `k`
/// lowest-index creators of the neighborhood and are never reassigned.
/// Users left unassigned at the end get an empty recommendation set (they
/// depart this step).
///
/// Membership uses the happy distance `d` rather than the smaller formal
/// ball radius: the block assignment pairs neighborhood users with creators
/// chosen for their proximity to the scanned center user, so the creator set
/// must extend to everything the center is happy with.
pub fn lc_recommend(inst: &Instance, state: &PlatformState) -> Matching {
    let d = happy_distance(inst.e_bar);
    let mut m = Matching::new();
    for &i in &state.active_users {
        m.set(i, BTreeSet::new());
    }
    let mut assigned: BTreeSet<usize> = BTreeSet::new();
    for &i in &state.active_users {
        if assigned.contains(&i) {
            continue;
        }
        let ball_users: Vec<usize> = state
            .active_users
            .iter()
            .copied()
            .filter(|&j| !assigned.contains(&j) && inst.users[i].distance(&inst.users[j]) <= d + HAPPY_TOLERANCE)
            .collect();
        let ball_creators: Vec<usize> = state
            .active_creators
            .iter()
            .copied()
            .filter(|&j| inst.users[i].distance(&inst.creators[j]) <= d + HAPPY_TOLERANCE)
            .collect();
        if ball_users.len() >= inst.a_bar && ball_creators.len() >= inst.k {
            let chosen: BTreeSet<usize> = ball_creators.into_iter().take(inst.k).collect();
            for &j in &ball_users {
                m.set(j, chosen.clone());
                assigned.insert(j);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::example_simple;
    use crate::model::{check_stable_set, Instance, TypeVector};

    #[test]
    fn identical_types_form_one_ball() {
        let v = TypeVector::new(vec![1.0, 0.0]).unwrap();
        let users = vec![v.clone(); 4];
        let creators = vec![v.clone(), v.clone()];
        let inst = Instance::new(users, creators, 2, 0.9, 3, 2).unwrap();
        let m = lc_recommend(&inst, &inst.full_state());
        for i in 0..4 {
            assert_eq!(m.get(i).len(), 2);
        }
        let report = check_stable_set(&inst, &inst.full_state(), &m);
        assert!(report.is_stable);
    }

    #[test]
    fn simple_example_matches_both_clusters() {
        // Scanning from u1: her neighborhood reaches u2 and u3 but only
        // creator c1, so the top cluster forms first; the bottom cluster
        // follows. The flexible user u3 lands with c1.
        let inst = example_simple();
        let m = lc_recommend(&inst, &inst.full_state());
        for i in 0..3 {
            assert_eq!(m.get(i).iter().copied().collect::<Vec<_>>(), vec![0]);
        }
        for i in 3..6 {
            assert_eq!(m.get(i).iter().copied().collect::<Vec<_>>(), vec![1]);
        }
        let report = check_stable_set(&inst, &inst.full_state(), &m);
        assert!(report.is_stable);
        assert!((report.engagement - 5.5).abs() < 1e-9);
    }

    #[test]
    fn ball_radius_shrinks_to_zero_at_full_threshold() {
        assert!(neighborhood_ball_radius(1.0).abs() < 1e-12);
        let center = TypeVector::new(vec![0.0, 1.0]).unwrap();
        assert!(neighborhood_ball_contains(&center, &center, 1.0));
        let other = TypeVector::new(vec![(std::f64::consts::PI / 4.0).cos(), (std::f64::consts::PI / 4.0).sin()]).unwrap();
        assert!(!neighborhood_ball_contains(&center, &other, 1.0));
    }

    #[test]
    fn ball_members_are_mutually_happy() {
        // e_bar = cos(pi/3): happy distance 1, ball radius ~0.5176. Sample
        // member pairs on the sphere and confirm their separation stays
        // within the happy distance.
        let e_bar = (std::f64::consts::PI / 3.0).cos();
        let d = happy_distance(e_bar);
        assert!((d - 1.0).abs() < 1e-12);
        let r = neighborhood_ball_radius(e_bar);
        assert!((r - 2.0 * ((0.5f64).asin() / 2.0).sin()).abs() < 1e-12);

        let center = TypeVector::new(vec![1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()]).unwrap();
        let mut members = Vec::new();
        let n = 200;
        for t in 0..=n {
            let angle = std::f64::consts::PI / 2.0 * t as f64 / n as f64;
            let v = TypeVector::new(vec![angle.cos(), angle.sin()]).unwrap();
            if neighborhood_ball_contains(&center, &v, e_bar) {
                members.push(v);
            }
        }
        assert!(members.len() > 10);
        for a in &members {
            for b in &members {
                assert!(a.distance(b) <= d + 1e-9);
            }
        }
    }
}
