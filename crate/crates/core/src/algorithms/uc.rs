//! The user-centric (UC) greedy algorithm: each user gets the creators she
//! personally ranks highest, with no regard for creator audiences.

use crate::model::{Instance, Matching, PlatformState};

/// Assigns each active user her top `min(k, |active creators|)` creators by
/// engagement. Ties break toward the lower creator index so runs are
/// deterministic.
pub fn uc_recommend(inst: &Instance, state: &PlatformState) -> Matching {
    let creators: Vec<usize> = state.active_creators.iter().copied().collect();
    let take = inst.k.min(creators.len());
    let mut m = Matching::new();
    for &i in &state.active_users {
        let mut ranked = creators.clone();
        ranked.sort_by(|&a, &b| {
            inst.pair_engagement(i, b)
                .partial_cmp(&inst.pair_engagement(i, a))
                .unwrap()
                .then(a.cmp(&b))
        });
        m.set(i, ranked.into_iter().take(take).collect());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::example_simple;
    use crate::model::{Instance, TypeVector};

    #[test]
    fn simple_example_sends_flexible_user_to_her_favorite() {
        let inst = example_simple();
        let m = uc_recommend(&inst, &inst.full_state());
        // User u3 (index 2) prefers the closer creator c2 (index 1).
        assert_eq!(m.get(2).iter().copied().collect::<Vec<_>>(), vec![1]);
        // Corner users stick to their own corner.
        assert_eq!(m.get(0).iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(m.get(5).iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn single_creator_gets_everyone() {
        let users = vec![
            TypeVector::new(vec![1.0, 0.0]).unwrap(),
            TypeVector::new(vec![0.0, 1.0]).unwrap(),
        ];
        let creators = vec![TypeVector::new(vec![1.0, 0.0]).unwrap()];
        let inst = Instance::new(users, creators, 1, 0.0, 1, 2).unwrap();
        let m = uc_recommend(&inst, &inst.full_state());
        for i in 0..2 {
            assert_eq!(m.get(i).len(), 1);
            assert!(m.get(i).contains(&0));
        }
    }

    #[test]
    fn fewer_creators_than_k_assigns_all_of_them() {
        let users = vec![TypeVector::new(vec![1.0, 0.0]).unwrap()];
        let creators = vec![
            TypeVector::new(vec![1.0, 0.0]).unwrap(),
            TypeVector::new(vec![0.0, 1.0]).unwrap(),
        ];
        let inst = Instance::new(users, creators, 3, 0.0, 0, 2).unwrap();
        let m = uc_recommend(&inst, &inst.full_state());
        assert_eq!(m.get(0).len(), 2);
    }
}
