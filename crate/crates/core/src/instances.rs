//! Instance constructors: the deterministic counter-example families, a
//! uniform sampler over the nonnegative unit sphere, threshold calibration,
//! and the embedding that turns arbitrary nonnegative types into unit
//! vectors.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, TypeVector};

/// Monte-Carlo sample count used to calibrate the engagement threshold when
/// the caller does not pick one.
pub const DEFAULT_CALIBRATION_SAMPLES: usize = 10_000;

fn unit2(angle: f64) -> TypeVector {
    TypeVector::new(vec![angle.cos(), angle.sin()]).expect("angle in the first quadrant")
}

/// Two creators, six users in the plane. One flexible user sits between the
/// two clusters: assigning her greedily starves the smaller cluster's
/// creator, while steering her keeps everyone on the platform.
pub fn example_simple() -> Instance {
    let users = vec![
        unit2(PI / 2.0),
        unit2(PI / 2.0),
        unit2(PI / 6.0),
        unit2(0.0),
        unit2(0.0),
        unit2(0.0),
    ];
    let creators = vec![unit2(PI / 2.0), unit2(0.0)];
    Instance::new(users, creators, 1, (PI / 3.0).cos(), 3, 2).expect("valid by construction")
}

/// The "megacrown" family: two corner creators whose audiences fall exactly
/// one short under greedy recommendations, plus `m - 2` universally liked
/// center creators. Under the greedy algorithm both corners leave at t = 0,
/// after which no user can fill `k = m - 1` slots and the platform empties.
///
/// `a_bar = max(ceil(n_hint / 2) + 1, 3)`; the instance has `2·a_bar - 2`
/// users.
pub fn example_megacrown(m: usize, n_hint: usize) -> Result<Instance> {
    if m < 3 {
        return Err(Error::Precondition(format!("megacrown needs m >= 3 creators, got {m}")));
    }
    let a_bar = (n_hint.div_ceil(2) + 1).max(3);
    let mut creators = Vec::with_capacity(m);
    creators.push(unit2(PI / 2.0));
    for _ in 0..m - 2 {
        creators.push(unit2(PI / 4.0));
    }
    creators.push(unit2(0.0));
    let mut users = Vec::with_capacity(2 * a_bar - 2);
    for _ in 0..a_bar - 2 {
        users.push(unit2(PI / 2.0));
    }
    users.push(unit2(PI / 3.0));
    users.push(unit2(PI / 6.0));
    for _ in 0..a_bar - 2 {
        users.push(unit2(0.0));
    }
    Instance::new(users, creators, m - 1, (PI / 3.0).cos(), a_bar, 2)
}

/// The cascade family: `2n` creators spaced along the quarter circle and
/// `2n` users placed so that user `i` is happy exactly with creators
/// `i - 1`, `i`, `i + 1` and prefers the latter two. Greedy recommendations
/// starve one endpoint after another, shedding one player per step until two
/// users and two creators remain.
pub fn example_cascade(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Precondition(format!("cascade needs n >= 2, got {n}")));
    }
    let theta = PI / (6.0 * (2 * n - 1) as f64);
    let creator_angle = |i: usize| 3.0 * (i - 1) as f64 * theta; // 1-based
    let creators: Vec<TypeVector> = (1..=2 * n).map(|i| unit2(creator_angle(i))).collect();
    let mut users: Vec<TypeVector> = (1..=2 * n - 1)
        .map(|i| unit2(creator_angle(i) + theta))
        .collect();
    users.push(unit2(creator_angle(2 * n) - theta));
    let e_bar = (4.0 * theta).cos();
    Instance::new(users, creators, 2, e_bar, 2, 2)
}

/// The flower: a center cluster (4 creators, 5 users) with five corner
/// clusters (1 creator, `a_bar - 5` users each) placed at chord distance `d`
/// from the center, pairwise further than `d` apart. The threshold makes `d`
/// exactly the happy distance, so each corner user is happy with precisely
/// the 4 center creators and her own corner creator, and the only matching
/// retaining everyone wires every corner creator to all 5 center users.
pub fn example_flower(a_bar: usize, d: f64) -> Result<Instance> {
    if a_bar < 7 {
        return Err(Error::Precondition(format!("flower needs a_bar >= 7, got {a_bar}")));
    }
    if !(0.0 < d && d < 1.0) {
        return Err(Error::Precondition(format!("flower needs 0 < d < 1, got {d}")));
    }
    let e_bar = (2.0 * (d / 2.0).asin()).cos();
    let s3 = 3f64.sqrt();
    let center = [1.0 / s3, 1.0 / s3, 1.0 / s3];
    // Orthonormal tangent frame at the center.
    let e1 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let e2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    let phi = 2.0 * (d / 2.0).asin();
    let corner = |k: usize| -> Result<TypeVector> {
        let angle = 2.0 * PI * k as f64 / 5.0;
        let coords: Vec<f64> = (0..3)
            .map(|t| phi.cos() * center[t] + phi.sin() * (angle.cos() * e1[t] + angle.sin() * e2[t]))
            .collect();
        if coords.iter().any(|&x| x < 0.0) {
            return Err(Error::Precondition(format!(
                "corner {k} leaves the nonnegative orthant for d = {d}"
            )));
        }
        TypeVector::new(coords)
    };
    let center_vec = TypeVector::new(center.to_vec())?;
    let corners: Vec<TypeVector> = (0..5).map(corner).collect::<Result<_>>()?;

    let mut creators = vec![center_vec.clone(); 4];
    creators.extend(corners.iter().cloned());
    let mut users = vec![center_vec; 5];
    for c in &corners {
        for _ in 0..a_bar - 5 {
            users.push(c.clone());
        }
    }
    Instance::new(users, creators, 5, e_bar, a_bar, 3)
}

// Box-Muller; keeps the RNG stream self-contained and reproducible.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

fn sample_orthant_unit(rng: &mut impl Rng, dim: usize) -> TypeVector {
    // Coordinate-wise absolute value of a standard Gaussian is uniform on
    // the nonnegative patch of the sphere by sign-reflection symmetry.
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| standard_normal(rng).abs()).collect();
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return TypeVector::new(coords.iter().map(|x| x / norm).collect())
                .expect("normalized nonnegative vector");
        }
    }
}

/// Instance with all types drawn i.i.d. uniformly from the nonnegative unit
/// sphere. Deterministic in `seed`.
pub fn sample_uniform_instance(
    u: usize,
    c: usize,
    k: usize,
    a_bar: usize,
    dim: usize,
    e_bar: f64,
    seed: u64,
) -> Result<Instance> {
    if dim < 2 {
        return Err(Error::Precondition(format!("sampler needs dim >= 2, got {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let users = (0..u).map(|_| sample_orthant_unit(&mut rng, dim)).collect();
    let creators = (0..c).map(|_| sample_orthant_unit(&mut rng, dim)).collect();
    Instance::new(users, creators, k, e_bar, a_bar, dim)
}

/// Engagement threshold calibrated to the type dimension: `e_m` times the
/// Monte-Carlo mean engagement of an independent random user–creator pair.
pub fn calibrate_e_bar(dim: usize, e_m: f64, samples: usize, seed: u64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Precondition(format!("calibration needs dim >= 2, got {dim}")));
    }
    if samples < 1 {
        return Err(Error::Precondition("calibration needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples {
        let u = sample_orthant_unit(&mut rng, dim);
        let c = sample_orthant_unit(&mut rng, dim);
        total += u.dot(&c);
    }
    Ok(e_m * total / samples as f64)
}

/// Embeds arbitrary nonnegative (nonzero) types as unit vectors in dimension
/// `D + 2`: scale users by the largest user norm, creators by the largest
/// creator norm, and give each side its own balancing coordinate. Happiness
/// is preserved exactly and every engagement is scaled by
/// `1 / (l_u · l_c)`, as is the returned threshold.
pub fn embed_unit_vectors(
    raw_users: &[Vec<f64>],
    raw_creators: &[Vec<f64>],
    e_bar: f64,
    k: usize,
    a_bar: usize,
) -> Result<Instance> {
    if raw_users.is_empty() || raw_creators.is_empty() {
        return Err(Error::Precondition("need at least one user and one creator".into()));
    }
    let dim = raw_users[0].len();
    let norm = |v: &Vec<f64>| -> Result<f64> {
        if v.len() != dim {
            return Err(Error::DimensionMismatch(v.len(), dim));
        }
        if v.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::Precondition("raw vectors must be nonnegative and finite".into()));
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n <= 0.0 {
            return Err(Error::Precondition("raw vectors must be nonzero".into()));
        }
        Ok(n)
    };
    let user_norms: Vec<f64> = raw_users.iter().map(norm).collect::<Result<_>>()?;
    let creator_norms: Vec<f64> = raw_creators.iter().map(norm).collect::<Result<_>>()?;
    let l_u = user_norms.iter().cloned().fold(f64::MIN, f64::max);
    let l_c = creator_norms.iter().cloned().fold(f64::MIN, f64::max);

    let embed = |v: &Vec<f64>, n: f64, l: f64, user_side: bool| -> Result<TypeVector> {
        let mut coords: Vec<f64> = v.iter().map(|x| x / l).collect();
        let balance = ((l * l - n * n).max(0.0)).sqrt() / l;
        if user_side {
            coords.push(balance);
            coords.push(0.0);
        } else {
            coords.push(0.0);
            coords.push(balance);
        }
        TypeVector::new(coords)
    };
    let users = raw_users
        .iter()
        .zip(&user_norms)
        .map(|(v, &n)| embed(v, n, l_u, true))
        .collect::<Result<_>>()?;
    let creators = raw_creators
        .iter()
        .zip(&creator_norms)
        .map(|(v, &n)| embed(v, n, l_c, false))
        .collect::<Result<_>>()?;
    Instance::new(users, creators, k, e_bar / (l_u * l_c), a_bar, dim + 2)
}
