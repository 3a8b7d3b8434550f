//! Seeded random bilinear motions with `H((1:0),(1:0)) = 𝔢`.
//!
//! The generic construction writes `H = s0t0 𝔢 + s0t1 A + s1t0 B + s1t1 C`
//! where `A` and `B` lie on rotation lines through `𝔢`. The Study condition
//! then reduces to `B(𝔢,C) = −B(A,B)`, `B(A,C) = B(B,C) = 0` and
//! `C ∈ S`; `C = BA + λD` with `D` in the common kernel of `B(𝔢,·)`,
//! `B(A,·)`, `B(B,·)` solves all of them for a unique rational `λ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{study_pairing, study_polar, DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::linalg::{cross3, nullspace, rank};
use crate::orbit::BilinearMotion;
use crate::scalar::{Rational, Zero};

const MAX_ATTEMPTS: usize = 200;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConstraints {
    /// Only rotations about axes through the origin: `b ≡ 0`.
    pub rotations_only: bool,
    /// Permit coefficient spans whose 3-space lies inside `S`.
    pub allow_uo: bool,
}

fn small(rng: &mut ChaCha8Rng) -> i64 {
    rng.random_range(-3..=3)
}

fn small_vec(rng: &mut ChaCha8Rng) -> [Rational; 3] {
    [0; 3].map(|_| Rational::integer(small(rng)))
}

/// A point `α𝔢 + d + (d × c)ε` on the rotation line about the axis through
/// `c` with direction `d`, the axis missing the origin.
fn rotation_point(rng: &mut ChaCha8Rng) -> Option<DualQuaternion<Rational>> {
    let c = small_vec(rng);
    let d = small_vec(rng);
    let moment = cross3(&d, &c);
    // an axis through the origin would fix 𝔬 along a whole family member
    if moment.iter().all(Zero::is_zero) {
        return None;
    }
    let alpha = Rational::new(small(rng), rng.random_range(1..=3));
    let mut p = Quaternion::pure(d.clone());
    p.w = alpha;
    Some(DualQuaternion::new(p, Quaternion::pure(moment)))
}

fn generic_attempt(rng: &mut ChaCha8Rng, allow_uo: bool) -> Option<BilinearMotion<Rational>> {
    let e = DualQuaternion::<Rational>::identity();
    let a = rotation_point(rng)?;
    let b = rotation_point(rng)?;
    if !allow_uo && study_polar(&a, &b).is_zero() {
        return None;
    }
    let forms: Vec<Vec<Rational>> = [&e, &a, &b]
        .iter()
        .map(|g| (0..8).map(|k| {
            let mut unit = [0i64; 8];
            unit[k] = 1;
            study_polar(g, &DualQuaternion::from_coords(&unit.map(Rational::integer)))
        }).collect())
        .collect();
    let kernel = nullspace(&forms, 8);
    let mut d = vec![Rational::zero(); 8];
    for v in &kernel {
        let k = Rational::integer(small(rng));
        for (x, y) in d.iter_mut().zip(v) {
            *x = x.clone() + k.clone() * y.clone();
        }
    }
    let d = DualQuaternion::from_coords(&d);
    let sq = study_pairing(&d);
    if sq.is_zero() {
        return None;
    }
    let ba = &b * &a;
    let lambda = -study_polar(&ba, &d) / sq;
    let c = &ba + &d.scale(&lambda);
    BilinearMotion::from_coefficients([e, a, b, c]).ok()
}

fn rotations_only_attempt(rng: &mut ChaCha8Rng) -> Option<BilinearMotion<Rational>> {
    let mut a = [0; 4].map(|_| Quaternion::new(
        Rational::integer(small(rng)),
        Rational::integer(small(rng)),
        Rational::integer(small(rng)),
        Rational::integer(small(rng)),
    ));
    a[0] = Quaternion::one();
    let rows: Vec<Vec<Rational>> = a.iter().map(|q| q.coeffs().to_vec()).collect();
    if rank(&rows, 4) < 4 {
        return None;
    }
    BilinearMotion::new(a, [0; 4].map(|_| Quaternion::zero())).ok()
}

/// Deterministic in `seed`; fails with [`Error::Generation`] after a bounded
/// number of rejected draws.
pub fn random_motion(seed: u64, constraints: GenConstraints) -> Result<BilinearMotion<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let m = if constraints.rotations_only {
            rotations_only_attempt(&mut rng)
        } else {
            generic_attempt(&mut rng, constraints.allow_uo)
        };
        if let Some(m) = m {
            return Ok(m);
        }
    }
    Err(Error::Generation(format!("no valid motion after {MAX_ATTEMPTS} draws")))
}
