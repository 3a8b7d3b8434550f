//! Independent exact oracles shared by the integration tests. Nothing here
//! calls into the library's algebra or linear algebra.

#![allow(dead_code)]

use darboux::algebra::{DualQuaternion, Quaternion};
use darboux::orbit::BilinearMotion;
use darboux::scalar::{One, Zero};
use darboux::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type R = Rational;
pub type Q4 = [R; 4];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: i64) -> R {
    Rational::integer(n)
}

pub fn small(rng: &mut ChaCha8Rng, bound: i64) -> R {
    Rational::new(rng.random_range(-bound..=bound), rng.random_range(1..=4))
}

pub fn small_vec<const N: usize>(rng: &mut ChaCha8Rng, bound: i64) -> [R; N] {
    std::array::from_fn(|_| small(rng, bound))
}

pub fn nonzero_vec<const N: usize>(rng: &mut ChaCha8Rng, bound: i64) -> [R; N] {
    loop {
        let v = small_vec::<N>(rng, bound);
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// Hamilton product written out coordinate by coordinate.
pub fn ham(a: &Q4, b: &Q4) -> Q4 {
    let [a0, a1, a2, a3] = a.clone();
    let [b0, b1, b2, b3] = b.clone();
    [
        a0.clone() * b0.clone() - a1.clone() * b1.clone() - a2.clone() * b2.clone() - a3.clone() * b3.clone(),
        a0.clone() * b1.clone() + a1.clone() * b0.clone() + a2.clone() * b3.clone() - a3.clone() * b2.clone(),
        a0.clone() * b2.clone() - a1.clone() * b3.clone() + a2.clone() * b0.clone() + a3.clone() * b1.clone(),
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

pub fn conj4(a: &Q4) -> Q4 {
    [a[0].clone(), -a[1].clone(), -a[2].clone(), -a[3].clone()]
}

pub fn add4(a: &Q4, b: &Q4) -> Q4 {
    std::array::from_fn(|k| a[k].clone() + b[k].clone())
}

pub fn sub4(a: &Q4, b: &Q4) -> Q4 {
    std::array::from_fn(|k| a[k].clone() - b[k].clone())
}

pub fn scale4(a: &Q4, s: &R) -> Q4 {
    std::array::from_fn(|k| a[k].clone() * s.clone())
}

pub fn dot<const N: usize>(a: &[R; N], b: &[R; N]) -> R {
    a.iter().zip(b).fold(R::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn pure(v: &[R; 3]) -> Q4 {
    [R::zero(), v[0].clone(), v[1].clone(), v[2].clone()]
}

pub fn cross(a: &[R; 3], b: &[R; 3]) -> [R; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn quat(a: &Q4) -> Quaternion<R> {
    Quaternion::from(a.clone())
}

pub fn coeffs(q: &Quaternion<R>) -> Q4 {
    q.coeffs()
}

pub fn dq(p: &Q4, q: &Q4) -> DualQuaternion<R> {
    DualQuaternion::new(quat(p), quat(q))
}

pub fn parts(h: &DualQuaternion<R>) -> (Q4, Q4) {
    (h.p.coeffs(), h.q.coeffs())
}

/// A random point `p + qε` of the Study quadric with `p ≠ 0`: `q` is
/// projected onto the orthogonal complement of `p`.
pub fn random_study_point(rng: &mut ChaCha8Rng, bound: i64) -> DualQuaternion<R> {
    let p: Q4 = nonzero_vec(rng, bound);
    let q0: Q4 = small_vec(rng, bound);
    let k = dot(&p, &q0) / dot(&p, &p);
    dq(&p, &sub4(&q0, &scale4(&p, &k)))
}

/// Unnormalized rotation matrix of `v ↦ p v p̄` (Euler-Rodrigues).
pub fn rotation_matrix(p: &Q4) -> [[R; 3]; 3] {
    let [w, x, y, z] = p.clone();
    let two = int(2);
    let sq = |a: &R| a.clone() * a.clone();
    let m = |a: &R, b: &R| a.clone() * b.clone();
    [
        [
            sq(&w) + sq(&x) - sq(&y) - sq(&z),
            two.clone() * (m(&x, &y) - m(&w, &z)),
            two.clone() * (m(&x, &z) + m(&w, &y)),
        ],
        [
            two.clone() * (m(&x, &y) + m(&w, &z)),
            sq(&w) - sq(&x) + sq(&y) - sq(&z),
            two.clone() * (m(&y, &z) - m(&w, &x)),
        ],
        [
            two.clone() * (m(&x, &z) - m(&w, &y)),
            two.clone() * (m(&y, &z) + m(&w, &x)),
            sq(&w) - sq(&x) - sq(&y) + sq(&z),
        ],
    ]
}

/// The rigid motion of `p + qε` applied to `v`: rotation matrix plus the
/// translation `2 vec(p q̄)`, over `|p|²`.
pub fn rigid_motion(h: &DualQuaternion<R>, v: &[R; 3]) -> [R; 3] {
    let (p, q) = parts(h);
    let n = dot(&p, &p);
    let rot = rotation_matrix(&p);
    let pq = ham(&p, &conj4(&q));
    std::array::from_fn(|i| {
        let rv = (0..3).fold(R::zero(), |acc, j| acc + rot[i][j].clone() * v[j].clone());
        (rv + int(2) * pq[i + 1].clone()) / n.clone()
    })
}

/// `(p p̄ : 2 vec(p q̄) : 4 q q̄)`, the image of the origin.
pub fn origin_image(p: &Q4, q: &Q4) -> [R; 5] {
    let w = ham(p, &conj4(q));
    [
        dot(p, p),
        int(2) * w[1].clone(),
        int(2) * w[2].clone(),
        int(2) * w[3].clone(),
        int(4) * dot(q, q),
    ]
}

/// `H(s, t) = Σ s_i t_j (a_ij + b_ij ε)`.
pub fn eval_motion(m: &BilinearMotion<R>, s: &[R; 2], t: &[R; 2]) -> (Q4, Q4) {
    let mut p: Q4 = std::array::from_fn(|_| R::zero());
    let mut q = p.clone();
    for i in 0..2 {
        for j in 0..2 {
            let w = s[i].clone() * t[j].clone();
            p = add4(&p, &scale4(&m.a[2 * i + j].coeffs(), &w));
            q = add4(&q, &scale4(&m.b[2 * i + j].coeffs(), &w));
        }
    }
    (p, q)
}

pub fn motion_image(m: &BilinearMotion<R>, s: &[R; 2], t: &[R; 2]) -> [R; 5] {
    let (p, q) = eval_motion(m, s, t);
    origin_image(&p, &q)
}

/// Rank by Gaussian elimination over the rationals.
pub fn rank(rows: &[Vec<R>]) -> usize {
    let mut m: Vec<Vec<R>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() / m[r][c].clone();
                for k in c..ncols {
                    let d = f.clone() * m[r][k].clone();
                    m[i][k] = m[i][k].clone() - d;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn same_span(a: &[Vec<R>], b: &[Vec<R>]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let both: Vec<Vec<R>> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(&both) == ra
}

/// Solves `Σ c_i rows_i = v` exactly for independent rows.
pub fn coordinates(rows: &[Vec<R>], v: &[R]) -> Option<Vec<R>> {
    let n = rows.len();
    let ncols = v.len();
    // columns are equations: aug[e] = (rows[0][e], …, rows[n-1][e] | v[e])
    let mut aug: Vec<Vec<R>> = (0..ncols).map(|e| rows.iter().map(|r| r[e].clone()).chain([v[e].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let piv = (r..aug.len()).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(r, piv);
        let lead = aug[r][c].clone();
        for k in 0..=n {
            aug[r][k] = aug[r][k].clone() / lead.clone();
        }
        for i in 0..aug.len() {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for k in 0..=n {
                    let d = f.clone() * aug[r][k].clone();
                    aug[i][k] = aug[i][k].clone() - d;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if aug[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| aug[i][n].clone()).collect())
}

pub fn proportional(a: &[R], b: &[R]) -> bool {
    rank(&[a.to_vec(), b.to_vec()]) == 1
}

/// Product of two coefficient grids `c[i][j]` of bihomogeneous forms.
pub fn grid_mul(a: &[Vec<R>], b: &[Vec<R>]) -> Vec<Vec<R>> {
    let (da, ea) = (a.len(), a[0].len());
    let (db, eb) = (b.len(), b[0].len());
    let mut out = vec![vec![R::zero(); ea + eb - 1]; da + db - 1];
    for i in 0..da {
        for j in 0..ea {
            for k in 0..db {
                for l in 0..eb {
                    out[i + k][j + l] = out[i + k][j + l].clone() + a[i][j].clone() * b[k][l].clone();
                }
            }
        }
    }
    out
}

pub fn one() -> R {
    R::one()
}

pub fn p1(a: i64, b: i64) -> [R; 2] {
    [int(a), int(b)]
}
