//! Quaternionic factorization of a biquadratic map on the Moebius quadric:
//! bilinear `A, B ∈ ℍ[s,t]` with `N(A) = X₀`, `N(B) = X₄` and
//! `AB = X₁𝐢 + X₂𝐣 + X₃𝐤`.
//!
//! Convention map. For a motion `H = a + εb` the orbit of the origin is
//! `(aā : vec(ab̄ − bā) : 4bb̄)`, and on the Study quadric `ab̄` is pure, so
//! `vec(ab̄ − bā) = 2ab̄`. Hence
//!
//! ```text
//! A = a,  B = 2b̄          (forward)
//! a = A,  b = B̄/2         (to_motion)
//! ```
//!
//! reproduces `orbit_of_quadric(H)` coefficient for coefficient. The gauge
//! `(Aµ, µ̄B)` is the right multiplication `H ↦ Hµ` by a rotation about the
//! origin.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::orbit::{bilinear, BiquadraticMap, BilinearMotion};
use crate::poly::BiPoly;
use crate::scalar::{max_abs, Scalar};

pub const DEFAULT_RESTARTS: usize = 50;
pub const MAX_ITERATIONS: usize = 200;
pub const CONVERGED: f64 = 1e-10;
pub const ACCEPTED: f64 = 1e-8;
const POLISH_STEPS: usize = 3;

/// `Σ c_k m_k` over the monomials `s₀t₀, s₀t₁, s₁t₀, s₁t₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound = "S: Scalar")]
pub struct BilinearQuatPoly<S> {
    pub c: [Quaternion<S>; 4],
}

impl<S: Scalar> BilinearQuatPoly<S> {
    pub fn new(c: [Quaternion<S>; 4]) -> Self {
        BilinearQuatPoly { c }
    }

    pub fn zero() -> Self {
        BilinearQuatPoly { c: [0; 4].map(|_| Quaternion::zero()) }
    }

    pub fn poly(&self) -> BiPoly<Quaternion<S>> {
        bilinear(&self.c)
    }

    pub fn norm(&self) -> BiPoly<S> {
        let p = self.poly();
        p.dot(&p)
    }

    pub fn right_mul(&self, mu: &Quaternion<S>) -> Self {
        BilinearQuatPoly { c: self.c.clone().map(|q| &q * mu) }
    }

    pub fn left_mul(&self, mu: &Quaternion<S>) -> Self {
        BilinearQuatPoly { c: self.c.clone().map(|q| mu * &q) }
    }

    pub fn conj(&self) -> Self {
        BilinearQuatPoly { c: self.c.clone().map(|q| q.conj()) }
    }

    pub fn scale(&self, k: &S) -> Self {
        BilinearQuatPoly { c: self.c.clone().map(|q| q.scale(k)) }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> BilinearQuatPoly<T> {
        BilinearQuatPoly { c: self.c.clone().map(|q| q.map(f)) }
    }
}

/// Residuals of the three identities after the optimal common rescaling
/// of `(N(A), N(B), AB)` onto `X`, relative to the rescaled `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCertificate {
    #[serde(rename = "r_normA")]
    pub r_norm_a: f64,
    #[serde(rename = "r_normB")]
    pub r_norm_b: f64,
    #[serde(rename = "r_AB")]
    pub r_ab: f64,
}

impl FactorizationCertificate {
    pub fn max(&self) -> f64 {
        self.r_norm_a.max(self.r_norm_b).max(self.r_ab)
    }

    pub fn accepted(&self, tol: f64) -> bool {
        self.max() < tol
    }

    /// Exact certificates report exact zeros.
    pub fn is_exact_zero(&self) -> bool {
        self.max() == 0.0
    }
}

fn stack<S: Scalar>(polys: &[&BiPoly<S>]) -> Vec<S> {
    polys.iter().flat_map(|p| p.coeffs().cloned().collect::<Vec<_>>()).collect()
}

pub fn verify_factorization<S: Scalar>(
    a: &BilinearQuatPoly<S>,
    b: &BilinearQuatPoly<S>,
    x: &BiquadraticMap<S>,
) -> FactorizationCertificate {
    let ab = &a.poly() * &b.poly();
    let na = a.norm();
    let nb = b.norm();
    let parts = [ab.component(0), ab.component(1), ab.component(2), ab.component(3)];
    let zero = BiPoly::<S>::zeros(2, 2);
    let y = stack(&[&na, &nb, &parts[0], &parts[1], &parts[2], &parts[3]]);
    let z = stack(&[&x.x[0], &x.x[4], &zero, &x.x[1], &x.x[2], &x.x[3]]);
    let dot = |u: &[S], v: &[S]| u.iter().zip(v).fold(S::zero(), |acc, (p, q)| acc + p.clone() * q.clone());
    let zz = dot(&z, &z);
    let fail = FactorizationCertificate { r_norm_a: f64::INFINITY, r_norm_b: f64::INFINITY, r_ab: f64::INFINITY };
    if zz.is_zero() {
        return fail;
    }
    let lambda = dot(&y, &z) / zz;
    let target: Vec<S> = z.iter().map(|c| lambda.clone() * c.clone()).collect();
    let norm = max_abs(&target);
    if norm == 0.0 {
        return fail;
    }
    let dev: Vec<S> = y.iter().zip(&target).map(|(p, q)| p.clone() - q.clone()).collect();
    let group = |r: std::ops::Range<usize>| if S::EXACT && dev[r.clone()].iter().all(|c| c.is_zero()) { 0.0 } else { max_abs(&dev[r]) / norm };
    FactorizationCertificate { r_norm_a: group(0..9), r_norm_b: group(9..18), r_ab: group(18..54) }
}

/// `(A, B) = (a, 2b̄)` for a motion `a + εb`.
pub fn from_motion<S: Scalar>(m: &BilinearMotion<S>) -> (BilinearQuatPoly<S>, BilinearQuatPoly<S>) {
    let two = S::from_i64(2);
    (BilinearQuatPoly::new(m.a.clone()), BilinearQuatPoly::new(m.b.clone().map(|q| q.conj().scale(&two))))
}

/// `a = A`, `b = B̄/2`. Only the Study condition is checked, so degenerate
/// pencils (for instance `B = 0`) are allowed.
pub fn to_motion<S: Scalar>(a: &BilinearQuatPoly<S>, b: &BilinearQuatPoly<S>) -> Result<BilinearMotion<S>> {
    let half = S::ratio(1, 2);
    let m = BilinearMotion { a: a.c.clone(), b: b.c.clone().map(|q| q.conj().scale(&half)) };
    let scale = 8.0 * m.coefficient_rows().iter().map(|r| max_abs(r)).fold(0.0, f64::max).powi(2);
    if !m.study_residual().coeffs().all(|c| c.negligible(scale)) {
        return Err(Error::StudyViolation);
    }
    Ok(m)
}

/// Unknowns: 16 coefficients of `A` then 16 of `B`.
type Unknowns = [f64; 32];

struct Target {
    /// `X₀, X₄, 0, X₁, X₂, X₃` as 9-coefficient grids.
    rows: [[f64; 9]; 6],
}

const MONOMIAL: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

fn quat(z: &[f64], k: usize) -> [f64; 4] {
    [z[4 * k], z[4 * k + 1], z[4 * k + 2], z[4 * k + 3]]
}

fn qmul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn residuals(z: &Unknowns, target: &Target) -> [f64; 54] {
    let mut out = [0.0; 54];
    for (k, &(ks, kt)) in MONOMIAL.iter().enumerate() {
        let ak = quat(z, k);
        let bk = quat(z, 4 + k);
        for (l, &(ls, lt)) in MONOMIAL.iter().enumerate() {
            let idx = 3 * (ks + ls) + (kt + lt);
            let al = quat(z, l);
            let bl = quat(z, 4 + l);
            out[idx] += (0..4).map(|c| ak[c] * al[c]).sum::<f64>();
            out[9 + idx] += (0..4).map(|c| bk[c] * bl[c]).sum::<f64>();
            let p = qmul(ak, bl);
            for c in 0..4 {
                out[18 + 9 * c + idx] += p[c];
            }
        }
    }
    for (g, row) in target.rows.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            out[9 * g + i] -= v;
        }
    }
    out
}

fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Central differences with unit step are exact for quadratic residuals.
fn jacobian(z: &Unknowns, target: &Target) -> DMatrix<f64> {
    let mut j = DMatrix::<f64>::zeros(54, 32);
    for c in 0..32 {
        let mut zp = *z;
        let mut zm = *z;
        zp[c] += 1.0;
        zm[c] -= 1.0;
        let (rp, rm) = (residuals(&zp, target), residuals(&zm, target));
        for r in 0..54 {
            j[(r, c)] = 0.5 * (rp[r] - rm[r]);
        }
    }
    j
}

/// Damped Gauss–Newton (Levenberg–Marquardt) from `z`.
fn levenberg_marquardt(mut z: Unknowns, target: &Target) -> (Unknowns, f64) {
    let mut r = residuals(&z, target);
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut mu = 1e-3;
    let mut polish = 0;
    for _ in 0..MAX_ITERATIONS {
        // a few extra steps past convergence push the residual to rounding level
        if max_norm(&r) < CONVERGED {
            polish += 1;
            if polish > POLISH_STEPS {
                break;
            }
        }
        let j = jacobian(&z, target);
        let jt = j.transpose();
        let g = &jt * DVector::from_row_slice(&r);
        let h = &jt * &j;
        let mut improved = false;
        for _ in 0..12 {
            let mut damped = h.clone();
            for d in 0..32 {
                damped[(d, d)] += mu * (1.0 + h[(d, d)]);
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&(-&g))) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = z;
            for (t, s) in trial.iter_mut().zip(step.iter()) {
                *t += s;
            }
            let rt = residuals(&trial, target);
            let ct: f64 = rt.iter().map(|v| v * v).sum();
            if ct < cost {
                z = trial;
                r = rt;
                cost = ct;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (z, max_norm(&r))
}

/// `X` scaled to max-abs coefficient 1 with `X₀ > 0` at a generic point.
fn normalized(x: &BiquadraticMap<f64>) -> BiquadraticMap<f64> {
    let m = x.max_abs();
    let probe = x.x[0].eval(&[1.0, 0.371], &[1.0, 0.613]);
    let k = if probe < 0.0 { -1.0 / m } else { 1.0 / m };
    BiquadraticMap { x: x.x.clone().map(|p| p.scale(&k)) }
}

fn grid(p: &BiPoly<f64>) -> [f64; 9] {
    let v: Vec<f64> = p.coeffs().copied().collect();
    std::array::from_fn(|i| v[i])
}

fn split(z: &Unknowns) -> (BilinearQuatPoly<f64>, BilinearQuatPoly<f64>) {
    let q = |k: usize| Quaternion::from(quat(z, k));
    (BilinearQuatPoly::new([q(0), q(1), q(2), q(3)]), BilinearQuatPoly::new([q(4), q(5), q(6), q(7)]))
}

/// Gauge fix: `A`'s largest coefficient becomes real, positive and of unit
/// norm via `(A, B) ↦ (c Aµ, c µ̄B)`.
pub fn fix_gauge(a: &BilinearQuatPoly<f64>, b: &BilinearQuatPoly<f64>) -> (BilinearQuatPoly<f64>, BilinearQuatPoly<f64>) {
    let k = (0..4).max_by(|&i, &j| a.c[i].norm().total_cmp(&a.c[j].norm())).unwrap_or(0);
    let n = a.c[k].norm().sqrt();
    if n == 0.0 {
        return (a.clone(), b.clone());
    }
    let mu = a.c[k].conj().scale(&(1.0 / n));
    let c = 1.0 / n;
    (a.right_mul(&mu).scale(&c), b.left_mul(&mu.conj()).scale(&c))
}

/// Numerical factorization of `X`, deterministic in `(seed, restarts)`.
pub fn factor<S: Scalar>(
    x: &BiquadraticMap<S>,
    seed: u64,
    restarts: usize,
) -> Result<(BilinearQuatPoly<f64>, BilinearQuatPoly<f64>, FactorizationCertificate)> {
    if x.x[0].coeffs().all(|c| c.is_zero()) {
        return Err(Error::ZeroNormForm);
    }
    if !x.satisfies_identity() {
        return Err(Error::NotOnMoebius);
    }
    let xf = normalized(&x.map(|c| c.to_f64()));
    let zero = [0.0; 9];
    let target = Target { rows: [grid(&xf.x[0]), grid(&xf.x[4]), zero, grid(&xf.x[1]), grid(&xf.x[2]), grid(&xf.x[3])] };
    let mut best = f64::INFINITY;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let z0: Unknowns = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal));
        let (z, res) = levenberg_marquardt(z0, &target);
        best = best.min(res);
        if res < ACCEPTED {
            let (a, b) = split(&z);
            let (a, b) = fix_gauge(&a, &b);
            let cert = verify_factorization(&a, &b, &xf);
            if cert.accepted(ACCEPTED) {
                return Ok((a, b, cert));
            }
        }
    }
    Err(Error::NoConvergence { restarts, best })
}
