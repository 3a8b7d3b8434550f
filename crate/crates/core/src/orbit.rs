//! The orbit map `orb_u : S ∖ F_u → S³`, orbits of lines and of bilinear
//! motions.
//!
//! For a base point over the Euclidean point `v` and `h = p + qε`,
//! `orb_u(h) = (p p̄ : w : 4 q q̄ + p p̄ |v|² + 4 Re(q v p̄))` with
//! `w = p v p̄ + p q̄ − q p̄`, so that `τ(orb_u(h)) = act(h, v)`.
//! A bilinear motion `a + bε` has the bidegree-(2,2) orbit
//! `(a ā : vec(a b̄ − b ā) : 4 b b̄)` of the origin.

use serde::{Deserialize, Serialize};

use crate::algebra::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::moebius::{conic_from_samples, CircleOrPoint, MoebiusPoint};
use crate::poly::{BiPoly, P1};
use crate::scalar::{max_abs, Scalar};
use crate::study::{displacement_numerator, in_base_locus, BaseLocusSpec, StudyLine, StudyPoint};

pub fn orb<S: Scalar>(spec: &BaseLocusSpec<S>, h: &StudyPoint<S>) -> Result<MoebiusPoint<S>> {
    if in_base_locus(spec, h) {
        return Err(Error::BaseLocus);
    }
    let DualQuaternion { p, q } = h.dq();
    let v = spec.v_quat();
    let pp = p.norm();
    let w = displacement_numerator(p, q, &v);
    let qvp = &(q * &v) * &p.conj();
    let last = S::from_i64(4) * q.norm() + pp.clone() * v.norm() + S::from_i64(4) * qvp.w;
    let [w1, w2, w3] = w.vector();
    Ok(MoebiusPoint([pp, w1, w2, w3, last]))
}

/// `(λ : μ)` sample parameters; the first six are 0, 1, −1, 2, 1/2 in
/// both affine charts, the rest are spares for lines meeting `F_u`.
const LINE_SAMPLES: [(i64, i64); 9] = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, 3), (3, 1), (1, -2)];

pub fn orbit_of_line<S: Scalar>(spec: &BaseLocusSpec<S>, line: &StudyLine<S>) -> Result<CircleOrPoint<S>> {
    let mut images = Vec::new();
    for &(l, m) in LINE_SAMPLES.iter() {
        let h = StudyPoint::new(line.point(&S::from_i64(l), &S::from_i64(m)))?;
        match orb(spec, &h) {
            Ok(x) => images.push(x),
            Err(Error::BaseLocus) => continue,
            Err(e) => return Err(e),
        }
        if images.len() == 5 {
            break;
        }
    }
    if images.is_empty() {
        return Err(Error::BaseLocusOnLine);
    }
    conic_from_samples(images).map_err(|e| if e == Error::CollinearWitnesses { Error::BaseLocusOnLine } else { e })
}

/// `H(s, t) = a(s, t) + b(s, t)ε`, bilinear in `(s0:s1)` and `(t0:t1)`.
/// Coefficients are ordered `00, 01, 10, 11`, index `ij` multiplying
/// `s_i t_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BilinearMotion<S> {
    pub a: [Quaternion<S>; 4],
    pub b: [Quaternion<S>; 4],
}

pub(crate) fn bilinear<S: Scalar>(c: &[Quaternion<S>; 4]) -> BiPoly<Quaternion<S>> {
    BiPoly { c: vec![vec![c[0].clone(), c[1].clone()], vec![c[2].clone(), c[3].clone()]] }
}

impl<S: Scalar> BilinearMotion<S> {
    pub fn new(a: [Quaternion<S>; 4], b: [Quaternion<S>; 4]) -> Result<Self> {
        let m = BilinearMotion { a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn from_coefficients(h: [DualQuaternion<S>; 4]) -> Result<Self> {
        let a = h.clone().map(|x| x.p);
        let b = h.map(|x| x.q);
        Self::new(a, b)
    }

    /// Study condition identically and four independent coefficient points.
    pub fn validate(&self) -> Result<()> {
        let residual = self.study_residual();
        let scale = 8.0 * self.coefficient_scale().powi(2);
        if !residual.coeffs().all(|c| c.negligible(scale)) {
            return Err(Error::StudyViolation);
        }
        if rank(&self.coefficient_rows(), 8) < 4 {
            return Err(Error::DegenerateMotion);
        }
        Ok(())
    }

    pub fn a_poly(&self) -> BiPoly<Quaternion<S>> {
        bilinear(&self.a)
    }

    pub fn b_poly(&self) -> BiPoly<Quaternion<S>> {
        bilinear(&self.b)
    }

    /// The biquadratic form `a·b` (componentwise pairing); its nine
    /// coefficients vanish exactly when `H` lies in `S` identically.
    pub fn study_residual(&self) -> BiPoly<S> {
        self.a_poly().dot(&self.b_poly())
    }

    pub fn coefficient(&self, k: usize) -> DualQuaternion<S> {
        DualQuaternion::new(self.a[k].clone(), self.b[k].clone())
    }

    pub fn coefficients(&self) -> [DualQuaternion<S>; 4] {
        [0, 1, 2, 3].map(|k| self.coefficient(k))
    }

    /// The four coefficient points as rows of P⁷ coordinates.
    pub fn coefficient_rows(&self) -> Vec<Vec<S>> {
        (0..4).map(|k| self.coefficient(k).coords().to_vec()).collect()
    }

    fn coefficient_scale(&self) -> f64 {
        self.coefficient_rows().iter().map(|r| max_abs(r)).fold(0.0, f64::max)
    }

    pub fn eval(&self, s: &P1<S>, t: &P1<S>) -> DualQuaternion<S> {
        let w = [
            s[0].clone() * t[0].clone(),
            s[0].clone() * t[1].clone(),
            s[1].clone() * t[0].clone(),
            s[1].clone() * t[1].clone(),
        ];
        (0..4).fold(DualQuaternion::zero(), |acc, k| &acc + &self.coefficient(k).scale(&w[k]))
    }

    /// The ruling `H(s, ·)`.
    pub fn line_at_s(&self, s: &P1<S>) -> Result<StudyLine<S>> {
        let (one, zero) = (S::one(), S::zero());
        StudyLine::new(self.eval(s, &[one.clone(), zero.clone()]), self.eval(s, &[zero, one]))
    }

    /// The ruling `H(·, t)`.
    pub fn line_at_t(&self, t: &P1<S>) -> Result<StudyLine<S>> {
        let (one, zero) = (S::one(), S::zero());
        StudyLine::new(self.eval(&[one.clone(), zero.clone()], t), self.eval(&[zero, one], t))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> BilinearMotion<T> {
        BilinearMotion { a: self.a.clone().map(|q| q.map(f)), b: self.b.clone().map(|q| q.map(f)) }
    }
}

/// Five real bidegree-(2,2) forms `X0..X4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BiquadraticMap<S> {
    #[serde(rename = "X")]
    pub x: [BiPoly<S>; 5],
}

impl<S: Scalar> BiquadraticMap<S> {
    /// `X0 X4 − X1² − X2² − X3²` as a bidegree-(4,4) form.
    pub fn identity_residual(&self) -> BiPoly<S> {
        let x = &self.x;
        let mut r = &x[0] * &x[4];
        for k in 1..4 {
            r = &r - &(&x[k] * &x[k]);
        }
        r
    }

    pub fn satisfies_identity(&self) -> bool {
        let scale = 16.0 * self.max_abs().powi(2);
        self.identity_residual().coeffs().all(|c| c.negligible(scale))
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().map(BiPoly::max_abs).fold(0.0, f64::max)
    }

    /// The five binary quadratics in `t` along `s = const`.
    pub fn at_s(&self, s: &P1<S>) -> [Vec<S>; 5] {
        self.x.clone().map(|f| f.at_s(s))
    }

    /// The five binary quadratics in `s` along `t = const`.
    pub fn at_t(&self, t: &P1<S>) -> [Vec<S>; 5] {
        self.x.clone().map(|f| f.at_t(t))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> BiquadraticMap<T> {
        BiquadraticMap { x: self.x.clone().map(|p| BiPoly { c: p.c.iter().map(|r| r.iter().map(f).collect()).collect() }) }
    }
}

pub fn orbit_of_quadric<S: Scalar>(m: &BilinearMotion<S>) -> Result<BiquadraticMap<S>> {
    let a = m.a_poly();
    let b = m.b_poly();
    let x0 = a.dot(&a);
    let x4 = b.dot(&b).scale(&S::from_i64(4));
    let mul = |u: &Quaternion<S>, v: &Quaternion<S>| u * v;
    let w = &a.mul_with(&b.conj(), mul) - &b.mul_with(&a.conj(), mul);
    let x = [x0, w.component(1), w.component(2), w.component(3), x4];
    if x.iter().all(|f| f.coeffs().all(|c| c.is_zero())) {
        return Err(Error::DegenerateMotion);
    }
    Ok(BiquadraticMap { x })
}

pub fn eval_biquadratic<S: Scalar>(x: &BiquadraticMap<S>, s: &P1<S>, t: &P1<S>) -> Result<MoebiusPoint<S>> {
    let vals = x.x.clone().map(|f| f.eval(s, t));
    let scale = x.max_abs() * max_abs(s).powi(2) * max_abs(t).powi(2);
    if vals.iter().all(|v| v.negligible(9.0 * scale)) {
        return Err(Error::Basepoint);
    }
    Ok(MoebiusPoint(vals))
}
