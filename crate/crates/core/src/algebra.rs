//! Quaternions and dual quaternions over a generic [`Scalar`].
//!
//! A dual quaternion `h = p + q ε` is stored as its primal part `p` and dual
//! part `q`. As a point of P⁷ its coordinates are
//! `(p0, p1, p2, p3, q4, q5, q6, q7)` where `q4..q7` are the `w, x, y, z`
//! coefficients of `q`.
//!
//! Index map for the Study form: `p_k` pairs with `q_{k+4}`, i.e. the form is
//! `p0 q4 + p1 q5 + p2 q6 + p3 q7`, the Euclidean dot product of the
//! coefficient vectors of `p` and `q`. [`study_pairing`] is the only place
//! that encodes this.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// `w + x𝐢 + y𝐣 + z𝐤`. Serialized as `[w, x, y, z]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[S; 4]", into = "[S; 4]", bound = "S: Scalar")]
pub struct Quaternion<S> {
    pub w: S,
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> From<[S; 4]> for Quaternion<S> {
    fn from([w, x, y, z]: [S; 4]) -> Self {
        Quaternion { w, x, y, z }
    }
}

impl<S: Scalar> From<Quaternion<S>> for [S; 4] {
    fn from(q: Quaternion<S>) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl<S: Scalar> Quaternion<S> {
    pub fn new(w: S, x: S, y: S, z: S) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn real(w: S) -> Self {
        Self::new(w, S::zero(), S::zero(), S::zero())
    }

    pub fn i() -> Self {
        Self::new(S::zero(), S::one(), S::zero(), S::zero())
    }

    pub fn j() -> Self {
        Self::new(S::zero(), S::zero(), S::one(), S::zero())
    }

    pub fn k() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::one())
    }

    /// Embeds a 3-vector as the pure quaternion `v1𝐢 + v2𝐣 + v3𝐤`.
    pub fn pure(v: [S; 3]) -> Self {
        let [x, y, z] = v;
        Self::new(S::zero(), x, y, z)
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::new(S::from_i64(c[0]), S::from_i64(c[1]), S::from_i64(c[2]), S::from_i64(c[3]))
    }

    pub fn coeffs(&self) -> [S; 4] {
        [self.w.clone(), self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn vector(&self) -> [S; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }

    /// `q q̄ = w² + x² + y² + z²`.
    pub fn norm(&self) -> S {
        self.dot(self)
    }

    /// Euclidean dot product of the coefficient vectors; equals `Re(a b̄)`.
    pub fn dot(&self, other: &Self) -> S {
        self.w.clone() * other.w.clone()
            + self.x.clone() * other.x.clone()
            + self.y.clone() * other.y.clone()
            + self.z.clone() * other.z.clone()
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(
            self.w.clone() * s.clone(),
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_zero())
    }

    pub fn is_pure(&self) -> bool {
        self.w.is_zero()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Quaternion<T> {
        Quaternion::new(f(&self.w), f(&self.x), f(&self.y), f(&self.z))
    }
}

/// Hamilton product, bilinear in the coefficients.
pub fn quat_mul<S: Scalar>(a: &Quaternion<S>, b: &Quaternion<S>) -> Quaternion<S> {
    let (aw, ax, ay, az) = (a.w.clone(), a.x.clone(), a.y.clone(), a.z.clone());
    let (bw, bx, by, bz) = (b.w.clone(), b.x.clone(), b.y.clone(), b.z.clone());
    Quaternion::new(
        aw.clone() * bw.clone() - ax.clone() * bx.clone() - ay.clone() * by.clone() - az.clone() * bz.clone(),
        aw.clone() * bx.clone() + ax.clone() * bw.clone() + ay.clone() * bz.clone() - az.clone() * by.clone(),
        aw.clone() * by.clone() - ax.clone() * bz.clone() + ay.clone() * bw.clone() + az.clone() * bx.clone(),
        aw * bz + ax * by - ay * bx + az * bw,
    )
}

impl<S: Scalar> Mul for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn mul(self, rhs: Self) -> Quaternion<S> {
        quat_mul(self, rhs)
    }
}

impl<S: Scalar> Mul for Quaternion<S> {
    type Output = Quaternion<S>;
    fn mul(self, rhs: Self) -> Quaternion<S> {
        quat_mul(&self, &rhs)
    }
}

impl<S: Scalar> Add for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn add(self, rhs: Self) -> Quaternion<S> {
        Quaternion::new(
            self.w.clone() + rhs.w.clone(),
            self.x.clone() + rhs.x.clone(),
            self.y.clone() + rhs.y.clone(),
            self.z.clone() + rhs.z.clone(),
        )
    }
}

impl<S: Scalar> Add for Quaternion<S> {
    type Output = Quaternion<S>;
    fn add(self, rhs: Self) -> Quaternion<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn sub(self, rhs: Self) -> Quaternion<S> {
        self + &(-rhs.clone())
    }
}

impl<S: Scalar> Sub for Quaternion<S> {
    type Output = Quaternion<S>;
    fn sub(self, rhs: Self) -> Quaternion<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Quaternion<S>;
    fn neg(self) -> Quaternion<S> {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Dual number `real + dual ε`; the value of the dual-quaternion norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct DualNumber<S> {
    pub real: S,
    pub dual: S,
}

/// `p + q ε` with `ε` central and `ε² = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct DualQuaternion<S> {
    pub p: Quaternion<S>,
    pub q: Quaternion<S>,
}

impl<S: Scalar> DualQuaternion<S> {
    pub fn new(p: Quaternion<S>, q: Quaternion<S>) -> Self {
        DualQuaternion { p, q }
    }

    pub fn zero() -> Self {
        Self::new(Quaternion::zero(), Quaternion::zero())
    }

    /// The identity displacement `𝔢 = (1:0:…:0)`.
    pub fn identity() -> Self {
        Self::new(Quaternion::one(), Quaternion::zero())
    }

    /// `ε` itself.
    pub fn epsilon() -> Self {
        Self::new(Quaternion::zero(), Quaternion::one())
    }

    pub fn from_ints(p: [i64; 4], q: [i64; 4]) -> Self {
        Self::new(Quaternion::from_ints(p), Quaternion::from_ints(q))
    }

    /// Pure translation by `t`; dual part `-t/2` (see `study::act`).
    pub fn translation(t: [S; 3]) -> Self {
        let half = S::ratio(-1, 2);
        Self::new(Quaternion::one(), Quaternion::pure(t).scale(&half))
    }

    /// P⁷ coordinates `(p0..p3, q4..q7)`.
    pub fn coords(&self) -> [S; 8] {
        let [a, b, c, d] = self.p.coeffs();
        let [e, f, g, h] = self.q.coeffs();
        [a, b, c, d, e, f, g, h]
    }

    pub fn from_coords(c: &[S]) -> Self {
        Self::new(
            Quaternion::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()),
            Quaternion::new(c[4].clone(), c[5].clone(), c[6].clone(), c[7].clone()),
        )
    }

    pub fn conj(&self) -> Self {
        dq_conj(self)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.p.scale(s), self.q.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> DualQuaternion<T> {
        DualQuaternion::new(self.p.map(f), self.q.map(f))
    }
}

/// `(p + qε)(p′ + q′ε) = pp′ + (pq′ + qp′)ε`.
pub fn dq_mul<S: Scalar>(a: &DualQuaternion<S>, b: &DualQuaternion<S>) -> DualQuaternion<S> {
    DualQuaternion::new(&a.p * &b.p, &(&a.p * &b.q) + &(&a.q * &b.p))
}

/// `p̄ + q̄ε`.
pub fn dq_conj<S: Scalar>(h: &DualQuaternion<S>) -> DualQuaternion<S> {
    DualQuaternion::new(h.p.conj(), h.q.conj())
}

/// `N(h) = h h̄ = p p̄ + (p q̄ + q p̄) ε`; the dual part equals twice the Study
/// pairing.
pub fn dq_norm<S: Scalar>(h: &DualQuaternion<S>) -> DualNumber<S> {
    let prod = dq_mul(h, &dq_conj(h));
    DualNumber { real: prod.p.w, dual: prod.q.w }
}

/// Study pairing `p0 q4 + p1 q5 + p2 q6 + p3 q7`.
pub fn study_pairing<S: Scalar>(h: &DualQuaternion<S>) -> S {
    h.p.dot(&h.q)
}

/// Polar form of the Study pairing: `B(g, h) = g.p·h.q + h.p·g.q`, so that
/// `B(h, h) = 2 study_pairing(h)`.
pub fn study_polar<S: Scalar>(g: &DualQuaternion<S>, h: &DualQuaternion<S>) -> S {
    g.p.dot(&h.q) + h.p.dot(&g.q)
}

impl<S: Scalar> Mul for &DualQuaternion<S> {
    type Output = DualQuaternion<S>;
    fn mul(self, rhs: Self) -> DualQuaternion<S> {
        dq_mul(self, rhs)
    }
}

impl<S: Scalar> Add for &DualQuaternion<S> {
    type Output = DualQuaternion<S>;
    fn add(self, rhs: Self) -> DualQuaternion<S> {
        DualQuaternion::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}

impl<S: Scalar> Sub for &DualQuaternion<S> {
    type Output = DualQuaternion<S>;
    fn sub(self, rhs: Self) -> DualQuaternion<S> {
        DualQuaternion::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}
