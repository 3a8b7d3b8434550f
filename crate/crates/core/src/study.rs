//! The Study quadric `S ⊂ P⁷`, its boundary, the kinematic action, and lines
//! through the identity.
//!
//! Translation convention: the point `1 + qε` with `q = −t/2` (pure `t`)
//! translates by `t` under [`act`]. A rotation about the axis through `c`
//! with direction `d` has the generator `d + (d × c)ε`.

use serde::{Deserialize, Serialize};

use crate::algebra::{dq_mul, study_pairing, study_polar, DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::linalg::{cross3, rank};
use crate::scalar::{max_abs, Scalar};

fn coord_scale<S: Scalar>(h: &DualQuaternion<S>) -> f64 {
    let m = max_abs(&h.coords());
    m * m
}

/// Study condition `p0 q4 + p1 q5 + p2 q6 + p3 q7 = 0`.
pub fn on_study<S: Scalar>(h: &DualQuaternion<S>) -> Result<bool> {
    if h.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(study_pairing(h).negligible(4.0 * coord_scale(h)))
}

/// A nonzero dual quaternion satisfying the Study condition, up to scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound = "S: Scalar")]
pub struct StudyPoint<S>(DualQuaternion<S>);

impl<S: Scalar> StudyPoint<S> {
    pub fn new(h: DualQuaternion<S>) -> Result<Self> {
        if on_study(&h)? {
            Ok(StudyPoint(h))
        } else {
            Err(Error::NotOnStudy)
        }
    }

    pub fn identity() -> Self {
        StudyPoint(DualQuaternion::identity())
    }

    pub fn dq(&self) -> &DualQuaternion<S> {
        &self.0
    }

    pub fn into_inner(self) -> DualQuaternion<S> {
        self.0
    }

    /// Group product; `S` is closed under multiplication.
    pub fn compose(&self, other: &Self) -> Self {
        StudyPoint(dq_mul(&self.0, &other.0))
    }

    /// Projective equality.
    pub fn same_point(&self, other: &Self) -> bool {
        crate::linalg::proportional(&self.0.coords(), &other.0.coords())
    }
}

/// `B = { h ∈ S | h h̄ = 0 }`; over the reals this is `p = 0`.
pub fn on_boundary<S: Scalar>(h: &StudyPoint<S>) -> bool {
    h.dq().p.norm().negligible(coord_scale(h.dq()))
}

/// The kinematic action `(p v p̄ + p q̄ − q p̄) / (p p̄)` on a 3-vector `v`.
pub fn act<S: Scalar>(h: &StudyPoint<S>, v: &[S; 3]) -> Result<[S; 3]> {
    if on_boundary(h) {
        return Err(Error::BoundaryPoint);
    }
    let DualQuaternion { p, q } = h.dq();
    let vq = Quaternion::pure(v.clone());
    let w = displacement_numerator(p, q, &vq);
    let n = p.norm();
    let [x, y, z] = w.vector();
    Ok([x / n.clone(), y / n.clone(), z / n])
}

/// `p v p̄ + p q̄ − q p̄`, a pure quaternion whenever `p + qε ∈ S`.
pub(crate) fn displacement_numerator<S: Scalar>(
    p: &Quaternion<S>,
    q: &Quaternion<S>,
    v: &Quaternion<S>,
) -> Quaternion<S> {
    let pc = p.conj();
    &(&(&(p * v) * &pc) + &(p * &q.conj())) - &(q * &pc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Rotation,
    Translation,
    Degenerate,
}

/// A projective line `{λ g1 + μ g2}` contained in `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct StudyLine<S> {
    pub g1: DualQuaternion<S>,
    pub g2: DualQuaternion<S>,
    pub kind: LineKind,
}

impl<S: Scalar> StudyLine<S> {
    /// Validates independence and containment in `S`, then caches the kind.
    pub fn new(g1: DualQuaternion<S>, g2: DualQuaternion<S>) -> Result<Self> {
        if g1.is_zero() || g2.is_zero() {
            return Err(Error::ZeroInput);
        }
        if rank(&[g1.coords().to_vec(), g2.coords().to_vec()], 8) < 2 {
            return Err(Error::DependentPoints);
        }
        let scale = 4.0 * coord_scale(&g1).max(coord_scale(&g2));
        let inside = study_pairing(&g1).negligible(scale)
            && study_pairing(&g2).negligible(scale)
            && study_polar(&g1, &g2).negligible(scale);
        if !inside {
            return Err(Error::NotOnStudy);
        }
        let kind = line_kind(&g1, &g2);
        Ok(StudyLine { g1, g2, kind })
    }

    pub fn point(&self, lambda: &S, mu: &S) -> DualQuaternion<S> {
        &self.g1.scale(lambda) + &self.g2.scale(mu)
    }

    pub fn contains(&self, h: &DualQuaternion<S>) -> bool {
        rank(&[self.g1.coords().to_vec(), self.g2.coords().to_vec(), h.coords().to_vec()], 8) <= 2
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&DualQuaternion::identity())
    }

    pub fn basis(&self) -> Vec<Vec<S>> {
        vec![self.g1.coords().to_vec(), self.g2.coords().to_vec()]
    }

    /// Projective equality of lines.
    pub fn same_line(&self, other: &Self) -> bool {
        crate::linalg::same_span(&self.basis(), &other.basis(), 8)
    }

    /// `h · ℓ`, pointwise left product.
    pub fn left_mul(&self, h: &DualQuaternion<S>) -> Result<Self> {
        Self::new(dq_mul(h, &self.g1), dq_mul(h, &self.g2))
    }

    /// `ℓ · h`, pointwise right product.
    pub fn right_mul(&self, h: &DualQuaternion<S>) -> Result<Self> {
        Self::new(dq_mul(&self.g1, h), dq_mul(&self.g2, h))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> StudyLine<T> {
        StudyLine { g1: self.g1.map(f), g2: self.g2.map(f), kind: self.kind }
    }
}

/// For a line through `𝔢`, the generator with zero `𝔢`-coefficient.
pub(crate) fn normalized_generator<S: Scalar>(
    g1: &DualQuaternion<S>,
    g2: &DualQuaternion<S>,
) -> DualQuaternion<S> {
    let e = DualQuaternion::<S>::identity();
    // Pick the spanning point farther from 𝔢 to stay well conditioned.
    let pick = |g: &DualQuaternion<S>| {
        let rest = &[g.p.x.clone(), g.p.y.clone(), g.p.z.clone()];
        max_abs(rest).max(max_abs(&g.q.coeffs())) / max_abs(&g.coords()).max(f64::MIN_POSITIVE)
    };
    let g = if pick(g1) >= pick(g2) { g1 } else { g2 };
    g - &e.scale(&g.p.w)
}

fn classify_through_identity<S: Scalar>(g: &DualQuaternion<S>) -> LineKind {
    let scale = max_abs(&g.coords());
    let primal_vec = g.p.vector();
    let primal_zero = primal_vec.iter().all(|c| c.negligible(scale));
    if !primal_zero {
        return LineKind::Rotation;
    }
    let dual_pure = g.q.w.negligible(scale);
    let dual_nonzero = g.q.vector().iter().any(|c| !c.negligible(scale));
    if dual_pure && dual_nonzero {
        LineKind::Translation
    } else {
        LineKind::Degenerate
    }
}

fn line_kind<S: Scalar>(g1: &DualQuaternion<S>, g2: &DualQuaternion<S>) -> LineKind {
    let e = DualQuaternion::<S>::identity();
    let through_e = rank(&[g1.coords().to_vec(), g2.coords().to_vec(), e.coords().to_vec()], 8) <= 2;
    if through_e {
        return classify_through_identity(&normalized_generator(g1, g2));
    }
    // Move a point off B to the identity: h̄ h = |p|² 𝔢 on S.
    let scale = coord_scale(g1).max(coord_scale(g2));
    let off_b = [g1, g2].into_iter().find(|g| !g.p.norm().negligible(scale));
    let Some(h) = off_b else {
        return LineKind::Degenerate;
    };
    let hc = h.conj();
    let a = dq_mul(&hc, g1);
    let b = dq_mul(&hc, g2);
    classify_through_identity(&normalized_generator(&a, &b))
}

/// Rotation / translation classification of a line through `𝔢`.
pub fn classify_line<S: Scalar>(line: &StudyLine<S>) -> Result<LineKind> {
    if !line.contains_identity() {
        return Err(Error::NotThroughIdentity);
    }
    Ok(classify_through_identity(&normalized_generator(&line.g1, &line.g2)))
}

/// The one-parameter rotation subgroup about the axis `{c + λ d}`:
/// `span(𝔢, d + (d × c)ε)`.
pub fn rotation_line<S: Scalar>(c: &[S; 3], d: &[S; 3]) -> Result<StudyLine<S>> {
    if d.iter().all(|x| x.is_negligible()) {
        return Err(Error::ZeroDirection);
    }
    let moment = cross3(d, c);
    let g = DualQuaternion::new(Quaternion::pure(d.clone()), Quaternion::pure(moment));
    StudyLine::new(DualQuaternion::identity(), g)
}

/// The one-parameter translation subgroup along `d`: `span(𝔢, dε)`.
pub fn translation_line<S: Scalar>(d: &[S; 3]) -> Result<StudyLine<S>> {
    if d.iter().all(|x| x.is_negligible()) {
        return Err(Error::ZeroDirection);
    }
    let g = DualQuaternion::new(Quaternion::zero(), Quaternion::pure(d.clone()));
    StudyLine::new(DualQuaternion::identity(), g)
}

/// Base point `u ∈ S³` of an orbit map, with `u0 ≠ 0`; `v` is the
/// dehomogenized Euclidean point `(u1, u2, u3) / u0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BaseLocusSpec<S> {
    pub u: [S; 5],
}

impl<S: Scalar> BaseLocusSpec<S> {
    pub fn new(u: [S; 5]) -> Result<Self> {
        if u.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroInput);
        }
        if u[0].negligible(max_abs(&u)) {
            return Err(Error::CenterChart);
        }
        Ok(BaseLocusSpec { u })
    }

    /// Base point `𝔬 = (1:0:0:0:0)`.
    pub fn origin() -> Self {
        BaseLocusSpec { u: [S::one(), S::zero(), S::zero(), S::zero(), S::zero()] }
    }

    /// Base point over the Euclidean point `v`.
    pub fn at(v: &[S; 3]) -> Self {
        let sq = v.iter().fold(S::zero(), |a, x| a + x.square());
        BaseLocusSpec { u: [S::one(), v[0].clone(), v[1].clone(), v[2].clone(), sq] }
    }

    pub fn v(&self) -> [S; 3] {
        let u0 = self.u[0].clone();
        [self.u[1].clone() / u0.clone(), self.u[2].clone() / u0.clone(), self.u[3].clone() / u0]
    }

    pub fn v_quat(&self) -> Quaternion<S> {
        Quaternion::pure(self.v())
    }
}

/// Membership in the base locus `F_u`: `p p̄ = 0`,
/// `p v p̄ + p q̄ − q p̄ = 0` and `4 q q̄ + 2(q v p̄ − p v q̄) = 0`.
pub fn in_base_locus<S: Scalar>(spec: &BaseLocusSpec<S>, h: &StudyPoint<S>) -> bool {
    let DualQuaternion { p, q } = h.dq();
    let v = spec.v_quat();
    let scale = coord_scale(h.dq()) * (1.0 + max_abs(&v.coeffs())).powi(2);
    if !p.norm().negligible(scale) {
        return false;
    }
    let w = displacement_numerator(p, q, &v);
    if !w.coeffs().iter().all(|c| c.negligible(scale)) {
        return false;
    }
    let pc = p.conj();
    let qv_pc = &(q * &v) * &pc;
    let pv_qc = &(p * &v) * &q.conj();
    let four = S::from_i64(4);
    let two = S::from_i64(2);
    let last = &Quaternion::real(q.norm() * four) + &(&qv_pc - &pv_qc).scale(&two);
    last.coeffs().iter().all(|c| c.negligible(scale))
}
