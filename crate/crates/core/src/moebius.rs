//! The Moebius quadric `S³ : x0 x4 − x1² − x2² − x3² = 0` in P⁴, the
//! stereographic chart, and circles as plane sections of `S³`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cross3, det, dot, nullspace, proportional, rank, same_span};
use crate::scalar::{max_abs, Scalar};

/// `x0 x4 − x1² − x2² − x3²`.
pub fn moebius_form<S: Scalar>(x: &[S]) -> S {
    x[0].clone() * x[4].clone() - x[1].square() - x[2].square() - x[3].square()
}

/// Polar form, normalized so that `moebius_polar(x, x) = 2 moebius_form(x)`.
pub fn moebius_polar<S: Scalar>(x: &[S], y: &[S]) -> S {
    let two = S::from_i64(2);
    x[0].clone() * y[4].clone() + x[4].clone() * y[0].clone()
        - two * (x[1].clone() * y[1].clone() + x[2].clone() * y[2].clone() + x[3].clone() * y[3].clone())
}

pub fn on_sphere<S: Scalar>(x: &[S; 5]) -> Result<bool> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let m = max_abs(x);
    Ok(moebius_form(x).negligible(2.0 * m * m))
}

/// A point of `S³`, up to scale. Serialized as a 5-element array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound = "S: Scalar")]
pub struct MoebiusPoint<S>(pub [S; 5]);

impl<S: Scalar> MoebiusPoint<S> {
    pub fn new(x: [S; 5]) -> Result<Self> {
        if on_sphere(&x)? {
            Ok(MoebiusPoint(x))
        } else {
            Err(Error::NotOnSphere)
        }
    }

    /// `𝔬 = (1:0:0:0:0)`.
    pub fn origin() -> Self {
        MoebiusPoint([S::one(), S::zero(), S::zero(), S::zero(), S::zero()])
    }

    /// Centre of stereographic projection `(0:0:0:0:1)`.
    pub fn center() -> Self {
        MoebiusPoint([S::zero(), S::zero(), S::zero(), S::zero(), S::one()])
    }

    pub fn coords(&self) -> &[S; 5] {
        &self.0
    }

    pub fn same_point(&self, other: &Self) -> bool {
        proportional(&self.0, &other.0)
    }

    /// Euclidean point `τ(x)` dehomogenized, if `x0 ≠ 0`.
    pub fn euclidean(&self) -> Option<[S; 3]> {
        let x0 = self.0[0].clone();
        if x0.negligible(max_abs(&self.0)) {
            return None;
        }
        Some([self.0[1].clone() / x0.clone(), self.0[2].clone() / x0.clone(), self.0[3].clone() / x0])
    }
}

/// Stereographic projection `(x0:…:x4) ↦ (x0:x1:x2:x3)`.
pub fn stereo<S: Scalar>(x: &MoebiusPoint<S>) -> Result<[S; 4]> {
    let [a, b, c, d, _] = x.0.clone();
    let head = [a, b, c, d];
    if head.iter().all(|v| v.negligible(max_abs(&x.0))) {
        return Err(Error::CenterOfProjection);
    }
    Ok(head)
}

/// `v ↦ (1 : v1 : v2 : v3 : |v|²)`.
pub fn stereo_inv<S: Scalar>(v: &[S; 3]) -> MoebiusPoint<S> {
    let sq = v.iter().fold(S::zero(), |acc, c| acc + c.square());
    MoebiusPoint([S::one(), v[0].clone(), v[1].clone(), v[2].clone(), sq])
}

/// An irreducible conic on `S³`: a 2-plane of P⁴ cut out by two linear forms,
/// with three witness points on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Circle<S> {
    pub plane: [[S; 5]; 2],
    pub witnesses: [MoebiusPoint<S>; 3],
}

fn to_array5<S: Scalar>(v: &[S]) -> [S; 5] {
    [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone()]
}

/// The plane through three points of `S³`, certified to cut an irreducible
/// conic (restricted quadratic form of rank 3).
pub fn circle_through<S: Scalar>(
    a: &MoebiusPoint<S>,
    b: &MoebiusPoint<S>,
    c: &MoebiusPoint<S>,
) -> Result<Circle<S>> {
    let rows = vec![a.0.to_vec(), b.0.to_vec(), c.0.to_vec()];
    if rank(&rows, 5) < 3 {
        return Err(Error::CollinearWitnesses);
    }
    let forms = nullspace(&rows, 5);
    debug_assert_eq!(forms.len(), 2);
    let circle = Circle {
        plane: [to_array5(&forms[0]), to_array5(&forms[1])],
        witnesses: [a.clone(), b.clone(), c.clone()],
    };
    let rk = circle.restricted_rank();
    if rk < 3 {
        return Err(Error::ReducibleSection(rk));
    }
    Ok(circle)
}

/// Image of a line or of a parameter curve: a circle, or a constant point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", bound = "S: Scalar")]
pub enum CircleOrPoint<S> {
    Circle(Circle<S>),
    Point(MoebiusPoint<S>),
}

impl<S: Scalar> CircleOrPoint<S> {
    pub fn circle(self) -> Option<Circle<S>> {
        match self {
            CircleOrPoint::Circle(c) => Some(c),
            CircleOrPoint::Point(_) => None,
        }
    }
}

/// Certifies samples of a conic parametrization: all equal gives a point,
/// otherwise the samples must span a plane cutting an irreducible conic.
pub fn conic_from_samples<S: Scalar>(mut images: Vec<MoebiusPoint<S>>) -> Result<CircleOrPoint<S>> {
    if images.iter().all(|x| proportional(&x.0, &images[0].0)) {
        return Ok(CircleOrPoint::Point(images.swap_remove(0)));
    }
    let rows: Vec<Vec<S>> = images.iter().map(|x| x.0.to_vec()).collect();
    let rk = rank(&rows, 5);
    if rk < 3 {
        return Err(Error::CollinearWitnesses);
    }
    if rk > 3 {
        return Err(Error::ReducibleSection(rk));
    }
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<S>> = chosen.iter().map(|&k| rows[k].clone()).collect();
        trial.push(rows[i].clone());
        if rank(&trial, 5) == trial.len() {
            chosen.push(i);
            if chosen.len() == 3 {
                break;
            }
        }
    }
    let c = circle_through(&images[chosen[0]], &images[chosen[1]], &images[chosen[2]])?;
    Ok(CircleOrPoint::Circle(c))
}

impl<S: Scalar> Circle<S> {
    /// Gram matrix of the Moebius polar form on the witness basis.
    pub fn restricted_form(&self) -> Vec<Vec<S>> {
        let w = &self.witnesses;
        (0..3)
            .map(|i| (0..3).map(|j| moebius_polar(&w[i].0, &w[j].0)).collect())
            .collect()
    }

    pub fn restricted_rank(&self) -> usize {
        let g = self.restricted_form();
        if S::EXACT {
            if !det(&g).is_zero() {
                3
            } else {
                rank(&g, 3)
            }
        } else {
            rank(&g, 3)
        }
    }

    pub fn basis(&self) -> Vec<Vec<S>> {
        self.witnesses.iter().map(|w| w.0.to_vec()).collect()
    }

    /// Same 2-plane.
    pub fn same_circle(&self, other: &Self) -> bool {
        same_span(&self.basis(), &other.basis(), 5)
    }

    pub fn contains(&self, x: &MoebiusPoint<S>) -> bool {
        let mut rows = self.basis();
        rows.push(x.0.to_vec());
        rank(&rows, 5) == 3 && on_sphere(&x.0).unwrap_or(false)
    }

    /// The plane contains the projection centre, so `τ(C)` is a line.
    pub fn through_center(&self) -> bool {
        self.plane.iter().all(|f| f[4].negligible(max_abs(f)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Circle<T> {
        let m5 = |v: &[S; 5]| [f(&v[0]), f(&v[1]), f(&v[2]), f(&v[3]), f(&v[4])];
        Circle {
            plane: [m5(&self.plane[0]), m5(&self.plane[1])],
            witnesses: [
                MoebiusPoint(m5(&self.witnesses[0].0)),
                MoebiusPoint(m5(&self.witnesses[1].0)),
                MoebiusPoint(m5(&self.witnesses[2].0)),
            ],
        }
    }
}

/// Exact Euclidean data of `τ(C)`: the axis of a round circle, or the
/// carrier line of a circle through the projection centre.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleAxis<S> {
    Round { center: [S; 3], normal: [S; 3], radius_sq: S },
    Line { point: [S; 3], dir: [S; 3] },
}

fn canonical_sign<S: Scalar>(v: [S; 3]) -> [S; 3] {
    let scale = max_abs(&v);
    match v.iter().find(|c| !c.negligible(scale)) {
        Some(c) if *c < S::zero() => [-v[0].clone(), -v[1].clone(), -v[2].clone()],
        _ => v,
    }
}

fn split<S: Scalar>(f: &[S; 5]) -> (S, [S; 3], S) {
    (f[0].clone(), [f[1].clone(), f[2].clone(), f[3].clone()], f[4].clone())
}

/// Axis data from the two plane forms. Each form `f` reads
/// `f0 + f·v + f4 |v|² = 0` in the chart `x0 = 1`.
pub fn circle_axis<S: Scalar>(c: &Circle<S>) -> Result<CircleAxis<S>> {
    let [f, g] = &c.plane;
    if c.through_center() {
        let (f0, fv, _) = split(f);
        let (g0, gv, _) = split(g);
        let dir = cross3(&fv, &gv);
        // point = a fv + b gv with fv·point = −f0, gv·point = −g0
        let (ff, fg, gg) = (dot(&fv, &fv), dot(&fv, &gv), dot(&gv, &gv));
        let den = ff.clone() * gg.clone() - fg.square();
        if den.negligible(max_abs(&[ff.clone(), gg.clone()]).powi(2)) {
            return Err(Error::ReducibleSection(2));
        }
        let a = (-f0.clone() * gg + g0.clone() * fg.clone()) / den.clone();
        let b = (-g0 * ff + f0 * fg) / den;
        let point = [
            a.clone() * fv[0].clone() + b.clone() * gv[0].clone(),
            a.clone() * fv[1].clone() + b.clone() * gv[1].clone(),
            a * fv[2].clone() + b * gv[2].clone(),
        ];
        return Ok(CircleAxis::Line { point, dir: canonical_sign(dir) });
    }
    let (sphere, other) = if f[4].to_f64().abs() >= g[4].to_f64().abs() { (f, g) } else { (g, f) };
    let (s0, sv, s4) = split(sphere);
    let ratio = other[4].clone() / s4.clone();
    let (h0, hv, _) = split(&to_array5(
        &(0..5).map(|i| other[i].clone() - ratio.clone() * sphere[i].clone()).collect::<Vec<_>>(),
    ));
    let hh = dot(&hv, &hv);
    let form_scale = max_abs(other).max(max_abs(sphere));
    if hv.iter().all(|x| x.negligible(form_scale)) {
        return Err(Error::ReducibleSection(2));
    }
    let two = S::from_i64(2);
    let cs = [
        -sv[0].clone() / (two.clone() * s4.clone()),
        -sv[1].clone() / (two.clone() * s4.clone()),
        -sv[2].clone() / (two * s4.clone()),
    ];
    let big_r_sq = dot(&cs, &cs) - s0 / s4;
    let offset = dot(&hv, &cs) + h0;
    let t = offset.clone() / hh.clone();
    let center = [
        cs[0].clone() - t.clone() * hv[0].clone(),
        cs[1].clone() - t.clone() * hv[1].clone(),
        cs[2].clone() - t * hv[2].clone(),
    ];
    let radius_sq = big_r_sq - offset.square() / hh;
    Ok(CircleAxis::Round { center, normal: canonical_sign(hv), radius_sq })
}

/// Euclidean chart of a circle: centre / unit normal / radius, or a line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EuclideanCircle {
    Round { center: [f64; 3], normal: [f64; 3], radius: f64 },
    Line { line: EuclideanLine },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EuclideanLine {
    pub point: [f64; 3],
    pub dir: [f64; 3],
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn euclidean_view<S: Scalar>(c: &Circle<S>) -> Result<EuclideanCircle> {
    let f3 = |v: &[S; 3]| [v[0].to_f64(), v[1].to_f64(), v[2].to_f64()];
    Ok(match circle_axis(c)? {
        CircleAxis::Round { center, normal, radius_sq } => EuclideanCircle::Round {
            center: f3(&center),
            normal: unit(f3(&normal)),
            radius: radius_sq.to_f64().max(0.0).sqrt(),
        },
        CircleAxis::Line { point, dir } => {
            EuclideanCircle::Line { line: EuclideanLine { point: f3(&point), dir: unit(f3(&dir)) } }
        }
    })
}

fn orthonormal_pair(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = unit(cross3(&n, &helper));
    let w = cross3(&n, &u);
    (u, w)
}

/// Inverse chart: the circle of `S³` whose stereographic image is `e`.
pub fn circle_from_euclidean(e: &EuclideanCircle) -> Result<Circle<f64>> {
    match e {
        EuclideanCircle::Round { center, normal, radius } => {
            let (u, w) = orthonormal_pair(unit(*normal));
            let pts: Vec<MoebiusPoint<f64>> = [0.0, 2.0, 4.0]
                .iter()
                .map(|k| {
                    let th = k * std::f64::consts::PI / 3.0;
                    let v = [0, 1, 2].map(|i| center[i] + radius * (u[i] * th.cos() + w[i] * th.sin()));
                    stereo_inv(&v)
                })
                .collect();
            circle_through(&pts[0], &pts[1], &pts[2])
        }
        EuclideanCircle::Line { line } => {
            let p = line.point;
            let q = [0, 1, 2].map(|i| p[i] + line.dir[i]);
            circle_through(&MoebiusPoint::center(), &stereo_inv(&p), &stereo_inv(&q))
        }
    }
}
