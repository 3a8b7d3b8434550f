//! Darboux cyclides as images of biquadratic maps: implicitization to a
//! pencil of quadrics, the two parameter circle families, intersection
//! numbers of families, and co-sphericity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{coordinates_in_span, least_singular_vector, nullspace, proportional, rank};
use crate::moebius::{conic_from_samples, Circle, CircleOrPoint, MoebiusPoint};
use crate::orbit::{eval_biquadratic, BiquadraticMap};
use crate::poly::P1;
use crate::scalar::{max_abs, Rational, Scalar};

/// Fixed seed for implicitization samples.
pub const IMPLICITIZE_SEED: u64 = 0x0dab_0c5e;
pub const MIN_SAMPLES: usize = 40;
const FRESH_SAMPLES: usize = 100;
const FLOAT_RESIDUAL_TOL: f64 = 1e-9;

/// Symmetric 5×5 matrix of a quadratic form on P⁴, up to scale.
/// Serialized as its upper triangle, row-major (15 entries).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<S>", into = "Vec<S>", bound = "S: Scalar")]
pub struct QuadricForm<S> {
    pub m: [[S; 5]; 5],
}

const PAIRS: [(usize, usize); 15] = [
    (0, 0), (0, 1), (0, 2), (0, 3), (0, 4),
    (1, 1), (1, 2), (1, 3), (1, 4),
    (2, 2), (2, 3), (2, 4),
    (3, 3), (3, 4),
    (4, 4),
];

impl<S: Scalar> From<Vec<S>> for QuadricForm<S> {
    fn from(v: Vec<S>) -> Self {
        let mut m: [[S; 5]; 5] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            m[i][j] = v[k].clone();
            m[j][i] = v[k].clone();
        }
        QuadricForm { m }
    }
}

impl<S: Scalar> From<QuadricForm<S>> for Vec<S> {
    fn from(q: QuadricForm<S>) -> Self {
        PAIRS.iter().map(|&(i, j)| q.m[i][j].clone()).collect()
    }
}

/// Monomials `x_i x_j`, `i ≤ j`, in [`PAIRS`] order.
fn veronese<S: Scalar>(x: &[S; 5]) -> Vec<S> {
    PAIRS.iter().map(|&(i, j)| x[i].clone() * x[j].clone()).collect()
}

impl<S: Scalar> QuadricForm<S> {
    /// `x0 x4 − x1² − x2² − x3²`.
    pub fn moebius() -> Self {
        let mut v = vec![S::zero(); 15];
        v[4] = S::ratio(1, 2);
        v[5] = -S::one();
        v[9] = -S::one();
        v[12] = -S::one();
        v.into()
    }

    /// From coefficients of the monomials `x_i x_j`, `i ≤ j`.
    pub fn from_monomials(c: &[S]) -> Self {
        let half = S::ratio(1, 2);
        let v: Vec<S> = PAIRS
            .iter()
            .zip(c)
            .map(|(&(i, j), x)| if i == j { x.clone() } else { x.clone() * half.clone() })
            .collect();
        v.into()
    }

    pub fn monomials(&self) -> Vec<S> {
        let two = S::from_i64(2);
        PAIRS
            .iter()
            .map(|&(i, j)| if i == j { self.m[i][j].clone() } else { self.m[i][j].clone() * two.clone() })
            .collect()
    }

    pub fn eval(&self, x: &[S; 5]) -> S {
        let mut acc = S::zero();
        for i in 0..5 {
            for j in 0..5 {
                acc = acc + self.m[i][j].clone() * x[i].clone() * x[j].clone();
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|r| max_abs(r)).fold(0.0, f64::max)
    }

    /// Relative value `|Q(x)| / (|Q| |x|²)`.
    pub fn relative_residual(&self, x: &[S; 5]) -> f64 {
        let d = self.max_abs() * max_abs(x).powi(2);
        if d == 0.0 {
            return 0.0;
        }
        self.eval(x).to_f64().abs() / d
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QuadricForm<T> {
        QuadricForm { m: std::array::from_fn(|i| std::array::from_fn(|j| f(&self.m[i][j]))) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilCertificate {
    pub pencil_dim: usize,
    pub samples: usize,
    pub residual: f64,
}

/// Image of a biquadratic map together with the pencil of quadrics through
/// it. `pencil[0]` is the Moebius form; `pencil[1]` is the member without
/// an `x0 x4` term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Cyclide<S> {
    pub param: BiquadraticMap<S>,
    pub pencil: [QuadricForm<S>; 2],
    pub certificate: PencilCertificate,
}

/// Exact mode draws small rationals; float mode draws uniform angles on
/// the parameter circle, which keeps the Veronese matrix well conditioned.
fn random_parameter<S: Scalar>(rng: &mut ChaCha8Rng) -> P1<S> {
    if !S::EXACT {
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        return [S::from_f64(theta.cos()), S::from_f64(theta.sin())];
    }
    let num = rng.random_range(-30..=30);
    let den = rng.random_range(1..=12);
    if rng.random_bool(0.5) {
        [S::one(), S::ratio(num, den)]
    } else {
        [S::ratio(num, den), S::one()]
    }
}

fn sample_points<S: Scalar>(x: &BiquadraticMap<S>, rng: &mut ChaCha8Rng, count: usize) -> Vec<[S; 5]> {
    let mut out = Vec::with_capacity(count);
    let mut guard = 0;
    while out.len() < count && guard < 20 * count {
        guard += 1;
        let s = random_parameter(rng);
        let t = random_parameter(rng);
        if let Ok(p) = eval_biquadratic(x, &s, &t) {
            out.push(p.0);
        }
    }
    out
}

/// Normalizes a vector so that its first non-negligible entry is 1.
fn normalize_leading<S: Scalar>(v: &[S]) -> Vec<S> {
    let scale = max_abs(v);
    match v.iter().find(|c| !c.negligible(scale)) {
        Some(lead) => {
            let lead = lead.clone();
            v.iter().map(|c| c.clone() / lead.clone()).collect()
        }
        None => v.to_vec(),
    }
}

pub fn implicitize<S: Scalar>(x: &BiquadraticMap<S>, sample_count: usize) -> Result<Cyclide<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(IMPLICITIZE_SEED);
    let count = sample_count.max(MIN_SAMPLES);
    let pts = sample_points(x, &mut rng, count);
    if pts.len() < count {
        return Err(Error::DegenerateMotion);
    }
    let rows: Vec<Vec<S>> = pts.iter().map(veronese).collect();
    let kernel = nullspace(&rows, 15);
    if kernel.len() != 2 {
        return Err(Error::NotACyclide(kernel.len()));
    }
    let moebius = QuadricForm::<S>::moebius();
    let mvec = moebius.monomials();
    if coordinates_in_span(&kernel, &mvec).is_none() {
        return Err(Error::NotACyclide(kernel.len()));
    }
    // the pencil member without an x0 x4 term (index 4 in PAIRS)
    let other = kernel
        .iter()
        .max_by(|a, b| {
            let da = max_abs(&a.iter().zip(&mvec).map(|(x, m)| x.clone() * mvec[4].clone() - m.clone() * a[4].clone()).collect::<Vec<_>>());
            let db = max_abs(&b.iter().zip(&mvec).map(|(x, m)| x.clone() * mvec[4].clone() - m.clone() * b[4].clone()).collect::<Vec<_>>());
            da.total_cmp(&db)
        })
        .expect("kernel has two vectors");
    let reduced: Vec<S> = other.iter().zip(&mvec).map(|(x, m)| x.clone() - m.clone() * other[4].clone() / mvec[4].clone()).collect();
    let second = QuadricForm::from_monomials(&normalize_leading(&reduced));

    let fresh = sample_points(x, &mut rng, FRESH_SAMPLES);
    let residual = fresh
        .iter()
        .flat_map(|p| [moebius.relative_residual(p), second.relative_residual(p)])
        .fold(0.0, f64::max);
    let ok = if S::EXACT { residual == 0.0 } else { residual < FLOAT_RESIDUAL_TOL };
    if !ok {
        return Err(Error::NotACyclide(kernel.len()));
    }
    Ok(Cyclide {
        param: x.clone(),
        pencil: [moebius, second],
        certificate: PencilCertificate { pencil_dim: 2, samples: count, residual },
    })
}

impl<S: Scalar> Cyclide<S> {
    pub fn family(&self, which: Family) -> CircleFamily<'_, S> {
        CircleFamily { which, parent: self }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Cyclide<T> {
        Cyclide {
            param: self.param.map(f),
            pencil: [self.pencil[0].map(f), self.pencil[1].map(f)],
            certificate: self.certificate.clone(),
        }
    }

    /// Both pencils span the same line of quadrics.
    pub fn same_pencil(&self, other: &Cyclide<S>) -> bool {
        let rows = |d: &Cyclide<S>| -> Vec<Vec<S>> { d.pencil.iter().map(|q| q.monomials()).collect() };
        crate::linalg::same_span(&rows(self), &rows(other), 15)
    }

    /// Largest relative pencil residual over `n` fresh parameter samples.
    pub fn sample_residual(&self, seed: u64, n: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_points(&self.param, &mut rng, n)
            .iter()
            .flat_map(|p| self.pencil.iter().map(move |q| q.relative_residual(p)))
            .fold(0.0, f64::max)
    }
}

/// Both pencil forms vanish at `x`.
pub fn contains_point<S: Scalar>(d: &Cyclide<S>, x: &MoebiusPoint<S>) -> bool {
    d.pencil.iter().all(|q| {
        let scale = 25.0 * q.max_abs() * max_abs(&x.0).powi(2);
        q.eval(&x.0).negligible(scale)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Curves `s = const`, parametrized by `t`.
    S,
    /// Curves `t = const`, parametrized by `s`.
    T,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::S => Family::T,
            Family::T => Family::S,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CircleFamily<'a, S> {
    pub which: Family,
    pub parent: &'a Cyclide<S>,
}

const CURVE_SAMPLES: [(i64, i64); 9] = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, 3), (3, 1), (1, -2)];

impl<S: Scalar> CircleFamily<'_, S> {
    /// `X(param, ·)` for the S-family, `X(·, param)` for the T-family.
    pub fn eval(&self, param: &P1<S>, along: &P1<S>) -> Result<MoebiusPoint<S>> {
        match self.which {
            Family::S => eval_biquadratic(&self.parent.param, param, along),
            Family::T => eval_biquadratic(&self.parent.param, along, param),
        }
    }
}

/// The parameter curve of `f` at `param`: a circle or a point.
pub fn family_member<S: Scalar>(f: &CircleFamily<'_, S>, param: &P1<S>) -> Result<CircleOrPoint<S>> {
    let mut images = Vec::new();
    for &(a, b) in CURVE_SAMPLES.iter() {
        match f.eval(param, &[S::from_i64(a), S::from_i64(b)]) {
            Ok(x) => images.push(x),
            Err(Error::Basepoint) => continue,
            Err(e) => return Err(e),
        }
        if images.len() == 6 {
            break;
        }
    }
    if images.is_empty() {
        return Err(Error::Basepoint);
    }
    conic_from_samples(images)
}

/// Fixed generic probe parameters for intersection counts.
const PROBES_A: [(i64, i64); 10] = [(3, 1), (-2, 5), (7, 3), (-5, 4), (2, 7), (9, -2), (-9, 7), (11, 6), (-1, 8), (13, 5)];
const PROBES_B: [(i64, i64); 10] = [(4, -3), (5, 2), (-7, 9), (8, 5), (-3, 11), (6, 13), (1, -6), (10, 3), (-12, 7), (2, 9)];

fn probe<S: Scalar>(p: (i64, i64)) -> P1<S> {
    [S::from_i64(p.1), S::from_i64(p.0)]
}

/// Common points, counted over ℂ with multiplicity, of two circles: the
/// planes meet in a point (1 if it lies on `S³`, else 0) or a line (2).
fn circle_intersection<S: Scalar>(a: &Circle<S>, b: &Circle<S>) -> Result<usize> {
    let mut rows = a.basis();
    rows.extend(b.basis());
    let dim = 6 - rank(&rows, 5);
    match dim {
        1 => {
            let mut forms: Vec<Vec<S>> = a.plane.iter().map(|f| f.to_vec()).collect();
            forms.extend(b.plane.iter().map(|f| f.to_vec()));
            let pt = nullspace(&forms, 5);
            let x: [S; 5] = std::array::from_fn(|i| pt[0][i].clone());
            let m = max_abs(&x);
            Ok(if crate::moebius::moebius_form(&x).negligible(2.0 * m * m) { 1 } else { 0 })
        }
        2 => Ok(2),
        _ => Err(Error::InfiniteIntersection),
    }
}

/// `F·F′` from ten generic member pairs; disagreement is reported, never
/// averaged.
pub fn family_intersection<S: Scalar>(f: &CircleFamily<'_, S>, g: &CircleFamily<'_, S>) -> Result<usize> {
    let mut counts = Vec::new();
    for (pa, pb) in PROBES_A.iter().zip(PROBES_B.iter()) {
        let a = family_member(f, &probe(*pa))?;
        let b = family_member(g, &probe(*pb))?;
        let (Some(a), Some(b)) = (a.circle(), b.circle()) else {
            continue;
        };
        counts.push(circle_intersection(&a, &b)?);
    }
    if counts.len() < 5 {
        return Err(Error::IndeterminateCount(counts));
    }
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(Error::IndeterminateCount(counts));
    }
    Ok(counts[0])
}

/// Two circles lie on a common sphere (hyperplane section of `S³`).
/// A circle is trivially co-spherical with itself.
pub fn cospherical<S: Scalar>(a: &Circle<S>, b: &Circle<S>) -> bool {
    let mut rows = a.basis();
    rows.extend(b.basis());
    rank(&rows, 5) <= 4
}

fn canonical_p1<S: Scalar>(x: &P1<S>) -> P1<S> {
    if x[0].to_f64().abs() >= x[1].to_f64().abs() {
        [S::one(), x[1].clone() / x[0].clone()]
    } else {
        [x[0].clone() / x[1].clone(), S::one()]
    }
}

fn hits<S: Scalar>(x: &BiquadraticMap<S>, s: &P1<S>, t: &P1<S>, target: &MoebiusPoint<S>) -> bool {
    eval_biquadratic(x, s, t).map(|p| proportional(&p.0, &target.0)).unwrap_or(false)
}

/// Parameter `s` with `X(s, t) ∝ target` for fixed `t`: the pairwise
/// minors `X_i target_j − X_j target_i` are binary quadratics in `s`
/// sharing the root.
pub fn solve_s<S: Scalar>(x: &BiquadraticMap<S>, t: &P1<S>, target: &MoebiusPoint<S>) -> Result<P1<S>> {
    let g = x.at_t(t);
    let root = common_root(&g, target).ok_or(Error::PointNotOnSurface)?;
    let s = canonical_p1(&root);
    if hits(x, &s, t, target) {
        Ok(s)
    } else {
        Err(Error::PointNotOnSurface)
    }
}

/// Parameter `t` with `X(s, t) ∝ target` for fixed `s`.
pub fn solve_t<S: Scalar>(x: &BiquadraticMap<S>, s: &P1<S>, target: &MoebiusPoint<S>) -> Result<P1<S>> {
    let g = x.at_s(s);
    let root = common_root(&g, target).ok_or(Error::PointNotOnSurface)?;
    let t = canonical_p1(&root);
    if hits(x, s, &t, target) {
        Ok(t)
    } else {
        Err(Error::PointNotOnSurface)
    }
}

/// Float minors whose second singular value falls below this share two roots.
const UNIQUE_ROOT_GAP: f64 = 1e-6;

fn common_root<S: Scalar>(g: &[Vec<S>; 5], target: &MoebiusPoint<S>) -> Option<P1<S>> {
    let y = &target.0;
    let mut minors: Vec<Vec<S>> = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            minors.push((0..3).map(|k| g[i][k].clone() * y[j].clone() - g[j][k].clone() * y[i].clone()).collect());
        }
    }
    // a unique common root spans the kernel with (x0², x0 x1, x1²)
    let v: Vec<S> = if S::EXACT {
        let kernel = nullspace(&minors, 3);
        let [v] = kernel.as_slice() else { return None };
        v.clone()
    } else {
        let rows: Vec<Vec<f64>> = minors.iter().map(|r| r.iter().map(S::to_f64).collect()).collect();
        let (v, _, second) = least_singular_vector(&rows, 3)?;
        if second < UNIQUE_ROOT_GAP {
            return None;
        }
        v.into_iter().map(S::from_f64).collect()
    };
    if v[0].to_f64().abs() >= v[2].to_f64().abs() {
        Some([v[0].clone(), v[1].clone()])
    } else {
        Some([v[1].clone(), v[2].clone()])
    }
}

fn angle_point(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// Sine-type residual `|y ∧ target| / (|y| |target|)`.
fn wedge_residual(x: &BiquadraticMap<f64>, th: f64, ph: f64, target: &[f64; 5]) -> Vec<f64> {
    let y: [f64; 5] = std::array::from_fn(|k| x.x[k].eval(&angle_point(th), &angle_point(ph)));
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let nt = target.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut r = Vec::with_capacity(10);
    for i in 0..5 {
        for j in i + 1..5 {
            r.push((y[i] * target[j] - y[j] * target[i]) / (ny * nt));
        }
    }
    r
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn gauss_newton(x: &BiquadraticMap<f64>, target: &[f64; 5], mut th: f64, mut ph: f64) -> (f64, f64, f64) {
    let mut lambda = 1e-3;
    let mut r = wedge_residual(x, th, ph, target);
    let mut f = norm2(&r);
    let h = 1e-7;
    for _ in 0..100 {
        if f < 1e-30 {
            break;
        }
        let rp = wedge_residual(x, th + h, ph, target);
        let rm = wedge_residual(x, th - h, ph, target);
        let qp = wedge_residual(x, th, ph + h, target);
        let qm = wedge_residual(x, th, ph - h, target);
        let j0: Vec<f64> = rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let j1: Vec<f64> = qp.iter().zip(&qm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let (a00, a01, a11) = (norm2(&j0), j0.iter().zip(&j1).map(|(a, b)| a * b).sum::<f64>(), norm2(&j1));
        let g0: f64 = j0.iter().zip(&r).map(|(a, b)| a * b).sum();
        let g1: f64 = j1.iter().zip(&r).map(|(a, b)| a * b).sum();
        let mut improved = false;
        for _ in 0..20 {
            let (b00, b11) = (a00 * (1.0 + lambda), a11 * (1.0 + lambda));
            let det = b00 * b11 - a01 * a01;
            if det.abs() < 1e-300 {
                lambda *= 10.0;
                continue;
            }
            let d0 = -(b11 * g0 - a01 * g1) / det;
            let d1 = -(-a01 * g0 + b00 * g1) / det;
            let r2 = wedge_residual(x, th + d0, ph + d1, target);
            let f2 = norm2(&r2);
            if f2 < f {
                th += d0;
                ph += d1;
                r = r2;
                f = f2;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (th, ph, f.sqrt())
}

const GRID: usize = 36;

/// Candidate parameters `(θ, φ) ∈ [0, π)²` with `X(θ, φ) ∝ target`, sorted
/// lexicographically and deduplicated.
fn numeric_preimages(x: &BiquadraticMap<f64>, target: &[f64; 5]) -> Vec<(f64, f64)> {
    let pi = std::f64::consts::PI;
    let step = pi / GRID as f64;
    let val: Vec<Vec<f64>> = (0..GRID)
        .map(|i| (0..GRID).map(|j| norm2(&wedge_residual(x, i as f64 * step, j as f64 * step, target))).collect())
        .collect();
    let mut starts = Vec::new();
    for i in 0..GRID {
        for j in 0..GRID {
            let v = val[i][j];
            let is_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    let ii = (i as i64 + di).rem_euclid(GRID as i64) as usize;
                    let jj = (j as i64 + dj).rem_euclid(GRID as i64) as usize;
                    val[ii][jj] >= v
                })
            });
            if is_min {
                starts.push((v, i, j));
            }
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut found: Vec<(f64, f64)> = Vec::new();
    for &(_, i, j) in starts.iter().take(24) {
        let (th, ph, res) = gauss_newton(x, target, i as f64 * step, j as f64 * step);
        if res > 1e-9 {
            continue;
        }
        let (th, ph) = (th.rem_euclid(pi), ph.rem_euclid(pi));
        let close = |a: f64, b: f64| {
            let d = (a - b).rem_euclid(pi);
            d.min(pi - d) < 1e-6
        };
        if !found.iter().any(|&(a, b)| close(a, th) && close(b, ph)) {
            found.push((th, ph));
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    found
}

fn rationalize<S: Scalar>(theta: f64) -> Option<P1<S>> {
    let (c, s) = (theta.cos(), theta.sin());
    if S::EXACT {
        if c.abs() >= s.abs() {
            Some([S::one(), S::from_rational(&Rational::approximate(s / c, 1_000_000)?)])
        } else {
            Some([S::from_rational(&Rational::approximate(c / s, 1_000_000)?), S::one()])
        }
    } else {
        Some(canonical_p1(&[S::from_f64(c), S::from_f64(s)]))
    }
}

/// All parameter pairs mapping to `target`, lexicographically ordered.
///
/// Candidates come from a grid search refined by damped Gauss–Newton on
/// `(θ, φ) ∈ [0, π)²`. In exact mode one coordinate is rationalized by
/// continued fractions and the other is recovered exactly from the
/// pairwise minors, then the pair is verified exactly.
pub fn locate_all<S: Scalar>(x: &BiquadraticMap<S>, target: &MoebiusPoint<S>) -> Result<Vec<(P1<S>, P1<S>)>> {
    let xf = x.map(|c| c.to_f64());
    let tf: [f64; 5] = std::array::from_fn(|k| target.0[k].to_f64());
    let candidates = numeric_preimages(&xf, &tf);
    if candidates.is_empty() {
        return Err(Error::PointNotOnSurface);
    }
    let mut out = Vec::new();
    for (th, ph) in candidates {
        let via_t = rationalize::<S>(ph).and_then(|t| solve_s(x, &t, target).ok().map(|s| (s, t)));
        let pair = via_t.or_else(|| rationalize::<S>(th).and_then(|s| solve_t(x, &s, target).ok().map(|t| (s, t))));
        match pair {
            Some(p) => out.push(p),
            None => return Err(if S::EXACT { Error::IrrationalParameter } else { Error::PointNotOnSurface }),
        }
    }
    Ok(out)
}

/// The lexicographically first parameter pair mapping to `target`.
pub fn locate<S: Scalar>(x: &BiquadraticMap<S>, target: &MoebiusPoint<S>) -> Result<(P1<S>, P1<S>)> {
    Ok(locate_all(x, target)?.swap_remove(0))
}
