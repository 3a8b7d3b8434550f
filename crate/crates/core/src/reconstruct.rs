//! From a Darboux cyclide with two transversal circle families back to the
//! unique doubly ruled quadric `Q ⊂ S` through `𝔢` whose orbit it is.
//!
//! Composition convention: `act(g h, v) = act(g, act(h, v))`. The orbit of
//! `L·h` is therefore the orbit of `τ(orb(h))` under `L`, so the third line
//! of the construction is the right product `ℓ″ = L·h`.

use serde::{Deserialize, Serialize};

use crate::algebra::{dq_mul, study_pairing, study_polar, DualQuaternion};
use crate::cyclide::{
    contains_point, cospherical, family_intersection, family_member, implicitize, locate, solve_s, solve_t,
    CircleFamily, Cyclide, Family,
};
use crate::error::{Error, Result};
use crate::linalg::{coordinates_in_span, inertia, nullspace, rank, same_span, subspace_distance, Mat};
use crate::moebius::{circle_axis, Circle, CircleAxis, CircleOrPoint, MoebiusPoint};
use crate::orbit::{orb, orbit_of_line, orbit_of_quadric, BilinearMotion};
use crate::poly::P1;
use crate::scalar::{max_abs, Scalar};
use crate::study::{rotation_line, translation_line, BaseLocusSpec, StudyLine, StudyPoint};

/// The rotation or translation line through `𝔢` whose orbit of `through`
/// is `c`: rotations about the circle's axis, or translations along its
/// carrier line.
pub fn lift_circle<S: Scalar>(c: &Circle<S>, through: &MoebiusPoint<S>) -> Result<StudyLine<S>> {
    if through.0[0].negligible(max_abs(&through.0)) {
        return Err(Error::CenterChart);
    }
    if !c.contains(through) {
        return Err(Error::NotOnSphere);
    }
    match circle_axis(c)? {
        CircleAxis::Round { center, normal, .. } => rotation_line(&center, &normal),
        CircleAxis::Line { dir, .. } => translation_line(&dir),
    }
}

/// `lift_circle` for a family member that may be a point.
fn lift_member<S: Scalar>(m: CircleOrPoint<S>, through: &MoebiusPoint<S>) -> Result<StudyLine<S>> {
    match m {
        CircleOrPoint::Circle(c) => lift_circle(&c, through),
        CircleOrPoint::Point(_) => Err(Error::DegenerateCircle),
    }
}

/// A 3-space `V ⊂ P⁷` with the Gram matrix of the Study polar form on its
/// basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct StudyThreeSpace<S> {
    pub basis: [DualQuaternion<S>; 4],
    pub form: [[S; 4]; 4],
}

impl<S: Scalar> StudyThreeSpace<S> {
    pub fn new(basis: [DualQuaternion<S>; 4]) -> Result<Self> {
        let rows: Vec<Vec<S>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        let rk = rank(&rows, 8);
        if rk != 4 {
            return Err(Error::DegenerateConfiguration(rk.saturating_sub(1)));
        }
        let form = std::array::from_fn(|i| std::array::from_fn(|j| study_polar(&basis[i], &basis[j])));
        Ok(StudyThreeSpace { basis, form })
    }

    /// The canonical basis (reduced row echelon form) of the span of `points`.
    pub fn spanned_by(points: &[DualQuaternion<S>]) -> Result<Self> {
        let rows: Vec<Vec<S>> = points.iter().map(|b| b.coords().to_vec()).collect();
        let rk = rank(&rows, 8);
        if rk != 4 {
            return Err(Error::DegenerateConfiguration(rk.saturating_sub(1)));
        }
        // the kernel of the annihilator is the span itself, in echelon form
        let ann = nullspace(&rows, 8);
        let basis = nullspace(&ann, 8);
        Self::new(std::array::from_fn(|i| DualQuaternion::from_coords(&basis[i])))
    }

    pub fn rows(&self) -> Mat<S> {
        self.basis.iter().map(|b| b.coords().to_vec()).collect()
    }

    pub fn form_rows(&self) -> Mat<S> {
        self.form.iter().map(|r| r.to_vec()).collect()
    }

    pub fn contains(&self, h: &DualQuaternion<S>) -> bool {
        coordinates_in_span(&self.rows(), &h.coords()).is_some()
    }

    pub fn point(&self, y: &[S]) -> DualQuaternion<S> {
        (0..4).fold(DualQuaternion::zero(), |acc, i| &acc + &self.basis[i].scale(&y[i]))
    }

    pub fn form_is_zero(&self) -> bool {
        let scale = self.rows().iter().map(|r| max_abs(r)).fold(0.0, f64::max).powi(2);
        self.form.iter().flatten().all(|c| c.negligible(8.0 * scale))
    }
}

/// The pencil of lines `(λ:μ) ↦ span(λ a[0] + μ b[0], λ a[1] + μ b[1])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct LinePencil<S> {
    pub a: [DualQuaternion<S>; 2],
    pub b: [DualQuaternion<S>; 2],
}

impl<S: Scalar> LinePencil<S> {
    pub fn line(&self, lambda: &S, mu: &S) -> Result<StudyLine<S>> {
        let g = |k: usize| &self.a[k].scale(lambda) + &self.b[k].scale(mu);
        StudyLine::new(g(0), g(1))
    }
}

/// `Q = V ∩ S`, optionally with two known skew lines of one ruling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct RuledQuadric<S> {
    pub ambient: StudyThreeSpace<S>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skew_pair: Option<[StudyLine<S>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rulings: Option<[LinePencil<S>; 2]>,
}

impl<S: Scalar> RuledQuadric<S> {
    pub fn new(ambient: StudyThreeSpace<S>) -> Self {
        RuledQuadric { ambient, skew_pair: None, rulings: None }
    }

    pub fn inertia(&self) -> (usize, usize, usize) {
        inertia(&self.ambient.form_rows())
    }

    pub fn is_doubly_ruled(&self) -> bool {
        self.inertia() == (2, 2, 0)
    }

    fn require_doubly_ruled(&self) -> Result<()> {
        let (pos, neg, zero) = self.inertia();
        if (pos, neg, zero) != (2, 2, 0) {
            return Err(Error::NotDoublyRuled { rank: pos + neg, pos, neg });
        }
        Ok(())
    }

    pub fn contains(&self, h: &DualQuaternion<S>) -> bool {
        let scale = max_abs(&h.coords()).powi(2);
        self.ambient.contains(h) && study_pairing(h).negligible(4.0 * scale)
    }

    pub fn contains_line(&self, l: &StudyLine<S>) -> bool {
        self.ambient.contains(&l.g1) && self.ambient.contains(&l.g2)
    }

    /// The second point of `Q` on the line through `x0 ∈ Q` and `y`.
    pub fn second_point(&self, x0: &DualQuaternion<S>, y: &DualQuaternion<S>) -> Option<DualQuaternion<S>> {
        let sq = study_pairing(y);
        let scale = max_abs(&y.coords()).powi(2);
        if sq.negligible(4.0 * scale) {
            return None;
        }
        let lambda = -study_polar(x0, y) / sq;
        Some(x0 + &y.scale(&lambda))
    }
}

fn polar_block<S: Scalar>(u: &[DualQuaternion<S>; 2], w: &[DualQuaternion<S>; 2]) -> [[S; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| study_polar(&u[i], &w[j])))
}

fn combo<S: Scalar>(w: &[DualQuaternion<S>; 2], c: [S; 2]) -> DualQuaternion<S> {
    &w[0].scale(&c[0]) + &w[1].scale(&c[1])
}

/// Both rulings from two skew lines `ℓ₁ = span(u)`, `ℓ₂ = span(w)` of one
/// ruling. In the basis `(u, w)` the form is `[[0, M], [Mᵀ, 0]]`; the
/// first ruling is `{(x, c M⁻¹J x)}` and the second joins `x ∈ ℓ₁` to the
/// point `J Mᵀ x ∈ ℓ₂`.
fn rulings_from_skew_pair<S: Scalar>(l1: &StudyLine<S>, l2: &StudyLine<S>) -> Result<[LinePencil<S>; 2]> {
    let u = [l1.g1.clone(), l1.g2.clone()];
    let w = [l2.g1.clone(), l2.g2.clone()];
    let m = polar_block(&u, &w);
    let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    let scale = m.iter().flatten().map(|c| c.to_f64().abs()).fold(0.0, f64::max).powi(2);
    if det.negligible(scale) {
        return Err(Error::NotDoublyRuled { rank: 2, pos: 1, neg: 1 });
    }
    // M⁻¹ J with J = [[0, 1], [−1, 0]]
    let inv = [[m[1][1].clone() / det.clone(), -m[0][1].clone() / det.clone()], [-m[1][0].clone() / det.clone(), m[0][0].clone() / det.clone()]];
    let minv_j = |k: usize| -> [S; 2] {
        // column k of M⁻¹ J
        let jcol = if k == 0 { [S::zero(), -S::one()] } else { [S::one(), S::zero()] };
        [
            inv[0][0].clone() * jcol[0].clone() + inv[0][1].clone() * jcol[1].clone(),
            inv[1][0].clone() * jcol[0].clone() + inv[1][1].clone() * jcol[1].clone(),
        ]
    };
    let first = LinePencil { a: u.clone(), b: [combo(&w, minv_j(0)), combo(&w, minv_j(1))] };
    // J Mᵀ e_k = (Mᵀ e_k)₂, −(Mᵀ e_k)₁) = (m[k][1], −m[k][0])
    let jmt = |k: usize| [m[k][1].clone(), -m[k][0].clone()];
    let second = LinePencil { a: [u[0].clone(), combo(&w, jmt(0))], b: [u[1].clone(), combo(&w, jmt(1))] };
    Ok([first, second])
}

/// Symmetric elimination `form = Σ d_i y_i²` over the basis of `V`,
/// returning the diagonal and the new basis in `V`-coordinates.
fn diagonalize<S: Scalar>(g: &[[S; 4]; 4]) -> (Vec<S>, Mat<S>) {
    let n = 4;
    let mut basis: Mat<S> = (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    let bil = |x: &[S], y: &[S]| {
        let mut acc = S::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + x[i].clone() * g[i][j].clone() * y[j].clone();
            }
        }
        acc
    };
    let scale = g.iter().flatten().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
    let mut diag = Vec::new();
    let mut out = Vec::new();
    while !basis.is_empty() {
        let pos = basis.iter().position(|b| !bil(b, b).negligible(scale));
        let k = match pos {
            Some(k) => k,
            None => {
                let pair = (0..basis.len())
                    .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !bil(&basis[i], &basis[j]).negligible(scale));
                match pair {
                    Some((i, j)) => {
                        let bj = basis[j].clone();
                        for (x, y) in basis[i].iter_mut().zip(bj) {
                            *x = x.clone() + y;
                        }
                        i
                    }
                    None => {
                        for b in basis.drain(..) {
                            diag.push(S::zero());
                            out.push(b);
                        }
                        break;
                    }
                }
            }
        };
        let pivot = basis.swap_remove(k);
        let d = bil(&pivot, &pivot);
        for b in basis.iter_mut() {
            let f = bil(b, &pivot) / d.clone();
            for (x, y) in b.iter_mut().zip(&pivot) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        diag.push(d);
        out.push(pivot);
    }
    (diag, out)
}

/// Two skew lines of one ruling from the normal form
/// `a₁² + a₂² − b₁² − b₂²`: `{a = b}` and `{a = J b}`.
fn skew_pair_from_form<S: Scalar>(v: &StudyThreeSpace<S>) -> Result<[StudyLine<S>; 2]> {
    let (diag, basis) = diagonalize(&v.form);
    let mut pos: Vec<(S, Vec<S>)> = Vec::new();
    let mut neg: Vec<(S, Vec<S>)> = Vec::new();
    for (d, b) in diag.into_iter().zip(basis) {
        if d > S::zero() {
            pos.push((d, b));
        } else if d < S::zero() {
            neg.push((-d, b));
        }
    }
    if pos.len() != 2 || neg.len() != 2 {
        return Err(Error::NotDoublyRuled { rank: pos.len() + neg.len(), pos: pos.len(), neg: neg.len() });
    }
    // rescale so that d_p1 = d_p2 = d_n1 = d_n2; needs rational square roots
    let unit = |d: &S, b: &[S], by: &S| -> Option<Vec<S>> {
        let r = (by.clone() / d.clone()).sqrt_exact()?;
        Some(b.iter().map(|x| x.clone() * r.clone()).collect())
    };
    let base = pos[0].0.clone();
    let p1 = pos[0].1.clone();
    let p2 = unit(&pos[1].0, &pos[1].1, &base).ok_or(Error::IrrationalRulings)?;
    let n1 = unit(&neg[0].0, &neg[0].1, &base).ok_or(Error::IrrationalRulings)?;
    let n2 = unit(&neg[1].0, &neg[1].1, &base).ok_or(Error::IrrationalRulings)?;
    let add = |x: &[S], y: &[S], sy: i64| -> DualQuaternion<S> {
        let c: Vec<S> = x.iter().zip(y).map(|(a, b)| a.clone() + S::from_i64(sy) * b.clone()).collect();
        v.point(&c)
    };
    let l1 = StudyLine::new(add(&p1, &n1, 1), add(&p2, &n2, 1))?;
    let l2 = StudyLine::new(add(&p2, &n1, 1), add(&n2, &p1, -1))?;
    Ok([l1, l2])
}

/// The two rulings of a doubly ruled quadric.
pub fn rulings<S: Scalar>(q: &RuledQuadric<S>) -> Result<[LinePencil<S>; 2]> {
    q.require_doubly_ruled()?;
    let pair = match &q.skew_pair {
        Some(p) => p.clone(),
        None => skew_pair_from_form(&q.ambient)?,
    };
    rulings_from_skew_pair(&pair[0], &pair[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    InU,
    NotInU,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UoReason {
    VInsideS,
    QInsideF0,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UoMembership {
    pub verdict: Verdict,
    pub reason: UoReason,
}

/// `Q ∈ 𝒰_𝔬` iff `V ⊂ S` or `Q ⊂ F_𝔬`. Real points of `F_𝔬` have
/// `p = 0`, and a quadric of rank at least 3 spans `V`, so `Q ⊂ F_𝔬` is
/// decided by whether every basis point of `V` has `p = 0`.
#[allow(non_snake_case)]
pub fn check_not_in_Uo<S: Scalar>(q: &RuledQuadric<S>) -> UoMembership {
    if q.ambient.form_is_zero() {
        return UoMembership { verdict: Verdict::InU, reason: UoReason::VInsideS };
    }
    let p_rows: Vec<Vec<S>> = q.ambient.basis.iter().map(|b| b.p.coeffs().to_vec()).collect();
    if rank(&p_rows, 4) == 0 {
        return UoMembership { verdict: Verdict::InU, reason: UoReason::QInsideF0 };
    }
    UoMembership { verdict: Verdict::NotInU, reason: UoReason::Clear }
}

/// A traced reconstruction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Reconstruction<S> {
    pub quadric: RuledQuadric<S>,
    pub lines: [StudyLine<S>; 3],
    pub h: DualQuaternion<S>,
    pub steps: Vec<String>,
}

fn member_param<S: Scalar>(which: Family, s: &P1<S>, t: &P1<S>) -> P1<S> {
    match which {
        Family::S => s.clone(),
        Family::T => t.clone(),
    }
}

fn fmt_p1<S: Scalar>(x: &P1<S>) -> String {
    format!("({}:{})", x[0], x[1])
}

const H_PROBES: usize = 12;
const ORBIT_CHECKS: usize = 12;

/// The three-line construction. `f` and `f2` must be distinct families of
/// the same cyclide meeting once.
pub fn reconstruct_quadric<S: Scalar>(
    d: &Cyclide<S>,
    f: &CircleFamily<'_, S>,
    f2: &CircleFamily<'_, S>,
) -> Result<Reconstruction<S>> {
    let weights: Vec<S> = (2..2 + H_PROBES as i64).map(|k| S::ratio(1, k)).collect();
    reconstruct_with_weights(d, f, f2, &weights)
}

/// The construction with `h = 𝔢 + w g′` tried for each weight `w` in turn.
fn reconstruct_with_weights<S: Scalar>(
    d: &Cyclide<S>,
    f: &CircleFamily<'_, S>,
    f2: &CircleFamily<'_, S>,
    weights: &[S],
) -> Result<Reconstruction<S>> {
    let o = MoebiusPoint::<S>::origin();
    let spec = BaseLocusSpec::<S>::origin();
    let mut steps = Vec::new();

    let (s0, t0) = locate(&d.param, &o)?;
    steps.push(format!("origin at s={} t={}", fmt_p1(&s0), fmt_p1(&t0)));
    let c = family_member(f, &member_param(f.which, &s0, &t0))?;
    let c2 = family_member(f2, &member_param(f2.which, &s0, &t0))?;
    let l = lift_member(c, &o)?;
    let l2 = lift_member(c2, &o)?;
    steps.push(format!("lifted C to a {:?} line and C' to a {:?} line", l.kind, l2.kind));

    let e = DualQuaternion::<S>::identity();
    let g2 = if rank(&[e.coords().to_vec(), l2.g1.coords().to_vec()], 8) == 1 { l2.g2.clone() } else { l2.g1.clone() };
    let mut chosen = None;
    for w in weights {
        let h = &e + &g2.scale(w);
        let Ok(hp) = StudyPoint::new(h.clone()) else { continue };
        if crate::study::on_boundary(&hp) {
            continue;
        }
        let Ok(p) = orb(&spec, &hp) else { continue };
        // p lies on C', the member of f2 at its locator parameter
        let fixed = member_param(f2.which, &s0, &t0);
        let along = match f2.which {
            Family::T => solve_s(&d.param, &fixed, &p),
            Family::S => solve_t(&d.param, &fixed, &p),
        };
        let Ok(param) = along else { continue };
        let Ok(c3) = family_member(f, &param) else { continue };
        let Ok(big_l) = lift_member(c3, &p) else { continue };
        let Ok(l3) = big_l.right_mul(&h) else { continue };
        steps.push(format!("h = e + ({w}) g'; C'' at parameter {}", fmt_p1(&param)));
        chosen = Some((h, l3));
        break;
    }
    let (h, l3) = chosen.ok_or(Error::DegenerateConfiguration(0))?;

    let pts = [l.g1.clone(), l.g2.clone(), l2.g1.clone(), l2.g2.clone(), l3.g1.clone(), l3.g2.clone()];
    let v = StudyThreeSpace::spanned_by(&pts)?;
    steps.push("V spans a 3-space".into());
    let mut q = RuledQuadric::new(v);
    q.require_doubly_ruled()?;
    steps.push("Q = V ∩ S has signature (2,2)".into());
    debug_assert!(q.ambient.contains(&e));
    if check_not_in_Uo(&q).verdict == Verdict::InU {
        return Err(Error::DegenerateConfiguration(3));
    }
    for line in [&l, &l2, &l3] {
        if !q.contains_line(line) {
            return Err(Error::DegenerateConfiguration(3));
        }
    }

    // orb(Q) ⊆ D on points of Q seen from 𝔢
    let mut worst: f64 = 0.0;
    for k in 0..ORBIT_CHECKS {
        let y: Vec<S> = (0..4).map(|i| S::from_i64(((k * 7 + i * 3) % 11) as i64 - 5)).collect();
        let Some(x) = q.second_point(&e, &q.ambient.point(&y)) else { continue };
        let Ok(hx) = StudyPoint::new(x) else { continue };
        let Ok(img) = orb(&spec, &hx) else { continue };
        if !contains_point(d, &img) {
            let r = d.pencil.iter().map(|form| form.relative_residual(&img.0)).fold(0.0, f64::max);
            worst = worst.max(r.max(f64::MIN_POSITIVE));
        }
    }
    if worst > 0.0 {
        return Err(Error::OrbitMismatch(worst));
    }
    steps.push("orb(Q) lies on D".into());

    // ℓ and ℓ″ are skew lines of the ruling over f
    q.skew_pair = Some([l.clone(), l3.clone()]);
    q.rulings = Some(rulings(&q)?);
    Ok(Reconstruction { quadric: q, lines: [l, l2, l3], h, steps })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub subspace_distance: f64,
    pub rulings_matched: bool,
    pub families_noncospherical: bool,
    pub steps: Vec<String>,
}

impl RoundtripReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.subspace_distance <= tol && self.rulings_matched && self.families_noncospherical
    }
}

const PROBE_PARAMS: [(i64, i64); 5] = [(1, 1), (1, -1), (2, 1), (1, 3), (-3, 2)];

/// `(s, t)` of a point of the image of `H`: its coordinates in the
/// coefficient basis form the rank-one matrix `[[s0t0, s0t1], [s1t0, s1t1]]`.
fn motion_parameters<S: Scalar>(m: &BilinearMotion<S>, x: &DualQuaternion<S>) -> Option<(P1<S>, P1<S>)> {
    let c = coordinates_in_span(&m.coefficient_rows(), &x.coords())?;
    let scale = max_abs(&c);
    let pick = |a: &S, b: &S, c2: &S, d2: &S| -> P1<S> {
        if max_abs(&[a.clone(), b.clone()]) >= max_abs(&[c2.clone(), d2.clone()]) { [a.clone(), b.clone()] } else { [c2.clone(), d2.clone()] }
    };
    let det = c[0].clone() * c[3].clone() - c[1].clone() * c[2].clone();
    if !det.negligible(scale * scale) {
        return None;
    }
    let s = pick(&c[0], &c[2], &c[1], &c[3]);
    let t = pick(&c[0], &c[1], &c[2], &c[3]);
    Some((s, t))
}

fn same_image<S: Scalar>(a: &CircleOrPoint<S>, b: &CircleOrPoint<S>) -> bool {
    match (a, b) {
        (CircleOrPoint::Circle(x), CircleOrPoint::Circle(y)) => x.same_circle(y),
        (CircleOrPoint::Point(x), CircleOrPoint::Point(y)) => x.same_point(y),
        _ => false,
    }
}

/// Forward orbit, implicitization, reconstruction, and comparison with the
/// original motion.
pub fn roundtrip_theorem<S: Scalar>(m: &BilinearMotion<S>, samples: usize) -> Result<RoundtripReport> {
    let x = orbit_of_quadric(m)?;
    let d = implicitize(&x, samples)?;
    let (fs, ft) = (d.family(Family::S), d.family(Family::T));
    let n = family_intersection(&fs, &ft)?;
    if n != 1 {
        return Err(Error::FamiliesNotTransversal(n));
    }
    let rec = reconstruct_quadric(&d, &fs, &ft)?;
    Ok(compare_with_motion(m, &d, &rec))
}

/// Compares a reconstruction of `orbit_of_quadric(m)` with `m` itself:
/// the 3-spaces, the rulings against the parameter families, and the
/// non-cospherical property of the two families.
pub fn compare_with_motion<S: Scalar>(m: &BilinearMotion<S>, d: &Cyclide<S>, rec: &Reconstruction<S>) -> RoundtripReport {
    let (fs, ft) = (d.family(Family::S), d.family(Family::T));
    let mut steps = rec.steps.clone();
    let q = &rec.quadric;

    let original = m.coefficient_rows();
    let recovered = q.ambient.rows();
    let distance = if S::EXACT {
        if same_span(&original, &recovered, 8) { 0.0 } else { 1.0 }
    } else {
        subspace_distance(&original, &recovered, 8)
    };
    steps.push(format!("subspace distance {distance:e}"));

    let spec = BaseLocusSpec::origin();
    let pencils = q.rulings.clone().expect("set by reconstruct_quadric");
    let mut matched_families = Vec::new();
    let mut rulings_matched = true;
    for pencil in &pencils {
        let mut fam: Option<Family> = None;
        for &(a, b) in PROBE_PARAMS.iter() {
            let ok = (|| -> Option<bool> {
                let line = pencil.line(&S::from_i64(a), &S::from_i64(b)).ok()?;
                let img = orbit_of_line(&spec, &line).ok()?;
                let probe = line.point(&S::from_i64(2), &S::from_i64(1));
                let (s, t) = motion_parameters(m, &probe)?;
                let which = match fam {
                    Some(w) => w,
                    None => {
                        // the ruling fixes s (S-family) or t (T-family)
                        let other = line.point(&S::from_i64(1), &S::from_i64(-3));
                        let (s2, _) = motion_parameters(m, &other)?;
                        let w = if crate::linalg::proportional(&s, &s2) { Family::S } else { Family::T };
                        fam = Some(w);
                        w
                    }
                };
                let member = family_member(&d.family(which), &member_param(which, &s, &t)).ok()?;
                Some(same_image(&img, &member))
            })();
            if ok != Some(true) {
                rulings_matched = false;
            }
        }
        matched_families.push(fam);
    }
    if matched_families[0].is_none() || matched_families[0] == matched_families[1] {
        rulings_matched = false;
    }
    steps.push(format!("rulings matched: {rulings_matched}"));

    let mut noncospherical = true;
    for &(a, b) in PROBE_PARAMS.iter() {
        let p: P1<S> = [S::from_i64(a), S::from_i64(b)];
        let q2: P1<S> = [S::from_i64(b), S::from_i64(a + b)];
        let (Ok(CircleOrPoint::Circle(c1)), Ok(CircleOrPoint::Circle(c2))) = (family_member(&fs, &p), family_member(&ft, &q2)) else {
            noncospherical = false;
            continue;
        };
        if cospherical(&c1, &c2) {
            noncospherical = false;
        }
    }
    RoundtripReport { subspace_distance: distance, rulings_matched, families_noncospherical: noncospherical, steps }
}

/// Left multiplication by `h` off the boundary preserves `S`.
pub fn left_multiply<S: Scalar>(h: &DualQuaternion<S>, x: &DualQuaternion<S>) -> DualQuaternion<S> {
    dq_mul(h, x)
}
