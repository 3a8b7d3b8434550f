//! Acceptance suite: one pass/fail line per criterion. Expected values are
//! recomputed by the oracles in `common` rather than read back from the
//! library.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use darboux::algebra::{dq_conj, dq_mul, dq_norm, quat_mul, DualQuaternion};
use darboux::cyclide::{family_intersection, implicitize, Family, QuadricForm};
use darboux::generate::{random_motion, GenConstraints};
use darboux::moebius::{CircleOrPoint, MoebiusPoint};
use darboux::orbit::{orb, orbit_of_line, orbit_of_quadric, BilinearMotion};
use darboux::picard::{conic_classes, decompositions_of_minus_2kappa, pair_product_census, DivisorClass};
use darboux::quatfactor::{factor, from_motion, to_motion, verify_factorization, DEFAULT_RESTARTS};
use darboux::reconstruct::{check_not_in_Uo, compare_with_motion, lift_circle, reconstruct_quadric, Verdict};
use darboux::scalar::Zero;
use darboux::study::{act, in_base_locus, rotation_line, translation_line, BaseLocusSpec, StudyLine, StudyPoint};
use darboux::{Rational, Scalar};
use nalgebra::DMatrix;
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(n: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    };
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        (o, _) => o,
    };
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d.clone()),
        Err(e) => ("FAIL", e.clone()),
    };
    // straight to the handle so the line survives libtest's output capture
    let line = format!("criterion {n:>2} {tag} {name}: {detail} [{:.2}s]\n", elapsed.as_secs_f64());
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    outcome.is_ok()
}

fn motion(seed: u64) -> BilinearMotion<Rational> {
    random_motion(seed, GenConstraints::default()).expect("generator")
}

const MOTION_SEEDS: std::ops::Range<u64> = 1..21;

fn c1_algebra() -> Check {
    let mut g = rng(101);
    for _ in 0..100 {
        let h: [DualQuaternion<R>; 3] = std::array::from_fn(|_| dq(&small_vec(&mut g, 9), &small_vec(&mut g, 9)));
        let lhs = dq_mul(&dq_mul(&h[0], &h[1]), &h[2]);
        let rhs = dq_mul(&h[0], &dq_mul(&h[1], &h[2]));
        ensure(lhs == rhs, || "associativity".into())?;
        // the Hamilton product itself, against the written-out oracle
        let (p0, _) = parts(&h[0]);
        let (p1, _) = parts(&h[1]);
        ensure(coeffs(&quat_mul(&quat(&p0), &quat(&p1))) == ham(&p0, &p1), || "quaternion product".into())?;
    }
    for _ in 0..100 {
        let a = dq(&small_vec(&mut g, 9), &small_vec(&mut g, 9));
        let b = dq(&small_vec(&mut g, 9), &small_vec(&mut g, 9));
        ensure(dq_conj(&dq_mul(&a, &b)) == dq_mul(&dq_conj(&b), &dq_conj(&a)), || "anti-automorphism".into())?;
        let (pa, _) = parts(&a);
        let (pb, _) = parts(&b);
        ensure(conj4(&ham(&pa, &pb)) == ham(&conj4(&pb), &conj4(&pa)), || "quaternion conjugation".into())?;
    }
    let eps = DualQuaternion::<R>::epsilon();
    ensure(dq_mul(&eps, &eps).is_zero(), || "ε² ≠ 0".into())?;
    for _ in 0..100 {
        // ε commutes with everything and kills the dual part
        let h = dq(&small_vec(&mut g, 9), &small_vec(&mut g, 9));
        let (p, _) = parts(&h);
        let eh = dq_mul(&eps, &h);
        ensure(eh == dq_mul(&h, &eps) && eh == dq(&[int(0), int(0), int(0), int(0)], &p), || "ε h".into())?;
        ensure(dq_mul(&dq_mul(&eps, &h), &dq_mul(&eps, &h)).is_zero(), || "(εh)² ≠ 0".into())?;
    }
    for _ in 0..100 {
        let h = dq(&small_vec(&mut g, 9), &small_vec(&mut g, 9));
        let (p, q) = parts(&h);
        let hh = dq_mul(&h, &dq_conj(&h));
        let (np, nq) = parts(&hh);
        ensure(np[1..].iter().chain(&nq[1..]).all(Zero::is_zero), || "h h̄ not a dual number".into())?;
        ensure(np[0] == dot(&p, &p) && nq[0] == int(2) * dot(&p, &q), || "h h̄ value".into())?;
        let n = dq_norm(&h);
        ensure(n.real == np[0] && n.dual == nq[0], || "dq_norm".into())?;
    }
    Ok("400 exact cases".into())
}

fn c2_action() -> Check {
    let mut g = rng(202);
    for _ in 0..100 {
        let h1 = random_study_point(&mut g, 5);
        let h2 = random_study_point(&mut g, 5);
        let v: [R; 3] = small_vec(&mut g, 9);
        let w: [R; 3] = small_vec(&mut g, 9);
        let s1 = StudyPoint::new(h1.clone()).map_err(|e| e.to_string())?;
        let s2 = StudyPoint::new(h2.clone()).map_err(|e| e.to_string())?;
        let s12 = StudyPoint::new(dq_mul(&h1, &h2)).map_err(|e| e.to_string())?;
        let composed = act(&s12, &v).unwrap();
        let sequential = act(&s1, &act(&s2, &v).unwrap()).unwrap();
        ensure(composed == sequential, || "group-action law".into())?;
        ensure(act(&s1, &v).unwrap() == rigid_motion(&h1, &v), || "action differs from the rigid motion".into())?;
        let (av, aw) = (act(&s1, &v).unwrap(), act(&s1, &w).unwrap());
        let d2 = |x: &[R; 3], y: &[R; 3]| (0..3).fold(R::zero(), |acc, k| acc + (x[k].clone() - y[k].clone()).square());
        ensure(d2(&av, &aw) == d2(&v, &w), || "isometry".into())?;
        ensure(act(&StudyPoint::identity(), &v).unwrap() == v, || "identity".into())?;
    }
    Ok("100 exact cases".into())
}

fn c3_orb() -> Check {
    let mut g = rng(303);
    for k in 0..100 {
        let h = random_study_point(&mut g, 5);
        let v: [R; 3] = if k % 2 == 0 { [int(0), int(0), int(0)] } else { small_vec(&mut g, 6) };
        let spec = BaseLocusSpec::at(&v);
        let x = orb(&spec, &StudyPoint::new(h.clone()).unwrap()).map_err(|e| e.to_string())?;
        let (p, q) = parts(&h);
        let pc = conj4(&p);
        let w = sub4(&add4(&ham(&ham(&p, &pure(&v)), &pc), &ham(&p, &conj4(&q))), &ham(&q, &pc));
        let last = int(4) * dot(&q, &q) + dot(&p, &p) * dot(&v, &v) + int(4) * ham(&ham(&q, &pure(&v)), &pc)[0].clone();
        ensure(w[0].is_zero(), || "w not pure".into())?;
        let ww = ham(&w, &conj4(&w));
        ensure(ww[0] == dot(&p, &p) * last.clone() && ww[1..].iter().all(Zero::is_zero), || "w w̄ ≠ p p̄ · last".into())?;
        let expected = [dot(&p, &p), w[1].clone(), w[2].clone(), w[3].clone(), last];
        ensure(x.0 == expected, || "orbit coordinates".into())?;
        let moved = rigid_motion(&h, &v);
        ensure(x.euclidean().unwrap() == moved, || "τ(orb(h)) ≠ act(h, v)".into())?;
    }
    let spec = BaseLocusSpec::<R>::origin();
    let mut boundary = 0;
    for k in 0..1000 {
        // a third of the samples on B (p = 0), a sixth with q = 0
        let h = match k % 6 {
            0 | 1 => dq(&[int(0), int(0), int(0), int(0)], &nonzero_vec(&mut g, 7)),
            2 => dq(&nonzero_vec(&mut g, 7), &[int(0), int(0), int(0), int(0)]),
            _ => random_study_point(&mut g, 7),
        };
        let (p, q) = parts(&h);
        if p.iter().all(Zero::is_zero) {
            boundary += 1;
            // the last condition reduces to 4 q q̄, a nonzero sum of squares
            ensure(!dot(&q, &q).is_zero(), || "sum of squares".into())?;
        }
        let sp = StudyPoint::new(h).map_err(|e| e.to_string())?;
        ensure(!in_base_locus(&spec, &sp), || "real point accepted into F_𝔬".into())?;
    }
    Ok(format!("100 identities, 1000 rejections ({boundary} on B)"))
}

fn c4_lines() -> Check {
    let mut g = rng(404);
    let spec = BaseLocusSpec::<R>::origin();
    let o = MoebiusPoint::<R>::origin();
    let (mut circles, mut points) = (0, 0);
    for k in 0..50 {
        let d: [R; 3] = nonzero_vec(&mut g, 4);
        let (line, generator) = if k % 2 == 0 {
            let c: [R; 3] = if k % 10 == 0 { std::array::from_fn(|i| d[i].clone() * int(2)) } else { small_vec(&mut g, 4) };
            (rotation_line(&c, &d).unwrap(), dq(&pure(&d), &pure(&cross(&d, &c))))
        } else {
            (translation_line(&d).unwrap(), dq(&[int(0), int(0), int(0), int(0)], &pure(&d)))
        };
        let expected = vec![DualQuaternion::<R>::identity().coords().to_vec(), generator.coords().to_vec()];
        ensure(same_span(&line.basis(), &expected), || format!("line {k} is not span(𝔢, g)"))?;
        let images: Vec<[R; 5]> = [(1, 0), (1, 1), (2, -1), (1, 3)]
            .iter()
            .map(|&(l, m)| {
                let (p, q) = parts(&line.point(&int(l), &int(m)));
                origin_image(&p, &q)
            })
            .collect();
        match orbit_of_line(&spec, &line).map_err(|e| e.to_string())? {
            CircleOrPoint::Point(x) => {
                points += 1;
                ensure(images.iter().all(|y| proportional(y, &x.0)), || format!("line {k}: not a constant orbit"))?;
            }
            CircleOrPoint::Circle(c) => {
                circles += 1;
                for y in &images {
                    ensure(c.plane.iter().all(|f| dot(f, y).is_zero()), || format!("line {k}: orbit point off the plane"))?;
                }
                let lifted = lift_circle(&c, &o).map_err(|e| e.to_string())?;
                ensure(same_span(&lifted.basis(), &expected), || format!("line {k}: lift is a different line"))?;
            }
        }
    }
    ensure(circles > 0 && points > 0, || "no mix of circles and points".into())?;
    Ok(format!("{circles} circles lifted exactly, {points} fixed points"))
}

fn fresh_parameter(g: &mut rand_chacha::ChaCha8Rng) -> [R; 2] {
    [Rational::new(g.random_range(-50..=50), g.random_range(1..=17)), Rational::new(g.random_range(1..=40), g.random_range(1..=9))]
}

fn c5_pencil() -> Check {
    let mut g = rng(505);
    for seed in MOTION_SEEDS {
        let m = motion(seed);
        let x = orbit_of_quadric(&m).map_err(|e| e.to_string())?;
        let d = implicitize(&x, 40).map_err(|e| e.to_string())?;
        ensure(d.certificate.pencil_dim == 2, || format!("seed {seed}: pencil dimension {}", d.certificate.pencil_dim))?;
        ensure(d.certificate.residual == 0.0, || format!("seed {seed}: residual {}", d.certificate.residual))?;
        let moebius: Vec<R> = QuadricForm::<R>::moebius().monomials();
        let pencil: Vec<Vec<R>> = d.pencil.iter().map(QuadricForm::monomials).collect();
        let with_moebius: Vec<Vec<R>> = pencil.iter().cloned().chain([moebius]).collect();
        ensure(rank(&pencil) == 2 && rank(&with_moebius) == 2, || format!("seed {seed}: Möbius form not in pencil"))?;
        for _ in 0..20 {
            let y = motion_image(&m, &fresh_parameter(&mut g), &fresh_parameter(&mut g));
            ensure(d.pencil.iter().all(|f| f.eval(&y).is_zero()), || format!("seed {seed}: fresh sample off the pencil"))?;
        }
    }
    let mut rejected = 0;
    for seed in 0..5 {
        let m = random_motion(seed, GenConstraints { rotations_only: true, allow_uo: false }).unwrap();
        ensure(m.b.iter().all(|b| b.is_zero()), || "rotations-only motion has b ≠ 0".into())?;
        if orbit_of_quadric(&m).and_then(|x| implicitize(&x, 40)).is_err() {
            rejected += 1;
        }
    }
    ensure(rejected == 5, || format!("only {rejected}/5 b≡0 inputs rejected"))?;
    Ok("20 pencils of dimension 2, 400 fresh samples exact, 5/5 b≡0 rejected".into())
}

fn c6_identity() -> Check {
    let mut count = 0;
    let mut inputs: Vec<BilinearMotion<R>> = MOTION_SEEDS.map(motion).collect();
    inputs.extend((0..5).map(|s| random_motion(s, GenConstraints { rotations_only: false, allow_uo: true }).unwrap()));
    let mut g = rng(606);
    for _ in 0..10 {
        // arbitrary Study-valid bilinear motions, not from the generator
        let h0 = random_study_point(&mut g, 3);
        let h1 = random_study_point(&mut g, 3);
        let c = [DualQuaternion::identity(), h0.clone(), h1.clone(), dq_mul(&h0, &h1)];
        if let Ok(m) = BilinearMotion::from_coefficients(c) {
            inputs.push(m);
        }
    }
    for m in &inputs {
        let x = orbit_of_quadric(m).map_err(|e| e.to_string())?;
        let mut lhs = grid_mul(&x.x[0].c, &x.x[4].c);
        for k in 1..4 {
            let sq = grid_mul(&x.x[k].c, &x.x[k].c);
            for (row, srow) in lhs.iter_mut().zip(&sq) {
                for (a, b) in row.iter_mut().zip(srow) {
                    *a = a.clone() - b.clone();
                }
            }
        }
        ensure(lhs.iter().flatten().all(Zero::is_zero), || "X0 X4 ≠ X1² + X2² + X3²".into())?;
        // coefficient grids agree with the oracle image at sample parameters
        for (s, t) in [(p1(1, 2), p1(3, -1)), (p1(-2, 5), p1(1, 1))] {
            let y = motion_image(m, &s, &t);
            let z: Vec<R> = x.x.iter().map(|f| f.eval(&s, &t)).collect();
            ensure(z == y, || "orbit_of_quadric disagrees with the oracle".into())?;
        }
        count += 1;
    }
    Ok(format!("{count} outputs, identity exact coefficient-wise"))
}

/// `sin` of the largest principal angle between two row spaces.
fn principal_angle(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let basis = |rows: &[Vec<f64>]| {
        let m = DMatrix::from_fn(rows[0].len(), rows.len(), |i, j| rows[j][i]);
        m.qr().q()
    };
    let (qa, qb) = (basis(a), basis(b));
    let residual = &qb - &qa * (qa.transpose() * &qb);
    residual.svd(false, false).singular_values.max()
}

fn which_family(m: &BilinearMotion<R>, line: &StudyLine<R>) -> Option<(Family, [R; 2])> {
    let rows = m.coefficient_rows();
    let c1 = coordinates(&rows, &line.g1.coords())?;
    let c2 = coordinates(&rows, &line.g2.coords())?;
    // coordinates c_ij = s_i t_j of a rank-one matrix
    let split = |c: &[R]| -> Option<([R; 2], [R; 2])> {
        let det = c[0].clone() * c[3].clone() - c[1].clone() * c[2].clone();
        if !det.is_zero() {
            return None;
        }
        let s = if !c[0].is_zero() || !c[2].is_zero() { [c[0].clone(), c[2].clone()] } else { [c[1].clone(), c[3].clone()] };
        let t = if !c[0].is_zero() || !c[1].is_zero() { [c[0].clone(), c[1].clone()] } else { [c[2].clone(), c[3].clone()] };
        Some((s, t))
    };
    let (s1, t1) = split(&c1)?;
    let (s2, t2) = split(&c2)?;
    if proportional(&s1, &s2) {
        Some((Family::S, s1))
    } else if proportional(&t1, &t2) {
        Some((Family::T, t1))
    } else {
        None
    }
}

fn member_points(m: &BilinearMotion<R>, fam: Family, param: &[R; 2]) -> Vec<[R; 5]> {
    [p1(1, 0), p1(0, 1), p1(1, 1), p1(2, -3)]
        .iter()
        .map(|along| match fam {
            Family::S => motion_image(m, param, along),
            Family::T => motion_image(m, along, param),
        })
        .collect()
}

fn roundtrip_exact(seed: u64, m: &BilinearMotion<R>) -> Result<(), String> {
    let fail = |what: &str| format!("seed {seed}: {what}");
    let x = orbit_of_quadric(m).map_err(|e| fail(&e.to_string()))?;
    let d = implicitize(&x, 40).map_err(|e| fail(&e.to_string()))?;
    let (fs, ft) = (d.family(Family::S), d.family(Family::T));
    ensure(family_intersection(&fs, &ft) == Ok(1), || fail("families do not meet once"))?;
    let rec = reconstruct_quadric(&d, &fs, &ft).map_err(|e| fail(&e.to_string()))?;
    ensure(check_not_in_Uo(&rec.quadric).verdict == Verdict::NotInU, || fail("Q ∈ 𝒰_𝔬"))?;
    ensure(same_span(&m.coefficient_rows(), &rec.quadric.ambient.rows()), || fail("3-space not recovered"))?;
    let spec = BaseLocusSpec::<R>::origin();
    let pencils = rec.quadric.rulings.clone().ok_or_else(|| fail("no rulings"))?;
    let mut families = BTreeSet::new();
    for pencil in &pencils {
        let mut fam = None;
        for (a, b) in [(1, 1), (1, -1), (2, 1), (1, 3), (-3, 2)] {
            let line = pencil.line(&int(a), &int(b)).map_err(|e| fail(&e.to_string()))?;
            let (f, param) = which_family(m, &line).ok_or_else(|| fail("ruling line is not a parameter line"))?;
            ensure(fam.is_none_or(|g| g == f), || fail("ruling mixes families"))?;
            fam = Some(f);
            let circle = orbit_of_line(&spec, &line).map_err(|e| fail(&e.to_string()))?.circle().ok_or_else(|| fail("ruling orbit is a point"))?;
            for y in member_points(m, f, &param) {
                ensure(circle.plane.iter().all(|h| dot(h, &y).is_zero()), || fail("circle planes differ"))?;
            }
        }
        families.insert(format!("{:?}", fam.unwrap()));
    }
    ensure(families.len() == 2, || fail("both rulings map to one family"))?;
    for (a, b) in [(p1(1, 2), p1(3, 1)), (p1(-1, 4), p1(2, 5)), (p1(1, 0), p1(0, 1))] {
        let rows: Vec<Vec<R>> = member_points(m, Family::S, &a)[..3].iter().chain(&member_points(m, Family::T, &b)[..3]).map(|r| r.to_vec()).collect();
        ensure(rank(&rows) == 5, || fail("cospherical members"))?;
    }
    Ok(())
}

fn roundtrip_float(seed: u64, m: &BilinearMotion<R>) -> Result<f64, String> {
    let fail = |what: &str| format!("seed {seed} (float): {what}");
    let mf = m.map(|c| c.to_f64());
    let x = orbit_of_quadric(&mf).map_err(|e| fail(&e.to_string()))?;
    let d = implicitize(&x, 40).map_err(|e| fail(&e.to_string()))?;
    let (fs, ft) = (d.family(Family::S), d.family(Family::T));
    ensure(family_intersection(&fs, &ft) == Ok(1), || fail("families do not meet once"))?;
    let rec = reconstruct_quadric(&d, &fs, &ft).map_err(|e| fail(&e.to_string()))?;
    let exact_rows: Vec<Vec<f64>> = m.coefficient_rows().iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect();
    let angle = principal_angle(&exact_rows, &rec.quadric.ambient.rows());
    ensure(angle < 1e-7, || fail(&format!("principal angle {angle:e}")))?;
    let report = compare_with_motion(&mf, &d, &rec);
    ensure(report.rulings_matched && report.families_noncospherical, || fail("rulings or cosphericity"))?;
    Ok(angle)
}

fn c7_roundtrip() -> Check {
    let mut worst: f64 = 0.0;
    for seed in MOTION_SEEDS {
        let m = motion(seed);
        let e = DualQuaternion::<R>::identity();
        ensure(m.coefficient(0) == e, || format!("seed {seed}: H(origin) ≠ 𝔢"))?;
        roundtrip_exact(seed, &m)?;
        worst = worst.max(roundtrip_float(seed, &m)?);
    }
    Ok(format!("20 exact span equalities, worst float angle {worst:.1e}"))
}

fn two_matched_pairs(d: &[DivisorClass; 4]) -> bool {
    // {α₀−αᵢ, 2α₀+αᵢ−Σ, α₀−αⱼ, 2α₀+αⱼ−Σ}
    let count = |c: DivisorClass| d.iter().filter(|x| **x == c).count();
    let lines: usize = (1..=5).map(|i| count(DivisorClass::line_conic(i))).sum();
    lines == 2 && (1..=5).all(|i| count(DivisorClass::line_conic(i)) == count(DivisorClass::quadric_conic(i)))
}

fn oracle_pair(a: &[i64; 6], b: &[i64; 6]) -> i64 {
    a[0] * b[0] - (1..6).map(|i| a[i] * b[i]).sum::<i64>()
}

/// With `Σaᵢ = 2 − 3a₀` and `Σaᵢ² = a₀²`, Cauchy-Schwarz gives
/// `(2 − 3a₀)² ≤ 5a₀²`, so `a₀ ∈ {1, 2}` and `|aᵢ| ≤ a₀`: the search is complete.
fn oracle_conics() -> BTreeSet<[i64; 6]> {
    let k = [3, -1, -1, -1, -1, -1];
    let mut out = BTreeSet::new();
    for a0 in 1..=2i64 {
        let side = (2 * a0 + 1) as usize;
        for mut n in 0..side.pow(5) {
            let mut c = [a0, 0, 0, 0, 0, 0];
            for slot in c[1..].iter_mut() {
                *slot = (n % side) as i64 - a0;
                n /= side;
            }
            if oracle_pair(&c, &c) == 0 && oracle_pair(&c, &k) == 2 {
                out.insert(c);
            }
        }
    }
    out
}

fn c8_conics() -> Check {
    let classes = conic_classes();
    let found: BTreeSet<[i64; 6]> = classes.iter().map(|c| c.0).collect();
    ensure(classes.len() == 10 && found == oracle_conics(), || format!("{} classes, oracle disagrees", classes.len()))?;
    for c in &classes {
        let line = (1..=5).any(|i| *c == DivisorClass::line_conic(i));
        let quad = (1..=5).any(|i| *c == DivisorClass::quadric_conic(i));
        ensure(line ^ quad, || format!("{c} has neither shape"))?;
    }
    let decomps = decompositions_of_minus_2kappa();
    let target = [6, -2, -2, -2, -2, -2];
    let list: Vec<[i64; 6]> = found.iter().copied().collect();
    let mut oracle = 0;
    for a in 0..10 {
        for b in a..10 {
            for c in b..10 {
                for d in c..10 {
                    let sum: [i64; 6] = std::array::from_fn(|k| list[a][k] + list[b][k] + list[c][k] + list[d][k]);
                    oracle += (sum == target) as usize;
                }
            }
        }
    }
    ensure(decomps.len() == oracle, || format!("{} decompositions, oracle {oracle}", decomps.len()))?;
    for d in &decomps {
        ensure(two_matched_pairs(d), || format!("{:?} not of the displayed shape", d.map(|c| c.to_string())))?;
        let has_two = (0..4).any(|i| (i + 1..4).any(|j| oracle_pair(&d[i].0, &d[j].0) == 2));
        ensure(has_two, || "no pairing-2 pair".into())?;
    }
    Ok(format!("10 classes, {} decompositions all of the displayed shape", decomps.len()))
}

fn c9_census() -> Check {
    let mut checked = 0;
    for mask in 0u32..32 {
        if mask.count_ones() != 3 {
            continue;
        }
        let subset: Vec<DivisorClass> = (1..=5)
            .filter(|i| mask & (1 << (i - 1)) != 0)
            .flat_map(|i| [DivisorClass::line_conic(i), DivisorClass::quadric_conic(i)])
            .collect();
        let census = pair_product_census(&subset).map_err(|e| e.to_string())?;
        let mut values = [0usize; 3];
        for i in 0..6 {
            for j in i + 1..6 {
                values[oracle_pair(&subset[i].0, &subset[j].0) as usize] += 1;
            }
        }
        ensure(census.pairs.len() == 15 && values == [0, 12, 3], || "oracle count".into())?;
        ensure(census.count(2) == 3 && census.count(1) == 12 && census.count(0) == 0, || format!("census {:?}", census.summary))?;
        checked += 1;
    }
    Ok(format!("{checked} subsets: 15 pairs, 3 of value 2, 12 of value 1"))
}

fn c10_factor() -> Check {
    let mut successes = 0;
    let mut g = rng(1010);
    for seed in MOTION_SEEDS {
        let m = motion(seed);
        let x = orbit_of_quadric(&m).map_err(|e| e.to_string())?;
        let (a, b) = from_motion(&m);
        ensure(verify_factorization(&a, &b, &x).is_exact_zero(), || format!("seed {seed}: forward residual nonzero"))?;
        // N(A) = X0, N(B) = X4 and A B = (0, X1, X2, X3) at sample points
        for (s, t) in [(p1(1, 3), p1(-2, 1)), (p1(4, -1), p1(1, 1))] {
            let av = a.poly().eval(&s, &t).coeffs();
            let bv = b.poly().eval(&s, &t).coeffs();
            let y = motion_image(&m, &s, &t);
            let ab = ham(&av, &bv);
            ensure(dot(&av, &av) == y[0] && dot(&bv, &bv) == y[4], || "norm identities".into())?;
            ensure(ab[0].is_zero() && ab[1..] == y[1..4], || "product identity".into())?;
        }
        let Ok((fa, fb, cert)) = factor(&x, seed, DEFAULT_RESTARTS) else { continue };
        if !cert.accepted(1e-8) {
            continue;
        }
        successes += 1;
        let back = to_motion(&fa, &fb).map_err(|e| format!("seed {seed}: {e}"))?;
        let xb = orbit_of_quadric(&back).map_err(|e| e.to_string())?;
        let exact = implicitize(&x, 40).map_err(|e| e.to_string())?;
        let recovered = implicitize(&xb, 40).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(recovered.same_pencil(&exact.map(|c| c.to_f64())), || format!("seed {seed}: pencil differs"))?;
        let pencil: Vec<QuadricForm<f64>> = exact.pencil.iter().map(|f| f.map(|c| c.to_f64())).collect();
        for _ in 0..25 {
            let th: [f64; 2] = [g.random_range(0.0..std::f64::consts::PI), g.random_range(0.0..std::f64::consts::PI)];
            let (s, t) = ([th[0].cos(), th[0].sin()], [th[1].cos(), th[1].sin()]);
            let y: [f64; 5] = std::array::from_fn(|k| xb.x[k].eval(&s, &t));
            let ny = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            for f in &pencil {
                let r = f.eval(&y).abs() / (f.max_abs() * ny * ny);
                ensure(r < 1e-8, || format!("seed {seed}: recovered surface off the pencil ({r:e})"))?;
            }
        }
    }
    ensure(successes >= 16, || format!("{successes}/20 factored"))?;
    Ok(format!("20 exact forward certificates, {successes}/20 factored and round-tripped"))
}

fn bin(args: &[&str], dir: &Path) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_darboux")).args(args).current_dir(dir).output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn c11_determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let mut compared = 0;
    for seed in ["3", "17"] {
        let (g1, c1) = bin(&["gen", "--seed", seed], dir)?;
        let (g2, c2) = bin(&["gen", "--seed", seed, "--out", "m.json"], dir)?;
        ensure(c1 == 0 && c2 == 0, || "gen failed".into())?;
        ensure(g1 == std::fs::read(dir.join("m.json")).unwrap() && g2.is_empty(), || format!("gen seed {seed} differs"))?;
        for mode in ["exact", "float"] {
            let mut runs = Vec::new();
            for run in ["a", "b"] {
                let out = format!("{mode}-{seed}-{run}");
                let (stdout, code) = bin(&["pipeline", "m.json", "--scalar", mode, "--seed", seed, "--points", "50", "--out", &out], dir)?;
                ensure(code == 0, || format!("pipeline {mode} seed {seed} exit {code}"))?;
                runs.push((stdout, read_dir_bytes(&dir.join(&out))));
            }
            ensure(runs[0] == runs[1], || format!("pipeline {mode} seed {seed} differs"))?;
            compared += runs[0].1.len() + 1;
        }
    }
    Ok(format!("{compared} artifacts byte-identical across runs"))
}

#[test]
fn acceptance() {
    let results = [
        run(1, "algebra identities", Some(Duration::from_secs(1)), c1_algebra),
        run(2, "kinematic action", None, c2_action),
        run(3, "orbit identity and real emptiness of F_𝔬", None, c3_orb),
        run(4, "line orbits and lifts", Some(Duration::from_secs(5)), c4_lines),
        run(5, "pencil of quadrics", Some(Duration::from_secs(30)), c5_pencil),
        run(6, "biquadratic identity", None, c6_identity),
        run(7, "quadric round trip", Some(Duration::from_secs(60)), c7_roundtrip),
        run(8, "conic classes and decompositions", Some(Duration::from_secs(1)), c8_conics),
        run(9, "pairing census", Some(Duration::from_secs(1)), c9_census),
        run(10, "quaternion factorization", Some(Duration::from_secs(300)), c10_factor),
        run(11, "determinism", None, c11_determinism),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
