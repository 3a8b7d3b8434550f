//! Dense linear algebra over a [`Scalar`].
//!
//! Exact scalars go through Gaussian elimination. Floats go through the SVD,
//! declaring a singular value zero when it falls below [`RANK_GAP`] times the
//! largest one. This is the single rank policy of the crate.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::{Scalar, FLOAT_ZERO_TOL};

/// Relative singular-value threshold for float rank decisions.
pub const RANK_GAP: f64 = 1e-8;

/// Row-major dense matrix.
pub type Mat<S> = Vec<Vec<S>>;

fn to_dmatrix<S: Scalar>(rows: &[Vec<S>], ncols: usize, normalize_rows: bool) -> DMatrix<f64> {
    let nrows = rows.len().max(ncols);
    let mut m = DMatrix::<f64>::zeros(nrows, ncols);
    let row_max = |row: &[S]| row.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let global = rows.iter().map(|r| row_max(r)).fold(0.0, f64::max);
    for (i, row) in rows.iter().enumerate() {
        let scale = if normalize_rows { row_max(row) } else { 1.0 };
        // rounding residue of an exactly zero row must not be blown up
        if normalize_rows && scale <= FLOAT_ZERO_TOL * global {
            continue;
        }
        let scale = if scale > 0.0 { scale } else { 1.0 };
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.to_f64() / scale;
        }
    }
    m
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
fn rref<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> (Mat<S>, Vec<usize>) {
    let mut m: Mat<S> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn singular_data(rows: &[Vec<f64>], ncols: usize) -> (Vec<f64>, DMatrix<f64>) {
    let m = to_dmatrix(rows, ncols, true);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    (svd.singular_values.iter().copied().collect(), v_t)
}

fn float_rows<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(S::to_f64).collect()).collect()
}

/// Rank of the matrix whose rows are `rows`, each of length `ncols`.
pub fn rank<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> usize {
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    if S::EXACT {
        ncols - nullspace(rows, ncols).len()
    } else {
        let (sv, _) = singular_data(&float_rows(rows), ncols);
        let max = sv.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_GAP * max).count()
    }
}

/// Basis of the right nullspace `{x : rows · x = 0}`.
///
/// Exact route: the kernel basis starts as the identity and is cut down
/// one row at a time, then returned in reduced row echelon form. This
/// avoids eliminating on tall sample matrices whose extra rows are
/// redundant.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Mat<S> {
    if S::EXACT {
        let mut kernel: Mat<S> = (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        for row in rows {
            let vals: Vec<S> = kernel.iter().map(|k| dot(row, k)).collect();
            let Some(p) = vals.iter().position(|v| !v.is_zero()) else {
                continue;
            };
            let pivot = kernel.swap_remove(p);
            let pv = vals[p].clone();
            let mut vals = vals;
            vals.swap_remove(p);
            for (k, v) in kernel.iter_mut().zip(vals) {
                if v.is_zero() {
                    continue;
                }
                let f = v / pv.clone();
                for (x, y) in k.iter_mut().zip(&pivot) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            if kernel.is_empty() {
                break;
            }
        }
        rref(&kernel, ncols).0
    } else {
        if rows.is_empty() {
            return (0..ncols)
                .map(|i| (0..ncols).map(|j| if i == j { S::one() } else { S::zero() }).collect())
                .collect();
        }
        let (sv, v_t) = singular_data(&float_rows(rows), ncols);
        let max = sv.iter().copied().fold(0.0, f64::max);
        sv.iter()
            .enumerate()
            .filter(|(_, &s)| max == 0.0 || s <= RANK_GAP * max)
            .map(|(i, _)| (0..ncols).map(|j| S::from_f64(v_t[(i, j)])).collect())
            .collect()
    }
}

/// Right singular vector of the smallest singular value, with the two
/// smallest singular values relative to the largest. Needs at least as
/// many rows as columns.
pub fn least_singular_vector(rows: &[Vec<f64>], ncols: usize) -> Option<(Vec<f64>, f64, f64)> {
    if rows.len() < ncols || ncols < 2 {
        return None;
    }
    let (sv, v_t) = singular_data(rows, ncols);
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].partial_cmp(&sv[b]).unwrap());
    let max = sv[order[sv.len() - 1]];
    if max == 0.0 {
        return None;
    }
    let v = (0..ncols).map(|j| v_t[(order[0], j)]).collect();
    Some((v, sv[order[0]] / max, sv[order[1]] / max))
}

/// Singular values in decreasing order (float diagnostics).
pub fn singular_values(rows: &[Vec<f64>], ncols: usize) -> Vec<f64> {
    let mut sv = singular_data(rows, ncols).0;
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Determinant of a square matrix by elimination.
pub fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a: Mat<S> = m.to_vec();
    let mut d = S::one();
    for c in 0..n {
        let p = if S::EXACT {
            (c..n).find(|&i| !a[i][c].is_zero())
        } else {
            (c..n)
                .max_by(|&i, &j| a[i][c].to_f64().abs().partial_cmp(&a[j][c].to_f64().abs()).unwrap())
                .filter(|&i| a[i][c].to_f64() != 0.0)
        };
        let Some(p) = p else {
            return S::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = d * a[c][c].clone();
        for i in c + 1..n {
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let v = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
    }
    d
}

/// Coefficients `c` with `Σ c_i basis_i = x`, if `x` lies in the span.
/// The basis is assumed linearly independent.
pub fn coordinates_in_span<S: Scalar>(basis: &[Vec<S>], x: &[S]) -> Option<Vec<S>> {
    let k = basis.len();
    let n = x.len();
    if S::EXACT {
        // Solve the n×k system with augmented column.
        let rows: Mat<S> = (0..n)
            .map(|i| {
                let mut r: Vec<S> = basis.iter().map(|b| b[i].clone()).collect();
                r.push(x[i].clone());
                r
            })
            .collect();
        let (m, pivots) = rref(&rows, k + 1);
        if pivots.contains(&k) || pivots.len() < k {
            return None;
        }
        Some((0..k).map(|r| m[r][k].clone()).collect())
    } else {
        let a = DMatrix::<f64>::from_fn(n, k, |i, j| basis[j][i].to_f64());
        let b = DMatrix::<f64>::from_fn(n, 1, |i, _| x[i].to_f64());
        let svd = a.clone().svd(true, true);
        let sol = svd.solve(&b, RANK_GAP).ok()?;
        let resid = (&a * &sol - &b).norm();
        let scale = b.norm().max(1e-300);
        if resid > 1e-7 * scale {
            return None;
        }
        Some((0..k).map(|i| S::from_f64(sol[(i, 0)])).collect())
    }
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix.
///
/// Exact route: characteristic polynomial by Faddeev–LeVerrier, then
/// Descartes' rule of signs (exact for real-rooted polynomials).
pub fn inertia<S: Scalar>(m: &[Vec<S>]) -> (usize, usize, usize) {
    let n = m.len();
    if S::EXACT {
        let coeffs = charpoly(m);
        // coeffs[k] multiplies λ^(n-k); zero eigenvalues are trailing zeros.
        let zero = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
        let nonzero = &coeffs[..=n - zero];
        let sign_changes = |cs: &[S]| -> usize {
            let signs: Vec<bool> = cs.iter().filter(|c| !c.is_zero()).map(|c| *c > S::zero()).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let pos = sign_changes(nonzero);
        let degree = nonzero.len() - 1;
        let neg_poly: Vec<S> = nonzero
            .iter()
            .enumerate()
            .map(|(k, c)| if (degree - k) % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        let neg = sign_changes(&neg_poly);
        (pos, neg, zero)
    } else {
        let a = DMatrix::<f64>::from_fn(n, n, |i, j| m[i][j].to_f64());
        let eig = SymmetricEigen::new(a);
        let max = eig.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let tol = RANK_GAP * max.max(f64::MIN_POSITIVE);
        let pos = eig.eigenvalues.iter().filter(|&&v| v > tol).count();
        let neg = eig.eigenvalues.iter().filter(|&&v| v < -tol).count();
        (pos, neg, n - pos - neg)
    }
}

/// Characteristic polynomial `det(λI − M)` as coefficients of
/// `λ^n, λ^(n-1), …, 1`.
pub fn charpoly<S: Scalar>(m: &[Vec<S>]) -> Vec<S> {
    let n = m.len();
    let mut coeffs = vec![S::one()];
    let mut mk: Mat<S> = vec![vec![S::zero(); n]; n];
    for k in 1..=n {
        // M_k = M · (M_{k-1} + c_{k-1} I)
        let prev_c = coeffs[k - 1].clone();
        let mut inner = mk.clone();
        for (i, row) in inner.iter_mut().enumerate() {
            row[i] = row[i].clone() + prev_c.clone();
        }
        mk = matmul(m, &inner);
        let trace: S = (0..n).fold(S::zero(), |acc, i| acc + mk[i][i].clone());
        coeffs.push(-trace / S::from_i64(k as i64));
    }
    coeffs
}

pub fn matmul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Mat<S> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(S::zero(), |acc, l| acc + a[i][l].clone() * b[l][j].clone()))
                .collect()
        })
        .collect()
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn cross3<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Projective equality of two nonzero vectors (rank of the pair is 1).
pub fn proportional<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let n = a.len();
    if S::EXACT {
        rank(&[a.to_vec(), b.to_vec()], n) <= 1
    } else {
        let na = normalize_max(a);
        let nb = normalize_max(b);
        let same = na.iter().zip(&nb).all(|(x, y)| (x - y).abs() <= 1e-9);
        let opposite = na.iter().zip(&nb).all(|(x, y)| (x + y).abs() <= 1e-9);
        same || opposite
    }
}

/// Scales a vector so that its largest-magnitude entry is 1 (as `f64`).
pub fn normalize_max<S: Scalar>(a: &[S]) -> Vec<f64> {
    let f: Vec<f64> = a.iter().map(S::to_f64).collect();
    let (idx, _) = f
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
    let pivot = f[idx];
    if pivot == 0.0 {
        return f;
    }
    f.iter().map(|v| v / pivot).collect()
}

/// Two row spaces are equal.
pub fn same_span<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], ncols: usize) -> bool {
    let ra = rank(a, ncols);
    let rb = rank(b, ncols);
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    ra == rb && rank(&all, ncols) == ra
}

fn orthonormal_basis(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(ncols, rows.len(), |i, j| rows[j][i]);
    let svd = a.svd(true, false);
    let u = svd.u.expect("requested U");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_GAP * max)
        .collect();
    DMatrix::<f64>::from_fn(ncols, keep.len(), |i, j| u[(i, keep[j])])
}

/// Largest principal-angle sine between two row spaces; 1 if the
/// dimensions differ.
pub fn subspace_distance<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], ncols: usize) -> f64 {
    let qa = orthonormal_basis(&float_rows(a), ncols);
    let qb = orthonormal_basis(&float_rows(b), ncols);
    if qa.ncols() != qb.ncols() || qa.ncols() == 0 {
        return 1.0;
    }
    let prod = qa.transpose() * qb;
    let sv = prod.svd(false, false).singular_values;
    let min_cos = sv.iter().copied().fold(1.0, f64::min).clamp(0.0, 1.0);
    (1.0 - min_cos * min_cos).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Zero};

    fn r(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn exact_rank_and_nullspace() {
        let rows = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)], vec![r(0), r(1), r(1)]];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn float_rank_uses_gap() {
        let rows = vec![vec![1.0, 1.0, 0.0], vec![1.0, 1.0 + 1e-12, 0.0]];
        assert_eq!(rank(&rows, 3), 1);
        assert_eq!(nullspace(&rows, 3).len(), 2);
    }

    #[test]
    fn determinant_and_charpoly() {
        let m = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        assert_eq!(det(&m), r(5));
        assert_eq!(charpoly(&m), vec![r(1), r(-5), r(5)]);
    }

    #[test]
    fn inertia_exact_matches_float() {
        let m = vec![
            vec![r(0), r(1), r(0), r(0)],
            vec![r(1), r(0), r(0), r(0)],
            vec![r(0), r(0), r(2), r(0)],
            vec![r(0), r(0), r(0), r(0)],
        ];
        assert_eq!(inertia(&m), (2, 1, 1));
        let mf: Vec<Vec<f64>> = m.iter().map(|row| row.iter().map(|x| x.to_f64()).collect()).collect();
        assert_eq!(inertia(&mf), (2, 1, 1));
    }

    #[test]
    fn span_coordinates() {
        let basis = vec![vec![r(1), r(0), r(1)], vec![r(0), r(1), r(1)]];
        let c = coordinates_in_span(&basis, &[r(2), r(3), r(5)]).unwrap();
        assert_eq!(c, vec![r(2), r(3)]);
        assert!(coordinates_in_span(&basis, &[r(1), r(0), r(0)]).is_none());
    }

    #[test]
    fn subspace_distance_zero_for_equal_spans() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let b = vec![vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0]];
        assert!(subspace_distance(&a, &b, 3) < 1e-12);
        let c = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!((subspace_distance(&a, &c, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn least_singular_vector_finds_the_kernel() {
        // every row is orthogonal to (1, -2, 1); rows differ in scale
        let rows = vec![vec![1.0, 1.0, 1.0], vec![2e3, 1e3, 0.0], vec![0.0, 1e-3, 2e-3], vec![3.0, 2.0, 1.0]];
        let (v, smallest, second) = least_singular_vector(&rows, 3).unwrap();
        let k = v[0];
        assert!((v[1] + 2.0 * k).abs() < 1e-12 && (v[2] - k).abs() < 1e-12);
        assert!(smallest < 1e-14 && second > 1e-6);
        assert!(least_singular_vector(&rows[..2], 3).is_none());
    }

    #[test]
    fn rounding_residue_rows_do_not_raise_float_rank() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![1e-15, -2e-15, 0.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(rank(&rows, 3), 2);
    }
}
