//! Bihomogeneous polynomials on P¹ × P¹ with scalar or quaternion
//! coefficients.
//!
//! `BiPoly` of bidegree `(ds, dt)` stores `c[i][j]` as the coefficient of
//! `s0^(ds−i) s1^i t0^(dt−j) t1^j`.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::scalar::Scalar;

/// Coefficient ring of a polynomial.
pub trait Ring: Clone + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
}

impl<S: Scalar> Ring for S {
    fn zero() -> Self {
        <S as num_traits::Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        <S as num_traits::Zero>::is_zero(self)
    }
}

impl<S: Scalar> Ring for Quaternion<S> {
    fn zero() -> Self {
        Quaternion::zero()
    }
    fn is_zero(&self) -> bool {
        Quaternion::is_zero(self)
    }
}

/// A point of P¹ given by homogeneous coordinates.
pub type P1<S> = [S; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<C>>", into = "Vec<Vec<C>>")]
#[serde(bound(serialize = "C: Serialize + Clone", deserialize = "C: Deserialize<'de>"))]
pub struct BiPoly<C> {
    pub c: Vec<Vec<C>>,
}

impl<C> From<Vec<Vec<C>>> for BiPoly<C> {
    fn from(c: Vec<Vec<C>>) -> Self {
        BiPoly { c }
    }
}

impl<C> From<BiPoly<C>> for Vec<Vec<C>> {
    fn from(p: BiPoly<C>) -> Self {
        p.c
    }
}

fn powers<S: Scalar>(x: &P1<S>, deg: usize) -> Vec<S> {
    // x0^(deg−i) x1^i
    (0..=deg)
        .map(|i| {
            let mut v = S::one();
            for _ in 0..deg - i {
                v = v * x[0].clone();
            }
            for _ in 0..i {
                v = v * x[1].clone();
            }
            v
        })
        .collect()
}

impl<C: Ring> BiPoly<C> {
    pub fn zeros(ds: usize, dt: usize) -> Self {
        BiPoly { c: vec![vec![C::zero(); dt + 1]; ds + 1] }
    }

    pub fn deg_s(&self) -> usize {
        self.c.len() - 1
    }

    pub fn deg_t(&self) -> usize {
        self.c[0].len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(|x| x.is_zero())
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &C> {
        self.c.iter().flatten()
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        BiPoly { c: self.c.iter().map(|row| row.iter().map(&f).collect()).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        BiPoly {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| f(a, b)).collect())
                .collect(),
        }
    }

    /// Polynomial product with coefficient product `mul`.
    pub fn mul_with<D: Ring, E: Ring>(&self, other: &BiPoly<D>, mul: impl Fn(&C, &D) -> E) -> BiPoly<E> {
        let (ds, dt) = (self.deg_s() + other.deg_s(), self.deg_t() + other.deg_t());
        let mut out = BiPoly::<E>::zeros(ds, dt);
        for (i, row) in self.c.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, row2) in other.c.iter().enumerate() {
                    for (l, b) in row2.iter().enumerate() {
                        let prod = mul(a, b);
                        out.c[i + k][j + l] = out.c[i + k][j + l].clone() + prod;
                    }
                }
            }
        }
        out
    }
}

impl<C: Ring> Add for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, rhs: Self) -> BiPoly<C> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<C: Ring> Sub for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn sub(self, rhs: Self) -> BiPoly<C> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<C: Ring> Mul for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, rhs: Self) -> BiPoly<C> {
        self.mul_with(rhs, |a, b| a.clone() * b.clone())
    }
}

impl<S: Scalar> BiPoly<S> {
    pub fn scale(&self, k: &S) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn eval(&self, s: &P1<S>, t: &P1<S>) -> S {
        let ps = powers(s, self.deg_s());
        let pt = powers(t, self.deg_t());
        let mut acc = S::zero();
        for (i, row) in self.c.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                acc = acc + x.clone() * ps[i].clone() * pt[j].clone();
            }
        }
        acc
    }

    /// Binary form in `t` obtained by fixing `s`.
    pub fn at_s(&self, s: &P1<S>) -> Vec<S> {
        let ps = powers(s, self.deg_s());
        (0..=self.deg_t())
            .map(|j| (0..=self.deg_s()).fold(S::zero(), |acc, i| acc + self.c[i][j].clone() * ps[i].clone()))
            .collect()
    }

    /// Binary form in `s` obtained by fixing `t`.
    pub fn at_t(&self, t: &P1<S>) -> Vec<S> {
        let pt = powers(t, self.deg_t());
        (0..=self.deg_s())
            .map(|i| (0..=self.deg_t()).fold(S::zero(), |acc, j| acc + self.c[i][j].clone() * pt[j].clone()))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> BiPoly<Quaternion<S>> {
    pub fn conj(&self) -> Self {
        self.map(Quaternion::conj)
    }

    pub fn eval(&self, s: &P1<S>, t: &P1<S>) -> Quaternion<S> {
        let ps = powers(s, self.deg_s());
        let pt = powers(t, self.deg_t());
        let mut acc = Quaternion::zero();
        for (i, row) in self.c.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                acc = &acc + &x.scale(&(ps[i].clone() * pt[j].clone()));
            }
        }
        acc
    }

    /// Scalar polynomial of one quaternion component (0 = real part).
    pub fn component(&self, k: usize) -> BiPoly<S> {
        self.map(|q| q.coeffs()[k].clone())
    }

    /// `Σ` of componentwise products: the polynomial `Re(self · conj(other))`.
    pub fn dot(&self, other: &Self) -> BiPoly<S> {
        self.mul_with(other, |a, b| a.dot(b))
    }
}

/// Evaluates a binary form `Σ f_i x0^(d−i) x1^i`.
pub fn eval_binary<S: Scalar>(f: &[S], x: &P1<S>) -> S {
    let p = powers(x, f.len() - 1);
    f.iter().zip(p).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
}
