//! The Picard lattice `⟨α₀, …, α₅⟩` of a quartic weak del Pezzo surface,
//! with `α₀² = 1`, `αᵢ² = −1` and `αᵢ·αⱼ = 0` for `i ≠ j`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates `(a₀, …, a₅)`; serialized as six integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub [i64; 6]);

impl DivisorClass {
    pub fn alpha(i: usize) -> Self {
        let mut a = [0; 6];
        a[i] = 1;
        DivisorClass(a)
    }

    /// `−κ = 3α₀ − α₁ − … − α₅`, the hyperplane class.
    pub fn minus_kappa() -> Self {
        DivisorClass([3, -1, -1, -1, -1, -1])
    }

    /// `α₀ − αᵢ`.
    pub fn line_conic(i: usize) -> Self {
        assert!((1..=5).contains(&i));
        DivisorClass::alpha(0) - DivisorClass::alpha(i)
    }

    /// `2α₀ + αᵢ − α₁ − … − α₅`.
    pub fn quadric_conic(i: usize) -> Self {
        assert!((1..=5).contains(&i));
        DivisorClass([2, -1, -1, -1, -1, -1]) + DivisorClass::alpha(i)
    }

    pub fn self_pairing(&self) -> i64 {
        pair(self, self)
    }

    pub fn degree(&self) -> i64 {
        pair(self, &DivisorClass::minus_kappa())
    }

    pub fn is_conic(&self) -> bool {
        self.self_pairing() == 0 && self.degree() == 2
    }

    /// The class `c' = −κ − c`, with `c·c' = 2`: `α₀ − αᵢ ↔ 2α₀ + αᵢ − Σαⱼ`.
    pub fn partner(&self) -> Option<Self> {
        let partner = DivisorClass::minus_kappa() - *self;
        (self.is_conic() && partner.is_conic()).then_some(partner)
    }
}

impl std::ops::Add for DivisorClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DivisorClass(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl std::ops::Sub for DivisorClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        DivisorClass(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl std::ops::Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, c: DivisorClass) -> DivisorClass {
        DivisorClass(c.0.map(|a| self * a))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sign = if a < 0 { "-" } else if first { "" } else { "+" };
            let mag = if a.abs() == 1 { String::new() } else { a.abs().to_string() };
            write!(f, "{sign}{mag}a{i}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `a₀b₀ − Σ_{i≥1} aᵢbᵢ`.
pub fn pair(c: &DivisorClass, d: &DivisorClass) -> i64 {
    c.0[0] * d.0[0] - (1..6).map(|i| c.0[i] * d.0[i]).sum::<i64>()
}

pub const SEARCH_BOX: i64 = 3;

fn box_classes(bound: i64) -> impl Iterator<Item = DivisorClass> {
    let side = (2 * bound + 1) as usize;
    (0..side.pow(6)).map(move |mut n| {
        let mut a = [0i64; 6];
        for slot in a.iter_mut().rev() {
            *slot = (n % side) as i64 - bound;
            n /= side;
        }
        DivisorClass(a)
    })
}

/// All conic classes (`c·c = 0`, `c·(−κ) = 2`) in the box `|aᵢ| ≤ 3`,
/// sorted lexicographically, together with whether any lies on the box
/// boundary.
pub fn conic_classes_certified() -> (Vec<DivisorClass>, bool) {
    let found: Vec<DivisorClass> = box_classes(SEARCH_BOX).filter(DivisorClass::is_conic).collect();
    let touches = found.iter().any(|c| c.0.iter().any(|a| a.abs() == SEARCH_BOX));
    (found, touches)
}

pub fn conic_classes() -> Vec<DivisorClass> {
    conic_classes_certified().0
}

/// Multisets of four conic classes (each sorted) summing to `−2κ`, in
/// lexicographic order.
pub fn decompositions_of_minus_2kappa() -> Vec<[DivisorClass; 4]> {
    let classes = conic_classes();
    let target = 2 * DivisorClass::minus_kappa();
    let n = classes.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                for d in c..n {
                    let sum = classes[a] + classes[b] + classes[c] + classes[d];
                    if sum == target {
                        out.push([classes[a], classes[b], classes[c], classes[d]]);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    pub c: DivisorClass,
    pub d: DivisorClass,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub pairs: Vec<PairEntry>,
    pub summary: BTreeMap<i64, usize>,
}

impl Census {
    pub fn count(&self, value: i64) -> usize {
        self.summary.get(&value).copied().unwrap_or(0)
    }
}

/// Pairing values over all unordered pairs of distinct classes. Input
/// order is ignored; classes are deduplicated and sorted.
pub fn pair_product_census(classes: &[DivisorClass]) -> Result<Census> {
    if let Some(bad) = classes.iter().find(|c| !c.is_conic()) {
        return Err(Error::NotAConicClass(bad.0));
    }
    let mut cs = classes.to_vec();
    cs.sort();
    cs.dedup();
    let mut pairs = Vec::new();
    let mut summary: BTreeMap<i64, usize> = (0..=2).map(|v| (v, 0)).collect();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let value = pair(&cs[i], &cs[j]);
            *summary.entry(value).or_default() += 1;
            pairs.push(PairEntry { c: cs[i], d: cs[j], value });
        }
    }
    Ok(Census { pairs, summary })
}
