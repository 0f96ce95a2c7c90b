//! Degree-zero Floer cohomology `HF^0(L(d1), L(d2))` with its basis of
//! fractional integral points, and the triangle product
//!
//! ```text
//! mu2(q_{b,j}, q_{a,i}) = sum_{s=0}^{k} binom(k, s) q_{a+b, i+j+s}
//! ```
//!
//! where `k` counts how often the triangle in the universal cover of the
//! base annulus covers a critical value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_base::{cp2_model, validate, ClassPManifold, FractionalPoint};
use crate::error::{Error, Result};
use crate::rational::{
    format_rational, half_integers_between, int, is_half_integer, ratio, Rational,
};

/// Which base the algebra lives over. `Cp2` uses the closed-form index
/// ranges and critical counts; `ClassP` derives both from the geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraModel {
    Cp2,
    ClassP(Box<ClassPManifold>),
}

impl AlgebraModel {
    pub fn class_p(m: ClassPManifold) -> Result<Self> {
        let violations = validate(&m);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidInstance(msg.join("; ")));
        }
        Ok(AlgebraModel::ClassP(Box::new(m)))
    }

    /// The underlying affine manifold.
    pub fn manifold(&self) -> ClassPManifold {
        match self {
            AlgebraModel::Cp2 => cp2_model(),
            AlgebraModel::ClassP(m) => (**m).clone(),
        }
    }

    /// Admissible `(a, i)` for morphisms `L(d1) -> L(d2)`, sorted.
    pub fn index_range(&self, d1: i64, d2: i64) -> Result<Vec<(i64, i64)>> {
        match self {
            AlgebraModel::Cp2 => index_range(d1, d2),
            AlgebraModel::ClassP(m) => {
                let n = denominator(d1, d2)?;
                Ok(crate::affine_base::fractional_points(m, n)
                    .into_iter()
                    .map(|p| (p.a, p.i))
                    .collect())
            }
        }
    }

    pub fn is_admissible(&self, v: &BasisVector) -> bool {
        let Ok(n) = denominator(v.d1, v.d2) else {
            return false;
        };
        match self {
            AlgebraModel::Cp2 => cp2_admissible(v.a, v.i, i64::from(n)),
            AlgebraModel::ClassP(m) => m.is_admissible(&FractionalPoint::new(v.a, v.i, n)),
        }
    }

    /// Total number of times product triangles for columns `a/n`, `b/m`
    /// cover critical values.
    pub fn critical_count(&self, a: i64, b: i64, n: u32, m: u32) -> Result<u64> {
        match self {
            AlgebraModel::Cp2 => Ok(k_value_cp2(a, b)),
            AlgebraModel::ClassP(man) => Ok(critical_cover_class_p(man, a, b, n, m)?.total()),
        }
    }

    pub fn basis(&self, d1: i64, d2: i64) -> Result<Vec<BasisVector>> {
        Ok(self
            .index_range(d1, d2)?
            .into_iter()
            .map(|(a, i)| BasisVector { d1, d2, a, i })
            .collect())
    }
}

fn denominator(d1: i64, d2: i64) -> Result<u32> {
    if d2 < d1 {
        return Err(Error::InvalidRange { d1, d2 });
    }
    u32::try_from(d2 - d1).map_err(|_| Error::InvalidRange { d1, d2 })
}

fn cp2_admissible(a: i64, i: i64, n: i64) -> bool {
    if n == 0 {
        return a == 0 && i == 0;
    }
    a.abs() <= n && i >= 0 && i <= (n - a.abs()) / 2
}

/// Admissible `(a, i)` on the projective-plane base for `L(d1) -> L(d2)`:
/// `|a| <= n`, `0 <= i <= floor((n - |a|)/2)` with `n = d2 - d1`. Only the
/// unit exists when `d1 == d2`.
pub fn index_range(d1: i64, d2: i64) -> Result<Vec<(i64, i64)>> {
    let n = i64::from(denominator(d1, d2)?);
    if n == 0 {
        return Ok(vec![(0, 0)]);
    }
    let mut out = Vec::new();
    for a in -n..=n {
        for i in 0..=(n - a.abs()) / 2 {
            out.push((a, i));
        }
    }
    Ok(out)
}

/// Number of critical values covered on the projective-plane base:
/// `min(|a|, |b|)` when `a` and `b` have strictly opposite signs, else 0.
pub fn k_value_cp2(a: i64, b: i64) -> u64 {
    if (a < 0 && b > 0) || (a > 0 && b < 0) {
        a.unsigned_abs().min(b.unsigned_abs())
    } else {
        0
    }
}

/// Per-singularity critical-value counts `k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalCover {
    pub counts: Vec<u64>,
}

impl CriticalCover {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// The product triangle in the universal cover of the base annulus, drawn
/// as heights over `eta`. `l(0)` sits at height 0, the lift of `l(n)`
/// through `q_{a,i}` is `a - n*eta`, and the lift of `l(n+m)` through
/// `q_{b,j}` is `a + b - (n+m)*eta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseTriangle {
    /// `l(0) ∩ l(n)`, `l(n) ∩ l(n+m)`, `l(0) ∩ l(n+m)` as `(eta, height)`.
    pub vertices: [(Rational, Rational); 3],
}

impl BaseTriangle {
    pub fn new(a: i64, b: i64, n: u32, m: u32) -> Self {
        let (n, m) = (i64::from(n), i64::from(m));
        let first = ratio(a, n);
        let second = ratio(b, m);
        let second_height = int(a) - int(n) * &second;
        let output = ratio(a + b, n + m);
        Self {
            vertices: [(first, int(0)), (second, second_height), (output, int(0))],
        }
    }

    /// Vertical cross-section `[lo, hi]` at `eta`, if the triangle meets
    /// that line.
    pub fn cross_section(&self, eta: &Rational) -> Option<(Rational, Rational)> {
        let mut heights = Vec::new();
        for k in 0..3 {
            let (e0, h0) = &self.vertices[k];
            let (e1, h1) = &self.vertices[(k + 1) % 3];
            let (lo, hi) = if e0 <= e1 { (e0, e1) } else { (e1, e0) };
            if eta < lo || eta > hi {
                continue;
            }
            if e0 == e1 {
                heights.push(h0.clone());
                heights.push(h1.clone());
            } else {
                let t = (eta - e0) / (e1 - e0);
                heights.push(h0 + t * (h1 - h0));
            }
        }
        let lo = heights.iter().min()?.clone();
        let hi = heights.iter().max()?.clone();
        Some((lo, hi))
    }
}

/// Critical-value counts for a general class-P base: the product triangle's
/// cross-section over each singular line `eta = c` is intersected with the
/// critical heights `Z + 1/2`, once per merged focus-focus point.
pub fn critical_cover_class_p(
    man: &ClassPManifold,
    a: i64,
    b: i64,
    n: u32,
    m: u32,
) -> Result<CriticalCover> {
    if n == 0 || m == 0 {
        return Ok(CriticalCover {
            counts: vec![0; man.singularities.len()],
        });
    }
    for (col, d) in [(a, n), (b, m), (a + b, n + m)] {
        if man.column_depth(col, d).is_none() {
            return Err(Error::Inadmissible {
                a: col,
                i: 0,
                d: i64::from(d),
            });
        }
    }
    let tri = BaseTriangle::new(a, b, n, m);
    let mut counts = Vec::with_capacity(man.singularities.len());
    for s in &man.singularities {
        let k = match tri.cross_section(&s.eta) {
            None => 0,
            Some((lo, hi)) => {
                for end in [&lo, &hi] {
                    if is_half_integer(end) {
                        return Err(Error::NonGeneric(format_rational(end)));
                    }
                }
                half_integers_between(&lo, &hi) * u64::from(s.multiplicity)
            }
        };
        counts.push(k);
    }
    Ok(CriticalCover { counts })
}

/// Basis element `q_{a,i}` of `HF^0(L(d1), L(d2))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisVector {
    pub d1: i64,
    pub d2: i64,
    pub a: i64,
    pub i: i64,
}

impl BasisVector {
    pub fn new(d1: i64, d2: i64, a: i64, i: i64) -> Self {
        Self { d1, d2, a, i }
    }

    pub fn unit(d: i64) -> Self {
        Self {
            d1: d,
            d2: d,
            a: 0,
            i: 0,
        }
    }

    pub fn n(&self) -> i64 {
        self.d2 - self.d1
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q({},{})@({},{})", self.a, self.i, self.d1, self.d2)
    }
}

/// Integer combination of basis vectors sharing `(d1, d2)`. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum {
    pub d1: i64,
    pub d2: i64,
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl FormalSum {
    pub fn zero(d1: i64, d2: i64) -> Self {
        Self {
            d1,
            d2,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(v: BasisVector) -> Self {
        let mut s = Self::zero(v.d1, v.d2);
        s.add_term(v.a, v.i, BigInt::one());
        s
    }

    pub fn unit(d: i64) -> Self {
        Self::basis(BasisVector::unit(d))
    }

    pub fn add_term(&mut self, a: i64, i: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, i)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, i));
        }
    }

    pub fn add_assign(&mut self, other: &FormalSum) {
        debug_assert_eq!((self.d1, self.d2), (other.d1, other.d2));
        for (&(a, i), c) in &other.terms {
            self.add_term(a, i, c.clone());
        }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.d1, self.d2);
        for (&(a, i), x) in &self.terms {
            out.add_term(a, i, x * c);
        }
        out
    }

    pub fn coefficient(&self, a: i64, i: i64) -> BigInt {
        self.terms
            .get(&(a, i))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisVector, &BigInt)> + '_ {
        self.terms
            .iter()
            .map(move |(&(a, i), c)| (BasisVector::new(self.d1, self.d2, a, i), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient map keyed by `(a, i)`.
    pub fn coefficients(&self) -> &BTreeMap<(i64, i64), BigInt> {
        &self.terms
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((a, i), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "q({a},{i})")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    a: i64,
    i: i64,
    c: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct FormalSumJson {
    d1: i64,
    d2: i64,
    terms: Vec<TermJson>,
}

pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match i64::try_from(c) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("coefficient {n} is not an integer")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad coefficient {s:?}")),
        other => Err(format!("bad coefficient {other}")),
    }
}

impl Serialize for FormalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormalSumJson {
            d1: self.d1,
            d2: self.d2,
            terms: self
                .terms
                .iter()
                .map(|(&(a, i), c)| TermJson {
                    a,
                    i,
                    c: bigint_to_json(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FormalSumJson::deserialize(d)?;
        let mut out = FormalSum::zero(raw.d1, raw.d2);
        for t in raw.terms {
            let c = bigint_from_json(&t.c).map_err(serde::de::Error::custom)?;
            out.add_term(t.a, t.i, c);
        }
        Ok(out)
    }
}

fn check_integral_top(man: &ClassPManifold) -> Result<()> {
    match man.top_line() {
        Some((slope, offset)) if slope.is_integer() && offset.is_integer() => Ok(()),
        _ => Err(Error::InvalidInstance(
            "products need the top boundary to be a single integral line".into(),
        )),
    }
}

/// Triangle product `mu2(q2, q1)` for `q1: L(d1) -> L(d2)` and
/// `q2: L(d2) -> L(d3)`. All signs are positive.
pub fn mu2(model: &AlgebraModel, q2: &BasisVector, q1: &BasisVector) -> Result<FormalSum> {
    if q1.d2 != q2.d1 {
        return Err(Error::NotComposable {
            first_end: q1.d2,
            second_start: q2.d1,
        });
    }
    for q in [q1, q2] {
        denominator(q.d1, q.d2)?;
        if !model.is_admissible(q) {
            return Err(Error::Inadmissible {
                a: q.a,
                i: q.i,
                d: q.n(),
            });
        }
    }
    let (d1, d3) = (q1.d1, q2.d2);
    if q1.n() == 0 {
        return Ok(FormalSum::basis(BasisVector::new(d1, d3, q2.a, q2.i)));
    }
    if q2.n() == 0 {
        return Ok(FormalSum::basis(BasisVector::new(d1, d3, q1.a, q1.i)));
    }
    if let AlgebraModel::ClassP(man) = model {
        check_integral_top(man)?;
    }
    let (n, m) = (q1.n() as u32, q2.n() as u32);
    let k = model.critical_count(q1.a, q2.a, n, m)?;
    let mut out = FormalSum::zero(d1, d3);
    let k_big = BigInt::from(k);
    for s in 0..=k {
        let v = BasisVector::new(d1, d3, q1.a + q2.a, q1.i + q2.i + s as i64);
        if !model.is_admissible(&v) {
            return Err(Error::OutputNotAdmissible {
                a: v.a,
                i: v.i,
                d: v.n(),
            });
        }
        out.add_term(v.a, v.i, binomial(k_big.clone(), BigInt::from(s)));
    }
    Ok(out)
}

/// Ring product `x * y = mu2(y, x)` extended bilinearly, for
/// `x: L(d1) -> L(d2)` and `y: L(d2) -> L(d3)`. Degree-zero inputs carry no
/// sign.
pub fn ring_product(model: &AlgebraModel, x: &FormalSum, y: &FormalSum) -> Result<FormalSum> {
    if x.d2 != y.d1 {
        return Err(Error::NotComposable {
            first_end: x.d2,
            second_start: y.d1,
        });
    }
    let mut out = FormalSum::zero(x.d1, y.d2);
    for (qx, cx) in x.terms() {
        for (qy, cy) in y.terms() {
            let prod = mu2(model, &qy, &qx)?;
            out.add_assign(&prod.scaled(&(cx * cy)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_base::{cp2_model, dp6_model, Dp6Params};

    fn bv(d1: i64, d2: i64, a: i64, i: i64) -> BasisVector {
        BasisVector::new(d1, d2, a, i)
    }

    fn sum(d1: i64, d2: i64, terms: &[(i64, i64, i64)]) -> FormalSum {
        let mut s = FormalSum::zero(d1, d2);
        for &(a, i, c) in terms {
            s.add_term(a, i, BigInt::from(c));
        }
        s
    }

    #[test]
    fn index_ranges() {
        assert_eq!(index_range(0, 1).unwrap(), vec![(-1, 0), (0, 0), (1, 0)]);
        let central: Vec<_> = index_range(0, 2)
            .unwrap()
            .into_iter()
            .filter(|p| p.0 == 0)
            .collect();
        assert_eq!(central, vec![(0, 0), (0, 1)]);
        assert_eq!(index_range(3, 4).unwrap(), index_range(0, 1).unwrap());
        assert_eq!(index_range(2, 2).unwrap(), vec![(0, 0)]);
        assert!(index_range(4, 3).is_err());
        let general = AlgebraModel::ClassP(Box::new(cp2_model()));
        for n in 0..8 {
            assert_eq!(
                general.index_range(5, 5 + n).unwrap(),
                index_range(0, n).unwrap()
            );
        }
    }

    #[test]
    fn k_values() {
        assert_eq!(k_value_cp2(-1, 2), 1);
        assert_eq!(k_value_cp2(1, 2), 0);
        assert_eq!(k_value_cp2(0, -7), 0);
        assert_eq!(k_value_cp2(3, -2), 2);
        assert_eq!(k_value_cp2(-4, -2), 0);
    }

    #[test]
    fn geometric_cover_reduces_to_closed_form() {
        let m = cp2_model();
        assert_eq!(
            critical_cover_class_p(&m, -1, 2, 3, 5).unwrap().counts,
            vec![1]
        );
        assert_eq!(
            critical_cover_class_p(&m, -2, 2, 2, 2).unwrap().counts,
            vec![2]
        );
        for n in 1..=8u32 {
            for m_ in 1..=8u32 {
                for a in -(n as i64)..=n as i64 {
                    for b in -(m_ as i64)..=m_ as i64 {
                        let k = critical_cover_class_p(&m, a, b, n, m_).unwrap();
                        assert_eq!(k.total(), k_value_cp2(a, b), "a={a} b={b} n={n} m={m_}");
                    }
                }
            }
        }
    }

    #[test]
    fn cover_rejects_missing_columns() {
        assert!(critical_cover_class_p(&cp2_model(), 3, 0, 2, 1).is_err());
    }

    #[test]
    fn headline_products() {
        let cp2 = AlgebraModel::Cp2;
        // x * z = y^2 + p
        assert_eq!(
            mu2(&cp2, &bv(1, 2, 1, 0), &bv(0, 1, -1, 0)).unwrap(),
            sum(0, 2, &[(0, 0, 1), (0, 1, 1)])
        );
        // x^2 * z^2 = y^4 + 2 y^2 p + p^2
        assert_eq!(
            mu2(&cp2, &bv(2, 4, 2, 0), &bv(0, 2, -2, 0)).unwrap(),
            sum(0, 4, &[(0, 0, 1), (0, 1, 2), (0, 2, 1)])
        );
        // y * y = y^2
        assert_eq!(
            mu2(&cp2, &bv(1, 2, 0, 0), &bv(0, 1, 0, 0)).unwrap(),
            sum(0, 2, &[(0, 0, 1)])
        );
    }

    #[test]
    fn product_errors() {
        let cp2 = AlgebraModel::Cp2;
        assert!(matches!(
            mu2(&cp2, &bv(2, 3, 0, 0), &bv(0, 1, 0, 0)),
            Err(Error::NotComposable { .. })
        ));
        assert!(matches!(
            mu2(&cp2, &bv(1, 2, 0, 1), &bv(0, 1, 0, 0)),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn ring_product_laws() {
        let cp2 = AlgebraModel::Cp2;
        let x = FormalSum::basis(bv(0, 1, -1, 0));
        let z = FormalSum::basis(bv(1, 2, 1, 0));
        assert_eq!(
            ring_product(&cp2, &x, &z).unwrap(),
            sum(0, 2, &[(0, 0, 1), (0, 1, 1)])
        );
        assert_eq!(ring_product(&cp2, &FormalSum::unit(0), &x).unwrap(), x);
        assert_eq!(ring_product(&cp2, &x, &FormalSum::unit(1)).unwrap(), x);
        let lhs = ring_product(
            &cp2,
            &x.scaled(&BigInt::from(2)),
            &z.scaled(&BigInt::from(3)),
        )
        .unwrap();
        let rhs = ring_product(&cp2, &x, &z).unwrap().scaled(&BigInt::from(6));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn general_model_matches_closed_form_on_cp2() {
        let closed = AlgebraModel::Cp2;
        let general = AlgebraModel::class_p(cp2_model()).unwrap();
        for n in 1..=4 {
            for m in 1..=4 {
                for q1 in closed.basis(0, n).unwrap() {
                    for q2 in closed.basis(n, n + m).unwrap() {
                        assert_eq!(
                            mu2(&closed, &q2, &q1).unwrap(),
                            mu2(&general, &q2, &q1).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dp6_products_are_closed_or_flagged() {
        let model = AlgebraModel::class_p(dp6_model(Dp6Params::default()).unwrap()).unwrap();
        let mut computed = 0;
        for q1 in model.basis(0, 1).unwrap() {
            for q2 in model.basis(1, 2).unwrap() {
                match mu2(&model, &q2, &q1) {
                    Ok(s) => {
                        computed += 1;
                        for (v, c) in s.terms() {
                            assert!(model.is_admissible(&v));
                            assert!(c.is_positive());
                            assert_eq!(v.a, q1.a + q2.a);
                        }
                    }
                    Err(e) => assert!(matches!(e, Error::OutputNotAdmissible { .. }), "{e}"),
                }
            }
        }
        assert!(computed > 0);
    }

    #[test]
    fn formal_sum_json() {
        let s = sum(0, 4, &[(0, 0, 1), (0, 1, 2), (0, 2, 1)]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"d1":0,"d2":4,"terms":[{"a":0,"i":0,"c":1},{"a":0,"i":1,"c":2},{"a":0,"i":2,"c":1}]}"#
        );
        assert_eq!(serde_json::from_str::<FormalSum>(&j).unwrap(), s);
        assert_eq!(s.to_string(), "q(0,0) + 2*q(0,1) + q(0,2)");
    }
}
