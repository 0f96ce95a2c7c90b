//! Wrapped Floer cohomology of the sections in the complements of a line
//! (case L), a conic (case C) and a line plus a conic (case D).
//!
//! Generators are points `q_{a,i}` of the completed base. The column index
//! `a` is unbounded; the depth `i` is bounded below in case L, above in
//! case C and unbounded in case D. Each point corresponds to the Laurent
//! monomial `x^{-a} p^i y^{d+a-2i}` (`a <= 0`) or `z^a p^i y^{d-a-2i}`
//! (`a > 0`), and products follow the same binomial rule as the compact
//! case.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::affine_base::RationalPoint;
use crate::coordinate_ring::{expand_in_qbasis, multiply, HomogeneousPolynomial};
use crate::error::{Error, Result};
use crate::floer_algebra::{k_value_cp2, BasisVector, FormalSum};
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplementCase {
    L,
    C,
    D,
}

impl ComplementCase {
    pub const ALL: [ComplementCase; 3] = [ComplementCase::L, ComplementCase::C, ComplementCase::D];

    /// Wrapping levels must be multiples of this.
    pub fn wrap_step(self) -> i64 {
        match self {
            ComplementCase::L => 1,
            ComplementCase::C => 2,
            ComplementCase::D => 3,
        }
    }

    pub fn tag(self) -> char {
        match self {
            ComplementCase::L => 'L',
            ComplementCase::C => 'C',
            ComplementCase::D => 'D',
        }
    }

    /// Depth of `e_r` for a valid level `r`.
    fn unit_depth(self, r: i64) -> i64 {
        match self {
            ComplementCase::L => 0,
            ComplementCase::C => r / 2,
            ComplementCase::D => r / 3,
        }
    }

    pub fn allows(self, a: i64, i: i64, d: u32) -> bool {
        match self {
            ComplementCase::L => i >= 0,
            ComplementCase::C => i <= Integer::div_floor(&(i64::from(d) - a.abs()), &2),
            ComplementCase::D => true,
        }
    }
}

impl fmt::Display for ComplementCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl std::str::FromStr for ComplementCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(ComplementCase::L),
            "C" | "c" => Ok(ComplementCase::C),
            "D" | "d" => Ok(ComplementCase::D),
            other => Err(Error::Parse(format!("unknown complement case {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedPoint {
    pub a: i64,
    pub i: i64,
    pub d: u32,
    pub case: ComplementCase,
}

impl ExtendedPoint {
    pub fn new(case: ComplementCase, a: i64, i: i64, d: u32) -> Result<Self> {
        if case.allows(a, i, d) {
            Ok(Self { a, i, d, case })
        } else {
            Err(Error::InvalidWrappedIndex {
                a,
                i,
                d: i64::from(d),
                case: case.tag(),
            })
        }
    }

    /// Chart position `(a/d, -i/d)`; undefined for `d = 0`.
    pub fn position(&self) -> Option<RationalPoint> {
        (self.d > 0).then(|| {
            let d = i64::from(self.d);
            RationalPoint::new(ratio(self.a, d), ratio(-self.i, d))
        })
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q({},{})@{}[{}]", self.a, self.i, self.d, self.case)
    }
}

/// Truncation of the infinite bases: `|a| <= a_max`, `|i| <= i_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub a_max: u32,
    pub i_max: u32,
}

impl Window {
    pub fn new(a_max: u32, i_max: u32) -> Self {
        Self { a_max, i_max }
    }

    pub fn contains(&self, a: i64, i: i64) -> bool {
        a.unsigned_abs() <= u64::from(self.a_max) && i.unsigned_abs() <= u64::from(self.i_max)
    }
}

/// Windowed generators of `HW(L(0), L(d))`, sorted by `(a, i)`.
pub fn wrapped_basis(case: ComplementCase, d: u32, window: Window) -> Vec<ExtendedPoint> {
    let (am, im) = (i64::from(window.a_max), i64::from(window.i_max));
    let mut out = Vec::new();
    for a in -am..=am {
        for i in -im..=im {
            if case.allows(a, i, d) {
                out.push(ExtendedPoint { a, i, d, case });
            }
        }
    }
    out
}

/// `x^{x_exp} z^{z_exp} y^{y_exp} p^{p_exp}` with at most one of `x`, `z`
/// present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentElement {
    pub x_exp: u32,
    pub z_exp: u32,
    pub y_exp: i64,
    pub p_exp: i64,
    pub degree: u32,
}

impl LaurentElement {
    pub fn one() -> Self {
        Self {
            x_exp: 0,
            z_exp: 0,
            y_exp: 0,
            p_exp: 0,
            degree: 0,
        }
    }

    /// The polynomial `y^N p^M` times this element, where `N`, `M` are the
    /// smallest shifts clearing negative exponents.
    fn cleared(&self) -> (HomogeneousPolynomial, u32) {
        let n = (-self.y_exp).max(0) as u32;
        let m = (-self.p_exp).max(0) as u32;
        let mono = HomogeneousPolynomial::monomial((self.x_exp, 0, self.z_exp), BigInt::one());
        let y = HomogeneousPolynomial::y().pow((self.y_exp + i64::from(n)) as u32);
        let p = HomogeneousPolynomial::p().pow((self.p_exp + i64::from(m)) as u32);
        (multiply(&multiply(&mono, &y), &p), m)
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [
            ("x", i64::from(self.x_exp)),
            ("z", i64::from(self.z_exp)),
            ("p", self.p_exp),
            ("y", self.y_exp),
        ] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// The Laurent monomial attached to `point`.
pub fn rational_function(point: &ExtendedPoint) -> Result<LaurentElement> {
    let ExtendedPoint { a, i, d, case } = *point;
    if !case.allows(a, i, d) {
        return Err(Error::InvalidWrappedIndex {
            a,
            i,
            d: i64::from(d),
            case: case.tag(),
        });
    }
    let dd = i64::from(d);
    let (x_exp, z_exp, y_exp) = if a <= 0 {
        ((-a) as u32, 0, dd + a - 2 * i)
    } else {
        (0, a as u32, dd - a - 2 * i)
    };
    Ok(LaurentElement {
        x_exp,
        z_exp,
        y_exp,
        p_exp: i,
        degree: d,
    })
}

/// Inverse of [`rational_function`], checking the case's sign pattern.
pub fn point_of(case: ComplementCase, f: &LaurentElement) -> Result<ExtendedPoint> {
    if f.x_exp > 0 && f.z_exp > 0 {
        return Err(Error::Domain(format!("{f} mixes x and z")));
    }
    let a = i64::from(f.z_exp) - i64::from(f.x_exp);
    let total = i64::from(f.x_exp) + i64::from(f.z_exp) + f.y_exp + 2 * f.p_exp;
    if total != i64::from(f.degree) {
        return Err(Error::Domain(format!(
            "{f} is not homogeneous of degree {}",
            f.degree
        )));
    }
    ExtendedPoint::new(case, a, f.p_exp, f.degree)
}

/// Product of two Laurent monomials in the localized ring, expanded in the
/// Laurent `Q` basis: clear denominators by `y^N p^M`, multiply and expand in
/// the polynomial ring, then divide back. Dividing `Q_{a,i}` of degree
/// `D + N + 2M` by `y^N p^M` gives the Laurent element with indices
/// `(a, i - M)` in degree `D`.
pub fn laurent_product(
    case: ComplementCase,
    f1: &LaurentElement,
    f2: &LaurentElement,
) -> Result<BTreeMap<ExtendedPoint, BigInt>> {
    let (p1, m1) = f1.cleared();
    let (p2, m2) = f2.cleared();
    let shift_p = i64::from(m1 + m2);
    let degree = f1.degree + f2.degree;
    let mut out = BTreeMap::new();
    for (q, c) in expand_in_qbasis(&multiply(&p1, &p2))? {
        let point = ExtendedPoint::new(case, q.a, q.i - shift_p, degree)?;
        out.insert(point, c);
    }
    Ok(out)
}

/// Wrapped morphisms sharing the case and `(d1, d2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrappedSum {
    pub case: ComplementCase,
    #[serde(flatten)]
    pub sum: FormalSum,
}

impl WrappedSum {
    pub fn points(&self) -> impl Iterator<Item = (ExtendedPoint, &BigInt)> + '_ {
        let d = (self.sum.d2 - self.sum.d1) as u32;
        self.sum.terms().map(move |(v, c)| {
            (
                ExtendedPoint {
                    a: v.a,
                    i: v.i,
                    d,
                    case: self.case,
                },
                c,
            )
        })
    }
}

fn check_wrapped(case: ComplementCase, q: &BasisVector) -> Result<u32> {
    if q.d2 < q.d1 {
        return Err(Error::InvalidRange { d1: q.d1, d2: q.d2 });
    }
    let d = u32::try_from(q.d2 - q.d1).map_err(|_| Error::InvalidRange { d1: q.d1, d2: q.d2 })?;
    if !case.allows(q.a, q.i, d) {
        return Err(Error::InvalidWrappedIndex {
            a: q.a,
            i: q.i,
            d: i64::from(d),
            case: case.tag(),
        });
    }
    Ok(d)
}

/// `mu2(q2, q1) = Σ_s binom(k, s) q_{a+b, i+j+s}` on the completed base.
pub fn wrapped_product(
    case: ComplementCase,
    q2: &BasisVector,
    q1: &BasisVector,
) -> Result<WrappedSum> {
    if q1.d2 != q2.d1 {
        return Err(Error::NotComposable {
            first_end: q1.d2,
            second_start: q2.d1,
        });
    }
    check_wrapped(case, q1)?;
    check_wrapped(case, q2)?;
    let k = k_value_cp2(q1.a, q2.a);
    let d = (q2.d2 - q1.d1) as u32;
    let mut sum = FormalSum::zero(q1.d1, q2.d2);
    let kb = BigInt::from(k);
    for s in 0..=k {
        let (a, i) = (q1.a + q2.a, q1.i + q2.i + s as i64);
        if !case.allows(a, i, d) {
            return Err(Error::InvalidWrappedIndex {
                a,
                i,
                d: i64::from(d),
                case: case.tag(),
            });
        }
        sum.add_term(a, i, binomial(kb.clone(), BigInt::from(s)));
    }
    Ok(WrappedSum { case, sum })
}

/// [`wrapped_product`] that refuses outputs outside `window`.
pub fn wrapped_product_in_window(
    case: ComplementCase,
    q2: &BasisVector,
    q1: &BasisVector,
    window: Window,
) -> Result<WrappedSum> {
    let out = wrapped_product(case, q2, q1)?;
    for (p, _) in out.points() {
        if !window.contains(p.a, p.i) {
            return Err(Error::WindowTooSmall {
                a: p.a,
                i: p.i,
                d: i64::from(p.d),
            });
        }
    }
    Ok(out)
}

fn check_level(case: ComplementCase, r: i64) -> Result<()> {
    if r <= 0 || r % case.wrap_step() != 0 {
        return Err(Error::BadWrapLevel(r, case.wrap_step()));
    }
    Ok(())
}

/// The distinguished generator `e_r` at the minimum of the Hamiltonian,
/// with its Laurent image `y^r`, `p^{r/2}` or `(yp)^{r/3}`.
pub fn e_element(case: ComplementCase, r: i64) -> Result<(ExtendedPoint, LaurentElement)> {
    check_level(case, r)?;
    let d = u32::try_from(r).map_err(|_| Error::BadWrapLevel(r, case.wrap_step()))?;
    let point = ExtendedPoint::new(case, 0, case.unit_depth(r), d)?;
    let f = rational_function(&point)?;
    Ok((point, f))
}

/// The fixed point of the continuation dilations: `(0, -depth(e_r)/r)`,
/// which is `(0,0)`, `(0,-1/2)`, `(0,-1/3)` for L, C, D.
pub fn dilation_center(case: ComplementCase) -> RationalPoint {
    let r = case.wrap_step();
    RationalPoint::new(int(0), ratio(-case.unit_depth(r), r))
}

/// The map `HF(L(d1), L(d2); sH) -> HF(L(d1), L(d2); (s+r)H)` on
/// generators, i.e. multiplication by `e_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuationMap {
    pub case: ComplementCase,
    pub n: u32,
    pub r: i64,
}

pub fn continuation_map(case: ComplementCase, d1: i64, d2: i64, r: i64) -> Result<ContinuationMap> {
    if d2 <= d1 {
        return Err(Error::InvalidRange { d1, d2 });
    }
    check_level(case, r)?;
    let n = u32::try_from(d2 - d1).map_err(|_| Error::InvalidRange { d1, d2 })?;
    Ok(ContinuationMap { case, n, r })
}

impl ContinuationMap {
    pub fn target_denominator(&self) -> u32 {
        self.n + self.r as u32
    }

    pub fn apply(&self, p: &ExtendedPoint) -> Result<ExtendedPoint> {
        if p.case != self.case || p.d != self.n {
            return Err(Error::Domain(format!(
                "{p} is not in the domain of this map"
            )));
        }
        ExtendedPoint::new(
            self.case,
            p.a,
            p.i + self.case.unit_depth(self.r),
            self.target_denominator(),
        )
    }

    /// Scale factor `n / (n + r)` of the dilation on chart positions.
    pub fn dilation_factor(&self) -> Rational {
        ratio(i64::from(self.n), i64::from(self.target_denominator()))
    }

    /// Image of a chart position under the dilation about the case's
    /// center.
    pub fn dilate(&self, p: &RationalPoint) -> RationalPoint {
        let c = dilation_center(self.case);
        let f = self.dilation_factor();
        RationalPoint::new(
            &c.eta + &f * (&p.eta - &c.eta),
            &c.xi + &f * (&p.xi - &c.xi),
        )
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ContinuationMap) -> Result<ContinuationMap> {
        if next.case != self.case || next.n != self.target_denominator() {
            return Err(Error::Domain("continuation maps are not composable".into()));
        }
        Ok(ContinuationMap {
            case: self.case,
            n: self.n,
            r: self.r + next.r,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComplementCase::{C, D, L};

    fn bv(d1: i64, d2: i64, a: i64, i: i64) -> BasisVector {
        BasisVector::new(d1, d2, a, i)
    }

    #[test]
    fn bases() {
        assert_eq!(wrapped_basis(D, 1, Window::new(1, 2)).len(), 15);
        assert!(wrapped_basis(L, 1, Window::new(1, 5))
            .iter()
            .all(|p| p.i >= 0));
        assert_eq!(wrapped_basis(L, 1, Window::new(0, 5)).len(), 6);
        let central: Vec<i64> = wrapped_basis(C, 1, Window::new(0, 3))
            .iter()
            .map(|p| p.i)
            .collect();
        assert_eq!(central, vec![-3, -2, -1, 0]);
        assert!(ExtendedPoint::new(C, 0, 1, 1).is_err());
        assert!(ExtendedPoint::new(L, 0, -1, 1).is_err());
        assert!(ExtendedPoint::new(C, 5, -2, 1).is_ok());
        assert!(ExtendedPoint::new(C, 5, -1, 1).is_err());
    }

    #[test]
    fn products() {
        let s = wrapped_product(D, &bv(1, 2, 1, 1), &bv(0, 1, -1, 0)).unwrap();
        let got: Vec<_> = s.points().map(|(p, c)| (p.a, p.i, c.clone())).collect();
        assert_eq!(got, vec![(0, 1, BigInt::from(1)), (0, 2, BigInt::from(1))]);
        let s = wrapped_product(L, &bv(1, 2, 0, 0), &bv(0, 1, 0, 2)).unwrap();
        assert_eq!(
            s.points().map(|(p, _)| (p.a, p.i, p.d)).collect::<Vec<_>>(),
            vec![(0, 2, 2)]
        );
        let q = bv(0, 3, 2, -4);
        let unit = bv(3, 3, 0, 0);
        assert_eq!(
            wrapped_product(D, &unit, &q).unwrap().sum,
            FormalSum::basis(q)
        );
        assert!(matches!(
            wrapped_product(L, &bv(1, 2, 0, -1), &bv(0, 1, 0, 0)),
            Err(Error::InvalidWrappedIndex { .. })
        ));
        assert!(matches!(
            wrapped_product_in_window(D, &bv(1, 2, 1, 1), &bv(0, 1, -1, 0), Window::new(2, 1)),
            Err(Error::WindowTooSmall { a: 0, i: 2, .. })
        ));
    }

    #[test]
    fn rational_functions() {
        let f = rational_function(&ExtendedPoint::new(L, 0, 1, 0).unwrap()).unwrap();
        assert_eq!((f.p_exp, f.y_exp), (1, -2));
        assert_eq!(f.to_string(), "p*y^-2");
        let f = rational_function(&ExtendedPoint::new(C, 0, -1, 0).unwrap()).unwrap();
        assert_eq!(f.to_string(), "p^-1*y^2");
        let f = rational_function(&ExtendedPoint::new(D, 0, 0, 0).unwrap()).unwrap();
        assert_eq!(f, LaurentElement::one());
        for case in ComplementCase::ALL {
            for p in wrapped_basis(case, 2, Window::new(4, 4)) {
                let f = rational_function(&p).unwrap();
                assert_eq!(point_of(case, &f).unwrap(), p);
                match case {
                    L => assert!(f.p_exp >= 0),
                    C => assert!(f.y_exp >= 0),
                    D => {}
                }
            }
        }
    }

    #[test]
    fn e_elements() {
        assert_eq!(e_element(L, 1).unwrap().1.to_string(), "y");
        assert_eq!(e_element(C, 2).unwrap().1.to_string(), "p");
        assert_eq!(e_element(D, 3).unwrap().1.to_string(), "p*y");
        assert!(matches!(e_element(C, 3), Err(Error::BadWrapLevel(3, 2))));
        assert!(e_element(L, 0).is_err());
    }

    #[test]
    fn laurent_oracle_examples() {
        // x * zp = y^2 p + p^2
        let x = rational_function(&ExtendedPoint::new(D, -1, 0, 1).unwrap()).unwrap();
        let zp = rational_function(&ExtendedPoint::new(D, 1, 1, 1).unwrap()).unwrap();
        let prod = laurent_product(D, &x, &zp).unwrap();
        let expected: BTreeMap<_, _> = [(0, 1), (0, 2)]
            .iter()
            .map(|&(a, i)| (ExtendedPoint::new(D, a, i, 2).unwrap(), BigInt::from(1)))
            .collect();
        assert_eq!(prod, expected);
    }

    #[test]
    fn centers() {
        assert_eq!(
            dilation_center(L),
            RationalPoint::from_ratios((0, 1), (0, 1))
        );
        assert_eq!(
            dilation_center(C),
            RationalPoint::from_ratios((0, 1), (-1, 2))
        );
        assert_eq!(
            dilation_center(D),
            RationalPoint::from_ratios((0, 1), (-1, 3))
        );
        let map = continuation_map(C, 0, 3, 4).unwrap();
        let p = ExtendedPoint::new(C, 2, -1, 3).unwrap();
        let image = map.apply(&p).unwrap();
        assert_eq!(image, ExtendedPoint::new(C, 2, 1, 7).unwrap());
        assert_eq!(
            map.dilate(&p.position().unwrap()),
            image.position().unwrap()
        );
        assert!(continuation_map(L, 2, 2, 1).is_err());
    }

    #[test]
    fn json() {
        let s = wrapped_product(D, &bv(1, 2, 1, 1), &bv(0, 1, -1, 0)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"case":"D","d1":0,"d2":2,"terms":[{"a":0,"i":1,"c":1},{"a":0,"i":2,"c":1}]}"#
        );
        assert_eq!(serde_json::from_str::<WrappedSum>(&j).unwrap(), s);
    }
}
