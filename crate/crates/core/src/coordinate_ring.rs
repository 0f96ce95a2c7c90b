//! The homogeneous coordinate ring `C[x, y, z]` with the distinguished basis
//!
//! ```text
//! Q_{a,i} = x^{-a} p^i y^{d+a-2i}   (a <= 0)
//! Q_{a,i} = z^a    p^i y^{d-a-2i}   (a > 0),      p = xz - y^2
//! ```
//!
//! Expansion in the `Q` basis solves the change-of-basis system exactly;
//! the per-degree matrix is assembled once and cached.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::floer_algebra::{bigint_from_json, bigint_to_json, mu2, AlgebraModel, BasisVector};

/// Exponents `(x, y, z)`.
pub type Exponent = (u32, u32, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPolynomial {
    degree: u32,
    coeffs: BTreeMap<Exponent, BigInt>,
}

impl HomogeneousPolynomial {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial((0, 0, 0), BigInt::one())
    }

    pub fn monomial(e: Exponent, c: BigInt) -> Self {
        let mut p = Self::zero(e.0 + e.1 + e.2);
        p.add_term(e, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial((1, 0, 0), BigInt::one())
    }

    pub fn y() -> Self {
        Self::monomial((0, 1, 0), BigInt::one())
    }

    pub fn z() -> Self {
        Self::monomial((0, 0, 1), BigInt::one())
    }

    /// `p = xz - y^2`.
    pub fn p() -> Self {
        let mut p = Self::zero(2);
        p.add_term((1, 0, 1), BigInt::one());
        p.add_term((0, 2, 0), -BigInt::one());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, rejecting
    /// mixed degrees.
    pub fn from_terms(
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, BigInt)>,
    ) -> Result<Self> {
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            if e.0 + e.1 + e.2 != degree {
                return Err(Error::Domain(format!(
                    "monomial x^{} y^{} z^{} is not of degree {degree}",
                    e.0, e.1, e.2
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        debug_assert_eq!(e.0 + e.1 + e.2, self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, e: Exponent) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Domain(format!(
                "cannot add polynomials of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() {
            other.clone()
        } else {
            self.clone()
        };
        let rest = if self.is_zero() {
            &Self::zero(0)
        } else {
            other
        };
        for (&e, c) in &rest.coeffs {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.degree);
        for (&e, x) in &self.coeffs {
            out.add_term(e, x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = multiply(&out, self);
        }
        out
    }
}

/// Exact product; degrees add.
pub fn multiply(p1: &HomogeneousPolynomial, p2: &HomogeneousPolynomial) -> HomogeneousPolynomial {
    let mut out = HomogeneousPolynomial::zero(p1.degree + p2.degree);
    for (e1, c1) in &p1.coeffs {
        for (e2, c2) in &p2.coeffs {
            out.add_term((e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2), c1 * c2);
        }
    }
    out
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // highest power of x first
        for (k, (e, c)) in self.coeffs.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            for (name, pow) in [("x", e.0), ("y", e.1), ("z", e.2)] {
                match pow {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{pow}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    x: u32,
    y: u32,
    z: u32,
    c: serde_json::Value,
}

impl Serialize for HomogeneousPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<MonomialJson> = self
            .coeffs
            .iter()
            .map(|(&(x, y, z), c)| MonomialJson {
                x,
                y,
                z,
                c: bigint_to_json(c),
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<MonomialJson>::deserialize(d)?;
        let degree = list.first().map_or(0, |m| m.x + m.y + m.z);
        let mut terms = Vec::with_capacity(list.len());
        for m in list {
            let c = bigint_from_json(&m.c).map_err(serde::de::Error::custom)?;
            terms.push(((m.x, m.y, m.z), c));
        }
        HomogeneousPolynomial::from_terms(degree, terms).map_err(serde::de::Error::custom)
    }
}

/// Index of a `Q` basis element in degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QBasisIndex {
    pub a: i64,
    pub i: i64,
    pub d: u32,
}

impl QBasisIndex {
    pub fn new(a: i64, i: i64, d: u32) -> Result<Self> {
        let idx = Self { a, i, d };
        if idx.is_valid() {
            Ok(idx)
        } else {
            Err(Error::Inadmissible {
                a,
                i,
                d: i64::from(d),
            })
        }
    }

    pub fn is_valid(&self) -> bool {
        let d = i64::from(self.d);
        self.a.abs() <= d && self.i >= 0 && self.i <= (d - self.a.abs()) / 2
    }
}

impl fmt::Display for QBasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({},{})@{}", self.a, self.i, self.d)
    }
}

/// All `Q` indices of degree `d`, sorted by `(a, i)`.
pub fn qbasis(d: u32) -> Vec<QBasisIndex> {
    let dd = i64::from(d);
    let mut out = Vec::new();
    for a in -dd..=dd {
        for i in 0..=(dd - a.abs()) / 2 {
            out.push(QBasisIndex { a, i, d });
        }
    }
    out
}

/// Monomials of degree `d`, sorted.
pub fn monomials(d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for x in 0..=d {
        for y in 0..=d - x {
            out.push((x, y, d - x - y));
        }
    }
    out
}

fn q_expanded(a: i64, i: i64, d: i64) -> HomogeneousPolynomial {
    let (outer, y_exp) = if a <= 0 {
        (HomogeneousPolynomial::x().pow((-a) as u32), d + a - 2 * i)
    } else {
        (HomogeneousPolynomial::z().pow(a as u32), d - a - 2 * i)
    };
    let y = HomogeneousPolynomial::y().pow(y_exp as u32);
    multiply(
        &multiply(&outer, &HomogeneousPolynomial::p().pow(i as u32)),
        &y,
    )
}

/// `Q_{a,i}` of degree `d`, fully expanded.
pub fn q_monomial(idx: QBasisIndex) -> Result<HomogeneousPolynomial> {
    if !idx.is_valid() {
        return Err(Error::Inadmissible {
            a: idx.a,
            i: idx.i,
            d: i64::from(idx.d),
        });
    }
    Ok(q_expanded(idx.a, idx.i, i64::from(idx.d)))
}

/// Change-of-basis data for one degree. Ordering monomials by
/// `min(x exponent, z exponent)` makes the matrix unitriangular: the leading
/// monomial of `Q_{a,i}` is `x^{i-a} y^{d+a-2i} z^i` (or its mirror for
/// `a > 0`) with coefficient 1, and every other monomial of `Q_{a,i}` has a
/// smaller key.
struct BasisTable {
    basis: Vec<QBasisIndex>,
    columns: Vec<Vec<(Exponent, BigInt)>>,
    lead: HashMap<Exponent, usize>,
}

fn order_key(e: &Exponent) -> (u32, Exponent) {
    (e.0.min(e.2), *e)
}

fn basis_table(d: u32) -> Result<Arc<BasisTable>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<BasisTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("basis cache poisoned").get(&d) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(build_table(d)?);
    cache
        .lock()
        .expect("basis cache poisoned")
        .entry(d)
        .or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

fn build_table(d: u32) -> Result<BasisTable> {
    let basis = qbasis(d);
    if basis.len() != monomials(d).len() {
        return Err(Error::SingularBasis(d));
    }
    let mut columns = Vec::with_capacity(basis.len());
    let mut lead = HashMap::with_capacity(basis.len());
    for (pos, idx) in basis.iter().enumerate() {
        let q = q_expanded(idx.a, idx.i, i64::from(d));
        let column: Vec<(Exponent, BigInt)> = q.terms().map(|(e, c)| (*e, c.clone())).collect();
        let top = column
            .iter()
            .max_by_key(|(e, _)| order_key(e))
            .ok_or(Error::SingularBasis(d))?;
        let top_key = order_key(&top.0).0;
        let ties = column
            .iter()
            .filter(|(e, _)| order_key(e).0 == top_key)
            .count();
        if !top.1.is_one() || ties != 1 || lead.insert(top.0, pos).is_some() {
            return Err(Error::SingularBasis(d));
        }
        columns.push(column);
    }
    Ok(BasisTable {
        basis,
        columns,
        lead,
    })
}

/// Coordinates of `poly` in the `Q` basis of its degree, by back
/// substitution in the unitriangular change-of-basis system.
pub fn expand_in_qbasis(poly: &HomogeneousPolynomial) -> Result<BTreeMap<QBasisIndex, BigInt>> {
    let table = basis_table(poly.degree)?;
    let mut work: BTreeMap<(u32, Exponent), BigInt> = poly
        .terms()
        .map(|(e, c)| (order_key(e), c.clone()))
        .collect();
    let mut out = BTreeMap::new();
    while let Some(((_, e), c)) = work.pop_last() {
        let pos = *table
            .lead
            .get(&e)
            .ok_or(Error::SingularBasis(poly.degree))?;
        for (m, x) in &table.columns[pos] {
            if *m == e {
                continue;
            }
            let key = order_key(m);
            let entry = work.entry(key).or_insert_with(BigInt::zero);
            *entry -= &c * x;
            if entry.is_zero() {
                work.remove(&key);
            }
        }
        out.insert(table.basis[pos], c);
    }
    Ok(out)
}

/// One disagreement between the triangle product and polynomial
/// multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoMismatch {
    pub first: QBasisIndex,
    pub second: QBasisIndex,
    pub polynomial: String,
    pub floer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub n_max: u32,
    pub products_checked: usize,
    pub mismatches: Vec<IsoMismatch>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn render_coeffs(map: &BTreeMap<QBasisIndex, BigInt>) -> String {
    let parts: Vec<String> = map.iter().map(|(k, c)| format!("{c}*{k}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Compares `expand(Q_{a,i} Q_{b,j})` with `mu2(q_{b,j}, q_{a,i})` for every
/// admissible pair with denominators `1..=n_max`.
pub fn verify_iso(n_max: u32, exec: Execution) -> Result<IsoReport> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut pairs = Vec::new();
    for n in 1..=n_max {
        for m in 1..=n_max {
            for q1 in qbasis(n) {
                for q2 in qbasis(m) {
                    pairs.push((q1, q2));
                }
            }
        }
    }
    for d in 1..=2 * n_max {
        basis_table(d)?;
    }
    let polys: HashMap<QBasisIndex, HomogeneousPolynomial> = (1..=n_max)
        .flat_map(qbasis)
        .map(|q| (q, q_expanded(q.a, q.i, i64::from(q.d))))
        .collect();
    let results = exec.map(&pairs, |&(q1, q2)| -> Result<Option<IsoMismatch>> {
        let product = multiply(&polys[&q1], &polys[&q2]);
        let lhs = expand_in_qbasis(&product)?;
        let (n, m) = (i64::from(q1.d), i64::from(q2.d));
        let floer = mu2(
            &AlgebraModel::Cp2,
            &BasisVector::new(n, n + m, q2.a, q2.i),
            &BasisVector::new(0, n, q1.a, q1.i),
        )?;
        let rhs: BTreeMap<QBasisIndex, BigInt> = floer
            .terms()
            .map(|(v, c)| {
                (
                    QBasisIndex {
                        a: v.a,
                        i: v.i,
                        d: (n + m) as u32,
                    },
                    c.clone(),
                )
            })
            .collect();
        Ok((lhs != rhs).then(|| IsoMismatch {
            first: q1,
            second: q2,
            polynomial: render_coeffs(&lhs),
            floer: render_coeffs(&rhs),
        }))
    });
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            mismatches.push(m);
        }
    }
    Ok(IsoReport {
        n_max,
        products_checked: pairs.len(),
        mismatches,
    })
}
