//! Singular integral affine polygons with focus-focus singularities and
//! parallel monodromy-invariant directions, drawn in the chart where every
//! branch cut runs straight down from its singularity.
//!
//! In that chart the top boundary is a single straight facet and the bottom
//! boundary picks up a slope jump of `+multiplicity` below each singularity.
//! The global coordinate `eta` is chart independent, and the shear preserves
//! `(1/d)Z^2`, so fractional integral points can be enumerated column by
//! column directly in the chart.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ceil_i64, floor_i64, format_rational, int, parse_rational, ratio, Rational};

/// A point (or vector) in the chart; serializes with `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalPoint {
    #[serde(with = "crate::rational::as_string")]
    pub eta: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub xi: Rational,
}

impl RationalPoint {
    pub fn new(eta: Rational, xi: Rational) -> Self {
        Self { eta, xi }
    }

    pub fn from_ratios(eta: (i64, i64), xi: (i64, i64)) -> Self {
        Self::new(ratio(eta.0, eta.1), ratio(xi.0, xi.1))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.eta),
            format_rational(&self.xi)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singularity {
    pub eta: Rational,
    /// Position along the vertical monodromy-invariant line.
    pub xi: Rational,
    /// Number of simple focus-focus points merged at this position.
    pub multiplicity: u32,
}

impl Singularity {
    pub fn simple(eta: Rational, xi: Rational) -> Self {
        Self {
            eta,
            xi,
            multiplicity: 1,
        }
    }
}

/// 2x2 integer matrix acting on column vectors `(eta, xi)`.
pub type IntMatrix2 = [[i64; 2]; 2];

pub fn mat_mul(a: &IntMatrix2, b: &IntMatrix2) -> IntMatrix2 {
    let mut out = [[0i64; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn apply_matrix(m: &IntMatrix2, v: &RationalPoint) -> RationalPoint {
    RationalPoint::new(
        int(m[0][0]) * &v.eta + int(m[0][1]) * &v.xi,
        int(m[1][0]) * &v.eta + int(m[1][1]) * &v.xi,
    )
}

/// Counterclockwise monodromy of the tangent bundle around `s`, raised to
/// `turns`: `[[1, 0], [multiplicity * turns, 1]]`.
pub fn monodromy_shear(s: &Singularity, turns: i64) -> IntMatrix2 {
    [[1, 0], [i64::from(s.multiplicity) * turns, 1]]
}

/// A boundary curve given by its vertices, strictly increasing in `eta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPolyline {
    vertices: Vec<RationalPoint>,
}

impl BoundaryPolyline {
    pub fn new(vertices: Vec<RationalPoint>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    /// Slope of each facet, in order.
    pub fn slopes(&self) -> Vec<Rational> {
        self.vertices
            .windows(2)
            .map(|w| (&w[1].xi - &w[0].xi) / (&w[1].eta - &w[0].eta))
            .collect()
    }

    /// Height of the polyline over `eta`, or `None` outside its range.
    pub fn value_at(&self, eta: &Rational) -> Option<Rational> {
        let first = self.vertices.first()?;
        let last = self.vertices.last()?;
        if eta < &first.eta || eta > &last.eta {
            return None;
        }
        if self.vertices.len() == 1 {
            return Some(first.xi.clone());
        }
        for w in self.vertices.windows(2) {
            if eta >= &w[0].eta && eta <= &w[1].eta {
                let t = (eta - &w[0].eta) / (&w[1].eta - &w[0].eta);
                return Some(&w[0].xi + t * (&w[1].xi - &w[0].xi));
            }
        }
        None
    }

    /// Change of slope at `eta` (right slope minus left slope); zero when
    /// `eta` is not an interior vertex.
    pub fn slope_jump_at(&self, eta: &Rational) -> Rational {
        let slopes = self.slopes();
        let n = self.vertices.len();
        for k in 1..n.saturating_sub(1) {
            if &self.vertices[k].eta == eta {
                return &slopes[k] - &slopes[k - 1];
            }
        }
        Rational::zero()
    }

    fn is_strictly_increasing(&self) -> Option<usize> {
        self.vertices
            .windows(2)
            .position(|w| w[1].eta <= w[0].eta)
            .map(|k| k + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Corners {
    pub left: bool,
    pub right: bool,
}

/// A class-P singular integral affine polygon in the all-cuts-downward chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPManifold {
    pub eta_min: Rational,
    pub eta_max: Rational,
    pub singularities: Vec<Singularity>,
    pub top: BoundaryPolyline,
    pub bottom: BoundaryPolyline,
    pub corners: Corners,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
            Side::Left => "left",
            Side::Right => "right",
        };
        f.write_str(s)
    }
}

/// A failed class-P axiom, with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyRange,
    TooFewVertices {
        side: Side,
    },
    NotIncreasing {
        side: Side,
        vertex: usize,
    },
    EndpointMismatch {
        side: Side,
    },
    CornerFlag {
        side: Side,
        flagged: bool,
        actual: bool,
    },
    BoundariesCross {
        eta: Rational,
    },
    InteriorCorner {
        side: Side,
        eta: Rational,
    },
    MonodromyMismatch {
        side: Side,
        eta: Rational,
        expected: Rational,
        actual: Rational,
    },
    SingularityPlacement {
        index: usize,
        reason: &'static str,
    },
    SingularityOrder {
        index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyRange => write!(f, "polygonal type: eta_min must be below eta_max"),
            TooFewVertices { side } => {
                write!(f, "polygonal type: {side} boundary needs at least two vertices")
            }
            NotIncreasing { side, vertex } => write!(
                f,
                "polygonal type: {side} boundary vertex {vertex} does not increase in eta"
            ),
            EndpointMismatch { side } => write!(
                f,
                "polygonal type: {side} boundary does not span [eta_min, eta_max]"
            ),
            CornerFlag { side, flagged, actual } => write!(
                f,
                "class P (5): {side} extreme is flagged corner={flagged} but boundaries give corner={actual}"
            ),
            BoundariesCross { eta } => write!(
                f,
                "polygonal type: bottom boundary is not below top at eta = {}",
                format_rational(eta)
            ),
            InteriorCorner { side, eta } => write!(
                f,
                "class P (5): {side} boundary has a corner at interior eta = {}",
                format_rational(eta)
            ),
            MonodromyMismatch { side, eta, expected, actual } => write!(
                f,
                "monodromy consistency: {side} slope jump at eta = {} is {}, expected {}",
                format_rational(eta),
                format_rational(actual),
                format_rational(expected)
            ),
            SingularityPlacement { index, reason } => {
                write!(f, "focus-focus singularity {index}: {reason}")
            }
            SingularityOrder { index } => write!(
                f,
                "focus-focus singularity {index}: singularities must be sorted by strictly increasing eta"
            ),
        }
    }
}

/// Checks every class-P axiom in the cut chart. An empty list means valid.
pub fn validate(m: &ClassPManifold) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.eta_min >= m.eta_max {
        out.push(Violation::EmptyRange);
        return out;
    }
    let mut shape_ok = true;
    for (side, line) in [(Side::Top, &m.top), (Side::Bottom, &m.bottom)] {
        let v = line.vertices();
        if v.len() < 2 {
            out.push(Violation::TooFewVertices { side });
            shape_ok = false;
            continue;
        }
        if let Some(vertex) = line.is_strictly_increasing() {
            out.push(Violation::NotIncreasing { side, vertex });
            shape_ok = false;
        }
        if v[0].eta != m.eta_min || v[v.len() - 1].eta != m.eta_max {
            out.push(Violation::EndpointMismatch { side });
            shape_ok = false;
        }
    }
    if !shape_ok {
        return out;
    }

    for (index, s) in m.singularities.iter().enumerate() {
        if index > 0 && s.eta <= m.singularities[index - 1].eta {
            out.push(Violation::SingularityOrder { index });
        }
        if s.multiplicity == 0 {
            out.push(Violation::SingularityPlacement {
                index,
                reason: "multiplicity must be positive",
            });
        }
        if s.eta <= m.eta_min || s.eta >= m.eta_max {
            out.push(Violation::SingularityPlacement {
                index,
                reason: "eta must lie strictly between the extremes",
            });
            continue;
        }
        let top = m.top.value_at(&s.eta).expect("eta in range");
        let bottom = m.bottom.value_at(&s.eta).expect("eta in range");
        if s.xi <= bottom || s.xi >= top {
            out.push(Violation::SingularityPlacement {
                index,
                reason: "xi must lie strictly between the bottom and top boundaries",
            });
        }
    }

    // Corner flags at the extremes.
    for (side, eta, flagged) in [
        (Side::Left, &m.eta_min, m.corners.left),
        (Side::Right, &m.eta_max, m.corners.right),
    ] {
        let top = m.top.value_at(eta).expect("endpoint");
        let bottom = m.bottom.value_at(eta).expect("endpoint");
        if bottom > top {
            out.push(Violation::BoundariesCross { eta: eta.clone() });
        }
        let actual = top == bottom;
        if actual != flagged {
            out.push(Violation::CornerFlag {
                side,
                flagged,
                actual,
            });
        }
    }

    // Interior separation: both boundaries are piecewise linear, so checking
    // every breakpoint of either one suffices.
    let mut breakpoints: Vec<Rational> = m
        .top
        .vertices()
        .iter()
        .chain(m.bottom.vertices())
        .map(|p| p.eta.clone())
        .filter(|e| e > &m.eta_min && e < &m.eta_max)
        .collect();
    breakpoints.sort();
    breakpoints.dedup();
    if breakpoints.is_empty() {
        breakpoints.push((&m.eta_min + &m.eta_max) / int(2));
    }
    for eta in &breakpoints {
        let top = m.top.value_at(eta).expect("interior");
        let bottom = m.bottom.value_at(eta).expect("interior");
        if bottom >= top {
            out.push(Violation::BoundariesCross { eta: eta.clone() });
        }
    }

    let multiplicity_at = |eta: &Rational| -> Option<u32> {
        m.singularities
            .iter()
            .find(|s| &s.eta == eta)
            .map(|s| s.multiplicity)
    };

    // Top: straight through singularities, no corners elsewhere.
    for v in &m.top.vertices()[1..m.top.vertices().len() - 1] {
        let jump = m.top.slope_jump_at(&v.eta);
        if jump.is_zero() {
            continue;
        }
        if multiplicity_at(&v.eta).is_some() {
            out.push(Violation::MonodromyMismatch {
                side: Side::Top,
                eta: v.eta.clone(),
                expected: Rational::zero(),
                actual: jump,
            });
        } else {
            out.push(Violation::InteriorCorner {
                side: Side::Top,
                eta: v.eta.clone(),
            });
        }
    }

    // Bottom: jumps by +multiplicity below each singularity, nowhere else.
    for v in &m.bottom.vertices()[1..m.bottom.vertices().len() - 1] {
        if multiplicity_at(&v.eta).is_some() {
            continue;
        }
        if !m.bottom.slope_jump_at(&v.eta).is_zero() {
            out.push(Violation::InteriorCorner {
                side: Side::Bottom,
                eta: v.eta.clone(),
            });
        }
    }
    for s in &m.singularities {
        if s.eta <= m.eta_min || s.eta >= m.eta_max {
            continue;
        }
        let expected = int(i64::from(s.multiplicity));
        let actual = m.bottom.slope_jump_at(&s.eta);
        if actual != expected {
            out.push(Violation::MonodromyMismatch {
                side: Side::Bottom,
                eta: s.eta.clone(),
                expected,
                actual,
            });
        }
    }
    out
}

/// The base of the torus fibration on the complement of a conic and a line
/// in the projective plane, scaled so the top face has affine length 2.
pub fn cp2_model() -> ClassPManifold {
    cp2_model_with_singularity(ratio(-1, 4))
}

/// [`cp2_model`] with the singularity at height `xi` on the line `eta = 0`;
/// `xi` should lie in `(-1/2, 0)`.
pub fn cp2_model_with_singularity(xi: Rational) -> ClassPManifold {
    ClassPManifold {
        eta_min: int(-1),
        eta_max: int(1),
        singularities: vec![Singularity::simple(int(0), xi)],
        top: BoundaryPolyline::new(vec![
            RationalPoint::new(int(-1), int(0)),
            RationalPoint::new(int(1), int(0)),
        ]),
        bottom: BoundaryPolyline::new(vec![
            RationalPoint::new(int(-1), int(0)),
            RationalPoint::new(int(0), ratio(-1, 2)),
            RationalPoint::new(int(1), int(0)),
        ]),
        corners: Corners {
            left: true,
            right: true,
        },
    }
}

/// Shape parameters for the four-sided, two-singularity instance with two
/// vertical sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dp6Params {
    /// Affine widths of the three vertical strips cut out by the two
    /// singular lines, left to right.
    pub widths: [u32; 3],
    /// Affine length of the left vertical side.
    pub left_height: u32,
}

impl Default for Dp6Params {
    fn default() -> Self {
        Self {
            widths: [1, 1, 1],
            left_height: 1,
        }
    }
}

/// Four-sided instance: top `xi = 0`, bottom facets of slopes `-1, 0, +1`
/// meeting below the two singular lines, vertical sides at both extremes.
pub fn dp6_model(params: Dp6Params) -> Result<ClassPManifold> {
    let [w0, w1, w2] = params.widths.map(i64::from);
    let h = i64::from(params.left_height);
    if w0 == 0 || w1 == 0 || w2 == 0 || h == 0 {
        return Err(Error::InvalidInstance(
            "dp6 widths and height must be positive".into(),
        ));
    }
    let right_height = h + w0 - w2;
    if right_height <= 0 {
        return Err(Error::InvalidInstance(format!(
            "dp6 right side would have length {right_height}; need left_height + w0 > w2"
        )));
    }
    let c1 = w0;
    let c2 = w0 + w1;
    let total = w0 + w1 + w2;
    let floor_mid = -h - w0;
    let m = ClassPManifold {
        eta_min: int(0),
        eta_max: int(total),
        singularities: vec![
            Singularity::simple(int(c1), ratio(floor_mid, 2)),
            Singularity::simple(int(c2), ratio(floor_mid, 2)),
        ],
        top: BoundaryPolyline::new(vec![
            RationalPoint::new(int(0), int(0)),
            RationalPoint::new(int(total), int(0)),
        ]),
        bottom: BoundaryPolyline::new(vec![
            RationalPoint::new(int(0), int(-h)),
            RationalPoint::new(int(c1), int(floor_mid)),
            RationalPoint::new(int(c2), int(floor_mid)),
            RationalPoint::new(int(total), int(-right_height)),
        ]),
        corners: Corners {
            left: false,
            right: false,
        },
    };
    debug_assert!(validate(&m).is_empty());
    Ok(m)
}

/// A Floer generator `q_{a,i}` between `L(n)` and `L(n + d)`, which is also
/// the `(1/d)`-integral point of `B` in column `eta = a/d` at depth `i` below
/// the top boundary. `d = 0` is reserved for the unit `q_{0,0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FractionalPoint {
    pub a: i64,
    pub i: i64,
    pub d: u32,
}

impl FractionalPoint {
    pub fn new(a: i64, i: i64, d: u32) -> Self {
        Self { a, i, d }
    }

    pub fn unit() -> Self {
        Self { a: 0, i: 0, d: 0 }
    }
}

impl fmt::Display for FractionalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q({},{})@{}", self.a, self.i, self.d)
    }
}

impl ClassPManifold {
    /// Closed-region membership with exact comparisons.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        match (self.top.value_at(&p.eta), self.bottom.value_at(&p.eta)) {
            (Some(top), Some(bottom)) => bottom <= p.xi && p.xi <= top,
            _ => false,
        }
    }

    /// Numerator of the topmost `(1/d)`-lattice height in column `a`.
    fn column_top(&self, a: i64, d: u32) -> Option<i64> {
        let eta = ratio(a, i64::from(d));
        let top = self.top.value_at(&eta)?;
        Some(floor_i64(&(top * int(i64::from(d)))))
    }

    /// Depth range `0..=max` of column `a` at denominator `d`, if the column
    /// exists and is non-empty.
    pub fn column_depth(&self, a: i64, d: u32) -> Option<i64> {
        if d == 0 {
            return (a == 0).then_some(0);
        }
        let eta = ratio(a, i64::from(d));
        let top = self.top.value_at(&eta)?;
        let bottom = self.bottom.value_at(&eta)?;
        let dd = int(i64::from(d));
        let hi = floor_i64(&(top * &dd));
        let lo = ceil_i64(&(bottom * &dd));
        (hi >= lo).then_some(hi - lo)
    }

    /// Position of `p` in the chart; `None` for the unit or a point whose
    /// column is outside `B`.
    pub fn embed(&self, p: &FractionalPoint) -> Option<RationalPoint> {
        if p.d == 0 {
            return None;
        }
        let d = i64::from(p.d);
        let hi = self.column_top(p.a, p.d)?;
        Some(RationalPoint::new(ratio(p.a, d), ratio(hi - p.i, d)))
    }

    pub fn is_admissible(&self, p: &FractionalPoint) -> bool {
        match self.column_depth(p.a, p.d) {
            Some(max) => p.i >= 0 && p.i <= max,
            None => false,
        }
    }

    /// Top boundary as `xi = slope * eta + offset` when it is one facet.
    pub fn top_line(&self) -> Option<(Rational, Rational)> {
        let v = self.top.vertices();
        let slopes = self.top.slopes();
        if slopes.is_empty() || slopes.iter().any(|s| s != &slopes[0]) {
            return None;
        }
        let offset = &v[0].xi - &slopes[0] * &v[0].eta;
        Some((slopes[0].clone(), offset))
    }

    /// Total multiplicity of singularities, i.e. the number of critical
    /// values of the associated Lefschetz fibration.
    pub fn critical_value_count(&self) -> u32 {
        self.singularities.iter().map(|s| s.multiplicity).sum()
    }
}

/// All points of `B((1/d)Z)`, column by column, sorted by `(a, i)`.
/// `d = 0` yields the single unit point.
pub fn fractional_points(m: &ClassPManifold, d: u32) -> Vec<FractionalPoint> {
    if d == 0 {
        return vec![FractionalPoint::unit()];
    }
    let dd = int(i64::from(d));
    let first = ceil_i64(&(&m.eta_min * &dd));
    let last = floor_i64(&(&m.eta_max * &dd));
    let mut out = Vec::new();
    for a in first..=last {
        if let Some(max) = m.column_depth(a, d) {
            out.extend((0..=max).map(|i| FractionalPoint::new(a, i, d)));
        }
    }
    out
}

/// Size of `B((1/d)Z)` by scanning every lattice candidate in the bounding
/// box with a point-in-polygon test on the boundary cycle. Independent of the
/// column walk in [`fractional_points`].
pub fn count_points(m: &ClassPManifold, d: u32) -> u64 {
    if d == 0 {
        return 1;
    }
    // scale by the common denominator so the scan runs in integers
    let polygon = boundary_cycle(m);
    let mut l = BigInt::one();
    for p in &polygon {
        l = l.lcm(p.eta.denom()).lcm(p.xi.denom());
    }
    let to_int = |r: &Rational| -> i128 {
        (r * Rational::from_integer(l.clone()))
            .to_integer()
            .to_i128()
            .expect("polygon coordinates fit in i128")
    };
    let dd = i128::from(d);
    let scale = l.to_i128().expect("denominator fits in i128");
    let verts: Vec<(i128, i128)> = polygon
        .iter()
        .map(|p| (to_int(&p.eta) * dd, to_int(&p.xi) * dd))
        .collect();
    let (lo, hi) = verts.iter().fold((i128::MAX, i128::MIN), |(lo, hi), v| {
        (lo.min(v.1), hi.max(v.1))
    });
    let (left, right) = verts.iter().fold((i128::MAX, i128::MIN), |(lo, hi), v| {
        (lo.min(v.0), hi.max(v.0))
    });
    let mut count = 0;
    for a in Integer::div_floor(&left, &scale)..=Integer::div_ceil(&right, &scale) {
        for b in Integer::div_floor(&lo, &scale)..=Integer::div_ceil(&hi, &scale) {
            if int_polygon_contains(&verts, (a * scale, b * scale)) {
                count += 1;
            }
        }
    }
    count
}

fn int_polygon_contains(polygon: &[(i128, i128)], p: (i128, i128)) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (polygon[k], polygon[(k + 1) % n]);
        let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        if cross == 0
            && p.0 >= a.0.min(b.0)
            && p.0 <= a.0.max(b.0)
            && p.1 >= a.1.min(b.1)
            && p.1 <= a.1.max(b.1)
        {
            return true;
        }
        if (a.1 > p.1) != (b.1 > p.1) {
            // p lies left of the crossing iff the cross product has the edge's orientation sign
            let upward = b.1 > a.1;
            if (cross > 0) == upward {
                inside = !inside;
            }
        }
    }
    inside
}

/// Boundary of the chart image as a closed vertex cycle: bottom left to
/// right, then top right to left.
pub fn boundary_cycle(m: &ClassPManifold) -> Vec<RationalPoint> {
    let mut cycle: Vec<RationalPoint> = m.bottom.vertices().to_vec();
    for p in m.top.vertices().iter().rev() {
        if cycle.last() != Some(p) {
            cycle.push(p.clone());
        }
    }
    if cycle.len() > 1 && cycle.first() == cycle.last() {
        cycle.pop();
    }
    cycle
}

fn cross(o: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rational {
    (&a.eta - &o.eta) * (&b.xi - &o.xi) - (&a.xi - &o.xi) * (&b.eta - &o.eta)
}

fn on_segment(a: &RationalPoint, b: &RationalPoint, p: &RationalPoint) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let (e_lo, e_hi) = if a.eta <= b.eta {
        (&a.eta, &b.eta)
    } else {
        (&b.eta, &a.eta)
    };
    let (x_lo, x_hi) = if a.xi <= b.xi {
        (&a.xi, &b.xi)
    } else {
        (&b.xi, &a.xi)
    };
    &p.eta >= e_lo && &p.eta <= e_hi && &p.xi >= x_lo && &p.xi <= x_hi
}

/// Closed point-in-polygon test: boundary points count as inside; interior
/// decided by crossing parity of a horizontal ray.
pub fn polygon_contains(polygon: &[RationalPoint], p: &RationalPoint) -> bool {
    let n = polygon.len();
    for k in 0..n {
        if on_segment(&polygon[k], &polygon[(k + 1) % n], p) {
            return true;
        }
    }
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (&polygon[k], &polygon[(k + 1) % n]);
        if (a.xi > p.xi) != (b.xi > p.xi) {
            let t = (&p.xi - &a.xi) / (&b.xi - &a.xi);
            let eta_cross = &a.eta + t * (&b.eta - &a.eta);
            if p.eta < eta_cross {
                inside = !inside;
            }
        }
    }
    inside
}

// JSON instance files: rationals are encoded as "p/q" strings.

#[derive(Serialize, Deserialize)]
struct SingularityFile {
    eta: String,
    xi: String,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    eta_min: String,
    eta_max: String,
    singularities: Vec<SingularityFile>,
    top: Vec<[String; 2]>,
    bottom: Vec<[String; 2]>,
    corners: Corners,
}

fn parse_vertices(v: &[[String; 2]]) -> Result<Vec<RationalPoint>> {
    v.iter()
        .map(|[e, x]| Ok(RationalPoint::new(parse_rational(e)?, parse_rational(x)?)))
        .collect()
}

fn encode_vertices(v: &[RationalPoint]) -> Vec<[String; 2]> {
    v.iter()
        .map(|p| [format_rational(&p.eta), format_rational(&p.xi)])
        .collect()
}

impl ClassPManifold {
    /// Parses the JSON instance schema. The result is not validated.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let singularities = file
            .singularities
            .iter()
            .map(|s| {
                Ok(Singularity {
                    eta: parse_rational(&s.eta)?,
                    xi: parse_rational(&s.xi)?,
                    multiplicity: s.mult,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            eta_min: parse_rational(&file.eta_min)?,
            eta_max: parse_rational(&file.eta_max)?,
            singularities,
            top: BoundaryPolyline::new(parse_vertices(&file.top)?),
            bottom: BoundaryPolyline::new(parse_vertices(&file.bottom)?),
            corners: file.corners,
        })
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            eta_min: format_rational(&self.eta_min),
            eta_max: format_rational(&self.eta_max),
            singularities: self
                .singularities
                .iter()
                .map(|s| SingularityFile {
                    eta: format_rational(&s.eta),
                    xi: format_rational(&s.xi),
                    mult: s.multiplicity,
                })
                .collect(),
            top: encode_vertices(self.top.vertices()),
            bottom: encode_vertices(self.bottom.vertices()),
            corners: self.corners,
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_identity(m: &IntMatrix2) -> bool {
        *m == [[1, 0], [0, 1]]
    }

    fn triangular(d: u64) -> u64 {
        (d + 2) * (d + 1) / 2
    }

    #[test]
    fn cp2_is_valid_with_expected_slopes() {
        let m = cp2_model();
        assert!(validate(&m).is_empty(), "{:?}", validate(&m));
        assert_eq!(m.top.slopes(), vec![int(0)]);
        assert_eq!(m.bottom.slopes(), vec![ratio(-1, 2), ratio(1, 2)]);
    }

    #[test]
    fn doubled_monodromy_jump_is_one_violation() {
        let mut m = cp2_model();
        m.bottom = BoundaryPolyline::new(vec![
            RationalPoint::new(int(-1), int(0)),
            RationalPoint::new(int(0), int(-1)),
            RationalPoint::new(int(1), int(0)),
        ]);
        let v = validate(&m);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(matches!(
            v[0],
            Violation::MonodromyMismatch {
                side: Side::Bottom,
                ..
            }
        ));
        assert!(v[0].to_string().contains("monodromy"));
    }

    #[test]
    fn interior_corner_is_one_violation() {
        let mut m = cp2_model();
        m.top = BoundaryPolyline::new(vec![
            RationalPoint::new(int(-1), int(0)),
            RationalPoint::new(ratio(1, 2), int(0)),
            RationalPoint::new(int(1), ratio(1, 4)),
        ]);
        m.corners.right = false;
        let v = validate(&m);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(matches!(
            v[0],
            Violation::InteriorCorner {
                side: Side::Top,
                ..
            }
        ));
        assert!(v[0].to_string().contains("class P (5)"));
    }

    #[test]
    fn misplaced_singularity_and_flags() {
        let mut m = cp2_model_with_singularity(ratio(-1, 2));
        m.corners.left = false;
        let v = validate(&m);
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::SingularityPlacement { .. })));
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::CornerFlag {
                side: Side::Left,
                ..
            }
        )));
    }

    #[test]
    fn small_point_counts() {
        let m = cp2_model();
        let p1 = fractional_points(&m, 1);
        assert_eq!(
            p1,
            vec![
                FractionalPoint::new(-1, 0, 1),
                FractionalPoint::new(0, 0, 1),
                FractionalPoint::new(1, 0, 1)
            ]
        );
        assert_eq!(fractional_points(&m, 2).len(), 6);
        assert_eq!(fractional_points(&m, 4).len(), 15);
        assert_eq!(fractional_points(&m, 0), vec![FractionalPoint::unit()]);
        assert_eq!(count_points(&m, 0), 1);
    }

    #[test]
    fn cp2_hilbert_polynomial_and_coordinates() {
        let m = cp2_model();
        for d in 0..=50u32 {
            let pts = fractional_points(&m, d);
            assert_eq!(pts.len() as u64, triangular(u64::from(d)), "d = {d}");
            for p in pts.iter().filter(|p| p.d > 0) {
                let x = m.embed(p).unwrap();
                assert_eq!(
                    x,
                    RationalPoint::new(ratio(p.a, d as i64), ratio(-p.i, d as i64))
                );
                assert!(m.contains(&x));
                assert!(p.i <= (i64::from(d) - p.a.abs()) / 2);
            }
        }
    }

    #[test]
    fn enumeration_matches_lattice_scan() {
        let cp2 = cp2_model();
        let dp6 = dp6_model(Dp6Params::default()).unwrap();
        let skew = dp6_model(Dp6Params {
            widths: [2, 1, 3],
            left_height: 2,
        })
        .unwrap();
        for m in [&cp2, &dp6, &skew] {
            assert!(validate(m).is_empty());
            for d in 0..=20 {
                assert_eq!(
                    fractional_points(m, d).len() as u64,
                    count_points(m, d),
                    "d = {d}"
                );
            }
        }
    }

    #[test]
    fn singularity_height_does_not_move_points() {
        let base = fractional_points(&cp2_model(), 7);
        for (n, den) in [(-1, 8), (-3, 8), (-49, 100), (-1, 100)] {
            let m = cp2_model_with_singularity(ratio(n, den));
            assert!(validate(&m).is_empty());
            assert_eq!(fractional_points(&m, 7), base);
        }
    }

    #[test]
    fn shear_powers() {
        let s = Singularity::simple(int(0), ratio(-1, 4));
        assert_eq!(monodromy_shear(&s, 1), [[1, 0], [1, 1]]);
        assert!(is_identity(&monodromy_shear(&s, 0)));
        assert!(is_identity(&mat_mul(
            &monodromy_shear(&s, -1),
            &monodromy_shear(&s, 1)
        )));
        for j in -5..=5 {
            for k in -5..=5 {
                assert_eq!(
                    mat_mul(&monodromy_shear(&s, j), &monodromy_shear(&s, k)),
                    monodromy_shear(&s, j + k)
                );
            }
        }
        let double = Singularity {
            multiplicity: 2,
            ..s
        };
        assert_eq!(monodromy_shear(&double, 3), [[1, 0], [6, 1]]);
    }

    #[test]
    fn dp6_rejects_bad_shapes() {
        assert!(dp6_model(Dp6Params {
            widths: [1, 0, 1],
            left_height: 1
        })
        .is_err());
        assert!(dp6_model(Dp6Params {
            widths: [1, 1, 3],
            left_height: 1
        })
        .is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = dp6_model(Dp6Params {
            widths: [2, 1, 1],
            left_height: 3,
        })
        .unwrap();
        let s = m.to_json();
        assert!(s.contains("\"-5/2\""));
        assert_eq!(ClassPManifold::from_json(&s).unwrap(), m);
        assert!(ClassPManifold::from_json("{}").is_err());
    }
}
