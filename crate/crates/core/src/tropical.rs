//! Tropical triangles on the projective-plane base.
//!
//! Each leg solves `∇_u̇ u̇ = w u̇`, so along a straight piece the tangent
//! grows by `w` times the displacement, starting from zero at the input. A
//! leg crossing the singular line `eta = 0` may bend there, where simple
//! tropical disks from the singularity are attached. Legs are drawn in the
//! chart whose branch cut runs straight down from the singularity.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_base::{apply_matrix, FractionalPoint, IntMatrix2, RationalPoint};
use crate::error::{Error, Result};
use crate::floer_algebra::{bigint_from_json, bigint_to_json, k_value_cp2};
use crate::rational::{int, ratio, Rational};

/// Vectors share the point representation.
pub type RationalVector = RationalPoint;

fn add(p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
    RationalPoint::new(&p.eta + &q.eta, &p.xi + &q.xi)
}

fn sub(p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
    RationalPoint::new(&p.eta - &q.eta, &p.xi - &q.xi)
}

fn scale(c: &Rational, p: &RationalPoint) -> RationalPoint {
    RationalPoint::new(c * &p.eta, c * &p.xi)
}

fn zero_vector() -> RationalVector {
    RationalPoint::new(Rational::zero(), Rational::zero())
}

fn vertical(c: i64) -> RationalVector {
    RationalPoint::new(Rational::zero(), int(c))
}

const SHEAR: IntMatrix2 = [[1, 0], [1, 1]];
const SHEAR_INV: IntMatrix2 = [[1, 0], [-1, 1]];

/// Chart position `(a/n, -i/n)` of `q_{a,i}`.
pub fn point_position(p: &FractionalPoint) -> RationalPoint {
    let n = i64::from(p.d);
    RationalPoint::new(ratio(p.a, n), ratio(-p.i, n))
}

fn admissible(p: &FractionalPoint) -> bool {
    let n = i64::from(p.d);
    p.d > 0 && p.a.abs() <= n && p.i >= 0 && p.i <= (n - p.a.abs()) / 2
}

/// One straight piece of a leg with the tangent at both ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegPiece {
    pub start: RationalPoint,
    pub end: RationalPoint,
    pub tangent_start: RationalVector,
    pub tangent_end: RationalVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalLeg {
    pub weight: u32,
    pub pieces: Vec<LegPiece>,
}

impl TropicalLeg {
    pub fn start(&self) -> &RationalPoint {
        &self.pieces[0].start
    }

    pub fn end(&self) -> &RationalPoint {
        &self.pieces[self.pieces.len() - 1].end
    }

    pub fn tangent_at_end(&self) -> &RationalVector {
        &self.pieces[self.pieces.len() - 1].tangent_end
    }

    /// Vertex list `start, bends…, end`.
    pub fn vertices(&self) -> Vec<RationalPoint> {
        let mut v: Vec<RationalPoint> = self.pieces.iter().map(|p| p.start.clone()).collect();
        v.push(self.end().clone());
        v
    }
}

/// `count` simple disks meeting a leg at `point`, each arriving with
/// tangent `direction = ±(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskAttachment {
    pub point: RationalPoint,
    pub count: u64,
    pub direction: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalTriangle {
    pub inputs: [FractionalPoint; 2],
    pub output: FractionalPoint,
    pub root: RationalPoint,
    pub singularity: RationalPoint,
    /// Leg from the first input (`u1`) and from the second (`u2`).
    pub legs: [TropicalLeg; 2],
    /// Index into `legs` of the leg that bends on the singular line.
    pub bent_leg: Option<usize>,
    pub bend: Option<RationalPoint>,
    pub disks: Vec<DiskAttachment>,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub multiplicity: BigInt,
}

fn ser_big<S: serde::Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    bigint_to_json(c).serialize(s)
}

fn de_big<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    bigint_from_json(&serde_json::Value::deserialize(d)?).map_err(serde::de::Error::custom)
}

fn straight_leg(weight: u32, from: &RationalPoint, to: &RationalPoint) -> TropicalLeg {
    let w = int(i64::from(weight));
    TropicalLeg {
        weight,
        pieces: vec![LegPiece {
            start: from.clone(),
            end: to.clone(),
            tangent_start: zero_vector(),
            tangent_end: scale(&w, &sub(to, from)),
        }],
    }
}

/// Builds the tropical triangle with inputs `q1 = q_{a,i}@n`,
/// `q2 = q_{b,j}@m` and output `q_{a+b,h}@(n+m)`, with the singularity at
/// `(0, singularity_xi)`. Returns `None` when no triangle exists. A
/// singularity exactly at the bend counts as lying below it.
pub fn build_triangle(
    q1: FractionalPoint,
    q2: FractionalPoint,
    h: i64,
    singularity_xi: &Rational,
) -> Result<Option<TropicalTriangle>> {
    for q in [&q1, &q2] {
        if !admissible(q) {
            return Err(Error::Inadmissible {
                a: q.a,
                i: q.i,
                d: i64::from(q.d),
            });
        }
    }
    let (n, m) = (q1.d, q2.d);
    let output = FractionalPoint::new(q1.a + q2.a, h, n + m);
    let s = h - (q1.i + q2.i);
    let k = k_value_cp2(q1.a, q2.a) as i64;
    if s < 0 || s > k {
        return Ok(None);
    }
    let p1 = point_position(&q1);
    let p2 = point_position(&q2);
    let root = point_position(&output);
    let singularity = RationalPoint::new(Rational::zero(), singularity_xi.clone());

    if k == 0 {
        return Ok(Some(TropicalTriangle {
            inputs: [q1, q2],
            output,
            legs: [straight_leg(n, &p1, &root), straight_leg(m, &p2, &root)],
            root,
            singularity,
            bent_leg: None,
            bend: None,
            disks: Vec::new(),
            multiplicity: BigInt::from(1),
        }));
    }

    // the leg whose input lies on the root's side of eta = 0 stays straight;
    // a root on the line goes with the positive input
    let root_side = (q1.a + q2.a).signum();
    let straight = if root_side == 0 {
        if q1.a > 0 {
            0
        } else {
            1
        }
    } else if q1.a.signum() == root_side {
        0
    } else {
        1
    };
    let bent = 1 - straight;
    let inputs = [(&p1, n), (&p2, m)];
    let (ps, ws) = inputs[straight];
    let (pb, wb) = inputs[bent];
    let ws_r = int(i64::from(ws));
    let wb_r = int(i64::from(wb));

    let straight_tangent = scale(&ws_r, &sub(&root, ps));
    // the bent leg's last piece runs parallel to the straight leg
    let t = -&ps.eta / (&root.eta - &ps.eta);
    let bend = add(ps, &scale(&t, &sub(&root, ps)));
    let t_left = scale(&wb_r, &sub(&bend, pb));
    let t_right = sub(
        &scale(&int(-1), &straight_tangent),
        &scale(&wb_r, &sub(&root, &bend)),
    );

    let below = singularity_xi <= &bend.xi;
    let arriving = if below {
        t_left.clone()
    } else if pb.eta.is_negative() {
        apply_matrix(&SHEAR, &t_left)
    } else {
        apply_matrix(&SHEAR_INV, &t_left)
    };
    let jump = sub(&t_right, &arriving);
    let (expected_count, direction) = if below { (s, 1) } else { (k - s, -1) };
    if !jump.eta.is_zero() || jump.xi != int(direction * expected_count) {
        return Err(Error::NonGeneric(format!(
            "bend at {bend} needs tangent jump {jump}, expected {} vertical disks",
            expected_count
        )));
    }
    let places = t_left.eta.abs();
    if !places.is_integer() || places != int(k) {
        return Err(Error::NonGeneric(format!(
            "disk attachment count {places} differs from k = {k}"
        )));
    }

    let bent_leg = TropicalLeg {
        weight: wb,
        pieces: vec![
            LegPiece {
                start: pb.clone(),
                end: bend.clone(),
                tangent_start: zero_vector(),
                tangent_end: t_left,
            },
            LegPiece {
                start: bend.clone(),
                end: root.clone(),
                tangent_end: add(&t_right, &scale(&wb_r, &sub(&root, &bend))),
                tangent_start: t_right,
            },
        ],
    };
    let straight_leg = straight_leg(ws, ps, &root);
    let legs = if straight == 0 {
        [straight_leg, bent_leg]
    } else {
        [bent_leg, straight_leg]
    };
    let disks = if expected_count > 0 {
        vec![DiskAttachment {
            point: bend.clone(),
            count: expected_count as u64,
            direction: direction as i8,
        }]
    } else {
        Vec::new()
    };
    Ok(Some(TropicalTriangle {
        inputs: [q1, q2],
        output,
        root,
        singularity,
        legs,
        bent_leg: Some(bent),
        bend: Some(bend),
        disks,
        multiplicity: binomial(BigInt::from(k), BigInt::from(expected_count)),
    }))
}

/// Exact re-check of every tropical condition on `t`: the tangent law on
/// each piece, zero tangent at the inputs, balancing at the root and at the
/// bend (with the shear applied when a leg passes below the singularity),
/// and the multiplicity `binom(|det(u̇_L, (0,1))|, disks)`.
pub fn check_balancing(t: &TropicalTriangle) -> bool {
    for leg in &t.legs {
        let w = int(i64::from(leg.weight));
        if leg.pieces.is_empty()
            || leg.pieces[0].tangent_start != zero_vector()
            || leg.end() != &t.root
        {
            return false;
        }
        for piece in &leg.pieces {
            if sub(&piece.tangent_end, &piece.tangent_start)
                != scale(&w, &sub(&piece.end, &piece.start))
            {
                return false;
            }
        }
        for pair in leg.pieces.windows(2) {
            if pair[0].end != pair[1].start {
                return false;
            }
        }
    }
    if add(t.legs[0].tangent_at_end(), t.legs[1].tangent_at_end()) != zero_vector() {
        return false;
    }
    for (leg, input) in t.legs.iter().zip(&t.inputs) {
        if leg.start() != &point_position(input) {
            return false;
        }
    }
    let total: u64 = t.disks.iter().map(|d| d.count).sum();
    match (t.bent_leg, &t.bend) {
        (None, None) => {
            t.disks.is_empty() && t.multiplicity == BigInt::from(1) && straight_through(t)
        }
        (Some(idx), Some(bend)) => {
            let leg = &t.legs[idx];
            if leg.pieces.len() != 2 || &leg.pieces[0].end != bend || !bend.eta.is_zero() {
                return false;
            }
            let below = t.singularity.xi <= bend.xi;
            let direction: i8 = if below { 1 } else { -1 };
            if t.disks
                .iter()
                .any(|d| &d.point != bend || d.direction != direction || d.count == 0)
            {
                return false;
            }
            let t_left = &leg.pieces[0].tangent_end;
            let t_right = &leg.pieces[1].tangent_start;
            let arriving = if below {
                t_left.clone()
            } else if leg.start().eta.is_negative() {
                apply_matrix(&SHEAR, t_left)
            } else {
                apply_matrix(&SHEAR_INV, t_left)
            };
            if add(&arriving, &vertical(i64::from(direction) * total as i64)) != *t_right {
                return false;
            }
            let places = t_left.eta.abs();
            places.is_integer()
                && t.multiplicity == binomial(places.to_integer(), BigInt::from(total))
        }
        _ => false,
    }
}

/// The output of a disk-free triangle lies on the segment between the
/// inputs.
fn straight_through(t: &TropicalTriangle) -> bool {
    let p1 = point_position(&t.inputs[0]);
    let p2 = point_position(&t.inputs[1]);
    let d1 = sub(&t.root, &p1);
    let d2 = sub(&p2, &p1);
    &d1.eta * &d2.xi == &d1.xi * &d2.eta
}

/// Sum of multiplicities of the tropical triangles with the given inputs
/// and output depth `h`.
pub fn tropical_structure_constant(
    q1: FractionalPoint,
    q2: FractionalPoint,
    h: i64,
    singularity_xi: &Rational,
) -> Result<BigInt> {
    Ok(build_triangle(q1, q2, h, singularity_xi)?
        .map(|t| t.multiplicity)
        .unwrap_or_else(BigInt::zero))
}

/// `Σ_{s_1+…+s_r = s} ∏ binom(k_i, s_i)` by direct enumeration of ordered
/// partitions.
pub fn class_p_partition_constant(k_list: &[u64], s: u64) -> BigInt {
    fn go(ks: &[u64], s: u64) -> BigInt {
        match ks.split_first() {
            None => BigInt::from(u8::from(s == 0)),
            Some((&k, rest)) => (0..=s.min(k))
                .map(|si| binomial(BigInt::from(k), BigInt::from(si)) * go(rest, s - si))
                .sum(),
        }
    }
    go(k_list, s)
}

/// Builds the triangle with the singularity just below and just above the
/// bend and compares multiplicities. Both must exist and balance.
pub fn singularity_position_invariance(
    q1: FractionalPoint,
    q2: FractionalPoint,
    h: i64,
) -> Result<bool> {
    let probe = build_triangle(q1, q2, h, &int(0))?;
    let Some(bend) = probe.and_then(|t| t.bend) else {
        return Err(Error::Domain(
            "position invariance needs an opposite-sign triangle".into(),
        ));
    };
    let offset = ratio(1, 4);
    let low = build_triangle(q1, q2, h, &(&bend.xi - &offset))?;
    let high = build_triangle(q1, q2, h, &(&bend.xi + &offset))?;
    Ok(match (low, high) {
        (Some(l), Some(u)) => {
            check_balancing(&l) && check_balancing(&u) && l.multiplicity == u.multiplicity
        }
        _ => false,
    })
}
