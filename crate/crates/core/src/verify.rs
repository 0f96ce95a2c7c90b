//! Exhaustive cross-checks between the independent derivations of the
//! structure constants. Each sweep returns a [`CheckResult`]; the suites
//! group them the way the command line exposes them.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::affine_base::{
    count_points, cp2_model, dp6_model, fractional_points, Dp6Params, FractionalPoint,
};
use crate::coordinate_ring::verify_iso;
use crate::exec::Execution;
use crate::floer_algebra::{
    critical_cover_class_p, k_value_cp2, mu2, ring_product, AlgebraModel, BasisVector, FormalSum,
};
use crate::homotopy_words::{
    brute_force_classify, enumerate_admissible, expected_homotopy_count, homotopy_count,
};
use crate::rational::{ratio, Rational};
use crate::syz_numeric::{
    critical_points, expected_critical_values, hessian_identity, log_integral, syz_coordinates,
    FiberParams,
};
use crate::tropical::{
    build_triangle, check_balancing, class_p_partition_constant, singularity_position_invariance,
    tropical_structure_constant,
};
use crate::wrapped::{
    continuation_map, dilation_center, e_element, laurent_product, point_of, rational_function,
    wrapped_basis, wrapped_product, ComplementCase, ExtendedPoint, Window,
};

const MAX_EXAMPLES: usize = 8;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub checked: u64,
    pub failures: Vec<String>,
    /// Largest measured error for numerical checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    pub elapsed_ms: f64,
}

impl CheckResult {
    fn from_failures(name: &str, checked: u64, failures: Vec<String>, start: Instant) -> Self {
        let passed = failures.is_empty();
        let mut failures = failures;
        failures.truncate(MAX_EXAMPLES);
        Self {
            name: name.to_string(),
            passed,
            checked,
            failures,
            max_error: None,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }

    fn with_error(mut self, e: f64) -> Self {
        self.max_error = Some(e);
        self
    }

    fn error(name: &str, err: impl std::fmt::Display, start: Instant) -> Self {
        Self::from_failures(name, 0, vec![err.to_string()], start)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn collect<T>(results: Vec<Vec<T>>) -> Vec<T> {
    results.into_iter().flatten().collect()
}

/// `|B((1/d)Z)| = (d+2)(d+1)/2` on the projective-plane base, from both the
/// column walk and the lattice scan.
pub fn hilbert_counts(max_d: u32) -> CheckResult {
    let start = Instant::now();
    let m = cp2_model();
    let mut failures = Vec::new();
    for d in 0..=max_d {
        let expected = u64::from((d + 2) * (d + 1) / 2);
        let walked = fractional_points(&m, d).len() as u64;
        let scanned = count_points(&m, d);
        if walked != expected || scanned != expected {
            failures.push(format!(
                "d={d}: walk {walked}, scan {scanned}, expected {expected}"
            ));
        }
    }
    CheckResult::from_failures("hilbert polynomial", u64::from(max_d) + 1, failures, start)
}

/// Enumeration agrees with the lattice-scan oracle on the four-sided
/// two-singularity base.
pub fn dp6_point_counts(params: Dp6Params, max_d: u32) -> CheckResult {
    let start = Instant::now();
    let m = match dp6_model(params) {
        Ok(m) => m,
        Err(e) => return CheckResult::error("dp6 point counts", e, start),
    };
    let mut failures = Vec::new();
    for d in 0..=max_d {
        let walked = fractional_points(&m, d).len() as u64;
        let scanned = count_points(&m, d);
        if walked != scanned {
            failures.push(format!("d={d}: walk {walked}, scan {scanned}"));
        }
    }
    CheckResult::from_failures("dp6 point counts", u64::from(max_d) + 1, failures, start)
}

fn basis(model: &AlgebraModel, d1: i64, d2: i64) -> Vec<BasisVector> {
    model.basis(d1, d2).unwrap_or_default()
}

/// Every product of basis vectors with denominators `<= max_n` lands on
/// admissible outputs in column `a+b` with positive coefficients.
pub fn closure_sweep(model: &AlgebraModel, max_n: i64, exec: Execution) -> CheckResult {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        for m in 1..=max_n {
            for q1 in basis(model, 0, n) {
                jobs.push((q1, m));
            }
        }
    }
    let results = exec.map(&jobs, |&(q1, m)| {
        let mut fails = Vec::new();
        let mut count = 0u64;
        for q2 in basis(model, q1.d2, q1.d2 + m) {
            count += 1;
            match mu2(model, &q2, &q1) {
                Ok(s) => {
                    for (v, c) in s.terms() {
                        if !model.is_admissible(&v) || v.a != q1.a + q2.a || !c.is_positive() {
                            fails.push(format!("mu2({q2}, {q1}) has term {c}*{v}"));
                        }
                    }
                }
                Err(e) => fails.push(format!("mu2({q2}, {q1}): {e}")),
            }
        }
        (count, fails)
    });
    let checked = results.iter().map(|r| r.0).sum();
    let failures = collect(results.into_iter().map(|r| r.1).collect());
    CheckResult::from_failures("closure and column grading", checked, failures, start)
}

/// Coefficient patterns of `mu2(q_b, q_a)` and `mu2(q_a, q_b)` agree.
pub fn symmetry_sweep(max_n: i64) -> CheckResult {
    let start = Instant::now();
    let model = AlgebraModel::Cp2;
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=max_n {
        for m in 1..=max_n {
            for q1 in basis(&model, 0, n) {
                for q2 in basis(&model, n, n + m) {
                    checked += 1;
                    let swapped_first = BasisVector::new(0, m, q2.a, q2.i);
                    let swapped_second = BasisVector::new(m, n + m, q1.a, q1.i);
                    let lhs = mu2(&model, &q2, &q1);
                    let rhs = mu2(&model, &swapped_second, &swapped_first);
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) if l == r => {}
                        (l, r) => failures.push(format!("{q1}, {q2}: {l:?} vs {r:?}")),
                    }
                }
            }
        }
    }
    CheckResult::from_failures("product symmetry", checked, failures, start)
}

/// The d = 0 unit is a two-sided identity.
pub fn unit_sweep(max_n: i64) -> CheckResult {
    let start = Instant::now();
    let model = AlgebraModel::Cp2;
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=max_n {
        for q in basis(&model, 0, n) {
            checked += 1;
            let x = FormalSum::basis(q);
            let left = ring_product(&model, &FormalSum::unit(0), &x);
            let right = ring_product(&model, &x, &FormalSum::unit(n));
            if left.as_ref() != Ok(&x) || right.as_ref() != Ok(&x) {
                failures.push(format!("unit fails on {q}"));
            }
        }
    }
    CheckResult::from_failures("unit law", checked, failures, start)
}

/// `(x*y)*z = x*(y*z)` over all basis triples with denominators `>= 1`
/// summing to at most `max_total`.
pub fn associativity_sweep(model: &AlgebraModel, max_total: i64, exec: Execution) -> CheckResult {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for n1 in 1..=max_total {
        for n2 in 1..=max_total - n1 {
            for x in basis(model, 0, n1) {
                jobs.push((x, n2));
            }
        }
    }
    let results = exec.map(&jobs, |&(x, n2)| {
        let mut fails = Vec::new();
        let mut count = 0u64;
        let d2 = x.d2 + n2;
        let max_n3 = max_total - x.d2 - n2;
        for y in basis(model, x.d2, d2) {
            let (xs, ys) = (FormalSum::basis(x), FormalSum::basis(y));
            let xy = match ring_product(model, &xs, &ys) {
                Ok(v) => v,
                Err(e) => {
                    fails.push(format!("{x}*{y}: {e}"));
                    continue;
                }
            };
            for n3 in 1..=max_n3 {
                for z in basis(model, d2, d2 + n3) {
                    count += 1;
                    let zs = FormalSum::basis(z);
                    let left = ring_product(model, &xy, &zs);
                    let right =
                        ring_product(model, &ys, &zs).and_then(|yz| ring_product(model, &xs, &yz));
                    match (left, right) {
                        (Ok(l), Ok(r)) if l == r => {}
                        (l, r) => {
                            fails.push(format!("({x}*{y})*{z} = {l:?}, {x}*({y}*{z}) = {r:?}"))
                        }
                    }
                }
            }
        }
        (count, fails)
    });
    let checked = results.iter().map(|r| r.0).sum();
    let failures = collect(results.into_iter().map(|r| r.1).collect());
    CheckResult::from_failures("associativity", checked, failures, start)
}

/// The geometric critical-value count reduces to `k_value_cp2`.
pub fn cover_sweep(max_abs: i64) -> CheckResult {
    let start = Instant::now();
    let m = cp2_model();
    let mut failures = Vec::new();
    let mut checked = 0;
    let top = max_abs as u32;
    for n in 1..=top {
        for mm in 1..=top {
            for a in -i64::from(n)..=i64::from(n) {
                for b in -i64::from(mm)..=i64::from(mm) {
                    checked += 1;
                    match critical_cover_class_p(&m, a, b, n, mm) {
                        Ok(c) if c.total() == k_value_cp2(a, b) => {}
                        other => failures.push(format!("a={a} b={b} n={n} m={mm}: {other:?}")),
                    }
                }
            }
        }
    }
    CheckResult::from_failures("critical cover vs closed form", checked, failures, start)
}

pub fn ring_iso_check(n_max: u32, exec: Execution) -> CheckResult {
    let start = Instant::now();
    match verify_iso(n_max, exec) {
        Ok(r) => CheckResult::from_failures(
            "ring isomorphism",
            r.products_checked as u64,
            r.mismatches
                .iter()
                .map(|m| {
                    format!(
                        "{} * {}: {} vs {}",
                        m.first, m.second, m.polynomial, m.floer
                    )
                })
                .collect(),
            start,
        ),
        Err(e) => CheckResult::error("ring isomorphism", e, start),
    }
}

/// Product-side checks: ring isomorphism, closure, associativity, symmetry,
/// unit and the geometric critical count.
pub fn ring_suite(max_degree: u32, exec: Execution) -> SuiteReport {
    let model = AlgebraModel::Cp2;
    let n = i64::from(max_degree);
    SuiteReport {
        suite: "ring".into(),
        checks: vec![
            hilbert_counts(50),
            ring_iso_check(max_degree, exec),
            closure_sweep(&model, n.max(8), exec),
            associativity_sweep(&model, n + 3, exec),
            symmetry_sweep(n),
            unit_sweep(n),
            cover_sweep(8),
        ],
    }
}

/// Free-group checks for `k <= max_k`.
pub fn homotopy_suite(max_k: usize, exec: Execution) -> SuiteReport {
    let mut checks = Vec::new();

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 0..=max_k {
        let mut listed = enumerate_admissible(k);
        checked += 1;
        if listed.len() != 1 << k {
            failures.push(format!("k={k}: {} sequences", listed.len()));
        }
        listed.sort();
        let classified = brute_force_classify(k, 2, exec);
        let trivial: Vec<_> = classified
            .iter()
            .filter(|c| c.1)
            .map(|c| c.0.clone())
            .collect();
        if trivial != listed {
            failures.push(format!(
                "k={k}: brute force finds {} trivial words",
                trivial.len()
            ));
        }
        for (d, is_trivial) in &classified {
            checked += 1;
            if d.is_admissible() != *is_trivial {
                failures.push(format!(
                    "k={k}: {d} admissible={} trivial={is_trivial}",
                    d.is_admissible()
                ));
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "admissible sequences = trivial words",
        checked,
        failures,
        start,
    ));

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 0..=max_k {
        for (i, j) in [(0, 0), (1, 2), (3, 0)] {
            let mut total = 0;
            for h in i + j - 2..=i + j + k as i64 + 2 {
                checked += 1;
                let c = homotopy_count(k, i, j, h);
                total += c;
                if BigInt::from(c) != expected_homotopy_count(k, i, j, h) {
                    failures.push(format!("k={k} i={i} j={j} h={h}: {c}"));
                }
            }
            if total != 1 << k {
                failures.push(format!("k={k}: counts sum to {total}"));
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "homotopy counts = binomials",
        checked,
        failures,
        start,
    ));

    let start = Instant::now();
    let model = AlgebraModel::Cp2;
    let mut failures = Vec::new();
    let mut checked = 0;
    let top = (max_k as i64).clamp(1, 6);
    for n in 1..=top {
        for m in 1..=top {
            for q1 in basis(&model, 0, n) {
                for q2 in basis(&model, n, n + m) {
                    let k = k_value_cp2(q1.a, q2.a) as usize;
                    if k > max_k {
                        continue;
                    }
                    let prod = match mu2(&model, &q2, &q1) {
                        Ok(p) => p,
                        Err(e) => {
                            failures.push(e.to_string());
                            continue;
                        }
                    };
                    let a = q1.a + q2.a;
                    for h in 0..=(n + m - a.abs()) / 2 {
                        checked += 1;
                        let c = homotopy_count(k, q1.i, q2.i, h);
                        if BigInt::from(c) != prod.coefficient(a, h) {
                            failures.push(format!(
                                "{q1}, {q2}, h={h}: {c} vs {}",
                                prod.coefficient(a, h)
                            ));
                        }
                    }
                }
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "homotopy counts = product coefficients",
        checked,
        failures,
        start,
    ));
    SuiteReport {
        suite: "homotopy".into(),
        checks,
    }
}

/// The position used for the singularity in tropical sweeps.
pub fn default_singularity_xi() -> Rational {
    ratio(-1, 4)
}

/// Tropical checks on denominators `<= max` and invariance for `k <= max_k`.
pub fn tropical_suite(max: u32, max_k: u32, exec: Execution) -> SuiteReport {
    let mut checks = Vec::new();
    let model = AlgebraModel::Cp2;
    let xi = default_singularity_xi();

    let start = Instant::now();
    let mut jobs = Vec::new();
    for n in 1..=max {
        for m in 1..=max {
            for q1 in basis(&model, 0, i64::from(n)) {
                jobs.push((q1, m));
            }
        }
    }
    let results = exec.map(&jobs, |&(q1, m)| {
        let mut fails = Vec::new();
        let mut count = 0u64;
        let n = q1.d2 as u32;
        for q2 in basis(&model, q1.d2, q1.d2 + i64::from(m)) {
            let prod = match mu2(&model, &q2, &q1) {
                Ok(p) => p,
                Err(e) => {
                    fails.push(e.to_string());
                    continue;
                }
            };
            let a = q1.a + q2.a;
            let depth_max = (i64::from(n + m) - a.abs()) / 2;
            for h in 0..=depth_max + 1 {
                count += 1;
                let f1 = FractionalPoint::new(q1.a, q1.i, n);
                let f2 = FractionalPoint::new(q2.a, q2.i, m);
                match build_triangle(f1, f2, h, &xi) {
                    Ok(t) => {
                        if let Some(t) = &t {
                            if !check_balancing(t) {
                                fails.push(format!("{f1}, {f2}, h={h}: not balanced"));
                            }
                        }
                        let mult = t.map(|t| t.multiplicity).unwrap_or_else(BigInt::zero);
                        if mult != prod.coefficient(a, h) {
                            fails.push(format!(
                                "{f1}, {f2}, h={h}: tropical {mult}, product {}",
                                prod.coefficient(a, h)
                            ));
                        }
                    }
                    Err(e) => fails.push(format!("{f1}, {f2}, h={h}: {e}")),
                }
            }
        }
        (count, fails)
    });
    let checked = results.iter().map(|r| r.0).sum();
    let failures = collect(results.into_iter().map(|r| r.1).collect());
    checks.push(CheckResult::from_failures(
        "tropical counts = product coefficients",
        checked,
        failures,
        start,
    ));

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 1..=max_k {
        for s in 0..=k {
            checked += 1;
            let q1 = FractionalPoint::new(-i64::from(k), 0, k);
            let q2 = FractionalPoint::new(i64::from(k), 0, k);
            match singularity_position_invariance(q1, q2, i64::from(s)) {
                Ok(true) => {}
                other => failures.push(format!("k={k} s={s}: {other:?}")),
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "singularity position invariance",
        checked,
        failures,
        start,
    ));

    let start = Instant::now();
    let t = tropical_structure_constant(
        FractionalPoint::new(-2, 0, 2),
        FractionalPoint::new(2, 0, 2),
        1,
        &xi,
    );
    let bend = build_triangle(
        FractionalPoint::new(-2, 0, 2),
        FractionalPoint::new(2, 0, 2),
        1,
        &xi,
    )
    .ok()
    .flatten()
    .and_then(|t| t.bend);
    let ok = t.as_ref().ok() == Some(&BigInt::from(2)) && bend.map(|b| b.xi) == Some(ratio(-1, 4));
    checks.push(CheckResult::from_failures(
        "x^2 z^2 triangle has multiplicity 2 and bend (0,-1/4)",
        1,
        if ok { vec![] } else { vec![format!("{t:?}")] },
        start,
    ));
    SuiteReport {
        suite: "tropical".into(),
        checks,
    }
}

fn compositions(total: u64) -> Vec<Vec<u64>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Ordered-partition identity for all lists of positive `k_i` with sum
/// `<= max_sum`, plus lattice counts on the two-singularity base.
pub fn class_p_suite(max_sum: u64, dp6: Dp6Params, max_d: u32) -> SuiteReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for total in 0..=max_sum {
        for ks in compositions(total) {
            for s in 0..=total + 1 {
                checked += 1;
                let lhs = class_p_partition_constant(&ks, s);
                let rhs = if s <= total {
                    binomial(BigInt::from(total), BigInt::from(s))
                } else {
                    BigInt::zero()
                };
                if lhs != rhs {
                    failures.push(format!("{ks:?}, s={s}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    let partitions = CheckResult::from_failures("partition identity", checked, failures, start);
    SuiteReport {
        suite: "class-p".into(),
        checks: vec![partitions, dp6_point_counts(dp6, max_d)],
    }
}

/// Windows used by the wrapped sweeps: wide enough for the products of
/// inputs drawn from `inputs`.
pub fn default_windows() -> (Window, Window) {
    (Window::new(3, 2), Window::new(6, 6))
}

fn wrapped_vector(p: &ExtendedPoint, d1: i64) -> BasisVector {
    BasisVector::new(d1, d1 + i64::from(p.d), p.a, p.i)
}

/// Wrapped checks for denominators `<= max_degree` on windowed bases.
pub fn wrapped_suite(max_degree: u32, window: Window, exec: Execution) -> SuiteReport {
    let mut checks = Vec::new();
    let model = AlgebraModel::Cp2;

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    let top = i64::from(max_degree);
    for case in ComplementCase::ALL {
        for n in 1..=top {
            for m in 1..=top {
                for q1 in basis(&model, 0, n) {
                    for q2 in basis(&model, n, n + m) {
                        checked += 1;
                        let w = wrapped_product(case, &q2, &q1).map(|w| w.sum);
                        let c = mu2(&model, &q2, &q1);
                        if w != c {
                            failures.push(format!("[{case}] {q1}, {q2}: {w:?} vs {c:?}"));
                        }
                    }
                }
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "wrapped product = compact product",
        checked,
        failures,
        start,
    ));

    let start = Instant::now();
    let mut jobs = Vec::new();
    for case in ComplementCase::ALL {
        for n in 0..=max_degree {
            for p1 in wrapped_basis(case, n, window) {
                jobs.push((case, p1));
            }
        }
    }
    let results = exec.map(&jobs, |&(case, p1)| {
        let mut fails = Vec::new();
        let mut count = 0u64;
        for m in 0..=max_degree {
            for p2 in wrapped_basis(case, m, window) {
                count += 1;
                let q1 = wrapped_vector(&p1, 0);
                let q2 = wrapped_vector(&p2, q1.d2);
                let lhs = wrapped_product(case, &q2, &q1).map(|w| {
                    w.points()
                        .map(|(p, c)| (p, c.clone()))
                        .collect::<BTreeMap<_, _>>()
                });
                let rhs = rational_function(&p1)
                    .and_then(|f1| rational_function(&p2).map(|f2| (f1, f2)))
                    .and_then(|(f1, f2)| laurent_product(case, &f1, &f2));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => {}
                    (l, r) => fails.push(format!("[{case}] {p1} * {p2}: {l:?} vs {r:?}")),
                }
            }
        }
        (count, fails)
    });
    let checked = results.iter().map(|r| r.0).sum();
    let failures = collect(results.into_iter().map(|r| r.1).collect());
    checks.push(CheckResult::from_failures(
        "wrapped product = Laurent multiplication",
        checked,
        failures,
        start,
    ));

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for case in ComplementCase::ALL {
        for r in (case.wrap_step()..=6).step_by(case.wrap_step() as usize) {
            let (e, _) = match e_element(case, r) {
                Ok(v) => v,
                Err(err) => {
                    failures.push(err.to_string());
                    continue;
                }
            };
            for n in 1..=max_degree {
                let map = match continuation_map(case, 0, i64::from(n), r) {
                    Ok(m) => m,
                    Err(err) => {
                        failures.push(err.to_string());
                        continue;
                    }
                };
                for p in wrapped_basis(case, n, window) {
                    checked += 1;
                    let q = wrapped_vector(&p, 0);
                    let ev = wrapped_vector(&e, q.d2);
                    let image = map.apply(&p);
                    let via_product = wrapped_product(case, &ev, &q);
                    let expected = image
                        .as_ref()
                        .ok()
                        .map(|i| FormalSum::basis(wrapped_vector(i, 0)));
                    if via_product.as_ref().ok().map(|w| &w.sum) != expected.as_ref() {
                        failures.push(format!(
                            "[{case}] e_{r} * {p}: {via_product:?} vs {image:?}"
                        ));
                        continue;
                    }
                    let image = image.expect("checked above");
                    let (from, to) = (
                        p.position().expect("n > 0"),
                        image.position().expect("n > 0"),
                    );
                    if map.dilate(&from) != to {
                        failures.push(format!("[{case}] dilation of {p} misses {image}"));
                    }
                    // fixed point of the affine map p -> f p + (1 - f) c
                    let f = map.dilation_factor();
                    let one_minus = Rational::from_integer(1.into()) - &f;
                    let c_eta = (&to.eta - &f * &from.eta) / &one_minus;
                    let c_xi = (&to.xi - &f * &from.xi) / &one_minus;
                    let center = dilation_center(case);
                    if c_eta != center.eta || c_xi != center.xi {
                        failures.push(format!(
                            "[{case}] {p}: fixed point ({c_eta}, {c_xi}) vs {center}"
                        ));
                    }
                    for r2 in (case.wrap_step()..=6 - r).step_by(case.wrap_step() as usize) {
                        checked += 1;
                        let composed = continuation_map(case, 0, i64::from(n) + r, r2)
                            .and_then(|second| map.then(&second))
                            .and_then(|c| c.apply(&p));
                        let stepwise = continuation_map(case, 0, i64::from(n) + r, r2)
                            .and_then(|second| second.apply(&image));
                        let direct = continuation_map(case, 0, i64::from(n), r + r2)
                            .and_then(|c| c.apply(&p));
                        if composed.as_ref().ok() != direct.as_ref().ok()
                            || stepwise.as_ref().ok() != direct.as_ref().ok()
                        {
                            failures.push(format!(
                                "[{case}] r={r} r'={r2} on {p}: {stepwise:?} vs {direct:?}"
                            ));
                        }
                    }
                }
            }
            for r2 in (case.wrap_step()..=6).step_by(case.wrap_step() as usize) {
                checked += 1;
                let prod = e_element(case, r2).and_then(|(_, f2)| {
                    let f1 = rational_function(&e)?;
                    laurent_product(case, &f1, &f2)
                });
                let expected = e_element(case, r + r2).map(|(p, _)| p);
                let ok = match (&prod, &expected) {
                    (Ok(p), Ok(e)) => p.len() == 1 && p.get(e) == Some(&BigInt::from(1)),
                    _ => false,
                };
                if !ok {
                    failures.push(format!("[{case}] e_{r} e_{r2}: {prod:?} vs {expected:?}"));
                }
                if let Ok(e) = &expected {
                    let roundtrip = rational_function(e).and_then(|f| point_of(case, &f));
                    if roundtrip.as_ref().ok() != Some(e) {
                        failures.push(format!("[{case}] {e} does not round trip"));
                    }
                }
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "continuation = e_r product = dilation",
        checked,
        failures,
        start,
    ));
    SuiteReport {
        suite: "wrapped".into(),
        checks,
    }
}

/// Grid of `(R, λ)` used for the coordinate relations: five radii on each
/// side of the singular fiber, ten levels in `[-2, 2]`.
pub fn numeric_grid() -> Vec<(f64, f64)> {
    let lin =
        |a: f64, b: f64, n: usize| (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64);
    let radii: Vec<f64> = lin(0.2, 0.9, 5).chain(lin(1.1, 5.0, 5)).collect();
    let mut out = Vec::new();
    for &r in &radii {
        for l in lin(-2.0, 2.0, 10) {
            out.push((r, l));
        }
    }
    out
}

/// Numerical checks. `tol` is the quadrature tolerance; relations are
/// judged at `1e-8`, critical values at `1e-10` relative, the Hessian at
/// `1e-6` relative.
pub fn numeric_suite(tol: f64, exec: Execution) -> SuiteReport {
    let mut checks = Vec::new();

    let start = Instant::now();
    let grid = numeric_grid();
    let results = exec.map(&grid, |&(r, l)| {
        FiberParams::new(r, l)
            .and_then(|p| syz_coordinates(p, tol))
            .map(|c| (r, l, c))
    });
    let mut failures = Vec::new();
    let mut max_err: f64 = 0.0;
    let mut coords = Vec::new();
    for res in results {
        match res {
            Ok((r, l, c)) => {
                let target = if r < 1.0 { 0.0 } else { c.eta };
                let err = (c.xi + c.psi - target).abs();
                max_err = max_err.max(err);
                if err > 1e-8 {
                    failures.push(format!("R={r} lambda={l}: xi+psi-target = {err:e}"));
                }
                coords.push((r, l, c.xi));
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    checks.push(
        CheckResult::from_failures(
            "xi + psi relations on grid",
            grid.len() as u64,
            failures,
            start,
        )
        .with_error(max_err),
    );

    let start = Instant::now();
    let mut failures = Vec::new();
    for w in coords.windows(2) {
        let ((r0, l0, x0), (r1, l1, x1)) = (w[0], w[1]);
        if r0 == r1 && l1 > l0 && x1 < x0 - 1e-12 {
            failures.push(format!("R={r0}: xi({l0}) = {x0} > xi({l1}) = {x1}"));
        }
    }
    checks.push(CheckResult::from_failures(
        "xi nondecreasing in lambda",
        coords.len() as u64,
        failures,
        start,
    ));

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut max_err: f64 = 0.0;
    for (r, expected) in [(0.5, 0.0), (2.0, 2.0 * std::f64::consts::PI * 2f64.ln())] {
        match log_integral(r, tol.min(1e-10)) {
            Ok(v) => {
                let err = (v - expected).abs();
                max_err = max_err.max(err);
                if err > 1e-8 {
                    failures.push(format!("R={r}: {v} vs {expected}"));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    checks.push(CheckResult::from_failures("log integral", 2, failures, start).with_error(max_err));

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut max_err: f64 = 0.0;
    for lambda in [1.0, 3.0, 6.0] {
        match critical_points(lambda) {
            Ok(pts) => {
                let expected = expected_critical_values(lambda);
                for (p, e) in pts.iter().zip(expected.iter()) {
                    let err = (p.value() - e).norm() / e.norm();
                    max_err = max_err.max(err);
                    if err > 1e-10 || p.residual > 1e-12 {
                        failures.push(format!(
                            "Lambda={lambda}: {:?} vs {e} (residual {:e})",
                            p.value(),
                            p.residual
                        ));
                    }
                }
                let product: num_complex::Complex64 = pts.iter().map(|p| p.value()).product();
                let target = 27.0 * (-lambda).exp();
                if (product - target).norm() > 1e-10 * target {
                    failures.push(format!("Lambda={lambda}: product {product} vs {target}"));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    checks.push(
        CheckResult::from_failures("superpotential critical values", 3, failures, start)
            .with_error(max_err),
    );

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut max_err: f64 = 0.0;
    let mut checked = 0;
    let mut samples = vec![(1.3, -0.4), (2.0, 3.0), (1.0, 0.0)];
    for kx in 1..=10 {
        for ky in -5..=5 {
            samples.push((0.5 * kx as f64, 0.6 * ky as f64));
        }
    }
    for (x, y) in samples {
        checked += 1;
        match hessian_identity(x, y) {
            Ok(r) => {
                max_err = max_err.max(r.relative_error);
                if r.relative_error > 1e-6
                    || !r.positive_definite
                    || (r.ratio - y / x).abs() > 1e-12 * (1.0 + (y / x).abs())
                {
                    failures.push(format!("({x}, {y}): {r:?}"));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    checks.push(
        CheckResult::from_failures(
            "Hessian closed form vs finite differences",
            checked,
            failures,
            start,
        )
        .with_error(max_err),
    );
    SuiteReport {
        suite: "numeric".into(),
        checks,
    }
}
