use affine_floer::affine_base::{
    cp2_model, fractional_points, monodromy_shear, validate, BoundaryPolyline, FractionalPoint,
    RationalPoint, Singularity, Violation,
};
use affine_floer::coordinate_ring::{
    expand_in_qbasis, q_monomial, verify_iso, HomogeneousPolynomial, QBasisIndex,
};
use affine_floer::floer_algebra::{critical_cover_class_p, mu2, AlgebraModel, BasisVector};
use affine_floer::homotopy_words::{
    enumerate_admissible, expected_homotopy_count, free_reduce, homotopy_count, triangle_word,
    DeltaSequence,
};
use affine_floer::rational::{int, ratio};
use affine_floer::syz_numeric::{
    critical_points, hessian_identity, log_integral, syz_coordinates, FiberParams,
};
use affine_floer::tropical::{
    build_triangle, class_p_partition_constant, tropical_structure_constant,
};
use affine_floer::wrapped::{
    e_element, rational_function, wrapped_basis, wrapped_product, ComplementCase, ExtendedPoint,
    Window,
};
use affine_floer::Execution;
use num_bigint::BigInt;
use num_integer::binomial;

fn bv(d1: i64, d2: i64, a: i64, i: i64) -> BasisVector {
    BasisVector::new(d1, d2, a, i)
}

fn coeffs(model: &AlgebraModel, q2: BasisVector, q1: BasisVector) -> Vec<((i64, i64), i64)> {
    let s = mu2(model, &q2, &q1).unwrap();
    s.coefficients()
        .iter()
        .map(|(k, v)| (*k, i64::try_from(v).unwrap()))
        .collect()
}

#[test]
fn projective_plane_base() {
    let m = cp2_model();
    assert!(validate(&m).is_empty());
    assert_eq!(m.top.slopes(), vec![int(0)]);
    assert_eq!(m.bottom.slopes(), vec![ratio(-1, 2), ratio(1, 2)]);
    assert_eq!(fractional_points(&m, 1).len(), 3);
    assert_eq!(fractional_points(&m, 2).len(), 6);
    assert_eq!(fractional_points(&m, 4).len(), 15);
    assert_eq!(fractional_points(&m, 0), vec![FractionalPoint::unit()]);

    let s = Singularity::simple(int(0), ratio(-1, 4));
    assert_eq!(monodromy_shear(&s, 1), [[1, 0], [1, 1]]);
    assert_eq!(monodromy_shear(&s, 0), [[1, 0], [0, 1]]);

    let mut bad = m.clone();
    // bottom slope jump +2 at the singularity instead of +1
    bad.bottom = BoundaryPolyline::new(vec![
        RationalPoint::from_ratios((-1, 1), (0, 1)),
        RationalPoint::from_ratios((0, 1), (-1, 1)),
        RationalPoint::from_ratios((1, 1), (1, 1)),
    ]);
    let v = validate(&bad);
    assert_eq!(
        v.iter()
            .filter(|v| matches!(v, Violation::MonodromyMismatch { .. }))
            .count(),
        1,
        "{v:?}"
    );
}

#[test]
fn products_on_the_projective_plane() {
    let m = AlgebraModel::Cp2;
    assert_eq!(
        coeffs(&m, bv(1, 2, 1, 0), bv(0, 1, -1, 0)),
        vec![((0, 0), 1), ((0, 1), 1)]
    );
    assert_eq!(
        coeffs(&m, bv(2, 4, 2, 0), bv(0, 2, -2, 0)),
        vec![((0, 0), 1), ((0, 1), 2), ((0, 2), 1)]
    );
    assert_eq!(
        coeffs(&m, bv(1, 2, 0, 0), bv(0, 1, 0, 0)),
        vec![((0, 0), 1)]
    );
    let man = cp2_model();
    assert_eq!(
        critical_cover_class_p(&man, -1, 2, 3, 3).unwrap().counts,
        vec![1]
    );
    assert_eq!(
        critical_cover_class_p(&man, -2, 2, 4, 4).unwrap().counts,
        vec![2]
    );
}

#[test]
fn polynomial_basis() {
    assert_eq!(
        q_monomial(QBasisIndex::new(0, 0, 1).unwrap()).unwrap(),
        HomogeneousPolynomial::y()
    );
    assert_eq!(
        q_monomial(QBasisIndex::new(0, 1, 2).unwrap()).unwrap(),
        HomogeneousPolynomial::p()
    );
    assert_eq!(
        q_monomial(QBasisIndex::new(-2, 1, 4).unwrap())
            .unwrap()
            .to_string(),
        "x^3*z - x^2*y^2"
    );
    let xz3 = HomogeneousPolynomial::from_terms(6, [((3, 0, 3), BigInt::from(1))]).unwrap();
    let got: Vec<(i64, BigInt)> = expand_in_qbasis(&xz3)
        .unwrap()
        .into_iter()
        .map(|(q, c)| (q.i, c))
        .collect();
    let want: Vec<(i64, BigInt)> = [1, 3, 3, 1]
        .iter()
        .enumerate()
        .map(|(i, c)| (i as i64, BigInt::from(*c)))
        .collect();
    assert_eq!(got, want);
    let report = verify_iso(2, Execution::Sequential).unwrap();
    assert!(report.passed() && report.products_checked > 0);
}

#[test]
fn homotopy_words() {
    let d = |v: &[i64]| DeltaSequence::new(v.to_vec());
    let not_trivial = triangle_word(0, 0, 1, 1, &d(&[1, -1])).unwrap();
    assert!(!free_reduce(&not_trivial).is_empty());
    let trivial = triangle_word(0, 0, 0, 1, &d(&[1, -1])).unwrap();
    assert!(free_reduce(&trivial).is_empty());
    assert!(free_reduce(&triangle_word(0, 0, 0, 0, &d(&[0])).unwrap()).is_empty());

    let mut two = enumerate_admissible(2);
    two.sort();
    let mut want = vec![
        d(&[0, 0, 0]),
        d(&[1, -1, 0]),
        d(&[0, 1, -1]),
        d(&[1, 0, -1]),
    ];
    want.sort();
    assert_eq!(two, want);
    assert_eq!(enumerate_admissible(5).len(), 32);

    assert_eq!(homotopy_count(2, 0, 0, 1), 2);
    assert_eq!(homotopy_count(3, 0, 0, 5), 0);
    for k in 0..=8 {
        assert_eq!(homotopy_count(k, 1, 2, 3), 1);
        for h in 0..=k as i64 {
            assert_eq!(
                BigInt::from(homotopy_count(k, 0, 0, h)),
                expected_homotopy_count(k, 0, 0, h)
            );
        }
    }
}

#[test]
fn headline_tropical_triangle() {
    let xi = ratio(-1, 4);
    let (q1, q2) = (
        FractionalPoint::new(-2, 0, 2),
        FractionalPoint::new(2, 0, 2),
    );
    let t = build_triangle(q1, q2, 1, &xi).unwrap().unwrap();
    assert_eq!(t.bend, Some(RationalPoint::from_ratios((0, 1), (-1, 4))));
    assert_eq!(t.multiplicity, BigInt::from(2));
    assert_eq!(
        *t.legs[1].tangent_at_end(),
        RationalPoint::from_ratios((-2, 1), (-1, 2))
    );
    assert_eq!(
        *t.legs[0].tangent_at_end(),
        RationalPoint::from_ratios((2, 1), (1, 2))
    );
    assert!(build_triangle(q1, q2, 5, &xi).unwrap().is_none());
    let y = FractionalPoint::new(0, 0, 1);
    assert_eq!(
        tropical_structure_constant(y, y, 0, &xi).unwrap(),
        BigInt::from(1)
    );

    assert_eq!(class_p_partition_constant(&[2], 1), BigInt::from(2));
    assert_eq!(class_p_partition_constant(&[1, 1], 1), BigInt::from(2));
    for s in 0..=6u64 {
        assert_eq!(
            class_p_partition_constant(&[3, 2, 1], s),
            binomial(BigInt::from(6), BigInt::from(s))
        );
    }
}

#[test]
fn wrapped_cases() {
    assert_eq!(
        wrapped_basis(ComplementCase::D, 1, Window::new(1, 2)).len(),
        15
    );
    let c = wrapped_basis(ComplementCase::C, 1, Window::new(1, 3));
    assert!(c.iter().filter(|p| p.a == 0).all(|p| p.i <= 0));
    assert!(wrapped_basis(ComplementCase::L, 1, Window::new(1, 3))
        .iter()
        .all(|p| p.i >= 0));

    let d = wrapped_product(ComplementCase::D, &bv(1, 2, 1, 1), &bv(0, 1, -1, 0)).unwrap();
    let got: Vec<_> = d.points().map(|(p, c)| (p.a, p.i, c.clone())).collect();
    assert_eq!(got, vec![(0, 1, BigInt::from(1)), (0, 2, BigInt::from(1))]);
    let l = wrapped_product(ComplementCase::L, &bv(1, 2, 0, 0), &bv(0, 1, 0, 2)).unwrap();
    let got: Vec<_> = l
        .points()
        .map(|(p, c)| (p.a, p.i, p.d, c.clone()))
        .collect();
    assert_eq!(got, vec![(0, 2, 2, BigInt::from(1))]);

    let f = |case, a, i, d| {
        rational_function(&ExtendedPoint::new(case, a, i, d).unwrap())
            .unwrap()
            .to_string()
    };
    assert_eq!(f(ComplementCase::L, 0, 1, 0), "p*y^-2");
    assert_eq!(f(ComplementCase::C, 0, -1, 0), "p^-1*y^2");
    assert_eq!(f(ComplementCase::D, 0, 0, 0), "1");
    assert_eq!(e_element(ComplementCase::L, 1).unwrap().1.to_string(), "y");
    assert_eq!(e_element(ComplementCase::C, 2).unwrap().1.to_string(), "p");
    assert_eq!(
        e_element(ComplementCase::D, 3).unwrap().1.to_string(),
        "p*y"
    );
}

#[test]
fn numerics() {
    let c = syz_coordinates(FiberParams::new(0.5, 0.0).unwrap(), 1e-10).unwrap();
    assert!(c.xi.abs() < 1e-10 && c.psi.abs() < 1e-10);
    assert!(log_integral(0.999, 1e-9).unwrap().abs() < 1e-6);
    for p in critical_points(6.0).unwrap() {
        assert!((p.value().norm() - 3.0 * (-2f64).exp()).abs() < 1e-12);
    }
    assert_eq!(hessian_identity(1.0, 0.0).unwrap().ratio, 0.0);
    assert!(hessian_identity(1.3, -0.4).unwrap().relative_error < 1e-6);
}
