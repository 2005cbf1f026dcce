use super::*;
use crate::gauge::{gauge_matrix, gauge_scalar};
use crate::rational::{int, rat, Rational};
use crate::series::{Laurent, Truncation};
use crate::spectral::sigma_conjugate_connection;

fn companion_curve(n: i64) -> SpectralCurve {
    SpectralCurve::from_ints(n, &[0], &[0, -1]).unwrap()
}

/// `mForm + Σ c λⁱ ẑʲ` with the given λ-order.
fn scalar(curve: &SpectralCurve, l: usize, extra: &[(usize, i64, Rational)]) -> BiSeries {
    let chart = curve.cover_chart().unwrap();
    let n = chart.m_form.z_order();
    let tr = Truncation::new(n, l, 4).unwrap();
    let extra = BiSeries::from_coeffs(
        tr,
        Chart::Cover,
        extra.iter().map(|(i, j, c)| ((*i, *j), c.clone())),
    )
    .unwrap();
    chart.m_form.lift(l).plus(&extra)
}

fn companion_matrix(n: i64, l: usize) -> MatrixConnection {
    let tr = Truncation::new(n, l, 0).unwrap();
    let s = |cs: &[((usize, i64), i64)]| BiSeries::from_ints(tr, Chart::Base, cs).unwrap();
    MatrixConnection::new(
        Mat2::new(s(&[]), s(&[((0, 1), 1)]), s(&[((0, 0), 1)]), s(&[])),
        Some(companion_curve(n)),
    )
    .unwrap()
}

#[test]
fn companion_anchor() {
    let a = companion_matrix(12, 6);
    let (s, w) = forward_abelianize(&a, &companion_curve(12)).unwrap();
    assert!(s.normalized);
    assert_eq!(
        s.a.order(0).terms().collect::<Vec<_>>(),
        vec![(2, &rat(1, 4))]
    );
    assert_eq!(
        s.a.order(1).terms().collect::<Vec<_>>(),
        vec![(-1, &rat(-1, 2))]
    );
    assert_eq!(
        s.a.residue_at_zero().unwrap(),
        [
            rat(0, 1),
            rat(-1, 2),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1)
        ]
    );
    // the witness really diagonalizes the pulled-back matrix
    let cc = companion_curve(12).cover_chart().unwrap();
    let pulled = a.a.map(|x| {
        x.substitute(&cc.z_of_zhat)
            .unwrap()
            .times(&cc.jacobian.lift(6))
    });
    let d = crate::gauge::gauge_raw(&pulled, &w).unwrap();
    assert!(d.e[0][1].is_zero() && d.e[1][0].is_zero());
    assert!(d.e[0][0].agrees_with(&s.a));
    assert!(d.e[1][1].agrees_with(&sigma_conjugate_connection(&s.a).unwrap()));
}

#[test]
fn pair_trace_residue() {
    let (s, _) = forward_abelianize(&companion_matrix(12, 4), &companion_curve(12)).unwrap();
    let pair = s.a.plus(&sigma_conjugate_connection(&s.a).unwrap());
    assert_eq!(
        pair.residue_at_zero().unwrap(),
        [rat(0, 1), rat(-1, 1), rat(0, 1), rat(0, 1)]
    );
}

#[test]
fn forward_rejects_non_integral() {
    let mut a = companion_matrix(8, 2);
    a.a.e[0][0] = a.a.e[0][0].plus(&BiSeries::exact_monomial(Chart::Base, int(1), -1, 2));
    assert_eq!(
        forward_abelianize(&a, &companion_curve(8)).unwrap_err(),
        Error::NotIntegral
    );
}

#[test]
fn pushforward_example() {
    let curve = companion_curve(12);
    let a =
        ScalarConnection::new(scalar(&curve, 2, &[(1, -1, rat(-1, 2))]), curve.clone()).unwrap();
    let pf = pushforward_scalar(&a).unwrap();
    let au = &pf.au.a;
    let at = |m: &BiSeries, i: usize| {
        m.order(i)
            .terms()
            .map(|(e, c)| (e, c.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(at(&au.e[0][0], 1), vec![(-1, rat(-1, 4))]);
    assert_eq!(at(&au.e[1][1], 1), vec![(-1, rat(1, 4))]);
    assert!(au.e[0][1].order(1).is_zero() && au.e[1][0].order(1).is_zero());
    assert_eq!(at(&au.e[0][1], 0), vec![(1, int(2))]);
    assert_eq!(at(&au.e[1][0], 0), vec![(0, rat(1, 2))]);
    assert!(au.e[0][0].order(0).is_zero() && au.e[1][1].order(0).is_zero());
    assert!(pf.higgs_l0.trace().agrees_with(curve.t()));
    assert!(pf.higgs_l0.det().agrees_with(curve.d()));
}

#[test]
fn lattice_example() {
    let curve = companion_curve(12);
    let a = ScalarConnection::new(scalar(&curve, 4, &[(1, -1, rat(-1, 2))]), curve).unwrap();
    let pf = pushforward_scalar(&a).unwrap();
    let (steps, res) = lattice_steps(&pf, 8).unwrap();
    let s1 = &steps[0];
    assert_eq!(s1.s.e[0][1], Laurent::exact_monomial(rat(-1, 2), -1));
    assert!(s1.s.e[0][0].is_zero() && s1.s.e[1][0].is_zero() && s1.s.e[1][1].is_zero());
    assert!(s1.f.is_zero());
    assert_eq!(s1.g, Laurent::exact_monomial(rat(5, 48), -2));
    // g is forced: without it the λ² term can no longer be repaired
    let zero = Mat2::<Laurent>::zero();
    assert!(perturbed_lattice_survives(&pf.au, &s1.x, &zero).unwrap());
    let c0 = pf.au.a.order(0);
    let drop_g = c0.map(|e| e.mul(&s1.g)).neg();
    assert!(!perturbed_lattice_survives(&pf.au, &s1.x, &drop_g).unwrap());
    assert!(res.a_integral.is_integral());
    assert_eq!(res.phi.order(0), Mat2::one());
    let direct = gauge_matrix(&pf.au, &res.phi).unwrap();
    assert!(direct.a.agrees_with(&res.a_integral.a));
}

#[test]
fn lattice_of_integral_input_is_trivial() {
    let curve = companion_curve(8);
    let a = ScalarConnection::new(scalar(&curve, 1, &[]), curve).unwrap();
    let res = find_integral_lattice(&pushforward_scalar(&a).unwrap()).unwrap();
    assert_eq!(res.phi, Mat2::identity(Chart::Base, 1));
}

#[test]
fn normalize_removes_deep_poles() {
    let curve = companion_curve(12);
    let raw = scalar(&curve, 3, &[(1, -1, rat(-1, 2)), (2, -2, int(1))]);
    let (a, r) = normalize_scalar(&raw, &curve).unwrap();
    assert_eq!(r.order(1).terms().collect::<Vec<_>>(), vec![(-1, &int(1))]);
    assert!(a.a.agrees_with(&scalar(&curve, 3, &[(1, -1, rat(-1, 2))])));
    assert!(gauge_scalar(&raw, &r).unwrap().agrees_with(&a.a));
}

#[test]
fn normalize_rejects_deep_lambda_one_pole() {
    let curve = companion_curve(12);
    let raw = scalar(&curve, 2, &[(1, -2, int(1))]);
    assert_eq!(
        normalize_scalar(&raw, &curve).unwrap_err(),
        Error::NonNormalizable(NormalizeFailure::LambdaOnePoleTooDeep { pole_order: 2 })
    );
}

#[test]
fn equivalence_examples() {
    let curve = companion_curve(12);
    let base = scalar(&curve, 3, &[(1, -1, rat(-1, 2))]);
    let a = ScalarConnection::new(base.clone(), curve.clone()).unwrap();
    let same = scalar_gauge_equivalent(&a, &a).unwrap();
    assert!(same.agrees_with(&BiSeries::one(Chart::Cover, 3)));

    let b = ScalarConnection::new(
        scalar(&curve, 3, &[(1, -1, rat(-1, 2)), (2, 0, int(1))]),
        curve.clone(),
    )
    .unwrap();
    let r = scalar_gauge_equivalent(&a, &b).unwrap();
    assert_eq!(r.coeff(1, 1), Some(int(1)));
    assert_eq!(r.coeff(2, 2), Some(rat(1, 2)));
    assert!(gauge_scalar(&a.a, &r).unwrap().agrees_with(&b.a));

    let c = ScalarConnection::new(
        scalar(&curve, 3, &[(1, -1, rat(-1, 2)), (2, -1, int(1))]),
        curve,
    )
    .unwrap();
    assert!(scalar_gauge_equivalent(&a, &c).is_none());
}

#[test]
fn roundtrip_companion() {
    let curve = companion_curve(12);
    let a = ScalarConnection::new(scalar(&curve, 4, &[(1, -1, rat(-1, 2))]), curve).unwrap();
    let rep = roundtrip_check(&a).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!(rep.residues, ["0/1", "-1/2", "0/1", "0/1"]);
    assert_eq!(rep.pair_trace_residues, ["0/1", "-1/1", "0/1", "0/1"]);
}

#[test]
fn roundtrip_pure_higgs() {
    let curve = SpectralCurve::from_ints(10, &[0, 2], &[0, -1, 3]).unwrap();
    let a = ScalarConnection::new(scalar(&curve, 1, &[]), curve).unwrap();
    assert!(roundtrip_check(&a).unwrap().passed());
}

#[test]
fn deserialize_rejects_false_normal_flag() {
    let curve = companion_curve(8);
    let a = ScalarConnection::new(
        scalar(&curve, 2, &[(1, -1, rat(-1, 2)), (1, -2, int(1))]),
        curve,
    )
    .unwrap();
    assert!(!a.normalized);
    let mut v = serde_json::to_value(&a).unwrap();
    v["normalized"] = true.into();
    assert!(serde_json::from_value::<ScalarConnection>(v).is_err());
}

#[test]
fn lambda_one_alone_does_not_pin_the_lattice() {
    // [A₀, z⁻¹E₂₁] = diag(1, −1) is integral, so mod λ² a second lattice exists
    let a = companion_matrix(4, 2);
    let mut p = Mat2::<Laurent>::zero();
    p.e[1][0] = Laurent::exact_monomial(int(1), -1);
    let n = Mat2::from_orders(Chart::Base, &[Mat2::zero(), p.clone()]);
    let c = super::lattice::gauge_unipotent(&a.a, &n);
    assert!(c.is_integral());
    // the λ² constraints rule it out
    let a3 = companion_matrix(4, 3);
    assert!(perturbed_lattice_survives(&a3, &Mat2::zero(), &Mat2::zero()).unwrap());
    assert!(!perturbed_lattice_survives(&a3, &Mat2::zero(), &p).unwrap());
}

#[test]
fn first_step_matches_full_run() {
    let curve = companion_curve(12);
    let a = ScalarConnection::new(scalar(&curve, 4, &[(1, -1, rat(-1, 2))]), curve).unwrap();
    let pf = pushforward_scalar(&a).unwrap();
    let (steps, _) = lattice_steps(&pf, 8).unwrap();
    assert_eq!(first_lattice_step(&pf, 8).unwrap(), steps[0]);
}
