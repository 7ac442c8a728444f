use spcd_core::{CharacteristicCurve, ScalarField1};

fn max_gap(quad: &CharacteristicCurve, exact: impl Fn(f64) -> f64, t_final: f64) -> f64 {
    (0..=2000)
        .map(|k| t_final * k as f64 / 2000.0)
        .map(|t| (quad.position(t).unwrap() - exact(t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn quadrature_matches_closed_forms() {
    let cubic = CharacteristicCurve::from_rate(ScalarField1::new(|t| 1.0 + t * t), 0.3, 0.5);
    assert!(max_gap(&cubic, |t| 0.3 + t + t * t * t / 3.0, 0.5) <= 1e-10);

    let quadratic = CharacteristicCurve::from_rate(ScalarField1::new(|t| 1.0 + t), 0.3, 2.0);
    assert!(max_gap(&quadratic, |t| 0.3 + t + 0.5 * t * t, 2.0) <= 1e-10);

    // d' = 1 + d² along the curve.
    let tan_curve = |t: f64| (0.1 + t.tan()) / (1.0 - 0.1 * t.tan());
    let riccati = CharacteristicCurve::from_rate(ScalarField1::new(move |t| 1.0 + tan_curve(t).powi(2)), 0.1, 0.5);
    assert!(max_gap(&riccati, tan_curve, 0.5) <= 1e-10);
}

#[test]
fn crossing_time_of_linear_rate() {
    let c = CharacteristicCurve::from_rate(ScalarField1::new(|t| 1.0 + t), 0.3, 2.0);
    let t_star = c.crossing_time().unwrap();
    assert!((t_star - (2.4f64.sqrt() - 1.0)).abs() <= 1e-9);
    assert!((c.position(t_star).unwrap() - 1.0).abs() <= 1e-10);

    let closed = CharacteristicCurve::closed_form(ScalarField1::new(|t| 0.3 + t + 0.5 * t * t), 0.3, 2.0);
    assert!((closed.crossing_time().unwrap() - (2.4f64.sqrt() - 1.0)).abs() <= 1e-12);

    let short = CharacteristicCurve::from_rate(ScalarField1::new(|t| 1.0 + t * t), 0.3, 0.5);
    assert_eq!(short.crossing_time(), None);
}
