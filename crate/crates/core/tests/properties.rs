use proptest::prelude::*;
use sheetpile::pressure_models::*;
use sheetpile::Error;

fn wall(phi: f64, delta_frac: f64) -> WallSoilParams {
    WallSoilParams::from_degrees(phi, delta_frac * phi, 0.0, 0.0, 19.6, 6.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn active_rises_and_passive_falls_with_kh(phi in 25.0f64..42.0, df in 0.0f64..0.67, kh in 0.0f64..0.3, dk in 0.001f64..0.05) {
        let p = wall(phi, df);
        let lo = SeismicCoefficients::horizontal(kh);
        let hi = SeismicCoefficients::horizontal(kh + dk);
        if let (Ok(a0), Ok(a1)) = (mo_coefficient(&p, lo, PressureMode::Active), mo_coefficient(&p, hi, PressureMode::Active)) {
            prop_assert!(a1 >= a0);
        }
        if let (Ok(p0), Ok(p1)) = (mo_coefficient(&p, lo, PressureMode::Passive), mo_coefficient(&p, hi, PressureMode::Passive)) {
            prop_assert!(p1 <= p0);
        }
    }

    #[test]
    fn closed_form_matches_wedge_search(phi in 25.0f64..40.0, df in 0.0f64..0.5, kh in 0.0f64..0.3, active in any::<bool>()) {
        let p = wall(phi, df);
        let mode = if active { PressureMode::Active } else { PressureMode::Passive };
        let c = SeismicCoefficients::horizontal(kh);
        match mo_coefficient(&p, c, mode) {
            Ok(k) => prop_assert!((k - wedge_oracle_coefficient(&p, c, mode, 20_000).unwrap()).abs() <= 1e-4),
            Err(Error::ValidityDomainExceeded { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
