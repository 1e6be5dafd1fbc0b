use proptest::prelude::*;

use qgpkp::config::RunConfig;
use qgpkp::eos::{
    constant_a, cs_from_derivative, density_from_fermi_momentum, energy_density_field,
    energy_density_uniform, fermi_momentum, pressure_field, pressure_uniform, speed_of_sound,
    EosParameters, MediumCoefficients,
};
use qgpkp::kp_model::{
    alpha_bracket_unsimplified, alpha_non_relativistic, alpha_relativistic, beta_non_relativistic,
    beta_relativistic, build_wave_spec, effective_mass, WaveEquationKind,
};
use qgpkp::solitons::{band_boundaries, existence_cyl, ScanGeometry};
use qgpkp::sweep::{sweep, SweepSpec};
use qgpkp::ScalarField3D;

fn params() -> impl Strategy<Value = EosParameters> {
    (0.0..3.0f64, 150.0..2000.0f64, 0.0..2.0f64, 0.05..8.0f64)
        .prop_map(|(g, m, b, r)| EosParameters::new(g, m, b, r).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sound_speed_is_thermodynamic_derivative(p in params()) {
        let (_, cs2) = speed_of_sound(&p).unwrap();
        let fd = cs_from_derivative(&p, p.rho0, 1e-4).unwrap();
        prop_assert!(rel(fd * fd, cs2) < 1e-6);
    }

    #[test]
    fn sound_speed_between_conformal_and_light(p in params()) {
        let (cs, cs2) = speed_of_sound(&p).unwrap();
        prop_assert!((1.0 / 3.0 - 1e-15..1.0).contains(&cs2));
        prop_assert!((cs * cs - cs2).abs() < 1e-15);
    }

    #[test]
    fn bag_constant_leaves_coefficients_unchanged(p in params(), bag in 0.0..5.0f64) {
        let q = EosParameters::new(p.g, p.m_g_mev(), bag, p.rho0).unwrap();
        let a = MediumCoefficients::from_params(&p).unwrap();
        let b = MediumCoefficients::from_params(&q).unwrap();
        prop_assert_eq!(a.cs.to_bits(), b.cs.to_bits());
        prop_assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
        prop_assert_eq!(a.beta.to_bits(), b.beta.to_bits());
        prop_assert_eq!(a.a.to_bits(), b.a.to_bits());
        for kind in WaveEquationKind::ALL {
            prop_assert_eq!(build_wave_spec(&p, kind).unwrap(), build_wave_spec(&q, kind).unwrap());
        }
    }

    #[test]
    fn bag_shifts_energy_and_pressure_oppositely(p in params(), rho in 0.0..5.0f64) {
        let e = energy_density_uniform(&p, rho).unwrap();
        let pr = pressure_uniform(&p, rho).unwrap();
        let free = EosParameters::new(p.g, p.m_g_mev(), 0.0, p.rho0).unwrap();
        let e0 = energy_density_uniform(&free, rho).unwrap();
        let p0 = pressure_uniform(&free, rho).unwrap();
        prop_assert!(((e - e0) - p.bag).abs() <= 1e-12 * e.abs().max(1.0));
        prop_assert!(((p0 - pr) - p.bag).abs() <= 1e-12 * pr.abs().max(1.0));
    }

    #[test]
    fn nonlinear_bracket_simplification(p in params()) {
        let (cs, _) = speed_of_sound(&p).unwrap();
        let full = alpha_bracket_unsimplified(&p).unwrap() * cs;
        prop_assert!(rel(alpha_relativistic(&p).unwrap(), full) < 1e-12);
    }

    #[test]
    fn non_relativistic_limit_of_coefficients(p in params()) {
        // drop c_s² inside the bracket and set A = M ρ0 c_s²
        let (cs, cs2) = speed_of_sound(&p).unwrap();
        let m = effective_mass(&p).unwrap();
        let a_nr = m * p.rho0 * cs2;
        let alpha = (1.5 - p.quark_term() / (3.0 * a_nr)) * cs;
        let beta = 9.0 * p.g * p.g * p.rho0 * p.rho0 * cs / (8.0 * p.m_g.powi(4) * a_nr);
        prop_assert!(rel(alpha_non_relativistic(&p).unwrap(), alpha) < 1e-12);
        let b = beta_non_relativistic(&p).unwrap();
        prop_assert!((b - beta).abs() <= 1e-12 * beta.abs() || b == beta);
        // the effective mass reproduces A exactly when ρ0 c_s² M is expanded
        prop_assert!(rel(a_nr, constant_a(&p).unwrap()) < 1e-12);
    }

    #[test]
    fn fermi_momentum_round_trip(rho in 0.0..50.0f64, gamma in 1u32..12) {
        let k = fermi_momentum(rho, gamma).unwrap();
        prop_assert!((density_from_fermi_momentum(k, gamma) - rho).abs() <= 1e-12 * rho.max(1e-300));
    }

    #[test]
    fn uniform_field_matches_uniform_matter(p in params(), rho in 0.01..5.0f64) {
        let f = ScalarField3D::new([8, 4, 2], [0.5, 0.5, 0.5], true, vec![rho; 64]).unwrap();
        let e = energy_density_field(&p, &f).unwrap();
        let pr = pressure_field(&p, &f).unwrap();
        let eu = energy_density_uniform(&p, rho).unwrap();
        let pu = pressure_uniform(&p, rho).unwrap();
        for (a, b) in e.values.iter().zip(pr.values.iter()) {
            prop_assert!((a - eu).abs() <= 1e-12 * eu.abs().max(1.0));
            prop_assert!((b - pu).abs() <= 1e-12 * pu.abs().max(1.0));
        }
    }

    #[test]
    fn dispersion_vanishes_without_coupling(p in params()) {
        let q = EosParameters::new(0.0, p.m_g_mev(), p.bag, p.rho0).unwrap();
        prop_assert_eq!(beta_relativistic(&q).unwrap(), 0.0);
        let (_, cs2) = speed_of_sound(&q).unwrap();
        prop_assert!((cs2 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn existence_agrees_with_band(a in 0.05..1.0f64, u in 0.0..3.0f64) {
        let m = MediumCoefficients::from_params(&EosParameters::reference()).unwrap();
        let (lo, hi) = band_boundaries(&m, ScanGeometry::Cylindrical, a).unwrap();
        let ex = existence_cyl(&m, a, u).unwrap();
        let away = (u - lo).abs() > 1e-12 && (u - hi).abs() > 1e-12;
        if away {
            prop_assert_eq!(ex.admissible, u > lo && u < hi);
        }
    }

    #[test]
    fn config_round_trip(g in 0.0..3.0f64, n in 1i64..4096, seed in any::<u32>(), list in prop::collection::vec(-1e6..1e6f64, 1..5)) {
        let mut c = RunConfig::default();
        c.set("physics.g", &format!("{g:?}")).unwrap();
        c.set("kdv.n", &n.to_string()).unwrap();
        c.set("run.seed", &seed.to_string()).unwrap();
        let text: Vec<String> = list.iter().map(|v| format!("{v:?}")).collect();
        c.set("sweep.rho0", &text.join(",")).unwrap();
        let again = RunConfig::parse(&c.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), c.to_text());
        prop_assert_eq!(again, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sweep_ignores_listing_order(mut g in prop::collection::vec(0.0..2.0f64, 1..4), threads in 0usize..4) {
        let spec = |g: Vec<f64>, threads| SweepSpec {
            g,
            m_g_mev: vec![460.0, 600.0],
            rho0: vec![1.0],
            bag: 0.0,
            cyl: (0.6, 0.73),
            cart: (0.6, 0.5, 0.66),
            max_cells: 1000,
            threads,
        };
        let a = sweep(&spec(g.clone(), 0)).unwrap();
        g.reverse();
        let b = sweep(&spec(g, threads)).unwrap();
        prop_assert_eq!(a.to_csv(), b.to_csv());
    }
}
