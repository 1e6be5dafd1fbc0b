//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Lines that are known not to hold are reported but not asserted; every other
//! line must pass.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgpkp::acoustics::AcousticScheme;
use qgpkp::eos::{cs_from_derivative, speed_of_sound, EosParameters, MediumCoefficients};
use qgpkp::experiments::{
    acoustic_pulse_run, ckp_residual, kdv_soliton_run, kp_line_run, kp_residual, KpBox, PulseSetup,
};
use qgpkp::figures;
use qgpkp::kp_model::{
    alpha_bracket_unsimplified, alpha_non_relativistic, alpha_relativistic, beta_non_relativistic,
    build_wave_spec, effective_mass, WaveEquationKind,
};
use qgpkp::solitons::{existence_cart, existence_cyl, SolitonCart, SolitonCyl};
use qgpkp::solver::{Integrator, SolverConfig};
use qgpkp::table::ResultTable;

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Report(Vec<Line>);

impl Report {
    fn record(&mut self, id: &'static str, pass: bool, elapsed: Duration, detail: String) {
        // Written straight to stdout so the lines survive output capture.
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "{} criterion {id}: {detail} [{:.3} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        self.0.push(Line { id, pass, detail });
    }

    fn check<F: FnOnce() -> (bool, String)>(&mut self, id: &'static str, f: F) {
        let start = Instant::now();
        let (pass, detail) = f();
        self.record(id, pass, start.elapsed(), detail);
    }
}

fn reference() -> EosParameters {
    figures::reference_params()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sound_speed(r: &mut Report) {
    let p = reference();
    let start = Instant::now();
    let (cs, _) = speed_of_sound(&p).unwrap();
    let elapsed = start.elapsed();
    let pass = (0.635..=0.645).contains(&cs) && elapsed < Duration::from_millis(1);
    r.record(
        "1",
        pass,
        elapsed,
        format!("cs = {cs:.6}, expected 0.64 within [0.635, 0.645]"),
    );
}

fn mit_limit(r: &mut Report) {
    for (id, g, m) in [
        ("2 (g = 0)", 0.0, 460.0),
        ("2 (m_G = 1e6 MeV)", 1.15, 1.0e6),
    ] {
        r.check(id, || {
            let p = EosParameters::new(g, m, 0.0, 1.0).unwrap();
            let (cs, cs2) = speed_of_sound(&p).unwrap();
            let alpha = alpha_relativistic(&p).unwrap();
            let d_cs2 = (cs2 - 1.0 / 3.0).abs();
            let d_alpha = (alpha - 2.0 * cs / 3.0).abs();
            (
                d_cs2 < 1e-9 && d_alpha < 1e-12,
                format!("|cs2 - 1/3| = {d_cs2:.3e} (tol 1e-9), |alpha - 2cs/3| = {d_alpha:.3e} (tol 1e-12)"),
            )
        });
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> EosParameters {
    EosParameters::new(
        rng.random_range(0.0..3.0),
        rng.random_range(150.0..2000.0),
        rng.random_range(0.0..2.0),
        rng.random_range(0.05..8.0),
    )
    .unwrap()
}

fn thermodynamic_consistency(r: &mut Report) {
    r.check("3", || {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            let (_, cs2) = speed_of_sound(&p).unwrap();
            let fd = cs_from_derivative(&p, p.rho0, 1e-4).unwrap();
            worst = worst.max(rel(fd * fd, cs2));
        }
        (
            worst < 1e-6,
            format!("worst relative deviation {worst:.3e} over 1000 sets (tol 1e-6)"),
        )
    });
}

fn nr_identity(r: &mut Report) {
    r.check("4", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut sets = vec![reference()];
        sets.extend((0..200).map(|_| random_params(&mut rng)));
        let mut worst = 0.0f64;
        for p in &sets {
            let (cs, cs2) = speed_of_sound(p).unwrap();
            let a_nr = effective_mass(p).unwrap() * p.rho0 * cs2;
            // bracket with c_s² dropped, A replaced by M ρ0 c_s²
            let alpha = (1.5 - p.quark_term() / (3.0 * a_nr)) * cs;
            let beta = 9.0 * p.g * p.g * p.rho0 * p.rho0 * cs / (8.0 * p.m_g.powi(4) * a_nr);
            worst = worst.max(rel(alpha_non_relativistic(p).unwrap(), alpha));
            if beta != 0.0 {
                worst = worst.max(rel(beta_non_relativistic(p).unwrap(), beta));
            }
            let full = alpha_bracket_unsimplified(p).unwrap() * cs;
            worst = worst.max(rel(alpha_relativistic(p).unwrap(), full));
        }
        (
            worst < 1e-12,
            format!(
                "worst relative deviation {worst:.3e} over {} sets (tol 1e-12)",
                sets.len()
            ),
        )
    });
}

fn residual_line(rep: &qgpkp::solver::ResidualReport) -> String {
    let orders: Vec<String> = rep.orders.iter().map(|o| format!("{o:.2}")).collect();
    format!(
        "orders [{}], finest {:.3e}",
        orders.join(", "),
        rep.finest()
    )
}

fn residuals(r: &mut Report) {
    let p = reference();
    let ckp = build_wave_spec(&p, WaveEquationKind::CkpCyl).unwrap();
    let kp = build_wave_spec(&p, WaveEquationKind::KpCart).unwrap();
    let cyl = SolitonCyl::from_a(figures::CYL.0, figures::CYL.1).unwrap();
    let cart = SolitonCart::from_a_c(figures::CART.0, figures::CART.1, figures::CART.2).unwrap();
    let limit = Duration::from_secs(60);

    let start = Instant::now();
    let rep = ckp_residual(&ckp, &cyl, 18.0, 0.1, 4).unwrap();
    let el = start.elapsed();
    r.record(
        "5 (cKP, t = 18)",
        rep.meets(4.0, 0.3, 1e-6) && el < limit,
        el,
        residual_line(&rep),
    );

    let start = Instant::now();
    let rep = kp_residual(&kp, &cart, 0.0, 0.04, 4, false).unwrap();
    let el = start.elapsed();
    r.record(
        "5 (KP, formula as written)",
        rep.meets(4.0, 0.3, 1e-6) && el < limit,
        el,
        residual_line(&rep),
    );

    let start = Instant::now();
    let rep = kp_residual(&kp, &cart, 0.0, 0.04, 4, true).unwrap();
    let el = start.elapsed();
    r.record(
        "5 (KP, supplementary: line soliton with drift w/A)",
        rep.meets(4.0, 0.3, 1e-6) && el < limit,
        el,
        residual_line(&rep),
    );
}

fn kdv_propagation(r: &mut Report) {
    r.check("6", || {
        let spec = build_wave_spec(&reference(), WaveEquationKind::Kdv).unwrap();
        let cfg = SolverConfig {
            dt: 0.05,
            t_end: 50.0,
            integrator: Integrator::Rk4,
            snapshot_stride: 20,
            ..SolverConfig::default()
        };
        let start = Instant::now();
        let run = kdv_soliton_run(&spec, 0.05, 200.0, 512, &cfg).unwrap();
        let el = start.elapsed();
        let peak = (run.peak_ratio - 1.0).abs();
        let speed = rel(run.measured_speed, run.expected_speed);
        (
            peak < 5e-3 && speed < 1e-2 && run.mass_drift < 1e-10 && el < Duration::from_secs(30),
            format!(
                "peak change {peak:.2e}, speed {:.8} vs {:.8} (rel {speed:.2e}), mass drift {:.2e}",
                run.measured_speed, run.expected_speed, run.mass_drift
            ),
        )
    });
}

fn kp_propagation(r: &mut Report) {
    let spec = build_wave_spec(&reference(), WaveEquationKind::KpCart).unwrap();
    let cart = SolitonCart::from_a_c(figures::CART.0, figures::CART.1, figures::CART.2).unwrap();
    let start = Instant::now();
    let run = kp_line_run(&spec, &cart, &KpBox::default()).unwrap();
    let el = start.elapsed();
    let in_time = el < Duration::from_secs(300);
    r.record(
        "7 (shape)",
        run.shape_error < 1e-2 && in_time,
        el,
        format!("relative L2 shape error {:.3e} (tol 1e-2)", run.shape_error),
    );
    let d_printed = rel(run.measured_speed, run.printed_speed);
    r.record(
        "7 (speed, formula as written)",
        d_printed < 2e-2 && in_time,
        el,
        format!(
            "measured {:.7} vs {:.7} (rel {d_printed:.3e}, tol 2e-2)",
            run.measured_speed, run.printed_speed
        ),
    );
    let d = rel(run.measured_speed, run.consistent_speed);
    r.record(
        "7 (speed, supplementary: line soliton with drift w/A)",
        d < 2e-2 && in_time,
        el,
        format!(
            "measured {:.7} vs {:.7} (rel {d:.3e})",
            run.measured_speed, run.consistent_speed
        ),
    );
}

/// Lower and upper boundary at `a`, interpolated from the boundary table.
fn boundary_at(t: &ResultTable, a: f64) -> (f64, f64) {
    let rows = &t.rows;
    let i = rows
        .windows(2)
        .position(|w| w[0][0] <= a && a <= w[1][0])
        .unwrap();
    let (r0, r1) = (&rows[i], &rows[i + 1]);
    let s = (a - r0[0]) / (r1[0] - r0[0]);
    (r0[1] + s * (r1[1] - r0[1]), r0[2] + s * (r1[2] - r0[2]))
}

fn existence_regions(r: &mut Report) {
    r.check("8", || {
        let m = MediumCoefficients::from_params(&reference()).unwrap();
        let f1 = figures::figure1().unwrap();
        let f3 = figures::figure3().unwrap();
        let (a, u) = figures::CYL;
        let (lo1, hi1) = boundary_at(&f1[1].table, a);
        let (ac, c, uc) = figures::CART;
        let (lo3, hi3) = boundary_at(&f3[1].table, ac);
        let cyl = existence_cyl(&m, a, u).unwrap();
        let cart = existence_cart(&m, ac, uc, c).unwrap();
        let close = (cyl.margin_speed - 0.0054).abs() < 1e-3
            && (cyl.amplitude - 0.065).abs() < 1e-3
            && (cart.margin_speed - 0.072).abs() < 1e-3
            && (cart.amplitude - 0.869).abs() < 1e-3;
        let bracket = lo1 < u && u < hi1 && lo3 < uc && uc < hi3;
        (
            bracket && close && cyl.admissible && cart.admissible,
            format!(
                "cyl u in ({lo1:.5}, {hi1:.5}), margins {:.7}/{:.7}; cart U in ({lo3:.5}, {hi3:.5}), margins {:.7}/{:.6}",
                cyl.margin_speed, cyl.amplitude, cart.margin_speed, cart.amplitude
            ),
        )
    });
}

fn acoustic_pulse(r: &mut Report) {
    r.check("9", || {
        let setup = PulseSetup {
            n: 256,
            length: 100.0,
            width: 2.0,
            amplitude: 0.01,
            crossings: 100.0,
            dt: 0.5,
            snapshot_stride: 40,
            scheme: AcousticScheme::Spectral,
        };
        let run = acoustic_pulse_run(&reference(), &setup).unwrap();
        (
            run.position_error < run.dx && run.energy_drift < 1e-8,
            format!(
                "t = {:.1}, position error {:.3e} (dx {:.4}), energy drift {:.2e}",
                run.t_end, run.position_error, run.dx, run.energy_drift
            ),
        )
    });
}

const SUBCOMMANDS: &[&[&str]] = &[
    &["eos-table"],
    &["coefficients"],
    &["soliton-eval"],
    &["soliton-eval", "--set", "eval.slice=rphi"],
    &["soliton-eval", "--set", "eval.slice=xy"],
    &["soliton-eval", "--set", "eval.slice=xy_line"],
    &["region-scan"],
    &["region-scan", "--set", "scan.geometry=cart"],
    &["evolve-kdv"],
    &[
        "evolve-kdv",
        "--set",
        "kdv.initial=gaussian",
        "--set",
        "equation.kind=breaking_wave_full",
    ],
    &["evolve-kp"],
    &["verify-residual"],
    &["acoustic-demo"],
    &["figure", "1"],
    &["figure", "2"],
    &["figure", "3"],
    &["figure", "4"],
    &["sweep"],
    &["sweep", "--set", "sweep.random=16"],
    &["print-config"],
];

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let e = e.unwrap();
        files.insert(
            e.file_name().to_string_lossy().into_owned(),
            std::fs::read(e.path()).unwrap(),
        );
    }
    files
}

/// Runs one subcommand in a fresh directory; returns exit status, stdout and files.
fn run_once(args: &[&str], dir: &Path) -> (Option<i32>, Vec<u8>, BTreeMap<String, Vec<u8>>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qgpkp"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("SOURCE_DATE_EPOCH")
        .env_remove("QGPKP_OUT_DIR")
        .output()
        .unwrap();
    (out.status.code(), out.stdout, snapshot(dir))
}

fn determinism(r: &mut Report) {
    r.check("10", || {
        let mut bad = Vec::new();
        let mut files = 0;
        for args in SUBCOMMANDS {
            let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
            let first = run_once(args, a.path());
            let second = run_once(args, b.path());
            files += first.2.len();
            if first.0 != Some(0) || first != second {
                bad.push(args.join(" "));
            }
        }
        (
            bad.is_empty(),
            format!(
                "{} invocations, {files} output files compared byte for byte{}",
                SUBCOMMANDS.len(),
                if bad.is_empty() {
                    String::new()
                } else {
                    format!("; differing: {bad:?}")
                }
            ),
        )
    });
}

#[test]
fn acceptance_criteria() {
    let wall = Instant::now();
    let mut r = Report::default();
    sound_speed(&mut r);
    mit_limit(&mut r);
    thermodynamic_consistency(&mut r);
    nr_identity(&mut r);
    residuals(&mut r);
    kdv_propagation(&mut r);
    kp_propagation(&mut r);
    existence_regions(&mut r);
    acoustic_pulse(&mut r);
    determinism(&mut r);

    // Known not to hold. The cartesian formula as written solves the equation only
    // when 𝒜 = 1, so its residual does not converge and its speed is off by 20%.
    // At g = 1.15 and m_G = 1e6 MeV the mean-field term still lifts c_s² by
    // 4c/(9k_F) ≈ 1.8e-8 above 1/3.
    let known = [
        "2 (m_G = 1e6 MeV)",
        "5 (KP, formula as written)",
        "7 (speed, formula as written)",
    ];
    let total = wall.elapsed().as_secs_f64();
    let passed = r.0.iter().filter(|l| l.pass).count();
    let _ = writeln!(
        std::io::stdout().lock(),
        "acceptance: {passed}/{} lines PASS in {total:.1} s",
        r.0.len()
    );
    let unexpected: Vec<String> =
        r.0.iter()
            .filter(|l| !l.pass && !known.contains(&l.id))
            .map(|l| format!("{}: {}", l.id, l.detail))
            .collect();
    assert!(
        unexpected.is_empty(),
        "unexpected failures: {unexpected:#?}"
    );
}
