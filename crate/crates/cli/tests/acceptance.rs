//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the report is always printed; exits non-zero on any failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalinj_core::bounds::{dbar, dbar_fixed_point_residual, minimize_dbar, scaled_inj, table1};
use scalinj_core::curvature::{
    band_model_residual, corner_root, family_scal, s_derivative_lower_bound, scal_equator_closed_form,
    scal_pole_closed_form, scal_pole_limit, scal_s_derivative, WarpFamilyParams,
};
use scalinj_core::geometry::{
    conjugate_radius, distance, injectivity_radius, projection_nonexpansion_check, CurveKind, Surface,
    SurfacePoint,
};
use scalinj_core::radial::ScaledSine;
use scalinj_core::search::{
    certify_counterexample, rescaled_inj_trend, seed_lattice, solve_corner_system, DEFAULT_ALPHA_RANGE,
    DEFAULT_BETA_RANGE,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn band_oracle() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0_f64;
    for n in 2..=8 {
        worst = worst.max(band_model_residual(n, 200, 0.05).map_err(|e| e.to_string())?);
    }
    let el = t.elapsed();
    check(worst < 1e-9 && within(el, 1.0), format!("max residual {worst:e}, {el:?}"))
}

fn endpoint_closed_forms() -> Outcome {
    let t = Instant::now();
    let mut worst_pole = 0.0_f64;
    let mut worst_eq = 0.0_f64;
    for n in 3..=8 {
        for i in 0..20 {
            for j in 0..20 {
                let alpha = DEFAULT_ALPHA_RANGE.0 + (DEFAULT_ALPHA_RANGE.1 - DEFAULT_ALPHA_RANGE.0) * i as f64 / 19.0;
                let beta = DEFAULT_BETA_RANGE.0 + (DEFAULT_BETA_RANGE.1 - DEFAULT_BETA_RANGE.0) * j as f64 / 19.0;
                let p = WarpFamilyParams::new(n, alpha, beta).map_err(|e| e.to_string())?;
                let near = family_scal(&p, 1e-4).map_err(|e| e.to_string())?;
                let limit = scal_pole_limit(&p.a(), &p.b(), n).map_err(|e| e.to_string())?;
                let closed = scal_pole_closed_form(&p).map_err(|e| e.to_string())?;
                worst_pole = worst_pole.max((limit - near).abs()).max((closed - near).abs());
                let eq = family_scal(&p, FRAC_PI_2).map_err(|e| e.to_string())?;
                worst_eq = worst_eq.max((scal_equator_closed_form(&p).map_err(|e| e.to_string())? - eq).abs());
            }
        }
    }
    let el = t.elapsed();
    check(
        worst_pole < 1e-6 && worst_eq < 1e-6 && within(el, 5.0),
        format!("pole {worst_pole:e}, equator {worst_eq:e}, {el:?}"),
    )
}

fn corner_roots() -> Outcome {
    let seeds = seed_lattice(DEFAULT_ALPHA_RANGE, DEFAULT_BETA_RANGE);
    let mut worst = 0.0_f64;
    for n in 3..=8 {
        let sol = solve_corner_system(n, &seeds).map_err(|e| e.to_string())?;
        if sol.roots.len() != 2 {
            return Err(format!("n = {n}: {} roots", sol.roots.len()));
        }
        let (a, b) = corner_root(n);
        worst = worst
            .max(sol.roots[0].alpha.abs())
            .max(sol.roots[0].beta.abs())
            .max((sol.roots[1].alpha - a).abs())
            .max((sol.roots[1].beta - b).abs());
    }
    check(worst < 1e-9, format!("two roots for n = 3..8, max deviation {worst:e}"))
}

fn derivative_formula() -> Outcome {
    let mut worst_fd = 0.0_f64;
    let mut worst_min = 0.0_f64;
    for n in 3..=8 {
        let (ca, cb) = corner_root(n);
        let h = 1e-5;
        let at = |s: f64, r: f64| -> Result<f64, String> {
            let p = WarpFamilyParams::new(n, s * ca, s * cb).map_err(|e| e.to_string())?;
            family_scal(&p, r).map_err(|e| e.to_string())
        };
        let mut min = f64::INFINITY;
        for k in 0..50 {
            let r = 0.01 + (PI - 0.02) * k as f64 / 49.0;
            let fd = (at(h, r)? - at(-h, r)?) / (2.0 * h);
            worst_fd = worst_fd.max((fd - scal_s_derivative(n, r)).abs());
        }
        for k in 0..=20_000 {
            min = min.min(scal_s_derivative(n, PI * k as f64 / 20_000.0));
        }
        worst_min = worst_min.max((min - s_derivative_lower_bound(n)).abs());
    }
    check(
        worst_fd < 1e-5 && worst_min < 1e-9,
        format!("difference {worst_fd:e}, minimum {worst_min:e}"),
    )
}

fn certificates() -> Outcome {
    let t = Instant::now();
    let mut least = f64::INFINITY;
    for n in [3, 4] {
        for s in [0.05, 0.1, 0.2] {
            let c = certify_counterexample(n, s).map_err(|e| e.to_string())?;
            if !c.valid {
                return Err(format!("n = {n}, s = {s}: {c:?}"));
            }
            least = least.min(c.margin);
        }
    }
    let el = t.elapsed();
    check(within(el, 60.0), format!("6 valid, least margin {least:.6}, {el:?}"))
}

fn dbar_values() -> Outcome {
    let probe = dbar(5.0 * PI / 6.0).map_err(|e| e.to_string())?;
    let m = minimize_dbar(1e-6).map_err(|e| e.to_string())?;
    let (r, d) = (m.r_star / PI, m.d_star / PI);
    check(
        (probe - 25.0 * PI / 9.0).abs() < 1e-12 && (2.774..=2.776).contains(&d) && (0.850..=0.852).contains(&r),
        format!("dbar(5pi/6) - 25pi/9 = {:e}, minimum {d:.6}pi at {r:.6}pi", probe - 25.0 * PI / 9.0),
    )
}

fn dbar_fixed_point() -> Outcome {
    let (lo, hi) = (2.0 * PI / 3.0 + 1e-3, PI - 1e-3);
    let mut worst = 0.0_f64;
    for i in 0..1000 {
        let r = lo + (hi - lo) * (i as f64 + 0.5) / 1000.0;
        worst = worst.max(dbar_fixed_point_residual(r).map_err(|e| e.to_string())?.abs());
    }
    check(worst < 1e-10, format!("max residual {worst:e}"))
}

fn table() -> Outcome {
    let mut rows = 0;
    let mut worst = 0.0_f64;
    for n in 3..=16 {
        for r in table1(n) {
            rows += 1;
            let v = scaled_inj(r.scal, n, r.inj).map_err(|e| e.to_string())?;
            worst = worst.max((v - r.scaled_printed).abs());
        }
    }
    let flagged = table1(4)
        .into_iter()
        .find(|r| r.manifold_name == "S^(n-2) x S^2")
        .ok_or("row missing at n = 4")?;
    check(
        worst < 1e-12 && !flagged.consistent && flagged.scal == 6.0 && flagged.scal_recomputed == 4.0,
        format!("{rows} rows, scaled column {worst:e}, S^(n-2) x S^2 at n = 4: 6 vs 4 flagged"),
    )
}

fn geometry_oracles() -> Outcome {
    let t = Instant::now();
    let a = ScaledSine::UNIT;
    let round = Surface::new(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let p = SurfacePoint::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let q = SurfacePoint::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let exact = (p.r.cos() * q.r.cos() + p.r.sin() * q.r.sin() * (p.phi - q.phi).cos())
            .clamp(-1.0, 1.0)
            .acos();
        worst = worst.max((distance(&round, p, q).map_err(|e| e.to_string())? - exact).abs());
    }
    let inj = injectivity_radius(&round, 16, 8).map_err(|e| e.to_string())?.inj_estimate;
    let k4 = ScaledSine::new(2.0);
    let small = Surface::with_meridian(&k4, FRAC_PI_2);
    let conj = conjugate_radius(&small, SurfacePoint::new(0.4, 0.0), 0.8, 3.0)
        .map_err(|e| e.to_string())?
        .ok_or("no conjugate point")?;
    let el = t.elapsed();
    check(
        worst < 1e-5 && (inj - PI).abs() < 1e-3 && (conj - FRAC_PI_2).abs() < 1e-6 && within(el, 30.0),
        format!("distance {worst:e}, inj - pi {:e}, conj - pi/2 {:e}, {el:?}", inj - PI, conj - FRAC_PI_2),
    )
}

fn inj_trend() -> Outcome {
    let t = rescaled_inj_trend(3, &[0.0, 0.1, 0.2]).map_err(|e| e.to_string())?;
    let v: Vec<f64> = t.iter().map(|p| p.rescaled_inj).collect();
    check(
        v.windows(2).all(|w| w[0] > w[1]),
        format!("{:.6} > {:.6} > {:.6}", v[0], v[1], v[2]),
    )
}

fn projection() -> Outcome {
    let p = WarpFamilyParams::from_segment(5, 0.5).map_err(|e| e.to_string())?;
    let (a, b) = (p.a(), p.b());
    let random = projection_nonexpansion_check(&a, &b, 5, 200, CurveKind::Random, 1).map_err(|e| e.to_string())?;
    let flat = projection_nonexpansion_check(&a, &b, 5, 200, CurveKind::ConstantTorus, 2).map_err(|e| e.to_string())?;
    check(
        random.min_difference >= -1e-9 && flat.max_abs_difference < 1e-8,
        format!("least difference {:e}, constant torus {:e}", random.min_difference, flat.max_abs_difference),
    )
}

/// Every subcommand with small but non-trivial settings.
const RUNS: &[&[&str]] = &[
    &["scal-profile", "--plot"],
    &["scal-profile", "--alpha", "0.05", "--beta", "0.08", "--n", "6", "--format", "json"],
    &["band-check", "--n", "5", "--format", "json"],
    &["region-scan", "--resolution", "24", "--grid", "201", "--plot"],
    &["corner-roots", "--hints"],
    &["segment-sweep", "--samples", "2", "--n", "3"],
    &["certify", "--s", "0.1"],
    &["dbar", "--plot"],
    &["dbar-min"],
    &["table1", "--n", "16"],
    &["table1", "--n", "8", "--format", "json"],
    &["geodesic", "--s", "1", "--theta", "0.7", "--length", "6"],
    &["inj", "--s", "1"],
    &["inj", "--s", "0.5", "--format", "json"],
    &["inj-trend", "--n", "3"],
    &["bounds", "--seed", "42", "--samples", "50"],
];

fn run_all(dir: &Path) -> Result<(), String> {
    for args in RUNS {
        let status = Command::new(env!("CARGO_BIN_EXE_scalinj"))
            .args(*args)
            .arg("--out")
            .arg(dir)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("{args:?}: {}", String::from_utf8_lossy(&status.stderr)));
        }
    }
    Ok(())
}

fn snapshot(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let e = e.map_err(|e| e.to_string())?;
            let bytes = std::fs::read(e.path()).map_err(|e| e.to_string())?;
            Ok((e.file_name().to_string_lossy().into_owned(), bytes))
        })
        .collect::<Result<_, String>>()?;
    files.sort();
    Ok(files)
}

fn determinism() -> Outcome {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_all(first.path())?;
    run_all(second.path())?;
    let (a, b) = (snapshot(first.path())?, snapshot(second.path())?);
    let commands: std::collections::BTreeSet<&str> = RUNS.iter().map(|r| r[0]).collect();
    check(
        a == b && commands.len() == 13,
        format!("{} files from {} subcommands, byte-identical: {}", a.len(), commands.len(), a == b),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("band-model oracle", band_oracle),
        ("endpoint closed forms", endpoint_closed_forms),
        ("corner roots", corner_roots),
        ("s-derivative formula", derivative_formula),
        ("counterexample certificates", certificates),
        ("D-bar values", dbar_values),
        ("D-bar fixed point", dbar_fixed_point),
        ("classical examples table", table),
        ("geometry oracles", geometry_oracles),
        ("rescaled injectivity trend", inj_trend),
        ("projection non-expansion", projection),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
