use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Serialize;

use scalinj_core::bounds::{
    band_bound, band_model_separation, bonnet_myers_bound, dbar, green_conjugacy_bound,
    minimize_dbar, mu_bubble_delta, table1,
};
use scalinj_core::curvature::{
    band_model_residual, curvature_profile, s_derivative_lower_bound, WarpFamilyParams,
};
use scalinj_core::geometry::{
    injectivity_radius, projection_nonexpansion_check, shoot_geodesic, CurveKind, Surface,
    SurfacePoint, Witness,
};
use scalinj_core::search::{
    certify_counterexample, rescaled_inj_trend, root_hints, scan_region_with_grid, seed_lattice,
    solve_corner_system, sweep_segment, Execution,
};

use crate::output::{self, num, stem, Format, Sink};
use crate::{Cli, Command, Failure, Family, Window};

/// Distance of the sampled band interior from each boundary component.
const BAND_MARGIN: f64 = 0.05;

pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, Failure> {
    if cli.plot && cli.format != Format::Csv {
        return Err(Failure::Validation("--plot needs --format csv".into()));
    }
    let sink = Sink::open(&cli.out, cli.format)?;
    let n = cli.n;
    let mut written = Vec::new();
    let plot = |stem: &str, script: String, written: &mut Vec<PathBuf>| -> Result<(), Failure> {
        if cli.plot {
            written.push(sink.write_plot(stem, &script)?);
        }
        Ok(())
    };
    match &cli.command {
        Command::ScalProfile { family, grid } => {
            let (params, tag) = family_params(n, family)?;
            let profile = curvature_profile(&params, *grid)?;
            let rows: Vec<ProfileRow> = profile.samples().map(|(r, scal)| ProfileRow { r, scal }).collect();
            let name = stem("scal-profile", n, &[tag, ("grid", grid.to_string())]);
            written.push(sink.write(&name, &rows)?);
            let title = format!("scal, n = {n}, alpha = {}, beta = {}", params.alpha, params.beta);
            plot(&name, output::profile_script(&data_name(&name), &title), &mut written)?;
        }
        Command::BandCheck { samples } => {
            let residual = band_model_residual(n, *samples, BAND_MARGIN)?;
            let rows = [BandRow {
                n,
                samples: *samples,
                target: f64::from(n) * (f64::from(n) - 1.0),
                max_abs_residual: residual,
            }];
            let name = stem("band-check", n, &[("samples", samples.to_string())]);
            written.push(sink.write(&name, &rows)?);
        }
        Command::RegionScan {
            window,
            resolution,
            grid,
        } => {
            let region = scan_region_with_grid(
                n,
                (window.alpha_min, window.alpha_max),
                (window.beta_min, window.beta_max),
                *resolution,
                *grid,
                Execution::Parallel,
            )?;
            let mut params = window_params(window);
            params.push(("res", resolution.to_string()));
            params.push(("grid", grid.to_string()));
            let name = stem("region-scan", n, &params);
            written.push(sink.write(&name, &region.cells)?);
            plot(&name, output::region_script(&data_name(&name)), &mut written)?;
        }
        Command::CornerRoots { window, hints } => {
            let mut seeds = seed_lattice((window.alpha_min, window.alpha_max), (window.beta_min, window.beta_max));
            if *hints {
                seeds.extend(root_hints(n));
            }
            let solution = solve_corner_system(n, &seeds)?;
            for f in &solution.failures {
                eprintln!("seed ({}, {}): {}", f.seed.0, f.seed.1, f.reason);
            }
            let mut params = window_params(window);
            if *hints {
                params.push(("hints", "1".into()));
            }
            let name = stem("corner-roots", n, &params);
            written.push(sink.write(&name, &solution.roots)?);
        }
        Command::SegmentSweep { samples } => {
            if *samples < 2 {
                return Err(Failure::Validation("--samples must be at least 2".into()));
            }
            let s_values: Vec<f64> = (0..*samples).map(|i| i as f64 / (*samples - 1) as f64).collect();
            let certificates = sweep_segment(n, &s_values)?;
            let name = stem("segment-sweep", n, &[("samples", samples.to_string())]);
            written.push(sink.write(&name, &certificates)?);
        }
        Command::Certify { s } => {
            let certificate = certify_counterexample(n, *s)?;
            let name = stem("certify", n, &[("s", num(*s))]);
            written.push(sink.write(&name, &[certificate])?);
        }
        Command::Dbar { samples } => {
            if *samples < 2 {
                return Err(Failure::Validation("--samples must be at least 2".into()));
            }
            let step = PI / (3.0 * *samples as f64);
            let rows = (1..*samples)
                .map(|i| {
                    let r = 2.0 * PI / 3.0 + i as f64 * step;
                    Ok(DbarRow { r, dbar: dbar(r)? })
                })
                .collect::<Result<Vec<_>, scalinj_core::Error>>()?;
            let name = stem("dbar", n, &[("samples", samples.to_string())]);
            written.push(sink.write(&name, &rows)?);
            plot(&name, output::dbar_script(&data_name(&name)), &mut written)?;
        }
        Command::DbarMin { tolerance } => {
            let m = minimize_dbar(*tolerance)?;
            let rows = [DbarMinRow {
                r_star: m.r_star,
                d_star: m.d_star,
                r_star_over_pi: m.r_star / PI,
                d_star_over_pi: m.d_star / PI,
                evaluations: m.evaluations,
            }];
            let name = stem("dbar-min", n, &[("tol", num(*tolerance))]);
            written.push(sink.write(&name, &rows)?);
        }
        Command::Table1 => {
            if n < 3 {
                return Err(Failure::Validation(format!("table1 needs n >= 3, got {n}")));
            }
            let name = stem("table1", n, &[]);
            let records = table1(n);
            match sink.format() {
                Format::Csv => {
                    let rows: Vec<TableRow> = records
                        .iter()
                        .map(|r| TableRow {
                            name: r.manifold_name.clone(),
                            n: r.n,
                            scal_printed: r.scal,
                            inj: r.inj,
                            scaled_printed: r.scaled_printed,
                            scal_recomputed: r.scal_recomputed,
                            consistent_flag: r.consistent,
                        })
                        .collect();
                    written.push(sink.write(&name, &rows)?);
                }
                Format::Json => written.push(sink.write(&name, &records)?),
            }
        }
        Command::Geodesic {
            family,
            r,
            theta,
            length,
        } => {
            let (params, tag) = family_params(n, family)?;
            let a = params.a();
            let surface = Surface::new(&a);
            let path = shoot_geodesic(&surface, SurfacePoint::new(*r, 0.0), *theta, *length)?;
            let rows: Vec<GeodesicRow> = path
                .states
                .iter()
                .zip(&path.arc_lengths)
                .zip(&path.jacobi)
                .map(|((s, &t), j)| GeodesicRow {
                    t,
                    r: s.r,
                    phi: s.phi,
                    dr: s.dr,
                    dphi: s.dphi,
                    clairaut: s.clairaut,
                    jacobi: j[0],
                    jacobi_rate: j[1],
                })
                .collect();
            let name = stem(
                "geodesic",
                n,
                &[tag, ("r", num(*r)), ("theta", num(*theta)), ("len", num(*length))],
            );
            written.push(sink.write(&name, &rows)?);
        }
        Command::Inj { family, samples, base } => {
            let (params, tag) = family_params(n, family)?;
            let a = params.a();
            let report = injectivity_radius(&Surface::new(&a), *samples, *base)?;
            let name = stem(
                "inj",
                n,
                &[tag, ("samples", samples.to_string()), ("base", base.to_string())],
            );
            match sink.format() {
                Format::Csv => {
                    let rows: Vec<WitnessRow> = report
                        .witnesses
                        .iter()
                        .map(|w| WitnessRow::new(&params, &report, w))
                        .collect();
                    written.push(sink.write(&name, &rows)?);
                }
                Format::Json => written.push(sink.write(&name, &[report])?),
            }
        }
        Command::InjTrend { s, samples } => {
            if *samples < 2 {
                return Err(Failure::Validation("--samples must be at least 2".into()));
            }
            let s_values: Vec<f64> = (0..*samples).map(|i| *s * i as f64 / (*samples - 1) as f64).collect();
            let trend = rescaled_inj_trend(n, &s_values)?;
            let name = stem("inj-trend", n, &[("s", num(*s)), ("samples", samples.to_string())]);
            written.push(sink.write(&name, &trend)?);
        }
        Command::Bounds { family, samples, seed } => {
            let (params, tag) = family_params(n, family)?;
            let rows = bounds_rows(&params, *samples, *seed)?;
            let name = stem(
                "bounds",
                n,
                &[tag, ("samples", samples.to_string()), ("seed", seed.to_string())],
            );
            written.push(sink.write(&name, &rows)?);
        }
    }
    Ok(written)
}

fn data_name(stem: &str) -> String {
    format!("{stem}.csv")
}

fn family_params(n: u32, family: &Family) -> Result<(WarpFamilyParams, (&'static str, String)), Failure> {
    match (family.s, family.alpha, family.beta) {
        (Some(s), _, _) => Ok((WarpFamilyParams::from_segment(n, s)?, ("s", num(s)))),
        (None, None, None) => Ok((WarpFamilyParams::from_segment(n, 0.5)?, ("s", num(0.5)))),
        (None, alpha, beta) => {
            let (alpha, beta) = (alpha.unwrap_or(0.0), beta.unwrap_or(0.0));
            let params = WarpFamilyParams::new(n, alpha, beta)?;
            Ok((params, ("ab", format!("{}_{}", num(alpha), num(beta)))))
        }
    }
}

fn window_params(w: &Window) -> Vec<(&'static str, String)> {
    vec![
        ("a", format!("{}_{}", num(w.alpha_min), num(w.alpha_max))),
        ("b", format!("{}_{}", num(w.beta_min), num(w.beta_max))),
    ]
}

fn bounds_rows(params: &WarpFamilyParams, samples: usize, seed: u64) -> Result<Vec<BoundRow>, Failure> {
    let n = params.n;
    let nf = f64::from(n);
    let (a, b) = (params.a(), params.b());
    let check = |kind| projection_nonexpansion_check(&a, &b, n, samples, kind, seed);
    let random = check(CurveKind::Random)?;
    let flat = check(CurveKind::ConstantTorus)?;
    let fibre = check(CurveKind::TorusOnly)?;
    let row = |quantity: &str, value: f64| BoundRow {
        quantity: quantity.to_string(),
        n,
        value,
    };
    Ok(vec![
        row("green_conjugacy_bound_at_round_curvature", green_conjugacy_bound(n, nf * (nf - 1.0))?),
        row("band_bound", band_bound(n)?),
        row("band_model_separation", band_model_separation(n)?),
        row("band_model_max_abs_residual", band_model_residual(n, 200, BAND_MARGIN)?),
        row("bonnet_myers_bound", bonnet_myers_bound(n)?),
        row("mu_bubble_delta_at_band_bound", mu_bubble_delta(band_bound(n)?)?),
        row("s_derivative_lower_bound", s_derivative_lower_bound(n)),
        row("projection_min_difference_random", random.min_difference),
        row("projection_min_difference_torus_only", fibre.min_difference),
        row("projection_max_abs_difference_constant_torus", flat.max_abs_difference),
    ])
}

#[derive(Serialize)]
struct ProfileRow {
    r: f64,
    scal: f64,
}

#[derive(Serialize)]
struct BandRow {
    n: u32,
    samples: usize,
    target: f64,
    max_abs_residual: f64,
}

#[derive(Serialize)]
struct DbarRow {
    r: f64,
    dbar: f64,
}

#[derive(Serialize)]
struct DbarMinRow {
    r_star: f64,
    d_star: f64,
    r_star_over_pi: f64,
    d_star_over_pi: f64,
    evaluations: usize,
}

#[derive(Serialize)]
struct TableRow {
    name: String,
    n: u32,
    scal_printed: f64,
    inj: f64,
    scaled_printed: f64,
    scal_recomputed: f64,
    consistent_flag: bool,
}

#[derive(Serialize)]
struct GeodesicRow {
    t: f64,
    r: f64,
    phi: f64,
    dr: f64,
    dphi: f64,
    clairaut: f64,
    jacobi: f64,
    jacobi_rate: f64,
}

#[derive(Serialize)]
struct WitnessRow {
    alpha: f64,
    beta: f64,
    conjugate_radius: f64,
    half_systole: f64,
    inj_estimate: f64,
    witness: &'static str,
    witness_r: Option<f64>,
    witness_direction: Option<f64>,
    witness_length: f64,
}

impl WitnessRow {
    fn new(params: &WarpFamilyParams, report: &scalinj_core::geometry::InjectivityReport, w: &Witness) -> Self {
        let (witness, witness_r, witness_direction, witness_length) = match *w {
            Witness::ConjugatePoint { base_r, direction, length } => {
                ("conjugate_point", Some(base_r), Some(direction), length)
            }
            Witness::ClosedParallel { r, length } => ("closed_parallel", Some(r), None, length),
            Witness::MeridianLoop { length } => ("meridian_loop", None, None, length),
        };
        Self {
            alpha: params.alpha,
            beta: params.beta,
            conjugate_radius: report.conjugate_radius,
            half_systole: report.half_systole,
            inj_estimate: report.inj_estimate,
            witness,
            witness_r,
            witness_direction,
            witness_length,
        }
    }
}

#[derive(Serialize)]
struct BoundRow {
    quantity: String,
    n: u32,
    value: f64,
}
