use logfreq::carleson::{
    build_mu_eps, carleson_constant, mv_fuzz, random_box_oracle, Atom, BoxMeasure, MV_CONSTANT,
};
use logfreq::extremal::{frame_decay_ratio_unchecked, norm_g_squared, tail_weight, ExtremalConfig};
use logfreq::frame_core::{estimate_frame_bounds, verify_frame_operator_identity};
use logfreq::matcher::{
    dual_frame_norm_sq, evaluate_dirichlet, evaluate_phi, match_minimal_norm, sample_real_boundary,
    BoundConstants, HardyFunction, ReflectionDomainPoint,
};
use logfreq::quadrature::{Interval, QuadratureGrid};
use logfreq::sampling::{check_easy_inequality, construct_lambda, PulseTrain, SamplingConfig};
use logfreq::special_functions::ComplexPoint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::path::Path;

use crate::config::{
    CarlesonSection, ExtremalSection, FrameBoundsSection, IdentitySection, MatchSection,
    MvFuzzSection, SamplingSection,
};
use crate::output::{emit, float, json_document, to_value, CsvDocument};
use crate::CliError;

/// Section plus the seed, as embedded in the artifact.
#[derive(Serialize)]
struct Resolved<'a, S: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    section: &'a S,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn interval(ends: [f64; 2]) -> Result<Interval, CliError> {
    Interval::new(ends[0], ends[1]).map_err(usage)
}

pub fn frame_bounds(cfg: &FrameBoundsSection, out: Option<&Path>) -> Result<(), CliError> {
    if cfg.lengths.is_empty() {
        return Err(usage("the |I| sweep is empty"));
    }
    let intervals = cfg
        .lengths
        .iter()
        .map(|&l| Interval::centered(l).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let estimates = intervals
        .into_iter()
        .map(|iv| estimate_frame_bounds(iv, cfg.truncation, cfg.grid, cfg.alpha))
        .collect::<Result<Vec<_>, _>>()?;
    let resolved = Resolved {
        seed: None,
        section: cfg,
    };

    if let Some(path) = &cfg.spectrum_out {
        let rows = estimates.iter().flat_map(|est| {
            est.spectrum
                .iter()
                .enumerate()
                .map(|(i, ev)| vec![float(est.interval.length()), i.to_string(), float(*ev)])
        });
        let bytes =
            CsvDocument::new(&resolved, &[])?.rows(&["length", "index", "eigenvalue"], rows)?;
        emit(Some(path), &bytes)?;
    }

    let header = [
        "length",
        "a",
        "b",
        "N",
        "M",
        "alpha",
        "A_est",
        "B_est",
        "converged",
        "last_doubling_change",
        "tail_corrected",
        "truncated_A",
        "truncated_B",
        "truncated_rank",
    ];
    let rows = estimates.iter().map(|est| {
        vec![
            float(est.interval.length()),
            float(est.interval.a()),
            float(est.interval.b()),
            est.truncation.to_string(),
            est.grid_size.to_string(),
            float(est.alpha),
            float(est.a_est),
            float(est.b_est),
            est.converged.to_string(),
            float(est.last_doubling_change),
            est.tail_corrected.to_string(),
            float(est.truncated.a_est),
            float(est.truncated.b_est),
            est.truncated.rank.to_string(),
        ]
    });
    let bytes = CsvDocument::new(&resolved, &[])?.rows(&header, rows)?;
    emit(out, &bytes)
}

fn hardy_function(cfg: &MatchSection) -> Result<HardyFunction, CliError> {
    let mut terms = cfg.terms.iter().map(|t| {
        HardyFunction::rational(
            Complex64::new(t.coeff[0], t.coeff[1]),
            Complex64::new(t.shift[0], t.shift[1]),
            t.power,
        )
        .map_err(usage)
    });
    let first = terms.next().ok_or_else(|| {
        usage("no function given: pass --term or --reciprocal, or set match.terms")
    })??;
    terms.try_fold(first, |acc, t| Ok(acc.plus(t?)))
}

pub fn matching(cfg: &MatchSection, out: Option<&Path>) -> Result<(), CliError> {
    let f = hardy_function(cfg)?;
    let iv = interval(cfg.interval)?;
    let points = cfg
        .phi_points
        .iter()
        .map(|p| {
            let s = ComplexPoint::new(p[0], p[1]).map_err(usage)?;
            let mirror = ComplexPoint::new(1.0 - p[0], p[1]).map_err(usage)?;
            Ok((
                ReflectionDomainPoint::new(s, iv).map_err(usage)?,
                ReflectionDomainPoint::new(mirror, iv).map_err(usage)?,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let grid = QuadratureGrid::gauss_legendre(iv, cfg.grid).map_err(usage)?;
    let v = sample_real_boundary(&f, &grid);
    let est = estimate_frame_bounds(iv, cfg.bound_truncation, cfg.bound_grid, 0.0)?;
    let bounds = BoundConstants::from_frame_bounds(est.a_est, est.b_est);
    let result = match_minimal_norm(&v, &grid, cfg.truncation, cfg.cutoff, bounds)?;
    let dual = dual_frame_norm_sq(&v, &grid)?;

    let mut phi = Vec::with_capacity(points.len());
    for (s, mirror) in points {
        let at_s = evaluate_phi(&f, &result.gamma, iv, s, cfg.tail_cut)?;
        let at_mirror = evaluate_phi(&f, &result.gamma, iv, mirror, cfg.tail_cut)?;
        let z = s.point().to_complex();
        // f - F is the same function on the right half plane.
        let direct =
            (z.re > 0.5).then(|| complex(f.eval(z) - evaluate_dirichlet(&result.gamma, z)));
        phi.push(json!({
            "s": complex(z),
            "value": complex(at_s.value),
            "tail_bound": at_s.tail_bound,
            "direct_value": direct,
            "reflected_value": complex(at_mirror.value),
            "reflection_defect": (at_s.value + at_mirror.value.conj()).norm(),
        }));
    }

    let mut top: Vec<(usize, Complex64)> = result
        .gamma
        .positive()
        .iter()
        .enumerate()
        .map(|(i, g)| (i + 1, *g))
        .collect();
    top.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()).then(a.0.cmp(&b.0)));
    top.truncate(cfg.gamma_top);
    let gamma: Vec<Value> = top
        .into_iter()
        .map(|(n, g)| json!({ "n": n, "value": complex(g) }))
        .collect();

    let body = json!({
        "interval": [iv.a(), iv.b()],
        "N": cfg.truncation,
        "M": cfg.grid,
        "cutoff": cfg.cutoff,
        "rank": result.rank,
        "residual": result.residual,
        "F_norm_sq": result.polynomial_norm_sq,
        "data_norm_sq": result.data_norm_sq,
        "c_bound": bounds.lower,
        "C_bound": bounds.upper,
        "A_est": est.a_est,
        "B_est": est.b_est,
        "bounds_converged": est.converged,
        "sandwich_holds": result.sandwich_holds(),
        "dual_norm_sq": dual,
        "gamma": gamma,
        "phi": phi,
    });
    let bytes = json_document(
        &Resolved {
            seed: None,
            section: cfg,
        },
        body,
    )?;
    emit(out, &bytes)
}

pub fn extremal(cfg: &ExtremalSection, out: Option<&Path>) -> Result<(), CliError> {
    if cfg.lengths.is_empty() {
        return Err(usage("the T sweep is empty"));
    }
    let configs = cfg
        .lengths
        .iter()
        .map(|&t| ExtremalConfig::new(t, cfg.epsilon).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let header = [
        "T",
        "epsilon",
        "mu",
        "K",
        "norm_sq",
        "norm_floor",
        "norm_ok",
        "tail_weight",
        "tail_upper",
        "tail_target",
        "tail_ok",
        "ratio",
        "paper_bound",
        "ratio_ok",
        "support_sum",
        "support_ok",
    ];
    let rows = configs.iter().map(|c| {
        let t = c.length();
        let norm = norm_g_squared(c);
        let floor = 4.0 / (15.0 * t.powi(3));
        let tail = tail_weight(c);
        let decay = frame_decay_ratio_unchecked(c);
        vec![
            float(t),
            float(c.epsilon()),
            float(c.mu()),
            c.factors().to_string(),
            float(norm.value),
            float(floor),
            (norm.value >= floor).to_string(),
            float(tail.sum),
            float(tail.total_upper()),
            float(c.tail_target()),
            (tail.total_upper() <= c.tail_target()).to_string(),
            float(decay.ratio),
            float(decay.decay_bound),
            decay.within_bound().to_string(),
            float(decay.support_sum),
            (decay.support_sum <= t).to_string(),
        ]
    });
    let bytes = CsvDocument::new(
        &Resolved {
            seed: None,
            section: cfg,
        },
        &[],
    )?
    .rows(&header, rows)?;
    emit(out, &bytes)
}

pub fn sampling(cfg: &SamplingSection, out: Option<&Path>) -> Result<(), CliError> {
    let scfg = SamplingConfig::new(cfg.length, cfg.eta).map_err(usage)?;
    if cfg.shifts.len() != cfg.coeffs.len() || cfg.shifts.is_empty() {
        return Err(usage(
            "sampling.shifts and sampling.coeffs need the same nonzero length",
        ));
    }
    let pulse = PulseTrain {
        tau: cfg.tau_fraction * cfg.length,
        beta: cfg.beta,
        shifts: cfg.shifts.clone(),
        coeffs: cfg
            .coeffs
            .iter()
            .map(|c| Complex64::new(c[0], c[1]))
            .collect(),
    };
    if !(pulse.tau > 0.0 && pulse.support_radius() <= cfg.length) {
        return Err(usage(format!(
            "test pulse support {} exceeds T = {}",
            pulse.support_radius(),
            cfg.length
        )));
    }
    let k_max = cfg.k_max.unwrap_or(4 * scfg.k0());
    let freq = construct_lambda(|x| pulse.transform(x).norm(), scfg, k_max)?;
    let n_max = cfg.easy_n_max.unwrap_or(2 * freq.max_index());
    let easy = check_easy_inequality(|x| pulse.transform(x), &freq, n_max)?;

    let separation = freq.min_separation();
    let separation_floor = 1.0 / (4.0 * scfg.width());
    let kadec = freq.max_kadec_offset();
    let fallbacks = freq.entries.iter().filter(|e| e.fallback).count();
    let checks = json!({
        "min_separation": separation,
        "separation_floor": separation_floor,
        "separation_ok": separation >= separation_floor,
        "max_kadec_offset": kadec,
        "kadec_ok": kadec <= 0.25,
        "fallback_windows": fallbacks,
        "easy_inequality": to_value(&easy)?,
        "easy_n_max": n_max,
    });
    let body = json!({
        "frequency_set": to_value(&freq)?,
        "checks": checks,
    });
    let bytes = json_document(
        &Resolved {
            seed: None,
            section: cfg,
        },
        body,
    )?;
    emit(out, &bytes)?;
    let mut failed = Vec::new();
    if separation < separation_floor {
        failed.push("separation");
    }
    if kadec > 0.25 {
        failed.push("Kadec offset");
    }
    if !easy.holds {
        failed.push("easy inequality");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "sampling checks failed: {}",
            failed.join(", ")
        )))
    }
}

#[derive(Deserialize)]
struct AtomRow {
    sigma: f64,
    t: f64,
    mass: f64,
}

fn read_measure(path: &Path) -> Result<BoxMeasure, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(usage)?;
    let atoms = reader
        .deserialize::<AtomRow>()
        .map(|row| {
            let row = row.map_err(usage)?;
            Atom::new(row.sigma, row.t, row.mass).map_err(usage)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoxMeasure::new(atoms))
}

pub fn carleson(
    cfg: &CarlesonSection,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mu = match &cfg.measure {
        Some(path) => read_measure(path)?,
        None => build_mu_eps(
            cfg.length,
            cfg.epsilon,
            cfg.shift.unwrap_or(cfg.epsilon / 2.0),
        )
        .map_err(usage)?,
    };
    let oracle_seed = match (cfg.oracle_samples, seed) {
        (0, _) => None,
        (_, Some(s)) => Some(s),
        (_, None) => return Err(usage("the box oracle is randomized and needs --seed")),
    };
    let exact = carleson_constant(&mu)?;
    let mut notes = vec![
        ("carleson_constant".to_string(), float(exact.constant)),
        ("argmax_t_low".to_string(), float(exact.argmax.t_low)),
        ("argmax_side".to_string(), float(exact.argmax.side)),
        ("total_mass".to_string(), float(mu.total_mass())),
    ];
    let mut oracle_exceeds = false;
    if let Some(s) = oracle_seed {
        if let Some(best) = random_box_oracle(&mu, cfg.oracle_samples, s) {
            oracle_exceeds = best.constant > exact.constant * (1.0 + 1e-12);
            notes.push(("oracle_constant".to_string(), float(best.constant)));
        }
    }
    let rows = mu
        .atoms()
        .iter()
        .map(|a| vec![float(a.sigma), float(a.t), float(a.mass)]);
    let resolved = Resolved {
        seed: oracle_seed,
        section: cfg,
    };
    let bytes = CsvDocument::new(&resolved, &notes)?.rows(&["sigma", "t", "mass"], rows)?;
    emit(out, &bytes)?;
    if oracle_exceeds {
        return Err(CliError::Check(
            "a random box beat the exact Carleson constant".into(),
        ));
    }
    Ok(())
}

pub fn mv(cfg: &MvFuzzSection, seed: Option<u64>, out: Option<&Path>) -> Result<(), CliError> {
    let seed = seed
        .ok_or_else(|| usage("mv-fuzz is randomized and needs --seed (or seed in the config)"))?;
    if cfg.instances == 0 || cfg.max_len < 2 {
        return Err(usage(
            "mv-fuzz needs at least one instance and max_len >= 2",
        ));
    }
    let report = mv_fuzz(seed, cfg.instances, cfg.max_len);
    let body = json!({
        "seed": report.seed,
        "instances": report.instances,
        "violations": report.violations,
        "holds": report.instances - report.violations,
        "max_ratio": report.max_ratio,
        "argmax_instance": report.argmax_instance,
        "constant": MV_CONSTANT,
    });
    let bytes = json_document(
        &Resolved {
            seed: Some(seed),
            section: cfg,
        },
        body,
    )?;
    emit(out, &bytes)?;
    if report.violations > 0 {
        return Err(CliError::Check(format!(
            "{} of {} instances violate the inequality",
            report.violations, report.instances
        )));
    }
    Ok(())
}

pub fn verify_identity(cfg: &IdentitySection, out: Option<&Path>) -> Result<(), CliError> {
    let iv = interval(cfg.interval)?;
    let centre = iv.midpoint();
    let half = 0.5 * iv.length();
    let bump = move |t: f64| Complex64::new(0.5 * (1.0 + (PI * (t - centre) / half).cos()), 0.0);
    let report = verify_frame_operator_identity(iv, bump, cfg.truncation, cfg.grid)?;
    let holds = report.residual <= cfg.threshold;
    let body = json!({
        "test_function": "raised_cosine",
        "residual": report.residual,
        "numerator": report.numerator,
        "denominator": report.denominator,
        "N": report.truncation,
        "M": report.grid_size,
        "threshold": cfg.threshold,
        "holds": holds,
    });
    let bytes = json_document(
        &Resolved {
            seed: None,
            section: cfg,
        },
        body,
    )?;
    emit(out, &bytes)?;
    if !holds {
        return Err(CliError::Check(format!(
            "identity residual {} above {}",
            report.residual, cfg.threshold
        )));
    }
    Ok(())
}
