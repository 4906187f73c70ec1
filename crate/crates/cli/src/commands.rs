use graphlim::density::{
    alpha_regularity_report, essential_girth_profile, ConvergenceTable, DensityKind, Pattern,
};
use graphlim::graph::to_edge_list;
use graphlim::graphoning::{
    acyclicity_test, covering_sum, gauge_growth_check, is_adjacent, kernel_sample,
    mc_rooted_tree_density, AcyclicityDepth, DigitPoint, GaugeFunction, GaugeKind,
};
use graphlim::measure::{cdf_distance_to, gaussian_cdf};
use graphlim::poly::{
    chromatic_polynomial_capped, chvalue_identity_check, matching_profile_capped, matchpar_check,
    real_roots, DEFAULT_ROOT_CONSTANT,
};
use graphlim::spectral::{
    adjacency_spectrum_as, closed_walk_total, dirac_concentration_check, sigma_from,
    sigma_sqrt_from,
};
use graphlim::verify::{run_criterion, VerifyConfig, CRITERIA, DEFAULT_SEED};
use graphlim::RandomSource;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::Failure;

/// Output of one subcommand: a JSON document, extra files, and the
/// invariants it asserted.
pub struct Report {
    pub name: &'static str,
    pub results: Value,
    pub files: Vec<(String, String)>,
    pub assertions: Vec<(String, bool)>,
    /// Lines echoed to stdout when reports go to files.
    pub summary: Vec<String>,
}

impl Report {
    fn new(name: &'static str, results: Value) -> Self {
        Report {
            name,
            results,
            files: Vec::new(),
            assertions: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn assert(&mut self, name: impl Into<String>, ok: bool) {
        self.assertions.push((name.into(), ok));
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.1)
    }
}

fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub fn gen(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seq = cfg.sequence()?;
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for (label, pair) in &seq {
        let name = format!("{}.edges", file_label(label));
        rows.push(json!({"label": label, "vertices": pair.vertex_count(), "edges": pair.graph.edge_count(),
                         "d": pair.d, "file": name}));
        files.push((name, to_edge_list(&pair.graph)));
    }
    let mut report = Report::new("gen", json!({ "graphs": rows }));
    report.files = files;
    Ok(report)
}

pub fn density(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seq = cfg.sequence()?;
    let kind = match cfg.kind.as_deref().unwrap_or("hom") {
        "hom" => DensityKind::Hom,
        "inj" | "injective" => DensityKind::Injective,
        other => {
            return Err(Failure::Config(anyhow::anyhow!(
                "unknown density kind `{other}`"
            )))
        }
    };
    let patterns = cfg
        .pattern_names()
        .iter()
        .map(|p| Pattern::named(p))
        .collect::<graphlim::Result<Vec<_>>>()?;
    for p in &patterns {
        if p.graph.vertex_count() > cfg.caps.pattern_vertices {
            return Err(Failure::Cap(anyhow::anyhow!(
                "pattern {} has {} vertices, cap is {}",
                p.name,
                p.graph.vertex_count(),
                cfg.caps.pattern_vertices
            )));
        }
    }
    let table = ConvergenceTable::build(kind, &seq, &patterns)?;
    let mut report = Report::new("density", table.to_json());
    let in_range = table.cells.iter().flatten().all(|c| c.value() <= 1.0);
    report.assert("densities_at_most_one", in_range);
    report.files.push(("density.csv".into(), table.to_csv()));
    Ok(report)
}

pub fn converge(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seq = cfg.sequence()?;
    let alpha = alpha_regularity_report(&seq)?;
    let k_max = cfg.k_max.unwrap_or(6);
    let girth = essential_girth_profile(&seq, k_max)?;
    let rows: Vec<Value> = girth
        .labels
        .iter()
        .zip(&girth.values)
        .map(|(label, row)| {
            let cells: serde_json::Map<String, Value> = girth
                .ks
                .iter()
                .zip(row)
                .map(|(k, v)| {
                    (
                        format!("C{k}"),
                        json!({"exact": v.fraction(), "value": v.value()}),
                    )
                })
                .collect();
            json!({"graph": label, "t_inj": cells})
        })
        .collect();
    let cauchy_schwarz = alpha
        .rows
        .iter()
        .all(|r| r.t_p3_value >= r.t_k2_value * r.t_k2_value - 1e-12);
    let mut report = Report::new(
        "converge",
        json!({"alpha": alpha, "girth": {"rows": rows, "nonincreasing": girth.nonincreasing}}),
    );
    report.assert("t_p3_at_least_t_k2_squared", cauchy_schwarz);
    Ok(report)
}

pub fn spectra(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seq = cfg.sequence()?;
    let mut rows = Vec::new();
    let mut files = Vec::new();
    let (mut dirac_ok, mut moments_ok) = (true, true);
    for (label, pair) in &seq {
        let spec = adjacency_spectrum_as::<f64>(&pair.graph, cfg.caps.dense_spectrum)?;
        let sigma = sigma_from(&spec.eigenvalues, pair.d)?;
        let big_sigma = sigma_sqrt_from(&spec.eigenvalues, pair.d)?;
        let mut moments = Vec::new();
        let mut worst = 0.0f64;
        for k in 1..=8u32 {
            let m = sigma.moment(k);
            let walks = closed_walk_total(&pair.graph, k)
                .to_f64()
                .unwrap_or(f64::NAN);
            let exact = walks / (pair.vertex_count() as f64 * (pair.d as f64).powi(k as i32));
            worst = worst.max((m - exact).abs());
            moments.push(m);
        }
        moments_ok &= worst <= 1e-9;
        let mut dirac = Vec::new();
        for eps in [0.25, 0.5] {
            let (ok, mass) = dirac_concentration_check(&sigma, pair.d, eps);
            dirac_ok &= ok;
            dirac.push(json!({"eps": eps, "mass": mass, "holds": ok}));
        }
        let gaussian = cdf_distance_to(&big_sigma, gaussian_cdf)?;
        let name = format!("sigma_{}.csv", file_label(label));
        let meta = [
            ("graph", label.clone()),
            ("d", pair.d.to_string()),
            ("scale", "1/d".to_string()),
        ];
        files.push((name.clone(), sigma.to_csv(&meta)));
        rows.push(json!({"graph": label, "vertices": pair.vertex_count(), "d": pair.d, "moments": moments,
                         "moment_identity_error": worst, "dirac": dirac,
                         "sqrt_scaled_gaussian_distance": gaussian, "residual": spec.residual, "file": name}));
    }
    let mut report = Report::new("spectra", json!({ "rows": rows }));
    report.assert("dirac_concentration", dirac_ok);
    report.assert("moment_identity", moments_ok);
    report.files = files;
    Ok(report)
}

pub fn matching(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seq = cfg.sequence()?;
    let mut rows = Vec::new();
    let (mut bound_ok, mut identity_ok) = (true, true);
    for (label, pair) in &seq {
        let profile = matching_profile_capped(&pair.graph, &cfg.caps)?;
        let roots = real_roots(&profile.matching_polynomial())?;
        let top = roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let bound = 2.0 * ((pair.d.max(2) - 1) as f64).sqrt();
        let within = pair.d < 2 || top <= bound + 1e-9;
        bound_ok &= within;
        let check = if pair.d >= 2 {
            Some(matchpar_check(pair)?)
        } else {
            None
        };
        if let Some(c) = &check {
            identity_ok &= c.residual_m() <= 1e-8 && c.residual_pm().is_none_or(|r| r <= 1e-8);
        }
        rows.push(json!({"graph": label, "vertices": pair.vertex_count(), "d": pair.d,
                         "matchings": profile.total().to_string(), "perfect": profile.perfect().to_string(),
                         "max_root": top, "root_bound": bound, "within_bound": within, "matchpar": check}));
    }
    let mut report = Report::new("matching", json!({ "rows": rows }));
    report.assert("roots_within_bound", bound_ok);
    report.assert("matching_identities", identity_ok);
    Ok(report)
}

pub fn chromatic(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seq = cfg.sequence()?;
    let xi = Complex64::new(cfg.xi.unwrap_or(10.0), 0.0);
    if xi.norm() < 8.0 {
        return Err(Failure::Config(anyhow::anyhow!(
            "--xi must be at least 8 in modulus"
        )));
    }
    let mut rows = Vec::new();
    let mut files = Vec::new();
    let (mut identity_ok, mut disc_ok) = (true, true);
    for (label, pair) in &seq {
        let poly = chromatic_polynomial_capped(&pair.graph, &cfg.caps)?;
        let check = chvalue_identity_check(pair, xi)?;
        let roots = graphlim::poly::chromatic_root_measure(pair, DEFAULT_ROOT_CONSTANT)?;
        identity_ok &= check.residual() <= 1e-8;
        disc_ok &= roots.violations == 0;
        let name = format!("roots_{}.csv", file_label(label));
        files.push((
            name.clone(),
            roots
                .measure
                .to_csv(&[("graph", label.clone()), ("scale", "1/d".into())]),
        ));
        rows.push(json!({"graph": label, "d": pair.d, "polynomial": poly.to_json(),
                         "max_scaled_modulus": roots.max_scaled_modulus, "violations": roots.violations,
                         "xi": xi.re, "value_ratio": check.ratio(), "log_ratio": check.log_ratio,
                         "root_integral": check.root_integral, "predicted": check.predicted,
                         "residual": check.residual(), "file": name}));
    }
    let mut report = Report::new(
        "chromatic",
        json!({ "root_constant": DEFAULT_ROOT_CONSTANT, "rows": rows }),
    );
    report.assert("value_identity", identity_ok);
    report.assert("roots_in_disc", disc_ok);
    report.files = files;
    Ok(report)
}

pub fn graphoning(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let seed = cfg.require_seed("graphoning")?;
    let gauge = match cfg.gauge.as_deref().unwrap_or("cube") {
        "cube" => GaugeFunction::cube(),
        "proj" => GaugeFunction::proj(),
        "mixed" | "mixed_radix" => {
            let (Some(g), Some(d)) = (cfg.gamma.clone(), cfg.delta.clone()) else {
                return Err(Failure::Config(anyhow::anyhow!(
                    "mixed gauge needs gamma and delta lists"
                )));
            };
            GaugeFunction::mixed_radix(g, d).map_err(|e| Failure::Config(e.into()))?
        }
        other => return Err(Failure::Config(anyhow::anyhow!("unknown gauge `{other}`"))),
    };
    let spec = gauge.block_structure();
    let samples = cfg.samples.unwrap_or(10_000);
    let depth = cfg.depth.unwrap_or(128);
    let rng = RandomSource::new(seed);
    let mut report = Report::new("graphoning", Value::Null);

    let levels = match gauge.kind() {
        GaugeKind::MixedRadix { gamma, .. } => gamma.len().min(12),
        _ => 12,
    };
    let mut sums = Vec::new();
    let mut covering_ok = true;
    for n in 1..=levels {
        let s = covering_sum(&gauge, n)?;
        covering_ok &= match gauge.kind() {
            GaugeKind::MixedRadix { .. } => (s - 1.0).abs() < (-(n as f64)).exp2(),
            _ => s == 1.0,
        };
        sums.push(json!([n, s]));
    }
    report.assert("covering_sums", covering_ok);

    let mut acyclic = Vec::new();
    let mut acyclic_ok = true;
    for k in 1..=3usize {
        let r = acyclicity_test(
            &spec,
            k,
            samples,
            AcyclicityDepth::Blocks(depth),
            &rng.fork(k as u64),
        )?;
        acyclic_ok &= if k == 1 {
            r.fraction == 1.0
        } else {
            r.fraction < 0.01
        };
        acyclic.push(r);
    }
    report.assert("acyclicity", acyclic_ok);

    let radices = spec.radices(depth);
    let mut stream = rng.fork(100);
    let mut violations = 0usize;
    let draws = samples.min(10_000);
    for _ in 0..draws {
        let x = DigitPoint::from_f64(stream.unit(), radices.clone())?;
        let y = kernel_sample(&x, &spec, &mut stream)?;
        violations += usize::from(!is_adjacent(&x, &y, &spec)?);
    }
    report.assert("kernel_membership", violations == 0);

    let x = DigitPoint::zero(radices);
    let mut trees = Vec::new();
    let mut trees_ok = true;
    for (name, alpha) in [("P3", 1.0), ("P4", 1.0), ("P3", 0.5)] {
        let f = Pattern::named(name)?.graph;
        let e = mc_rooted_tree_density(&f, 0, &spec, &x, samples, alpha, &rng.fork(200))?;
        let target = alpha.powi(f.edge_count() as i32);
        trees_ok &= if alpha == 1.0 {
            e.estimate == 1.0
        } else {
            (e.estimate - target).abs() <= 4.0 * e.stderr.max(1e-12)
        };
        trees.push(json!({"pattern": name, "alpha": alpha, "target": target, "estimate": e}));
    }
    report.assert("tree_densities", trees_ok);

    let growth = if cfg.family.is_some() {
        let seq = cfg.sequence()?;
        let pairs: Vec<_> = seq.iter().map(|(_, p)| p.clone()).collect();
        let ratios = gauge_growth_check(&gauge, &pairs).map_err(|e| Failure::Config(e.into()))?;
        json!(seq
            .iter()
            .zip(&ratios)
            .map(|((l, _), r)| json!({"graph": l, "ratio": r}))
            .collect::<Vec<_>>())
    } else {
        Value::Null
    };
    report.results = json!({"gauge": gauge, "blocks": spec.blocks(8), "depth": depth, "samples": samples,
                            "covering_sums": sums, "acyclicity": acyclic,
                            "kernel": {"draws": draws, "violations": violations},
                            "tree_densities": trees, "gauge_growth": growth});
    Ok(report)
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    match cfg.suite.as_deref().unwrap_or("acceptance") {
        "acceptance" => {}
        other => return Err(Failure::Config(anyhow::anyhow!("unknown suite `{other}`"))),
    }
    let ids = cfg
        .criteria
        .clone()
        .unwrap_or_else(|| CRITERIA.iter().map(|c| c.id).collect());
    let vcfg = VerifyConfig {
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        caps: cfg.caps,
    };
    let mut reports = Vec::new();
    let mut report = Report::new("verify", Value::Null);
    for id in ids {
        graphlim::verify::criterion(id).map_err(|e| Failure::Config(e.into()))?;
        let r = run_criterion(id, &vcfg)?;
        report.summary.push(format!(
            "criterion {id:>2} {:<40} {}",
            r.title,
            if r.passed { "PASS" } else { "FAIL" }
        ));
        report.assert(format!("criterion_{id}"), r.passed);
        reports.push(r);
    }
    report.results = json!({"seed": vcfg.seed, "criteria": reports});
    Ok(report)
}
