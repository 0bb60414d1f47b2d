use serde::Serialize;

use lmg_core::algebra::{casimir_matrix, decompose, enumerate_supplementary, lmg_params, verify_commutators, RepKind};
use lmg_core::fock::{brute_force_spectrum, build_operators};
use lmg_core::quasispin::multiplicities;
use lmg_core::spectra::{
    delta_grid, eigenvalues, jblock_spectrum, multiset_distance, sector_blocks, sweep, SectorLabel, Spectrum,
    SpectrumEntry, DEFAULT_EIG_TOL,
};
use lmg_core::tables::table_rows;
use lmg_core::ModelParams;

use crate::codec::{
    csv_writer, finish_csv, fmt_num, ReportEntry, ReportParams, SpectrumReport, SPECTRUM_CSV_HEADER, SWEEP_CSV_HEADER,
};
use crate::config::{DeltaSpec, OutputFormat, RunConfig};
use crate::CliError;

/// Residual bound for commutator identities, which hold exactly.
pub const ALGEBRA_TOL: f64 = 1e-12;

fn zero_signed(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn label_fields(label: &SectorLabel) -> (String, String, String) {
    let opt = |v: Option<String>| v.unwrap_or_default();
    (
        opt(label.j().map(|h| h.to_string())),
        opt(label.big_j().map(|h| h.to_string())),
        opt(label.c().map(|c| c.to_string())),
    )
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    let params = ModelParams::reduced(cfg.n_particles, cfg.single_delta())?;
    let spectrum = lmg_core::spectra::full_spectrum(&params)?.scaled(cfg.units.factor());
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(SPECTRUM_CSV_HEADER).map_err(CliError::io)?;
            for e in spectrum.entries() {
                let (j, big_j, c) = label_fields(&e.label);
                w.write_record([j, big_j, c, fmt_num(e.energy), e.degeneracy.to_string()]).map_err(CliError::io)?;
            }
            finish_csv(w)
        }
        OutputFormat::Json => json(&spectrum_report(cfg, &params, &spectrum)),
    })
}

pub fn spectrum_report(cfg: &RunConfig, params: &ModelParams, spectrum: &Spectrum) -> SpectrumReport {
    let entries = spectrum
        .entries()
        .iter()
        .map(|e| {
            let (j, big_j, c) = label_fields(&e.label);
            ReportEntry { j, big_j, c, energy: zero_signed(e.energy), degeneracy: e.degeneracy }
        })
        .collect();
    SpectrumReport {
        params: ReportParams { n: params.n_particles, delta: params.delta, epsilon: cfg.units.factor() },
        entries,
        units: cfg.units.name().to_string(),
    }
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let DeltaSpec::Range { min, max, steps } = cfg.delta else {
        return Err(CliError::Config("sweep needs a delta range".into()));
    };
    let grid = delta_grid(min, max, steps)?;
    let rows = sweep(&ModelParams::reduced(cfg.n_particles, min)?, &grid)?;
    let factor = cfg.units.factor();
    let mut w = csv_writer();
    w.write_record(SWEEP_CSV_HEADER).map_err(CliError::io)?;
    for r in rows {
        for (i, e) in r.eigenvalues.iter().enumerate() {
            w.write_record([
                fmt_num(r.delta),
                r.j.to_string(),
                r.big_j.to_string(),
                r.c.to_string(),
                i.to_string(),
                fmt_num(e * factor),
            ])
            .map_err(CliError::io)?;
        }
    }
    Ok(finish_csv(w))
}

/// One verification outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub n: usize,
    pub delta: Option<f64>,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn measure(name: &'static str, n: usize, delta: Option<f64>, tolerance: f64, value: lmg_core::Result<f64>) -> Self {
        match value {
            Ok(value) => Check { name, n, delta, value, tolerance, passed: value <= tolerance, detail: None },
            Err(e) => Check {
                name,
                n,
                delta,
                value: f64::INFINITY,
                tolerance,
                passed: false,
                detail: Some(e.to_string()),
            },
        }
    }
}

/// Split-block spectrum, optionally with the first nonzero ladder product negated.
fn split_spectrum(params: &ModelParams, fault: bool) -> lmg_core::Result<Spectrum> {
    let mut entries = Vec::new();
    let mut fault_pending = fault;
    for (mut block, mult) in sector_blocks(params)? {
        if fault_pending {
            if let Some(i) = block.off_products.iter().position(|p| *p > 0.0) {
                let p = block.off_products[i];
                block = block.with_off_product(i, -p)?;
                fault_pending = false;
            }
        }
        let label = SectorLabel::Rep { j: block.rep.j, big_j: block.rep.big_j, c: block.rep.c };
        for energy in eigenvalues(&block, DEFAULT_EIG_TOL)? {
            entries.push(SpectrumEntry { energy, degeneracy: mult, label });
        }
    }
    Ok(Spectrum::new(entries))
}

/// Runs every check for `N = 1 ..= n_max` at each strength.
pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let DeltaSpec::Points(deltas) = &cfg.delta else {
        return Err(CliError::Config("verify needs a list of delta values".into()));
    };
    let tol = cfg.tolerance;
    let mut checks = Vec::new();
    for n in 1..=cfg.n_particles {
        for &delta in deltas {
            let params = ModelParams::reduced(n, delta)?;
            let fock = brute_force_spectrum(&params, cfg.fock_limit).map(|s| s.flatten());
            let jblock = jblock_spectrum(&params).map(|s| s.flatten());
            let split = split_spectrum(&params, cfg.inject_fault).map(|s| s.flatten());
            let dist = |a: &lmg_core::Result<Vec<f64>>, b: &lmg_core::Result<Vec<f64>>| match (a, b) {
                (Ok(a), Ok(b)) => Ok(multiset_distance(a, b)),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            let d = Some(delta);
            checks.push(Check::measure("fock-vs-jblock", n, d, tol, dist(&fock, &jblock)));
            checks.push(Check::measure("fock-vs-split", n, d, tol, dist(&fock, &split)));
            checks.push(Check::measure("jblock-vs-split", n, d, tol, dist(&jblock, &split)));
            let trace = split.as_ref().map(|s| s.iter().sum::<f64>().abs()).map_err(Clone::clone);
            checks.push(Check::measure("split-trace", n, d, tol * (1u64 << n) as f64, trace));
            let fock_comm = build_operators(&params, cfg.fock_limit).map(|ops| ops.commutator_residuals().max());
            checks.push(Check::measure("fock-commutators", n, d, ALGEBRA_TOL, fock_comm));
        }

        let mut rep_residual = Ok(0.0f64);
        let mut casimir_extra = Ok(0.0f64);
        for m in multiplicities(n) {
            let params = lmg_params(n, m.j)?;
            for rep in decompose(m.j, n)? {
                rep_residual = rep_residual.and_then(|acc| verify_commutators(&rep, &params).map(|r| acc.max(r)));
                casimir_extra = casimir_extra.and_then(|acc| {
                    let c = casimir_matrix(&rep, &params)?;
                    Ok(acc.max((c.distinct_values(ALGEBRA_TOL)?.len() - 1) as f64))
                });
            }
        }
        checks.push(Check::measure("rep-commutators", n, None, ALGEBRA_TOL, rep_residual));
        checks.push(Check::measure("casimir-scalar", n, None, 0.0, casimir_extra));
    }
    Ok(checks)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<String, CliError> {
    let checks = run_checks(cfg)?;
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(["check", "n", "delta", "value", "tolerance", "status", "detail"]).map_err(CliError::io)?;
            for c in &checks {
                w.write_record([
                    c.name.to_string(),
                    c.n.to_string(),
                    c.delta.map(fmt_num).unwrap_or_default(),
                    if c.value.is_finite() { fmt_num(c.value) } else { "inf".into() },
                    fmt_num(c.tolerance),
                    if c.passed { "pass" } else { "fail" }.to_string(),
                    c.detail.clone().unwrap_or_default(),
                ])
                .map_err(CliError::io)?;
            }
            finish_csv(w)
        }
        // a non-finite value (a check that errored) serializes as null
        OutputFormat::Json => json(&serde_json::json!({ "passed": checks.iter().all(|c| c.passed), "checks": checks })),
    };
    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        let delta = bad.delta.map(|d| format!(", delta = {}", fmt_num(d))).unwrap_or_default();
        let why = bad.detail.clone().unwrap_or_else(|| format!("{:e} > {:e}", bad.value, bad.tolerance));
        return Err(CliError::Verification {
            report: text,
            message: format!("{} failed at N = {}{delta}: {why}", bad.name, bad.n),
        });
    }
    Ok(text)
}

#[derive(Serialize)]
struct TableJson {
    j: String,
    m_j: u64,
    #[serde(rename = "J")]
    big_j: String,
    eigenvalues: Vec<f64>,
    closed_form: Option<&'static str>,
    closed_form_values: Option<Vec<f64>>,
}

pub fn cmd_table(cfg: &RunConfig) -> Result<String, CliError> {
    let delta = cfg.single_delta();
    let params = ModelParams::reduced(cfg.n_particles, delta)?;
    let factor = cfg.units.factor();
    let rows = table_rows(&params)?;
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(["j", "m_j", "J", "index", "energy", "closed_form", "closed_form_energy"])
                .map_err(CliError::io)?;
            for r in &rows {
                let closed = r.closed_form_values(delta);
                for (i, e) in r.eigenvalues.iter().enumerate() {
                    let cv = closed.as_ref().and_then(|v| v.get(i)).map(|v| fmt_num(v * factor)).unwrap_or_default();
                    w.write_record([
                        r.j.to_string(),
                        r.multiplicity.to_string(),
                        r.big_j.to_string(),
                        i.to_string(),
                        fmt_num(e * factor),
                        r.closed_form.map(|c| c.expression.to_string()).unwrap_or_default(),
                        cv,
                    ])
                    .map_err(CliError::io)?;
                }
            }
            finish_csv(w)
        }
        OutputFormat::Json => {
            let rows: Vec<TableJson> = rows
                .iter()
                .map(|r| TableJson {
                    j: r.j.to_string(),
                    m_j: r.multiplicity,
                    big_j: r.big_j.to_string(),
                    eigenvalues: r.eigenvalues.iter().map(|e| zero_signed(e * factor)).collect(),
                    closed_form: r.closed_form.map(|c| c.expression),
                    closed_form_values: r
                        .closed_form_values(delta)
                        .map(|v| v.into_iter().map(|x| zero_signed(x * factor)).collect()),
                })
                .collect();
            json(&serde_json::json!({
                "params": { "n": cfg.n_particles, "delta": delta, "epsilon": factor },
                "units": cfg.units.name(),
                "rows": rows,
            }))
        }
    })
}

#[derive(Serialize)]
struct SupplementaryJson {
    #[serde(rename = "J")]
    big_j: String,
    c: String,
    kind: &'static str,
    min_product: Option<f64>,
    eigenvalues: Vec<f64>,
}

pub fn cmd_supplementary(cfg: &RunConfig) -> Result<String, CliError> {
    let (Some(j), Some(j_max)) = (cfg.j, cfg.j_max) else {
        return Err(CliError::Config("supplementary needs --j and --j-max".into()));
    };
    let delta = cfg.single_delta();
    let params = ModelParams::reduced(cfg.n_particles, delta)?;
    let factor = cfg.units.factor();
    let mut reps = Vec::new();
    for s in enumerate_supplementary(j, cfg.n_particles, j_max)? {
        let block = lmg_core::spectra::build_block(&s.rep, &params)?;
        let vals: Vec<f64> = eigenvalues(&block, DEFAULT_EIG_TOL)?.iter().map(|e| zero_signed(e * factor)).collect();
        let min_product = s.ladder.values().into_iter().reduce(f64::min);
        reps.push((s, min_product, vals));
    }
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(["j", "J", "c", "kind", "min_product", "index", "energy"]).map_err(CliError::io)?;
            for (s, min_product, vals) in &reps {
                for (i, e) in vals.iter().enumerate() {
                    w.write_record([
                        j.to_string(),
                        s.rep.big_j.to_string(),
                        s.rep.c.to_string(),
                        s.kind.as_str().to_string(),
                        min_product.map(fmt_num).unwrap_or_default(),
                        i.to_string(),
                        fmt_num(*e),
                    ])
                    .map_err(CliError::io)?;
                }
            }
            finish_csv(w)
        }
        OutputFormat::Json => {
            let rows: Vec<SupplementaryJson> = reps
                .iter()
                .map(|(s, min_product, vals)| SupplementaryJson {
                    big_j: s.rep.big_j.to_string(),
                    c: s.rep.c.to_string(),
                    kind: s.kind.as_str(),
                    min_product: min_product.map(zero_signed),
                    eigenvalues: vals.clone(),
                })
                .collect();
            json(&serde_json::json!({
                "params": { "n": cfg.n_particles, "j": j.to_string(), "j_max": j_max.to_string(), "delta": delta, "epsilon": factor },
                "units": cfg.units.name(),
                "lmg": reps.iter().filter(|r| r.0.kind == RepKind::Lmg).count(),
                "representations": rows,
            }))
        }
    })
}
