//! Subcommand implementations. Each returns a [`Report`] for `output::emit`.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use eqpolar::distance::{BoundRow, ConservationReport};
use eqpolar::sim::{construct as construct_code, DEFAULT_CONSTRUCTION_TRIALS, DEFAULT_DESIGN_SNR_DB};
use eqpolar::{
    bad_channel_spectrum, bound_comparison_almost_equidistant, conservation_check, db_to_linear, equidistant_dmin_bound,
    estimate_reliabilities, good_channel_spectrum, info_size_for_unit_rate, is_equidistant, q_function, run_fer,
    search_permutations, union_bound, worst_case_good_spectrum, CodeConfig, CodeConfigSpec, DistanceSpectrum, Kernel,
    KernelSchedule, NoiseModel, SearchReport, SignalSet, SimulationReport,
};
use serde::Serialize;

use crate::output::{file_label, num, Report, Table};
use crate::spec::{kernel, proposed_name, schedule_from_names, stages_for, usage, ExperimentSpec, UsageError};

const DEFAULT_BLOCK_LEN: usize = 256;
const DEFAULT_FER_TRIALS: usize = 10_000;
const DEFAULT_SPEED_TRIALS: usize = 10_000;
const UNPOLARIZED_LOW: f64 = 0.05;
const UNPOLARIZED_HIGH: f64 = 0.95;

pub const VARIANTS: [&str; 5] = [
    "all-proposed",
    "all-sasoglu",
    "all-standard",
    "channel-stage-only-proposed",
    "channel-stage-only-sasoglu",
];

fn spectrum_text(s: &DistanceSpectrum) -> String {
    s.entries
        .iter()
        .map(|e| format!("{:.3}:{}", e.d, e.n))
        .collect::<Vec<_>>()
        .join(", ")
}

fn multiplicities_text(s: &DistanceSpectrum) -> String {
    s.multiplicities()
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn noise(spec: &ExperimentSpec, snr_db: f64) -> Result<NoiseModel> {
    NoiseModel::new(spec.es(), snr_db).map_err(|e| UsageError(e.to_string()).into())
}

/// Kernels named in the spec, or `standard` plus the proposed kernel when
/// none are given.
fn kernels_or_default(spec: &mut ExperimentSpec, q: usize, set: &SignalSet) -> Result<Vec<Kernel>> {
    if spec.kernels.is_empty() {
        spec.kernels.push("standard".into());
        if proposed_name(q, set).is_some() {
            spec.kernels.push("proposed".into());
        }
    }
    spec.kernels.iter().map(|name| kernel(name, q, set)).collect()
}

#[derive(Serialize)]
pub struct KernelAnalysis {
    kernel: Kernel,
    signal_set: String,
    table_row: String,
    good: DistanceSpectrum,
    good_uniform: bool,
    /// Present when the good spectrum depends on the reference pair.
    worst_case_good: Option<DistanceSpectrum>,
    bad: DistanceSpectrum,
    bad_uniform: bool,
    equidistant: bool,
    dmin_bound: f64,
    within_bound: bool,
    bound_attained: bool,
    conservation: ConservationReport,
    subgroup_anomaly: Option<Vec<usize>>,
}

pub fn analyze(mut spec: ExperimentSpec) -> Result<Report<Vec<KernelAnalysis>>> {
    let set = spec.signal_set()?;
    let q = set.q();
    if !spec.stages.is_empty() {
        return usage("analyze-kernel takes --kernel, not --stages");
    }
    let kernels = kernels_or_default(&mut spec, q, &set)?;
    let bound = equidistant_dmin_bound(&set);
    let tol = 1e-9 * set.es().sqrt();
    let mut text = String::new();
    let mut results = Vec::new();
    for k in kernels {
        let good = good_channel_spectrum(&k, &set)?;
        let bad = bad_channel_spectrum(&k, &set)?;
        let worst = worst_case_good_spectrum(&k, &set)?;
        let equidistant = is_equidistant(&worst, q)?;
        let conservation = conservation_check(&k, &set)?;
        let anomaly = if q <= eqpolar::kernels::MAX_SUBSET_Q {
            k.subgroup_anomaly()?
        } else {
            None
        };
        let row = format!("q={q}: d_min {:.3}, N(d) {}", worst.d_min(), multiplicities_text(&worst));
        writeln!(text, "kernel {} over {}", k.label(), set.label())?;
        writeln!(text, "  {row}")?;
        writeln!(text, "  good spectrum: {}", spectrum_text(&good))?;
        if !good.uniform {
            writeln!(text, "  good spectrum depends on the reference; worst case: {}", spectrum_text(&worst))?;
        }
        writeln!(
            text,
            "  bad spectrum:  {}{}",
            spectrum_text(&bad),
            if bad.uniform { "" } else { " (reference-dependent)" }
        )?;
        writeln!(text, "  equidistant: {equidistant}")?;
        writeln!(
            text,
            "  d_min bound {bound:.3}: {}",
            if (worst.d_min() - bound).abs() <= tol {
                "attained"
            } else if worst.d_min() <= bound + tol {
                "respected"
            } else {
                "VIOLATED"
            }
        )?;
        writeln!(
            text,
            "  distance conservation: {} (expected {:.3}, observed {:.3}..{:.3})",
            if conservation.holds { "holds" } else { "fails" },
            conservation.expected,
            conservation.observed_min,
            conservation.observed_max
        )?;
        if let Some(w) = &conservation.warning {
            writeln!(text, "  warning: {w}")?;
        }
        match &anomaly {
            Some(s) => writeln!(text, "  subgroup anomaly: {s:?}")?,
            None => writeln!(text, "  subgroup anomaly: none")?,
        }
        results.push(KernelAnalysis {
            signal_set: set.label().to_string(),
            table_row: row,
            good_uniform: good.uniform,
            worst_case_good: (!good.uniform).then(|| worst.clone()),
            bad_uniform: bad.uniform,
            good,
            bad,
            equidistant,
            dmin_bound: bound,
            within_bound: worst.d_min() <= bound + tol,
            bound_attained: (worst.d_min() - bound).abs() <= tol,
            conservation,
            subgroup_anomaly: anomaly,
            kernel: k,
        });
    }
    Ok(Report {
        command: "analyze-kernel",
        spec,
        result: results,
        text,
        tables: Vec::new(),
    })
}

pub fn search(mut spec: ExperimentSpec) -> Result<Report<SearchReport>> {
    let set = spec.signal_set()?;
    let full = spec.full_space.unwrap_or(false);
    let report = search_permutations(&set, full).map_err(|e| UsageError(e.to_string()))?;
    let mut text = String::new();
    writeln!(
        text,
        "q={} over {}: {} candidates, objective {}",
        report.q, report.signal_set, report.search_space_size, report.objective
    )?;
    writeln!(text, "best spectrum: {}", spectrum_text(&report.best_spectrum))?;
    writeln!(text, "d_min bound: {:.3}", report.dmin_bound)?;
    writeln!(text, "equidistant found: {}", report.equidistant_found)?;
    writeln!(text, "maximizers ({}):", report.best_permutations.len())?;
    for pi in report.best_permutations.iter().take(20) {
        writeln!(text, "  {pi:?}")?;
    }
    if report.best_permutations.len() > 20 {
        writeln!(text, "  ... ({} more in the JSON output)", report.best_permutations.len() - 20)?;
    }
    Ok(Report {
        command: "search-kernel",
        spec,
        result: report,
        text,
        tables: Vec::new(),
    })
}

/// The single schedule described by `--kernel` or `--stages`.
fn single_schedule(spec: &mut ExperimentSpec, set: &SignalSet, block_len: usize) -> Result<(String, KernelSchedule)> {
    let q = set.q();
    let n = stages_for(block_len)?;
    if !spec.stages.is_empty() {
        if !spec.kernels.is_empty() {
            return usage("give either --kernel or --stages, not both");
        }
        let s = schedule_from_names(&spec.stages, q, set, block_len)?;
        return Ok((spec.stages.join("+"), s));
    }
    if spec.kernels.is_empty() {
        spec.kernels.push("proposed".into());
    }
    if spec.kernels.len() != 1 {
        return usage("construct takes exactly one --kernel");
    }
    let k = kernel(&spec.kernels[0], q, set)?;
    Ok((k.label().to_string(), KernelSchedule::uniform(&k, n)?))
}

fn info_len(spec: &mut ExperimentSpec, block_len: usize, q: usize) -> Result<usize> {
    let k = *spec.info_len.get_or_insert_with(|| info_size_for_unit_rate(block_len, q));
    if k > block_len {
        return usage(format!("K={k} exceeds N={block_len}"));
    }
    Ok(k)
}

#[derive(Serialize)]
pub struct ConstructResult {
    schedule_label: String,
    code: CodeConfigSpec,
    info_len: usize,
    info_indices: Vec<usize>,
    design_snr_db: f64,
    trials: u64,
    degenerate_trials: u64,
    error_rates: Vec<f64>,
}

pub fn construct(mut spec: ExperimentSpec) -> Result<Report<ConstructResult>> {
    let set = spec.signal_set()?;
    let q = set.q();
    let block_len = *spec.block_len.get_or_insert(DEFAULT_BLOCK_LEN);
    let (label, schedule) = single_schedule(&mut spec, &set, block_len)?;
    let k = info_len(&mut spec, block_len, q)?;
    let snr_db = *spec.design_snr_db.get_or_insert(DEFAULT_DESIGN_SNR_DB);
    let trials = *spec.trials.get_or_insert(DEFAULT_CONSTRUCTION_TRIALS);
    let seed = spec.seed();
    spec.seed = Some(seed);
    let base = CodeConfig::new(schedule, block_len, &[])?;
    let (profile, code) = construct_code(&base, &set, &noise(&spec, snr_db)?, trials, seed, k)?;

    let mut table = Table::new("reliability", &["index", "error_rate", "error_count", "frozen"]).files_only();
    for (i, (&rate, &count)) in profile.error_rates.iter().zip(&profile.error_counts).enumerate() {
        table.push(vec![
            i.to_string(),
            num(rate),
            count.to_string(),
            (code.is_frozen(i) as u8).to_string(),
        ]);
    }
    let mut text = String::new();
    writeln!(text, "code {label} over {}: N={block_len}, K={k}, q={q}", set.label())?;
    writeln!(
        text,
        "designed at {snr_db} dB from {} trials (seed {seed}, {} degenerate trials skipped)",
        profile.trials, profile.degenerate_trials
    )?;
    writeln!(text, "information indices: {:?}", code.info_indices())?;
    Ok(Report {
        command: "construct",
        spec,
        result: ConstructResult {
            schedule_label: label,
            code: code.to_spec(),
            info_len: k,
            info_indices: code.info_indices(),
            design_snr_db: snr_db,
            trials: profile.trials,
            degenerate_trials: profile.degenerate_trials,
            error_rates: profile.error_rates,
        },
        text,
        tables: vec![table],
    })
}

/// Reads a code from a `construct` JSON document or a bare code spec.
fn load_code(path: &Path) -> Result<CodeConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read code {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid code {}: {e}", path.display())))?;
    let body = value.pointer("/result/code").cloned().unwrap_or(value);
    let spec: CodeConfigSpec =
        serde_json::from_value(body).map_err(|e| UsageError(format!("invalid code {}: {e}", path.display())))?;
    CodeConfig::from_spec(&spec).map_err(|e| UsageError(format!("invalid code {}: {e}", path.display())).into())
}

#[derive(Serialize)]
pub struct FerCurve {
    label: String,
    code: CodeConfigSpec,
    points: Vec<SimulationReport>,
}

pub fn simulate(mut spec: ExperimentSpec) -> Result<Report<Vec<FerCurve>>> {
    let set = spec.signal_set()?;
    let q = set.q();
    if spec.snr_db.is_empty() {
        return usage("--snr-db needs at least one value");
    }
    let trials = *spec.trials.get_or_insert(DEFAULT_FER_TRIALS);
    let seed = spec.seed();
    spec.seed = Some(seed);

    let mut codes: Vec<(String, CodeConfig)> = Vec::new();
    for path in &spec.codes {
        let code = load_code(path)?;
        if code.q() != q {
            return usage(format!("{} is a q={} code, the signal set has q={q}", path.display(), code.q()));
        }
        let label = path.file_stem().map_or("code".into(), |s| s.to_string_lossy().into_owned());
        codes.push((label, code));
    }
    let needs_construction = !spec.kernels.is_empty() || !spec.stages.is_empty() || codes.is_empty();
    if needs_construction {
        let block_len = *spec.block_len.get_or_insert(DEFAULT_BLOCK_LEN);
        let n = stages_for(block_len)?;
        let k = info_len(&mut spec, block_len, q)?;
        let design_db = *spec.design_snr_db.get_or_insert(DEFAULT_DESIGN_SNR_DB);
        let ctrials = *spec.construction_trials.get_or_insert(DEFAULT_CONSTRUCTION_TRIALS);
        let mut schedules: Vec<(String, KernelSchedule)> = Vec::new();
        if spec.kernels.is_empty() && spec.stages.is_empty() {
            kernels_or_default(&mut spec, q, &set)?;
        }
        for name in spec.kernels.clone() {
            let k = kernel(&name, q, &set)?;
            schedules.push((k.label().to_string(), KernelSchedule::uniform(&k, n)?));
        }
        if !spec.stages.is_empty() {
            schedules.push((spec.stages.join("+"), schedule_from_names(&spec.stages, q, &set, block_len)?));
        }
        let design = noise(&spec, design_db)?;
        for (label, schedule) in schedules {
            let base = CodeConfig::new(schedule, block_len, &[])?;
            let (_, code) = construct_code(&base, &set, &design, ctrials, seed, k)
                .with_context(|| format!("constructing {label}"))?;
            codes.push((label, code));
        }
    }

    let mut curves = Vec::new();
    let mut tables = Vec::new();
    let mut text = String::new();
    writeln!(text, "FER over {} with {trials} frames per point (seed {seed})", set.label())?;
    for (label, code) in &codes {
        writeln!(text, "{label}: N={}, K={}", code.block_len(), code.info_len())?;
        writeln!(text, "  {:>8}  {:>10}  {:>10}  {:>23}", "snr_db", "errors", "fer", "95% CI")?;
        let mut table = Table::new(
            format!("fer_{}", file_label(label)),
            &[
                "snr_db",
                "trials",
                "frame_errors",
                "fer",
                "ci95_low",
                "ci95_high",
                "symbol_errors",
                "ser",
                "degenerate_frames",
            ],
        );
        let mut points = Vec::new();
        for &snr_db in &spec.snr_db {
            let r = run_fer(code, &set, &noise(&spec, snr_db)?, trials, seed)?;
            writeln!(
                text,
                "  {snr_db:>8.2}  {:>10}  {:>10.3e}  [{:.3e}, {:.3e}]",
                r.frame_errors, r.fer, r.fer_ci95.low, r.fer_ci95.high
            )?;
            table.push(vec![
                num(snr_db),
                r.trials.to_string(),
                r.frame_errors.to_string(),
                num(r.fer),
                num(r.fer_ci95.low),
                num(r.fer_ci95.high),
                r.symbol_errors.to_string(),
                num(r.ser),
                r.degenerate_frames.to_string(),
            ]);
            points.push(r);
        }
        tables.push(table);
        curves.push(FerCurve {
            label: label.clone(),
            code: code.to_spec(),
            points,
        });
    }
    Ok(Report {
        command: "simulate",
        spec,
        result: curves,
        text,
        tables,
    })
}

#[derive(Serialize)]
pub struct BoundsResult {
    kernels: Vec<String>,
    spectra: Vec<DistanceSpectrum>,
    dmin_bound: f64,
    rows: Vec<BoundsRow>,
    /// Filled for 8-PSK only.
    almost_equidistant_comparison: Vec<BoundRow>,
}

#[derive(Serialize)]
pub struct BoundsRow {
    snr_db: f64,
    bounds: Vec<f64>,
    equidistant: f64,
}

pub fn bounds(mut spec: ExperimentSpec) -> Result<Report<BoundsResult>> {
    let set = spec.signal_set()?;
    let q = set.q();
    if spec.snr_db.is_empty() {
        return usage("--snr-db needs at least one value");
    }
    if !spec.stages.is_empty() {
        return usage("bounds takes --kernel, not --stages");
    }
    let kernels = kernels_or_default(&mut spec, q, &set)?;
    let spectra = kernels
        .iter()
        .map(|k| worst_case_good_spectrum(k, &set))
        .collect::<eqpolar::Result<Vec<_>>>()?;
    let d_eq = equidistant_dmin_bound(&set);
    let es = set.es();
    let comparison = if set.label() == "psk8" && (es - 1.0).abs() < 1e-12 {
        bound_comparison_almost_equidistant(&spec.snr_db)
    } else {
        Vec::new()
    };
    let labels: Vec<String> = kernels.iter().map(|k| k.label().to_string()).collect();
    let mut header: Vec<String> = vec!["snr_db".into()];
    header.extend(labels.iter().cloned());
    header.push("equidistant".into());
    if !comparison.is_empty() {
        header.push("almost_equidistant".into());
    }
    let mut table = Table {
        name: "bounds".into(),
        header,
        rows: Vec::new(),
        echo: true,
    };
    let mut rows = Vec::new();
    for (i, &snr_db) in spec.snr_db.iter().enumerate() {
        let snr = db_to_linear(snr_db);
        let values: Vec<f64> = spectra.iter().map(|s| union_bound(s, snr, es)).collect();
        let eq = (q - 1) as f64 * q_function(d_eq / es.sqrt() * (snr / 2.0).sqrt());
        let mut row = vec![num(snr_db)];
        row.extend(values.iter().map(|&v| num(v)));
        row.push(num(eq));
        if let Some(c) = comparison.get(i) {
            row.push(num(c.almost_equidistant));
        }
        table.push(row);
        rows.push(BoundsRow {
            snr_db,
            bounds: values,
            equidistant: eq,
        });
    }
    let mut text = String::new();
    for (label, s) in labels.iter().zip(&spectra) {
        writeln!(text, "{label}: good spectrum {}", spectrum_text(s))?;
    }
    writeln!(text, "equidistant reference: {}:{}", format_args!("{d_eq:.3}"), q - 1)?;
    Ok(Report {
        command: "bounds",
        spec,
        result: BoundsResult {
            kernels: labels,
            spectra,
            dmin_bound: d_eq,
            rows,
            almost_equidistant_comparison: comparison,
        },
        text,
        tables: vec![table],
    })
}

#[derive(Serialize)]
pub struct VariantProfile {
    variant: String,
    stages: Vec<String>,
    trials: u64,
    degenerate_trials: u64,
    unpolarized_count: usize,
    error_rates: Vec<f64>,
}

pub fn polarization_speed(mut spec: ExperimentSpec) -> Result<Report<Vec<VariantProfile>>> {
    let set = spec.signal_set()?;
    let q = set.q();
    let block_len = *spec.block_len.get_or_insert(DEFAULT_BLOCK_LEN);
    let n = stages_for(block_len)?;
    let snr_db = *spec.design_snr_db.get_or_insert(DEFAULT_DESIGN_SNR_DB);
    let trials = *spec.trials.get_or_insert(DEFAULT_SPEED_TRIALS);
    let seed = spec.seed();
    spec.seed = Some(seed);
    if spec.variants.is_empty() {
        spec.variants = VARIANTS.iter().map(|s| s.to_string()).collect();
    }
    if spec.kernels.len() > 1 {
        return usage("polarization-speed takes at most one --kernel");
    }
    let proposed_label = spec.kernels.first().cloned().unwrap_or_else(|| "proposed".into());
    let standard = Kernel::standard(q)?;
    let sasoglu = Kernel::sasoglu(q)?;
    let nm = noise(&spec, snr_db)?;

    let mut profiles = Vec::new();
    let mut tables = Vec::new();
    let mut summary = Table::new("unpolarized", &["variant", "unpolarized_count", "trials", "degenerate_trials"]);
    let mut text = String::new();
    writeln!(
        text,
        "genie reliabilities over {} at {snr_db} dB, N={block_len}, {trials} trials (seed {seed})",
        set.label()
    )?;
    writeln!(text, "unpolarized = estimates in ({UNPOLARIZED_LOW}, {UNPOLARIZED_HIGH})")?;
    for variant in spec.variants.clone() {
        let schedule = match variant.as_str() {
            "all-proposed" => KernelSchedule::uniform(&kernel(&proposed_label, q, &set)?, n)?,
            "all-sasoglu" => KernelSchedule::uniform(&sasoglu, n)?,
            "all-standard" => KernelSchedule::uniform(&standard, n)?,
            "channel-stage-only-proposed" => {
                KernelSchedule::channel_stage_only(&kernel(&proposed_label, q, &set)?, &standard, n)?
            }
            "channel-stage-only-sasoglu" => KernelSchedule::channel_stage_only(&sasoglu, &standard, n)?,
            other => return usage(format!("unknown variant `{other}`; expected one of {}", VARIANTS.join(", "))),
        };
        let cfg = CodeConfig::new(schedule, block_len, &[])?;
        let profile = estimate_reliabilities(&cfg, &set, &nm, trials, seed)?;
        let count = profile.unpolarized_count(UNPOLARIZED_LOW, UNPOLARIZED_HIGH);
        let mut order: Vec<usize> = (0..block_len).collect();
        order.sort_by(|&a, &b| profile.error_rates[a].total_cmp(&profile.error_rates[b]).then(a.cmp(&b)));
        let mut table = Table::new(format!("reliability_{variant}"), &["rank", "index", "error_rate"]).files_only();
        for (rank, &i) in order.iter().enumerate() {
            table.push(vec![rank.to_string(), i.to_string(), num(profile.error_rates[i])]);
        }
        tables.push(table);
        summary.push(vec![
            variant.clone(),
            count.to_string(),
            profile.trials.to_string(),
            profile.degenerate_trials.to_string(),
        ]);
        writeln!(
            text,
            "  {variant:<30} unpolarized {count:>4}{}",
            if profile.degenerate_trials > 0 {
                format!(" ({} degenerate trials skipped)", profile.degenerate_trials)
            } else {
                String::new()
            }
        )?;
        profiles.push(VariantProfile {
            variant,
            stages: cfg.schedule().labels(),
            trials: profile.trials,
            degenerate_trials: profile.degenerate_trials,
            unpolarized_count: count,
            error_rates: profile.error_rates,
        });
    }
    tables.push(summary);
    Ok(Report {
        command: "polarization-speed",
        spec,
        result: profiles,
        text,
        tables,
    })
}
