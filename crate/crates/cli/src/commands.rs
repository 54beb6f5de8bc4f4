use std::collections::BTreeMap;

use serde::Serialize;
use structured_spectra::moments::{
    enumerate_matchings, exact_expected_moment_with_budget, gaussian_moment,
    matching_solution_count_with_budget,
};
use structured_spectra::spectra::{estimates_from_spectra, sample_spectra};
use structured_spectra::stats::{histogram, uniform_edges, SpacingModel};
use structured_spectra::verify::{
    clt_experiment, clt_trend, spacing_experiment, suites, KS_CONSTANT,
};
use structured_spectra::{CheckReport, DiagonalPolicy, EntryDistribution, Structure};

use crate::args::{Command, Format, KindArgs, OutArgs, Suite};
use crate::output::{float, json, Csv};
use crate::{CliError, Outcome};

type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn dispatch(cmd: &Command) -> Result<Outcome> {
    let bytes = match cmd {
        Command::Spectrum {
            kind,
            dist,
            n,
            seed,
            out,
        } => spectrum(kind, *dist, *n, *seed, out)?,
        Command::Moments {
            kind,
            dist,
            n,
            m,
            draws,
            seed,
            out,
        } => moments(kind, *dist, *n, m, *draws, *seed, out)?,
        Command::ExactMoments {
            kind,
            n,
            m,
            dist,
            budget,
            out,
        } => exact_moments(kind, *n, *m, *dist, *budget, out)?,
        Command::Matchings {
            kind,
            k,
            n,
            budget,
            out,
        } => matchings(kind, *k, *n, *budget, out)?,
        Command::Spacings {
            kind,
            dist,
            n,
            draws,
            lo,
            hi,
            seed,
            min_spacing,
            bins,
            max,
            raw_out,
            out,
        } => {
            let params = SpacingParams {
                dist: *dist,
                n: *n,
                draws: *draws,
                lo: *lo,
                hi: *hi,
                seed: *seed,
                min_spacing: *min_spacing,
                bins: *bins,
                max: *max,
            };
            spacings(kind, &params, raw_out.as_deref(), out)?
        }
        Command::Clt {
            dist,
            n,
            seed,
            trend,
            seeds,
            out,
        } => clt(*dist, *n, *seed, *trend, *seeds, out)?,
        Command::Verify {
            suite,
            ns,
            seeds,
            seed,
            dist,
            out,
        } => return verify(*suite, ns, *seeds, *seed, *dist, out),
    };
    Ok(Outcome {
        bytes,
        passed: true,
    })
}

/// Output format, defaulting to `default` and restricted to `allowed`.
fn format(out: &OutArgs, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = out.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::invalid(
            "--format",
            "this subcommand only writes JSON".to_string(),
        ))
    }
}

fn positive(flag: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        Err(CliError::invalid(flag, "must be positive"))
    } else {
        Ok(())
    }
}

fn spectrum(
    kind: &KindArgs,
    dist: EntryDistribution,
    n: usize,
    seed: u64,
    out: &OutArgs,
) -> Result<Vec<u8>> {
    positive("--n", n)?;
    let fmt = format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let (spectra, _) = sample_spectra(kind.ensemble(), dist, n, 1, seed)?;
    let s = spectra.into_iter().next().ok_or_else(|| {
        CliError::invalid("--seed", "the eigensolver did not converge for this draw")
    })?;
    Ok(match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["normalized_eigenvalue"]);
            for &v in s.values() {
                csv.row([float(v)]);
            }
            csv.into_bytes()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Spectrum<'a> {
                kind: Structure,
                diagonal: DiagonalPolicy,
                dist: EntryDistribution,
                n: usize,
                seed: u64,
                normalized_eigenvalues: &'a [f64],
            }
            json(&Spectrum {
                kind: kind.kind,
                diagonal: kind.ensemble().diagonal,
                dist,
                n,
                seed,
                normalized_eigenvalues: s.values(),
            })
        }
    })
}

#[derive(Serialize)]
struct MomentRecord {
    kind: Structure,
    diagonal: DiagonalPolicy,
    dist: EntryDistribution,
    n: usize,
    m: u32,
    draws: usize,
    mean: f64,
    std_error: f64,
    gaussian_reference: f64,
    skipped: usize,
}

fn moments(
    kind: &KindArgs,
    dist: EntryDistribution,
    n: usize,
    orders: &[u32],
    draws: usize,
    seed: u64,
    out: &OutArgs,
) -> Result<Vec<u8>> {
    positive("--n", n)?;
    format(out, Format::Json, &[Format::Json])?;
    if draws < 2 {
        return Err(CliError::invalid("--draws", "need at least 2 draws"));
    }
    let (spectra, skipped) = sample_spectra(kind.ensemble(), dist, n, draws, seed)?;
    let records: Vec<MomentRecord> = estimates_from_spectra(&spectra, orders, skipped)
        .into_iter()
        .map(|e| MomentRecord {
            kind: kind.kind,
            diagonal: kind.ensemble().diagonal,
            dist,
            n,
            m: e.m,
            draws: e.draws,
            mean: e.mean,
            std_error: e.std_error,
            gaussian_reference: gaussian_moment(e.m),
            skipped: e.skipped,
        })
        .collect();
    Ok(if records.len() == 1 {
        json(&records[0])
    } else {
        json(&records)
    })
}

fn exact_moments(
    kind: &KindArgs,
    n: usize,
    m: u32,
    dist: EntryDistribution,
    budget: u128,
    out: &OutArgs,
) -> Result<Vec<u8>> {
    positive("--n", n)?;
    format(out, Format::Json, &[Format::Json])?;
    let r = exact_expected_moment_with_budget(kind.ensemble(), n, m, dist, budget)?;

    #[derive(Serialize)]
    struct Exact {
        kind: Structure,
        diagonal: DiagonalPolicy,
        dist: EntryDistribution,
        n: usize,
        m: u32,
        value: f64,
        /// Exact rational numerator of `value * N^{m/2+1}`.
        weighted_sum: String,
        normalizer: f64,
        tuple_count_by_profile: BTreeMap<String, u64>,
        paired_count: u64,
        structural_zero_tuples: u64,
        total_tuples: u64,
    }
    Ok(json(&Exact {
        kind: r.kind.structure,
        diagonal: r.kind.diagonal,
        dist,
        n,
        m,
        value: r.value,
        weighted_sum: r.weighted_sum.to_string(),
        normalizer: r.normalizer(),
        tuple_count_by_profile: r
            .tuple_count_by_profile
            .iter()
            .map(|(s, &c)| (s.to_string(), c))
            .collect(),
        paired_count: r.paired_count(),
        structural_zero_tuples: r.structural_zero_tuples,
        total_tuples: r.total_tuples,
    }))
}

fn matchings(kind: &KindArgs, k: usize, n: usize, budget: u128, out: &OutArgs) -> Result<Vec<u8>> {
    positive("--n", n)?;
    let fmt = format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let all = enumerate_matchings(k).map_err(|e| CliError::invalid("--k", e.to_string()))?;
    let norm = (n as f64).powi(k as i32 + 1);
    let mut rows = Vec::with_capacity(all.len());
    for (id, mt) in all.iter().enumerate() {
        let count = matching_solution_count_with_budget(kind.ensemble(), mt, n, budget)?;
        rows.push((id + 1, mt.to_string(), count, count as f64 / norm));
    }
    Ok(match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["matching_id", "pairs", "count", "normalized"]);
            for (id, pairs, count, normalized) in rows {
                csv.row([id.to_string(), pairs, count.to_string(), float(normalized)]);
            }
            csv.into_bytes()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                matching_id: usize,
                pairs: String,
                count: u64,
                normalized: f64,
            }
            let rows: Vec<Row> = rows
                .into_iter()
                .map(|(matching_id, pairs, count, normalized)| Row {
                    matching_id,
                    pairs,
                    count,
                    normalized,
                })
                .collect();
            json(&rows)
        }
    })
}

struct SpacingParams {
    dist: EntryDistribution,
    n: usize,
    draws: usize,
    lo: usize,
    hi: usize,
    seed: u64,
    min_spacing: Option<f64>,
    bins: usize,
    max: f64,
}

fn spacings(
    kind: &KindArgs,
    p: &SpacingParams,
    raw_out: Option<&std::path::Path>,
    out: &OutArgs,
) -> Result<Vec<u8>> {
    positive("--n", p.n)?;
    positive("--draws", p.draws)?;
    positive("--bins", p.bins)?;
    let fmt = format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    if p.lo == 0 || p.lo >= p.hi || p.hi > p.n {
        return Err(CliError::invalid(
            "--lo/--hi",
            format!(
                "need 1 <= lo < hi <= N, got lo = {}, hi = {}, N = {}",
                p.lo, p.hi, p.n
            ),
        ));
    }
    if !p.max.is_finite() || p.max <= 0.0 {
        return Err(CliError::invalid("--max", "must be positive and finite"));
    }
    if let Some(t) = p.min_spacing {
        if !t.is_finite() || t < 0.0 {
            return Err(CliError::invalid(
                "--min-spacing",
                "must be finite and non-negative",
            ));
        }
    }

    let exp = spacing_experiment(kind.ensemble(), p.dist, p.n, p.draws, p.lo, p.hi, p.seed)?;
    if let Some(path) = raw_out {
        let mut csv = Csv::new(&["spacing"]);
        for &v in &exp.sample.spacings {
            csv.row([float(v)]);
        }
        std::fs::write(path, csv.into_bytes()).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let kept: Vec<f64> = match p.min_spacing {
        Some(t) => exp
            .sample
            .spacings
            .iter()
            .copied()
            .filter(|&v| v >= t)
            .collect(),
        None => exp.sample.spacings.clone(),
    };
    let edges = uniform_edges(0.0, p.max, p.bins)?;
    let hist = histogram(&kept, &edges)?;

    // reference curves averaged over each bin, comparable to the bar heights
    let bin_mean = |model: SpacingModel, b: usize| {
        (model.cdf(edges[b + 1]) - model.cdf(edges[b])) / hist.width(b)
    };
    match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "bin_left",
                "bin_right",
                "count",
                "empirical_density",
                "poisson_ref",
                "goe_ref",
            ]);
            for b in 0..hist.bins() {
                csv.row([
                    float(edges[b]),
                    float(edges[b + 1]),
                    hist.counts[b].to_string(),
                    float(hist.density(b)),
                    float(bin_mean(SpacingModel::PoissonExp, b)),
                    float(bin_mean(SpacingModel::WignerGoe, b)),
                ]);
            }
            Ok(csv.into_bytes())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Bin {
                bin_left: f64,
                bin_right: f64,
                count: u64,
                empirical_density: f64,
                poisson_ref: f64,
                goe_ref: f64,
            }
            #[derive(Serialize)]
            struct Report {
                kind: Structure,
                diagonal: DiagonalPolicy,
                dist: EntryDistribution,
                n: usize,
                draws: usize,
                skipped: usize,
                lo: usize,
                hi: usize,
                spacings: usize,
                binned: usize,
                below_min_spacing: usize,
                above_max: u64,
                ks_poisson: f64,
                ks_goe: f64,
                bins: Vec<Bin>,
            }
            let bins = (0..hist.bins())
                .map(|b| Bin {
                    bin_left: edges[b],
                    bin_right: edges[b + 1],
                    count: hist.counts[b],
                    empirical_density: hist.density(b),
                    poisson_ref: bin_mean(SpacingModel::PoissonExp, b),
                    goe_ref: bin_mean(SpacingModel::WignerGoe, b),
                })
                .collect();
            Ok(json(&Report {
                kind: kind.kind,
                diagonal: kind.ensemble().diagonal,
                dist: p.dist,
                n: p.n,
                draws: p.draws,
                skipped: exp.skipped,
                lo: p.lo,
                hi: p.hi,
                spacings: exp.sample.len(),
                binned: kept.len(),
                below_min_spacing: exp.sample.len() - kept.len(),
                above_max: hist.above,
                ks_poisson: exp.ks_poisson,
                ks_goe: exp.ks_goe,
                bins,
            }))
        }
    }
}

fn clt(
    dist: EntryDistribution,
    n: usize,
    seed: u64,
    trend: bool,
    seeds: u64,
    out: &OutArgs,
) -> Result<Vec<u8>> {
    format(out, Format::Json, &[Format::Json])?;
    if n < 4 || !n.is_multiple_of(2) {
        return Err(CliError::invalid(
            "--n",
            format!("need an even n >= 4, got {n}"),
        ));
    }
    if trend {
        if seeds == 0 {
            return Err(CliError::invalid("--seeds", "must be positive"));
        }
        let list: Vec<u64> = (0..seeds).map(|s| seed.wrapping_add(s)).collect();
        let t = clt_trend(dist, n, &list)?;
        #[derive(Serialize)]
        struct Trend<'a> {
            dist: EntryDistribution,
            ns: &'a [usize],
            seeds: &'a [u64],
            ks: &'a [Vec<f64>],
            median_ks: &'a [f64],
            decreasing: bool,
        }
        Ok(json(&Trend {
            dist,
            ns: &t.ns,
            seeds: &t.seeds,
            ks: &t.ks,
            median_ks: &t.median_ks,
            decreasing: t.report.passed,
        }))
    } else {
        let (ks, report) = clt_experiment(dist, n, seed)?;
        #[derive(Serialize)]
        struct Single {
            dist: EntryDistribution,
            n: usize,
            seed: u64,
            ks: f64,
            reference_bound: f64,
            ks_constant: f64,
            within_reference_bound: bool,
        }
        Ok(json(&Single {
            dist,
            n,
            seed,
            ks,
            reference_bound: report.bound,
            ks_constant: KS_CONSTANT,
            within_reference_bound: report.passed,
        }))
    }
}

fn verify(
    suite: Suite,
    ns: &[usize],
    seeds: usize,
    seed: u64,
    dist: EntryDistribution,
    out: &OutArgs,
) -> Result<Outcome> {
    format(out, Format::Json, &[Format::Json])?;
    if ns.is_empty() || ns.iter().any(|&n| n < 2) {
        return Err(CliError::invalid("--ns", "sizes must be at least 2"));
    }
    positive("--seeds", seeds)?;
    let cfg = suites::SweepConfig {
        ns: ns.to_vec(),
        seeds,
        base_seed: seed,
        dist,
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Interlacing) || wants(Suite::Rank) {
        let (inter, rank) = suites::interlacing_and_rank(&cfg)?;
        if wants(Suite::Interlacing) {
            reports.push(inter);
        }
        if wants(Suite::Rank) {
            reports.push(rank);
        }
    }
    if wants(Suite::Hankel) {
        reports.push(suites::hankel(&cfg)?);
    }
    if wants(Suite::Submatrix) {
        reports.push(suites::submatrix(&cfg)?);
    }
    if wants(Suite::B0) {
        reports.push(suites::b0(&cfg)?);
    }
    if wants(Suite::Clt) {
        reports.push(suites::clt(&cfg)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(Outcome {
        bytes: json(&reports),
        passed,
    })
}
