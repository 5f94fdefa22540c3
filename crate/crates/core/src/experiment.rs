//! Seeded, replicated Monte Carlo experiments over the solvers, with
//! machine-readable row output.
//!
//! Five experiment kinds are built in:
//!
//! * `concentration` — γ of `G(n, p)` replicates against the crossing index
//!   `r`, probing two-point concentration;
//! * `process` — one pass of the growing edge process per replicate,
//!   recording every γ plateau with degree bounds and the certified bondage
//!   lower bound at the plateau's final graph;
//! * `moments` — the dominating-set count `X_k` against its expectation,
//!   with the row-sum identity checked exactly per replicate;
//! * `damage_mean` — the damage of a fixed directed pair against its
//!   expectation, with the light/heavy split checked exactly;
//! * `profile` — `moments` plus the pairwise intersection profile `W_i` and
//!   its exact identities.
//!
//! Replicate `i` always draws from stream `i` of the spec seed, so any
//! single replicate can be re-run alone. Records carry no timing data:
//! a spec and seed fully determine every output byte; wall time appears only
//! in the stdout summary.

use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::bondage::{
    certified_lower_bound, damage_directed, fink_bauer_bound, hartnell_rall_bound, Bound, Damage,
};
use crate::domination::{
    enumerate_dominating_sets, gamma_exact, has_dominating_set_within, intersection_profile,
    EnumLimits,
};
use crate::error::{Error, Result};
use crate::formula::{compute_r, expected_damage, log_f, FormulaContext};
use crate::graph::{process_stream, sample_gnp, sample_gnp_with, Graph, RandomSource};
use crate::logspace::ln_binom_cdf_below;

/// Search-node guard for per-replicate enumerations; overruns become
/// capacity-status rows instead of hung runs.
const MAX_NODES: u64 = 1 << 30;

// ---------------------------------------------------------------------------
// Spec
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Concentration,
    Process,
    Moments,
    DamageMean,
    Profile,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "concentration" => Ok(ExperimentKind::Concentration),
            "process" => Ok(ExperimentKind::Process),
            "moments" => Ok(ExperimentKind::Moments),
            "damage_mean" | "damage-mean" => Ok(ExperimentKind::DamageMean),
            "profile" => Ok(ExperimentKind::Profile),
            other => Err(Error::domain(format!(
                "unknown experiment kind {other:?} (expected concentration, process, \
                 moments, damage_mean, or profile)"
            ))),
        }
    }
}

/// Full description of one experiment run. Identical specs with identical
/// seeds produce byte-identical record files.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Edge-count truncation for the process kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    /// Set size for the moments / profile kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub epsilon: f64,
    /// Enumeration cap (dominating sets per replicate scan).
    pub cap: u64,
    /// Bondage search depth limit (process kind, when exact values are
    /// wanted at plateau ends).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<u64>,
}

impl ExperimentSpec {
    fn require_p(&self) -> Result<f64> {
        self.p.ok_or_else(|| {
            Error::domain(format!("experiment kind {:?} requires --p", self.kind))
        })
    }

    fn require_k(&self) -> Result<usize> {
        self.k.ok_or_else(|| {
            Error::domain(format!("experiment kind {:?} requires --k", self.kind))
        })
    }

    fn check_common(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::domain("experiment requires n >= 1".to_string()));
        }
        if self.samples < 1 {
            return Err(Error::domain("experiment requires samples >= 1".to_string()));
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::domain(format!("p = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Per-replicate completion status; capacity overruns keep their row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordStatus {
    Ok,
    Capacity,
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// A row type with a fixed, documented column set.
pub trait ResultRecord: Serialize {
    const HEADERS: &'static [&'static str];
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationRecord {
    pub replicate: u64,
    pub stream: u64,
    pub n: usize,
    pub m: u64,
    pub gamma: usize,
    pub r: u64,
    /// `gamma − r`.
    pub diff: i64,
    pub x_gamma: Option<u64>,
    pub status: RecordStatus,
}

impl ResultRecord for ConcentrationRecord {
    const HEADERS: &'static [&'static str] = &[
        "replicate", "stream", "n", "m", "gamma", "r", "diff", "x_gamma", "status",
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct ProcessRecord {
    pub replicate: u64,
    pub stream: u64,
    /// Plateau index from 0 (the edgeless `γ = n` plateau).
    pub plateau: u64,
    pub gamma: usize,
    /// First and last edge counts at which this γ value holds.
    pub m_start: u64,
    pub m_end: u64,
    /// Plateau length `ℓ = m_end − m_start + 1`; removing the plateau's own
    /// edges restores the previous γ, so `b ≤ ℓ` at the plateau-end graph
    /// (except for the initial plateau, which has no predecessor).
    pub len: u64,
    pub max_degree: usize,
    pub fink_bauer: Bound,
    pub hartnell_rall: Bound,
    /// Certified strict lower bound on b at the plateau-end graph.
    pub certified: Option<u64>,
    pub x_gamma: Option<u64>,
    /// Exact bondage number at the plateau end (only when the spec sets a
    /// search limit; small n).
    pub b_exact: Option<u64>,
    /// `certified < ℓ` where the plateau bound applies (`None` on the
    /// initial plateau or under capacity).
    pub consistent: Option<bool>,
    /// `fink_bauer / (m/n)` at the plateau end.
    pub ratio_fb: Option<f64>,
    pub status: RecordStatus,
}

impl ResultRecord for ProcessRecord {
    const HEADERS: &'static [&'static str] = &[
        "replicate",
        "stream",
        "plateau",
        "gamma",
        "m_start",
        "m_end",
        "len",
        "max_degree",
        "fink_bauer",
        "hartnell_rall",
        "certified",
        "x_gamma",
        "b_exact",
        "consistent",
        "ratio_fb",
        "status",
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentsRecord {
    pub replicate: u64,
    pub stream: u64,
    pub n: usize,
    pub m: u64,
    pub k: usize,
    pub x_k: Option<u64>,
    /// `Σ_v Z_v`; equals `k · X_k` in every completed replicate.
    pub z_sum: Option<u64>,
    pub identities_ok: bool,
    pub status: RecordStatus,
}

impl ResultRecord for MomentsRecord {
    const HEADERS: &'static [&'static str] = &[
        "replicate",
        "stream",
        "n",
        "m",
        "k",
        "x_k",
        "z_sum",
        "identities_ok",
        "status",
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRecord {
    pub replicate: u64,
    pub stream: u64,
    pub n: usize,
    pub m: u64,
    pub k: usize,
    pub x_k: Option<u64>,
    pub z_sum: Option<u64>,
    /// `Σ_v Z_v²`; equals `Σ_i i·W_i` in every completed replicate.
    pub z_sq_sum: Option<u64>,
    pub w_sum: Option<u64>,
    pub w_diag: Option<u64>,
    /// Semicolon-joined `W_0;W_1;…;W_k`.
    pub profile: String,
    pub identities_ok: bool,
    pub status: RecordStatus,
}

impl ResultRecord for ProfileRecord {
    const HEADERS: &'static [&'static str] = &[
        "replicate",
        "stream",
        "n",
        "m",
        "k",
        "x_k",
        "z_sum",
        "z_sq_sum",
        "w_sum",
        "w_diag",
        "profile",
        "identities_ok",
        "status",
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct DamageMeanRecord {
    pub replicate: u64,
    pub stream: u64,
    pub m: u64,
    pub r: u64,
    /// Exact rationals rendered as `num/den` (or an integer).
    pub z: String,
    pub z_light: String,
    pub z_heavy: String,
    /// Unweighted heavy count `Σ_{j ≤ L} |D̂_j|`.
    pub heavy_count: u64,
    /// Membership count `Z_v` of a fixed vertex in a companion
    /// `G(n−1, p)` draw from the same stream.
    pub companion_z: u64,
    pub identities_ok: bool,
    pub status: RecordStatus,
}

impl ResultRecord for DamageMeanRecord {
    const HEADERS: &'static [&'static str] = &[
        "replicate",
        "stream",
        "m",
        "r",
        "z",
        "z_light",
        "z_heavy",
        "heavy_count",
        "companion_z",
        "identities_ok",
        "status",
    ];
}

// ---------------------------------------------------------------------------
// Output writer
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::domain(format!(
                "unknown output format {other:?} (expected csv or jsonl)"
            ))),
        }
    }
}

/// First line of every result file: the spec echo, library version, seed.
#[derive(Clone, Debug, Serialize)]
pub struct ResultMetadata<'a> {
    pub spec: &'a ExperimentSpec,
    pub version: &'static str,
    pub seed: u64,
}

impl<'a> ResultMetadata<'a> {
    pub fn new(spec: &'a ExperimentSpec) -> Self {
        ResultMetadata {
            spec,
            version: env!("CARGO_PKG_VERSION"),
            seed: spec.seed,
        }
    }
}

/// Render records with their metadata line. CSV puts the metadata in a
/// leading `#` comment line followed by the fixed header row; JSON lines put
/// it in the first line. Output depends only on (spec, records).
pub fn render_results<R: ResultRecord>(
    records: &[R],
    format: OutputFormat,
    metadata: &ResultMetadata,
) -> Result<String> {
    let meta_json = serde_json::to_string(metadata)
        .map_err(|e| Error::format(format!("metadata serialization failed: {e}")))?;
    match format {
        OutputFormat::Csv => {
            let mut wtr = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            wtr.write_record(R::HEADERS)
                .map_err(|e| Error::format(format!("csv header write failed: {e}")))?;
            for record in records {
                wtr.serialize(record)
                    .map_err(|e| Error::format(format!("csv row write failed: {e}")))?;
            }
            let body = wtr
                .into_inner()
                .map_err(|e| Error::format(format!("csv flush failed: {e}")))?;
            let body = String::from_utf8(body)
                .map_err(|e| Error::format(format!("csv output not utf-8: {e}")))?;
            Ok(format!("# {meta_json}\n{body}"))
        }
        OutputFormat::Jsonl => {
            let mut out = String::new();
            out.push_str(&meta_json);
            out.push('\n');
            for record in records {
                let line = serde_json::to_string(record)
                    .map_err(|e| Error::format(format!("record serialization failed: {e}")))?;
                out.push_str(&line);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Write rendered records to `path` (I/O errors carry the path).
pub fn write_results<R: ResultRecord>(
    path: &Path,
    records: &[R],
    format: OutputFormat,
    metadata: &ResultMetadata,
) -> Result<()> {
    let rendered = render_results(records, format, metadata)?;
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(rendered.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Shared per-replicate helpers
// ---------------------------------------------------------------------------

/// Count dominating `k`-sets and per-vertex membership in one pass, bounded
/// by the set cap and node guard.
fn counted_scan(g: &Graph, k: usize, cap: u64) -> (Option<(u64, Vec<u64>)>, RecordStatus) {
    let mut z_v = vec![0u64; g.n()];
    let outcome = enumerate_dominating_sets(
        g,
        k,
        None,
        None,
        EnumLimits::new(cap, MAX_NODES),
        &mut |_, members| {
            for &v in members {
                z_v[v] += 1;
            }
        },
    );
    match outcome {
        Ok(out) if !out.truncated => (Some((out.sets, z_v)), RecordStatus::Ok),
        _ => (None, RecordStatus::Capacity),
    }
}

/// Count dominating `k`-sets that contain `include`.
fn counted_with(g: &Graph, k: usize, include: usize, cap: u64) -> (Option<u64>, RecordStatus) {
    let outcome = enumerate_dominating_sets(
        g,
        k,
        Some(include),
        None,
        EnumLimits::new(cap, MAX_NODES),
        &mut |_, _| {},
    );
    match outcome {
        Ok(out) if !out.truncated => (Some(out.sets), RecordStatus::Ok),
        _ => (None, RecordStatus::Capacity),
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error with a Poisson floor: rare-event counters can produce an
/// all-zero sample whose empirical variance vanishes, so the theoretical
/// mean serves as a variance floor for gating purposes.
fn poisson_floor_se(xs: &[f64], theory_mean: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (sample_variance(xs).max(theory_mean) / xs.len() as f64).sqrt()
}

fn z_score(sample_mean: f64, theory: f64, se: f64) -> f64 {
    if se == 0.0 {
        if sample_mean == theory {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (sample_mean - theory) / se
    }
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationSummary {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: f64,
    pub samples: u64,
    pub r: u64,
    pub fraction_at_r: f64,
    pub fraction_two_point: f64,
    pub mean_x_gamma: Option<f64>,
    pub capacity_count: u64,
    pub identities_ok: bool,
    pub elapsed_seconds: f64,
}

/// γ of fresh `G(n, p)` replicates against the crossing index `r`.
pub fn run_concentration(
    spec: &ExperimentSpec,
) -> Result<(Vec<ConcentrationRecord>, ConcentrationSummary)> {
    spec.check_common()?;
    let p = spec.require_p()?;
    if p > 1.0 - spec.epsilon {
        return Err(Error::domain(format!(
            "concentration probe requires p <= 1 - epsilon (p = {p}, epsilon = {})",
            spec.epsilon
        )));
    }
    let start = Instant::now();
    let r = compute_r(spec.n as u64, p)?;
    let mut records = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let g = sample_gnp(spec.n, p, RandomSource::with_stream(spec.seed, i));
        let gamma = gamma_exact(&g);
        let (counted, status) = counted_scan(&g, gamma, spec.cap);
        records.push(ConcentrationRecord {
            replicate: i,
            stream: i,
            n: spec.n,
            m: g.edge_count() as u64,
            gamma,
            r,
            diff: gamma as i64 - r as i64,
            x_gamma: counted.as_ref().map(|(x, _)| *x),
            status,
        });
    }
    let at_r = records.iter().filter(|rec| rec.diff == 0).count() as f64;
    let two_point = records
        .iter()
        .filter(|rec| rec.diff == 0 || rec.diff == 1)
        .count() as f64;
    let counted: Vec<f64> = records
        .iter()
        .filter_map(|rec| rec.x_gamma.map(|x| x as f64))
        .collect();
    let capacity_count = records
        .iter()
        .filter(|rec| rec.status == RecordStatus::Capacity)
        .count() as u64;
    let summary = ConcentrationSummary {
        kind: spec.kind,
        n: spec.n,
        p,
        samples: spec.samples,
        r,
        fraction_at_r: at_r / spec.samples as f64,
        fraction_two_point: two_point / spec.samples as f64,
        mean_x_gamma: if counted.is_empty() {
            None
        } else {
            Some(mean(&counted))
        },
        capacity_count,
        identities_ok: true,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((records, summary))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProcessSummary {
    pub kind: ExperimentKind,
    pub n: usize,
    pub samples: u64,
    pub plateaus: u64,
    pub gamma_monotone: bool,
    pub consistent_all: bool,
    pub capacity_count: u64,
    pub max_ratio_fb: Option<f64>,
    pub identities_ok: bool,
    pub elapsed_seconds: f64,
}

/// One full growing-edge-process pass per replicate, recording each γ
/// plateau and the bondage bounds at its final graph.
pub fn run_process(spec: &ExperimentSpec) -> Result<(Vec<ProcessRecord>, ProcessSummary)> {
    spec.check_common()?;
    if spec.n < 2 {
        return Err(Error::domain("process requires n >= 2".to_string()));
    }
    let start = Instant::now();
    let mut records = Vec::new();
    let mut monotone = true;

    for rep in 0..spec.samples {
        let order = process_stream(spec.n, RandomSource::with_stream(spec.seed, rep));
        let total = order.len() as u64;
        let m_max = spec.m.unwrap_or(total).min(total);

        let mut g = Graph::empty(spec.n);
        let mut gamma = spec.n;
        let mut plateau_start = 0u64;
        let mut plateau_index = 0u64;
        let mut m = 0u64;
        for &(u, v) in order.iter().take(m_max as usize) {
            let before = g.clone();
            g.add_edge_mut(u, v);
            m += 1;
            if m % 100 == 0 {
                assert_eq!(
                    gamma_exact(&before),
                    gamma,
                    "incremental gamma diverged at m = {}",
                    m - 1
                );
            }
            if has_dominating_set_within(&g, gamma - 1).is_some() {
                // The previous plateau just ended at m − 1.
                records.push(plateau_record(
                    spec,
                    rep,
                    plateau_index,
                    gamma,
                    plateau_start,
                    m - 1,
                    &before,
                ));
                // Measure the drop instead of assuming a unit step.
                let mut new_gamma = gamma - 1;
                while new_gamma > 1 && has_dominating_set_within(&g, new_gamma - 1).is_some() {
                    new_gamma -= 1;
                }
                monotone &= new_gamma < gamma;
                gamma = new_gamma;
                plateau_start = m;
                plateau_index += 1;
            }
        }
        records.push(plateau_record(
            spec,
            rep,
            plateau_index,
            gamma,
            plateau_start,
            m_max,
            &g,
        ));
    }

    let consistent_all = records.iter().all(|r| r.consistent != Some(false));
    let capacity_count = records
        .iter()
        .filter(|r| r.status == RecordStatus::Capacity)
        .count() as u64;
    let max_ratio_fb = records
        .iter()
        .filter_map(|r| r.ratio_fb)
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.max(x)))
        });
    let summary = ProcessSummary {
        kind: spec.kind,
        n: spec.n,
        samples: spec.samples,
        plateaus: records.len() as u64,
        gamma_monotone: monotone,
        consistent_all,
        capacity_count,
        max_ratio_fb,
        identities_ok: monotone && consistent_all,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((records, summary))
}

fn plateau_record(
    spec: &ExperimentSpec,
    rep: u64,
    plateau: u64,
    gamma: usize,
    m_start: u64,
    m_end: u64,
    g: &Graph,
) -> ProcessRecord {
    let len = m_end - m_start + 1;
    let (certified, x_gamma, status) = if g.edge_count() == 0 {
        (None, None, RecordStatus::Ok)
    } else {
        match certified_lower_bound(g, spec.cap) {
            Ok(res) => (
                res.b_gt,
                res.certificate.as_ref().map(|c| c.x_gamma),
                RecordStatus::Ok,
            ),
            Err(_) => (None, None, RecordStatus::Capacity),
        }
    };
    let b_exact = spec.limit.and_then(|limit| {
        if g.edge_count() == 0 {
            None
        } else {
            crate::bondage::bondage_exact(g, Some(limit), true)
                .b
                .and_then(|b| b.finite())
        }
    });
    let consistent = if plateau == 0 {
        None
    } else {
        certified.map(|c| c < len)
    };
    let fink_bauer = fink_bauer_bound(g);
    let ratio_fb = fink_bauer.finite().and_then(|fb| {
        if m_end == 0 {
            None
        } else {
            Some(fb as f64 / (m_end as f64 / g.n() as f64))
        }
    });
    ProcessRecord {
        replicate: rep,
        stream: rep,
        plateau,
        gamma,
        m_start,
        m_end,
        len,
        max_degree: g.max_degree(),
        fink_bauer,
        hartnell_rall: hartnell_rall_bound(g),
        certified,
        x_gamma,
        b_exact,
        consistent,
        ratio_fb,
        status,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentsSummary {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub samples: u64,
    pub mean_x: f64,
    pub theory_x: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub identity_violations: u64,
    pub capacity_count: u64,
    pub identities_ok: bool,
    pub elapsed_seconds: f64,
}

/// `X_k` of fresh `G(n, p)` replicates against `f(n, k, p)`, with the exact
/// row-sum identity per replicate.
pub fn run_moments(spec: &ExperimentSpec) -> Result<(Vec<MomentsRecord>, MomentsSummary)> {
    spec.check_common()?;
    let p = spec.require_p()?;
    let k = spec.require_k()?;
    if k < 1 || k > spec.n {
        return Err(Error::domain(format!(
            "set size k = {k} out of range 1..={}",
            spec.n
        )));
    }
    let start = Instant::now();
    let theory_x = log_f(spec.n as u64, k as u64, p)?.value();
    let mut records = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let g = sample_gnp(spec.n, p, RandomSource::with_stream(spec.seed, i));
        let (scan, status) = counted_scan(&g, k, spec.cap);
        let record = match scan {
            Some((x, z_v)) => {
                let z_sum: u128 = z_v.iter().map(|&z| z as u128).sum();
                let ok = z_sum == k as u128 * x as u128;
                MomentsRecord {
                    replicate: i,
                    stream: i,
                    n: spec.n,
                    m: g.edge_count() as u64,
                    k,
                    x_k: Some(x),
                    z_sum: Some(z_sum as u64),
                    identities_ok: ok,
                    status,
                }
            }
            None => MomentsRecord {
                replicate: i,
                stream: i,
                n: spec.n,
                m: g.edge_count() as u64,
                k,
                x_k: None,
                z_sum: None,
                identities_ok: true,
                status,
            },
        };
        records.push(record);
    }
    let summary = moments_summary(spec, p, k, theory_x, &records, start);
    Ok((records, summary))
}

fn moments_summary(
    spec: &ExperimentSpec,
    p: f64,
    k: usize,
    theory_x: f64,
    records: &[MomentsRecord],
    start: Instant,
) -> MomentsSummary {
    let xs: Vec<f64> = records
        .iter()
        .filter_map(|r| r.x_k.map(|x| x as f64))
        .collect();
    let mean_x = mean(&xs);
    let se = poisson_floor_se(&xs, theory_x);
    let violations = records.iter().filter(|r| !r.identities_ok).count() as u64;
    let capacity_count = records
        .iter()
        .filter(|r| r.status == RecordStatus::Capacity)
        .count() as u64;
    MomentsSummary {
        kind: spec.kind,
        n: spec.n,
        p,
        k,
        samples: spec.samples,
        mean_x,
        theory_x,
        std_error: se,
        z_score: z_score(mean_x, theory_x, se),
        identity_violations: violations,
        capacity_count,
        identities_ok: violations == 0,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileSummary {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub samples: u64,
    pub mean_x: f64,
    pub theory_x: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub identity_violations: u64,
    pub capacity_count: u64,
    pub identities_ok: bool,
    pub elapsed_seconds: f64,
}

/// `moments` plus the pairwise intersection profile and its identities:
/// `Σ_i W_i = X²`, `W_k = X`, `Σ_i i·W_i = Σ_v Z_v²`.
pub fn run_profile(spec: &ExperimentSpec) -> Result<(Vec<ProfileRecord>, ProfileSummary)> {
    spec.check_common()?;
    let p = spec.require_p()?;
    let k = spec.require_k()?;
    if k < 1 || k > spec.n {
        return Err(Error::domain(format!(
            "set size k = {k} out of range 1..={}",
            spec.n
        )));
    }
    let start = Instant::now();
    let theory_x = log_f(spec.n as u64, k as u64, p)?.value();
    let mut records = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let g = sample_gnp(spec.n, p, RandomSource::with_stream(spec.seed, i));
        let m = g.edge_count() as u64;
        let (scan, scan_status) = counted_scan(&g, k, spec.cap);
        let profile = intersection_profile(&g, k, spec.cap);
        let record = match (scan, profile) {
            (Some((x, z_v)), Ok(w)) => {
                let z_sum: u128 = z_v.iter().map(|&z| z as u128).sum();
                let z_sq: u128 = z_v.iter().map(|&z| (z as u128) * (z as u128)).sum();
                let w_sum: u128 = w.counts.iter().map(|&c| c as u128).sum();
                let iw_sum: u128 = w
                    .counts
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| i as u128 * c as u128)
                    .sum();
                let ok = z_sum == k as u128 * x as u128
                    && w_sum == (x as u128) * (x as u128)
                    && w.counts[k] == x
                    && iw_sum == z_sq;
                ProfileRecord {
                    replicate: i,
                    stream: i,
                    n: spec.n,
                    m,
                    k,
                    x_k: Some(x),
                    z_sum: Some(z_sum as u64),
                    z_sq_sum: Some(z_sq as u64),
                    w_sum: Some(w_sum as u64),
                    w_diag: Some(w.counts[k]),
                    profile: w
                        .counts
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                    identities_ok: ok,
                    status: scan_status,
                }
            }
            _ => ProfileRecord {
                replicate: i,
                stream: i,
                n: spec.n,
                m,
                k,
                x_k: None,
                z_sum: None,
                z_sq_sum: None,
                w_sum: None,
                w_diag: None,
                profile: String::new(),
                identities_ok: true,
                status: RecordStatus::Capacity,
            },
        };
        records.push(record);
    }

    let xs: Vec<f64> = records
        .iter()
        .filter_map(|r| r.x_k.map(|x| x as f64))
        .collect();
    let mean_x = mean(&xs);
    let se = poisson_floor_se(&xs, theory_x);
    let violations = records.iter().filter(|r| !r.identities_ok).count() as u64;
    let capacity_count = records
        .iter()
        .filter(|r| r.status == RecordStatus::Capacity)
        .count() as u64;
    let summary = ProfileSummary {
        kind: spec.kind,
        n: spec.n,
        p,
        k,
        samples: spec.samples,
        mean_x,
        theory_x,
        std_error: se,
        z_score: z_score(mean_x, theory_x, se),
        identity_violations: violations,
        capacity_count,
        identities_ok: violations == 0,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((records, summary))
}

#[derive(Clone, Debug, Serialize)]
pub struct DamageMeanSummary {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub r: u64,
    pub heavy_threshold: u64,
    pub samples: u64,
    pub mean_z: f64,
    pub theory_z: f64,
    pub std_error: f64,
    pub z_score: f64,
    /// Mean of the unweighted heavy count.
    pub mean_heavy_count: f64,
    /// `Pr(Bin(r−1, p) < L) · mean companion Z_v` — the heavy count's
    /// predicted mean from the factorization over `G(n−1, p)`.
    pub predicted_heavy_count: f64,
    pub heavy_z_score: f64,
    pub identity_violations: u64,
    pub capacity_count: u64,
    pub identities_ok: bool,
    pub elapsed_seconds: f64,
}

/// Damage of the fixed directed pair `→(0, 1)` on fresh `G(n, p)` draws,
/// against its expectation; the light/heavy split and the weighted-versus-
/// counted comparison are checked exactly per replicate.
pub fn run_damage_mean(
    spec: &ExperimentSpec,
) -> Result<(Vec<DamageMeanRecord>, DamageMeanSummary)> {
    spec.check_common()?;
    let p = spec.require_p()?;
    if spec.n < 2 {
        return Err(Error::domain("damage_mean requires n >= 2".to_string()));
    }
    let start = Instant::now();
    let ctx = FormulaContext::new(spec.n as u64, p, spec.epsilon)?;
    let r = ctx.r as usize;
    let l = ctx.heavy_threshold as usize;
    let theory_z = expected_damage(&ctx).value();

    let mut records = Vec::with_capacity(spec.samples as usize);
    let mut z_vals = Vec::with_capacity(spec.samples as usize);
    let mut heavy_counts = Vec::with_capacity(spec.samples as usize);
    let mut companions = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let mut rng = RandomSource::with_stream(spec.seed, i).rng();
        let g = sample_gnp_with(&mut rng, spec.n, p);
        let companion = sample_gnp_with(&mut rng, spec.n - 1, p);

        let damage = damage_directed(&g, 0, 1, r).expect("fixed pair is valid");
        let (light, heavy) = damage.split(l);
        let heavy_count: u64 = damage.counts[1..=l.min(r)].iter().sum();
        let (companion_z, status) = counted_with(&companion, r, 0, spec.cap);

        // Exact per-replicate checks: the split partitions the damage, and
        // weighting by 1/j can only shrink the heavy count.
        let ok = light + heavy == damage.z
            && heavy <= Damage::from_integer(heavy_count as i128);
        z_vals.push(ratio_to_f64(damage.z));
        heavy_counts.push(heavy_count as f64);
        companions.push(companion_z.unwrap_or(0) as f64);
        records.push(DamageMeanRecord {
            replicate: i,
            stream: i,
            m: g.edge_count() as u64,
            r: r as u64,
            z: damage.z.to_string(),
            z_light: light.to_string(),
            z_heavy: heavy.to_string(),
            heavy_count,
            companion_z: companion_z.unwrap_or(0),
            identities_ok: ok,
            status,
        });
    }

    let mean_z = mean(&z_vals);
    let se = poisson_floor_se(&z_vals, theory_z);
    let binom_factor = if r >= 1 {
        ln_binom_cdf_below(r as u64 - 1, p, l as u64).exp()
    } else {
        0.0
    };
    let mean_heavy = mean(&heavy_counts);
    let predicted_heavy = binom_factor * mean(&companions);
    // SE of (mean_heavy − factor·mean_companion) from both samples.
    let heavy_se = ((sample_variance(&heavy_counts)
        + binom_factor * binom_factor * sample_variance(&companions))
        / spec.samples as f64)
        .sqrt();
    let violations = records.iter().filter(|r| !r.identities_ok).count() as u64;
    let capacity_count = records
        .iter()
        .filter(|r| r.status == RecordStatus::Capacity)
        .count() as u64;
    let summary = DamageMeanSummary {
        kind: spec.kind,
        n: spec.n,
        p,
        epsilon: spec.epsilon,
        r: r as u64,
        heavy_threshold: l as u64,
        samples: spec.samples,
        mean_z,
        theory_z,
        std_error: se,
        z_score: z_score(mean_z, theory_z, se),
        mean_heavy_count: mean_heavy,
        predicted_heavy_count: predicted_heavy,
        heavy_z_score: z_score(mean_heavy, predicted_heavy, heavy_se),
        identity_violations: violations,
        capacity_count,
        identities_ok: violations == 0,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((records, summary))
}

fn ratio_to_f64(x: Damage) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
