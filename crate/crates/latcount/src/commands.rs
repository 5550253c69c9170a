use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use latcount_core::beck::{self, QuasiPoly};
use latcount_core::ehrhart::{
    approx_vector_dilated, fit_error_exponent, p_coeffs, q_coeffs, target_error_exponent,
    EhrhartLikePoly,
};
use latcount_core::enumerate::{CountOptions, CountReport, Counter};
use latcount_core::polytope::{Admissibility, CrossPolytope, DilationVector, HPolytope, Ownership};
use latcount_core::{AlgebraicQuad, Error as CoreError};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::input::PolytopeSpec;
use crate::render::{self, Coefficient, Count, Number, Quasi};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Coeffs,
    Count,
    CompareSweep,
    Reciprocity,
    BeckRecon,
    Decompose,
}

/// Everything one run needs, already parsed.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub polytope: PolytopeSpec,
    pub t: Option<i64>,
    pub t_range: Option<(i64, i64)>,
    pub t_vector: Option<Vec<i64>>,
    pub out: Option<PathBuf>,
    pub digits: usize,
    /// Worker threads; `None` lets the pool pick.
    pub jobs: Option<usize>,
    pub budget: u64,
    /// `decompose`: keep every piece closed instead of half-open.
    pub closed_pieces: bool,
    /// `beck-recon`: reciprocity is checked on `[-radius, radius]^m`.
    pub radius: i64,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.digits == 0 {
            return Err(CliError::Config("--digits must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        if self.t_range.is_some()
            && !matches!(self.command, Command::CompareSweep | Command::Reciprocity)
        {
            return Err(CliError::Config(
                "--t-min/--t-max apply to compare-sweep and reciprocity only".into(),
            ));
        }
        if let Some((lo, hi)) = self.t_range {
            if lo < 1 || lo > hi {
                return Err(CliError::Config(format!(
                    "t range must satisfy 1 <= t-min <= t-max, got {lo}..{hi}"
                )));
            }
        }
        if self.t.is_some() && self.t_vector.is_some() {
            return Err(CliError::Config("give --t or --t-vector, not both".into()));
        }
        if self.radius < 0 {
            return Err(CliError::Config("--radius must be non-negative".into()));
        }
        Ok(())
    }

    fn options(&self) -> CountOptions {
        CountOptions {
            budget: self.budget,
        }
    }

    fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))
    }

    fn t_range(&self) -> CliResult<(i64, i64)> {
        self.t_range
            .ok_or_else(|| CliError::Config("--t-min and --t-max are required".into()))
    }
}

/// Runs one command, writing its artifact to `--out` or to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    config.validate()?;
    match config.command {
        Command::Coeffs => emit_json(config, stdout, &coeffs(config)?),
        Command::Count => emit_json(config, stdout, &count(config)?),
        Command::CompareSweep => compare_sweep(config, stdout),
        Command::Reciprocity => emit_json(config, stdout, &reciprocity(config)?),
        Command::BeckRecon => emit_json(config, stdout, &beck_recon(config)?),
        Command::Decompose => emit_json(config, stdout, &decompose(config)?),
    }
}

fn emit_json<T: Serialize>(config: &RunConfig, stdout: &mut dyn Write, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match &config.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn axes_of(spec: &PolytopeSpec) -> CliResult<&[AlgebraicQuad]> {
    spec.axes().ok_or_else(|| {
        CliError::Config(format!(
            "this command needs axes; a {} spec has none",
            spec.kind()
        ))
    })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CoeffsOutput {
    dim: usize,
    axes: Vec<String>,
    p: Vec<Coefficient>,
    q: Vec<Coefficient>,
    target_exponent: f64,
}

fn coeffs(config: &RunConfig) -> CliResult<CoeffsOutput> {
    let axes = axes_of(&config.polytope)?;
    Ok(CoeffsOutput {
        dim: axes.len(),
        axes: axes.iter().map(ToString::to_string).collect(),
        p: render::coefficients(&p_coeffs(axes)?, config.digits),
        q: render::coefficients(&q_coeffs(axes)?, config.digits),
        target_exponent: target_error_exponent(axes.len()),
    })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CountOutput {
    #[serde(flatten)]
    report: Count,
    #[serde(skip_serializing_if = "Option::is_none")]
    approximation: Option<Approximation>,
}

#[derive(Serialize)]
struct Approximation {
    facet_sum: Number,
    face_corrected: Number,
}

/// The polytope the run counts: the spec dilated by `--t` or `--t-vector`.
fn dilated(config: &RunConfig) -> CliResult<HPolytope> {
    let spec = &config.polytope;
    match (spec, config.t, &config.t_vector) {
        (PolytopeSpec::Cross(c), Some(t), None) => Ok(c
            .to_hrep()?
            .dilate(&DilationVector::uniform(c.num_facets(), t))?),
        (PolytopeSpec::Cross(c), None, Some(tv)) => {
            let tv = DilationVector::new(tv.clone());
            if tv.len() != c.num_facets() {
                return Err(CliError::Config(format!(
                    "--t-vector needs {} entries (one per facet), got {}",
                    c.num_facets(),
                    tv.len()
                )));
            }
            if !c.is_admissible(&tv) {
                return Err(CoreError::Inadmissible(format!(
                    "cross-polytope dilation factors must all be at least 1, got {:?}",
                    tv.as_slice()
                ))
                .into());
            }
            Ok(c.to_hrep()?.dilate(&tv)?)
        }
        (PolytopeSpec::Orthant(s), Some(t), None) => Ok(s.dilated(t)?),
        (PolytopeSpec::Simplex(p) | PolytopeSpec::HRep(p), None, Some(tv)) => {
            let tv = DilationVector::new(tv.clone());
            if tv.len() != p.num_constraints() {
                return Err(CliError::Config(format!(
                    "--t-vector needs {} entries (one per row), got {}",
                    p.num_constraints(),
                    tv.len()
                )));
            }
            if matches!(spec, PolytopeSpec::Simplex(_)) {
                if let Admissibility::Inadmissible(why) = p.admissibility(&tv)? {
                    return Err(CoreError::Inadmissible(why).into());
                }
            }
            Ok(p.dilate(&tv)?)
        }
        (PolytopeSpec::Simplex(p) | PolytopeSpec::HRep(p), t, None) => {
            let k = AlgebraicQuad::from_int(t.unwrap_or(1));
            let rhs = p.rhs().iter().map(|b| b * &k).collect();
            Ok(HPolytope::with_strictness(
                p.matrix().to_vec(),
                rhs,
                p.strictness().to_vec(),
            )?)
        }
        (_, None, None) => Err(CliError::Config("--t or --t-vector is required".into())),
        (PolytopeSpec::Orthant(_), None, Some(_)) => Err(CliError::Config(
            "an orthant simplex takes a scalar --t".into(),
        )),
        (_, Some(_), Some(_)) => Err(CliError::Config("give --t or --t-vector, not both".into())),
    }
}

/// Counts with the first coordinate's range split across the pool.
pub fn count_parallel(
    p: &HPolytope,
    options: &CountOptions,
    pool: &rayon::ThreadPool,
) -> CliResult<CountReport> {
    let started = Instant::now();
    let counter = Counter::new(p)?;
    let mut total = CountReport::default();
    if let Some((lo, hi)) = counter.first_range() {
        let pieces = (pool.current_num_threads() * 4).max(1) as i64;
        let step = ((hi - lo + 1) / pieces).max(1);
        let chunks: Vec<(i64, i64)> = (lo..=hi)
            .step_by(step as usize)
            .map(|a| (a, (a + step - 1).min(hi)))
            .collect();
        let parts: Vec<CountReport> = pool.install(|| {
            chunks
                .par_iter()
                .map(|&(a, b)| counter.count_range(a, b, options))
                .collect::<Result<_, _>>()
        })?;
        for part in parts {
            total += part;
        }
        if total.points_scanned > options.budget {
            return Err(CoreError::BudgetExceeded {
                budget: options.budget,
            }
            .into());
        }
    }
    total.elapsed = started.elapsed();
    Ok(total)
}

fn count(config: &RunConfig) -> CliResult<CountOutput> {
    let p = dilated(config)?;
    let report = count_parallel(&p, &config.options(), &config.pool()?)?;
    let approximation = match (&config.polytope, &config.t_vector) {
        (PolytopeSpec::Cross(c), Some(tv)) => {
            let a = approx_vector_dilated(c, &DilationVector::new(tv.clone()))?;
            Some(Approximation {
                facet_sum: Number::new(&a.facet_sum, config.digits),
                face_corrected: Number::new(&a.face_corrected, config.digits),
            })
        }
        _ => None,
    };
    Ok(CountOutput {
        report: Count::from(&report),
        approximation,
    })
}

// ---------------------------------------------------------------------------

/// Every integer in the range when `d < 3`; for `d ≥ 3` every integer up to
/// 50 and twelve log-spaced values per doubling above.
pub fn sweep_values(dim: usize, lo: i64, hi: i64) -> Vec<i64> {
    if dim < 3 || hi <= 50 {
        return (lo..=hi).collect();
    }
    let mut ts: Vec<i64> = (lo..=hi.min(50)).collect();
    let start = lo.max(50) as f64;
    let mut k = 1;
    loop {
        let t = (start * 2f64.powf(f64::from(k) / 12.0)).round() as i64;
        if t >= hi {
            break;
        }
        if ts.last().is_none_or(|&last| t > last) {
            ts.push(t);
        }
        k += 1;
    }
    if ts.last() != Some(&hi) {
        ts.push(hi);
    }
    ts
}

/// The sweep's approximating polynomial: `p` for a cross-polytope, `q` for
/// an orthant simplex.
fn sweep_polynomial(spec: &PolytopeSpec) -> CliResult<(&'static str, EhrhartLikePoly)> {
    match spec {
        PolytopeSpec::Cross(c) => Ok(("p", p_coeffs(c.axes())?)),
        PolytopeSpec::Orthant(s) => Ok(("q", q_coeffs(s.axes())?)),
        other => Err(CliError::Config(format!(
            "sweeps need a cross-polytope or an axis simplex, got a {} spec",
            other.kind()
        ))),
    }
}

fn scalar_dilation(spec: &PolytopeSpec, t: i64) -> CliResult<HPolytope> {
    match spec {
        PolytopeSpec::Cross(c) => Ok(c
            .to_hrep()?
            .dilate(&DilationVector::uniform(c.num_facets(), t))?),
        PolytopeSpec::Orthant(s) => Ok(s.dilated(t)?),
        _ => unreachable!("checked by sweep_polynomial"),
    }
}

#[derive(Serialize)]
struct SweepRow {
    t: i64,
    exact: u64,
    approx_exact_string: String,
    approx_decimal: String,
    abs_error: String,
    fitted_exponent_so_far: String,
}

#[derive(Serialize)]
struct SweepSummary {
    kind: &'static str,
    dim: usize,
    axes: Vec<String>,
    approximation: &'static str,
    rows: usize,
    t_min: i64,
    t_max: i64,
    fitted_exponent: Option<f64>,
    target_exponent: f64,
    /// Mean of `|error| / t` over `t ≥ t_max / 10`.
    mean_relative_error_last_decade: f64,
}

struct Measured {
    t: i64,
    exact: u64,
    approx: AlgebraicQuad,
    error: AlgebraicQuad,
    interior: u64,
}

fn measure(
    spec: &PolytopeSpec,
    poly: &EhrhartLikePoly,
    ts: &[i64],
    config: &RunConfig,
) -> CliResult<Vec<Measured>> {
    let options = config.options();
    config.pool()?.install(|| {
        ts.par_iter()
            .map(|&t| {
                let r = Counter::new(&scalar_dilation(spec, t)?)?.count(&options)?;
                let approx = poly.eval_int(t);
                let error = (&AlgebraicQuad::from_int(r.closed as i64) - &approx).abs();
                Ok(Measured {
                    t,
                    exact: r.closed,
                    approx,
                    error,
                    interior: r.interior,
                })
            })
            .collect()
    })
}

/// Fitted exponent after each prefix of rows, empty while too few rows.
fn running_fit(rows: &[(f64, f64)]) -> Vec<Option<f64>> {
    (1..=rows.len())
        .map(|n| fit_error_exponent(&rows[..n]).ok())
        .collect()
}

fn compare_sweep(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let spec = &config.polytope;
    let (name, poly) = sweep_polynomial(spec)?;
    let (lo, hi) = config.t_range()?;
    let ts = sweep_values(spec.dim(), lo, hi);
    let measured = measure(spec, &poly, &ts, config)?;
    let fit_rows: Vec<(f64, f64)> = measured
        .iter()
        .map(|m| (m.t as f64, m.error.to_f64()))
        .collect();
    let fits = running_fit(&fit_rows);

    let mut csv_bytes = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut csv_bytes);
        for (m, fit) in measured.iter().zip(&fits) {
            w.serialize(SweepRow {
                t: m.t,
                exact: m.exact,
                approx_exact_string: m.approx.to_string(),
                approx_decimal: m.approx.to_decimal(config.digits),
                abs_error: m.error.to_decimal(config.digits),
                fitted_exponent_so_far: fit.map(|f| format!("{f:.6}")).unwrap_or_default(),
            })?;
        }
        w.flush().map_err(|e| CliError::io("<csv>", e))?;
    }
    let tail: Vec<f64> = fit_rows
        .iter()
        .filter(|(t, _)| *t >= hi as f64 / 10.0)
        .map(|(t, e)| e / t)
        .collect();
    let summary = SweepSummary {
        kind: spec.kind(),
        dim: spec.dim(),
        axes: axes_of(spec)?.iter().map(ToString::to_string).collect(),
        approximation: name,
        rows: measured.len(),
        t_min: lo,
        t_max: hi,
        fitted_exponent: fits.last().copied().flatten(),
        target_exponent: target_error_exponent(spec.dim()),
        mean_relative_error_last_decade: tail.iter().sum::<f64>() / tail.len().max(1) as f64,
    };
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("serializable");
    summary_text.push('\n');
    match &config.out {
        Some(path) => {
            write_file(path, &csv_bytes)?;
            write_file(&summary_path(path), summary_text.as_bytes())?;
            stdout
                .write_all(summary_text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))
        }
        None => {
            stdout
                .write_all(&csv_bytes)
                .map_err(|e| CliError::io("<stdout>", e))?;
            eprint!("{summary_text}");
            Ok(())
        }
    }
}

/// `sweep.csv` → `sweep.summary.json`.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ReciprocityOutput {
    kind: &'static str,
    dim: usize,
    polynomial: &'static str,
    /// `c_k = 0` whenever `d - k` is odd.
    parity_holds: bool,
    /// `(-1)^d f(-t) = f(t)` as a coefficient identity.
    reciprocity_identity_holds: bool,
    transform: Vec<Coefficient>,
    rows: Vec<ReciprocityRow>,
    fitted_exponent: Option<f64>,
}

#[derive(Serialize)]
struct ReciprocityRow {
    t: i64,
    interior: u64,
    prediction: Number,
    abs_error: String,
}

fn reciprocity(config: &RunConfig) -> CliResult<ReciprocityOutput> {
    let spec = &config.polytope;
    let (name, poly) = sweep_polynomial(spec)?;
    let d = spec.dim();
    let transform = poly.interior_transform(d);
    let (lo, hi) = config.t_range()?;
    let ts: Vec<i64> = (lo..=hi).collect();
    let measured = measure(spec, &poly, &ts, config)?;
    let mut fit_rows = Vec::new();
    let rows = measured
        .iter()
        .map(|m| {
            let prediction = transform.eval_int(m.t);
            let error = (&AlgebraicQuad::from_int(m.interior as i64) - &prediction).abs();
            fit_rows.push((m.t as f64, error.to_f64()));
            ReciprocityRow {
                t: m.t,
                interior: m.interior,
                prediction: Number::new(&prediction, config.digits),
                abs_error: error.to_decimal(config.digits),
            }
        })
        .collect();
    Ok(ReciprocityOutput {
        kind: spec.kind(),
        dim: d,
        polynomial: name,
        parity_holds: poly.has_parity(),
        reciprocity_identity_holds: transform == poly,
        transform: render::coefficients(&transform, config.digits),
        rows,
        fitted_exponent: fit_error_exponent(&fit_rows).ok(),
    })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BeckOutput {
    dim: usize,
    base: Vec<i64>,
    period: Vec<u64>,
    closed: Quasi,
    interior: Quasi,
    reciprocity: BeckReciprocity,
}

#[derive(Serialize)]
struct BeckReciprocity {
    radius: i64,
    points_checked: u64,
    violations: usize,
    enumeration_checked: u64,
    enumeration_mismatches: usize,
    /// The first few violating `t`, if any.
    examples: Vec<Vec<i64>>,
}

fn beck_recon(config: &RunConfig) -> CliResult<BeckOutput> {
    let PolytopeSpec::Simplex(s) = &config.polytope else {
        return Err(CliError::Config(
            "beck-recon needs a simplex given by A and b".into(),
        ));
    };
    let base = DilationVector::new(
        config
            .t_vector
            .clone()
            .ok_or_else(|| CliError::Config("beck-recon needs --t-vector as the base".into()))?,
    );
    if base.len() != s.num_constraints() {
        return Err(CliError::Config(format!(
            "--t-vector needs {} entries",
            s.num_constraints()
        )));
    }
    if let Admissibility::Inadmissible(why) = s.admissibility(&base)? {
        return Err(CoreError::Inadmissible(why).into());
    }
    let period = beck::periods(s)?;
    let residues = beck::residues(&period);
    let fitted: Vec<_> = config.pool()?.install(|| {
        residues
            .par_iter()
            .map(|r| beck::reconstruct_class(s, &base, &period, r))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut ci = std::collections::BTreeMap::new();
    let mut cj = std::collections::BTreeMap::new();
    for (r, (pi, pj)) in residues.into_iter().zip(fitted) {
        ci.insert(r.clone(), pi);
        cj.insert(r, pj);
    }
    let qi = QuasiPoly::new(s.dim(), period.clone(), ci)?;
    let qj = QuasiPoly::new(s.dim(), period.clone(), cj)?;
    let r = config.radius;
    let bounds = vec![(-r, r); period.len()];
    let report = beck::check_reciprocity(&qi, &qj, &bounds, Some(s))?;
    Ok(BeckOutput {
        dim: s.dim(),
        base: base.as_slice().to_vec(),
        period,
        closed: Quasi::from(&qj),
        interior: Quasi::from(&qi),
        reciprocity: BeckReciprocity {
            radius: r,
            points_checked: report.points_checked,
            violations: report.violations.len(),
            enumeration_checked: report.enumeration_checked,
            enumeration_mismatches: report.enumeration_mismatches.len(),
            examples: report
                .violations
                .iter()
                .take(5)
                .map(|v| v.t.clone())
                .collect(),
        },
    })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DecomposeOutput {
    dim: usize,
    ownership: &'static str,
    pieces: Vec<Piece>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pieces_total: Option<u64>,
}

#[derive(Serialize)]
struct Piece {
    index: usize,
    signs: Vec<i8>,
    open: Vec<bool>,
    /// `Σ c_i x_i ≤ 1` with `c_i = ε_i / a_i`.
    facet: Vec<String>,
    orthant: Vec<String>,
    /// Lattice points of the dilated piece, when `--t` is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
}

fn decompose(config: &RunConfig) -> CliResult<DecomposeOutput> {
    let PolytopeSpec::Cross(c) = &config.polytope else {
        return Err(CliError::Config("decompose needs a cross-polytope".into()));
    };
    let ownership = if config.closed_pieces {
        Ownership::Closed
    } else {
        Ownership::HalfOpen
    };
    let options = config.options();
    let pool = config.pool()?;
    let mut pieces = Vec::new();
    for (index, s) in c.decompose(ownership).into_iter().enumerate() {
        let h = s.hrep()?;
        let facet = h.matrix()[0].iter().map(ToString::to_string).collect();
        let orthant = s
            .signs()
            .iter()
            .zip(s.open_flags())
            .enumerate()
            .map(|(i, (&e, &open))| {
                let rel = match (e > 0, open) {
                    (true, false) => ">=",
                    (true, true) => ">",
                    (false, false) => "<=",
                    (false, true) => "<",
                };
                format!("x{} {rel} 0", i + 1)
            })
            .collect();
        let count = match config.t {
            Some(t) => Some(count_parallel(&s.dilated(t)?, &options, &pool)?.closed),
            None => None,
        };
        pieces.push(Piece {
            index,
            signs: s.signs().to_vec(),
            open: s.open_flags().to_vec(),
            facet,
            orthant,
            count,
        });
    }
    let cross_count = match config.t {
        Some(t) => Some(count_parallel(&cross_dilation(c, t)?, &options, &pool)?.closed),
        None => None,
    };
    let pieces_total = config
        .t
        .map(|_| pieces.iter().filter_map(|p| p.count).sum());
    Ok(DecomposeOutput {
        dim: c.dim(),
        ownership: if config.closed_pieces {
            "closed"
        } else {
            "half-open"
        },
        pieces,
        t: config.t,
        cross_count,
        pieces_total,
    })
}

fn cross_dilation(c: &CrossPolytope, t: i64) -> CliResult<HPolytope> {
    Ok(c.to_hrep()?
        .dilate(&DilationVector::uniform(c.num_facets(), t))?)
}
