//! Exact lattice-point counting.
//!
//! [`count`] walks coordinates `x_1, …, x_n` in order. Before the walk the
//! constraint system is projected onto every prefix `(x_1, …, x_k)` by
//! Fourier–Motzkin elimination, so for a fixed integer prefix the feasible
//! range of the next coordinate is known exactly. On the last coordinate
//! every constraint is a one-variable inequality; the lattice points of the
//! resulting interval are classified as interior or boundary by exact floor
//! and equality tests on the interval ends and the tight points, without
//! visiting them one by one. Every decision is an exact sign test.
//!
//! [`count_box_scan`] is the naive oracle: it visits every integer point of
//! the bounding box and classifies each one against every constraint.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::AddAssign;
use core::time::Duration;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::polytope::{CrossPolytope, DilationVector, HPolytope, PointClass};
use crate::qfield::AlgebraicQuad;
use crate::{Error, Result};

/// Default cap on scanned lattice points.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Closed, interior and boundary lattice-point counts of one polytope.
///
/// `elapsed` is left at zero by this crate; callers with a clock fill it in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountReport {
    pub closed: u64,
    pub interior: u64,
    pub boundary: u64,
    pub points_scanned: u64,
    pub elapsed: Duration,
}

impl AddAssign for CountReport {
    fn add_assign(&mut self, rhs: Self) {
        self.closed += rhs.closed;
        self.interior += rhs.interior;
        self.boundary += rhs.boundary;
        self.points_scanned += rhs.points_scanned;
        self.elapsed += rhs.elapsed;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

pub(crate) fn to_i64(n: &BigInt) -> i64 {
    i64::try_from(n).expect("lattice coordinate fits in i64")
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    coeffs: Vec<AlgebraicQuad>,
    rhs: AlgebraicQuad,
    strict: bool,
}

impl Ineq {
    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let s = lead.abs().inv().expect("nonzero lead");
            if s != AlgebraicQuad::one() {
                for c in &mut self.coeffs {
                    *c = &*c * &s;
                }
                self.rhs = &self.rhs * &s;
            }
        }
        self
    }
}

fn rows_of(p: &HPolytope) -> Vec<Ineq> {
    p.matrix()
        .iter()
        .zip(p.rhs())
        .zip(p.strictness())
        .map(|((a, b), &strict)| Ineq {
            coeffs: a.clone(),
            rhs: b.clone(),
            strict,
        })
        .collect()
}

/// Eliminates variable `var` from `rows`. Returns `None` when a constant
/// row `0 ≤ r` with `r < 0` shows the closure is empty.
fn eliminate(rows: &[Ineq], var: usize) -> Option<Vec<Ineq>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out: Vec<Ineq> = Vec::new();
    let push = |row: Ineq, out: &mut Vec<Ineq>| -> bool {
        if row.coeffs.iter().all(AlgebraicQuad::is_zero) {
            return row.rhs.sign() >= 0;
        }
        let row = row.normalized();
        if !out.contains(&row) {
            out.push(row);
        }
        true
    };
    for row in rows {
        match row.coeffs[var].sign() {
            1 => pos.push(row),
            -1 => neg.push(row),
            _ => {
                if !push(row.clone(), &mut out) {
                    return None;
                }
            }
        }
    }
    for p in &pos {
        for n in &neg {
            // |n_var|·p + p_var·n cancels the variable
            let wp = n.coeffs[var].abs();
            let wn = p.coeffs[var].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .enumerate()
                .map(|(j, (a, b))| {
                    if j == var {
                        AlgebraicQuad::zero()
                    } else {
                        &(a * &wp) + &(b * &wn)
                    }
                })
                .collect();
            let combined = Ineq {
                coeffs,
                rhs: &(&p.rhs * &wp) + &(&n.rhs * &wn),
                strict: p.strict || n.strict,
            };
            if !push(combined, &mut out) {
                return None;
            }
        }
    }
    Some(out)
}

/// A constraint of one level, solved for that level's coordinate:
/// `x_k ≤ base - Σ_j prefix_j·x_j` when `dir > 0`, `≥` when `dir < 0`;
/// for `dir == 0` the row reads `0 ≤ base - Σ_j prefix_j·x_j`.
#[derive(Clone, Debug)]
struct Bound {
    dir: i8,
    base: AlgebraicQuad,
    prefix: Vec<AlgebraicQuad>,
    strict: bool,
}

impl Bound {
    fn value(&self, prefix: &[i64]) -> AlgebraicQuad {
        let mut v = self.base.clone();
        for (c, &x) in self.prefix.iter().zip(prefix) {
            if x != 0 && !c.is_zero() {
                v -= &c.scale_int(x);
            }
        }
        v
    }
}

fn bounds_for(rows: &[Ineq], k: usize) -> Vec<Bound> {
    rows.iter()
        .map(|row| {
            let alpha = &row.coeffs[k];
            let dir = alpha.sign();
            if dir == 0 {
                Bound {
                    dir,
                    base: row.rhs.clone(),
                    prefix: row.coeffs[..k].to_vec(),
                    strict: row.strict,
                }
            } else {
                let inv = alpha.inv().expect("nonzero coefficient");
                Bound {
                    dir,
                    base: &row.rhs * &inv,
                    prefix: row.coeffs[..k].iter().map(|c| c * &inv).collect(),
                    strict: row.strict,
                }
            }
        })
        .collect()
}

/// Floor of `v` and whether `v` is an integer.
fn floor_exact(v: &AlgebraicQuad) -> (i64, bool) {
    let f = v.floor();
    let is_int = v.to_rational().is_some_and(|r| r.is_integer());
    (to_i64(&f), is_int)
}

/// Precomputed projections of one polytope, ready to count.
#[derive(Clone, Debug)]
pub struct Counter {
    dim: usize,
    /// `levels[k]` bounds `x_k` in terms of `x_0 … x_{k-1}`; `None` if the
    /// polytope is empty.
    levels: Option<Vec<Vec<Bound>>>,
}

impl Counter {
    pub fn new(p: &HPolytope) -> Result<Self> {
        let n = p.dim();
        let mut projections = vec![rows_of(p)];
        for var in (1..n).rev() {
            match eliminate(projections.last().expect("nonempty"), var) {
                Some(rows) => projections.push(rows),
                None => {
                    return Ok(Self {
                        dim: n,
                        levels: None,
                    })
                }
            }
        }
        projections.reverse();
        let mut levels = Vec::with_capacity(n);
        for (k, rows) in projections.iter().enumerate() {
            let bounds = bounds_for(rows, k);
            if !bounds.iter().any(|b| b.dir > 0) || !bounds.iter().any(|b| b.dir < 0) {
                return Err(Error::Unbounded(k));
            }
            levels.push(bounds);
        }
        Ok(Self {
            dim: n,
            levels: Some(levels),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Integer range of the first coordinate over the closure, or `None`
    /// when the polytope is empty.
    pub fn first_range(&self) -> Option<(i64, i64)> {
        range_closed(&self.levels.as_ref()?[0], &[])
    }

    /// Counts the points whose first coordinate lies in `[lo, hi]`.
    pub fn count_range(&self, lo: i64, hi: i64, options: &CountOptions) -> Result<CountReport> {
        let mut report = CountReport::default();
        let Some(levels) = self.levels.as_ref() else {
            return Ok(report);
        };
        if self.dim == 1 {
            let (c, i, b) = classify_last(&levels[0], &[], Some((lo, hi)));
            report.closed = c;
            report.interior = i;
            report.boundary = b;
            report.points_scanned = c;
            check_budget(&report, options)?;
            return Ok(report);
        }
        let mut prefix = vec![0i64; self.dim];
        for x0 in lo..=hi {
            prefix[0] = x0;
            report.points_scanned += 1;
            walk(levels, 1, &mut prefix, &mut report, options)?;
        }
        Ok(report)
    }

    pub fn count(&self, options: &CountOptions) -> Result<CountReport> {
        match self.first_range() {
            Some((lo, hi)) => self.count_range(lo, hi, options),
            None => Ok(CountReport::default()),
        }
    }
}

fn check_budget(report: &CountReport, options: &CountOptions) -> Result<()> {
    if report.points_scanned > options.budget {
        Err(Error::BudgetExceeded {
            budget: options.budget,
        })
    } else {
        Ok(())
    }
}

fn walk(
    levels: &[Vec<Bound>],
    k: usize,
    prefix: &mut [i64],
    report: &mut CountReport,
    options: &CountOptions,
) -> Result<()> {
    if k == levels.len() - 1 {
        let (c, i, b) = classify_last(&levels[k], &prefix[..k], None);
        report.closed += c;
        report.interior += i;
        report.boundary += b;
        report.points_scanned += c;
        return check_budget(report, options);
    }
    let Some((lo, hi)) = range_closed(&levels[k], &prefix[..k]) else {
        return Ok(());
    };
    for x in lo..=hi {
        prefix[k] = x;
        report.points_scanned += 1;
        walk(levels, k + 1, prefix, report, options)?;
    }
    Ok(())
}

/// Integer range of the closure of one level for a fixed prefix.
fn range_closed(bounds: &[Bound], prefix: &[i64]) -> Option<(i64, i64)> {
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for b in bounds {
        let v = b.value(prefix);
        match b.dir {
            0 => {
                if v.sign() < 0 {
                    return None;
                }
            }
            1 => hi = hi.min(to_i64(&v.floor())),
            _ => lo = lo.max(to_i64(&v.ceil())),
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Counts `(closed, interior, boundary)` on the last coordinate, optionally
/// clipped to `clip`.
fn classify_last(bounds: &[Bound], prefix: &[i64], clip: Option<(i64, i64)>) -> (u64, u64, u64) {
    let (mut lo, mut hi) = clip.unwrap_or((i64::MIN, i64::MAX));
    let mut all_boundary = false;
    let mut tight: Vec<i64> = Vec::new();
    for b in bounds {
        let v = b.value(prefix);
        if b.dir == 0 {
            match (v.sign(), b.strict) {
                (s, _) if s < 0 => return (0, 0, 0),
                (0, true) => return (0, 0, 0),
                (0, false) => all_boundary = true,
                _ => {}
            }
            continue;
        }
        let (f, is_int) = floor_exact(&v);
        if b.dir > 0 {
            hi = hi.min(if is_int && b.strict { f - 1 } else { f });
        } else {
            let c = if is_int { f } else { f + 1 };
            lo = lo.max(if is_int && b.strict { c + 1 } else { c });
        }
        if is_int && !b.strict && !tight.contains(&f) {
            tight.push(f);
        }
    }
    if lo > hi {
        return (0, 0, 0);
    }
    let closed = (hi - lo) as u64 + 1;
    let boundary = if all_boundary {
        closed
    } else {
        tight.iter().filter(|&&x| lo <= x && x <= hi).count() as u64
    };
    (closed, closed - boundary, boundary)
}

/// Exact closed/interior/boundary counts of `p`.
pub fn count(p: &HPolytope) -> Result<CountReport> {
    count_with(p, &CountOptions::default())
}

pub fn count_with(p: &HPolytope, options: &CountOptions) -> Result<CountReport> {
    Counter::new(p)?.count(options)
}

/// Integer bounding box `[ceil(min x_i), floor(max x_i)]` per coordinate, or
/// `None` if the polytope's closure is empty.
pub fn bounding_box(p: &HPolytope) -> Result<Option<Vec<(i64, i64)>>> {
    let n = p.dim();
    let rows = rows_of(p);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut projected = rows.clone();
        for var in (0..n).rev().filter(|&v| v != k) {
            match eliminate(&projected, var) {
                Some(r) => projected = r,
                None => return Ok(None),
            }
        }
        let mut lo: Option<AlgebraicQuad> = None;
        let mut hi: Option<AlgebraicQuad> = None;
        for row in &projected {
            let alpha = &row.coeffs[k];
            match alpha.sign() {
                0 => {
                    if row.rhs.sign() < 0 {
                        return Ok(None);
                    }
                }
                s => {
                    let v = row.rhs.checked_div(alpha)?;
                    if s > 0 {
                        hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
                    } else {
                        lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
                    }
                }
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) => {
                if l > h {
                    return Ok(None);
                }
                out.push((to_i64(&l.ceil()), to_i64(&h.floor())));
            }
            _ => return Err(Error::Unbounded(k)),
        }
    }
    Ok(Some(out))
}

/// Naive oracle: classifies every integer point of the bounding box against
/// every constraint.
pub fn count_box_scan(p: &HPolytope, options: &CountOptions) -> Result<CountReport> {
    let mut report = CountReport::default();
    let Some(bbox) = bounding_box(p)? else {
        return Ok(report);
    };
    if bbox.iter().any(|&(l, h)| l > h) {
        return Ok(report);
    }
    let rows: Vec<IntRow> = match p
        .matrix()
        .iter()
        .zip(p.rhs())
        .zip(p.strictness())
        .map(|((a, b), &s)| IntRow::new(a, b, s))
        .collect::<Option<_>>()
    {
        Some(rows) => rows,
        None => {
            return Err(Error::InvalidArgument(
                "coefficients too large for the box scan".into(),
            ))
        }
    };
    let mut x: Vec<i64> = bbox.iter().map(|&(l, _)| l).collect();
    let mut slack = Vec::new();
    loop {
        report.points_scanned += 1;
        check_budget(&report, options)?;
        match classify_int(&rows, &x, &mut slack) {
            PointClass::Outside => {}
            PointClass::Boundary => {
                report.closed += 1;
                report.boundary += 1;
            }
            PointClass::Interior => {
                report.closed += 1;
                report.interior += 1;
            }
        }
        // odometer over the box, last coordinate fastest
        let mut k = x.len();
        loop {
            if k == 0 {
                return Ok(report);
            }
            k -= 1;
            if x[k] < bbox[k].1 {
                x[k] += 1;
                break;
            }
            x[k] = bbox[k].0;
        }
    }
}

/// One constraint `a·x ≤ b` scaled by a positive integer so that every
/// coefficient is an integer multiple of some `√m`. Slack at an integer
/// point is then `Σ_m (b_m - Σ_j a_{m,j} x_j) √m` with integer parts.
struct IntRow {
    radicands: Vec<u64>,
    /// per radicand: `(b_m, a_{m,·})`
    parts: Vec<(i128, Vec<i128>)>,
    strict: bool,
}

impl IntRow {
    fn new(a: &[AlgebraicQuad], b: &AlgebraicQuad, strict: bool) -> Option<Self> {
        let mut radicands: Vec<u64> = b.support();
        for c in a {
            radicands.extend(c.support());
        }
        radicands.sort_unstable();
        radicands.dedup();
        let mut lcm = BigInt::one();
        for v in a.iter().chain(core::iter::once(b)) {
            for (_, q) in v.terms() {
                lcm = num_integer::Integer::lcm(&lcm, q.denom());
            }
        }
        let int = |v: &AlgebraicQuad, m: u64| -> Option<i128> {
            i128::try_from((v.coefficient(m) * &lcm).to_integer()).ok()
        };
        let parts = radicands
            .iter()
            .map(|&m| {
                Some((
                    int(b, m)?,
                    a.iter().map(|c| int(c, m)).collect::<Option<Vec<_>>>()?,
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            radicands,
            parts,
            strict,
        })
    }
}

fn classify_int(rows: &[IntRow], x: &[i64], slack: &mut Vec<(u64, i128)>) -> PointClass {
    let mut on_boundary = false;
    for row in rows {
        slack.clear();
        for (&m, (b, a)) in row.radicands.iter().zip(&row.parts) {
            let v = a
                .iter()
                .zip(x)
                .fold(*b, |acc, (c, &xi)| acc - c * i128::from(xi));
            if v != 0 {
                slack.push((m, v));
            }
        }
        match (sign_of_sum(slack), row.strict) {
            (s, _) if s < 0 => return PointClass::Outside,
            (0, true) => return PointClass::Outside,
            (0, false) => on_boundary = true,
            _ => {}
        }
    }
    if on_boundary {
        PointClass::Boundary
    } else {
        PointClass::Interior
    }
}

/// Sign of `Σ v √m` over distinct squarefree `m`, all `v ≠ 0`.
fn sign_of_sum(terms: &[(u64, i128)]) -> i8 {
    let sign = |v: i128| if v > 0 { 1 } else { -1 };
    match terms {
        [] => 0,
        [(_, v)] => sign(*v),
        [(_, v1), (_, v2)] if (*v1 > 0) == (*v2 > 0) => sign(*v1),
        // opposite signs: compare v1² m1 with v2² m2
        [(m1, v1), (m2, v2)] => {
            let sq = |v: i128, m: u64| v.checked_mul(v).and_then(|s| s.checked_mul(i128::from(m)));
            match (sq(*v1, *m1), sq(*v2, *m2)) {
                (Some(a), Some(b)) => match a.cmp(&b) {
                    core::cmp::Ordering::Greater => sign(*v1),
                    core::cmp::Ordering::Less => sign(*v2),
                    // distinct squarefree radicands never tie
                    core::cmp::Ordering::Equal => 0,
                },
                _ => field_sign(terms),
            }
        }
        _ => field_sign(terms),
    }
}

fn field_sign(terms: &[(u64, i128)]) -> i8 {
    AlgebraicQuad::from_terms(
        terms
            .iter()
            .map(|&(m, v)| (m, crate::qfield::Rational::from_integer(BigInt::from(v)))),
    )
    .expect("radicands come from a field element")
    .sign()
}

/// Number of integers in `[lo, hi]`.
pub fn count_interval(lo: &AlgebraicQuad, hi: &AlgebraicQuad) -> u64 {
    let n = hi.floor() - lo.ceil() + BigInt::one();
    if n.is_positive() {
        u64::try_from(&n).expect("count fits in u64")
    } else {
        0
    }
}

/// The bracket expression `|[hi] - [lo]|` with `[·]` the integer part
/// (floor). Kept for comparison with [`count_interval`]; the two differ
/// whenever `lo` is an integer or the interval is empty.
pub fn count_interval_bracket(lo: &AlgebraicQuad, hi: &AlgebraicQuad) -> u64 {
    let d = hi.floor() - lo.floor();
    u64::try_from(&d.abs()).expect("count fits in u64")
}

/// Counts `C^{(t)} = {x : Σ ε_i x_i / a_i ≤ t_ε for every sign pattern ε}`.
pub fn count_vector_dilated_cross(c: &CrossPolytope, t: &DilationVector) -> Result<CountReport> {
    count_vector_dilated_cross_with(c, t, &CountOptions::default())
}

pub fn count_vector_dilated_cross_with(
    c: &CrossPolytope,
    t: &DilationVector,
    options: &CountOptions,
) -> Result<CountReport> {
    if t.len() != c.num_facets() {
        return Err(Error::LengthMismatch {
            expected: c.num_facets(),
            actual: t.len(),
        });
    }
    if !c.is_admissible(t) {
        return Err(Error::Inadmissible(alloc::format!(
            "cross-polytope dilation factors must all be at least 1, got {:?}",
            t.as_slice()
        )));
    }
    let p = c.to_hrep()?.dilate(t)?;
    let counter = Counter::new(&p)?;
    // |x_0| ≤ a_0·max t bounds the outer scan independently of the projection
    let (blo, bhi) = c.bounding_box(t)[0];
    match counter.first_range() {
        Some((lo, hi)) => counter.count_range(lo.max(blo), hi.min(bhi), options),
        None => Ok(CountReport::default()),
    }
}

/// `tC` for a scalar `t`.
pub fn count_scalar_cross(c: &CrossPolytope, t: i64) -> Result<CountReport> {
    count(
        &c.to_hrep()?
            .dilate(&DilationVector::uniform(c.num_facets(), t))?,
    )
}
