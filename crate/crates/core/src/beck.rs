//! Vector-dilation quasipolynomials of rational simplices.
//!
//! For a rational simplex `S = {x : A x ≤ b}` with `n + 1` facets, the
//! closed and interior counts `j_S(t)`, `i_S(t)` of `S^{(t)} = {A x ≤ t}` are
//! quasipolynomials in `t ∈ Z^{n+1}` on the cone of admissible `t`: on each
//! residue class of `t` modulo a period vector they agree with a polynomial of
//! total degree `n`. [`reconstruct`] recovers those polynomials from exact
//! counts and [`check_reciprocity`] tests `i_S(-t) = (-1)^n j_S(t)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumerate::count;
use crate::linalg;
use crate::polytope::{DilationVector, HPolytope};
use crate::qfield::Rational;
use crate::{Error, Result};

/// Polynomial with rational coefficients keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn new(nvars: usize, terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The terms of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, t: &[i64]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| c * Rational::from_integer(monomial(e, t)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `Σ_j t_j` raised to `power`, divided by `denom`, over `nvars` variables.
    pub fn power_of_sum(nvars: usize, power: u32, shift: i64, denom: i64) -> Self {
        // (s + shift)^power / denom by repeated multiplication
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        acc.insert(vec![0; nvars], Rational::one());
        for _ in 0..power {
            let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for (e, c) in &acc {
                for j in 0..nvars {
                    let mut e2 = e.clone();
                    e2[j] += 1;
                    *next.entry(e2).or_insert_with(Rational::zero) += c;
                }
                *next.entry(e.clone()).or_insert_with(Rational::zero) +=
                    c * Rational::from_integer(BigInt::from(shift));
            }
            acc = next;
        }
        let d = Rational::from_integer(BigInt::from(denom));
        Self::new(nvars, acc.into_iter().map(|(e, c)| (e, c / &d)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Self::new(self.nvars, out)
    }
}

fn monomial(e: &[u32], t: &[i64]) -> BigInt {
    e.iter()
        .zip(t)
        .map(|(&k, &v)| num_traits::pow(BigInt::from(v), k as usize))
        .product()
}

/// Exponent vectors of total degree `≤ max_deg` in `nvars` variables, in
/// graded lexicographic order.
fn monomials(nvars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(nvars, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 0..=max_deg {
        rec(nvars, deg, &mut Vec::new(), &mut out);
    }
    out
}

/// A quasipolynomial in `t ∈ Z^m`: one polynomial per residue class of `t`
/// modulo `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPoly {
    dim: usize,
    period: Vec<u64>,
    classes: BTreeMap<Vec<u64>, MultiPoly>,
}

impl QuasiPoly {
    /// Fails unless `classes` covers every residue vector of the period box.
    pub fn new(
        dim: usize,
        period: Vec<u64>,
        classes: BTreeMap<Vec<u64>, MultiPoly>,
    ) -> Result<Self> {
        if period.contains(&0) {
            return Err(Error::InvalidArgument("periods must be positive".into()));
        }
        let expected: u64 = period.iter().product();
        if classes.len() as u64 != expected
            || residues(&period).iter().any(|r| !classes.contains_key(r))
        {
            return Err(Error::InvalidArgument(format!(
                "expected {expected} residue classes, got {}",
                classes.len()
            )));
        }
        Ok(Self {
            dim,
            period,
            classes,
        })
    }

    /// Dimension `n` of the simplex the quasipolynomial counts in.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn classes(&self) -> &BTreeMap<Vec<u64>, MultiPoly> {
        &self.classes
    }

    pub fn class_of(&self, t: &[i64]) -> Vec<u64> {
        t.iter()
            .zip(&self.period)
            .map(|(&v, &p)| v.rem_euclid(p as i64) as u64)
            .collect()
    }

    pub fn eval(&self, t: &[i64]) -> Rational {
        self.classes[&self.class_of(t)].eval(t)
    }
}

/// Every residue vector of the box `Π [0, period_j)`, lexicographic.
pub fn residues(period: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &p in period {
        out = out
            .into_iter()
            .flat_map(|r| {
                (0..p).map(move |v| {
                    let mut r2 = r.clone();
                    r2.push(v);
                    r2
                })
            })
            .collect();
    }
    out
}

fn rational_matrix(s: &HPolytope) -> Result<Vec<Vec<Rational>>> {
    s.matrix()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.to_rational().ok_or_else(|| {
                        Error::InvalidArgument("simplex data must be rational".into())
                    })
                })
                .collect()
        })
        .collect()
}

fn check_simplex(s: &HPolytope) -> Result<()> {
    if s.num_constraints() != s.dim() + 1 {
        return Err(Error::InvalidArgument(format!(
            "a simplex in dimension {} needs {} constraints, got {}",
            s.dim(),
            s.dim() + 1,
            s.num_constraints()
        )));
    }
    if !s.is_rational() {
        return Err(Error::InvalidArgument(
            "simplex data must be rational".into(),
        ));
    }
    Ok(())
}

/// `(i, j)`: interior and closed lattice counts of `S^{(t)}`.
pub fn count_ij(s: &HPolytope, t: &DilationVector) -> Result<(u64, u64)> {
    check_simplex(s)?;
    if let crate::polytope::Admissibility::Inadmissible(why) = s.admissibility(t)? {
        return Err(Error::Inadmissible(why));
    }
    let r = count(&s.dilate(t)?)?;
    Ok((r.interior, r.closed))
}

/// Period of each dilation variable: the lcm of the denominators with which
/// `t_j` enters the vertex coordinates `A_J^{-1} t_J`.
pub fn periods(s: &HPolytope) -> Result<Vec<u64>> {
    check_simplex(s)?;
    let a = rational_matrix(s)?;
    let m = a.len();
    let mut period = vec![BigInt::one(); m];
    for omitted in 0..m {
        let rows: Vec<usize> = (0..m).filter(|&i| i != omitted).collect();
        let sub: Vec<Vec<Rational>> = rows.iter().map(|&i| a[i].clone()).collect();
        let inv = linalg::invert(&sub)?;
        for row in &inv {
            for (col, v) in row.iter().enumerate() {
                let j = rows[col];
                period[j] = period[j].lcm(v.denom());
            }
        }
    }
    period
        .iter()
        .map(|p| {
            p.to_u64()
                .ok_or_else(|| Error::InvalidArgument("period too large".into()))
        })
        .collect()
}

/// Fits the interior and closed polynomials of one residue class from a
/// tensor grid of `n + 2` admissible dilations per variable.
pub fn reconstruct_class(
    s: &HPolytope,
    base: &DilationVector,
    period: &[u64],
    residue: &[u64],
) -> Result<(MultiPoly, MultiPoly)> {
    let n = s.dim();
    let m = n + 1;
    let start: Vec<i64> = base
        .as_slice()
        .iter()
        .zip(period.iter().zip(residue))
        .map(|(&b, (&p, &r))| b + (r as i64 - b).rem_euclid(p as i64))
        .collect();
    let basis = monomials(m, n as u32);
    let side = n as u64 + 2;
    let mut rows = Vec::new();
    let mut interior = Vec::new();
    let mut closed = Vec::new();
    for g in residues(&vec![side; m]) {
        let t: Vec<i64> = start
            .iter()
            .zip(&g)
            .zip(period)
            .map(|((&s0, &k), &p)| s0 + (k * p) as i64)
            .collect();
        let tv = DilationVector::new(t.clone());
        let (i, j) = count_ij(s, &tv).map_err(|e| match e {
            Error::Inadmissible(why) => {
                Error::InterpolationDegenerate(format!("grid point {t:?} is inadmissible: {why}"))
            }
            other => other,
        })?;
        rows.push(
            basis
                .iter()
                .map(|e| Rational::from_integer(monomial(e, &t)))
                .collect::<Vec<_>>(),
        );
        interior.push(Rational::from_integer(BigInt::from(i)));
        closed.push(Rational::from_integer(BigInt::from(j)));
    }
    let fit = |values: &[Rational]| -> Result<MultiPoly> {
        let coeffs = linalg::solve(&rows, values)
            .map_err(|_| {
                Error::InterpolationDegenerate(
                    "sample grid does not determine the polynomial".into(),
                )
            })?
            .ok_or_else(|| {
                Error::InterpolationDegenerate(format!(
                    "counts in class {residue:?} are not a polynomial of degree ≤ {n}"
                ))
            })?;
        Ok(MultiPoly::new(
            m,
            basis.iter().cloned().zip(coeffs).collect(),
        ))
    };
    Ok((fit(&interior)?, fit(&closed)?))
}

/// Reconstructs `(i_S, j_S)` as quasipolynomials, sampling from `base`
/// (which must be admissible) into the admissible cone.
pub fn reconstruct(s: &HPolytope, base: &DilationVector) -> Result<(QuasiPoly, QuasiPoly)> {
    let period = periods(s)?;
    if let crate::polytope::Admissibility::Inadmissible(why) = s.admissibility(base)? {
        return Err(Error::Inadmissible(why));
    }
    let mut ci = BTreeMap::new();
    let mut cj = BTreeMap::new();
    for r in residues(&period) {
        let (pi, pj) = reconstruct_class(s, base, &period, &r)?;
        ci.insert(r.clone(), pi);
        cj.insert(r, pj);
    }
    Ok((
        QuasiPoly::new(s.dim(), period.clone(), ci)?,
        QuasiPoly::new(s.dim(), period, cj)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityViolation {
    pub t: Vec<i64>,
    /// `i(-t)`
    pub interior_at_negated: Rational,
    /// `(-1)^n j(t)`
    pub signed_closed: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationMismatch {
    pub t: Vec<i64>,
    pub predicted: Rational,
    pub counted: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReciprocityReport {
    pub points_checked: u64,
    pub violations: Vec<ReciprocityViolation>,
    pub enumeration_checked: u64,
    pub enumeration_mismatches: Vec<EnumerationMismatch>,
}

impl ReciprocityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.enumeration_mismatches.is_empty()
    }
}

/// Checks `i(-t) = (-1)^n j(t)` at every `t` of the box `Π [lo_j, hi_j]`,
/// each side evaluated in its own residue class. With `simplex`, `j(t)` is
/// also compared against enumeration at every admissible `t` of the box.
pub fn check_reciprocity(
    qi: &QuasiPoly,
    qj: &QuasiPoly,
    bounds: &[(i64, i64)],
    simplex: Option<&HPolytope>,
) -> Result<ReciprocityReport> {
    if qi.period != qj.period || qi.dim != qj.dim {
        return Err(Error::InvalidArgument(
            "quasipolynomials differ in period or dimension".into(),
        ));
    }
    if bounds.len() != qi.period.len() {
        return Err(Error::LengthMismatch {
            expected: qi.period.len(),
            actual: bounds.len(),
        });
    }
    let mut report = ReciprocityReport::default();
    let mut t: Vec<i64> = bounds.iter().map(|&(lo, _)| lo).collect();
    if bounds.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(report);
    }
    loop {
        let neg: Vec<i64> = t.iter().map(|v| -v).collect();
        let lhs = qi.eval(&neg);
        let j = qj.eval(&t);
        let rhs = if qi.dim.is_multiple_of(2) {
            j.clone()
        } else {
            -j.clone()
        };
        report.points_checked += 1;
        if lhs != rhs {
            report.violations.push(ReciprocityViolation {
                t: t.clone(),
                interior_at_negated: lhs,
                signed_closed: rhs,
            });
        }
        if let Some(s) = simplex {
            let tv = DilationVector::new(t.clone());
            if s.is_admissible(&tv) {
                let counted = count(&s.dilate(&tv)?)?.closed;
                report.enumeration_checked += 1;
                if j.is_negative() || j != Rational::from_integer(BigInt::from(counted)) {
                    report.enumeration_mismatches.push(EnumerationMismatch {
                        t: t.clone(),
                        predicted: j,
                        counted,
                    });
                }
            }
        }
        let mut k = t.len();
        loop {
            if k == 0 {
                return Ok(report);
            }
            k -= 1;
            if t[k] < bounds[k].1 {
                t[k] += 1;
                break;
            }
            t[k] = bounds[k].0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{rational, AlgebraicQuad};

    fn ints(v: &[i64]) -> Vec<AlgebraicQuad> {
        v.iter().map(|&x| AlgebraicQuad::from_int(x)).collect()
    }

    fn unimodular() -> HPolytope {
        HPolytope::new(
            vec![ints(&[1, 1]), ints(&[-1, 0]), ints(&[0, -1])],
            ints(&[1, 0, 0]),
        )
        .unwrap()
    }

    fn interval(scale: i64) -> HPolytope {
        HPolytope::new(vec![ints(&[-scale]), ints(&[scale])], ints(&[1, 1])).unwrap()
    }

    #[test]
    fn monomial_basis() {
        let b = monomials(3, 2);
        assert_eq!(b.len(), 10);
        assert_eq!(b[0], [0, 0, 0]);
        assert_eq!(b[1], [1, 0, 0]);
        assert_eq!(b[4], [2, 0, 0]);
    }

    #[test]
    fn counts_in_one_dimension_and_the_triangle() {
        assert_eq!(
            count_ij(&interval(1), &DilationVector::new(vec![2, 3])).unwrap(),
            (4, 6)
        );
        assert_eq!(
            count_ij(&unimodular(), &DilationVector::new(vec![3, 0, 0])).unwrap(),
            (1, 10)
        );
        assert!(matches!(
            count_ij(&unimodular(), &DilationVector::new(vec![-1, 0, 0])),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn periods_follow_vertex_denominators() {
        assert_eq!(periods(&unimodular()).unwrap(), [1, 1, 1]);
        assert_eq!(periods(&interval(2)).unwrap(), [2, 2]);
        let half = HPolytope::new(
            vec![ints(&[-1, 0]), ints(&[0, -1]), ints(&[1, 2])],
            ints(&[0, 0, 1]),
        )
        .unwrap();
        assert_eq!(periods(&half).unwrap(), [2, 1, 2]);
    }

    #[test]
    fn unimodular_triangle_reconstruction() {
        let (qi, qj) = reconstruct(&unimodular(), &DilationVector::new(vec![2, 0, 0])).unwrap();
        assert_eq!(qj.period(), [1, 1, 1]);
        let j_expected =
            MultiPoly::power_of_sum(3, 1, 1, 1).mul(&MultiPoly::power_of_sum(3, 1, 2, 2));
        let i_expected =
            MultiPoly::power_of_sum(3, 1, -1, 1).mul(&MultiPoly::power_of_sum(3, 1, -2, 2));
        assert_eq!(qj.classes()[&vec![0, 0, 0]], j_expected);
        assert_eq!(qi.classes()[&vec![0, 0, 0]], i_expected);
        assert_eq!(
            qj.classes()[&vec![0, 0, 0]].homogeneous_part(2),
            MultiPoly::power_of_sum(3, 2, 0, 2)
        );
        assert_eq!(qj.classes()[&vec![0, 0, 0]].total_degree(), Some(2));
    }

    #[test]
    fn interval_with_denominator_two() {
        let s = interval(2);
        let (qi, qj) = reconstruct(&s, &DilationVector::new(vec![1, 1])).unwrap();
        assert_eq!(qj.classes().len(), 4);
        for t1 in -3i64..8 {
            for t2 in -3i64..8 {
                if t1 + t2 <= 0 {
                    continue;
                }
                // integers in [-t1/2, t2/2]
                let j = t2.div_euclid(2) + t1.div_euclid(2) + 1;
                assert_eq!(qj.eval(&[t1, t2]), rational(j, 1), "t = ({t1}, {t2})");
            }
        }
        let report = check_reciprocity(&qi, &qj, &[(-6, 6), (-6, 6)], Some(&s)).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.enumeration_checked > 0);
    }

    #[test]
    fn reciprocity_on_the_unit_interval() {
        let s = interval(1);
        let (qi, qj) = reconstruct(&s, &DilationVector::new(vec![0, 1])).unwrap();
        // j = t1 + t2 + 1, i(-t) = -(t1 + t2) - 1
        assert_eq!(qj.eval(&[2, 3]), rational(6, 1));
        assert_eq!(qi.eval(&[-2, -3]), rational(-6, 1));
        let report = check_reciprocity(&qi, &qj, &[(-5, 5), (-5, 5)], Some(&s)).unwrap();
        assert_eq!(report.points_checked, 121);
        assert!(report.passed());
    }

    #[test]
    fn reciprocity_rejects_mismatched_periods() {
        let (qi, _) = reconstruct(&interval(2), &DilationVector::new(vec![1, 1])).unwrap();
        let (_, qj) = reconstruct(&interval(1), &DilationVector::new(vec![1, 1])).unwrap();
        assert!(check_reciprocity(&qi, &qj, &[(0, 1), (0, 1)], None).is_err());
    }

    #[test]
    fn reconstruction_needs_an_admissible_base() {
        assert!(matches!(
            reconstruct(&unimodular(), &DilationVector::new(vec![0, 0, 0])),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn quasipoly_requires_every_class() {
        let mut classes = BTreeMap::new();
        classes.insert(vec![0], MultiPoly::default());
        assert!(QuasiPoly::new(1, vec![2], classes).is_err());
    }
}
