//! Polytope specifications and vector dilation.
//!
//! Facets of a cross-polytope are indexed by sign patterns in binary
//! counting order: bit `i` of the facet index is `0` for `ε_i = +1` and `1`
//! for `ε_i = -1`. In dimension two this is `(+,+), (-,+), (+,-), (-,-)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::qfield::AlgebraicQuad;
use crate::{Error, Result};

/// Largest cross-polytope dimension [`CrossPolytope::to_hrep`] expands.
pub const DEFAULT_MAX_CROSS_DIM: usize = 20;

/// Sign pattern of facet `index` in dimension `dim`.
pub fn sign_pattern(index: usize, dim: usize) -> Vec<i8> {
    (0..dim)
        .map(|i| if index >> i & 1 == 0 { 1 } else { -1 })
        .collect()
}

/// Index of a sign pattern; inverse of [`sign_pattern`].
pub fn pattern_index(signs: &[i8]) -> usize {
    signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 0)
        .map(|(i, _)| 1 << i)
        .sum()
}

/// An integer right-hand side replacing `b` in `Ax ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DilationVector(Vec<i64>);

impl DilationVector {
    pub fn new(t: Vec<i64>) -> Self {
        Self(t)
    }

    /// The same factor `t` on all `len` facets.
    pub fn uniform(len: usize, t: i64) -> Self {
        Self(vec![t; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn max(&self) -> Option<i64> {
        self.0.iter().copied().max()
    }
}

impl From<Vec<i64>> for DilationVector {
    fn from(t: Vec<i64>) -> Self {
        Self(t)
    }
}

/// Where a point sits relative to a polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Outside,
    Boundary,
    Interior,
}

/// `{x : A x ≤ b}` with a per-row choice between `≤` and `<`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    a: Vec<Vec<AlgebraicQuad>>,
    b: Vec<AlgebraicQuad>,
    strict: Vec<bool>,
}

impl HPolytope {
    /// All rows non-strict.
    pub fn new(a: Vec<Vec<AlgebraicQuad>>, b: Vec<AlgebraicQuad>) -> Result<Self> {
        let strict = vec![false; a.len()];
        Self::with_strictness(a, b, strict)
    }

    pub fn with_strictness(
        a: Vec<Vec<AlgebraicQuad>>,
        b: Vec<AlgebraicQuad>,
        strict: Vec<bool>,
    ) -> Result<Self> {
        let m = a.len();
        if m == 0 {
            return Err(Error::InvalidArgument(
                "a polytope needs at least one constraint".into(),
            ));
        }
        let dim = a[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension must be positive".into(),
            ));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            if row.iter().all(AlgebraicQuad::is_zero) {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has all-zero coefficients"
                )));
            }
        }
        if b.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                actual: b.len(),
            });
        }
        if strict.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                actual: strict.len(),
            });
        }
        Ok(Self { dim, a, b, strict })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<AlgebraicQuad>] {
        &self.a
    }

    pub fn rhs(&self) -> &[AlgebraicQuad] {
        &self.b
    }

    pub fn strictness(&self) -> &[bool] {
        &self.strict
    }

    /// True iff every entry of `A` and `b` is rational.
    pub fn is_rational(&self) -> bool {
        self.a
            .iter()
            .flatten()
            .chain(&self.b)
            .all(AlgebraicQuad::is_rational)
    }

    /// `P^{(t)} = {x : A x ≤ t}`, keeping `A` and the strictness flags.
    pub fn dilate(&self, t: &DilationVector) -> Result<Self> {
        if t.len() != self.num_constraints() {
            return Err(Error::LengthMismatch {
                expected: self.num_constraints(),
                actual: t.len(),
            });
        }
        Ok(Self {
            dim: self.dim,
            a: self.a.clone(),
            b: t.as_slice()
                .iter()
                .map(|&v| AlgebraicQuad::from_int(v))
                .collect(),
            strict: self.strict.clone(),
        })
    }

    /// Slack `b_i - a_i·x` of row `i`.
    pub fn slack(&self, i: usize, x: &[AlgebraicQuad]) -> AlgebraicQuad {
        let mut s = self.b[i].clone();
        for (c, v) in self.a[i].iter().zip(x) {
            s -= &(c * v);
        }
        s
    }

    pub fn classify(&self, x: &[AlgebraicQuad]) -> PointClass {
        let mut on_boundary = false;
        for i in 0..self.num_constraints() {
            match (self.slack(i, x).sign(), self.strict[i]) {
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

    pub fn contains(&self, x: &[AlgebraicQuad]) -> bool {
        self.classify(x) != PointClass::Outside
    }

    /// The point where the rows in `rows` hold with equality.
    pub fn vertex(&self, rows: &[usize]) -> Result<Vec<AlgebraicQuad>> {
        let a: Vec<Vec<AlgebraicQuad>> = rows.iter().map(|&i| self.a[i].clone()).collect();
        let b: Vec<AlgebraicQuad> = rows.iter().map(|&i| self.b[i].clone()).collect();
        vertex_solve(&a, &b)
    }

    /// Whether `t` dilates this simplex (`m = n + 1`) into a nondegenerate
    /// simplex of the same combinatorial type.
    pub fn admissibility(&self, t: &DilationVector) -> Result<Admissibility> {
        let (m, n) = (self.num_constraints(), self.dim);
        if m != n + 1 {
            return Ok(Admissibility::Inadmissible(format!(
                "not a simplex: {m} constraints in dimension {n}"
            )));
        }
        let dilated = self.dilate(t)?;
        for omitted in 0..m {
            let rows: Vec<usize> = (0..m).filter(|&i| i != omitted).collect();
            let v = match dilated.vertex(&rows) {
                Ok(v) => v,
                Err(Error::SingularSystem) => {
                    return Ok(Admissibility::Inadmissible(format!(
                        "rows {rows:?} are singular"
                    )));
                }
                Err(e) => return Err(e),
            };
            if dilated.slack(omitted, &v).sign() <= 0 {
                return Ok(Admissibility::Inadmissible(format!(
                    "vertex of rows {rows:?} does not strictly satisfy row {omitted}"
                )));
            }
        }
        Ok(Admissibility::Admissible)
    }

    pub fn is_admissible(&self, t: &DilationVector) -> bool {
        matches!(self.admissibility(t), Ok(Admissibility::Admissible))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Inadmissible(String),
}

/// Solves the square system `a·x = b` exactly.
pub fn vertex_solve(a: &[Vec<AlgebraicQuad>], b: &[AlgebraicQuad]) -> Result<Vec<AlgebraicQuad>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.iter().any(|row| row.len() != a.len()) {
        return Err(Error::InvalidArgument(
            "vertex_solve needs a square system".into(),
        ));
    }
    linalg::solve(a, b)?.ok_or(Error::SingularSystem)
}

/// `{x : Σ |x_i|/a_i ≤ 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossPolytope {
    axes: Vec<AlgebraicQuad>,
}

impl CrossPolytope {
    pub fn new(axes: Vec<AlgebraicQuad>) -> Result<Self> {
        check_axes(&axes)?;
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AlgebraicQuad] {
        &self.axes
    }

    pub fn num_facets(&self) -> usize {
        1 << self.dim()
    }

    pub fn to_hrep(&self) -> Result<HPolytope> {
        self.to_hrep_with_cap(DEFAULT_MAX_CROSS_DIM)
    }

    /// One row `Σ ε_i x_i / a_i ≤ 1` per sign pattern, in facet order.
    pub fn to_hrep_with_cap(&self, max_dim: usize) -> Result<HPolytope> {
        let d = self.dim();
        if d > max_dim {
            return Err(Error::DimensionTooLarge {
                dim: d,
                cap: max_dim,
            });
        }
        let recips = reciprocals(&self.axes)?;
        let a = (0..self.num_facets())
            .map(|k| {
                sign_pattern(k, d)
                    .iter()
                    .zip(&recips)
                    .map(|(&s, r)| if s > 0 { r.clone() } else { -r })
                    .collect()
            })
            .collect();
        HPolytope::new(a, vec![AlgebraicQuad::one(); 1 << d])
    }

    /// Direct membership test `Σ |x_i|/a_i ≤ 1`.
    pub fn contains(&self, x: &[AlgebraicQuad]) -> Result<bool> {
        let mut s = AlgebraicQuad::zero();
        for (xi, ai) in x.iter().zip(&self.axes) {
            s += &xi.abs().checked_div(ai)?;
        }
        Ok(s <= AlgebraicQuad::one())
    }

    /// Splits `C` into one orthant simplex per sign pattern.
    ///
    /// With [`Ownership::HalfOpen`] the hyperplane `x_i = 0` belongs to the
    /// pieces with `ε_i = +1`, so every lattice point of `C` lies in exactly
    /// one piece. [`Ownership::Closed`] keeps every piece closed.
    pub fn decompose(&self, ownership: Ownership) -> Vec<OrthantSimplex> {
        let d = self.dim();
        (0..self.num_facets())
            .map(|k| {
                let signs = sign_pattern(k, d);
                let open = signs
                    .iter()
                    .map(|&s| ownership == Ownership::HalfOpen && s < 0)
                    .collect();
                OrthantSimplex {
                    axes: self.axes.clone(),
                    signs,
                    open,
                }
            })
            .collect()
    }

    /// Vector dilations keep the origin interior and the face lattice fixed
    /// when every factor is at least one.
    pub fn is_admissible(&self, t: &DilationVector) -> bool {
        t.len() == self.num_facets() && t.as_slice().iter().all(|&v| v >= 1)
    }

    /// Closed-form box `|x_i| ≤ a_i · max t`, as integer bounds.
    pub fn bounding_box(&self, t: &DilationVector) -> Vec<(i64, i64)> {
        let tmax = t.max().unwrap_or(0).max(0);
        self.axes
            .iter()
            .map(|a| {
                let hi = crate::enumerate::to_i64(&a.scale_int(tmax).floor());
                (-hi, hi)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ownership {
    HalfOpen,
    Closed,
}

/// `{x : Σ ε_i x_i / a_i ≤ 1, ε_i x_i ≥ 0}`, where the coordinate
/// constraint of axis `i` is strict (`ε_i x_i > 0`) when `open[i]` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantSimplex {
    axes: Vec<AlgebraicQuad>,
    signs: Vec<i8>,
    open: Vec<bool>,
}

impl OrthantSimplex {
    pub fn new(axes: Vec<AlgebraicQuad>, signs: Vec<i8>, open: Vec<bool>) -> Result<Self> {
        check_axes(&axes)?;
        let d = axes.len();
        for len in [signs.len(), open.len()] {
            if len != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    actual: len,
                });
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(Self { axes, signs, open })
    }

    /// The closed simplex in the positive orthant.
    pub fn positive(axes: Vec<AlgebraicQuad>) -> Result<Self> {
        let d = axes.len();
        Self::new(axes, vec![1; d], vec![false; d])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AlgebraicQuad] {
        &self.axes
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Per-axis flag: is the coordinate hyperplane `x_i = 0` excluded?
    pub fn open_flags(&self) -> &[bool] {
        &self.open
    }

    /// Row 0 is the facet `Σ ε_i x_i / a_i ≤ 1`; row `1 + i` is
    /// `-ε_i x_i ≤ 0` (strict when open).
    pub fn hrep(&self) -> Result<HPolytope> {
        let d = self.dim();
        let recips = reciprocals(&self.axes)?;
        let mut a = Vec::with_capacity(d + 1);
        a.push(
            self.signs
                .iter()
                .zip(&recips)
                .map(|(&s, r)| if s > 0 { r.clone() } else { -r })
                .collect(),
        );
        for i in 0..d {
            let mut row = vec![AlgebraicQuad::zero(); d];
            row[i] = AlgebraicQuad::from_int(-i64::from(self.signs[i]));
            a.push(row);
        }
        let mut b = vec![AlgebraicQuad::zero(); d + 1];
        b[0] = AlgebraicQuad::one();
        let mut strict = vec![false];
        strict.extend_from_slice(&self.open);
        HPolytope::with_strictness(a, b, strict)
    }

    /// `tS`: the facet moved to level `t`, coordinate hyperplanes fixed.
    pub fn dilated(&self, t: i64) -> Result<HPolytope> {
        let mut tv = vec![0; self.dim() + 1];
        tv[0] = t;
        self.hrep()?.dilate(&DilationVector::new(tv))
    }
}

fn check_axes(axes: &[AlgebraicQuad]) -> Result<()> {
    if axes.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one axis is required".into(),
        ));
    }
    match axes.iter().position(|a| a.sign() <= 0) {
        Some(index) => Err(Error::InvalidAxis { index }),
        None => Ok(()),
    }
}

fn reciprocals(axes: &[AlgebraicQuad]) -> Result<Vec<AlgebraicQuad>> {
    axes.iter().map(AlgebraicQuad::inv).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> AlgebraicQuad {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<AlgebraicQuad> {
        v.iter().map(|&x| AlgebraicQuad::from_int(x)).collect()
    }

    /// x + y ≤ √2, -x ≤ 0, -y ≤ 0
    fn skew_triangle() -> HPolytope {
        HPolytope::new(
            vec![ints(&[1, 1]), ints(&[-1, 0]), ints(&[0, -1])],
            vec![q("sqrt(2)"), q("0"), q("0")],
        )
        .unwrap()
    }

    #[test]
    fn facet_order_is_binary_counting() {
        assert_eq!(sign_pattern(0, 2), [1, 1]);
        assert_eq!(sign_pattern(1, 2), [-1, 1]);
        assert_eq!(sign_pattern(2, 2), [1, -1]);
        assert_eq!(sign_pattern(3, 2), [-1, -1]);
        for k in 0..8 {
            assert_eq!(pattern_index(&sign_pattern(k, 3)), k);
        }
    }

    #[test]
    fn cross_hrep_rows() {
        let c = CrossPolytope::new(vec![q("sqrt(2)")]).unwrap();
        let h = c.to_hrep().unwrap();
        assert_eq!(
            h.matrix(),
            [vec![q("1/2*sqrt(2)")], vec![q("-1/2*sqrt(2)")]]
        );
        assert_eq!(h.rhs(), ints(&[1, 1]));

        let c = CrossPolytope::new(vec![q("sqrt(2)"), q("1 + sqrt(2)")]).unwrap();
        let h = c.to_hrep().unwrap();
        let (r1, r2) = (q("1/2*sqrt(2)"), q("-1 + sqrt(2)"));
        // the four sign combinations of (1/a1, 1/a2)
        assert_eq!(
            h.matrix(),
            [
                vec![r1.clone(), r2.clone()],
                vec![-&r1, r2.clone()],
                vec![r1.clone(), -&r2],
                vec![-&r1, -&r2],
            ]
        );

        let c3 = CrossPolytope::new(vec![q("1"), q("2"), q("3")]).unwrap();
        let h3 = c3.to_hrep().unwrap();
        assert_eq!(h3.num_constraints(), 8);
        for i in 0..8 {
            for j in 0..i {
                assert_ne!(h3.matrix()[i], h3.matrix()[j]);
            }
        }
    }

    #[test]
    fn cross_dimension_cap() {
        let c = CrossPolytope::new(vec![q("1"); 4]).unwrap();
        assert_eq!(
            c.to_hrep_with_cap(3),
            Err(Error::DimensionTooLarge { dim: 4, cap: 3 })
        );
    }

    #[test]
    fn rejects_nonpositive_axes() {
        assert_eq!(
            CrossPolytope::new(vec![q("1"), q("1 - sqrt(2)")]),
            Err(Error::InvalidAxis { index: 1 })
        );
    }

    #[test]
    fn decompose_one_dimension() {
        let c = CrossPolytope::new(vec![q("sqrt(2)")]).unwrap();
        let pieces = c.decompose(Ownership::HalfOpen);
        assert_eq!(pieces.len(), 2);
        assert_eq!(
            (pieces[0].signs(), pieces[0].open_flags()),
            (&[1i8][..], &[false][..])
        );
        assert_eq!(
            (pieces[1].signs(), pieces[1].open_flags()),
            (&[-1i8][..], &[true][..])
        );
        // [0, √2] and [-√2, 0)
        let right = pieces[0].hrep().unwrap();
        let left = pieces[1].hrep().unwrap();
        assert!(right.contains(&[q("0")]) && !left.contains(&[q("0")]));
        assert!(left.contains(&[q("-sqrt(2)")]) && !left.contains(&[q("-3/2")]));
        assert!(right.contains(&[q("sqrt(2)")]) && !right.contains(&[q("-1")]));
    }

    #[test]
    fn decompose_two_dimensions_matches_the_four_quadrants() {
        let c = CrossPolytope::new(vec![q("sqrt(2)"), q("1 + sqrt(2)")]).unwrap();
        let h = c.to_hrep().unwrap();
        for (k, piece) in c.decompose(Ownership::Closed).iter().enumerate() {
            assert_eq!(piece.hrep().unwrap().matrix()[0], h.matrix()[k]);
            assert!(piece.open_flags().iter().all(|&o| !o));
        }
    }

    #[test]
    fn dilating_the_triangle() {
        let t = DilationVector::new(vec![4, 1, 3]);
        let p = skew_triangle().dilate(&t).unwrap();
        assert_eq!(p.matrix(), skew_triangle().matrix());
        assert_eq!(p.rhs(), ints(&[4, 1, 3]));
        assert_eq!(
            skew_triangle().dilate(&DilationVector::new(vec![1, 2])),
            Err(Error::LengthMismatch {
                expected: 3,
                actual: 2
            })
        );
        // already-integral b is a fixed point
        let integral = p.dilate(&t).unwrap();
        assert_eq!(integral, p);
    }

    #[test]
    fn vertex_solving() {
        let v = vertex_solve(&[ints(&[1, 1]), ints(&[-1, 0])], &ints(&[4, 1])).unwrap();
        assert_eq!(v, ints(&[-1, 5]));
        let id = vertex_solve(
            &[ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])],
            &[q("sqrt(2)"), q("3"), q("-1/2")],
        )
        .unwrap();
        assert_eq!(id, [q("sqrt(2)"), q("3"), q("-1/2")]);
        assert_eq!(
            vertex_solve(&[ints(&[1, 1]), ints(&[2, 2])], &ints(&[1, 2])),
            Err(Error::SingularSystem)
        );
    }

    #[test]
    fn triangle_admissibility() {
        let tri = skew_triangle();
        assert!(tri.is_admissible(&DilationVector::new(vec![4, 1, 3])));
        assert!(!tri.is_admissible(&DilationVector::new(vec![-5, 1, 3])));
        assert!(!tri.is_admissible(&DilationVector::new(vec![0, 0, 0])));
        let unit = HPolytope::new(tri.matrix().to_vec(), ints(&[1, 0, 0])).unwrap();
        assert!(unit.is_admissible(&DilationVector::new(vec![1, 0, 0])));
        match tri
            .admissibility(&DilationVector::new(vec![-5, 1, 3]))
            .unwrap()
        {
            Admissibility::Inadmissible(why) => assert!(why.contains("row 0"), "{why}"),
            Admissibility::Admissible => panic!(),
        }
    }

    #[test]
    fn triangle_vertices_at_4_1_3() {
        let p = skew_triangle()
            .dilate(&DilationVector::new(vec![4, 1, 3]))
            .unwrap();
        assert_eq!(p.vertex(&[0, 1]).unwrap(), ints(&[-1, 5]));
        assert_eq!(p.vertex(&[1, 2]).unwrap(), ints(&[-1, -3]));
        assert_eq!(p.vertex(&[0, 2]).unwrap(), ints(&[7, -3]));
    }

    #[test]
    fn cross_admissibility_convention() {
        let c = CrossPolytope::new(vec![q("sqrt(2)"), q("1")]).unwrap();
        assert!(c.is_admissible(&DilationVector::new(vec![1, 2, 3, 1])));
        assert!(!c.is_admissible(&DilationVector::new(vec![1, 0, 3, 1])));
        assert!(!c.is_admissible(&DilationVector::new(vec![1, 1])));
    }
}
