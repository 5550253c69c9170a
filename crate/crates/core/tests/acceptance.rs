//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::Instant;

use latcount_core::beck::{self, MultiPoly};
use latcount_core::ehrhart::{self, fit_error_exponent, p_coeffs, p_coeffs_float, q_coeffs};
use latcount_core::enumerate::{
    count, count_box_scan, count_interval, count_interval_bracket, count_scalar_cross, CountOptions,
};
use latcount_core::polytope::{
    CrossPolytope, DilationVector, HPolytope, OrthantSimplex, Ownership,
};
use latcount_core::qfield::{rational, Rational};
use latcount_core::AlgebraicQuad;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn aq(s: &str) -> AlgebraicQuad {
    s.parse().unwrap()
}

fn ints(v: &[i64]) -> Vec<AlgebraicQuad> {
    v.iter().map(|&x| AlgebraicQuad::from_int(x)).collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(n: usize, title: &str, started: Instant, outcome: Outcome) -> bool {
    println!(
        "criterion {n} [{}] {title}: {} ({:.1}s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        started.elapsed().as_secs_f64()
    );
    outcome.pass
}

// ---------------------------------------------------------------------------
// 1. arithmetic soundness

const RADICANDS: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n: i64 = rng.gen_range(-1_000_000..=1_000_000);
    let d: i64 = rng.gen_range(1..=1_000_000);
    rational(n, d)
}

fn random_quad(rng: &mut ChaCha8Rng) -> AlgebraicQuad {
    let mut x = AlgebraicQuad::from_rational(random_rational(rng));
    for &m in &RADICANDS {
        if rng.gen_bool(0.4) {
            x += &AlgebraicQuad::term(random_rational(rng), m).unwrap();
        }
    }
    x
}

/// Like [`random_quad`] but over at most two radicands, which keeps the
/// products and inverses of the axiom checks small.
fn small_quad(rng: &mut ChaCha8Rng) -> AlgebraicQuad {
    let mut x = AlgebraicQuad::from_rational(random_rational(rng));
    for _ in 0..2 {
        let m = RADICANDS[rng.gen_range(0..RADICANDS.len())];
        x += &AlgebraicQuad::term(random_rational(rng), m).unwrap();
    }
    x
}

/// Values built to sit close to integers or to zero, where a careless
/// sign or floor routine goes wrong.
fn adversarial_quad(rng: &mut ChaCha8Rng) -> AlgebraicQuad {
    let m = RADICANDS[rng.gen_range(0..RADICANDS.len())];
    let root = AlgebraicQuad::sqrt(m).unwrap();
    match rng.gen_range(0..3) {
        // a + b√m with b√m just below or above an integer
        0 => {
            let b: i64 = rng.gen_range(1..1_000_000);
            let x = root.scale_int(b);
            let f = x.floor();
            let shift = if rng.gen_bool(0.5) { f } else { f + 1u32 };
            x - AlgebraicQuad::from_bigint(shift)
        }
        // (a + b√m)(a - b√m) is rational, possibly an integer
        1 => {
            let a = AlgebraicQuad::from_int(rng.gen_range(-1000..1000));
            let b = root.scale_int(rng.gen_range(-1000..1000));
            (&a + &b) * (&a - &b)
        }
        // a product of two random values, mixing radicands
        _ => random_quad(rng) * random_quad(rng),
    }
}

/// Interval enclosure of `x` in decimal fixed point with `digits` digits,
/// from first principles: each `√m` lies in `[s, s+1] / 10^digits` with
/// `s = ⌊√(m · 10^{2·digits})⌋`.
fn decimal_interval(x: &AlgebraicQuad, digits: u32) -> (Rational, Rational) {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scale2 = &scale * &scale;
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (m, c) in x.terms() {
        if m == 1 {
            lo += c;
            hi += c;
            continue;
        }
        let s = (BigInt::from(m) * &scale2).sqrt();
        let below = Rational::new(s.clone(), scale.clone());
        let above = Rational::new(s + 1, scale.clone());
        if c.is_positive() {
            lo += c * &below;
            hi += c * &above;
        } else {
            lo += c * &above;
            hi += c * &below;
        }
    }
    (lo, hi)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let total = 100_000;
    let mut agree = 0;
    let mut undecided = 0;
    for i in 0..total {
        let x = if i % 4 == 3 {
            adversarial_quad(&mut rng)
        } else {
            random_quad(&mut rng)
        };
        let (lo, hi) = decimal_interval(&x, 80);
        let sign_oracle = if lo == hi {
            Some(if lo.is_positive() {
                1
            } else if lo.is_negative() {
                -1
            } else {
                0
            })
        } else if lo.is_positive() {
            Some(1)
        } else if hi.is_negative() {
            Some(-1)
        } else {
            None
        };
        let floor_oracle = if lo.floor() == hi.floor() && (lo == hi || hi.floor() != hi) {
            Some(lo.floor().to_integer())
        } else {
            None
        };
        match (sign_oracle, floor_oracle) {
            (Some(s), Some(f)) => {
                if x.sign() == s && x.floor() == f {
                    agree += 1;
                }
            }
            _ => undecided += 1,
        }
    }

    // field axioms on random triples
    let mut axioms_ok = true;
    for _ in 0..2_000 {
        let a = small_quad(&mut rng);
        let b = small_quad(&mut rng);
        let c = small_quad(&mut rng);
        axioms_ok &= &(&a + &b) + &c == &a + &(&b + &c);
        axioms_ok &= &(&a * &b) * &c == &a * &(&b * &c);
        axioms_ok &= &a * &(&b + &c) == &(&a * &b) + &(&a * &c);
        axioms_ok &= &a * &b == &b * &a;
        axioms_ok &= (&a + &(-&a)).is_zero();
        if !a.is_zero() {
            axioms_ok &= (&a * &a.inv().unwrap()) == AlgebraicQuad::one();
        }
    }
    Outcome {
        pass: agree == total && axioms_ok,
        detail: format!(
            "{agree}/{total} sign+floor agree with 80-digit intervals ({undecided} undecided); field axioms {}",
            if axioms_ok { "hold" } else { "VIOLATED" }
        ),
    }
}

// ---------------------------------------------------------------------------
// 2. coefficient exactness

fn random_axis(rng: &mut ChaCha8Rng) -> AlgebraicQuad {
    // a + b√m in [1/2, 4]
    loop {
        let m = RADICANDS[rng.gen_range(0..RADICANDS.len())];
        let a = rational(rng.gen_range(-40..=40), rng.gen_range(1..=10));
        let b = rational(rng.gen_range(-20..=20), rng.gen_range(1..=10));
        let x = AlgebraicQuad::from_rational(a) + AlgebraicQuad::term(b, m).unwrap();
        if x >= aq("1/2") && x <= aq("4") {
            return x;
        }
    }
}

fn criterion_2() -> Outcome {
    let p = p_coeffs(&[aq("sqrt(2)"), aq("1 + sqrt(2)")]).unwrap();
    let exact_ok = p.coeffs()
        == [
            aq("1 - 1/6*sqrt(2)"),
            AlgebraicQuad::zero(),
            aq("4 + 2*sqrt(2)"),
        ];

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    let mut parity_ok = true;
    for v in 0..50 {
        let d = 1 + v % 6;
        let axes: Vec<AlgebraicQuad> = (0..d).map(|_| random_axis(&mut rng)).collect();
        let exact = p_coeffs(&axes).unwrap();
        parity_ok &= exact.has_parity();
        let float =
            p_coeffs_float(&axes.iter().map(AlgebraicQuad::to_f64).collect::<Vec<_>>()).unwrap();
        for (k, c) in exact.coeffs().iter().enumerate() {
            let e = c.to_f64();
            let f = float[k];
            let err = if e == 0.0 {
                f.re.abs()
            } else {
                (f.re - e).abs() / e.abs()
            };
            worst = worst.max(err);
            worst_imag = worst_imag.max(f.im.abs());
        }
    }
    Outcome {
        pass: exact_ok && worst <= 1e-12 && worst_imag <= 1e-12 && parity_ok,
        detail: format!(
            "d=2 exact {}; worst relative exact/float gap {worst:.2e}, worst |Im| {worst_imag:.2e}; parity {}",
            if exact_ok { "matches" } else { "MISMATCH" },
            if parity_ok { "holds" } else { "BROKEN" }
        ),
    }
}

// ---------------------------------------------------------------------------
// 3. oracle identities

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = CountOptions::default();
    let mut decomposition_checks = 0;
    let mut scan_checks = 0;
    let mut failures = Vec::new();
    for v in 0..20 {
        let d = 1 + v % 3;
        let axes: Vec<AlgebraicQuad> = (0..d).map(|_| random_axis(&mut rng)).collect();
        let cross = CrossPolytope::new(axes.clone()).unwrap();
        let pieces = cross.decompose(Ownership::HalfOpen);
        let hrep = cross.to_hrep().unwrap();
        for t in 1..=20i64 {
            let whole = count_scalar_cross(&cross, t).unwrap().closed;
            let sum: u64 = pieces
                .iter()
                .map(|s| count(&s.dilated(t).unwrap()).unwrap().closed)
                .sum();
            decomposition_checks += 1;
            if sum != whole {
                failures.push(format!("decomposition d={d} t={t}: {sum} != {whole}"));
            }
            // the naive scan grows like t^3 for d = 3, so it is sampled there
            if d < 3 || t <= 8 || t == 12 {
                let dil = hrep
                    .dilate(&DilationVector::uniform(hrep.num_constraints(), t))
                    .unwrap();
                let fast = count(&dil).unwrap();
                let slow = count_box_scan(&dil, &opts).unwrap();
                scan_checks += 1;
                if (fast.closed, fast.interior, fast.boundary)
                    != (slow.closed, slow.interior, slow.boundary)
                {
                    failures.push(format!("scan d={d} t={t}: {fast:?} vs {slow:?}"));
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{decomposition_checks} decomposition sums, {scan_checks} recursive/box-scan comparisons, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    }
}

// ---------------------------------------------------------------------------
// 4 - 6. error envelopes

fn abs_f64(x: &AlgebraicQuad) -> f64 {
    x.abs().to_f64()
}

fn criterion_4() -> Outcome {
    let axes = [aq("sqrt(2)"), aq("1 + sqrt(2)")];
    let cross = CrossPolytope::new(axes.to_vec()).unwrap();
    let p = p_coeffs(&axes).unwrap();
    let mut rows = Vec::new();
    for t in 1..=500i64 {
        let n = count_scalar_cross(&cross, t).unwrap().closed;
        let err = abs_f64(&(AlgebraicQuad::from_int(n as i64) - p.eval_int(t)));
        rows.push((t as f64, err));
    }
    let exponent = fit_error_exponent(&rows).unwrap();
    let tail: Vec<f64> = rows
        .iter()
        .filter(|(t, _)| *t >= 50.0)
        .map(|(t, e)| e / t)
        .collect();
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    Outcome {
        pass: exponent <= 0.5 && mean < 0.05,
        detail: format!("envelope exponent {exponent:.3} (limit 0.5), mean |error|/t over t in [50, 500] = {mean:.4} (limit 0.05)"),
    }
}

fn criterion_5() -> Outcome {
    let axes = [aq("sqrt(2)"), aq("sqrt(3)"), aq("sqrt(5)")];
    let cross = CrossPolytope::new(axes.to_vec()).unwrap();
    let p = p_coeffs(&axes).unwrap();
    let mut ts: Vec<i64> = (1..=50).collect();
    for k in 1..=12 {
        let t = (50.0 * (2.0f64).powf(k as f64 / 12.0)).round() as i64;
        if t > *ts.last().unwrap() {
            ts.push(t);
        }
    }
    let mut rows = Vec::new();
    for &t in &ts {
        let n = count_scalar_cross(&cross, t).unwrap().closed;
        rows.push((
            t as f64,
            abs_f64(&(AlgebraicQuad::from_int(n as i64) - p.eval_int(t))),
        ));
    }
    let exponent = fit_error_exponent(&rows).unwrap();
    Outcome {
        pass: exponent <= 0.87,
        detail: format!(
            "envelope exponent {exponent:.3} over {} values of t up to {} (limit 0.87, asymptotic target {:.3})",
            ts.len(),
            ts.last().unwrap(),
            ehrhart::target_error_exponent(3)
        ),
    }
}

fn criterion_6() -> Outcome {
    let axes = vec![aq("sqrt(2)"), aq("1 + sqrt(2)")];
    let simplex = OrthantSimplex::positive(axes.clone()).unwrap();
    let q = q_coeffs(&axes).unwrap();
    let q_interior = q.interior_transform(2);
    let mut closed_rows = Vec::new();
    let mut interior_rows = Vec::new();
    for t in 1..=500i64 {
        let r = count(&simplex.dilated(t).unwrap()).unwrap();
        closed_rows.push((
            t as f64,
            abs_f64(&(AlgebraicQuad::from_int(r.closed as i64) - q.eval_int(t))),
        ));
        interior_rows.push((
            t as f64,
            abs_f64(&(AlgebraicQuad::from_int(r.interior as i64) - q_interior.eval_int(t))),
        ));
    }
    let e_closed = fit_error_exponent(&closed_rows).unwrap();
    let e_interior = fit_error_exponent(&interior_rows).unwrap();
    Outcome {
        pass: e_closed <= 0.5 && e_interior <= 0.5,
        detail: format!("closed vs q(t): exponent {e_closed:.3}; interior vs q(-t): exponent {e_interior:.3} (limit 0.5)"),
    }
}

// ---------------------------------------------------------------------------
// 7. vector dilations of rational simplices

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let triangle = HPolytope::new(
        vec![ints(&[1, 1]), ints(&[-1, 0]), ints(&[0, -1])],
        ints(&[1, 0, 0]),
    )
    .unwrap();
    let (qi, qj) = beck::reconstruct(&triangle, &DilationVector::new(vec![1, 0, 0])).unwrap();
    let j_expected = MultiPoly::power_of_sum(3, 1, 1, 1).mul(&MultiPoly::power_of_sum(3, 1, 2, 2));
    let i_expected =
        MultiPoly::power_of_sum(3, 1, -1, 1).mul(&MultiPoly::power_of_sum(3, 1, -2, 2));
    let exact = qj.period() == [1, 1, 1]
        && qj.classes()[&vec![0, 0, 0]] == j_expected
        && qi.classes()[&vec![0, 0, 0]] == i_expected;
    pass &= exact;
    notes.push(format!(
        "unimodular triangle {}",
        if exact { "exact" } else { "MISMATCH" }
    ));

    let rec = beck::check_reciprocity(&qi, &qj, &[(-10, 10); 3], Some(&triangle)).unwrap();
    pass &= rec.passed();
    notes.push(format!(
        "{} reciprocity violations over {} points, {} enumeration mismatches over {} admissible points",
        rec.violations.len(),
        rec.points_checked,
        rec.enumeration_mismatches.len(),
        rec.enumeration_checked
    ));

    // -x <= t1, -y <= t2, x + 2y <= t3
    let half = HPolytope::new(
        vec![ints(&[-1, 0]), ints(&[0, -1]), ints(&[1, 2])],
        ints(&[0, 0, 1]),
    )
    .unwrap();
    let base = DilationVector::new(vec![1, 1, 1]);
    let (hi, hj) = beck::reconstruct(&half, &base).unwrap();
    // held out: at least one coordinate below the base, so off every training grid
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut mismatches = 0;
    while checked < 100 {
        let t: Vec<i64> = (0..3).map(|_| rng.gen_range(-10..=10)).collect();
        if t.iter().zip(base.as_slice()).all(|(a, b)| a >= b) {
            continue;
        }
        let tv = DilationVector::new(t.clone());
        if !half.is_admissible(&tv) {
            continue;
        }
        let (i, j) = beck::count_ij(&half, &tv).unwrap();
        checked += 1;
        if hj.eval(&t) != Rational::from_integer(j.into())
            || hi.eval(&t) != Rational::from_integer(i.into())
        {
            mismatches += 1;
        }
    }
    let half_rec = beck::check_reciprocity(&hi, &hj, &[(-6, 6); 3], None).unwrap();
    pass &= mismatches == 0 && half_rec.violations.is_empty();
    notes.push(format!(
        "denominator-2 simplex period {:?}: {mismatches} mismatches on {checked} held-out points, {} reciprocity violations",
        hj.period(),
        half_rec.violations.len()
    ));
    Outcome {
        pass,
        detail: notes.join("; "),
    }
}

// ---------------------------------------------------------------------------
// 8. one dimension

fn criterion_8() -> Outcome {
    let root2 = aq("sqrt(2)");
    let cross = CrossPolytope::new(vec![root2.clone()]).unwrap();
    let at_ten = count_scalar_cross(&cross, 10).unwrap().closed;
    let q = q_coeffs(std::slice::from_ref(&root2)).unwrap();
    let q_ok = q.coeffs() == [aq("1/2"), root2.clone()];
    let mut discrepancies = Vec::new();
    for t in 1..=100i64 {
        let hi = root2.scale_int(t);
        let lo = -&hi;
        let exact = count_interval(&lo, &hi);
        let bracket = count_interval_bracket(&lo, &hi);
        if exact != bracket {
            discrepancies.push((t, exact, bracket));
        }
    }
    if let Some(&(t, e, b)) = discrepancies.first() {
        println!("  1-d bracket formula differs at {} of 100 values of t (first: t={t}, count {e}, bracket {b})", discrepancies.len());
    }
    Outcome {
        pass: at_ten == 29 && q_ok,
        detail: format!(
            "count of [-10√2, 10√2] = {at_ten}; q = {} ({}); bracket formula differs on {}/100 values (logged, not asserted)",
            q.coeffs().iter().rev().map(|c| c.to_string()).collect::<Vec<_>>().join(" t + "),
            if q_ok { "matches √2 t + 1/2" } else { "MISMATCH" },
            discrepancies.len()
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("arithmetic soundness", criterion_1),
        ("coefficient exactness", criterion_2),
        ("oracle identities", criterion_3),
        ("two-dimensional cross-polytope envelope", criterion_4),
        ("three-dimensional cross-polytope envelope", criterion_5),
        ("simplex and reciprocity envelope", criterion_6),
        ("rational simplex quasipolynomials", criterion_7),
        ("one-dimensional closed forms", criterion_8),
    ];
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut all = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        if filter.is_some_and(|f| f != i + 1) {
            continue;
        }
        let started = Instant::now();
        all &= report(i + 1, title, started, run());
    }
    if !all {
        std::process::exit(1);
    }
}
