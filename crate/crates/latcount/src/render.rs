//! JSON shapes shared by the commands.

use latcount_core::beck::{MultiPoly, QuasiPoly};
use latcount_core::ehrhart::EhrhartLikePoly;
use latcount_core::enumerate::CountReport;
use latcount_core::AlgebraicQuad;
use num_traits::{One, Signed};
use serde::Serialize;

#[derive(Serialize)]
pub struct Number {
    pub exact: String,
    pub decimal: String,
}

impl Number {
    pub fn new(x: &AlgebraicQuad, digits: usize) -> Self {
        Self {
            exact: x.to_string(),
            decimal: x.to_decimal(digits),
        }
    }
}

#[derive(Serialize)]
pub struct Coefficient {
    pub k: usize,
    pub exact: String,
    pub decimal: String,
}

pub fn coefficients(p: &EhrhartLikePoly, digits: usize) -> Vec<Coefficient> {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| Coefficient {
            k,
            exact: c.to_string(),
            decimal: c.to_decimal(digits),
        })
        .collect()
}

#[derive(Serialize)]
pub struct Count {
    pub closed: u64,
    pub interior: u64,
    pub boundary: u64,
    pub points_scanned: u64,
    pub elapsed_seconds: f64,
}

impl From<&CountReport> for Count {
    fn from(r: &CountReport) -> Self {
        Self {
            closed: r.closed,
            interior: r.interior,
            boundary: r.boundary,
            points_scanned: r.points_scanned,
            elapsed_seconds: r.elapsed.as_secs_f64(),
        }
    }
}

/// `1/2*t1^2 + t1*t2 - 3`, variables numbered from 1.
pub fn multipoly(p: &MultiPoly) -> String {
    if p.terms().is_empty() {
        return "0".into();
    }
    // graded, highest degree first, then t1 before t2 before …
    let mut terms: Vec<_> = p.terms().iter().collect();
    terms.sort_by(|(a, _), (b, _)| (b.iter().sum::<u32>(), b).cmp(&(a.iter().sum::<u32>(), a)));
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        out.push_str(match (i, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| {
                if k == 1 {
                    format!("t{}", j + 1)
                } else {
                    format!("t{}^{k}", j + 1)
                }
            })
            .collect();
        let one = mag.is_one();
        match (vars.is_empty(), one) {
            (true, _) => out.push_str(&mag.to_string()),
            (false, true) => out.push_str(&vars.join("*")),
            (false, false) => {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&vars.join("*"));
            }
        }
    }
    out
}

#[derive(Serialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

#[derive(Serialize)]
pub struct Class {
    pub residue: Vec<u64>,
    pub polynomial: String,
    pub terms: Vec<Term>,
}

#[derive(Serialize)]
pub struct Quasi {
    pub period: Vec<u64>,
    pub classes: Vec<Class>,
}

impl From<&QuasiPoly> for Quasi {
    fn from(q: &QuasiPoly) -> Self {
        Self {
            period: q.period().to_vec(),
            classes: q
                .classes()
                .iter()
                .map(|(r, p)| Class {
                    residue: r.clone(),
                    polynomial: multipoly(p),
                    terms: p
                        .terms()
                        .iter()
                        .map(|(e, c)| Term {
                            exponents: e.clone(),
                            coefficient: c.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
