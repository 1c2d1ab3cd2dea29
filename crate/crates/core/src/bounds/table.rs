//! Scalar curvature and injectivity radius of classical examples, stored as
//! expressions in the dimension `n`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use super::scaled_inj;

/// Small expression tree over the dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    N,
    Pi,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, n: u32) -> f64 {
        use Expr::*;
        match self {
            Int(k) => *k as f64,
            N => f64::from(n),
            Pi => PI,
            Add(a, b) => a.eval(n) + b.eval(n),
            Sub(a, b) => a.eval(n) - b.eval(n),
            Mul(a, b) => a.eval(n) * b.eval(n),
            Div(a, b) => a.eval(n) / b.eval(n),
            Sqrt(a) => a.eval(n).sqrt(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Int(k) => write!(f, "{k}"),
            N => write!(f, "n"),
            Pi => write!(f, "pi"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "{a}*{b}"),
            Div(a, b) => write!(f, "{a}/{b}"),
            Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

fn int(k: i64) -> Expr {
    Expr::Int(k)
}
fn n() -> Expr {
    Expr::N
}
fn pi() -> Expr {
    Expr::Pi
}
fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}
fn sub(a: Expr, b: Expr) -> Expr {
    Expr::Sub(Box::new(a), Box::new(b))
}
fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}
fn div(a: Expr, b: Expr) -> Expr {
    Expr::Div(Box::new(a), Box::new(b))
}
fn sqrt(a: Expr) -> Expr {
    Expr::Sqrt(Box::new(a))
}
/// `n + k`
fn n_plus(k: i64) -> Expr {
    if k >= 0 {
        add(n(), int(k))
    } else {
        sub(n(), int(-k))
    }
}

/// Irreducible factor of a product manifold with its standard metric.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// Unit round sphere of the given dimension.
    Sphere(Expr),
    /// Flat torus of the given dimension.
    Torus(Expr),
    /// Quotient of the unit sphere of the given dimension.
    RealProjective(Expr),
    /// Fubini–Study metric, sectional curvatures in `[1, 4]`, complex dimension given.
    ComplexProjective(Expr),
    /// Quaternionic dimension given; sectional curvatures in `[1, 4]`.
    QuaternionicProjective(Expr),
    CayleyPlane,
    /// `count` copies of a factor.
    Power(Box<Factor>, Expr),
}

impl Factor {
    fn scal(&self, n: u32) -> f64 {
        match self {
            Factor::Sphere(k) | Factor::RealProjective(k) => {
                let k = k.eval(n);
                k * (k - 1.0)
            }
            Factor::Torus(_) => 0.0,
            Factor::ComplexProjective(m) => {
                let m = m.eval(n);
                4.0 * m * (m + 1.0)
            }
            Factor::QuaternionicProjective(m) => {
                let m = m.eval(n);
                16.0 * m * (m + 2.0)
            }
            Factor::CayleyPlane => 576.0,
            Factor::Power(f, count) => count.eval(n) * f.scal(n),
        }
    }
}

/// One line of the catalogue: the tabulated expressions plus the factor
/// decomposition used to recompute the curvature.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub name: &'static str,
    pub constraint: &'static str,
    pub admissible: fn(u32) -> bool,
    pub scal: Expr,
    pub inj: Expr,
    pub scaled: Expr,
    pub factors: Vec<Factor>,
}

pub fn table1_rows() -> Vec<TableRow> {
    let half_pi = || div(pi(), int(2));
    vec![
        TableRow {
            name: "S^n",
            constraint: "n >= 2",
            admissible: |n| n >= 2,
            scal: mul(n(), n_plus(-1)),
            inj: pi(),
            scaled: pi(),
            factors: vec![Factor::Sphere(n())],
        },
        TableRow {
            name: "S^(n-1) x T^1",
            constraint: "n >= 3",
            admissible: |n| n >= 3,
            scal: mul(n_plus(-1), n_plus(-2)),
            inj: pi(),
            scaled: mul(sqrt(div(n_plus(-2), n())), pi()),
            factors: vec![Factor::Sphere(n_plus(-1)), Factor::Torus(int(1))],
        },
        TableRow {
            name: "S^(n-2) x S^2",
            constraint: "n >= 4",
            admissible: |n| n >= 4,
            scal: add(sub(mul(n(), n()), mul(int(5), n())), int(10)),
            inj: pi(),
            scaled: mul(
                sqrt(div(
                    add(sub(mul(n(), n()), mul(int(5), n())), int(10)),
                    mul(n(), n_plus(-1)),
                )),
                pi(),
            ),
            factors: vec![Factor::Sphere(n_plus(-2)), Factor::Sphere(int(2))],
        },
        TableRow {
            name: "RP^n",
            constraint: "n >= 2",
            admissible: |n| n >= 2,
            scal: mul(n(), n_plus(-1)),
            inj: half_pi(),
            scaled: half_pi(),
            factors: vec![Factor::RealProjective(n())],
        },
        TableRow {
            name: "S^2 x T^(n-2)",
            constraint: "n >= 3",
            admissible: |n| n >= 3,
            scal: int(2),
            inj: pi(),
            scaled: mul(sqrt(div(int(2), mul(n(), n_plus(-1)))), pi()),
            factors: vec![Factor::Sphere(int(2)), Factor::Torus(n_plus(-2))],
        },
        TableRow {
            name: "(S^2)^(n/2)",
            constraint: "n even",
            admissible: |n| n % 2 == 0,
            scal: n(),
            inj: pi(),
            scaled: div(pi(), sqrt(n_plus(-1))),
            factors: vec![Factor::Power(Box::new(Factor::Sphere(int(2))), div(n(), int(2)))],
        },
        TableRow {
            name: "CP^(n/2)",
            constraint: "n even",
            admissible: |n| n % 2 == 0,
            scal: mul(n(), n_plus(2)),
            inj: half_pi(),
            scaled: mul(sqrt(div(n_plus(2), n_plus(-1))), half_pi()),
            factors: vec![Factor::ComplexProjective(div(n(), int(2)))],
        },
        TableRow {
            name: "HP^(n/4)",
            constraint: "n = 0 mod 4",
            admissible: |n| n % 4 == 0,
            scal: mul(n(), n_plus(8)),
            inj: half_pi(),
            scaled: mul(sqrt(div(n_plus(8), n_plus(-1))), half_pi()),
            factors: vec![Factor::QuaternionicProjective(div(n(), int(4)))],
        },
        TableRow {
            name: "OP^2",
            constraint: "n = 16",
            admissible: |n| n == 16,
            scal: int(576),
            inj: half_pi(),
            scaled: mul(sqrt(div(int(12), int(5))), half_pi()),
            factors: vec![Factor::CayleyPlane],
        },
    ]
}

/// A catalogue row instantiated at a concrete dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRecord {
    pub manifold_name: String,
    pub dimension_constraint: String,
    pub n: u32,
    pub scal_expr: String,
    pub inj_expr: String,
    pub scaled_expr: String,
    /// Tabulated scalar curvature.
    pub scal: f64,
    pub inj: f64,
    /// Tabulated rescaled injectivity radius.
    pub scaled_printed: f64,
    /// `√(scal/(n(n−1))) · inj` from the first two columns.
    pub scaled_inj: f64,
    /// Sum of the scalar curvatures of the factors.
    pub scal_recomputed: f64,
    pub scaled_consistent: bool,
    pub scal_consistent: bool,
    pub consistent: bool,
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

/// The rows of the catalogue that exist in dimension `n`.
pub fn table1(n: u32) -> Vec<BoundRecord> {
    table1_rows()
        .into_iter()
        .filter(|row| (row.admissible)(n))
        .map(|row| {
            let scal = row.scal.eval(n);
            let inj = row.inj.eval(n);
            let scaled_printed = row.scaled.eval(n);
            let recomputed_scaled = scaled_inj(scal, n, inj).unwrap_or(f64::NAN);
            let scal_recomputed: f64 = row.factors.iter().map(|f| f.scal(n)).sum();
            let scaled_consistent = close(scaled_printed, recomputed_scaled);
            let scal_consistent = close(scal, scal_recomputed);
            BoundRecord {
                manifold_name: row.name.to_string(),
                dimension_constraint: row.constraint.to_string(),
                n,
                scal_expr: row.scal.to_string(),
                inj_expr: row.inj.to_string(),
                scaled_expr: row.scaled.to_string(),
                scal,
                inj,
                scaled_printed,
                scaled_inj: recomputed_scaled,
                scal_recomputed,
                scaled_consistent,
                scal_consistent,
                consistent: scaled_consistent && scal_consistent,
            }
        })
        .collect()
}
