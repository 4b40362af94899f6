//! Fourier-Motzkin elimination over named real unknowns.

use std::collections::HashMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::support_over;
use super::vertex::{enumerate_vertices, is_feasible};
use crate::error::{Error, Result};

/// Coefficients below this are treated as zero.
const COEFF_EPS: f64 = 1e-12;

/// Half-width of the box used to detect unbounded directions.
const BOX: f64 = 1e9;

/// `Σ coeffs[i]·x[i] ≤ rhs`; an infinite `rhs` is a vacuous row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub coeffs: Vec<f64>,
    #[serde(serialize_with = "ser_rhs", deserialize_with = "de_rhs")]
    pub rhs: f64,
}

fn ser_rhs<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_rhs<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Rhs {
        Num(f64),
        Text(String),
    }
    match Rhs::deserialize(d)? {
        Rhs::Num(x) => Ok(x),
        Rhs::Text(t) if t == "inf" || t == "+inf" => Ok(f64::INFINITY),
        Rhs::Text(t) => Err(D::Error::custom(format!("rhs `{t}` is neither a number nor \"inf\""))),
    }
}

impl Inequality {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, rhs }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= COEFF_EPS)
    }

    /// A coefficient-free row that no point satisfies.
    fn is_contradiction(&self) -> bool {
        self.is_trivial() && self.rhs < -1e-9 * (1.0 + self.rhs.abs())
    }
}

/// A system of linear inequalities over named unknowns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub variables: Vec<String>,
    pub inequalities: Vec<Inequality>,
}

impl LinearSystem {
    pub fn new(variables: &[&str], inequalities: Vec<Inequality>) -> Result<Self> {
        let sys = Self {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            inequalities,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, n) in self.variables.iter().enumerate() {
            if self.variables[..i].contains(n) {
                return Err(Error::ShapeMismatch(format!("duplicate variable `{n}`")));
            }
        }
        for row in &self.inequalities {
            if row.coeffs.len() != self.variables.len() {
                return Err(Error::ShapeMismatch(format!(
                    "row has {} coefficients for {} variables",
                    row.coeffs.len(),
                    self.variables.len()
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || row.rhs.is_nan() || row.rhs == f64::NEG_INFINITY {
                return Err(Error::InvalidParameter("non-finite coefficient or rhs".into()));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sys: Self = serde_json::from_str(text)?;
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Rows that constrain something (finite rhs, not a tautology).
    fn active_rows(&self) -> Vec<(Vec<f64>, f64)> {
        self.inequalities
            .iter()
            .filter(|r| r.rhs.is_finite())
            .map(|r| (r.coeffs.clone(), r.rhs))
            .collect()
    }

    pub fn is_feasible_point(&self, x: &[f64], tol: f64) -> bool {
        self.inequalities
            .iter()
            .all(|r| r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= r.rhs + tol)
    }

    fn boxed_vertices(&self, half_width: f64) -> Vec<Vec<f64>> {
        let n = self.variables.len();
        let mut rows = self.active_rows();
        for i in 0..n {
            let mut a = vec![0.0; n];
            a[i] = 1.0;
            rows.push((a.clone(), half_width));
            a[i] = -1.0;
            rows.push((a, half_width));
        }
        enumerate_vertices(&rows, n)
    }

    /// `max dir·x` over the feasible set: `+∞` when unbounded along `dir`,
    /// `−∞` when infeasible. Meant for a handful of variables.
    pub fn support(&self, dir: &[f64]) -> Result<f64> {
        if dir.len() != self.variables.len() {
            return Err(Error::InvalidDirection(format!(
                "direction has {} components for {} variables",
                dir.len(),
                self.variables.len()
            )));
        }
        Ok(self.supports(&[dir.to_vec()])[0])
    }

    /// Supports along several directions sharing one vertex enumeration.
    pub fn supports(&self, dirs: &[Vec<f64>]) -> Vec<f64> {
        if self.inequalities.iter().any(Inequality::is_contradiction) {
            return vec![f64::NEG_INFINITY; dirs.len()];
        }
        let near = self.boxed_vertices(BOX);
        if near.is_empty() {
            return vec![f64::NEG_INFINITY; dirs.len()];
        }
        let far = self.boxed_vertices(2.0 * BOX);
        dirs.iter()
            .map(|d| {
                let s = support_over(&near, d);
                let t = support_over(&far, d);
                if t > s + 1e-6 * (1.0 + s.abs()) {
                    f64::INFINITY
                } else {
                    s
                }
            })
            .collect()
    }

    /// Any feasible point, if one exists.
    pub fn feasible_point(&self) -> Option<Vec<f64>> {
        let rows = self.active_rows();
        self.boxed_vertices(BOX).into_iter().find(|x| is_feasible(&rows, x))
    }
}

/// Key for spotting rows that are positive multiples of each other.
fn direction_key(coeffs: &[f64]) -> Option<(Vec<i64>, f64)> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale <= COEFF_EPS {
        return None;
    }
    Some((coeffs.iter().map(|c| (c / scale * 1e9).round() as i64).collect(), scale))
}

/// Drops tautologies and keeps only the tightest of proportional rows.
fn prune(rows: Vec<Inequality>) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = Vec::new();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut contradiction = false;
    for mut row in rows {
        for c in row.coeffs.iter_mut() {
            if c.abs() <= COEFF_EPS {
                *c = 0.0;
            }
        }
        if row.rhs == f64::INFINITY {
            continue;
        }
        match direction_key(&row.coeffs) {
            None => {
                if row.is_contradiction() && !contradiction {
                    contradiction = true;
                    out.push(row);
                }
            }
            Some((key, scale)) => {
                let normalized = Inequality::new(row.coeffs.iter().map(|c| c / scale).collect(), row.rhs / scale);
                match seen.get(&key) {
                    Some(&i) => {
                        if normalized.rhs < out[i].rhs {
                            out[i] = normalized;
                        }
                    }
                    None => {
                        seen.insert(key, out.len());
                        out.push(normalized);
                    }
                }
            }
        }
    }
    out
}

/// Projects out `var`: every row where it has a positive coefficient is
/// combined with every row where it has a negative one; rows without it are
/// kept as they are.
pub fn fm_eliminate(sys: &LinearSystem, var: &str) -> Result<LinearSystem> {
    let k = sys.index_of(var)?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut rows = Vec::new();
    for row in &sys.inequalities {
        if row.rhs == f64::INFINITY {
            continue;
        }
        let c = row.coeffs[k];
        if c > COEFF_EPS {
            pos.push(row);
        } else if c < -COEFF_EPS {
            neg.push(row);
        } else {
            let mut coeffs = row.coeffs.clone();
            coeffs.remove(k);
            rows.push(Inequality::new(coeffs, row.rhs));
        }
    }
    for p in &pos {
        for n in &neg {
            let (a, b) = (-n.coeffs[k], p.coeffs[k]);
            let coeffs: Vec<f64> = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, (x, y))| a * x + b * y)
                .collect();
            rows.push(Inequality::new(coeffs, a * p.rhs + b * n.rhs));
        }
    }
    let variables: Vec<&str> = sys
        .variables
        .iter()
        .filter(|n| *n != var)
        .map(String::as_str)
        .collect();
    LinearSystem::new(&variables, prune(rows))
}

/// Eliminates `vars`, at each step choosing the variable whose elimination
/// creates the fewest new rows.
pub fn fm_eliminate_all(sys: &LinearSystem, vars: &[&str]) -> Result<LinearSystem> {
    for v in vars {
        sys.index_of(v)?;
    }
    let mut current = LinearSystem { variables: sys.variables.clone(), inequalities: prune(sys.inequalities.clone()) };
    let mut left: Vec<&str> = vars.to_vec();
    while !left.is_empty() {
        let cost = |name: &str| -> i64 {
            let k = current.index_of(name).expect("present");
            let p = current.inequalities.iter().filter(|r| r.coeffs[k] > COEFF_EPS).count() as i64;
            let n = current.inequalities.iter().filter(|r| r.coeffs[k] < -COEFF_EPS).count() as i64;
            p * n - (p + n)
        };
        let (i, _) = left
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| cost(v))
            .expect("nonempty");
        let v = left.remove(i);
        current = fm_eliminate(&current, v)?;
    }
    Ok(current)
}
