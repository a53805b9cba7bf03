use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use super::inner::{inner_max_log, jensen_mean};
use super::poly::LaurentPoly;
use super::quad::{adaptive_gk, QuadratureResult};
use crate::error::MahlerError;

/// Default cap on integrand evaluations summed over all nesting levels.
pub const DEFAULT_MAX_EVALS: usize = 40_000_000;

const INITIAL_PANELS: usize = 16;

/// How the torus integral is split after Jensen's formula.
#[derive(Clone, Debug)]
struct Reduction {
    /// Variable removed by Jensen's formula.
    jensen: usize,
    /// Variable integrated in closed form (degree-1 case only).
    closed: Option<usize>,
    /// Remaining variables, integrated numerically.
    outer: Vec<usize>,
    terms: Vec<([i32; 4], i64)>,
    deg_jensen: usize,
    deg_closed: usize,
}

impl Reduction {
    fn new(p: &LaurentPoly) -> Result<Self, MahlerError> {
        let vars = p.variables();
        let degree = |i: usize| p.degree_range(i).1;
        let jensen = vars
            .iter()
            .rev()
            .copied()
            .filter(|&i| degree(i) <= 2)
            .min_by_key(|&i| degree(i))
            .ok_or_else(|| {
                MahlerError::JensenDegree(vars.iter().map(|&i| degree(i)).min().unwrap_or(0))
            })?;
        let deg_jensen = degree(jensen) as usize;
        let rest: Vec<usize> = vars.iter().copied().filter(|&i| i != jensen).collect();
        let (closed, outer) = if deg_jensen == 1 && !rest.is_empty() {
            let (last, front) = rest.split_last().expect("non-empty");
            (Some(*last), front.to_vec())
        } else {
            (None, rest)
        };
        Ok(Reduction {
            jensen,
            closed,
            outer,
            terms: p.terms.iter().map(|(e, c)| (*e, *c)).collect(),
            deg_jensen,
            deg_closed: closed.map(|u| degree(u) as usize).unwrap_or(0),
        })
    }

    /// Mean over the Jensen and closed-form variables at outer angles `theta`.
    fn integrand(&self, theta: &[f64; 4]) -> f64 {
        let zero = Complex64::new(0.0, 0.0);
        let mut table = vec![vec![zero; self.deg_closed + 1]; self.deg_jensen + 1];
        for (e, c) in &self.terms {
            let phase: f64 = self.outer.iter().map(|&j| e[j] as f64 * theta[j]).sum();
            let k = e[self.jensen] as usize;
            let j = self.closed.map(|u| e[u] as usize).unwrap_or(0);
            table[k][j] += Complex64::from_polar(*c as f64, phase);
        }
        match (self.deg_jensen, self.closed) {
            (1, Some(_)) => inner_max_log(&table[0], &table[1]),
            (1, None) => table[0][0].norm().ln().max(table[1][0].norm().ln()),
            _ => jensen_mean(&table.iter().map(|row| row[0]).collect::<Vec<_>>()),
        }
    }
}

struct Nested<'a> {
    red: &'a Reduction,
    evals: AtomicUsize,
    max_evals: usize,
}

impl Nested<'_> {
    /// Mean over outer variables `level..`, with the first ones fixed in `theta`.
    /// The outermost variable runs over `[0, π]` (conjugation symmetry of a
    /// real polynomial), the others over `[-π, π]`.
    fn mean(
        &self,
        level: usize,
        theta: [f64; 4],
        tol: f64,
    ) -> Result<QuadratureResult, QuadratureResult> {
        let dims = self.red.outer.len();
        if level == dims {
            self.evals.fetch_add(1, Ordering::Relaxed);
            return Ok(QuadratureResult {
                value: self.red.integrand(&theta),
                error_estimate: 0.0,
                evaluations: 1,
            });
        }
        let var = self.red.outer[level];
        let (lo, hi) = if level == 0 { (0.0, PI) } else { (-PI, PI) };
        let len = hi - lo;
        // Half the budget to this level, half to the levels below.
        let (own, below) = if level + 1 == dims {
            (tol, 0.0)
        } else {
            (0.5 * tol, 0.5 * tol)
        };
        let f = |x: f64| {
            let mut th = theta;
            th[var] = x;
            match self.mean(level + 1, th, below) {
                Ok(r) | Err(r) => r.value,
            }
        };
        let remaining = self
            .max_evals
            .saturating_sub(self.evals.load(Ordering::Relaxed));
        let budget = if level == 0 {
            self.max_evals
        } else {
            remaining.min(self.max_evals / 8).max(1000)
        };
        let res = adaptive_gk(f, lo, hi, INITIAL_PANELS, own * len, budget, level == 0);
        let scale = |r: QuadratureResult| QuadratureResult {
            value: r.value / len,
            error_estimate: r.error_estimate / len + below,
            evaluations: r.evaluations,
        };
        res.map(scale).map_err(scale)
    }
}

/// `m(P)`, the mean of `log|P|` over the unit torus, to absolute accuracy
/// `target` (estimated).
pub fn mahler_measure(p: &LaurentPoly, target: f64) -> Result<QuadratureResult, MahlerError> {
    mahler_measure_with_budget(p, target, DEFAULT_MAX_EVALS)
}

pub fn mahler_measure_with_budget(
    p: &LaurentPoly,
    target: f64,
    max_evals: usize,
) -> Result<QuadratureResult, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let p = p.normalized();
    let vars = p.variables();
    if vars.len() > 4 {
        return Err(MahlerError::TooManyVariables(vars.len()));
    }
    let exact = |value: f64| QuadratureResult {
        value,
        error_estimate: 0.0,
        evaluations: 0,
    };
    match vars.len() {
        0 => {
            return Ok(exact(
                (p.terms.values().next().copied().unwrap_or(0) as f64)
                    .abs()
                    .ln(),
            ))
        }
        1 => {
            let v = vars[0];
            let deg = p.degree_range(v).1 as usize;
            let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
            for (e, k) in &p.terms {
                c[e[v] as usize] += *k as f64;
            }
            return Ok(exact(jensen_mean(&c)));
        }
        _ => {}
    }
    let red = Reduction::new(&p)?;
    if red.outer.is_empty() {
        let value = red.integrand(&[0.0; 4]);
        if !value.is_finite() {
            return Err(MahlerError::ZeroPolynomial);
        }
        return Ok(exact(value));
    }
    let nested = Nested {
        red: &red,
        evals: AtomicUsize::new(0),
        max_evals,
    };
    let res = nested.mean(0, [0.0; 4], target);
    let evaluations = nested.evals.load(Ordering::Relaxed);
    match res {
        Ok(r) if r.value.is_finite() => Ok(QuadratureResult { evaluations, ..r }),
        Ok(_) => Err(MahlerError::ZeroPolynomial),
        Err(r) => Err(MahlerError::Unreachable {
            target,
            estimate: r.error_estimate,
            evals: evaluations,
        }),
    }
}
