//! Derivative-free minimisation and numerical curvature.
//!
//! Objectives may return `+inf` for infeasible points; the simplex treats
//! such vertices as worst and moves away from them.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Converged once `max f - min f` over the simplex drops below this.
    pub f_tolerance: f64,
    /// At the iteration cap, a simplex smaller than this still counts as converged.
    pub x_tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            f_tolerance: 1e-9,
            x_tolerance: 1e-7,
            restarts: 5,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub spread: f64,
    pub diameter: f64,
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn new<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], steps: &[f64]) -> Self {
        let mut points = vec![start.to_vec()];
        for (i, step) in steps.iter().enumerate() {
            let mut p = start.to_vec();
            p[i] += step;
            points.push(p);
        }
        let values = points.iter().map(|p| sanitize(f(p))).collect();
        Self { points, values }
    }

    fn order(&mut self) {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.iter().map(|&i| self.points[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }

    fn spread(&self) -> f64 {
        let hi = self.values[self.values.len() - 1];
        let lo = self.values[0];
        if hi.is_infinite() {
            f64::INFINITY
        } else {
            hi - lo
        }
    }

    fn diameter(&self) -> f64 {
        let best = &self.points[0];
        self.points[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn lerp(a: &[f64], b: &[f64], coef: f64) -> Vec<f64> {
    // a + coef * (a - b)
    a.iter().zip(b).map(|(x, y)| x + coef * (x - y)).collect()
}

fn run_simplex<F: Fn(&[f64]) -> f64>(
    f: &F,
    start: &[f64],
    steps: &[f64],
    opts: &NelderMeadOptions,
) -> Minimum {
    let n = start.len();
    let mut s = Simplex::new(f, start, steps);
    let mut iterations = 0;
    s.order();
    while iterations < opts.max_iterations {
        if s.spread() < opts.f_tolerance {
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n)
            .map(|j| s.points[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = s.points[n].clone();
        let reflected = lerp(&centroid, &worst, 1.0);
        let fr = sanitize(f(&reflected));
        if fr < s.values[0] {
            let expanded = lerp(&centroid, &worst, 2.0);
            let fe = sanitize(f(&expanded));
            if fe < fr {
                s.points[n] = expanded;
                s.values[n] = fe;
            } else {
                s.points[n] = reflected;
                s.values[n] = fr;
            }
        } else if fr < s.values[n - 1] {
            s.points[n] = reflected;
            s.values[n] = fr;
        } else {
            let (candidate, fc) = if fr < s.values[n] {
                let c = lerp(&centroid, &worst, 0.5);
                let fc = sanitize(f(&c));
                (c, fc)
            } else {
                let c = lerp(&centroid, &worst, -0.5);
                let fc = sanitize(f(&c));
                (c, fc)
            };
            if fc < s.values[n].min(fr) {
                s.points[n] = candidate;
                s.values[n] = fc;
            } else {
                // shrink toward best
                let best = s.points[0].clone();
                for i in 1..=n {
                    let p: Vec<f64> = s.points[i]
                        .iter()
                        .zip(&best)
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    s.values[i] = sanitize(f(&p));
                    s.points[i] = p;
                }
            }
        }
        s.order();
    }
    let spread = s.spread();
    let diameter = s.diameter();
    Minimum {
        x: s.points[0].clone(),
        value: s.values[0],
        iterations,
        converged: spread < opts.f_tolerance || diameter < opts.x_tolerance,
        spread,
        diameter,
    }
}

/// Nelder-Mead from `start`, followed by `opts.restarts` restarts from the best
/// point found so far with randomly jittered simplex sizes.
///
/// Returns the best minimum; `Err(NonConvergence)` when the final run
/// neither reached the spread tolerance nor collapsed its simplex.
pub fn minimize<F: Fn(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    steps: &[f64],
    opts: &NelderMeadOptions,
) -> Result<Minimum> {
    assert_eq!(start.len(), steps.len());
    if !sanitize(f(start)).is_finite() {
        return Err(Error::InvalidInput(
            "objective is not finite at the starting point".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = run_simplex(&f, start, steps, opts);
    let mut total = best.iterations;
    for _ in 0..opts.restarts {
        let jittered: Vec<f64> = steps
            .iter()
            .map(|s| {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                sign * s * rng.random_range(0.25..1.0)
            })
            .collect();
        let next = run_simplex(&f, &best.x.clone(), &jittered, opts);
        total += next.iterations;
        if next.value <= best.value {
            best = next;
        } else {
            best.converged &= next.converged;
        }
    }
    best.iterations = total;
    if best.converged {
        Ok(best)
    } else {
        Err(Error::NonConvergence {
            iterations: total,
            spread: best.spread,
        })
    }
}

/// Step used for coordinate `i` of the central-difference Hessian.
pub fn hessian_step(theta: f64) -> f64 {
    1e-4 * (1.0 + theta.abs())
}

/// Central-difference Hessian. `None` if the objective is non-finite at any stencil point.
pub fn hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64]) -> Option<DMatrix<f64>> {
    let n = x.len();
    let f0 = f(x);
    if !f0.is_finite() {
        return None;
    }
    let h: Vec<f64> = x.iter().map(|v| hessian_step(*v)).collect();
    let eval = |di: &[(usize, f64)]| -> Option<f64> {
        let mut p = x.to_vec();
        for &(i, d) in di {
            p[i] += d;
        }
        let v = f(&p);
        v.is_finite().then_some(v)
    };
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let fp = eval(&[(i, h[i])])?;
        let fm = eval(&[(i, -h[i])])?;
        out[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let fpp = eval(&[(i, h[i]), (j, h[j])])?;
            let fpm = eval(&[(i, h[i]), (j, -h[j])])?;
            let fmp = eval(&[(i, -h[i]), (j, h[j])])?;
            let fmm = eval(&[(i, -h[i]), (j, -h[j])])?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Some(out)
}

/// Inverse of a symmetric positive-definite matrix, `None` otherwise.
pub fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let chol = m.clone().cholesky()?;
    let inv = chol.inverse();
    inv.iter().all(|v| v.is_finite()).then_some(inv)
}

/// Multiply a covariance by a gradient on both sides: `g' C g`.
pub fn quadratic_form(c: &DMatrix<f64>, g: &[f64]) -> f64 {
    let v = DVector::from_column_slice(g);
    (v.transpose() * c * &v)[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_minimum() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = minimize(f, &[-1.2, 1.0], &[0.5, 0.5], &NelderMeadOptions::default()).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-3, "{:?}", m.x);
        assert!((m.x[1] - 1.0).abs() < 1e-3, "{:?}", m.x);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                f64::INFINITY
            } else {
                (x[0] - 0.3).powi(2) + x[1] * x[1]
            }
        };
        let m = minimize(f, &[2.0, 1.0], &[1.0, 1.0], &NelderMeadOptions::default()).unwrap();
        assert!((m.x[0] - 0.3).abs() < 1e-3);
    }

    #[test]
    fn infinite_start_is_rejected() {
        let f = |_: &[f64]| f64::INFINITY;
        assert!(minimize(f, &[0.0], &[1.0], &NelderMeadOptions::default()).is_err());
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let f = |x: &[f64]| (x[0] - 100.0).powi(2) + (x[1] + 50.0).powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 3,
            restarts: 0,
            ..Default::default()
        };
        match minimize(f, &[0.0, 0.0], &[0.1, 0.1], &opts) {
            Err(Error::NonConvergence { .. }) => {}
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn hessian_of_quadratic() {
        let f = |x: &[f64]| 3.0 * x[0] * x[0] + 2.0 * x[0] * x[1] + 5.0 * x[1] * x[1];
        let h = hessian(f, &[0.4, -1.1]).unwrap();
        assert!((h[(0, 0)] - 6.0).abs() < 1e-5);
        assert!((h[(0, 1)] - 2.0).abs() < 1e-5);
        assert!((h[(1, 1)] - 10.0).abs() < 1e-5);
        let inv = spd_inverse(&h).unwrap();
        let id = &h * &inv;
        assert!((id[(0, 0)] - 1.0).abs() < 1e-6 && id[(0, 1)].abs() < 1e-6);
    }

    #[test]
    fn indefinite_matrix_has_no_spd_inverse() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(spd_inverse(&m).is_none());
    }
}
