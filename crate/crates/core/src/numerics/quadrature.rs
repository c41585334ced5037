//! Gauss-Hermite rules for Gaussian expectations and trapezoidal sums on grids.

use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Nodes and weights for `∫ f(x) exp(-x²) dx`, ascending in `x`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let pim4 = PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// Product Gauss-Hermite rule for `E[f(R)]`, `R ~ MVN(0, Σ)`, after whitening
/// `R = L Z` with `L` the Cholesky factor of `Σ`.
#[derive(Debug, Clone)]
pub struct NormalQuadrature {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl NormalQuadrature {
    /// Standard-normal rule in one dimension.
    pub fn univariate(n: usize) -> Self {
        let (x, w) = gauss_hermite(n);
        let s = PI.sqrt();
        Self {
            points: x.iter().map(|v| vec![v * 2f64.sqrt()]).collect(),
            weights: w.iter().map(|v| v / s).collect(),
        }
    }

    /// `cholesky` is lower triangular with `Σ = L L'`.
    pub fn multivariate(cholesky: &DMatrix<f64>, n_per_dim: usize) -> Self {
        let dim = cholesky.nrows();
        let base = Self::univariate(n_per_dim);
        let mut points = vec![Vec::with_capacity(dim)];
        let mut weights = vec![1.0];
        for _ in 0..dim {
            let mut np = Vec::with_capacity(points.len() * n_per_dim);
            let mut nw = Vec::with_capacity(points.len() * n_per_dim);
            for (p, w) in points.iter().zip(&weights) {
                for (bp, bw) in base.points.iter().zip(&base.weights) {
                    let mut q = p.clone();
                    q.push(bp[0]);
                    np.push(q);
                    nw.push(w * bw);
                }
            }
            points = np;
            weights = nw;
        }
        // whiten: r = L z
        let points = points
            .into_iter()
            .map(|z| {
                (0..dim)
                    .map(|i| (0..=i).map(|j| cholesky[(i, j)] * z[j]).sum())
                    .collect()
            })
            .collect();
        Self { points, weights }
    }

    pub fn expect<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }
}

/// Trapezoidal rule over an ascending grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_match_tables() {
        let (x, w) = gauss_hermite(2);
        assert!((x[1] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((w[0] - PI.sqrt() / 2.0).abs() < 1e-14);
        let (x, w) = gauss_hermite(3);
        assert!(x[1].abs() < 1e-14);
        assert!((x[2] - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((w[1] - 2.0 * PI.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn normal_moments() {
        for n in [8, 32, 64] {
            let q = NormalQuadrature::univariate(n);
            assert!((q.expect(|_| 1.0) - 1.0).abs() < 1e-12);
            assert!(q.expect(|r| r[0]).abs() < 1e-12);
            assert!((q.expect(|r| r[0] * r[0]) - 1.0).abs() < 1e-12);
            assert!((q.expect(|r| r[0].powi(4)) - 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn correlated_second_moments() {
        let rho = 0.62;
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
        let l = sigma.cholesky().unwrap().l();
        let q = NormalQuadrature::multivariate(&l, 10);
        assert!((q.expect(|r| r[0] * r[1]) - rho).abs() < 1e-12);
        assert!((q.expect(|r| r[1] * r[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((trapezoid(&xs, &ys) - 2.0).abs() < 1e-14);
    }
}
