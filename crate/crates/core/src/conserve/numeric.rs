use crate::error::{Error, Result};

/// Samples of a function on the uniform grid `x0, x0 + h, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    x0: f64,
    h: f64,
    values: Vec<f64>,
}

/// Transient span in units of `1/(2 a1)`.
pub const DEFAULT_TRANSIENT_SPAN: f64 = 10.0;

const MIN_POINTS: usize = 16;

impl GridFn {
    pub fn new(x0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {h}")));
        }
        if values.len() < 2 {
            return Err(Error::InvalidInput("a grid function needs at least two samples".into()));
        }
        Ok(GridFn { x0, h, values })
    }

    pub fn constant(v: f64, x0: f64, h: f64, len: usize) -> Result<Self> {
        GridFn::new(x0, h, vec![v; len])
    }

    pub fn sample(f: impl Fn(f64) -> f64, x0: f64, h: f64, len: usize) -> Result<Self> {
        GridFn::new(x0, h, (0..len).map(|k| f(x0 + k as f64 * h)).collect())
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.h
    }

    /// Value halfway between samples `k` and `k + 1`, by linear interpolation.
    pub fn mid(&self, k: usize) -> f64 {
        0.5 * (self.values[k] + self.values[k + 1])
    }

    fn same_grid(&self, o: &GridFn) -> bool {
        self.len() == o.len() && self.x0 == o.x0 && self.h == o.h
    }
}

fn convolution(n: usize, ys: &[Vec<f64>], k: usize) -> f64 {
    (1..n).map(|j| ys[n - j - 1][k] * ys[j - 1][k]).sum()
}

fn convolution_mid(n: usize, ys: &[Vec<f64>], k: usize) -> f64 {
    let m = |v: &Vec<f64>| 0.5 * (v[k] + v[k + 1]);
    (1..n).map(|j| m(&ys[n - j - 1]) * m(&ys[j - 1])).sum()
}

/// Integrate `Y1,x = 1 − 2a1Y1` and `Yn,x = −2a1Yn − a2 Σ Y_{n−k}Y_k` from
/// `Yn(x0) = 0` with classical RK4, one order after another. Forcing terms at
/// half steps use linear interpolation of the earlier orders.
pub fn solve_density_odes(a1: &GridFn, a2: &GridFn, order: usize) -> Result<Vec<GridFn>> {
    if order == 0 {
        return Err(Error::InvalidInput("density order must be at least 1".into()));
    }
    if !a1.same_grid(a2) {
        return Err(Error::InvalidInput("a1 and a2 must share one grid".into()));
    }
    if a1.len() < MIN_POINTS {
        return Err(Error::InvalidInput(format!("grid has {} points, need at least {MIN_POINTS}", a1.len())));
    }
    let h = a1.h;
    let len = a1.len();
    let mut ys: Vec<Vec<f64>> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut y = vec![0.0; len];
        for k in 0..len - 1 {
            let (f0, fm, f1) = if n == 1 {
                (1.0, 1.0, 1.0)
            } else {
                (
                    -a2.values[k] * convolution(n, &ys, k),
                    -a2.mid(k) * convolution_mid(n, &ys, k),
                    -a2.values[k + 1] * convolution(n, &ys, k + 1),
                )
            };
            let rhs = |a: f64, f: f64, v: f64| f - 2.0 * a * v;
            let yk = y[k];
            let k1 = rhs(a1.values[k], f0, yk);
            let k2 = rhs(a1.mid(k), fm, yk + 0.5 * h * k1);
            let k3 = rhs(a1.mid(k), fm, yk + 0.5 * h * k2);
            let k4 = rhs(a1.values[k + 1], f1, yk + h * k3);
            y[k + 1] = yk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        ys.push(y);
    }
    ys.into_iter().map(|v| GridFn::new(a1.x0, h, v)).collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingResult {
    pub order: usize,
    pub etas: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Slope of `ln R` against `ln η`; `None` when some residual vanishes.
    pub slope: Option<f64>,
    pub expected: f64,
}

impl ScalingResult {
    pub fn within(&self, tol: f64) -> bool {
        self.slope.map(|s| (s - self.expected).abs() <= tol).unwrap_or(false)
    }
}

/// Residual of the truncated series `S = Σ_{n≤N} η^{−n} Yn` in
/// `S,x + 2a1S + a2S² − η^{−1}`, maximized over grid points past
/// `x0 + window`, for each `η`.
///
/// `S,x` is taken from the recursion right-hand sides, so the residual is
/// `a2 (S² − Σ_{n≤N} η^{−n} Σ_k Y_{n−k}Y_k)`: only convolution orders beyond
/// `N` survive.
pub fn residual_scaling_check(
    a1: &GridFn,
    a2: &GridFn,
    order: usize,
    etas: &[f64],
    window: f64,
) -> Result<ScalingResult> {
    if etas.len() < 3 {
        return Err(Error::InvalidInput("need at least three eta values".into()));
    }
    if etas.iter().any(|e| !(*e > 0.0)) || etas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("eta values must be positive and increasing".into()));
    }
    let ys = solve_density_odes(a1, a2, order)?;
    let raw: Vec<Vec<f64>> = ys.iter().map(|g| g.values.clone()).collect();
    let start = a1.x0 + window;
    let points: Vec<usize> = (0..a1.len()).filter(|&k| a1.x(k) > start).collect();
    if points.is_empty() {
        return Err(Error::InvalidInput(format!("transient window {window} covers the whole grid")));
    }
    let residuals: Vec<f64> = etas
        .iter()
        .map(|&eta| {
            points
                .iter()
                .map(|&k| {
                    let mut s = 0.0;
                    let mut matched = 0.0;
                    for n in 1..=order {
                        let w = eta.powi(-(n as i32));
                        s += w * raw[n - 1][k];
                        matched += w * convolution(n, &raw, k);
                    }
                    (a2.values[k] * (s * s - matched)).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let slope = if residuals.iter().all(|r| *r > 0.0) {
        let lx: Vec<f64> = etas.iter().map(|e| e.ln()).collect();
        let ly: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
        Some(least_squares_slope(&lx, &ly))
    } else {
        None
    };
    Ok(ScalingResult { order, etas: etas.to_vec(), residuals, slope, expected: -(order as f64 + 1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(len: usize) -> GridFn {
        GridFn::constant(1.0, 0.0, 0.01, len).unwrap()
    }

    #[test]
    fn first_order_matches_exact_solution() {
        let ys = solve_density_odes(&unit(501), &unit(501), 1).unwrap();
        for k in (0..501).step_by(50) {
            let x = ys[0].x(k);
            let exact = 0.5 * (1.0 - (-2.0 * x).exp());
            assert!((ys[0].values()[k] - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn slopes_for_unit_coefficients() {
        let etas = [10.0, 20.0, 40.0, 80.0];
        for n in 1..=3 {
            let r = residual_scaling_check(&unit(3001), &unit(3001), n, &etas, 5.0).unwrap();
            assert!(r.within(0.15), "N={n}: {:?}", r.slope);
        }
    }

    #[test]
    fn linear_case_has_no_residual() {
        let zero = GridFn::constant(0.0, 0.0, 0.01, 1001).unwrap();
        let r = residual_scaling_check(&unit(1001), &zero, 3, &[10.0, 20.0, 40.0], 5.0).unwrap();
        assert!(r.residuals.iter().all(|x| *x == 0.0));
        assert_eq!(r.slope, None);
    }

    #[test]
    fn input_errors() {
        assert!(GridFn::new(0.0, 0.0, vec![1.0, 2.0]).is_err());
        assert!(GridFn::new(0.0, 0.1, vec![1.0]).is_err());
        assert!(solve_density_odes(&unit(10), &unit(10), 1).is_err());
        assert!(residual_scaling_check(&unit(100), &unit(100), 1, &[10.0, 5.0, 40.0], 0.1).is_err());
        assert!(residual_scaling_check(&unit(100), &unit(100), 1, &[-1.0, 5.0, 40.0], 0.1).is_err());
    }

    #[test]
    fn slope_of_a_line() {
        assert!((least_squares_slope(&[0.0, 1.0, 2.0], &[1.0, -2.0, -5.0]) + 3.0).abs() < 1e-12);
    }
}
