//! Regression, bootstrap, and distribution-distance helpers.
//!
//! All experiment claims are exponent regressions or moment-ratio bounds,
//! so everything funnels through ordinary least squares on log-log points
//! with residual-bootstrap confidence intervals, plus a two-sample
//! Kolmogorov-Smirnov statistic for the limit-theorem checks.

use crate::error::{Error, Result};
use crate::seed::Seed;
use rand::Rng;
use serde::Serialize;

/// OLS fit of y = slope * x + intercept with a residual-bootstrap CI
/// for the slope.
#[derive(Clone, Debug, Serialize)]
pub struct RegressionReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_ci_lo: f64,
    pub slope_ci_hi: f64,
    pub n_points: usize,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Regression(format!(
            "need at least 3 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::Regression("zero variance in regressor".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Ok((slope, intercept, r2))
}

/// OLS on (log x, log y) with a 95% residual-bootstrap CI (1000 resamples).
pub fn loglog_regression(xs: &[f64], ys: &[f64], seed: Seed) -> Result<RegressionReport> {
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Regression("log-log regression needs positive x".into()));
    }
    if ys.iter().any(|&y| !(y > 0.0)) {
        return Err(Error::Regression(
            "log-log regression needs positive y (degenerate data?)".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (slope, intercept, r2) = ols(&lx, &ly)?;
    let fitted: Vec<f64> = lx.iter().map(|x| slope * x + intercept).collect();
    let resid: Vec<f64> = ly.iter().zip(&fitted).map(|(y, f)| y - f).collect();

    let mut rng = seed.rng(&[0x5e6_7e55]);
    let n = lx.len();
    let mut slopes = Vec::with_capacity(1000);
    for _ in 0..1000 {
        let ry: Vec<f64> = (0..n)
            .map(|i| fitted[i] + resid[rng.gen_range(0..n)])
            .collect();
        if let Ok((s, _, _)) = ols(&lx, &ry) {
            slopes.push(s);
        }
    }
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = percentile_sorted(&slopes, 0.025);
    let hi = percentile_sorted(&slopes, 0.975);
    Ok(RegressionReport {
        slope,
        intercept,
        r_squared: r2,
        slope_ci_lo: lo,
        slope_ci_hi: hi,
        n_points: n,
    })
}

fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[idx]
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn se_mean(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Empirical p-th moment E|X|^p.
pub fn abs_moment(xs: &[f64], p: f64) -> f64 {
    xs.iter().map(|x| x.abs().powf(p)).sum::<f64>() / xs.len() as f64
}

/// Bootstrap standard error of an arbitrary statistic of one sample.
pub fn bootstrap_se<F: Fn(&[f64]) -> f64>(
    xs: &[f64],
    stat: &F,
    resamples: usize,
    seed: Seed,
) -> f64 {
    let mut rng = seed.rng(&[0xb007]);
    let n = xs.len();
    let mut vals = Vec::with_capacity(resamples);
    let mut buf = vec![0.0; n];
    for _ in 0..resamples {
        for b in buf.iter_mut() {
            *b = xs[rng.gen_range(0..n)];
        }
        vals.push(stat(&buf));
    }
    variance(&vals).sqrt()
}

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("KS statistic needs nonempty samples"));
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.partial_cmp(y).unwrap());
    sb.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] == x {
            i += 1;
        }
        while j < sb.len() && sb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Bootstrap standard error of the two-sample KS statistic.
pub fn ks_bootstrap_se(a: &[f64], b: &[f64], resamples: usize, seed: Seed) -> f64 {
    let mut rng = seed.rng(&[0x6b5]);
    let mut vals = Vec::with_capacity(resamples);
    let mut ra = vec![0.0; a.len()];
    let mut rb = vec![0.0; b.len()];
    for _ in 0..resamples {
        for v in ra.iter_mut() {
            *v = a[rng.gen_range(0..a.len())];
        }
        for v in rb.iter_mut() {
            *v = b[rng.gen_range(0..b.len())];
        }
        vals.push(ks_statistic(&ra, &rb).unwrap());
    }
    variance(&vals).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let (s, b, r2) = ols(&xs, &ys).unwrap();
        assert!((s - 2.5).abs() < 1e-12);
        assert!((b + 1.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loglog_power_law() {
        let xs: Vec<f64> = (1..=12).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(1.7)).collect();
        let rep = loglog_regression(&xs, &ys, Seed::default()).unwrap();
        assert!((rep.slope - 1.7).abs() < 1e-10);
        assert!(rep.slope_ci_lo <= 1.7 && 1.7 <= rep.slope_ci_hi);
    }

    #[test]
    fn degenerate_regression_rejected() {
        let xs = vec![1.0, 2.0, 3.0];
        assert!(loglog_regression(&xs, &[0.0, 0.0, 0.0], Seed::default()).is_err());
        assert!(ols(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn ks_identical_is_zero() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_statistic(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ks_symmetric() {
        let a: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = (0..80).map(|i| (i as f64 * 0.41).cos()).collect();
        let d1 = ks_statistic(&a, &b).unwrap();
        let d2 = ks_statistic(&b, &a).unwrap();
        assert!((d1 - d2).abs() < 1e-15);
        assert!(d1 >= 0.0);
    }

    #[test]
    fn ks_disjoint_supports() {
        let a = vec![0.0, 0.1, 0.2];
        let b = vec![5.0, 5.1];
        assert!((ks_statistic(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    }
}
