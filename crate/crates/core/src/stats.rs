//! Small statistics toolkit: Kolmogorov-Smirnov distance, factorial moments,
//! jackknife errors and the chi-square statistic.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A distribution function with access to its left limits.
pub trait ReferenceCdf {
    fn cdf(&self, x: f64) -> f64;

    /// `lim_{y -> x-} F(y)`; equal to `cdf` for continuous laws.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl<F: Fn(f64) -> f64> ReferenceCdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Empirical distribution function of a sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut sample: Vec<f64>) -> Self {
        sample.sort_by(f64::total_cmp);
        Ecdf { sorted: sample }
    }

    pub fn sample(&self) -> &[f64] {
        &self.sorted
    }
}

impl ReferenceCdf for Ecdf {
    fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    fn cdf_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.sorted.len() as f64
    }
}

/// `sup_x |F_n(x) - F(x)|` for a sorted sample, checked on both sides of every
/// jump of the empirical distribution function.
pub fn ks_distance<C: ReferenceCdf + ?Sized>(sorted: &[f64], reference: &C) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    debug_assert!(
        sorted.windows(2).all(|w| w[0] <= w[1]),
        "sample must be sorted"
    );
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let at = (j + 1) as f64 / n;
        d = d
            .max((at - reference.cdf(x)).abs())
            .max((below - reference.cdf_left(x)).abs());
        i = j + 1;
    }
    Ok(d)
}

/// Leave-one-out KS distances for a continuous reference, reusing the
/// reference values at the sample points. Returns `(distance, jackknife_se)`.
pub fn ks_distance_jackknife<C: ReferenceCdf + ?Sized>(
    sorted: &[f64],
    reference: &C,
) -> Result<(f64, f64)> {
    let full = ks_distance(sorted, reference)?;
    let n = sorted.len();
    if n < 2 {
        return Ok((full, f64::NAN));
    }
    let f: Vec<f64> = sorted.iter().map(|&x| reference.cdf(x)).collect();
    let m = (n - 1) as f64;
    let loo: Vec<f64> = (0..n)
        .map(|skip| {
            let mut d: f64 = 0.0;
            for (i, &fi) in f.iter().enumerate() {
                if i == skip {
                    continue;
                }
                let idx = if i > skip { i - 1 } else { i } as f64;
                d = d.max((idx + 1.0) / m - fi).max(fi - idx / m);
            }
            d
        })
        .collect();
    Ok((full, jackknife_se_from_replicates(&loo)))
}

/// Falling factorial `x (x-1) ... (x-h+1)`.
pub fn falling_factorial(x: u64, h: u32) -> f64 {
    (0..h as u64).map(|i| x as f64 - i as f64).product()
}

/// Sample mean of `x (x-1) ... (x-h+1)`; 0 for an empty sample.
pub fn factorial_moment(sample: &[u64], h: u32) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    sample.iter().map(|&x| falling_factorial(x, h)).sum::<f64>() / sample.len() as f64
}

/// Mean and standard error (sample standard deviation over sqrt(n)).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, libm::sqrt(var / n as f64))
}

/// Jackknife standard error from leave-one-out replicate values.
pub fn jackknife_se_from_replicates(loo: &[f64]) -> f64 {
    let n = loo.len() as f64;
    let mean = loo.iter().sum::<f64>() / n;
    libm::sqrt((n - 1.0) / n * loo.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>())
}

/// Jackknife estimate of the standard error of a mean-type statistic
/// `(1/n) sum g(x_i)`, computed in O(n).
pub fn jackknife_se_of_mean(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return f64::NAN;
    }
    let total: f64 = values.iter().sum();
    let loo: Vec<f64> = values
        .iter()
        .map(|v| (total - v) / (n - 1) as f64)
        .collect();
    jackknife_se_from_replicates(&loo)
}

/// Pearson statistic `sum (O - E)^2 / E` with `E = total * p`.
pub fn chi_square_statistic(observed: &[u64], probabilities: &[f64]) -> f64 {
    debug_assert_eq!(observed.len(), probabilities.len());
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = total as f64 * p;
            (o as f64 - e) * (o as f64 - e) / e
        })
        .sum()
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Pearson statistic for homogeneity of two count vectors over the same cells.
/// Cells empty in both samples are skipped. Returns `(statistic, dof)`.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, usize) {
    debug_assert_eq!(a.len(), b.len());
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        let (ea, eb) = (na * col / total, nb * col / total);
        stat += sq(x as f64 - ea) / ea + sq(y as f64 - eb) / eb;
    }
    (stat, cells.max(1) - 1)
}
