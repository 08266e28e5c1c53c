//! Closed forms and numerics for the limit laws.
//!
//! Two families of continuous laws are provided for the rescaled cycle sizes
//! `r = k * ell_ne2 / n2`:
//!
//! * [`lambda_intensity`], [`poisson_mean`] and [`cdf_y2`] use the intensity
//!   `e^{-2r} / (2r)`;
//! * [`cycle_count_intensity`], [`cycle_count_poisson_mean`] and
//!   [`cycle_count_cdf`] use `e^{-r/2} / (2r)`, which is what the exact
//!   expectation `E[C_n(k)] ~ e^{-k ell_ne2 / ell} / (2k)` integrates to
//!   under this scaling. It is consistent with `E[C(n)] = n2 / (ell_ne2 + 1)`:
//!   the integral of `r * e^{-r/2} / (2r)` is 1, while that of
//!   `r * e^{-2r} / (2r)` is 1/4.
//!
//! The two are related by a change of scale: the second law is the first one
//! stretched by a factor of 4.

pub mod exact;
pub mod quad;
pub mod special;

pub use exact::{
    expected_cycle_count, expected_cycle_count_product, expected_cyclic_vertices, line_survival,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TheoryConfig {
    /// Absolute tolerance for adaptive quadrature.
    pub quad_abs_tol: f64,
    /// Upper limit standing in for infinity in quadrature. The neglected tail
    /// is below `e^{-2T} / (4T)`.
    pub tail_cutoff: f64,
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig {
            quad_abs_tol: 1e-10,
            tail_cutoff: 40.0,
        }
    }
}

impl TheoryConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(quad_abs_tol: f64, tail_cutoff: f64) -> Result<Self> {
        if !(quad_abs_tol > 0.0) {
            return Err(Error::NonPositiveArgument(quad_abs_tol));
        }
        if !(tail_cutoff > 0.0) {
            return Err(Error::NonPositiveArgument(tail_cutoff));
        }
        Ok(TheoryConfig {
            quad_abs_tol,
            tail_cutoff,
        })
    }

    /// Bound on the integral of `e^{-2r} / (2r)` beyond the cutoff.
    pub fn tail_bound(&self) -> f64 {
        libm::exp(-2.0 * self.tail_cutoff) / (4.0 * self.tail_cutoff)
    }
}

/// Which E1 evaluator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E1Method {
    Series,
    ContinuedFraction,
    /// Series below 1, continued fraction above.
    Auto,
}

impl E1Method {
    fn eval(self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return 0.0;
        }
        match self {
            E1Method::Series => special::e1_series(x),
            E1Method::ContinuedFraction => special::e1_continued_fraction(x),
            E1Method::Auto => special::e1(x),
        }
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveArgument(x))
    }
}

fn check_interval(a: f64, t: f64) -> Result<()> {
    if a > 0.0 && t >= a {
        Ok(())
    } else {
        Err(Error::BadInterval { lo: a, hi: t })
    }
}

/// `e^{-2t} / (2t)`.
pub fn lambda_intensity(t: f64) -> Result<f64> {
    check_positive(t)?;
    Ok(libm::exp(-2.0 * t) / (2.0 * t))
}

/// Integral of [`lambda_intensity`] over `[a, t]`, i.e. `(E1(2a) - E1(2t)) / 2`.
/// `t` may be infinite.
pub fn poisson_mean(a: f64, t: f64) -> Result<f64> {
    check_interval(a, t)?;
    if a == t {
        return Ok(0.0);
    }
    Ok(0.5 * (special::e1(2.0 * a) - special::e1(2.0 * t)))
}

/// [`poisson_mean`] by adaptive quadrature of the intensity, independent of
/// the E1 evaluators. Infinite `t` is replaced by the configured cutoff.
pub fn poisson_mean_quadrature(a: f64, t: f64, cfg: &TheoryConfig) -> Result<f64> {
    check_interval(a, t)?;
    let upper = t.min(cfg.tail_cutoff.max(a));
    let f = |r: f64| libm::exp(-2.0 * r) / (2.0 * r);
    Ok(quad::adaptive_simpson(&f, a, upper, cfg.quad_abs_tol))
}

/// `exp(-E1(2a) / 2)`, the distribution function of `Y_2` with intensity
/// [`lambda_intensity`].
pub fn cdf_y2(a: f64) -> Result<f64> {
    cdf_y2_with(a, E1Method::Auto)
}

pub fn cdf_y2_with(a: f64, method: E1Method) -> Result<f64> {
    check_positive(a)?;
    Ok(libm::exp(-0.5 * method.eval(2.0 * a)))
}

/// `e^{-r/2} / (2r)`, the intensity of rescaled cycle sizes implied by the
/// exact cycle-count expectation.
pub fn cycle_count_intensity(r: f64) -> Result<f64> {
    check_positive(r)?;
    Ok(libm::exp(-0.5 * r) / (2.0 * r))
}

/// Integral of [`cycle_count_intensity`] over `[a, t]`: `(E1(a/2) - E1(t/2)) / 2`.
pub fn cycle_count_poisson_mean(a: f64, t: f64) -> Result<f64> {
    check_interval(a, t)?;
    if a == t {
        return Ok(0.0);
    }
    Ok(0.5 * (special::e1(0.5 * a) - special::e1(0.5 * t)))
}

/// `exp(-E1(a/2) / 2)`.
pub fn cycle_count_cdf(a: f64) -> Result<f64> {
    check_positive(a)?;
    Ok(libm::exp(-0.5 * special::e1(0.5 * a)))
}

/// `2 n ln(n1) / n1`, the common first-order size of the largest components
/// when the only non-degree-2 vertices are `n1` vertices of degree 1.
pub fn lower_regime_prediction(n: u64, n1: u64) -> Result<f64> {
    if n1 < 2 {
        return Err(Error::OutOfRange {
            what: "n1",
            value: n1,
            range: ">= 2",
        });
    }
    Ok(2.0 * n as f64 * libm::log(n1 as f64) / n1 as f64)
}
