//! Predicted magnitudes for the variance and the quantities feeding them:
//! lower-bound shapes with implicit constants set to 1, truncated Euler
//! products, the smooth-number main term, and exact moment sums of `ϖ(n)`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::sieve::{build_sieve, AlphaParams, PrimeCount, SieveContext};
use crate::stats::slope_through_origin;

/// `sum_{p <= x} 1/p` over the primes of `ctx`; 0 for `x < 2`.
pub fn mertens_sum(ctx: &SieveContext, x: f64) -> Result<f64> {
    if x < 2.0 {
        return Ok(0.0);
    }
    if x > ctx.n_max() as f64 {
        return invalid(format!("x = {x} exceeds the sieve bound {}", ctx.n_max()));
    }
    Ok(ctx.primes_up_to(x).iter().map(|&p| 1.0 / p as f64).sum())
}

/// `log(log a / log b)`.
pub fn log_log_ratio(a: f64, b: f64) -> f64 {
    (a.ln() / b.ln()).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    /// `Q^2`.
    D1Q2,
    /// `(QN / R^2) log(log N / log(2N/Q)) + Q^2`.
    AlphaMain,
    /// `Q^2 (log log N)^2 + QN log(log N / log(2N/Q))`.
    OmegaMain,
    /// `QN log u + Q^2`.
    SmoothMain,
    /// `(QN / R^4) exp((2 + 1/R) log log N / R)`.
    PriorAlphaBound,
}

/// Inputs of a prediction shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionInput {
    pub kind: ShapeKind,
    pub n: f64,
    pub q: f64,
    pub r: Option<f64>,
    pub u: Option<f64>,
    /// Width of the admissible window `N^{1/2 + δ} <= Q <= N`.
    pub delta: f64,
}

impl PredictionInput {
    pub fn new(kind: ShapeKind, n: f64, q: f64) -> Self {
        Self {
            kind,
            n,
            q,
            r: None,
            u: None,
            delta: 0.01,
        }
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u = Some(u);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub kind: ShapeKind,
    pub value: f64,
    /// Whether the inputs lie in the parameter window where the bound is
    /// claimed (taking every existence constant as 1). Advisory only.
    pub admissible: bool,
}

/// Evaluates a lower-bound shape with implicit constant 1.
///
/// Log factors that would turn negative outside the admissible window are
/// clamped at 0 and the result flagged inadmissible.
pub fn predicted_lower_bound(input: &PredictionInput) -> Result<Prediction> {
    let PredictionInput {
        kind, n, q, delta, ..
    } = *input;
    if !(n > 1.0) || !n.is_finite() {
        return invalid(format!("N must exceed 1, got {n}"));
    }
    if !(q > 0.0) || q > n {
        return invalid(format!("Q must satisfy 0 < Q <= N = {n}, got {q}"));
    }
    let need = |v: Option<f64>, name: &str| -> Result<f64> {
        v.ok_or_else(|| {
            crate::Error::InvalidArgument(format!("shape {kind:?} needs parameter {name}"))
        })
    };
    let loglog_n = n.ln().ln();
    let raw_ratio = log_log_ratio(n, 2.0 * n / q);
    let ratio = raw_ratio.max(0.0);
    let in_window = q >= n.powf(0.5 + delta) && q <= n && raw_ratio >= 0.0;

    let (value, admissible) = match kind {
        ShapeKind::D1Q2 => (q * q, q >= n.powf(2.0 / 3.0)),
        ShapeKind::AlphaMain => {
            let r = need(input.r, "R")?;
            let r_ok = loglog_n <= r.abs() && r.abs() <= n.powf(delta / 12.0);
            (q * n / (r * r) * ratio + q * q, in_window && r_ok)
        }
        ShapeKind::OmegaMain => (q * q * loglog_n * loglog_n + q * n * ratio, in_window),
        ShapeKind::SmoothMain => {
            let u = need(input.u, "u")?;
            let log_u = u.ln();
            (
                q * n * log_u.max(0.0) + q * q,
                in_window && (1.0..=2.0).contains(&u),
            )
        }
        ShapeKind::PriorAlphaBound => {
            let r = need(input.r, "R")?;
            let growth = ((2.0 + 1.0 / r) * loglog_n / r).exp();
            (q * n / r.powi(4) * growth, in_window)
        }
    };
    Ok(Prediction {
        kind,
        value,
        admissible,
    })
}

/// Real Gamma function.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Euler product `c_0(α, ϖ)` truncated to primes `p <= prime_cutoff`:
///
/// - `ω`: `prod_p (1 - 1/p)^α (1 + α/(p - 1))`
/// - `Ω`: `prod_p (1 - 1/p)^α (1 - α/p)^{-1}`, which needs `α < 2`.
pub fn c0_constant(params: AlphaParams, prime_cutoff: usize) -> Result<f64> {
    if prime_cutoff < 100 {
        return invalid(format!("prime cutoff must be >= 100, got {prime_cutoff}"));
    }
    let alpha = params.alpha;
    if !(alpha > 0.0) {
        return invalid(format!("alpha must be positive, got {alpha}"));
    }
    if params.variant == PrimeCount::BigOmega && alpha >= 2.0 {
        return invalid(format!(
            "the Omega product diverges for alpha = {alpha} >= 2"
        ));
    }
    let ctx = build_sieve(prime_cutoff)?;
    let log_product: f64 = ctx
        .primes()
        .iter()
        .map(|&p| {
            let p = p as f64;
            let base = alpha * (-1.0 / p).ln_1p();
            match params.variant {
                PrimeCount::Omega => base + (alpha / (p - 1.0)).ln_1p(),
                PrimeCount::BigOmega => base - (-alpha / p).ln_1p(),
            }
        })
        .sum();
    Ok(log_product.exp())
}

/// Main term of `Ψ(N/d, y)` in the range `u <= 2`: `floor(N/d)` when
/// `d > N/y`, otherwise `(N/d)(1 - log(log(N/d) / log y))`.
pub fn smooth_count_prediction(n: f64, d: f64, y: f64) -> f64 {
    if d > n / y {
        (n / d).floor()
    } else {
        n / d * (1.0 - log_log_ratio(n / d, y))
    }
}

/// Exact `Ψ(x, y)`: the number of `n <= x` whose prime factors are all `<= y`.
pub fn smooth_count(ctx: &SieveContext, x: usize, y: f64) -> Result<u64> {
    if x > ctx.n_max() {
        return invalid(format!("x = {x} exceeds the sieve bound {}", ctx.n_max()));
    }
    Ok((1..=x)
        .filter(|&n| ctx.largest_prime_factor(n) as f64 <= y)
        .count() as u64)
}

/// Exact moment sums of `ϖ(n)` over `n <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TkFunctionals {
    /// `sum ϖ(n)`.
    pub mean_sum: f64,
    /// `sum (ϖ(n) - log log N)^2`.
    pub centered_second_moment: f64,
    /// `sum ϖ(n)^2`.
    pub second_moment: f64,
}

pub fn tk_functionals(ctx: &SieveContext, n: usize, variant: PrimeCount) -> Result<TkFunctionals> {
    if n < 16 {
        return invalid(format!("N must be at least 16, got {n}"));
    }
    if n > ctx.n_max() {
        return invalid(format!("N = {n} exceeds the sieve bound {}", ctx.n_max()));
    }
    let loglog = (n as f64).ln().ln();
    let mut out = TkFunctionals {
        mean_sum: 0.0,
        centered_second_moment: 0.0,
        second_moment: 0.0,
    };
    for m in 1..=n {
        let w = variant.of(ctx, m) as f64;
        out.mean_sum += w;
        out.second_moment += w * w;
        out.centered_second_moment += (w - loglog) * (w - loglog);
    }
    Ok(out)
}

/// `sum_{n <= N} y^{ϖ(n)}`.
pub fn power_partial_sum(ctx: &SieveContext, n: usize, y: f64, variant: PrimeCount) -> f64 {
    (1..=n.min(ctx.n_max()))
        .map(|m| y.powi(variant.of(ctx, m) as i32))
        .sum()
}

/// Least-squares fit of `B` in `sum_{n <= x} ϖ(n) ≈ x log log x + B x` over
/// the sample points `xs` (each `>= 3`, at most `n_max`).
pub fn fit_b_constant(ctx: &SieveContext, variant: PrimeCount, xs: &[usize]) -> Result<f64> {
    let top = xs.iter().copied().max().unwrap_or(0);
    if xs.is_empty() || top > ctx.n_max() || xs.iter().any(|&x| x < 3) {
        return invalid("sample points must lie in 3..=n_max");
    }
    let mut prefix = vec![0.0; top + 1];
    for m in 1..=top {
        prefix[m] = prefix[m - 1] + variant.of(ctx, m) as f64;
    }
    let xf: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
    let residual: Vec<f64> = xs
        .iter()
        .map(|&x| prefix[x] - x as f64 * (x as f64).ln().ln())
        .collect();
    slope_through_origin(&xf, &residual)
        .ok_or_else(|| crate::Error::InvalidArgument("degenerate fit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mertens_values() {
        let ctx = build_sieve(1000).unwrap();
        let s10 = mertens_sum(&ctx, 10.0).unwrap();
        assert!((s10 - (0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0)).abs() < 1e-15);
        assert!((s10 - 1.176190).abs() < 1e-6);
        assert_eq!(mertens_sum(&ctx, 2.0).unwrap(), 0.5);
        assert_eq!(mertens_sum(&ctx, 1.5).unwrap(), 0.0);
        let mut last = 0.0;
        for x in 2..=1000 {
            let s = mertens_sum(&ctx, x as f64).unwrap();
            assert!(s >= last);
            last = s;
        }
        assert!(mertens_sum(&ctx, 1001.0).is_err());
    }

    #[test]
    fn shape_values() {
        let d1 = predicted_lower_bound(&PredictionInput::new(ShapeKind::D1Q2, 1e6, 1e3)).unwrap();
        assert_eq!(d1.value, 1e6);
        let smooth = predicted_lower_bound(
            &PredictionInput::new(ShapeKind::SmoothMain, 1e6, 1e5).with_u(1.0),
        )
        .unwrap();
        assert_eq!(smooth.value, 1e10);
        assert!(predicted_lower_bound(&PredictionInput::new(ShapeKind::D1Q2, 1e3, 2e3)).is_err());
        assert!(
            predicted_lower_bound(&PredictionInput::new(ShapeKind::AlphaMain, 1e6, 1e5)).is_err()
        );
    }

    #[test]
    fn alpha_main_independent_formula() {
        let n: f64 = 1e6;
        let q = n.powf(0.8);
        let r = 50.0;
        let p = predicted_lower_bound(&PredictionInput::new(ShapeKind::AlphaMain, n, q).with_r(r))
            .unwrap();
        // log N / log(2N/Q) with log(2N/Q) = log 2 + 0.2 log N
        let ln_n = 6.0 * std::f64::consts::LN_10;
        let expected = q * n / 2500.0 * (ln_n / (std::f64::consts::LN_2 + 0.2 * ln_n)).ln() + q * q;
        assert!((p.value - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn inadmissible_inputs_are_flagged_not_rejected() {
        let p =
            predicted_lower_bound(&PredictionInput::new(ShapeKind::OmegaMain, 1e6, 10.0)).unwrap();
        assert!(!p.admissible);
        assert!(p.value >= 0.0);
        let s = predicted_lower_bound(
            &PredictionInput::new(ShapeKind::SmoothMain, 1e6, 1e5).with_u(3.0),
        )
        .unwrap();
        assert!(!s.admissible);
        let s = predicted_lower_bound(
            &PredictionInput::new(ShapeKind::SmoothMain, 1e6, 1e5).with_u(1.5),
        )
        .unwrap();
        assert!(s.admissible);
    }

    #[test]
    fn c0_at_alpha_one() {
        for variant in [PrimeCount::Omega, PrimeCount::BigOmega] {
            let params = AlphaParams {
                r: f64::INFINITY,
                alpha: 1.0,
                variant,
            };
            assert!((c0_constant(params, 10_000).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn c0_errors() {
        let big = AlphaParams::new(1.0, PrimeCount::BigOmega).unwrap();
        assert!(c0_constant(big, 1000).is_err());
        let ok = AlphaParams::new(1.0, PrimeCount::Omega).unwrap();
        assert!(c0_constant(ok, 1000).is_ok());
        assert!(c0_constant(ok, 99).is_err());
    }

    #[test]
    fn gamma_reference_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5) - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn smooth_prediction_cases() {
        assert_eq!(smooth_count_prediction(1000.0, 50.0, 100.0), 20.0);
        assert_eq!(smooth_count_prediction(1000.0, 1.0, 1000.0), 1000.0);
        let v = smooth_count_prediction(1e6, 1.0, 1e4);
        assert!((v - 1e6 * (1.0 - 1.5f64.ln())).abs() < 1e-6);
    }

    #[test]
    fn smooth_count_small() {
        let ctx = build_sieve(100).unwrap();
        assert_eq!(smooth_count(&ctx, 100, 7.0).unwrap(), 46);
        assert_eq!(smooth_count(&ctx, 10, 2.0).unwrap(), 4);
        assert!(smooth_count(&ctx, 101, 7.0).is_err());
    }

    #[test]
    fn tk_small() {
        let ctx = build_sieve(100).unwrap();
        // sum_{p <= 30} floor(30/p) = 15+10+6+4+2+2+1+1+1+1
        let t = tk_functionals(&ctx, 30, PrimeCount::Omega).unwrap();
        assert_eq!(t.mean_sum, 43.0);
        assert!(t.centered_second_moment >= 0.0);
        assert!(tk_functionals(&ctx, 15, PrimeCount::Omega).is_err());
        assert!(tk_functionals(&ctx, 101, PrimeCount::Omega).is_err());
    }

    #[test]
    fn b_fit_is_stable() {
        let ctx = build_sieve(100_000).unwrap();
        let xs: Vec<usize> = (1..=20).map(|i| i * 5000).collect();
        let b = fit_b_constant(&ctx, PrimeCount::Omega, &xs).unwrap();
        // B_omega = 0.2615 in the limit
        assert!(b > 0.2 && b < 0.45, "B = {b}");
    }
}
