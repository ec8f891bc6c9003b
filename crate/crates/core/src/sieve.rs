//! Smallest-prime-factor sieve and the arithmetic-function tables built on it.
//!
//! Every table is indexed by `n = 1..=n_max` and computed from the spf chain of
//! `n`, so building all of them for `n_max = 10^7` is a few hundred
//! milliseconds. Ramanujan sums are produced row by row from the divisor
//! identity `c_q(n) = sum_{k | (n, q)} k * mu(q / k)`, sieving over the
//! multiples of each divisor `k` of `q`.
//!
//! Value storage: every table holds `f64`. The integer-valued kinds
//! (`one`, `omega`, `big_omega`, `mobius`, `phi`, `sigma`, `smooth_indicator`)
//! are exact as long as the values stay below `2^53`, which holds for every
//! `n_max <= MAX_SIEVE` (`sigma(n) < 5 n` there). [`FunctionTable::exact_values`]
//! widens them back to `i64`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::circle::BumpFunction;
use crate::error::{invalid, Error, Result};
use crate::format::fmt_num;

/// Largest supported sieve bound. The spf array is `u32`, so this costs
/// `4 * MAX_SIEVE` bytes plus the prime list.
pub const MAX_SIEVE: usize = 400_000_000;

/// Smallest prime factor of every `n <= n_max` together with the primes up to `n_max`.
#[derive(Debug, Clone)]
pub struct SieveContext {
    n_max: usize,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Linear sieve up to `n_max`.
pub fn build_sieve(n_max: usize) -> Result<SieveContext> {
    SieveContext::new(n_max)
}

impl SieveContext {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return invalid("sieve bound must be at least 1");
        }
        if n_max > MAX_SIEVE {
            return invalid(format!(
                "sieve bound {n_max} exceeds MAX_SIEVE = {MAX_SIEVE}"
            ));
        }
        let mut spf = vec![0u32; n_max + 1];
        spf[1] = 1;
        let mut primes: Vec<u32> = Vec::with_capacity(approx_prime_count(n_max));
        for i in 2..=n_max {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n_max {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { n_max, spf, primes })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Smallest prime factor of `n`, with `spf(1) = 1`.
    ///
    /// Panics if `n` is 0 or above `n_max`.
    pub fn spf(&self, n: usize) -> usize {
        assert!(
            n >= 1 && n <= self.n_max,
            "n = {n} outside 1..={}",
            self.n_max
        );
        self.spf[n] as usize
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && n <= self.n_max && self.spf[n] as usize == n
    }

    /// Primes `p <= x`.
    pub fn primes_up_to(&self, x: f64) -> &[u32] {
        let end = self.primes.partition_point(|&p| (p as f64) <= x);
        &self.primes[..end]
    }

    /// Prime factorization of `n` as `(p, k)` pairs in ascending `p`.
    pub fn factorize(&self, n: usize) -> Factors<'_> {
        assert!(
            n >= 1 && n <= self.n_max,
            "n = {n} outside 1..={}",
            self.n_max
        );
        Factors {
            spf: &self.spf,
            rest: n,
        }
    }

    /// Largest prime factor of `n`, 1 for `n = 1`.
    pub fn largest_prime_factor(&self, n: usize) -> usize {
        self.factorize(n).last().map_or(1, |(p, _)| p)
    }
}

fn approx_prime_count(n: usize) -> usize {
    if n < 10 {
        4
    } else {
        let x = n as f64;
        (1.26 * x / x.ln()) as usize
    }
}

/// Iterator over the prime-power factors of an integer.
pub struct Factors<'a> {
    spf: &'a [u32],
    rest: usize,
}

impl Iterator for Factors<'_> {
    type Item = (usize, u32);

    fn next(&mut self) -> Option<(usize, u32)> {
        if self.rest <= 1 {
            return None;
        }
        let p = self.spf[self.rest] as usize;
        let mut k = 0;
        while self.rest % p == 0 {
            self.rest /= p;
            k += 1;
        }
        Some((p, k))
    }
}

/// Which prime-factor count `ϖ` a table is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeCount {
    /// Distinct prime factors.
    Omega,
    /// Prime factors with multiplicity.
    BigOmega,
}

impl PrimeCount {
    pub fn of(self, ctx: &SieveContext, n: usize) -> u32 {
        match self {
            PrimeCount::Omega => ctx.factorize(n).count() as u32,
            PrimeCount::BigOmega => ctx.factorize(n).map(|(_, k)| k).sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    One,
    Omega,
    BigOmega,
    Mobius,
    Phi,
    Sigma,
    AlphaOmega,
    AlphaBigOmega,
    SmoothIndicator,
    Custom,
}

impl FunctionKind {
    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::One => "one",
            FunctionKind::Omega => "omega",
            FunctionKind::BigOmega => "big_omega",
            FunctionKind::Mobius => "mobius",
            FunctionKind::Phi => "phi",
            FunctionKind::Sigma => "sigma",
            FunctionKind::AlphaOmega => "alpha_omega",
            FunctionKind::AlphaBigOmega => "alpha_big_omega",
            FunctionKind::SmoothIndicator => "smooth_indicator",
            FunctionKind::Custom => "custom",
        }
    }

    /// Kinds whose values are integers held exactly in `f64`.
    pub fn is_integer_valued(self) -> bool {
        !matches!(
            self,
            FunctionKind::AlphaOmega | FunctionKind::AlphaBigOmega | FunctionKind::Custom
        )
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "one" | "1" | "d1" => FunctionKind::One,
            "omega" => FunctionKind::Omega,
            "big_omega" | "Omega" => FunctionKind::BigOmega,
            "mobius" | "mu" => FunctionKind::Mobius,
            "phi" => FunctionKind::Phi,
            "sigma" => FunctionKind::Sigma,
            "alpha_omega" => FunctionKind::AlphaOmega,
            "alpha_big_omega" => FunctionKind::AlphaBigOmega,
            "smooth_indicator" | "smooth" => FunctionKind::SmoothIndicator,
            "custom" => FunctionKind::Custom,
            other => return invalid(format!("unknown function kind '{other}'")),
        })
    }
}

/// `α = 1 + 1/R` for the proxy `α^{ϖ(n)}` of the α-fold divisor function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaParams {
    pub r: f64,
    pub alpha: f64,
    pub variant: PrimeCount,
}

impl AlphaParams {
    pub fn new(r: f64, variant: PrimeCount) -> Result<Self> {
        if r == 0.0 || !r.is_finite() {
            return invalid(format!("R must be a finite nonzero real, got {r}"));
        }
        Ok(Self {
            r,
            alpha: 1.0 + 1.0 / r,
            variant,
        })
    }
}

/// Smoothness bound `y` and `u = log N / log y` for the ambient `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothParams {
    pub y: f64,
    pub u: f64,
}

impl SmoothParams {
    pub fn new(y: f64, n: usize) -> Result<Self> {
        if !(y >= 2.0) || !y.is_finite() {
            return invalid(format!("smoothness bound y must be >= 2, got {y}"));
        }
        Ok(Self {
            y,
            u: (n as f64).ln() / y.ln(),
        })
    }

    /// `y = N^{1/u}`.
    pub fn from_u(u: f64, n: usize) -> Result<Self> {
        if !(u > 0.0) || !u.is_finite() {
            return invalid(format!("u must be positive, got {u}"));
        }
        let y = (n as f64).powf(1.0 / u);
        if y < 2.0 {
            return invalid(format!("u = {u} gives y = {y} < 2 at N = {n}"));
        }
        Ok(Self { y, u })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TableParams {
    None,
    Alpha(AlphaParams),
    Smooth(SmoothParams),
}

/// Values of an arithmetic function on `1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    kind: FunctionKind,
    params: TableParams,
    values: Vec<f64>,
}

impl FunctionTable {
    /// A `custom` table from values for `n = 1, 2, ...`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("table needs at least one value");
        }
        Ok(Self {
            kind: FunctionKind::Custom,
            params: TableParams::None,
            values,
        })
    }

    /// A `custom` table from `f(n)` for `n = 1..=n_max`.
    pub fn from_fn(n_max: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::from_values((1..=n_max).map(f).collect())
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn params(&self) -> TableParams {
        self.params
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `f(n)` for `1 <= n <= n_max`.
    pub fn value(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// Values for `n = 1..=n_max`; slot `i` holds `f(i + 1)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `c * f`, as a custom table.
    pub fn scaled(&self, c: f64) -> FunctionTable {
        FunctionTable {
            kind: FunctionKind::Custom,
            params: TableParams::None,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `f(n) * weight(n / n_max)`, as a custom table.
    pub fn weighted(&self, weight: &BumpFunction) -> FunctionTable {
        let n_max = self.n_max() as f64;
        FunctionTable {
            kind: FunctionKind::Custom,
            params: TableParams::None,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| v * weight.eval((i + 1) as f64 / n_max))
                .collect(),
        }
    }

    /// The first `n` values as a table of the same kind.
    pub fn truncated(&self, n: usize) -> Result<FunctionTable> {
        if n == 0 || n > self.n_max() {
            return invalid(format!(
                "cannot truncate a table of length {} to {n}",
                self.n_max()
            ));
        }
        Ok(FunctionTable {
            kind: self.kind,
            params: self.params,
            values: self.values[..n].to_vec(),
        })
    }

    /// Integer values for the integer-valued kinds, `None` otherwise.
    pub fn exact_values(&self) -> Option<Vec<i64>> {
        if !self.kind.is_integer_valued() {
            return None;
        }
        Some(self.values.iter().map(|&v| v as i64).collect())
    }

    /// CSV dump: header `n,value`, one row per `n`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, fmt_num(*v))?;
        }
        Ok(())
    }
}

/// Table of one of the classical functions `one, omega, big_omega, mobius, phi, sigma`.
pub fn arithmetic_table(ctx: &SieveContext, kind: FunctionKind) -> Result<FunctionTable> {
    let n_max = ctx.n_max();
    let values: Vec<f64> = match kind {
        FunctionKind::One => vec![1.0; n_max],
        FunctionKind::Omega => (1..=n_max)
            .map(|n| PrimeCount::Omega.of(ctx, n) as f64)
            .collect(),
        FunctionKind::BigOmega => (1..=n_max)
            .map(|n| PrimeCount::BigOmega.of(ctx, n) as f64)
            .collect(),
        FunctionKind::Mobius => (1..=n_max)
            .map(|n| {
                let mut mu = 1.0;
                for (_, k) in ctx.factorize(n) {
                    if k > 1 {
                        return 0.0;
                    }
                    mu = -mu;
                }
                mu
            })
            .collect(),
        FunctionKind::Phi => (1..=n_max)
            .map(|n| {
                ctx.factorize(n)
                    .map(|(p, k)| ((p - 1) * p.pow(k - 1)) as f64)
                    .product()
            })
            .collect(),
        FunctionKind::Sigma => (1..=n_max)
            .map(|n| {
                ctx.factorize(n)
                    .map(|(p, k)| ((p.pow(k + 1) - 1) / (p - 1)) as f64)
                    .product()
            })
            .collect(),
        other => {
            return invalid(format!(
                "arithmetic_table does not build '{other}'; use the dedicated constructor"
            ))
        }
    };
    Ok(FunctionTable {
        kind,
        params: TableParams::None,
        values,
    })
}

/// `α^{ϖ(n)}` for `n <= n_max`.
pub fn alpha_power_table(ctx: &SieveContext, params: AlphaParams) -> Result<FunctionTable> {
    if !(params.alpha > 0.0) {
        return invalid(format!("alpha must be positive, got {}", params.alpha));
    }
    let kind = match params.variant {
        PrimeCount::Omega => FunctionKind::AlphaOmega,
        PrimeCount::BigOmega => FunctionKind::AlphaBigOmega,
    };
    let values = (1..=ctx.n_max())
        .map(|n| params.alpha.powi(params.variant.of(ctx, n) as i32))
        .collect();
    Ok(FunctionTable {
        kind,
        params: TableParams::Alpha(params),
        values,
    })
}

/// Indicator of the `y`-smooth integers `n <= n_max`.
pub fn smooth_indicator_table(ctx: &SieveContext, y: f64) -> Result<FunctionTable> {
    let params = SmoothParams::new(y, ctx.n_max())?;
    let values = (1..=ctx.n_max())
        .map(|n| {
            if ctx.largest_prime_factor(n) as f64 <= y {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(FunctionTable {
        kind: FunctionKind::SmoothIndicator,
        params: TableParams::Smooth(params),
        values,
    })
}

/// Splits `ω = ω₁ + ω₂`, where `ω₁` counts the distinct prime factors `p < split`
/// and `ω₂` those with `p >= split`.
pub fn omega_split(ctx: &SieveContext, split: f64) -> (FunctionTable, FunctionTable) {
    let mut small = Vec::with_capacity(ctx.n_max());
    let mut large = Vec::with_capacity(ctx.n_max());
    for n in 1..=ctx.n_max() {
        let below = ctx
            .factorize(n)
            .filter(|&(p, _)| (p as f64) < split)
            .count();
        let total = ctx.factorize(n).count();
        small.push(below as f64);
        large.push((total - below) as f64);
    }
    (
        FunctionTable::from_values(small).expect("n_max >= 1"),
        FunctionTable::from_values(large).expect("n_max >= 1"),
    )
}

/// Divisors of `q` in ascending order, by trial division.
pub fn divisors(q: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= q {
        if q % d == 0 {
            small.push(d);
            if d * d != q {
                large.push(q / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Möbius function of an arbitrary positive integer, by trial division.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n >= 1, "mobius(0) is undefined");
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `c_q(n)` for `n = 1..=n_max` (slot `i` holds `c_q(i + 1)`).
///
/// Each divisor `k | q` adds `k * mu(q / k)` to every multiple of `k`, so the
/// row costs `O(n_max * sum_{k | q} 1/k)`.
pub fn ramanujan_row(q: u64, n_max: usize) -> Vec<i64> {
    assert!(q >= 1, "Ramanujan sums need q >= 1");
    let mut row = vec![0i64; n_max];
    for k in divisors(q) {
        let coeff = k as i64 * mobius(q / k);
        if coeff == 0 || k as usize > n_max {
            continue;
        }
        let k = k as usize;
        for m in (k..=n_max).step_by(k) {
            row[m - 1] += coeff;
        }
    }
    row
}

/// `sum_{n <= N} f(n) c_q(n) [weight(n/N)]` with `N = f.n_max()`.
pub fn twisted_sum(f: &FunctionTable, q: u64, weight: Option<&BumpFunction>) -> f64 {
    let n_max = f.n_max();
    let row = ramanujan_row(q, n_max);
    let values = f.values();
    match weight {
        None => values.iter().zip(&row).map(|(v, &c)| v * c as f64).sum(),
        Some(w) => values
            .iter()
            .zip(&row)
            .enumerate()
            .map(|(i, (v, &c))| v * c as f64 * w.eval((i + 1) as f64 / n_max as f64))
            .sum(),
    }
}

/// `sum_{r | n, r <= r_max} g(r)` for every `n <= n_max`, one pass over each
/// `r` and its multiples.
pub fn divisor_coeff_table(
    ctx: &SieveContext,
    r_max: usize,
    g: impl Fn(usize) -> f64,
) -> Result<FunctionTable> {
    let n_max = ctx.n_max();
    if r_max > n_max {
        return invalid(format!(
            "divisor cutoff R = {r_max} exceeds n_max = {n_max}"
        ));
    }
    let mut values = vec![0.0; n_max];
    for r in 1..=r_max {
        let gr = g(r);
        if gr == 0.0 {
            continue;
        }
        for m in (r..=n_max).step_by(r) {
            values[m - 1] += gr;
        }
    }
    FunctionTable::from_values(values)
}
