//! Exact variance of an arithmetic function in arithmetic progressions,
//!
//! ```text
//! V(N, Q; f) = sum_{q <= Q} sum_{h | q} sum_{a mod q, (a, q) = h}
//!                |S_a(q) - T_h(q) / phi(q / h)|^2
//! ```
//!
//! where `S_a(q)` sums `f(n)` over `n <= N`, `n = a (mod q)` and `T_h(q)` sums
//! `f(n)` over `n <= N` with `(n, q) = h`. Residues are enumerated as
//! `a = 1..=q`, so the class `h = q` is the singleton `{q}` (residue 0).
//!
//! Per-modulus terms are independent; they are computed in parallel and then
//! reduced in ascending `q`, so results do not depend on the thread count.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::format::fmt_num;
use crate::sieve::{FunctionKind, FunctionTable, TableParams};
use crate::stats::loglog_slope;

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `S_a = sum_{n <= N, n = a (mod q)} f(n)` for `a = 0..q`.
pub fn residue_sums(f: &FunctionTable, q: usize) -> Vec<f64> {
    assert!(q >= 1, "modulus must be positive");
    // slot j of each chunk of length q holds n = chunk_start + j + 1
    let mut shifted = vec![0.0; q];
    for chunk in f.values().chunks(q) {
        for (s, v) in shifted.iter_mut().zip(chunk) {
            *s += v;
        }
    }
    let mut sums = vec![0.0; q];
    for (j, s) in shifted.into_iter().enumerate() {
        sums[(j + 1) % q] = s;
    }
    sums
}

/// Contribution of the single modulus `q` to `V(N, Q; f)`.
pub fn variance_single_modulus(f: &FunctionTable, q: usize) -> f64 {
    let sums = residue_sums(f, q);
    let classes: Vec<usize> = (1..=q).map(|a| gcd(a, q)).collect();
    let mut class_total = vec![0.0; q + 1];
    let mut class_size = vec![0usize; q + 1];
    for (a, &h) in (1..=q).zip(&classes) {
        class_total[h] += sums[a % q];
        class_size[h] += 1;
    }
    // class_size[h] = phi(q / h)
    (1..=q)
        .zip(&classes)
        .map(|(a, &h)| {
            let d = sums[a % q] - class_total[h] / class_size[h] as f64;
            d * d
        })
        .sum()
}

fn check_q(f: &FunctionTable, q: f64) -> Result<usize> {
    if !(q > 1.0) || q > f.n_max() as f64 {
        return invalid(format!(
            "Q must satisfy 1 < Q <= N = {}, got {q}",
            f.n_max()
        ));
    }
    Ok(q.floor() as usize)
}

/// Per-modulus contributions for `q = 1..=q_max`, index `q - 1`.
pub fn modulus_contributions(f: &FunctionTable, q_max: usize) -> Vec<f64> {
    (1..=q_max)
        .into_par_iter()
        .map(|q| variance_single_modulus(f, q))
        .collect()
}

/// `V(N, Q; f)` with `N = f.n_max()` and the sum over integers `q <= Q`.
pub fn variance(f: &FunctionTable, q: f64) -> Result<f64> {
    let q_max = check_q(f, q)?;
    Ok(modulus_contributions(f, q_max).iter().sum())
}

/// Independent reference for [`variance`]: plain loops over `q`, `h | q`,
/// `a` and `n`, one gcd per pair, no bucketing. `O(Q^2 N)`.
pub fn variance_bruteforce(f: &FunctionTable, q: f64) -> f64 {
    let n_max = f.n_max();
    let q_max = q.floor() as usize;
    let mut total = 0.0;
    for q in 1..=q_max {
        for h in (1..=q).filter(|h| q % h == 0) {
            let phi = (1..=q / h).filter(|&b| gcd(b, q / h) == 1).count() as f64;
            let mut class_sum = 0.0;
            for n in 1..=n_max {
                if gcd(n, q) == h {
                    class_sum += f.value(n);
                }
            }
            for a in 1..=q {
                if gcd(a, q) != h {
                    continue;
                }
                let mut progression = 0.0;
                for n in 1..=n_max {
                    if n % q == a % q {
                        progression += f.value(n);
                    }
                }
                let d = progression - class_sum / phi;
                total += d * d;
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceRow {
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub predicted: f64,
    /// `V / predicted`, absent when the prediction is not positive.
    pub ratio: Option<f64>,
}

/// Empirical `V(N, Q; f)` along a grid of `Q`, against a predicted shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub f_kind: FunctionKind,
    pub params: TableParams,
    pub n_max: usize,
    pub rows: Vec<VarianceRow>,
    /// Least-squares slope of `log V` against `log Q`; `None` when undefined.
    pub slope: Option<f64>,
}

/// Evaluates `V(N, Q; f)` for every `Q` in the ascending list `q_list`.
///
/// The per-modulus terms are computed once up to `max Q` and prefix-summed in
/// ascending `q`, so each row equals `variance(f, Q)` bit for bit.
pub fn variance_profile(
    f: &FunctionTable,
    q_list: &[f64],
    predictor: impl Fn(f64) -> f64,
) -> Result<VarianceReport> {
    if q_list.is_empty() {
        return invalid("Q list is empty");
    }
    if q_list.windows(2).any(|w| w[1] < w[0]) {
        return invalid("Q list must be ascending");
    }
    let mut caps = Vec::with_capacity(q_list.len());
    for &q in q_list {
        caps.push(check_q(f, q)?);
    }
    let contributions = modulus_contributions(f, *caps.last().expect("non-empty"));
    let mut rows = Vec::with_capacity(q_list.len());
    let mut acc = 0.0;
    let mut done = 0;
    for (&q, &cap) in q_list.iter().zip(&caps) {
        for c in &contributions[done..cap] {
            acc += c;
        }
        done = cap;
        let predicted = predictor(q);
        rows.push(VarianceRow {
            q,
            v: acc,
            predicted,
            ratio: (predicted > 0.0).then(|| acc / predicted),
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.q, r.v)).collect();
    Ok(VarianceReport {
        f_kind: f.kind(),
        params: f.params(),
        n_max: f.n_max(),
        slope: loglog_slope(&points),
        rows,
    })
}

impl VarianceReport {
    /// CSV `Q,V,predicted,ratio` followed by `# slope=<value>`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "Q,V,predicted,ratio")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_num(r.q),
                fmt_num(r.v),
                fmt_num(r.predicted),
                r.ratio.map_or(String::new(), fmt_num)
            )?;
        }
        match self.slope {
            Some(s) => writeln!(w, "# slope={}", fmt_num(s))?,
            None => writeln!(w, "# slope=undefined")?,
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    /// `max / min` of `V / Q^2` over the rows.
    pub fn q_squared_spread(&self) -> f64 {
        let normalized: Vec<f64> = self.rows.iter().map(|r| r.v / (r.q * r.q)).collect();
        let max = normalized.iter().cloned().fold(f64::MIN, f64::max);
        let min = normalized.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{arithmetic_table, build_sieve, smooth_indicator_table};
    use proptest::prelude::*;

    fn one(n: usize) -> FunctionTable {
        arithmetic_table(&build_sieve(n).unwrap(), FunctionKind::One).unwrap()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn residue_buckets() {
        let s = residue_sums(&one(7), 3);
        assert_eq!(s, vec![2.0, 3.0, 2.0]);
        let ctx = build_sieve(100).unwrap();
        let omega = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        assert_eq!(residue_sums(&omega, 1), vec![omega.sum()]);
        let s = residue_sums(&omega, 7);
        for (a, &sa) in s.iter().enumerate() {
            let direct: f64 = (1..=100)
                .filter(|n| n % 7 == a)
                .map(|n| omega.value(n))
                .sum();
            assert_eq!(sa, direct);
        }
    }

    #[test]
    fn single_modulus_values() {
        let ctx = build_sieve(50).unwrap();
        let omega = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        assert_eq!(variance_single_modulus(&omega, 2), 0.0);
        assert_eq!(variance_single_modulus(&omega, 1), 0.0);
        assert_eq!(variance_single_modulus(&one(7), 3), 0.5);
        assert_eq!(variance_single_modulus(&one(8), 4), 0.0);
    }

    #[test]
    fn full_variance_values() {
        assert_eq!(variance(&one(7), 3.0).unwrap(), 0.5);
        assert_eq!(variance(&one(7), 3.9).unwrap(), 0.5);
        let ctx = build_sieve(200).unwrap();
        let omega = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        assert_eq!(variance(&omega, 2.0).unwrap(), 0.0);
        let fast = variance(&omega, 37.0).unwrap();
        let slow = variance_bruteforce(&omega, 37.0);
        assert!(rel_close(fast, slow, 1e-9), "{fast} vs {slow}");
    }

    #[test]
    fn q_range_checked() {
        let f = one(20);
        assert!(variance(&f, 1.0).is_err());
        assert!(variance(&f, 21.0).is_err());
        assert!(variance(&f, f64::NAN).is_err());
        assert!(variance(&f, 20.0).is_ok());
    }

    #[test]
    fn bruteforce_scales_quadratically() {
        let ctx = build_sieve(60).unwrap();
        let sigma = arithmetic_table(&ctx, FunctionKind::Sigma).unwrap();
        let base = variance_bruteforce(&sigma, 12.0);
        let scaled = variance_bruteforce(&sigma.scaled(3.0), 12.0);
        assert!(rel_close(scaled, 9.0 * base, 1e-12));
        assert_eq!(variance_bruteforce(&sigma, 2.0), 0.0);
    }

    #[test]
    fn profile_report() {
        let ctx = build_sieve(400).unwrap();
        let omega = arithmetic_table(&ctx, FunctionKind::Omega).unwrap();
        let qs = [10.0, 50.0, 120.0, 400.0];
        let report = variance_profile(&omega, &qs, |_| 1.0).unwrap();
        for (row, &q) in report.rows.iter().zip(&qs) {
            assert_eq!(row.v, variance(&omega, q).unwrap());
            assert_eq!(row.ratio, Some(row.v));
        }
        assert!(report.slope.is_some());
        let single = variance_profile(&omega, &[50.0], |q| q * q).unwrap();
        assert_eq!(single.slope, None);
        assert!(variance_profile(&omega, &[], |_| 1.0).is_err());
        assert!(variance_profile(&omega, &[50.0, 10.0], |_| 1.0).is_err());
        let zero_pred = variance_profile(&omega, &[50.0], |_| 0.0).unwrap();
        assert_eq!(zero_pred.rows[0].ratio, None);
    }

    #[test]
    fn report_serialization() {
        let report = variance_profile(&one(7), &[3.0], |q| q * q).unwrap();
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "Q,V,predicted,ratio\n3,0.5,9,0.0555555555555556\n# slope=undefined\n"
        );
        let mut json = Vec::new();
        report.write_json(&mut json).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(parsed["rows"][0]["Q"], 3.0);
        assert_eq!(parsed["rows"][0]["V"], 0.5);
        assert_eq!(parsed["slope"], serde_json::Value::Null);
        assert_eq!(parsed["f_kind"], "one");
    }

    #[test]
    fn smooth_table_oracle() {
        let ctx = build_sieve(137).unwrap();
        let smooth = smooth_indicator_table(&ctx, (137f64).sqrt()).unwrap();
        let fast = variance(&smooth, 37.0).unwrap();
        assert!(rel_close(fast, variance_bruteforce(&smooth, 37.0), 1e-9));
    }

    proptest! {
        #[test]
        fn homogeneous_nonnegative_monotone(
            values in prop::collection::vec(-50i32..50, 20..120),
            c in prop::sample::select(vec![2.0, 10.0]),
        ) {
            let f = FunctionTable::from_values(values.iter().map(|&v| v as f64).collect()).unwrap();
            let n = f.n_max();
            let contributions = modulus_contributions(&f, n);
            prop_assert!(contributions.iter().all(|&c| c >= 0.0));
            prop_assert_eq!(contributions[1], 0.0);
            let q1 = (n / 3).max(2) as f64;
            let q2 = n as f64;
            let v1 = variance(&f, q1).unwrap();
            let v2 = variance(&f, q2).unwrap();
            prop_assert!(v2 >= v1);
            let scaled = variance(&f.scaled(c), q2).unwrap();
            prop_assert!(rel_close(scaled, c * c * v2, 1e-12) || (v2 == 0.0 && scaled == 0.0));
        }
    }
}
