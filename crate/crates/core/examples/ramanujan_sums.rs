//! Ramanujan sums and the twisted sums `sum f(n) c_q(n)` of smooth numbers.

use apvar::circle::BumpFunction;
use apvar::oracle::ramanujan_closed_form;
use apvar::sieve::{build_sieve, mobius, ramanujan_row, smooth_indicator_table, twisted_sum};

fn main() -> apvar::Result<()> {
    println!("c_q(n), q = 1..=12, n = 1..=12");
    for q in 1..=12u64 {
        let row = ramanujan_row(q, 12);
        assert!(row
            .iter()
            .enumerate()
            .all(|(i, &c)| c == ramanujan_closed_form(q, i as u64 + 1)));
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
        println!("q={q:>2} {}", cells.join(""));
    }

    let n = 1_000_000;
    let u: f64 = 1.5;
    let ctx = build_sieve(n)?;
    let f = smooth_indicator_table(&ctx, (n as f64).powf(1.0 / u))?;
    let bump = BumpFunction::new();
    println!("\ntwisted sums of N^(1/u)-smooth numbers, N = {n}, u = {u}");
    println!("q,mu,plain/(-mu N log u),weighted");
    for q in [101u64, 211, 499, 997] {
        let reference = -(mobius(q) as f64) * n as f64 * u.ln();
        let plain = twisted_sum(&f, q, None);
        let weighted = twisted_sum(&f, q, Some(&bump));
        println!("{q},{},{:.4},{:.6}", mobius(q), plain / reference, weighted);
    }
    Ok(())
}
