//! Cauchy–Schwarz lower bound for the minor-arc mass of `omega`, using the
//! divisor-sum comparison function built from primes up to `R`.

use apvar::circle::{build_arc_system, cs_chain_report, BumpFunction};
use apvar::sieve::{arithmetic_table, build_sieve, FunctionKind};

fn main() -> apvar::Result<()> {
    let n = 1 << 14;
    let ctx = build_sieve(n)?;
    let f = arithmetic_table(&ctx, FunctionKind::Omega)?;
    let bump = BumpFunction::new();
    let r = (n as f64).powf(0.45) as usize;
    let prime = |p: usize| if ctx.is_prime(p) { 1.0 } else { 0.0 };

    println!("Q,minor l2,cross/denom,slack>=0");
    for beta in [0.7, 0.8, 0.9] {
        let q = (n as f64).powf(beta).floor();
        let arcs = build_arc_system(5.0, n as f64 * (n as f64).ln() / q, q)?;
        let cs = cs_chain_report(&f, &ctx, r, prime, &arcs, Some(&bump), 4 * n)?;
        println!(
            "{q},{:.2},{:.2},{}",
            cs.lhs,
            cs.bound().unwrap_or(f64::NAN),
            cs.slack() >= 0.0
        );
    }
    Ok(())
}
