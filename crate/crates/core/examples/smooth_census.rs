//! Census of smooth numbers against the `1 - log u` main term.

use apvar::asymptotics::{smooth_count, smooth_count_prediction};
use apvar::experiment::CENSUS_U;
use apvar::sieve::build_sieve;

fn main() -> apvar::Result<()> {
    let n = 1_000_000;
    let ctx = build_sieve(n)?;
    println!("u,y,Psi(N;y),Psi/N,1-log u");
    for u in CENSUS_U {
        let y = (n as f64).powf(1.0 / u);
        let psi = smooth_count(&ctx, n, y)?;
        println!(
            "{u},{y:.1},{psi},{:.5},{:.5}",
            psi as f64 / n as f64,
            smooth_count_prediction(n as f64, 1.0, y) / n as f64
        );
    }
    Ok(())
}
