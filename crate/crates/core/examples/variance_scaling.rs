//! Variance of the constant function over a geometric grid of moduli bounds.
//!
//!     cargo run --release --example variance_scaling -- 20000

use apvar::asymptotics::{predicted_lower_bound, PredictionInput, ShapeKind};
use apvar::experiment::QGrid;
use apvar::sieve::{arithmetic_table, build_sieve, FunctionKind};
use apvar::variance::variance_profile;

fn main() -> apvar::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().expect("N"));
    let ctx = build_sieve(n)?;

    let grid = QGrid::Geometric {
        min: (n as f64).powf(0.7),
        max: n as f64,
        points: 4,
    };
    for kind in [FunctionKind::One, FunctionKind::Omega] {
        let f = arithmetic_table(&ctx, kind)?;
        let shape = if kind == FunctionKind::One {
            ShapeKind::D1Q2
        } else {
            ShapeKind::OmegaMain
        };
        let report = variance_profile(&f, &grid.values(), |q| {
            let input = PredictionInput::new(shape, n as f64, q);
            predicted_lower_bound(&input).map_or(f64::NAN, |p| p.value)
        })?;
        println!("f = {kind}");
        report.write_csv(std::io::stdout().lock())?;
        println!("max/min V/Q^2 = {:.4}\n", report.q_squared_spread());
    }
    Ok(())
}
