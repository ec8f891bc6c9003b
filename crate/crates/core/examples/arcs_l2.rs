//! Major/minor arc decomposition and the minor-arc L2 mass of `omega`.
//! Writes the arc list as CSV and the sampled exponential sum as binary.
//!
//!     cargo run --release --example arcs_l2 -- /tmp/arcs

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use apvar::circle::{build_arc_system, exp_sum_grid, l2_split, ExpSumGrid};
use apvar::sieve::{arithmetic_table, build_sieve, FunctionKind};

fn main() -> apvar::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "target/arcs_l2".into()),
    );
    std::fs::create_dir_all(&dir)?;

    let n = 10_000;
    let ctx = build_sieve(n)?;
    let f = arithmetic_table(&ctx, FunctionKind::Omega)?;
    let grid = exp_sum_grid(&f, 4 * n, None)?;

    println!("Q,Q0,arcs,major_measure,major,minor,minor/N");
    for q in [1000.0, 2000.0, 4000.0, 8000.0] {
        let q0 = n as f64 * (n as f64).ln() / q;
        let arcs = build_arc_system(5.0, q0, q)?;
        let split = l2_split(&grid, &arcs);
        println!(
            "{q},{q0:.3},{},{:.4},{:.1},{:.1},{:.4}",
            arcs.major.len(),
            arcs.total_major_measure,
            split.major,
            split.minor,
            split.minor / n as f64
        );
        if q == 8000.0 {
            arcs.write_csv(BufWriter::new(File::create(dir.join("arcs_q8000.csv"))?))?;
        }
    }

    let path = dir.join("omega_grid.bin");
    grid.write_binary(BufWriter::new(File::create(&path)?))?;
    let back = ExpSumGrid::read_binary(File::open(&path)?)?;
    assert_eq!(back.values(), grid.values());
    println!(
        "wrote {} and arcs_q8000.csv to {}",
        path.display(),
        dir.display()
    );
    Ok(())
}
