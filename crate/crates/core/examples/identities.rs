//! The exact-identity self check, driven through a config string.

use apvar::experiment::{parse_config, run_experiment};

fn main() -> apvar::Result<()> {
    let config = parse_config(
        "experiment = identities\n\
         N = 100000\n",
    )?;
    let outcome = run_experiment(&config)?;
    print!("{}", outcome.rendered);
    std::process::exit(outcome.exit_code());
}
