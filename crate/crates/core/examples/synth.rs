//! Writes the two synthetic datasets as CSV files.
//!
//! cargo run --example synth -- OUT_DIR [SEED]

use std::path::PathBuf;

use tabkit::synthetic::{fraud_set, transactions, FraudConfig};
use tabkit::{write_csv, CsvOptions};

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    std::fs::create_dir_all(&dir)?;
    let opts = CsvOptions::default();
    std::fs::write(
        dir.join("transactions.csv"),
        write_csv(&transactions(5000, seed), &opts),
    )?;
    std::fs::write(
        dir.join("fraud.csv"),
        write_csv(&fraud_set(&FraudConfig::default(), seed), &opts),
    )?;
    println!(
        "wrote {}/transactions.csv and {}/fraud.csv",
        dir.display(),
        dir.display()
    );
    Ok(())
}
