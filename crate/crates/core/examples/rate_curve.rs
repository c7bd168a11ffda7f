//! Achievable rate versus SNR for a few front-end configurations.

use std::io;

use quantcap::capacity::{rate_curve, write_rate_csv, RateCurveParams};

fn main() -> quantcap::Result<()> {
    let snrs: Vec<f64> = (0..=10).map(|k| 3.0 * k as f64).collect();
    for (n_q, ell, delta) in [(1, 2, 2), (3, 2, 2)] {
        println!("# n_q={n_q} ell={ell} delta={delta}");
        let rows = rate_curve(&RateCurveParams::new(n_q, ell, delta, snrs.clone()))?;
        write_rate_csv(&rows, io::stdout().lock())?;
    }
    Ok(())
}
