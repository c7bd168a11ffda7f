//! Two quadratic front-ends feeding ternary ADCs: transition points,
//! partition and associated code.

use quantcap::commands::{example_report, golden_quantizer};

fn main() -> quantcap::Result<()> {
    let q = golden_quantizer();
    for (j, (f, t)) in q.polys().iter().zip(q.thresholds()).enumerate() {
        println!("ADC {}: f(y) = {f}, thresholds {t:?}", j + 1);
    }
    let part = q.partition()?;
    for (iv, w) in part.intervals.iter().zip(&part.labels) {
        println!("  {iv} -> {w}");
    }
    let report = example_report()?;
    println!("{report}");
    report.check()
}
