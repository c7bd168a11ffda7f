//! Structural property checks on quantizer codes.

use quantcap::commands::validate_quantizer;
use quantcap::polynomial::{RealPolynomial, RootList};
use quantcap::quantizer::Quantizer;

fn main() -> quantcap::Result<()> {
    let f1 = RealPolynomial::from_roots(&RootList::new(vec![-2.0, 1.5]), 1.0);
    let rows = vec![vec![-1.0, 1.0], vec![-0.5, 0.5]];

    // every threshold is crossed twice by both quadratics
    let full = Quantizer::new(3, 2, vec![f1.clone(), RealPolynomial::new(vec![-1.0, 0.0, 1.0])], rows.clone())?;
    println!("{}", validate_quantizer(&full)?);

    // a linear second front-end leaves transitions unused
    let short = Quantizer::new(3, 2, vec![f1, RealPolynomial::new(vec![0.3, 1.0])], rows)?;
    println!("{}", validate_quantizer(&short)?);
    Ok(())
}
