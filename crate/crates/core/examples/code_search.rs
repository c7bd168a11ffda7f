//! Largest admissible code found by exhaustive search, next to the
//! closed-form bounds.

use quantcap::capacity::gamma_bounds;
use quantcap::code::search_max_code;

fn main() -> quantcap::Result<()> {
    println!("n_q ell delta  search  bounds");
    for (n_q, ell, delta) in [(2, 2, 2), (3, 2, 2), (3, 2, 1), (4, 2, 3), (2, 3, 2), (4, 2, 4)] {
        let s = search_max_code(n_q, ell, delta)?;
        let (lo, hi) = gamma_bounds(n_q, ell, delta);
        println!("{n_q:>3} {ell:>3} {delta:>5}  {:>6}  [{lo}, {hi}]   witness {}", s.gamma, s.witness);
    }
    Ok(())
}
