//! Reflected and balanced Gray codes and their per-position transition counts.

use quantcap::code::{balanced_gray, reflected_gray};

fn main() {
    for n in 2..=6 {
        let r = reflected_gray(n);
        let b = balanced_gray(n);
        println!("n = {n}");
        println!("  reflected {:?}", r.transition_counts());
        println!("  balanced  {:?}", b.transition_counts());
    }
    println!("{}", balanced_gray(4));
}
