//! Quadratic one-bit front-ends that separate 2 n_q distinct outputs.

use quantcap::capacity::high_snr_capacity;
use quantcap::code::synthesize_quantizer_theorem1;
use quantcap::polynomial::RootList;

fn main() -> quantcap::Result<()> {
    for n_q in [2, 3, 4, 6, 8] {
        let roots = RootList::new((0..2 * n_q).map(|i| i as f64 - n_q as f64 + 0.5).collect());
        let q = synthesize_quantizer_theorem1(&roots)?;
        let code = q.associated_code()?;
        let bits = high_snr_capacity(n_q, 2, 2).exact_bits().unwrap_or(f64::NAN);
        println!("n_q = {n_q}: |C| = {}, high-SNR capacity {bits:.4} bits", code.code_size());
        if n_q == 3 {
            println!("  code {}", code.code);
        }
    }
    Ok(())
}
