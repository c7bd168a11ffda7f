//! Build a binary code with prescribed per-position transition counts,
//! realize it as a quantizer, and read the code back.

use quantcap::code::{construct_code, synthesize_quantizer, TransitionSpec};
use quantcap::polynomial::RootList;

fn main() -> quantcap::Result<()> {
    let spec = TransitionSpec::binary(vec![4, 4, 6]);
    let code = construct_code(&spec)?;
    println!("code  {code}");
    println!("|C| = {}, counts {:?}", code.code_size(), code.transition_counts());

    let roots = RootList::new((0..code.len() - 1).map(|i| 0.5 * i as f64 - 2.0).collect());
    let q = synthesize_quantizer(&code, &roots)?;
    for (j, f) in q.polys().iter().enumerate() {
        println!("f_{} = {f}", j + 1);
    }
    let back = q.associated_code()?;
    println!("read back matches: {}", back.code == code);
    Ok(())
}
