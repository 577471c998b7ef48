//! Permutations, block permutations and signed cycle types.

use splice_operad::perm::{block_perm, signed_cycle_type, Perm, SignedPerm};

fn main() -> splice_operad::error::Result<()> {
    let sigma = Perm::parse_cycles("(1 2 3)")?;
    let tau = Perm::transposition(3, 1, 2)?;
    println!(
        "sigma = {sigma}, tau = {tau}, sigma∘tau = {}",
        sigma.compose(&tau)?
    );
    println!("order of sigma: {}", sigma.order());

    // Blocks of sizes 2, 1, 3 permuted by sigma, the first block twisted.
    let inners = [
        Perm::transposition(2, 1, 2)?,
        Perm::identity(1),
        Perm::identity(3),
    ];
    let block = block_perm(&sigma, &[2, 1, 3], &inners)?;
    println!("block permutation: {block}");

    let w = SignedPerm::parse("(1 2 3 4 5)- (6)")?;
    println!("signed permutation {w}");
    println!(
        "signed cycle type {}, order {}",
        signed_cycle_type(&w),
        w.order()
    );
    Ok(())
}
