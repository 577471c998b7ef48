//! Reduced words in free groups with cube letters, and the action of
//! overlapping cubes on words.

use splice_operad::overlap::OverlapElement;
use splice_operad::word::{conjugate, kappa_prime_act, reduce, GroupWord};

fn main() -> splice_operad::error::Result<()> {
    let w: GroupWord = "K.a P.b P.b^-1 G.g K.a^-1".parse()?;
    println!("{w} reduces to {}", reduce(&w));

    let x: GroupWord = "G.x".parse()?;
    let y: GroupWord = "G.y".parse()?;
    println!("x conjugated by y: {}", conjugate(&y, &x));

    let e = OverlapElement::stacked_identities(1, 2);
    println!(
        "stacked action on (x, y): {}",
        kappa_prime_act(&e, &[x, y])?
    );
    println!("empty word prints as {}", GroupWord::empty());
    Ok(())
}
