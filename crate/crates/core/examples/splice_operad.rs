//! Symbolic splicing diagrams: composition, the associativity certificate and
//! its negative control.

use splice_operad::perm::Perm;
use splice_operad::splice::{
    splice_act, splice_compose, verify_associativity, verify_associativity_with, ComposeMode,
    SpliceElement,
};
use splice_operad::word::GroupWord;

fn main() -> splice_operad::error::Result<()> {
    let j = SpliceElement::generator("J", 2, [(1, 2)], Perm::identity(2))?;
    let a = SpliceElement::generator("A", 2, [], Perm::transposition(2, 1, 2)?)?;
    let b = SpliceElement::generator("B", 1, [], Perm::identity(1))?;
    let c = SpliceElement::generator("C", 0, [], Perm::identity(0))?;
    let composite = splice_compose(&j, &[a.clone(), b.clone()])?;
    println!("J∘(A, B) = {composite}");

    let f: Vec<GroupWord> = ["K.x", "K.y", "K.z"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    println!("acting on (x, y, z): {}", splice_act(&composite, &f)?);

    let ms = vec![vec![c.clone(), b.clone()], vec![c.clone()]];
    let report = verify_associativity(&j, &[a.clone(), b.clone()], &ms);
    println!("associativity holds: {}", report.holds);
    let broken = verify_associativity_with(&j, &[a, b], &ms, ComposeMode::DropConjugator);
    match broken.mismatch {
        Some(m) => println!("without the closing conjugator: {m}"),
        None => println!("negative control unexpectedly passed"),
    }
    println!(
        "{}",
        serde_json::to_string(&composite.to_json()).expect("json")
    );
    Ok(())
}
