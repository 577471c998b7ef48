//! Splice trees of long knots: parsing, canonical forms, complexity and
//! additivity of grafts.

use splice_operad::tree::{
    canonicalize, check_additivity, complexity, parse_tree, splice_graft, Catalogue, Generator,
    SpliceTree,
};

fn main() -> splice_operad::error::Result<()> {
    let cat = Catalogue::bundled();
    for text in [
        "unknot",
        "sum(T(3,2),sum(fig8,T(2,3)))",
        "cable(2,-1;mirror(T(2,3)))",
        "splice(whitehead;rev(k6_1))",
        "splice(borromean;T(2,5),T(2,3))",
    ] {
        let t = canonicalize(&cat, &parse_tree(&cat, text)?)?;
        println!("{text:<36} -> {t}  (complexity {})", complexity(&cat, &t)?);
    }

    let trefoil = SpliceTree::torus(2, 3)?;
    let sum = parse_tree(&cat, "sum(T(2,5),fig8)")?;
    let gen = Generator::Keychain(2);
    let graft = splice_graft(&cat, &gen, &[trefoil.clone(), sum.clone()])?;
    println!(
        "KC(2) graft {graft}: {:?}",
        check_additivity(&cat, &gen, &[trefoil, sum])?
    );
    print!("{}", graft.to_dot());
    Ok(())
}
