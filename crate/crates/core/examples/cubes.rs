//! Exact composition in the little cubes operad.

use splice_operad::cubes::{
    cube_compose, rat, sigma_act, CubesElement, LittleCube, LittleInterval,
};
use splice_operad::perm::Perm;

fn interval(lo: i64, hi: i64, den: i64) -> LittleInterval {
    LittleInterval::new(rat(hi - lo, 2 * den), rat(hi + lo, 2 * den)).expect("inside [-1, 1]")
}

fn main() -> splice_operad::error::Result<()> {
    // Two squares side by side, and three thin strips stacked vertically.
    let j = CubesElement::new(
        2,
        vec![
            LittleCube::new(vec![interval(-4, 0, 4), interval(-2, 2, 4)]),
            LittleCube::new(vec![interval(1, 4, 4), interval(-4, 4, 4)]),
        ],
    )?;
    let l = CubesElement::new(
        2,
        vec![
            LittleCube::new(vec![interval(-3, 3, 3), interval(-3, -1, 3)]),
            LittleCube::new(vec![interval(-3, 3, 3), interval(-1, 1, 3)]),
            LittleCube::new(vec![interval(-3, 3, 3), interval(1, 3, 3)]),
        ],
    )?;
    let composite = cube_compose(&j, &[l.clone(), CubesElement::identity(2)])?;
    println!("J = {j}");
    println!("J∘(L, id) = {composite}");

    let swap = Perm::transposition(2, 1, 2)?;
    let lhs = cube_compose(&sigma_act(&j, &swap)?, &[CubesElement::identity(2), l])?;
    println!("(J.swap)∘(id, L) = {lhs}");
    println!(
        "{}",
        serde_json::to_string_pretty(&composite.to_json()).expect("json")
    );
    Ok(())
}
