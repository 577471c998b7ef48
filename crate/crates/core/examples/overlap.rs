//! Overlapping cubes: constraint posets, canonical witnesses and projection
//! from one dimension up.

use splice_operad::cubes::{rat, CubesElement, LittleCube, LittleInterval};
use splice_operad::overlap::{
    overlap_canonical, overlap_compose, project_to_overlap, OverlapElement,
};
use splice_operad::perm::Perm;

fn interval(lo: i64, hi: i64) -> LittleInterval {
    LittleInterval::new(rat(hi - lo, 8), rat(hi + lo, 8)).expect("inside [-1, 1]")
}

fn main() -> splice_operad::error::Result<()> {
    let cubes = vec![
        LittleCube::new(vec![interval(-4, 1)]),
        LittleCube::new(vec![interval(-1, 4)]),
        LittleCube::new(vec![interval(2, 3)]),
    ];
    let e = overlap_canonical(1, cubes, &Perm::parse_cycles("(1 3)")?)?;
    println!("element {e}");
    println!("constraints (below, above): {:?}", e.constraints());
    println!("canonical witness {}", e.witness());

    let stacked = OverlapElement::stacked_identities(1, 2);
    let composite = overlap_compose(
        &e,
        &[
            stacked,
            OverlapElement::identity(1),
            OverlapElement::identity(1),
        ],
    )?;
    println!("composite {composite}");
    print!("{}", composite.to_dot());

    // Heights along the last axis decide the stacking order.
    let square = |x: (i64, i64), y: (i64, i64)| {
        LittleCube::new(vec![interval(x.0, x.1), interval(y.0, y.1)])
    };
    let c = CubesElement::new(2, vec![square((-4, 0), (1, 4)), square((-2, 2), (-4, -1))])?;
    println!("projection of {c}: {}", project_to_overlap(&c)?);
    Ok(())
}
