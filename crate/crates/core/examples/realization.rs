//! Signed cycle types realisable by cyclic actions on satellite patterns.

use splice_operad::perm::SignedCycleType;
use splice_operad::realize::{
    admissible_cycles, check_representation, enumerate_types, ActionParams, Convention,
};

fn main() -> splice_operad::error::Result<()> {
    let order_ten = ActionParams::new(10, 5, 2, Convention::SecondIsP)?;
    for t in admissible_cycles(&order_ten) {
        println!("template {t}");
    }
    let t = SignedCycleType::parse("(5)-")?;
    println!("{t}: {}", check_representation(&order_ten, &t));

    let order_six = ActionParams::new(6, 3, 2, Convention::SecondIsP)?;
    let t = SignedCycleType::parse("(6)+ (1)+")?;
    println!("{t}: {}", check_representation(&order_six, &t));
    let t = SignedCycleType::parse("(2)+ (1)+")?;
    println!("{t}: {}", check_representation(&order_ten, &t));

    for t in enumerate_types(&order_six, 7) {
        let w = t.witness();
        println!("k = 7: {t}, witness order {}", w.order());
    }
    Ok(())
}
