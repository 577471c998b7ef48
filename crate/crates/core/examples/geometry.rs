//! Smooth kernels and Möbius scalings on spheres.

use splice_operad::geom::{bump, moebius_scale, selftest, shrink, stereo, SpherePoint};

fn main() -> splice_operad::error::Result<()> {
    println!(
        "bump(0) = {}, bump(1/2) = {}, bump(1) = {}",
        bump(0.0),
        bump(0.5),
        bump(1.0)
    );
    let (x, v) = shrink(0.5, &[0.2, 0.1], &[1.0, 0.0])?;
    println!("shrink at t = 1/2: x = {x:?}, v = {v:?}");

    let p = SpherePoint::new(vec![0.0, 0.0, 1.0])?;
    let q = SpherePoint::new(vec![0.6, 0.0, 0.8])?;
    let m = moebius_scale(&p, 0.5, &q)?;
    println!("M_(p, 1/2)(q) = {:?}", m.coords());
    println!(
        "stereographic image from -p: {:?}",
        stereo(&p.antipode(), &m)?
    );
    print!("{}", selftest(7, 200));
    Ok(())
}
