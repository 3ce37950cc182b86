//! Build normal J-algebras from the rank-2 series and from isometric maps,
//! and run the verification suite on each.

use specgeo::jalgebra::{build_u0_rank2, build_u0_rank3, IsometricMap};
use specgeo::report::Tolerances;
use specgeo::suites::jalg_family;

fn main() -> specgeo::Result<()> {
    let mut algebras = vec![build_u0_rank2(1, 2)?, build_u0_rank2(2, 3)?];
    algebras.push(build_u0_rank3(&IsometricMap::composition(2)?)?);
    algebras.push(build_u0_rank3(&IsometricMap::zero(1, 1))?);
    for a in &algebras {
        println!("{}: dim {}, h = {}", a.name, a.algebra.dim(), a.h);
        print!("{}", jalg_family(a, Tolerances::default())?);
    }
    Ok(())
}
