//! List the module catalog and check the implemented invariants.

use specgeo::pv::{catalog, infinitesimal_invariance, orbit_dimension, regularity_check};
use specgeo::rng::seeded;

fn main() -> specgeo::Result<()> {
    let mut rng = seeded(5);
    for e in catalog() {
        let Ok(h) = e.invariant() else {
            println!("{:<24} {:<8} dim {:>2}  (metadata only)", e.name, e.group, e.dim);
            continue;
        };
        let inv = infinitesimal_invariance(&e, 10, &mut rng)?;
        let orb = orbit_dimension(&e, &e.reference)?;
        let reg = regularity_check(h, &e.reference)?;
        println!(
            "{:<24} {:<8} dim {:>2}  residual {:.1e}  orbit {}/{}  Hessian det {}",
            e.name, e.group, e.dim, inv.max_residual, orb.rank, orb.dim, reg.hessian_det
        );
    }
    Ok(())
}
