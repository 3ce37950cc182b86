//! Canonical metric of a level set by the three routes, and pseudo-sphere
//! signatures.

use specgeo::hypersurface::{canonical_metric, metric_routes, pseudo_sphere_signature, HypersurfacePoint};
use specgeo::{parse_poly, Surd};

fn main() -> specgeo::Result<()> {
    let h = parse_poly("x1*x2*x3", 3)?;
    let x0 = vec![Surd::from(1); 3];
    let p = HypersurfacePoint::exact(&h, &x0)?;
    let [a, b, c] = metric_routes(&h, &x0, &p.tangent_basis)?;
    println!("routes agree: {}", a == b && b == c);
    let g = canonical_metric(&h, &x0)?;
    println!("g at (1,1,1) in basis {:?}:\n{}signature {}", p.tangent_basis, g.exact.unwrap(), g.signature);

    println!("\npseudo-spheres {{q_kl = 1}} at e1:");
    for k in 1..=4 {
        for l in 0..=4 - k {
            if k + l >= 2 {
                println!("  (k, l) = ({k}, {l}): {}", pseudo_sphere_signature(k, l)?);
            }
        }
    }
    Ok(())
}
