//! The r-map cone of a cubic: isotropy, the gamma pull-back, g^c = g^s and
//! the 4h(Y) identity.

use num_complex::Complex;
use specgeo::corpus;
use specgeo::rng::seeded;
use specgeo::special::{self, ConePoint, RMap};
use specgeo::tube::sample_tube_points;
use specgeo::Surd;

fn main() -> specgeo::Result<()> {
    let e = corpus::polynomial("cubic3").expect("shipped");
    println!("h = {}", e.poly);
    let f = RMap::new(&e.poly)?;
    let pts = sample_tube_points(&e.poly, &e.seed, 5, &mut seeded(3))?;
    for w in &pts {
        let mut z = vec![Complex::new(1.0, 0.0)];
        z.extend((0..3).map(|j| Complex::new(w[j], w[3 + j])));
        let p = ConePoint::new(&f, &z)?;
        println!("isotropy {:.1e}  metric routes {:.1e}", p.isotropy_defect(), special::cone_metric_routes(&f, &z)?);
    }
    let dev = special::check_gc_equals_gs(&e.poly, &pts)?;
    println!("g^c vs g^s: metric {:.1e}, potential shift {:.1e}", dev.metric, dev.potential);

    let z: Vec<Complex<Surd>> =
        [(1, 2), (-3, 1), (1, 5)].iter().map(|&(a, b)| Complex::new(Surd::ratio(a, 3), Surd::ratio(b, 2))).collect();
    println!("4h residual at a rational point: {}", special::lemma_4h_residual(&e.poly, &z)?);
    println!("gamma signature on T*C^4: {}", special::gamma_signature(3));
    Ok(())
}
