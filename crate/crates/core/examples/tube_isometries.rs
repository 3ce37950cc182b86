//! Pull the tube metric back through the standard maps and report the
//! deviation from the original metric.

use specgeo::parse_poly;
use specgeo::rng::seeded;
use specgeo::tube::{check_cone_isometry, check_pullback_isometry, sample_tube_points, Tube, TubeMap};

fn main() -> specgeo::Result<()> {
    let h = parse_poly("x1*x2*x3", 3)?;
    let tube = Tube::new(&h)?;
    let pts = sample_tube_points(&h, &[1.0, 1.0, 1.0], 10, &mut seeded(1))?;
    let maps = [
        TubeMap::Scaling(2.5),
        TubeMap::Translation(vec![1.0, -2.0, 0.5]),
        TubeMap::Reflection,
        TubeMap::Inversion,
        TubeMap::Linear(nalgebra::DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])),
    ];
    for m in &maps {
        println!("{:<12} {:.3e}", m.name(), check_pullback_isometry(&tube, m, &pts)?);
    }
    let ys: Vec<Vec<f64>> = pts.iter().map(|w| w[3..].to_vec()).collect();
    println!("inversion restricted to the cone: {:.3e}", check_cone_isometry(&tube, &TubeMap::Inversion, &ys)?);
    for w in &pts[..3] {
        let g = tube.metric(w)?;
        let diff = (&g - tube.metric_fd(w)?).amax() / g.amax().max(1.0);
        println!("finite differences vs closed form: {diff:.2e}");
    }
    Ok(())
}
