//! Parse a polynomial, polarize it and split it by multidegree.

use specgeo::{parse_poly, BlockStructure, Surd};

fn main() -> specgeo::Result<()> {
    let h = parse_poly("x1*x2^2 - 1/2*x1*x3^2 - 1/2*x1*x4^2", 4)?;
    println!("h = {h}  (n = {}, d = {})", h.n(), h.degree());

    let form = h.polarize();
    let x: Vec<Surd> = [2, 1, 1, 0].iter().map(|&v| Surd::from(v)).collect();
    let y: Vec<Surd> = [0, 1, 0, 1].iter().map(|&v| Surd::from(v)).collect();
    println!("H(x,x,x) = {}   h(x) = {}", form.eval(&[x.clone(), x.clone(), x.clone()])?, h.eval(&x));
    println!("H(x,x,y) = {}", form.eval(&[x.clone(), x.clone(), y])?);

    let blocks = BlockStructure::consecutive(&[1, 1, 2]);
    for (md, part) in h.multidegree_split(&blocks)? {
        println!("multidegree {md:?}: {part}");
    }

    let lh = h.log_hessian(&x)?;
    println!("Hess log h at x:\n{lh}");
    Ok(())
}
