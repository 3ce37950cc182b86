//! Run suites from library code and inspect the records, without the CLI.

use specgeo::corpus;
use specgeo::report::{Status, Tolerances};
use specgeo::suites::{cone_check, tube_check, ConeSuite, TubeSuite};

fn main() -> specgeo::Result<()> {
    let tol = Tolerances::from_env().map_err(specgeo::Error::Precondition)?;
    let e = corpus::polynomial("x1sq_x2").expect("shipped");
    let reports = [
        tube_check(&e, TubeSuite::Product, 10, 1, tol)?,
        tube_check(&e, TubeSuite::Pullback, 10, 1, tol)?,
        cone_check(&e, ConeSuite::Lemma4h, 20, 1, tol)?,
    ];
    for r in &reports {
        print!("{r}");
    }
    let skipped: usize = reports.iter().map(|r| r.count(Status::Skip)).sum();
    println!("{} suites, {skipped} skipped checks", reports.len());
    println!("{}", serde_json::to_string(&reports[0]).expect("serializable"));
    Ok(())
}
