//! Sums of key algebras whose invariant has small degree.

use specgeo::pv::enumerate_key_solutions;

fn main() {
    let d_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    println!("{:>3} {:>4}  {:<20} invariant", "d", "rank", "mu^2");
    for row in enumerate_key_solutions(d_max) {
        println!("{:>3} {:>4}  {:<20} {}", row.degree, row.rank, row.mu_sq.join(","), row.polynomial);
    }
}
