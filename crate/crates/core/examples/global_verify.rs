//! Point counts, Weil zeta and the global factorization for curves over F_p.

use germzeta::curve::GlobalCurve;
use germzeta::zeta_global::{count_points, divisor_zeta, verify_global_factorization};

fn main() -> germzeta::Result<()> {
    let budget = 10_000_000;
    for (text, p) in [("y^2 - x^3 - x^2", 3), ("y^2 - x^3", 5), ("x^2 + y^2 - 1", 5), ("y^2 - x^3 - x - 1", 5)] {
        let curve = GlobalCurve::parse(text, p, budget)?;
        let pc = count_points(&curve, 4, budget)?;
        println!("{text} over F_{p}");
        println!("    singular points {:?}", curve.singular_points().iter().map(|s| s.point.to_string()).collect::<Vec<_>>());
        println!("    N = {:?}, smooth model {:?}", pc.counts, pc.adjusted);
        let ca: Vec<String> = divisor_zeta(&curve, 4, budget)?.iter().map(|c| c.to_string()).collect();
        println!("    effective Cartier divisors by degree {ca:?}");
        let report = verify_global_factorization(&curve, 6, budget)?;
        println!("    factorization to T^6: {}, unit-index form: {}", report.equal, report.unit_index_form);
    }
    Ok(())
}
