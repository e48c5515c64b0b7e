//! Motivic local zeta functions and their counting specializations.

use germzeta::curve::CurveGerm;
use germzeta::semigroup::LocalRing;
use germzeta::zeta_local::{counting_specialization, local_zeta, poincare_series};

fn main() -> germzeta::Result<()> {
    let cusp = LocalRing::new(&CurveGerm::parse("y^2 - x^3")?)?;
    let z = local_zeta(&cusp, 7)?;
    println!("cusp:");
    for (n, c) in z.joint.terms() {
        println!("    t^{:<2} {c}", n[0]);
    }
    println!("    P_g = {:?}", poincare_series(&z).univariate_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let node = LocalRing::new(&CurveGerm::parse("x*y")?)?;
    let z = local_zeta(&node, 3)?;
    let at3 = counting_specialization(&z.joint, 3);
    println!("node:");
    for (n, c) in z.joint.terms() {
        println!("    t^{n:?} {:<12} at q = 3: {}", c.factored(), at3[n]);
    }
    Ok(())
}
