//! Brute-force jet enumeration against the closed formula for [I_n].

use germzeta::algebra::Field;
use germzeta::curve::CurveGerm;
use germzeta::oracle::brute_force_fibers;
use germzeta::semigroup::LocalRing;
use germzeta::zeta_local::ideal_class;

fn main() -> germzeta::Result<()> {
    for (text, q) in [("y^2 - x^3", 2), ("x*y", 3), ("y^2 - x^4", 3)] {
        let ring = LocalRing::new(&CurveGerm::parse_in(text, Field::Prime(q))?)?;
        println!("{text} over F_{q}");
        for c in brute_force_fibers(&ring, 4, 10_000_000)? {
            if c.fiber == 0 {
                continue;
            }
            let formula = ideal_class(&ring, &c.n)?;
            println!(
                "    n = {:?}: #F = {}, #PF = {}, #I = {}, formula {} = {}",
                c.n,
                c.fiber,
                c.projectivized,
                c.ideals,
                formula,
                formula.evaluate(q)
            );
        }
    }
    Ok(())
}
