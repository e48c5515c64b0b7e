//! Unit index of the local ring in its normalization, two ways.

use germzeta::algebra::Field;
use germzeta::curve::CurveGerm;
use germzeta::semigroup::LocalRing;
use germzeta::zeta_global::unit_index;

fn main() -> germzeta::Result<()> {
    for q in [2, 3, 5] {
        for text in ["y^2 - x^3", "x*y", "y^2 + x^2*y", "x*y*(x+y)"] {
            let ring = LocalRing::new(&CurveGerm::parse_in(text, Field::Prime(q))?)?;
            match unit_index(&ring, 10_000_000) {
                Ok(u) => println!("q = {q}  {text:<12} delta {} branches {} index {}", u.delta, u.branches, u.direct),
                Err(e) => println!("q = {q}  {text:<12} {e}"),
            }
        }
    }
    Ok(())
}
