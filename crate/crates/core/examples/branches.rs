//! Branch parametrizations and valuations of functions on them.

use germzeta::algebra::Field;
use germzeta::branches::{puiseux_branches, value_of};
use germzeta::curve::{parse_curve, CurveGerm};

fn main() -> germzeta::Result<()> {
    let germ = CurveGerm::parse("y^2 - x^2 - x^3")?;
    let branches = puiseux_branches(&germ, 6)?;
    for (i, b) in branches.iter().enumerate() {
        println!("branch {i}: x = {}, y = {}", b.x, b.y);
    }
    for text in ["x", "y - x", "y + x", "y^2 - x^2"] {
        let z = parse_curve(text)?;
        println!("v({text}) = {}", value_of(&z, &branches)?);
    }

    // The cusp in characteristic 2 still has the branch (t^2, t^3).
    let cusp = CurveGerm::parse_in("y^2 + x^3", Field::Prime(2))?;
    let b = &puiseux_branches(&cusp, 8)?[0];
    println!("cusp over F_2: {}", b.to_json());
    Ok(())
}
