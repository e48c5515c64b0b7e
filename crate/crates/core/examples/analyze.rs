//! Delta invariant, conductor and value semigroup of a germ given on the
//! command line (the cusp by default).

use germzeta::curve::CurveGerm;
use germzeta::semigroup::{semigroup_of, LocalRing};

fn main() -> germzeta::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "y^2 - x^3".into());
    let ring = LocalRing::new(&CurveGerm::parse(&text)?)?;
    let s = semigroup_of(&ring)?;
    println!("germ      {text}");
    println!("branches  {}", ring.d());
    println!("delta     {}", s.delta);
    println!("conductor {:?}", s.conductor);
    if let Some(g) = &s.generators {
        println!("generators {g:?}");
    }
    println!("{}", s.to_json());
    Ok(())
}
