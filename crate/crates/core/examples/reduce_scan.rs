//! Which primes change the resolution or the value semigroup of a curve.

use germzeta::curve::{parse_curve, primes_in};
use germzeta::resolution::good_reduction_scan;
use germzeta::semigroup::reduction_semigroup_scan;

fn main() -> germzeta::Result<()> {
    let primes = primes_in(2, 31);
    for text in ["y^2 - x^3 - x^2", "y^2 - 9*x^2 - x^3", "y^2 - x^3/6"] {
        let f = parse_curve(text)?;
        let process = good_reduction_scan(&f, &primes)?;
        let semigroup = reduction_semigroup_scan(&f, &primes)?;
        println!("{text}");
        for (a, b) in process.iter().zip(&semigroup) {
            if !a.is_good() || !b.is_good() {
                println!("    p = {:<2} process {:?}, semigroup {:?}", a.prime, a.status, b.status);
            }
        }
    }
    Ok(())
}
