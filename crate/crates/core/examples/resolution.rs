//! Blow-up resolution of a few germs: multiplicity sequences and branch counts.

use germzeta::curve::CurveGerm;
use germzeta::resolution::resolve_germ;

fn main() -> germzeta::Result<()> {
    for text in ["y^2 - x^3", "x*y", "y^2 - x^4", "y^3 - x^5", "y^2 - x^3 - x^2"] {
        let process = resolve_germ(&CurveGerm::parse(text)?)?;
        println!(
            "{text:<18} N = {:<2} multiplicities {:?}, {} branch(es)",
            process.n(),
            process.multiplicities(),
            process.branch_charts().len()
        );
        for step in process.steps() {
            println!("    center {:?} in chart {:?}, multiplicity {}", step.center, step.chart, step.multiplicity);
        }
    }
    Ok(())
}
