//! Minimising a Cheeger quotient by cuts, checked against enumeration.

use std::collections::BTreeSet;

use rectv::cutsolve::dinkelbach_trace;
use rectv::energy::{brute_force_min, CheegerProblem};
use rectv::fixtures;
use rectv::rational::fmt_rational;

fn main() -> rectv::Result<()> {
    let (cross, centre, _) = fixtures::cross_sets();
    let plus = cross.boundary_edge_set();
    let p = CheegerProblem::new(cross, plus, BTreeSet::new(), None)?;
    let r = dinkelbach_trace(&p)?;
    let iterates: Vec<String> = r.iterates.iter().map(fmt_rational).collect();
    println!("Dinkelbach iterates: {}", iterates.join(" > "));
    println!("minimal quotient {} on {} cells, centre: {}", fmt_rational(&r.ratio), r.set.len(), r.set == centre);
    let bf = brute_force_min(&p)?;
    println!("enumeration: {} with {} minimisers", fmt_rational(&bf.value), bf.minimizers.len());
    Ok(())
}
