//! Event-driven TV flow of the arms-and-centre datum: the arms catch up with
//! the centre at 9/64, the merged cross then breaks apart again.

use rectv::flow::{classify_events, flow_evolve, rof_equivalence_window};
use rectv::rational::fmt_rational;
use rectv::{fixtures, Mode};

fn main() -> rectv::Result<()> {
    let tl = flow_evolve(&fixtures::nonequiv(), Mode::Plane, None)?;
    let flags = classify_events(&tl);
    for (s, f) in tl.snapshots().zip(std::iter::once(None).chain(flags.iter().map(Some))) {
        let kind = match f {
            None => "start".to_string(),
            Some(f) => format!("merge{}", if f.breaking { " + break" } else { "" }),
        };
        println!("t = {:<6} {kind}", fmt_rational(&s.t));
        for facet in s.facets.iter().filter(|f| f.bounded) {
            println!(
                "    {:>2} cells  value {:>6}  speed {}",
                facet.cells.len(),
                fmt_rational(&facet.value_at(&s.t)),
                fmt_rational(&facet.speed)
            );
        }
    }
    println!("extinct at {}", fmt_rational(tl.extinction.as_ref().expect("ran to the end")));
    println!("flow equals ROF for lambda <= {}", fmt_rational(&rof_equivalence_window(&tl)));
    Ok(())
}
