//! First realignment moment from the swap operator, and a shot-noise estimate of it.

use entkit::moments::{estimate_first_moment, first_moment_via_swap, moment_via_copies, CopyShift};
use entkit::statebank::{make_state, Params};

fn main() -> entkit::Result<()> {
    let rho = make_state("iso3", &Params::new().with("f", 0.7))?;
    let exact = first_moment_via_swap(&rho)?;
    println!("Tr[rho P^TB] = {exact:.6}");
    for shots in [1_000, 10_000, 100_000] {
        let e = estimate_first_moment(&rho, shots, 7)?;
        println!("{shots:>7} shots: {:.6} +- {:.6} ({:.2} SE from exact)", e.mean, e.std_error, (e.mean - exact) / e.std_error);
    }
    let two = make_state("iso2", &Params::new().with("f", 0.8))?;
    for k in 1..=3 {
        let c = moment_via_copies(&two, k, CopyShift::Cyclic)?;
        println!("k={k}: copies {:.6}, direct {:.6}, agree {}", c.value, c.exact, c.agrees);
    }
    Ok(())
}
