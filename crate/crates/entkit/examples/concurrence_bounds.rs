//! Witness-based concurrence lower bounds on the tiles UPB state and the 4x4 bound entangled state.

use entkit::statebank::{make_state, Params};
use entkit::witness::{concurrence_bounds, k_rho, wootters_concurrence, Marginal};

fn main() -> entkit::Result<()> {
    for id in ["upb_tiles", "bes4x4"] {
        let rho = make_state(id, &Params::new())?;
        let b = concurrence_bounds(&rho, &[1, 2, 3, 4, 5, 10])?;
        println!("{id}: k_rho = {:.6}, C_min = {:.6}", k_rho(&rho, Marginal::KeepB)?, b.c_min);
        for (n, phi) in &b.phi_wn {
            println!("  n={n:<3} Phi = {phi:.7}");
        }
        println!("  limit phi = {:.7}, swap bound = {:.7}", b.phi_limit.unwrap(), b.swap_lb.unwrap());
    }

    let iso = make_state("iso2", &Params::new().with("f", 0.9))?;
    let b = concurrence_bounds(&iso, &[1, 5])?;
    println!("iso2(0.9): C = {:.6} >= C_min {:.6}, phi {:.6}", wootters_concurrence(&iso)?, b.c_min, b.phi_limit.unwrap());
    Ok(())
}
