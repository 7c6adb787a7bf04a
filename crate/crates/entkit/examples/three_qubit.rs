//! Three-qubit realignment and the genuine-entanglement test on the mub3 family.

use entkit::criteria::{tri_genuine, DEFAULT_MARGIN};
use entkit::matkit::{max_abs_diff, realign};
use entkit::qmaps::{realign_tripartite, realign_tripartite_via_q, realign_via_swap};
use entkit::statebank::{make_state, Params};

fn main() -> entkit::Result<()> {
    let rho = make_state("acin_abc", &Params::new())?;
    let d = max_abs_diff(&realign_tripartite(&rho)?, &realign_tripartite_via_q(&rho)?);
    println!("tripartite realignment, direct vs permutation form: {d:.2e}");

    let two = make_state("iso3", &Params::new().with("f", 0.6))?;
    let d = max_abs_diff(&realign(&two.matrix, &two.dims)?, &realign_via_swap(&two)?);
    println!("bipartite realignment via swap: {d:.2e}");

    let mut flagged = 0;
    let mut total = 0;
    for i in 0..=20 {
        for j in 0..=20 {
            let (p1, p3) = (i as f64 / 20.0, j as f64 / 60.0);
            let Ok(s) = make_state("mub3", &Params::new().with("p1", p1).with("p3", p3)) else { continue };
            total += 1;
            if tri_genuine(&s, DEFAULT_MARGIN)?.genuine {
                flagged += 1;
            }
        }
    }
    println!("mub3: {flagged} of {total} grid points flagged as genuinely entangled");
    Ok(())
}
