//! The map Phi(alpha, beta), its Choi spectrum, and the witness built from it.

use entkit::matkit::eigenvalues;
use entkit::qmaps::{choi_matrix, choi_spectrum_nonnegative, phi_positivity_bound, LinearMap};
use entkit::statebank::{make_state, Params};
use entkit::witness::{choi_witness, witness_expectation};

fn main() -> entkit::Result<()> {
    let (alpha, beta) = (0.3, 0.7);
    let choi = choi_matrix(LinearMap::Phi { alpha, beta }, 2)?;
    let mut ev: Vec<f64> = eigenvalues(&choi.matrix)?.iter().map(|z| z.re).filter(|x| x.abs() > 1e-10).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("nonzero Choi eigenvalues: {ev:?}");
    println!("Choi spectrum nonnegative: {}", choi_spectrum_nonnegative(&choi)?);

    let rho = make_state("bes4x4", &Params::new())?;
    println!("positivity bound on {}: {:?}", rho.label, phi_positivity_bound(&rho)?.bound);

    for (a, b) in [(1.0, 1.0), (0.3, 0.7), (2.0, 0.5)] {
        let w = choi_witness(a, b, &rho)?;
        let v = witness_expectation(&w, &rho)?;
        println!("alpha={a} beta={b}: Tr[W rho] = {v:.6}, ratio to 2a^2+ab+2b^2 = {:.6}", v / (2.0 * a * a + a * b + 2.0 * b * b));
    }

    for lambda in [0.3, 0.32, 0.5] {
        let s = make_state("bes4x4_noisy", &Params::new().with("lambda", lambda))?;
        let v = witness_expectation(&choi_witness(1.0, 1.0, &s)?, &s)?;
        println!("noisy lambda={lambda}: Tr[W rho] = {v:.6}");
    }
    Ok(())
}
