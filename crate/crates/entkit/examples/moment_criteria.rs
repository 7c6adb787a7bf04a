//! Moment vectors, Descartes PSD check, eigenvalue bounds and moment-based criteria.

use entkit::criteria::{r2_two_qubit, r_moment, zhang_suite, DEFAULT_MARGIN};
use entkit::matkit::{partial_transpose, RankTol};
use entkit::moments::{descartes_psd, lambda_max_bounds, lambda_min_lb, moments, MomentKind};
use entkit::statebank::{make_state, Params};

fn main() -> entkit::Result<()> {
    let rho = make_state("bes4x4", &Params::new())?;
    for kind in MomentKind::ALL {
        println!("{:<8} {:?}", kind.name(), moments(&rho, kind, 4)?.values);
    }
    println!("R-moment: {:?}", r_moment(&rho, RankTol::default(), DEFAULT_MARGIN)?);

    let iso = make_state("iso2", &Params::new().with("f", 0.7))?;
    let pt = partial_transpose(&iso.matrix, &iso.dims, 1)?;
    let d = descartes_psd(&pt);
    println!("\niso2(0.7) PT psd by signs: {} coeffs {:?}", d.psd, d.coeffs);
    println!("lambda_min lower bound {:.6}", lambda_min_lb(&pt));
    let p = moments(&iso, MomentKind::Pt, 3)?;
    println!("lambda_max bounds {:?}", lambda_max_bounds(p.get(1), p.get(2), p.get(3), 4)?);
    println!("R2: {:?}", r2_two_qubit(&iso, DEFAULT_MARGIN)?);

    let t = make_state("rho_t", &Params::new().with("t", 0.5))?;
    for v in zhang_suite(&t, 5, DEFAULT_MARGIN)? {
        println!("{} {:.6} {:?}", v.criterion, v.statistic, v.verdict);
    }
    Ok(())
}
