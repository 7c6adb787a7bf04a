//! SPA of the realignment map: lower p bound, statistic, and detection boundaries on rho_t.

use entkit::criteria::spa_r_statistic;
use entkit::qmaps::{spa_lower_p, spa_lower_p_with, LowerBoundSource, SpaNormalization};
use entkit::statebank::{make_state, Params};
use entkit::sweep::bisect_root;

fn main() -> entkit::Result<()> {
    let a = make_state("horodecki_a", &Params::new().with("a", 0.3))?;
    println!("horodecki_a(0.3): lower p = {}", spa_lower_p(&a)?);
    let p_up = bisect_root(|p| spa_r_statistic(&a, p).unwrap_or(f64::NAN), 0.0, 0.5, 1e-10, 50)?;
    println!("violated for 0 <= p <= {p_up:.6}");

    let rho_t = |t: f64| make_state("rho_t", &Params::new().with("t", t)).expect("t in range");
    let stat_unit = |t: f64| {
        let s = rho_t(t);
        let p = spa_lower_p_with(&s, LowerBoundSource::Moments, SpaNormalization::Unit).unwrap();
        spa_r_statistic(&s, p).unwrap()
    };
    let neg = bisect_root(stat_unit, -0.79, -0.5, 1e-10, 50)?;
    let pos = bisect_root(|t| spa_r_statistic(&rho_t(t), 0.0).unwrap(), 0.01, 0.5, 1e-10, 50)?;
    println!("rho_t negative branch boundary {neg:.6}, positive branch boundary {pos:.6}");
    Ok(())
}
