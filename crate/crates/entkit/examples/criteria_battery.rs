//! Runs every criterion on a handful of catalog states.

use entkit::criteria::{evaluate_all, CriteriaConfig, CRITERIA};
use entkit::statebank::{make_state, Params};

fn main() -> entkit::Result<()> {
    let cfg = CriteriaConfig::default();
    let ids: Vec<String> = CRITERIA.iter().map(|s| s.to_string()).collect();
    let states = [
        ("iso2", Params::new().with("f", 0.7)),
        ("bes4x4", Params::new()),
        ("horodecki_a", Params::new().with("a", 0.3)),
        ("rho_t", Params::new().with("t", 0.5)),
        ("mub3", Params::new().with("p1", 0.1).with("p3", 0.05)),
    ];
    for (id, p) in states {
        let rho = make_state(id, &p)?;
        println!("{}", rho.label);
        for v in evaluate_all(&ids, &rho, &cfg) {
            println!("  {:<13} {:>14.6e} vs {:<8} {:?} {}", v.criterion, v.statistic, v.threshold, v.verdict, v.notes);
        }
    }
    Ok(())
}
