//! Line sweep with boundary refinement, then CSV and plot data.

use entkit::criteria::CriteriaConfig;
use entkit::statebank::Params;
use entkit::sweep::{run_sweep, Grid, Probe, SweepSpec};

fn main() -> entkit::Result<()> {
    let spec = SweepSpec {
        family: "iso3".into(),
        axes: vec![("f".into(), Grid::parse("0:1:40")?)],
        base: Params::new(),
        probes: Probe::parse_list("ppt,ccnr,wo,det,wn:3")?,
        config: CriteriaConfig::default(),
        unchecked: false,
    };
    let res = run_sweep(&spec)?;
    print!("{}", res.boundaries_to_csv()?);
    let csv = res.to_csv()?;
    println!("\n{} CSV rows; first two:", res.rows.len());
    for line in csv.lines().take(3) {
        println!("{line}");
    }
    println!("\nplot data head:");
    for line in res.plot_data().lines().take(3) {
        println!("{line}");
    }
    Ok(())
}
