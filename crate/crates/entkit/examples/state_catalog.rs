//! Lists the catalog, builds a few states and round-trips one through JSON.

use entkit::io::{state_from_json, state_to_json};
use entkit::statebank::{families, make_state, validate, Params};

fn main() -> entkit::Result<()> {
    for f in families() {
        let ranges: Vec<String> = f.params.iter().map(|p| format!("{} in {}", p.name, p.describe())).collect();
        println!("{:<16} {:<28} {}", f.id, ranges.join(", "), f.summary);
    }

    let rho = make_state("bes4x4", &Params::parse("q=q0")?)?;
    let report = validate(&rho);
    println!("\n{} valid: {} (min eigenvalue {:.3e})", rho.label, report.passed(), report.min_eigenvalue);

    let json = state_to_json(&rho)?;
    let back = state_from_json(&json)?;
    println!("JSON round trip exact: {}", back.matrix == rho.matrix);
    Ok(())
}
