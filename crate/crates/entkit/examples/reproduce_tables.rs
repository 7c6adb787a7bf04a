use entkit::tables::{check, TABLE_IDS};

fn main() -> entkit::Result<()> {
    for id in TABLE_IDS {
        let (_, diff) = check(id)?;
        println!("{id}: {}", if diff.passed() { "match" } else { "MISMATCH" });
        for e in &diff.entries {
            println!(
                "  {:<8} {:<8} expected {:>12} computed {:>12} tol {:e} {}",
                e.row,
                e.column,
                e.expected.map(|v| format!("{v:.7}")).unwrap_or("none".into()),
                e.computed.map(|v| format!("{v:.7}")).unwrap_or("none".into()),
                e.tolerance,
                if e.ok { "ok" } else { "off" }
            );
        }
    }
    Ok(())
}
