//! Writes every corpus machine to `<dir>/<NAME>.tm` in the text format.

use std::collections::BTreeSet;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "machines".into());
    std::fs::create_dir_all(&dir)?;
    let mut seen = BTreeSet::new();
    for (m, _) in circlefree::corpus::corpus() {
        if seen.insert(m.name().to_string()) {
            std::fs::write(format!("{dir}/{}.tm", m.name()), circlefree::render(&m))?;
        }
    }
    for name in &seen {
        println!("{name}");
    }
    Ok(())
}
