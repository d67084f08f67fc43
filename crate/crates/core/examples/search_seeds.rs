//! Regenerates the searched seeds under `crates/core/data/`.
//!
//! `cargo run --release -p baranyai-core --example search_seeds [bp:12:4 ...]`

use std::path::PathBuf;
use std::time::{Duration, Instant};

use baranyai::seeds::{resolvable_sqs, search_bp, SeedCache};

fn main() {
    let targets: Vec<String> = std::env::args().skip(1).collect();
    let targets = if targets.is_empty() {
        ["rsqs:8:4", "rsqs:16:4", "bp:12:4", "bp:12:3", "bp:15:3", "bp:21:3"].map(String::from).to_vec()
    } else {
        targets
    };
    let budget = Duration::from_secs(std::env::var("SEED_BUDGET_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(600));
    let out = SeedCache::new(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    for t in targets {
        let parts: Vec<&str> = t.split(':').collect();
        let (kind, n, k): (&str, u32, usize) = (parts[0], parts[1].parse().unwrap(), parts[2].parse().unwrap());
        let start = Instant::now();
        let result = match kind {
            "rsqs" => resolvable_sqs(n, budget),
            _ => search_bp(n, k, budget),
        };
        match result {
            Ok(d) => {
                let path = out.store(&d).expect("write seed");
                println!("{t}: {} classes, {} in {:.2?} -> {}", d.classes.len(), d.provenance, start.elapsed(), path.display());
            }
            Err(e) => println!("{t}: FAILED after {:.2?}: {e}", start.elapsed()),
        }
    }
}
