//! Exact automorphism orbits for small groups, and the impostor decision
//! they drive.
//!
//!     cargo run --example automorphism_orbits

use wordmaps::aut::{automorphism_orbits, has_impostor, DEFAULT_NODE_BUDGET};
use wordmaps::preset;
use wordmaps::words::DEFAULT_EVAL_BUDGET;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["z4", "z2x2", "q2", "d8", "es27-expp2"] {
        let group = preset::resolve(name)?;
        let orbits = automorphism_orbits(&group, DEFAULT_NODE_BUDGET)?;
        println!("{name}: {} orbits", orbits.block_count());
        for block in orbits.blocks() {
            println!("  size {:>3} hex {}", block.len(), block.to_hex());
        }
        // The wire format is the hex-bitmap list.
        println!("  json: {}", serde_json::to_string(&orbits.to_hex_list())?);
    }

    // The oracle decides impostor existence exactly: an abelian group has
    // none exactly when its exponent is prime.
    for name in ["z2", "z3x3", "z4", "z2x4", "q2"] {
        let group = preset::resolve(name)?;
        let verdict = has_impostor(&group, DEFAULT_NODE_BUDGET, DEFAULT_EVAL_BUDGET)?;
        println!("{name}: has impostor = {verdict}");
    }

    // Budgets fail fast instead of returning partial partitions.
    let big = preset::resolve("es243-expp")?;
    println!(
        "es243-expp: {}",
        automorphism_orbits(&big, DEFAULT_NODE_BUDGET).unwrap_err()
    );
    Ok(())
}
