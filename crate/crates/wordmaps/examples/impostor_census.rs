//! Count automorphism-invariant subsets that no word realizes, across the
//! extraspecial presets.
//!
//!     cargo run --example impostor_census

use wordmaps::extraspecial::{census, classify_orbits, enumerate_candidates};
use wordmaps::preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<12} {:>6} {:>7} {:>11} {:>10}", "preset", "order", "orbits", "candidates", "impostors");
    for name in preset::fleet_members("extraspecial-small")? {
        let kind = preset::extraspecial_kind(name)?;
        let c = census(kind);
        println!(
            "{:<12} {:>6} {:>7} {:>11} {:>10}",
            name, c.order, c.orbits, c.candidates, c.impostors
        );
    }

    // Materialize the picture for the quaternion group: three orbits, four
    // candidate subsets, one of which is realized by no word.
    let kind = preset::extraspecial_kind("q2")?;
    let group = kind.build()?;
    println!("\nq2 orbits:");
    for orbit in classify_orbits(kind, &group)? {
        println!("  {:?} size {} hex {}", orbit.label, orbit.size, orbit.set.to_hex());
    }
    println!("q2 candidates:");
    for cand in enumerate_candidates(kind, &group)? {
        println!(
            "  mask {:04b} size {} -> {}",
            cand.orbit_mask,
            cand.set.len(),
            match cand.realized {
                Some(r) => format!("realized ({r:?})"),
                None => "impostor".to_string(),
            }
        );
    }
    Ok(())
}
