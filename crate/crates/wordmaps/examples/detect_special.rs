//! Read group structure off the word-image catalog: a nonabelian group
//! whose only images are {1}, the center, and the whole group has
//! coinciding center, derived and Frattini subgroups of prime exponent.
//!
//!     cargo run --example detect_special

use wordmaps::fp::{BilinearForm, LinearMap};
use wordmaps::group::{build_group, GroupSpec};
use wordmaps::preset;
use wordmaps::words::{
    commutator_width, detect_special_from_images, distinct_images, word_images_catalog,
    DEFAULT_EVAL_BUDGET,
};

fn report(name: &str, group: &wordmaps::group::Group) -> Result<(), wordmaps::Error> {
    let catalog = word_images_catalog(group, DEFAULT_EVAL_BUDGET)?;
    let detected = detect_special_from_images(group, DEFAULT_EVAL_BUDGET)?;
    println!(
        "{name:<14} order {:>4}: {} distinct images, detector = {detected}, width = {}",
        group.order(),
        distinct_images(&catalog),
        commutator_width(group)?,
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Extraspecial groups have exactly three images; the order-64
    // benchmark group has five, so the detector rejects it.
    for name in ["q2", "es27-expp", "es32-q", "example-3-8"] {
        report(name, &preset::resolve(name)?)?;
    }

    // Not only extraspecial groups pass: two orthogonal symplectic planes
    // over GF(3), each feeding its own center coordinate, give a special
    // group of order 729 with center of order 9.
    let p = 3u32;
    let mut mats = vec![vec![vec![0u64; 4]; 4]; 2];
    mats[0][0][1] = 1;
    mats[0][1][0] = (p - 1) as u64;
    mats[1][2][3] = 1;
    mats[1][3][2] = (p - 1) as u64;
    let spec = GroupSpec::odd_special(
        p,
        BilinearForm::new(mats, 4, p)?,
        LinearMap::zero(4, 2, p)?,
    )?;
    let group = build_group(spec)?;
    report("double-plane", &group)?;
    Ok(())
}
