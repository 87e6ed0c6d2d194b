//! Build groups three ways: from a preset, from raw presentation data,
//! and from a JSON presentation document.
//!
//!     cargo run --example build_groups

use wordmaps::fp::{BilinearForm, LinearMap};
use wordmaps::group::{build_group, GroupSpec};
use wordmaps::preset;

fn describe(name: &str, group: &wordmaps::group::Group) {
    let ex = group.exponents();
    println!(
        "{name}: kind={} order={} e={} e'={} f={} |Z|={} |G'|={} |Frattini|={} special={}",
        group.spec().kind_name(),
        group.order(),
        ex.e,
        ex.e_prime,
        ex.f,
        group.center().len(),
        group.derived_subgroup().len(),
        group.frattini().len(),
        group.is_special_p_group(),
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 1. Presets: extraspecial groups, the order-64 and rank-8 benchmark
    //    groups, and abelian groups addressed by their cyclic orders.
    for name in ["q2", "es27-expp2", "example-3-8", "z2x4"] {
        describe(name, &preset::resolve(name)?);
    }

    // 2. Raw data: a symplectic plane over GF(5) with a power map that
    //    sends the first basis vector to the central generator. This is
    //    the order-125 group of exponent 25.
    let b = BilinearForm::new(vec![vec![vec![0, 1], vec![4, 0]]], 2, 5)?;
    let t = LinearMap::new(vec![vec![1, 0]], 2, 5)?;
    let spec = GroupSpec::odd_special(5, b, t)?;
    let group = build_group(spec)?;
    describe("gf5-plane", &group);

    // 3. JSON round trip: serialize the presentation, read it back, and
    //    rebuild. The document format is the same one `--spec` accepts.
    let text = group.spec().to_json();
    println!("--- presentation document ---\n{text}");
    let again = build_group(GroupSpec::from_json(&text)?)?;
    assert_eq!(again.order(), group.order());

    // Invalid data is rejected with a reason.
    let degenerate = GroupSpec::from_json(
        r#"{"kind": "two-special", "n": 2, "q": [[[0, 0], [0, 0]]]}"#,
    );
    println!("degenerate presentation: {}", degenerate.unwrap_err());
    Ok(())
}
