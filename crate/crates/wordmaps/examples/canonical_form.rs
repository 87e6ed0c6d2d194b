//! Normalize two-letter words to the canonical form x^m [x, y^n] and
//! check the image is preserved, step by step.
//!
//!     cargo run --example canonical_form

use wordmaps::preset;
use wordmaps::words::{
    canonicalize, collect_to_commutators, exhaustive_set, fold_commutator_product, image,
    parse_word, to_power_times_wij, word_images_catalog, DEFAULT_EVAL_BUDGET,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let group = preset::resolve("es32-d")?;
    let ex = group.exponents();
    println!(
        "group order {}, invariants e={} e'={} f={}",
        group.order(),
        ex.e,
        ex.e_prime,
        ex.f
    );

    // The pipeline in the open: split off the power part, collect the
    // zero-sum remainder into commutators, fold, reduce the exponents.
    let word = parse_word("x^3y^2x^{-1}y^{-2}")?;
    let (power, wij) = to_power_times_wij(&word)?;
    println!("{} = x^{power} * w(I, J)  I={:?} J={:?}", word.print(), wij.i, wij.j);
    let cij = collect_to_commutators(&wij)?;
    println!("collected commutator pairs: {:?}", cij.pairs);
    println!("folded exponent n = {}", fold_commutator_product(&cij));
    let canon = canonicalize(&word, &group, DEFAULT_EVAL_BUDGET)?;
    println!("canonical form: (m, n) = ({}, {}) = {}", canon.m, canon.n, canon.to_word().print());

    let im_word = image(&word, &group, DEFAULT_EVAL_BUDGET)?;
    let im_canon = image(&canon.to_word(), &group, DEFAULT_EVAL_BUDGET)?;
    assert_eq!(im_word, im_canon);
    println!("image preserved, size {}", im_word.len());

    // Every word image on this group equals the image of some member of
    // the canonical list.
    let members = exhaustive_set(ex.e, ex.e_prime, ex.f);
    println!(
        "canonical list: {:?}",
        members.iter().map(|w| (w.m, w.n)).collect::<Vec<_>>()
    );
    let catalog = word_images_catalog(&group, DEFAULT_EVAL_BUDGET)?;
    for entry in &catalog {
        println!(
            "  ({}, {}) -> image size {}",
            entry.word.m,
            entry.word.n,
            entry.image.len()
        );
    }
    Ok(())
}
