//! Parse words and compute their exact images by exhaustive enumeration.
//!
//!     cargo run --example word_images

use wordmaps::preset;
use wordmaps::words::{image, parse_word, DEFAULT_EVAL_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let group = preset::resolve("example-3-8")?;
    println!("group of order {}", group.order());

    // Images come back as rank-indexed bitmaps; hex strings are the wire
    // format (least significant bit of byte 0 is rank 0).
    for text in ["x", "x^2", "[x,y]", "x^2[x,y]", "x^2y^2", "[x,y^3]x^4"] {
        let word = parse_word(text)?;
        let set = image(&word, &group, DEFAULT_EVAL_BUDGET)?;
        println!(
            "image({text:>12}) size {:>3}  hex {}",
            set.len(),
            set.to_hex()
        );
    }

    // The commutator image is exactly the center here.
    let comm = image(&parse_word("[x,y]")?, &group, DEFAULT_EVAL_BUDGET)?;
    assert_eq!(&comm, group.center());

    // Budgets are enforced up front; nothing is silently truncated.
    let err = image(&parse_word("[x,y]")?, &group, 100).unwrap_err();
    println!("tiny budget: {err}");
    Ok(())
}
