//! Tour of the coordinate-rearrangement maps: the default nested family
//! on powers of two, truncated evaluation with unknown positions, the
//! absorption law, and cylinder stability.
//!
//! ```bash
//! cargo run --example shift_graphs
//! ```

use cantor_lab::kst::{
    composition_law_check, cylinder_stability_check, g_eval, partial_from_word, verify_family,
    NestedFamily,
};
use cantor_lab::words::Word;

fn main() {
    let fam = NestedFamily::pow2();
    let report = verify_family(&fam, 8, 1 << 12);
    println!("nested-family invariants to horizon 2^12: pass = {}", report.pass());

    // a single 1 at position 3; level 0 reads position k from 2k-1
    let mut alpha = vec![Some(0u8); 16];
    alpha[3] = Some(1);
    let image = g_eval(&fam, 0, &alpha);
    println!("\nlevel-0 image of a word with a single 1 at position 3:");
    println!("  input : {:?}", alpha.iter().map(|b| b.unwrap()).collect::<Vec<_>>());
    println!(
        "  output: {:?}  (None marks positions whose source escapes the horizon)",
        image
    );

    let words: Vec<Word> = (0..50)
        .map(|i| {
            Word::from_bits((0..256).map(|j| (((i * 37 + j * 11) >> 3) % 2) as u8)).unwrap()
        })
        .collect();
    println!("\nabsorption law g_m ∘ g_n = g_m for m < n:");
    for (m, n) in [(0u32, 1u32), (1, 3), (2, 5)] {
        let r = composition_law_check(&fam, m, n, &words).unwrap();
        println!(
            "  m={} n={}: {} positions compared, pass = {}",
            m,
            n,
            r.positions_compared,
            r.pass()
        );
    }

    let s = Word::parse("101");
    let ok = cylinder_stability_check(&fam, 2, &s, &words).unwrap();
    println!(
        "\nlevel 2 leaves extensions of {:?} inside the same cylinder: {}",
        s, ok
    );
    let alpha = partial_from_word(&Word::parse("10110100"));
    println!(
        "a level whose least element exceeds the horizon acts as the identity: {}",
        g_eval(&fam, 3, &alpha) == alpha
    );
}
