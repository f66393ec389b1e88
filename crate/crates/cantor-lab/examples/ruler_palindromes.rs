//! Tour of the ruler machinery: the 2-adic ruler function, the seeded
//! ruler sequences and their palindromic prefixes, and the index sets
//! generated by partial sums.
//!
//! ```bash
//! cargo run --example ruler_palindromes
//! ```

use cantor_lab::ruler::{beta_alpha, gamma_alpha, ruler, AlphaSpec, SSpec};
use cantor_lab::words::Word;

fn main() {
    println!("ruler function (2-adic valuation of i+1):");
    let vals: Vec<u32> = (0..31).map(ruler).collect();
    println!("  {:?}", vals);

    let alpha = AlphaSpec::parse("1", "10");
    println!("\nseed sequence for parameter {:?} (evens alternate, odds copy):", alpha);
    let seed: Vec<u8> = (0..16).map(|n| gamma_alpha(&alpha, n)).collect();
    println!("  {:?}", seed);

    println!("\nruler sequence prefixes of length 2^n - 1 are palindromes:");
    for n in 1..=5u32 {
        let len = (1u64 << n) - 1;
        let w = Word::from_bits((0..len).map(|i| beta_alpha(&alpha, i))).unwrap();
        println!("  n={}: {:?} symmetric={}", n, w, w.is_symmetric());
    }

    println!("\nindex sets with exact membership:");
    for (name, spec) in [
        ("triangular (shift 0)", SSpec::shift(0)),
        ("shifted by 1", SSpec::shift(1)),
        ("evens", SSpec::modular(2, []).unwrap()),
        ("ruler-generated", SSpec::louveau(AlphaSpec::constant(0))),
    ] {
        println!("  {:<20} ∩ [0,30] = {:?}", name, spec.elements_upto(30));
    }
}
