//! Tour of the word enumeration: the length-then-lex bijection, the padded
//! dense sequence, density witnesses, and factor occurrence.
//!
//! ```bash
//! cargo run --example words_enumeration
//! ```

use cantor_lab::words::{
    density_witness, dense_word, factor_occurs, nth_word, word_index, Word,
};

fn main() {
    println!("first indices of the enumeration:");
    for n in 0..8u64 {
        println!("  {:>2} -> {:?}", n, nth_word(n));
    }

    println!("\ndense sequence (word of index n, zero-padded to length n):");
    for n in 0..8u64 {
        println!("  {:>2} -> {:?}", n, dense_word(n));
    }

    let t = Word::parse("1101");
    let witness = density_witness(&t);
    println!(
        "\nevery word is a prefix of some member: {:?} sits inside member {} = {:?}",
        t,
        witness,
        dense_word(witness)
    );

    println!("\nround trips: index(word(n)) == n");
    for n in [0u64, 5, 41, 1023] {
        assert_eq!(word_index(&nth_word(n)), n);
        println!("  {} -> {:?} -> {}", n, nth_word(n), word_index(&nth_word(n)));
    }

    let needle = Word::parse("01");
    let hay = Word::parse("111010");
    println!(
        "\nfactor occurrence: {:?} occurs in {:?} at shift {:?}",
        needle,
        hay,
        factor_occurs(&needle, &hay)
    );
    let pal = Word::parse("0110");
    println!(
        "reversal: {:?} reversed is {:?}, symmetric: {}",
        pal,
        pal.reversed(),
        pal.is_symmetric()
    );
}
