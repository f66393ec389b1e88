//! Tour of the orthogonality machinery: translated-window disjointness,
//! the self-pair negative control, and non-occurrence witness
//! certificates for pairs of ruler parameters.
//!
//! ```bash
//! cargo run --example orthogonality
//! ```

use cantor_lab::conditions::{check_perp, check_perp_inv, perpperp_witness, Bounds};
use cantor_lab::ruler::{AlphaSpec, SSpec};

fn main() {
    let bounds = Bounds::default();

    let evens = SSpec::modular(2, []).unwrap();
    let threes = SSpec::modular(3, []).unwrap();
    let r = check_perp(&evens, &threes, 2, &bounds);
    println!(
        "evens vs multiples of three at window 2: {:?} (no translation up to {})",
        r.outcome(),
        r.c_max
    );

    let refuted = check_perp(&evens, &evens, 4, &bounds);
    println!(
        "negative control, evens vs themselves: refuting translation c={:?}",
        refuted.refuting_c
    );

    let a = AlphaSpec::constant(0);
    let b = AlphaSpec::parse("1", "0");
    let cert = perpperp_witness(&a, &b, &bounds).unwrap();
    println!(
        "\nnon-occurrence witness for {:?} vs {:?}:",
        a, b
    );
    println!(
        "  first seed disagreement n0={}, constancy break n1={}, exponent n={}",
        cert.n0, cert.n1, cert.n
    );
    println!(
        "  palindromic prefix of length {} absent from the other sequence over {} shifts",
        cert.p_prefix, cert.scanned_shifts
    );
    cert.replay().unwrap();
    println!("  certificate replays cleanly");

    let s1 = SSpec::louveau(a);
    let s2 = SSpec::louveau(b);
    println!(
        "  derived window {} separates the index sets: forward {:?}, inverse {:?}",
        cert.p_window,
        check_perp(&s1, &s2, cert.p_window, &bounds).outcome(),
        check_perp_inv(&s1, &s2, cert.p_window, &bounds).outcome()
    );
}
