//! Tour of the window-translation condition: bounded checks for modular
//! sets, the prefix-recurrence certificate for ruler sequences, and the
//! domain-window witness search.
//!
//! ```bash
//! cargo run --example window_conditions
//! ```

use cantor_lab::conditions::{check_m, h_witness, mm_witness, Bounds};
use cantor_lab::cylinders::ClopenSet;
use cantor_lab::ruler::{AlphaSpec, SSpec};
use cantor_lab::words::Word;

fn main() {
    let bounds = Bounds::default();

    println!("window-translation radii (least k per window size p):");
    for (name, spec) in [
        ("all naturals", SSpec::omega()),
        ("evens", SSpec::modular(2, []).unwrap()),
        ("0,1 mod 3", SSpec::modular(3, [1]).unwrap()),
        ("ruler-generated", SSpec::louveau(AlphaSpec::constant(0))),
    ] {
        let report = check_m(&spec, &bounds);
        let ks: Vec<Option<u64>> = report.rows.iter().map(|r| r.k).collect();
        println!("  {:<16} {:?} ({:?})", name, ks, report.outcome);
    }

    let alpha = AlphaSpec::constant(0);
    let cert = mm_witness(&alpha, 5, &bounds).unwrap();
    println!(
        "\nprefix-recurrence certificate for {:?} at p=5: exponent {}, radius K={}, derived window radius {}",
        alpha, cert.n0, cert.k_big, cert.m_radius
    );
    cert.replay().unwrap();
    println!("certificate replays cleanly");
    let (k, c) = cert.m_conversion(17);
    println!("conversion at start 17: translation c={} within radius {}", c, k);

    println!("\ndomain-window witnesses (level, cell):");
    let evens = SSpec::modular(2, []).unwrap();
    let w = h_witness(&evens, &ClopenSet::full(), 0, 2, &bounds).unwrap().unwrap();
    println!("  evens on the full space, window 2: level {}, cell {}", w.n, w.cell);
    let w = h_witness(&SSpec::omega(), &ClopenSet::cylinder(Word::parse("1")), 1, 1, &bounds)
        .unwrap()
        .unwrap();
    println!("  all counts inside N_1, window 1:  level {}, cell {}", w.n, w.cell);
}
