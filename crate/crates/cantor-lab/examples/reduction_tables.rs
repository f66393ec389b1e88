//! Tour of the reduction-table synthesizer: build tables for several
//! index sets and restrictions, inspect the level map and cells, verify
//! them independently, and watch the verifier catch a corrupted entry.
//!
//! ```bash
//! cargo run --example reduction_tables
//! ```

use cantor_lab::cylinders::ClopenSet;
use cantor_lab::ruler::{AlphaSpec, SSpec};
use cantor_lab::synthesizer::{synthesize, verify_table, Family, SynthesisInstance};
use cantor_lab::words::Word;

fn main() {
    let cases = [
        ("all counts, full space", SSpec::omega(), ClopenSet::full()),
        ("all counts inside N_1", SSpec::omega(), ClopenSet::cylinder(Word::parse("1"))),
        ("even counts inside N_11", SSpec::modular(2, []).unwrap(), ClopenSet::cylinder(Word::parse("11"))),
        ("ruler set inside N_1", SSpec::louveau(AlphaSpec::constant(0)), ClopenSet::cylinder(Word::parse("1"))),
    ];

    for (name, s, b) in cases {
        let inst = SynthesisInstance {
            family: Family::As { s },
            restriction: b,
            depth: 3,
        };
        let out = synthesize(&inst).unwrap();
        let table = out.table();
        let report = verify_table(table).unwrap();
        println!("{}:", name);
        println!("  levels -> {:?}, offsets -> {:?}", table.phi, table.theta);
        for w in Word::all_of_len(2) {
            println!("  cell of {:?} is N_{}", w, table.cells[&w]);
        }
        println!("  independent verification: {}", if report.pass() { "pass" } else { "FAIL" });
    }

    // dense-sequence mode
    let inst = SynthesisInstance {
        family: Family::A1,
        restriction: ClopenSet::cylinder(Word::parse("0")),
        depth: 4,
    };
    let table = synthesize(&inst).unwrap().table().clone();
    println!("dense family inside N_0:");
    println!("  levels -> {:?}", table.phi);
    println!("  cell of \"0101\" is N_{}", table.cells[&Word::parse("0101")]);
    println!("  verification: {}", if verify_table(&table).unwrap().pass() { "pass" } else { "FAIL" });

    // the verifier is not fooled by a corrupted cell
    let mut bad = table;
    let key = Word::parse("0101");
    let addr = bad.cells[&key].clone();
    bad.cells.insert(key, addr.flipped(0));
    let report = verify_table(&bad).unwrap();
    println!(
        "after corrupting one cell: {} violation(s), first: {:?}",
        report.violations.len(),
        report.violations.first().map(|v| v.condition.as_str())
    );
}
