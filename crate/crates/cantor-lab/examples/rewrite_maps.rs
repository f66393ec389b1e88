//! Tour of the cylinder algebra: clopen sets in canonical form,
//! prefix-rewrite maps and their exact images, described points, signed
//! composition paths, and the relation deciders.
//!
//! ```bash
//! cargo run --example rewrite_maps
//! ```

use cantor_lab::cylinders::{
    compose_path, decide_relation, fs_map, pf_member, ClopenSet, DescribedPoint, Relation, Sign,
};
use cantor_lab::ruler::SSpec;
use cantor_lab::words::Word;

fn main() {
    let set = ClopenSet::from_addrs([Word::parse("00"), Word::parse("01"), Word::parse("110")]);
    println!("canonical clopen form (siblings merged, antichain): {:?}", set);

    let omega = SSpec::omega();
    let evens = SSpec::modular(2, []).unwrap();
    let f1 = fs_map(&omega, 1);
    println!("\nlevel-1 split map rules: {:?}", f1.rules());
    println!("level-1 split map restricted to even 1-counts: {:?}", fs_map(&evens, 1).rules());

    let x = ClopenSet::cylinder(Word::parse("00"));
    println!("image of {:?} under the level-1 map: {:?}", x, f1.apply(&x));
    println!(
        "preimage of N_111 under the level-1 map: {:?}",
        f1.preimage(&ClopenSet::cylinder(Word::parse("111")))
    );

    let zeros = DescribedPoint::zeros();
    println!("\ndescribed points are closed under the maps:");
    let path = compose_path(&omega, &[0, 1], &[Sign::Pos, Sign::Pos], &zeros).unwrap();
    println!("  stages (0,1) applied right-to-left at {}: {:?}", zeros, path);
    let blocked = compose_path(&omega, &[0, 0], &[Sign::Pos, Sign::Pos], &zeros).unwrap();
    println!("  stages (0,0): {:?} (second stage leaves the domain)", blocked);

    println!("\nrelation decisions on described points:");
    let a = DescribedPoint::parse("01|0");
    let b = DescribedPoint::parse("011|0");
    for (name, rel) in [
        ("split (all counts)", Relation::C1),
        ("split (even counts)", Relation::As { s: evens }),
        ("tail equivalence", Relation::E0),
        ("lexicographic", Relation::L0),
        ("diagonal", Relation::Delta),
    ] {
        println!("  ({}, {}) in {:<20} -> {}", a, b, name, decide_relation(&rel, &a, &b));
    }
    println!("  {} eventually zero -> {}", a, pf_member(&a));
    println!("  {} eventually zero -> {}", DescribedPoint::parse("|01"), pf_member(&DescribedPoint::parse("|01")));
}
