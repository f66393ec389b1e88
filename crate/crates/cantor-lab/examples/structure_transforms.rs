//! Tour of the doubling transforms: turning an arbitrary finite relation
//! into a partial order, a strict partial order, or a (reflexive or
//! irreflexive) symmetric relation while keeping an embedded copy, plus
//! the property-class case analysis.
//!
//! ```bash
//! cargo run --example structure_transforms
//! ```

use cantor_lab::structures::{
    check_properties, classify_sigma, confirm_verdict, transform, FiniteRelation, SigmaClass,
    SigmaVerdict, TransformKind,
};

fn main() {
    // an arbitrary relation on three points
    let a = FiniteRelation::new(3, [(0, 1), (1, 2), (2, 0), (1, 1)]).unwrap();
    println!("base relation on 3 points: {:?}", a.pairs);
    println!("its profile: {:?}", check_properties(&a));

    for kind in [
        TransformKind::R,
        TransformKind::RPrime,
        TransformKind::S,
        TransformKind::SPrime,
    ] {
        let t = transform(kind, &a);
        println!(
            "\n{:?} on the doubled ground set ({} pairs): profile {:?}",
            kind,
            t.pairs.len(),
            check_properties(&t)
        );
    }

    println!("\nproperty-class analysis over all 32 selections:");
    for sigma in SigmaClass::all() {
        let verdict = classify_sigma(&sigma);
        let confirmed = match verdict {
            SigmaVerdict::EmptyClass | SigmaVerdict::DiagonalOnly => {
                if confirm_verdict(&sigma, verdict, 3) {
                    " (confirmed exhaustively on <=3 points)"
                } else {
                    " (CONFIRMATION FAILED)"
                }
            }
            _ => "",
        };
        let indices: Vec<usize> = sigma.properties.iter().map(|&p| p as usize).collect();
        println!("  {:?} -> {:?}{}", indices, verdict, confirmed);
    }
}
