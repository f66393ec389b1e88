//! Tour of the level graphs: spanning trees over the words of each
//! length, unique paths, the single-change property, and the
//! breadth-first level ordering used by the synthesizer.
//!
//! ```bash
//! cargo run --example level_graph_paths
//! ```

use cantor_lab::level_graph::{
    level_ordering, unique_path, verify_level_tree, LevelGraph, ThetaSpec,
};
use cantor_lab::words::Word;

fn main() {
    let graph = LevelGraph::new(ThetaSpec::Zeros, 3);
    println!("level-3 edges for the all-zero labels ({} of them):", graph.edges.len());
    for (a, b) in &graph.edges {
        println!("  {:?} -- {:?}", a, b);
    }

    let from = Word::parse("101");
    let to = Word::parse("011");
    let path = unique_path(ThetaSpec::Zeros, &from, &to).unwrap();
    println!("\nunique path {:?} -> {:?}:", from, to);
    for w in &path {
        println!("  {:?}", w);
    }

    println!("\nper-level verification (edge count, connectivity, single change):");
    for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
        for n in 0..=6 {
            let r = verify_level_tree(theta, n);
            println!(
                "  {:?} level {}: edges {:>3}, pass {}",
                theta,
                n,
                r.edge_count,
                r.pass()
            );
        }
    }

    println!("\nbreadth-first ordering of level 3 from the labelled root:");
    println!("  {:?}", level_ordering(ThetaSpec::Zeros, 2));
    println!("  every prefix of the ordering induces a connected subgraph");
}
