//! Tour of the suite runner: run selected groups, embed a deliberate
//! negative control, and demonstrate byte-identical reports for a fixed
//! seed.
//!
//! ```bash
//! cargo run --example suite_reports
//! ```

use cantor_lab::ruler::SSpec;
use cantor_lab::suite::{run_suite, Group, SuiteConfig};

fn main() {
    let cfg = SuiteConfig {
        groups: vec![Group::Words, Group::Struct, Group::Kst],
        seed: 11,
        ..SuiteConfig::default()
    };
    let report = run_suite(&cfg);
    println!("selected groups:");
    print!("{}", report.render_text());
    println!("exit code would be {}", report.exit_code());

    // byte determinism
    let again = run_suite(&cfg);
    println!(
        "\nsame config, same seed, byte-identical report: {}",
        report.to_json_bytes() == again.to_json_bytes()
    );

    // a self-pair in the orthogonality group is a negative control
    let evens = SSpec::modular(2, []).unwrap();
    let control = SuiteConfig {
        groups: vec![Group::Cond],
        perp_pairs: vec![(evens.clone(), evens)],
        ..SuiteConfig::default()
    };
    let report = run_suite(&control);
    let row = report
        .checks
        .iter()
        .find(|c| c.name.starts_with("window-disjointness"))
        .unwrap();
    println!(
        "\nnegative control: {} -> {:?} (refuting translation {})",
        row.name, row.outcome, row.details["refuting_c"]
    );
    println!("exit code would be {}", report.exit_code());
}
