//! Run the certification suites for one family and print the report.
//!
//! `cargo run --release --example verify_suites -- G5_4_9 7 2000`

use md5fol::verify::{run_verify, RunConfig, Scope};

fn main() {
    let mut args = std::env::args().skip(1);
    let scope: Scope = args
        .next()
        .as_deref()
        .unwrap_or("G5_4_9")
        .parse()
        .expect("scope");
    let seed = args.next().map_or(7, |s| s.parse().expect("seed"));
    let n_samples = args
        .next()
        .map_or(500, |s| s.parse().expect("sample count"));
    let config = RunConfig {
        seed,
        n_samples,
        ..RunConfig::default()
    };
    let report = run_verify(scope, &config);
    print!("{}", report.render_text());
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
