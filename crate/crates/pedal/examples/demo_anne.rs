//! The packaged end-to-end demonstration: three credence claims, the LP
//! optimum and the validity-based bound, with both weight readings of
//! the three-valuation model.
//!
//!     cargo run --example demo_anne

use pedal::demo::run_demo;

fn main() {
    let report = run_demo();
    print!("{}", report.render_text());
    assert!(report.ok, "the demonstration doubles as an executable check");
}
