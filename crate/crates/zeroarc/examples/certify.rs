//! Analyze a recurrence from the library API and print the certified
//! decomposition: `cargo run --example certify`.

use zeroarc::zeroset::{self, AnalysisOptions};
use zeroarc::RecurrenceSpec;

fn main() -> Result<(), zeroarc::Error> {
    // f(n) = f(n-2) with f(0) = 0, f(1) = 1: zero exactly on the evens.
    let spec = RecurrenceSpec::from_json(
        r#"{
          "order": 2,
          "offset": 2,
          "coefficients": [["0"], ["1"]],
          "initial": ["0", "1"]
        }"#,
    )?;

    let report = zeroset::analyze(&spec, &AnalysisOptions::default())?;

    println!("prime {}, period {}", report.prime, report.modulus_b);
    for p in &report.decomposition.progressions {
        println!("progression: {}n + {}", p.modulus, p.residue);
    }
    println!("exceptional: {:?}", report.decomposition.exceptional);
    println!("fully certified: {}", report.fully_certified());

    // Independent check against exact rational evaluation.
    let (agree, _) = zeroset::verify_report(&report, &spec, 5000)?;
    assert!(agree);
    Ok(())
}
