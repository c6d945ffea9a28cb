// Machine-readable output: a JSON document that re-verifies to the same
// reports, and the equivalent command-line call.

use std::collections::HashMap;
use std::error::Error;

use k3w::report::{Document, QueryRecord};
use k3w::{enumerate, FamilyQuery, Sign};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let query = FamilyQuery::new(7, 2, 3, Sign::Plus, false);
    let witnesses = enumerate(&query, 300)?;
    let doc = Document::new(QueryRecord::from_query(&query), None, &witnesses);
    let json = doc.to_json();
    println!(
        "{} witnesses, {} bytes of JSON",
        witnesses.len(),
        json.len()
    );

    let back = Document::from_json(&json)?;
    for (rec, w) in back.witnesses.iter().zip(&witnesses) {
        let again = rec.to_witness(&query, None)?;
        assert_eq!(again.report, w.report);
    }
    print!(
        "{}",
        doc.to_csv().lines().take(3).collect::<Vec<_>>().join("\n")
    );
    println!();

    let out = k3w::cli::run(
        [
            "k3w", "member", "--g", "7", "--r", "2", "--s", "3", "--d", "73", "--sign", "plus",
            "--format", "json",
        ],
        &HashMap::new(),
    );
    println!("k3w member ... exited with {}", out.code);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
