//! Pauli labels, measurement settings and the diagonal Gram structure of the
//! design operator.

use tomorank::pauli::{design_entry, gram_entry, labels, pauli_matrix, settings};
use tomorank::{BasisLabel, Outcome, QubitCount, Setting};

fn main() -> tomorank::Result<()> {
    let n = QubitCount::new(2)?;
    println!(
        "{n} qubits: {} labels, {} settings",
        n.num_labels(),
        n.num_settings()
    );

    let b: BasisLabel = "xz".parse()?;
    let a: Setting = "xz".parse()?;
    let r: Outcome = "--".parse()?;
    println!("P[(r={r}, a={a}), b={b}] = {}", design_entry(&r, &a, &b)?);
    println!("sigma_xz =\n{}", pauli_matrix(&b)?.as_matrix());

    println!("Gram diagonal (label, degree, entry):");
    for b in labels(n) {
        println!("  {b}  {}  {}", b.degree(), gram_entry(&b, &b)?);
    }
    let first: Vec<String> = settings(n).take(4).map(|a| a.to_string()).collect();
    println!("first settings: {}", first.join(" "));
    Ok(())
}
