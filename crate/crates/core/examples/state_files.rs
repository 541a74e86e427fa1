//! Write a generated pair to state files, read them back and decide.

use lueq::io::{read_state, write_text, StateFile};
use lueq::oracle::{random_local_unitary, random_state};
use lueq::protocol::{apply_local_unitary, decide_lu_equivalence, DecisionConfig};
use lueq::tolerance::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("lueq-example");
    std::fs::create_dir_all(&dir)?;
    let rho = random_state(3, 2, 4)?;
    let rho_prime = apply_local_unitary(&rho, &random_local_unitary(3, 5))?;
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    write_text(&a, &StateFile::density(&rho).render())?;
    write_text(&b, &StateFile::density(&rho_prime).render())?;

    let tol = Tolerances::default();
    let back = read_state(&a, &tol)?;
    println!("round trip exact: {}", back == rho);
    let (verdict, _) = decide_lu_equivalence(&back, &read_state(&b, &tol)?, &DecisionConfig::default())?;
    println!("{} vs {}: equivalent = {}", a.display(), b.display(), verdict.is_equivalent());
    Ok(())
}
