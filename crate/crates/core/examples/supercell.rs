//! Orthorhombic supercells of wurtzite ZnO used for the hyperfine
//! convergence study.

use donor_cpt::extrapolation::supercell_geometry;

fn main() -> donor_cpt::Result<()> {
    let (a, c) = (3.2405, 5.224);
    for n in 1..=5 {
        let g = supercell_geometry(n, a, c)?;
        println!(
            "n = {n}  {:>5} atoms  a' = {:.3}  b' = {:.3}  c' = {:.3} A  V = {:.1} A^3",
            g.atom_count,
            g.a_prime,
            g.b_prime,
            g.c_prime,
            g.volume()
        );
    }
    Ok(())
}
