//! Formation energies, transition levels and the binding energy of the
//! Sn-Li complex from the bundled total-energy tables.

use std::path::Path;

use donor_cpt::energetics::{
    complex_binding_energy, formation_energy, group_by_defect, stable_charge_envelope, HostBand,
};
use donor_cpt::io::tables::{read_chemical_potentials, read_defect_records};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let records = read_defect_records(&data.join("defects.csv"))?;
    let potentials = read_chemical_potentials(&data.join("chemical_potentials.csv"))?;
    let band = HostBand::new(3.31)?;

    for mu in &potentials {
        println!("== {}", mu.condition);
        for (name, recs) in group_by_defect(&records) {
            let env = stable_charge_envelope(&recs, mu, &band)?;
            print!("{name:<12} E_f(CBM) = {:>6.3} eV", env.value_at(band.gap_ev));
            for b in &env.breakpoints {
                print!(
                    "  ({}/{}) at {:.2} eV ({:.2} below CBM)",
                    b.charge_below,
                    b.charge_above,
                    b.e_fermi_ev,
                    band.from_cbm(b.e_fermi_ev)
                );
            }
            println!();
        }
        let find = |d: &str, q: i32| records.iter().find(|r| r.defect == d && r.charge == q).unwrap();
        let e_f = band.gap_ev;
        let parts = [
            formation_energy(find("Sn_Zn", 2), mu, e_f)?,
            formation_energy(find("Li_Zn", -1), mu, e_f)?,
        ];
        let complex = formation_energy(find("Sn_Zn-Li_Zn", 1), mu, e_f)?;
        println!("binding energy {:+.3} eV", complex_binding_energy(&parts, complex)?);
    }
    Ok(())
}
