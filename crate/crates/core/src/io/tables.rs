//! CSV input tables.
//!
//! `defects.csv`
//! : `defect,charge,e_tot_defect_ev,e_tot_bulk_ev,species_added,species_removed,correction_ev`
//!   with species lists separated by `;` (repeat a species for multiplicity)
//!   and `correction_ev` empty only for neutral states.
//!
//! `chemical_potentials.csv`
//! : `condition,species,mu_ev`
//!
//! `hyperfine_points.csv`
//! : `atoms,a_mhz,method`
//!
//! Lines starting with `#` are ignored.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::ConfigError;
use crate::energetics::{ChemicalPotentialSet, DefectEnergyRecord};
use crate::extrapolation::HyperfinePoint;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DefectRow {
    defect: String,
    charge: i32,
    e_tot_defect_ev: f64,
    e_tot_bulk_ev: f64,
    species_added: String,
    species_removed: String,
    correction_ev: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialRow {
    condition: String,
    species: String,
    mu_ev: f64,
}

fn species_list(s: &str) -> Vec<String> {
    s.split(';').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

/// Rows of a table together with their 1-based line numbers.
fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>, ConfigError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| ConfigError::file(path, e.to_string()))?;
    let headers = reader.headers().map_err(|e| ConfigError::file(path, e.to_string()))?.clone();
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            ConfigError::file(path, e.to_string()).at_line(line)
        })?;
        let line = rec.position().map(|p| p.line() as usize);
        let row: T = rec
            .deserialize(Some(&headers))
            .map_err(|e| ConfigError::file(path, e.to_string()).at_line(line))?;
        out.push((line.unwrap_or(0), row));
    }
    Ok(out)
}

pub fn read_defect_records(path: &Path) -> Result<Vec<DefectEnergyRecord>, ConfigError> {
    read_rows::<DefectRow>(path)?
        .into_iter()
        .map(|(line, r)| {
            let rec = DefectEnergyRecord {
                defect: r.defect,
                charge: r.charge,
                e_tot_defect_ev: r.e_tot_defect_ev,
                e_tot_bulk_ev: r.e_tot_bulk_ev,
                species_added: species_list(&r.species_added),
                species_removed: species_list(&r.species_removed),
                correction_ev: r.correction_ev,
            };
            rec.validate()
                .map_err(|e| ConfigError::file(path, e.to_string()).at_line(Some(line)))?;
            Ok(rec)
        })
        .collect()
}

/// One set per condition, in order of first appearance.
pub fn read_chemical_potentials(path: &Path) -> Result<Vec<ChemicalPotentialSet>, ConfigError> {
    let mut sets: Vec<ChemicalPotentialSet> = Vec::new();
    for (line, r) in read_rows::<PotentialRow>(path)? {
        if !r.mu_ev.is_finite() {
            return Err(ConfigError::file(path, "mu_ev must be finite").at_line(Some(line)));
        }
        let idx = match sets.iter().position(|s| s.condition == r.condition) {
            Some(i) => i,
            None => {
                sets.push(ChemicalPotentialSet::new(r.condition.clone()));
                sets.len() - 1
            }
        };
        if sets[idx].mu_ev.insert(r.species.clone(), r.mu_ev).is_some() {
            return Err(ConfigError::file(
                path,
                format!("duplicate potential for `{}` under `{}`", r.species, r.condition),
            )
            .at_line(Some(line)));
        }
    }
    Ok(sets)
}

pub fn read_hyperfine_points(path: &Path) -> Result<Vec<HyperfinePoint>, ConfigError> {
    read_rows::<HyperfinePoint>(path)?
        .into_iter()
        .map(|(line, p)| {
            p.validate()
                .map_err(|e| ConfigError::file(path, e.to_string()).at_line(Some(line)))?;
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_species_lists() {
        let f = temp(
            "defect,charge,e_tot_defect_ev,e_tot_bulk_ev,species_added,species_removed,correction_ev\n\
             # comment\n\
             X,1,-10.5,-12.0,Sn;Li,Zn;Zn,0.1\n\
             X,0,-10.0,-12.0,Sn;Li,Zn;Zn,\n",
        );
        let recs = read_defect_records(f.path()).unwrap();
        assert_eq!(recs[0].species_added, ["Sn", "Li"]);
        assert_eq!(recs[0].species_removed, ["Zn", "Zn"]);
        assert_eq!(recs[1].correction_ev, None);
    }

    #[test]
    fn missing_correction_reports_line() {
        let f = temp(
            "defect,charge,e_tot_defect_ev,e_tot_bulk_ev,species_added,species_removed,correction_ev\n\
             X,0,-10.0,-12.0,Sn,Zn,\n\
             X,1,-10.0,-12.0,Sn,Zn,\n",
        );
        let err = read_defect_records(f.path()).unwrap_err();
        assert_eq!(err.line, Some(3));
    }

    #[test]
    fn groups_potentials_by_condition() {
        let f = temp("condition,species,mu_ev\nZn-rich,Zn,-1.0\nO-rich,Zn,-4.6\nZn-rich,Li,-1.9\n");
        let sets = read_chemical_potentials(f.path()).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].get("Li").unwrap(), -1.9);
        let dup = temp("condition,species,mu_ev\nZn-rich,Zn,-1.0\nZn-rich,Zn,-1.1\n");
        assert!(read_chemical_potentials(dup.path()).is_err());
    }

    #[test]
    fn hyperfine_points() {
        let f = temp("atoms,a_mhz,method\n432,715.8,semilocal\n");
        let p = read_hyperfine_points(f.path()).unwrap();
        assert_eq!(p[0], HyperfinePoint::new(432, 715.8, "semilocal"));
        let bad = temp("atoms,a_mhz,method\n8,1.0,semilocal\n");
        assert!(read_hyperfine_points(bad.path()).is_err());
    }
}
