//! Defect formation energies, charge-state transition levels, stable-charge
//! envelopes and complex binding energies.
//!
//! Energies are in eV with the Fermi level referenced to the valence-band
//! maximum. For a defect that adds species `X_i` and removes species `Y_j`
//! from the host,
//!
//! ```text
//! E^f(q; E_F) = E_tot[defect^q] − E_tot[bulk] − Σ μ(X_i) + Σ μ(Y_j) + q E_F + Δ^q
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Total energies of one defect charge state, as produced by an external
/// electronic-structure code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectEnergyRecord {
    pub defect: String,
    pub charge: i32,
    pub e_tot_defect_ev: f64,
    pub e_tot_bulk_ev: f64,
    /// Species added to the host, repeated for multiplicity.
    pub species_added: Vec<String>,
    /// Species removed from the host, repeated for multiplicity.
    pub species_removed: Vec<String>,
    /// Finite-size correction Δ^q. Required for charged states.
    pub correction_ev: Option<f64>,
}

impl DefectEnergyRecord {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("e_tot_defect_ev", self.e_tot_defect_ev)?;
        ensure_finite("e_tot_bulk_ev", self.e_tot_bulk_ev)?;
        match self.correction_ev {
            Some(c) => ensure_finite("correction_ev", c),
            None if self.charge != 0 => Err(Error::invalid(
                "correction_ev",
                format!("{} q={}: charged states need an explicit correction", self.defect, self.charge),
            )),
            None => Ok(()),
        }
    }

    /// Formation energy at E_F = 0.
    pub fn intercept(&self, mu: &ChemicalPotentialSet) -> Result<f64> {
        self.validate()?;
        let mut e = self.e_tot_defect_ev - self.e_tot_bulk_ev;
        for s in &self.species_added {
            e -= mu.get(s)?;
        }
        for s in &self.species_removed {
            e += mu.get(s)?;
        }
        Ok(e + self.correction_ev.unwrap_or(0.0))
    }
}

/// Chemical potentials for one growth condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChemicalPotentialSet {
    /// e.g. `Zn-rich`, `O-rich`.
    pub condition: String,
    pub mu_ev: BTreeMap<String, f64>,
}

impl ChemicalPotentialSet {
    pub fn new(condition: impl Into<String>) -> Self {
        Self {
            condition: condition.into(),
            mu_ev: BTreeMap::new(),
        }
    }

    pub fn with(mut self, species: impl Into<String>, mu_ev: f64) -> Self {
        self.mu_ev.insert(species.into(), mu_ev);
        self
    }

    pub fn get(&self, species: &str) -> Result<f64> {
        self.mu_ev
            .get(species)
            .copied()
            .ok_or_else(|| Error::MissingChemicalPotential {
                species: species.to_string(),
                condition: self.condition.clone(),
            })
    }

    /// Checks that every species referenced by `records` has a potential.
    pub fn covers(&self, records: &[DefectEnergyRecord]) -> Result<()> {
        for r in records {
            for s in r.species_added.iter().chain(&r.species_removed) {
                self.get(s)?;
            }
        }
        Ok(())
    }
}

/// Host band edges; the VBM is the energy zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HostBand {
    pub gap_ev: f64,
}

impl HostBand {
    pub fn new(gap_ev: f64) -> Result<Self> {
        ensure_finite("gap_ev", gap_ev)?;
        if gap_ev <= 0.0 {
            return Err(Error::invalid("gap_ev", "must be > 0"));
        }
        Ok(Self { gap_ev })
    }

    /// Energy above the VBM of a level quoted below the CBM.
    pub fn from_cbm(&self, depth_ev: f64) -> f64 {
        self.gap_ev - depth_ev
    }
}

pub fn formation_energy(rec: &DefectEnergyRecord, mu: &ChemicalPotentialSet, e_fermi_ev: f64) -> Result<f64> {
    ensure_finite("e_fermi_ev", e_fermi_ev)?;
    Ok(rec.intercept(mu)? + f64::from(rec.charge) * e_fermi_ev)
}

/// Fermi level (q/q′) at which the two charge states have equal formation energy.
pub fn transition_level(a: &DefectEnergyRecord, b: &DefectEnergyRecord, mu: &ChemicalPotentialSet) -> Result<f64> {
    if a.charge == b.charge {
        return Err(Error::EqualCharges(a.charge));
    }
    Ok(level_from_intercepts(a.charge, a.intercept(mu)?, b.charge, b.intercept(mu)?))
}

fn level_from_intercepts(q: i32, eq: f64, q2: i32, eq2: f64) -> f64 {
    (eq - eq2) / f64::from(q2 - q)
}

/// Formation energy of one charge state as a line in E_F.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargeLine {
    pub charge: i32,
    pub intercept_ev: f64,
}

impl ChargeLine {
    pub fn at(&self, e_fermi_ev: f64) -> f64 {
        self.intercept_ev + f64::from(self.charge) * e_fermi_ev
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeSegment {
    pub charge: i32,
    pub e_f_start_ev: f64,
    pub e_f_end_ev: f64,
}

/// Transition between adjacent stable charge states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakpoint {
    pub e_fermi_ev: f64,
    pub charge_below: i32,
    pub charge_above: i32,
    pub formation_energy_ev: f64,
}

/// Lines of all charge states of a defect and their lower envelope over the gap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormationLine {
    pub defect: String,
    pub condition: String,
    pub gap_ev: f64,
    /// Ordered by decreasing charge.
    pub lines: Vec<ChargeLine>,
    pub segments: Vec<EnvelopeSegment>,
    pub breakpoints: Vec<Breakpoint>,
}

impl FormationLine {
    fn line(&self, charge: i32) -> &ChargeLine {
        self.lines.iter().find(|l| l.charge == charge).expect("segment charges come from lines")
    }

    /// Envelope value at `e_fermi_ev`.
    pub fn value_at(&self, e_fermi_ev: f64) -> f64 {
        let seg = self
            .segments
            .iter()
            .find(|s| e_fermi_ev <= s.e_f_end_ev)
            .unwrap_or_else(|| self.segments.last().expect("at least one segment"));
        self.line(seg.charge).at(e_fermi_ev)
    }

    /// Lowest-energy charge state; ties go to the smaller |q|, then the smaller q.
    pub fn stable_charge_at(&self, e_fermi_ev: f64) -> i32 {
        let min = self.lines.iter().map(|l| l.at(e_fermi_ev)).fold(f64::INFINITY, f64::min);
        self.lines
            .iter()
            .filter(|l| l.at(e_fermi_ev) == min)
            .map(|l| l.charge)
            .min_by_key(|q| (q.abs(), *q))
            .expect("at least one line")
    }
}

/// Lower envelope of the formation energies of one defect over [0, E_gap].
pub fn stable_charge_envelope(
    records: &[DefectEnergyRecord],
    mu: &ChemicalPotentialSet,
    band: &HostBand,
) -> Result<FormationLine> {
    let first = records
        .first()
        .ok_or_else(|| Error::invalid("records", "need at least one charge state"))?;
    if let Some(r) = records.iter().find(|r| r.defect != first.defect) {
        return Err(Error::invalid(
            "records",
            format!("mixes defects `{}` and `{}`", first.defect, r.defect),
        ));
    }
    let mut lines = Vec::with_capacity(records.len());
    for r in records {
        if lines.iter().any(|l: &ChargeLine| l.charge == r.charge) {
            return Err(Error::invalid(
                "records",
                format!("duplicate charge state q={} for `{}`", r.charge, r.defect),
            ));
        }
        lines.push(ChargeLine {
            charge: r.charge,
            intercept_ev: r.intercept(mu)?,
        });
    }
    lines.sort_by(|a, b| b.charge.cmp(&a.charge));

    // walk from the VBM along the lowest line; among lines tied at a point
    // the one with the smallest slope stays lowest
    let mut current = *lines
        .iter()
        .min_by(|a, b| a.at(0.0).total_cmp(&b.at(0.0)).then(a.charge.cmp(&b.charge)))
        .expect("non-empty");
    let mut start = 0.0;
    let mut segments = Vec::new();
    let mut breakpoints = Vec::new();
    loop {
        let next = lines
            .iter()
            .filter(|l| l.charge < current.charge)
            .map(|l| {
                let x = level_from_intercepts(current.charge, current.intercept_ev, l.charge, l.intercept_ev);
                (x, *l)
            })
            .filter(|(x, _)| *x > start && *x < band.gap_ev)
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.charge.cmp(&b.1.charge)));
        match next {
            Some((x, line)) => {
                segments.push(EnvelopeSegment {
                    charge: current.charge,
                    e_f_start_ev: start,
                    e_f_end_ev: x,
                });
                breakpoints.push(Breakpoint {
                    e_fermi_ev: x,
                    charge_below: current.charge,
                    charge_above: line.charge,
                    formation_energy_ev: current.at(x),
                });
                current = line;
                start = x;
            }
            None => {
                segments.push(EnvelopeSegment {
                    charge: current.charge,
                    e_f_start_ev: start,
                    e_f_end_ev: band.gap_ev,
                });
                break;
            }
        }
    }
    Ok(FormationLine {
        defect: first.defect.clone(),
        condition: mu.condition.clone(),
        gap_ev: band.gap_ev,
        lines,
        segments,
        breakpoints,
    })
}

/// Binding energy of a complex: Σ E^f(parts) − E^f(complex). Positive means bound.
pub fn complex_binding_energy(parts_ev: &[f64], complex_ev: f64) -> Result<f64> {
    if parts_ev.is_empty() {
        return Err(Error::invalid("parts_ev", "need at least one constituent"));
    }
    for &p in parts_ev {
        ensure_finite("parts_ev", p)?;
    }
    ensure_finite("complex_ev", complex_ev)?;
    Ok(parts_ev.iter().sum::<f64>() - complex_ev)
}

/// Records grouped by defect name, charge states in input order.
pub fn group_by_defect(records: &[DefectEnergyRecord]) -> BTreeMap<String, Vec<DefectEnergyRecord>> {
    let mut out: BTreeMap<String, Vec<DefectEnergyRecord>> = BTreeMap::new();
    for r in records {
        out.entry(r.defect.clone()).or_default().push(r.clone());
    }
    out
}
