use serde::Serialize;

use super::density::DensityMatrix;
use crate::spin::{Branch, Level, NuclearSpin};

/// Populations and spin polarizations of a six-level state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    /// Level populations in basis order.
    pub populations: [f64; 6],
    pub excited_total: f64,
    /// (P↑e − P↓e)/(P↑e + P↓e) over the ground branches.
    pub electron_polarization: f64,
    /// (P↑n − P↓n)/(P↑n + P↓n), nuclear populations summed over all electron labels.
    pub nuclear_polarization: f64,
}

fn ratio(a: f64, b: f64) -> f64 {
    if a + b > 0.0 {
        (a - b) / (a + b)
    } else {
        0.0
    }
}

pub fn observables(rho: &DensityMatrix) -> Observables {
    let populations: [f64; 6] = std::array::from_fn(|i| rho.population(Level::ALL[i]));
    let pop = |l: Level| populations[l.index()];
    let branch = |b: Branch| NuclearSpin::BOTH.iter().map(|m| pop(Level::ground(b, *m))).sum::<f64>();
    let nuclear = |m: NuclearSpin| {
        pop(Level::ground(Branch::Up, m)) + pop(Level::ground(Branch::Down, m)) + pop(Level::excited(m))
    };
    Observables {
        populations,
        excited_total: pop(Level::ExcitedUpN) + pop(Level::ExcitedDownN),
        electron_polarization: ratio(branch(Branch::Up), branch(Branch::Down)),
        nuclear_polarization: ratio(nuclear(NuclearSpin::Up), nuclear(NuclearSpin::Down)),
    }
}
