use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{parse_config, Command, EnergeticsConfig, ExtrapolateConfig, LevelsConfig, PowerSeriesConfig, RunConfig};
use super::{tables, ConfigError, RunError};
use crate::energetics::{
    complex_binding_energy, formation_energy, group_by_defect, stable_charge_envelope, ChemicalPotentialSet,
    DefectEnergyRecord, FormationLine, HostBand,
};
use crate::extrapolation::{fit_dilute, rigid_shift_extrapolate, HyperfinePoint, REFERENCE_HYPERFINE};
use crate::spectroscopy::{cpt_sweep, extract_hyperfine, find_dips, pump_power_series, SweepConfig};
use crate::spin::{equilibrium_nuclear_polarization, is_secular_regime, optical_transitions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Files written by a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config_sha256: String,
    pub files: Vec<PathBuf>,
}

struct Artifact {
    name: &'static str,
    contents: String,
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn csv_artifact(name: &'static str, hash: &str, header: &[&str], rows: Vec<Vec<String>>) -> Artifact {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields");
    Artifact {
        name,
        contents: format!("# config_sha256={hash}\n{body}"),
    }
}

fn json_artifact(name: &'static str, hash: &str, mut value: Value) -> Artifact {
    value["config_sha256"] = Value::String(hash.to_string());
    let mut contents = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    contents.push('\n');
    Artifact { name, contents }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn ev(x: f64) -> String {
    format!("{x:.6}")
}

fn cpt_sweep_artifacts(cfg: &SweepConfig, hash: &str) -> Result<Vec<Artifact>, RunError> {
    let spectrum = cpt_sweep(cfg)?;
    let report = find_dips(&spectrum)?;
    let hyperfine = match extract_hyperfine(&report) {
        Ok(a) => Some(a),
        Err(e) => {
            log::warn!("{e}");
            None
        }
    };
    let rows = spectrum
        .probe_detunings_hz
        .iter()
        .zip(&spectrum.signal)
        .map(|(x, y)| vec![x.to_string(), y.to_string()])
        .collect();
    Ok(vec![
        csv_artifact("spectrum.csv", hash, &["probe_detuning_hz", "signal"], rows),
        json_artifact(
            "dips.json",
            hash,
            json!({
                "dips": report.dips,
                "separation_hz": report.separation_hz,
                "hyperfine_hz": hyperfine,
                "amplitude_asymmetry": report.amplitude_asymmetry,
                "p_n_proxy": report.p_n_proxy,
                "two_photon": spectrum.two_photon,
                "expected_dip_width_hz": spectrum.expected_dip_width_hz,
            }),
        ),
    ])
}

fn power_series_artifacts(cfg: &PowerSeriesConfig, hash: &str) -> Result<Vec<Artifact>, RunError> {
    let series = pump_power_series(&cfg.sweep, &cfg.pump_rabi_hz)?;
    let summary = series
        .points
        .iter()
        .map(|p| vec![p.pump_rabi_hz.to_string(), opt(p.report.separation_hz), p.p_n.to_string()])
        .collect();
    let mut spectra = Vec::new();
    for p in &series.points {
        for (x, y) in p.spectrum.probe_detunings_hz.iter().zip(&p.spectrum.signal) {
            spectra.push(vec![p.pump_rabi_hz.to_string(), x.to_string(), y.to_string()]);
        }
    }
    let points: Vec<Value> = series
        .points
        .iter()
        .map(|p| {
            json!({
                "pump_rabi_hz": p.pump_rabi_hz,
                "p_n": p.p_n,
                "p_n_at_resonances": p.p_n_at_resonances,
                "dips": p.report.dips,
                "dip_sep_hz": p.report.separation_hz,
                "p_n_proxy": p.report.p_n_proxy,
            })
        })
        .collect();
    Ok(vec![
        csv_artifact("power_series.csv", hash, &["pump_rabi_hz", "dip_sep_hz", "p_n"], summary),
        csv_artifact(
            "power_spectra.csv",
            hash,
            &["pump_rabi_hz", "probe_detuning_hz", "signal"],
            spectra,
        ),
        json_artifact(
            "power_series.json",
            hash,
            json!({ "points": points, "p_n_change": series.p_n_change() }),
        ),
    ])
}

fn find_record<'a>(
    records: &'a [DefectEnergyRecord],
    defect: &str,
    charge: i32,
    file: &Path,
) -> Result<&'a DefectEnergyRecord, RunError> {
    records
        .iter()
        .find(|r| r.defect == defect && r.charge == charge)
        .ok_or_else(|| {
            ConfigError::file(file, format!("no record for `{defect}` q={charge}"))
                .at_field("energetics.binding")
                .into()
        })
}

fn line_json(f: &FormationLine) -> Value {
    json!({
        "lines": f.lines,
        "segments": f.segments,
        "breakpoints": f.breakpoints,
    })
}

fn energetics_artifacts(cfg: &EnergeticsConfig, config_file: &Path, hash: &str) -> Result<Vec<Artifact>, RunError> {
    let records = tables::read_defect_records(&cfg.records)?;
    let all = tables::read_chemical_potentials(&cfg.chemical_potentials)?;
    let sets: Vec<ChemicalPotentialSet> = if cfg.conditions.is_empty() {
        all
    } else {
        cfg.conditions
            .iter()
            .map(|c| {
                all.iter().find(|s| &s.condition == c).cloned().ok_or_else(|| {
                    ConfigError::file(config_file, format!("condition `{c}` is not in the potentials table"))
                        .at_field("energetics.conditions")
                })
            })
            .collect::<Result<_, _>>()?
    };
    let band = HostBand::new(cfg.gap_ev)?;
    let groups = group_by_defect(&records);
    let n_grid = (cfg.gap_ev / cfg.fermi_step_ev).round().max(1.0) as usize;

    let mut diagram = Vec::new();
    let mut breakpoints = Vec::new();
    let mut conditions = serde_json::Map::new();
    for mu in &sets {
        let mut defects = serde_json::Map::new();
        for (name, recs) in &groups {
            let env = stable_charge_envelope(recs, mu, &band)?;
            for i in 0..=n_grid {
                let e_f = cfg.gap_ev * i as f64 / n_grid as f64;
                diagram.push(vec![
                    mu.condition.clone(),
                    name.clone(),
                    ev(e_f),
                    ev(env.value_at(e_f)),
                    env.stable_charge_at(e_f).to_string(),
                ]);
            }
            for b in &env.breakpoints {
                breakpoints.push(vec![
                    mu.condition.clone(),
                    name.clone(),
                    b.charge_below.to_string(),
                    b.charge_above.to_string(),
                    ev(b.e_fermi_ev),
                    ev(band.gap_ev - b.e_fermi_ev),
                    ev(b.formation_energy_ev),
                ]);
            }
            defects.insert(name.clone(), line_json(&env));
        }
        let mut bindings = Vec::new();
        for spec in &cfg.binding {
            let complex = find_record(&records, &spec.complex.defect, spec.complex.charge, config_file)?;
            let complex_ev = formation_energy(complex, mu, spec.e_fermi_ev)?;
            let parts = spec
                .parts
                .iter()
                .map(|p| {
                    let r = find_record(&records, &p.defect, p.charge, config_file)?;
                    Ok(formation_energy(r, mu, spec.e_fermi_ev)?)
                })
                .collect::<Result<Vec<f64>, RunError>>()?;
            bindings.push(json!({
                "complex": spec.complex,
                "parts": spec.parts,
                "e_fermi_ev": spec.e_fermi_ev,
                "complex_formation_ev": complex_ev,
                "parts_formation_ev": parts,
                "binding_ev": complex_binding_energy(&parts, complex_ev)?,
            }));
        }
        conditions.insert(
            mu.condition.clone(),
            json!({ "defects": defects, "binding": bindings }),
        );
    }
    Ok(vec![
        csv_artifact(
            "diagram.csv",
            hash,
            &["condition", "defect", "e_f_ev", "formation_energy_ev", "stable_charge"],
            diagram,
        ),
        csv_artifact(
            "breakpoints.csv",
            hash,
            &[
                "condition",
                "defect",
                "charge_below",
                "charge_above",
                "e_f_ev",
                "below_cbm_ev",
                "formation_energy_ev",
            ],
            breakpoints,
        ),
        json_artifact(
            "energetics.json",
            hash,
            json!({ "gap_ev": cfg.gap_ev, "conditions": conditions }),
        ),
    ])
}

fn extrapolate_artifacts(cfg: &ExtrapolateConfig, hash: &str) -> Result<Vec<Artifact>, RunError> {
    let points = tables::read_hyperfine_points(&cfg.points)?;
    let fit_points: Vec<HyperfinePoint> = points.iter().filter(|p| p.method == cfg.fit_method).cloned().collect();
    let fit = fit_dilute(&fit_points, cfg.n_min)?;
    let candidates = points.iter().filter(|p| p.method == cfg.anchor_method);
    let anchor = match cfg.anchor_atoms {
        Some(n) => candidates.filter(|p| p.atoms == n).last(),
        None => candidates.max_by_key(|p| p.atoms),
    }
    .ok_or_else(|| {
        ConfigError::file(
            &cfg.points,
            format!("no `{}` point to anchor the extrapolation", cfg.anchor_method),
        )
    })?;
    let intercept = rigid_shift_extrapolate(&fit, anchor)?;
    Ok(vec![json_artifact(
        "extrapolation.json",
        hash,
        json!({
            "intercept_mhz": intercept,
            "slope": fit.slope_mhz,
            "anchor": anchor,
            "fit": fit,
            "reference": REFERENCE_HYPERFINE,
        }),
    )])
}

fn levels_artifacts(cfg: &LevelsConfig, hash: &str) -> Result<Vec<Artifact>, RunError> {
    let diagram = optical_transitions(&cfg.system);
    let p_eq = equilibrium_nuclear_polarization(&cfg.system, cfg.temperature_k)?;
    Ok(vec![json_artifact(
        "levels.json",
        hash,
        json!({
            "ground_levels": diagram.ground_levels,
            "excited_levels": diagram.excited_levels,
            "transitions": diagram.transitions,
            "doublet_spacing_hz": diagram.doublet_spacing(),
            "electron_zeeman_hz": cfg.system.electron_zeeman_hz(),
            "nuclear_zeeman_hz": cfg.system.nuclear_zeeman_hz(),
            "secular_regime": is_secular_regime(&cfg.system),
            "temperature_k": cfg.temperature_k,
            "equilibrium_nuclear_polarization": p_eq,
        }),
    )])
}

fn section<T>(o: Option<&T>) -> &T {
    o.expect("parse_config guarantees the section")
}

fn build(cfg: &RunConfig, config_file: &Path, hash: &str) -> Result<Vec<Artifact>, RunError> {
    match cfg.command() {
        Command::CptSweep => cpt_sweep_artifacts(section(cfg.cpt_sweep.as_ref()), hash),
        Command::PowerSeries => power_series_artifacts(section(cfg.power_series.as_ref()), hash),
        Command::Energetics => energetics_artifacts(section(cfg.energetics.as_ref()), config_file, hash),
        Command::Extrapolate => extrapolate_artifacts(section(cfg.extrapolate.as_ref()), hash),
        Command::Levels => levels_artifacts(section(cfg.levels.as_ref()), hash),
    }
}

fn write_all(out: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(out).map_err(io(out))?;
    let mut written = Vec::new();
    for a in artifacts {
        let path = out.join(a.name);
        if let Err(e) = std::fs::write(&path, &a.contents) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(io(&path)(e));
        }
        written.push(path);
    }
    Ok(written)
}

/// Compute every artifact of `cfg`, then write them to `out`.
///
/// `config_file` locates errors that refer back to the configuration.
/// `threads` bounds the worker pool; `None` uses one thread per core.
pub fn run(cfg: &RunConfig, config_file: &Path, out: &Path, threads: Option<usize>) -> Result<RunOutput, RunError> {
    let echo = cfg.to_toml();
    let hash = sha256_hex(&echo);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| ConfigError::file(config_file, format!("cannot start worker pool: {e}")))?;
    let mut artifacts = pool.install(|| build(cfg, config_file, &hash))?;
    let mut header = String::new();
    let _ = writeln!(header, "# config_sha256 = \"{hash}\"");
    artifacts.insert(
        0,
        Artifact {
            name: "resolved_config.toml",
            contents: header + &echo,
        },
    );
    let files = write_all(out, &artifacts)?;
    Ok(RunOutput {
        config_sha256: hash,
        files,
    })
}

/// Parse `config`, run it and report failures on the log. Returns the exit status.
pub fn execute(command: Option<Command>, config: &Path, out: &Path, threads: Option<usize>) -> i32 {
    let result = parse_config(config, command)
        .map_err(RunError::from)
        .and_then(|cfg| run(&cfg, config, out, threads));
    match result {
        Ok(o) => {
            for f in &o.files {
                log::info!("wrote {}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
