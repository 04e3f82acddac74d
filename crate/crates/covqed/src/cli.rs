//! Configuration file schema and the subcommand drivers.
//!
//! Exit-code contract: 0 pass, 1 falsified/failed checks, 2 configuration
//! error, 3 premise failure (D ≡ 0).

use crate::algebra::{verify_derivation_chain, RewriteTable};
use crate::construction::{run_energy_descent, DescentConfig};
use crate::error::{CovqedError, Result};
use crate::fock::{FermionMode, FermionSpecies};
use crate::modes::build_lattice;
use crate::qed::{
    build_model, build_reference_state, conformance_suite, FermionModeSpec, ModelConfig,
    ReferenceRecipe, Tolerances,
};
use crate::report::{descent_csv, render_report_text, ReportEnvelope, RunManifest};
use num::BigRational;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PREMISE: i32 = 3;

// ---------------------------------------------------------------------------
// Config file schema (TOML; unknown keys rejected)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub model: ModelSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub descent: DescentSection,
    #[serde(default)]
    pub reference_state: ReferenceSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub box_length: f64,
    pub sites_per_axis: usize,
    pub dim: usize,
    pub mass: f64,
    pub coupling: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_true")]
    pub normal_ordering: bool,
    /// "complete" or a list of explicit modes.
    #[serde(default)]
    pub fermion_modes: FermionModesSection,
    pub ghost_cutoff: usize,
    #[serde(default)]
    pub ghost_overrides: Vec<GhostOverride>,
    #[serde(default = "default_photon_cutoff")]
    pub photon_cutoff: usize,
    #[serde(default)]
    pub dim_cap: usize,
}

fn default_gamma() -> f64 {
    1.0
}
fn default_true() -> bool {
    true
}
fn default_photon_cutoff() -> usize {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(untagged)]
pub enum FermionModesSection {
    #[default]
    Empty,
    Keyword(String),
    Explicit(Vec<FermionModeEntry>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermionModeEntry {
    pub n: Vec<i32>,
    pub species: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GhostOverride {
    pub n: Vec<i32>,
    pub cutoff: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct DescentSection {
    pub f_list: Vec<f64>,
    pub auto_points: Option<usize>,
    pub guard_band: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceSection {
    /// Two momentum labels for the particle wavepacket.
    pub wavepacket: Vec<Vec<i32>>,
}

fn vec3(v: &[i32], what: &str) -> Result<[i32; 3]> {
    if v.is_empty() || v.len() > 3 {
        return Err(CovqedError::config(format!(
            "{what}: momentum label needs 1..3 components, got {v:?}"
        )));
    }
    let mut out = [0i32; 3];
    for (i, x) in v.iter().enumerate() {
        out[i] = *x;
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| CovqedError::config(format!("config parse: {e}")))
    }

    pub fn model_config(&self) -> Result<ModelConfig> {
        let m = &self.model;
        let fermion_modes = match &m.fermion_modes {
            FermionModesSection::Empty => FermionModeSpec::Explicit(Vec::new()),
            FermionModesSection::Keyword(s) if s == "complete" => FermionModeSpec::Complete,
            FermionModesSection::Keyword(s) => {
                return Err(CovqedError::config(format!(
                    "fermion_modes keyword must be \"complete\", got {s:?}"
                )))
            }
            FermionModesSection::Explicit(v) => {
                let mut modes = Vec::with_capacity(v.len());
                for e in v {
                    let species = match e.species.as_str() {
                        "particle" => FermionSpecies::Particle,
                        "antiparticle" => FermionSpecies::Antiparticle,
                        other => {
                            return Err(CovqedError::config(format!(
                                "fermion species must be particle|antiparticle, got {other:?}"
                            )))
                        }
                    };
                    modes.push(FermionMode {
                        n: vec3(&e.n, "fermion mode")?,
                        species,
                    });
                }
                FermionModeSpec::Explicit(modes)
            }
        };
        let mut ghost_overrides = Vec::new();
        for o in &m.ghost_overrides {
            ghost_overrides.push((vec3(&o.n, "ghost override")?, o.cutoff));
        }
        Ok(ModelConfig {
            box_length: m.box_length,
            sites_per_axis: m.sites_per_axis,
            dim: m.dim,
            mass: m.mass,
            coupling: m.coupling,
            gamma: m.gamma,
            normal_ordering: m.normal_ordering,
            fermion_modes,
            ghost_cutoff: m.ghost_cutoff,
            ghost_overrides,
            photon_cutoff: m.photon_cutoff,
            dim_cap: m.dim_cap,
            tolerances: self.tolerances.clone(),
        })
    }

    pub fn descent_config(&self) -> DescentConfig {
        let mut d = DescentConfig {
            f_list: self.descent.f_list.clone(),
            ..DescentConfig::default()
        };
        if let Some(p) = self.descent.auto_points {
            d.auto_points = p;
        }
        if let Some(g) = self.descent.guard_band {
            d.guard_band = g;
        }
        d
    }

    pub fn reference_recipe(&self) -> Result<ReferenceRecipe> {
        let mut r = ReferenceRecipe::default();
        if !self.reference_state.wavepacket.is_empty() {
            if self.reference_state.wavepacket.len() != 2 {
                return Err(CovqedError::config(
                    "reference_state.wavepacket needs exactly two momentum labels",
                ));
            }
            r.wavepacket = [
                vec3(&self.reference_state.wavepacket[0], "wavepacket")?,
                vec3(&self.reference_state.wavepacket[1], "wavepacket")?,
            ];
        }
        r.amplitudes = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        Ok(r)
    }
}

// ---------------------------------------------------------------------------
// Subcommand drivers
// ---------------------------------------------------------------------------

pub struct RunOutput {
    pub exit_code: i32,
    pub report_json: Option<String>,
    pub report_text: String,
    pub csv: Option<String>,
}

fn emit(
    kind: &str,
    manifest: RunManifest,
    payload: impl Serialize,
    exit_code: i32,
    csv: Option<String>,
) -> RunOutput {
    let env = ReportEnvelope::new(kind, manifest, payload);
    let json = env.to_json();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    RunOutput {
        exit_code,
        report_text: render_report_text(&value),
        report_json: Some(json),
        csv,
    }
}

/// `verify-identities`: run the exact symbolic derivation chain.
pub fn run_verify_identities(config_text: &str, corrupt_table: bool) -> Result<RunOutput> {
    let cfg = RunConfig::parse(config_text)?;
    let lattice = build_lattice(
        cfg.model.box_length,
        cfg.model.sites_per_axis,
        cfg.model.dim,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chi: Vec<BigRational> = (0..lattice.n_sites())
        .map(|_| {
            BigRational::new(
                rng.gen_range(-24i64..=24).into(),
                rng.gen_range(1i64..=9).into(),
            )
        })
        .collect();
    let table = if corrupt_table {
        RewriteTable::with_ghost_anomaly()
    } else {
        RewriteTable::standard()
    };
    let report = verify_derivation_chain(&lattice, &chi, &table)?;
    let code = if report.all_zero {
        EXIT_PASS
    } else {
        EXIT_FALSIFIED
    };
    Ok(emit(
        "verify-identities",
        RunManifest::new(config_text, cfg.seed),
        report,
        code,
        None,
    ))
}

/// `conformance`: numeric Heisenberg/commutator residuals.
pub fn run_conformance(config_text: &str) -> Result<RunOutput> {
    let cfg = RunConfig::parse(config_text)?;
    let model = build_model(&cfg.model_config()?)?;
    let report = conformance_suite(&model, cfg.seed)?;
    let code = if report.all_pass {
        EXIT_PASS
    } else {
        EXIT_FALSIFIED
    };
    Ok(emit(
        "conformance",
        RunManifest::new(config_text, cfg.seed),
        report,
        code,
        None,
    ))
}

/// `descent`: reference state + energy sweep.
pub fn run_descent(config_text: &str) -> Result<RunOutput> {
    let cfg = RunConfig::parse(config_text)?;
    let model = build_model(&cfg.model_config()?)?;
    let reference = build_reference_state(&model, &cfg.reference_recipe()?)?;
    let report = run_energy_descent(&model, &reference, &cfg.descent_config())?;
    let code = if report.n_valid < 3 || !report.pass {
        EXIT_FALSIFIED
    } else {
        EXIT_PASS
    };
    let csv = descent_csv(&report);
    Ok(emit(
        "descent",
        RunManifest::new(config_text, cfg.seed),
        report,
        code,
        Some(csv),
    ))
}

/// `report`: re-render an existing JSON report as text.
pub fn run_render(json_text: &str) -> Result<RunOutput> {
    let value: serde_json::Value = serde_json::from_str(json_text)
        .map_err(|e| CovqedError::config(format!("report parse: {e}")))?;
    Ok(RunOutput {
        exit_code: EXIT_PASS,
        report_json: None,
        report_text: render_report_text(&value),
        csv: None,
    })
}

/// Map an error to the exit-code contract.
pub fn exit_code_for(err: &CovqedError) -> i32 {
    match err {
        CovqedError::Config(_) | CovqedError::Sizing(_) | CovqedError::Io(_) => EXIT_CONFIG,
        CovqedError::Recipe(_) => EXIT_PREMISE,
        CovqedError::Numerical(_) | CovqedError::Physicality(_) => EXIT_FALSIFIED,
    }
}

/// Write outputs into a directory (report.json / report.txt / sweep.csv).
pub fn write_outputs(out_dir: &Path, kind: &str, out: &RunOutput) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    if let Some(json) = &out.report_json {
        let p = out_dir.join(format!("{kind}.json"));
        std::fs::write(&p, json)?;
        written.push(p);
    }
    let p = out_dir.join(format!("{kind}.txt"));
    std::fs::write(&p, &out.report_text)?;
    written.push(p);
    if let Some(csv) = &out.csv {
        let p = out_dir.join(format!("{kind}.csv"));
        std::fs::write(&p, csv)?;
        written.push(p);
    }
    Ok(written)
}
