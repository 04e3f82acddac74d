//! Report envelope: every emitted report embeds a manifest carrying the
//! config hash, artifact version, convention notes and the scope
//! limitation of the finite-truncation claims.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// The limitation statement embedded verbatim in every manifest.
pub const LIMITATION_STATEMENT: &str = "The f -> infinity divergence <xi|H|xi> -> -infinity is \
certified only as (a) the exact symbolic termination of the BCH series and (b) the \
finite-truncation linear descent law up to the reported breakdown f*; beyond f* no claims are \
made.";

pub fn convention_notes() -> Vec<String> {
    [
        "volume normalization: 1/sqrt(V) per mode; integrals are a^d-weighted site sums",
        "j0(k) normalization: j0_hat(k) = a^d Sum_x j0(x) e^{-ikx} / sqrt(V)",
        "spinor basis: Dirac basis, helicity labels",
        "momentum set: k = 0 excluded; self-paired (Nyquist-type) momenta kept in K but not \
         quantized; derivative factors use active components m(k)",
        "currents enter operator identities through their active-mode projection",
        "continuity oracle sign convention: D(x) = -i<[H, j0(x)]>",
        "mode frequencies use the active magnitude |m(k)| (equal to |k| on non-mixed momenta)",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub convention_notes: Vec<String>,
    pub limitation: String,
    pub generated_at: String,
}

impl RunManifest {
    /// Timestamps honor SOURCE_DATE_EPOCH so identical config + seed can
    /// produce bit-identical reports.
    pub fn new(config_text: &str, seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(config_text.as_bytes());
        let digest = h.finalize();
        let generated_at = match std::env::var("SOURCE_DATE_EPOCH") {
            Ok(v) => {
                let secs: i64 = v.parse().unwrap_or(0);
                chrono::DateTime::from_timestamp(secs, 0)
                    .map(|t| t.to_rfc3339())
                    .unwrap_or_else(|| "1970-01-01T00:00:00+00:00".to_string())
            }
            Err(_) => chrono::Utc::now().to_rfc3339(),
        };
        RunManifest {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: format!("{digest:x}"),
            seed,
            convention_notes: convention_notes(),
            limitation: LIMITATION_STATEMENT.to_string(),
            generated_at,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEnvelope<T> {
    pub schema_version: u32,
    pub kind: String,
    pub manifest: RunManifest,
    pub payload: T,
}

pub const SCHEMA_VERSION: u32 = 1;

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(kind: &str, manifest: RunManifest, payload: T) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            manifest,
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Render any report JSON into a human-readable text block.
pub fn render_report_text(json: &serde_json::Value) -> String {
    let mut out = String::new();
    let kind = json["kind"].as_str().unwrap_or("?");
    out.push_str(&format!("covqed report: {kind}\n"));
    if let Some(m) = json.get("manifest") {
        out.push_str(&format!(
            "  version {}  config {}  seed {}\n",
            m["artifact_version"].as_str().unwrap_or("?"),
            &m["config_sha256"].as_str().unwrap_or("?")[..16.min(
                m["config_sha256"].as_str().unwrap_or("?").len()
            )],
            m["seed"]
        ));
        out.push_str(&format!("  generated {}\n", m["generated_at"].as_str().unwrap_or("?")));
        if let Some(l) = m["limitation"].as_str() {
            out.push_str(&format!("  limitation: {l}\n"));
        }
    }
    out.push_str(&render_payload(kind, &json["payload"]));
    out
}

fn render_payload(kind: &str, p: &serde_json::Value) -> String {
    let mut out = String::new();
    match kind {
        "verify-identities" => {
            if let Some(ids) = p["identities"].as_array() {
                for id in ids {
                    out.push_str(&format!(
                        "  {:<28} {}  ({} residual terms)\n",
                        id["name"].as_str().unwrap_or("?"),
                        if id["zero"].as_bool().unwrap_or(false) {
                            "ZERO"
                        } else {
                            "NONZERO"
                        },
                        id["residual_terms"]
                    ));
                    if let Some(r) = id["residual"].as_str() {
                        out.push_str(&format!("      residual: {r}\n"));
                    }
                }
            }
            out.push_str(&format!(
                "  all residuals zero: {}  (BCH terminates: {}, C ghost-only: {}, star-consistent: {})\n",
                p["all_zero"], p["bch_terminates"], p["c_ghost_only"], p["star_consistent"]
            ));
        }
        "conformance" => {
            if let Some(es) = p["entries"].as_array() {
                for e in es {
                    out.push_str(&format!(
                        "  {:<34} residual {:>12}  {}\n",
                        e["id"].as_str().unwrap_or("?"),
                        format!("{:.3e}", e["residual"].as_f64().unwrap_or(f64::NAN)),
                        if e["pass"].as_bool().unwrap_or(false) {
                            "pass"
                        } else {
                            "FAIL"
                        },
                    ));
                }
            }
            out.push_str(&format!("  all pass: {}\n", p["all_pass"]));
        }
        "descent" => {
            out.push_str(&format!(
                "  E(0) = {}  predicted slope = {}\n",
                p["e_zero"], p["slope_predicted"]
            ));
            if let Some(es) = p["entries"].as_array() {
                out.push_str(
                    "       f          E_direct       E_predicted      leakage   omega    valid\n",
                );
                for e in es {
                    out.push_str(&format!(
                        "  {:>10.5} {:>15.9} {:>15.9}  {:>9.2e} {:>8.1e}  {}\n",
                        e["f"].as_f64().unwrap_or(f64::NAN),
                        e["e_direct"].as_f64().unwrap_or(f64::NAN),
                        e["e_predicted"].as_f64().unwrap_or(f64::NAN),
                        e["leakage"].as_f64().unwrap_or(f64::NAN),
                        e["omega_residual"].as_f64().unwrap_or(f64::NAN),
                        e["valid"]
                    ));
                }
            }
            out.push_str(&format!(
                "  valid points: {}  fitted slope: {:?}  breakdown f*: {:?}\n  identity ok: {} \
                 monotone: {}  slope match: {}  below vacuum: {}  PASS: {}\n",
                p["n_valid"],
                p["slope_fitted"],
                p["breakdown_f"],
                p["energy_identity_ok"],
                p["monotone_decreasing"],
                p["slope_match_ok"],
                p["below_vacuum"],
                p["pass"]
            ));
        }
        _ => {
            out.push_str(&serde_json::to_string_pretty(p).unwrap_or_default());
            out.push('\n');
        }
    }
    out
}

/// Write the E(f) sweep as plot-ready CSV.
pub fn descent_csv(report: &crate::construction::DescentReport) -> String {
    let mut out = String::from("f,E_direct,E_predicted,leakage,omega_residual,valid\n");
    for e in &report.entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.f, e.e_direct, e.e_predicted, e.leakage, e.omega_residual, e.valid
        ));
    }
    out
}
