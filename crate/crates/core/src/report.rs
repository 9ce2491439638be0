//! Run configuration, check records, and report serialization.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{JkaError, Result};

pub const SCHEMA: &str = "jka/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = JkaError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(JkaError::InvalidInput(format!("unknown format `{s}` (json, csv, text)"))),
        }
    }
}

/// Every suite name accepted by the runner.
pub const SUITES: [&str; 14] = [
    "constants",
    "dims",
    "tkk_axioms",
    "vogan",
    "projector",
    "tkk_hidden",
    "vector_fields",
    "quadratic",
    "lenz",
    "appendixB",
    "spectrum",
    "bound_state",
    "harmonics",
    "laguerre",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algebras: Vec<AlgebraSpec>,
    pub suites: Vec<String>,
    pub seed: u64,
    pub tol: f64,
    pub points: usize,
    pub degree: usize,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebras: Vec::new(),
            suites: Vec::new(),
            seed: 0,
            tol: 1e-8,
            points: 20,
            degree: 2,
            format: Format::Text,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(JkaError::InvalidInput(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.points == 0 {
            return Err(JkaError::InvalidInput("need at least one sample point".into()));
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(JkaError::UnknownSuite(s.clone()));
            }
        }
        Ok(())
    }
}

/// One measured quantity and its verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub algebra: String,
    pub anchor: String,
    pub value: f64,
    pub expected: String,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes iff `value ≤ tol`.
    pub fn residual(id: &str, algebra: &str, value: f64, tol: f64) -> Self {
        CheckRecord {
            id: id.into(),
            algebra: algebra.into(),
            anchor: anchor(id).into(),
            value,
            expected: format!("<= {tol:e}"),
            pass: value <= tol,
        }
    }

    /// Passes iff `value > threshold`.
    pub fn departure(id: &str, algebra: &str, value: f64, threshold: f64) -> Self {
        CheckRecord {
            id: id.into(),
            algebra: algebra.into(),
            anchor: anchor(id).into(),
            value,
            expected: format!("> {threshold:e}"),
            pass: value > threshold,
        }
    }

    /// An exact comparison; `value` is 0 on a match and 1 otherwise.
    pub fn exact(id: &str, algebra: &str, got: impl fmt::Display, want: impl fmt::Display) -> Self {
        let (got, want) = (got.to_string(), want.to_string());
        CheckRecord {
            id: id.into(),
            algebra: algebra.into(),
            anchor: anchor(id).into(),
            value: if got == want { 0.0 } else { 1.0 },
            expected: want.clone(),
            pass: got == want,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    /// Kept out of serialized output so reports stay byte-stable.
    #[serde(skip)]
    pub wall_clock_ms: Option<u128>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            schema: SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            checks: Vec::new(),
            wall_clock_ms: None,
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| JkaError::InvalidInput(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(s).map_err(|e| JkaError::InvalidInput(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(JkaError::InvalidInput(format!("unsupported report schema `{}`", r.schema)));
        }
        Ok(r)
    }

    /// One row per check.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(c).map_err(|e| JkaError::InvalidInput(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| JkaError::InvalidInput(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| JkaError::InvalidInput(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<4} {:<10} {:<width$} {:>11.3e}  {:<14} {}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.algebra,
                c.id,
                c.value,
                c.expected,
                c.anchor,
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed", self.checks.len(), failed));
        if let Some(ms) = self.wall_clock_ms {
            out.push_str(&format!(", {:.1}s", ms as f64 / 1000.0));
        }
        out.push('\n');
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        fs::write(path, self.render(format)?)?;
        Ok(())
    }
}

/// Check id prefix → the statement being checked. Longest prefix wins.
pub const ANCHORS: &[(&str, &str)] = &[
    ("constants.A", "A⁻¹ = (ρ²/2)(1 + (ρ−2)δ/4)"),
    ("constants.B", "B = (δ/8)(ρ−2)((3ρ/2 − 1)δ − 2)"),
    ("dims", "der ⊂ str ⊂ co, dim co = 2·dim V + dim str"),
    ("tkk_axioms.antisymmetry", "[a,b] + [b,a] = 0"),
    ("tkk_axioms.jacobi", "[a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0"),
    ("vogan.killing", "B(a, θb) negative definite on co"),
    ("vogan", "h_u = i(X_u + Y_u), E_u^± = (i/2)(X_u − Y_u) ∓ L_u"),
    ("projector", "AΣ |[L_α,L_β]x⟩⟨[L_α,L_β]x| = r L_x − |x⟩⟨x| on the cone"),
    ("tkk.xx", "[tildeX(u), tildeX(v)] = 0"),
    ("tkk.yy", "[tildeY(u), tildeY(v)] = 0"),
    ("tkk.xy", "[tildeX(u), tildeY(v)] = −2 tildeS(u,v)"),
    ("tkk.sx", "[tildeS(u,v), tildeX(z)] = tildeX({uvz})"),
    ("tkk.sy", "[tildeS(u,v), tildeY(z)] = −tildeY({vuz})"),
    ("tkk.ss", "[tildeS(u,v), tildeS(z,w)] = tildeS({uvz},w) − tildeS(z,{vuw})"),
    ("vf.xx", "[hatX(u), hatX(v)] = 0"),
    ("vf.yy", "[hatY(u), hatY(v)] = 0"),
    ("vf.xy", "[hatX(u), hatY(v)] = −2 hatS(u,v)"),
    ("vf.sx", "[hatS(u,v), hatX(z)] = hatX({uvz})"),
    ("vf.sy", "[hatS(u,v), hatY(z)] = −hatY({vuz})"),
    ("vf.ss", "[hatS(u,v), hatS(z,w)] = hatS({uvz},w) − hatS(z,{vuw})"),
    ("quad.primary", "(2/ρ)Σ tildeL_α² − tildeL_e² − ½{tildeX_e, tildeY_e} = −a"),
    ("quad.xl", "Σ {tildeX_α, tildeL_α} = ρ{tildeX_e, tildeL_e}"),
    ("quad.yl", "Σ {tildeY_α, tildeL_α} = ρ{tildeY_e, tildeL_e}"),
    ("quad.xx", "Σ tildeX_α² = ρ tildeX_e²"),
    ("quad.yy", "Σ tildeY_α² = ρ tildeY_e²"),
    ("quad.xy", "½Σ {tildeX_α, tildeY_α} = ρ(tildeL_e² + a)"),
    ("quad.lll", "(2/ρ)Σ {[tildeL_α, tildeL_u], tildeL_α} = ½({tildeX_e, tildeY_u} − {tildeX_u, tildeY_e})"),
    ("quad.llx", "(2/ρ)Σ {[tildeL_α, tildeL_u], tildeX_α} = {tildeL_u, tildeX_e} − {tildeX_u, tildeL_e}"),
    ("quad.lly", "(2/ρ)Σ {[tildeL_α, tildeL_u], tildeY_α} = {tildeY_u, tildeL_e} − {tildeL_u, tildeY_e}"),
    ("quad.laplacian", "AΣ [tildeL_α, tildeL_β]² = ½{tildeX_e, tildeY_e} − tildeL_e² + (ρδ/4)(ρδ/4 − 1)"),
    ("lenz.lh", "[L_uv, h] = 0"),
    ("lenz.ll", "[L_uv, L_zw] = L_{[L_u,L_v]z, w} + L_{z, [L_u,L_v]w}"),
    ("lenz.la", "[L_uv, A_z] = A_{[L_u,L_v]z}"),
    ("lenz.ah", "[A_u, h] = 0"),
    ("lenz.aa", "[A_u, A_v] = −2 h L_uv"),
    ("appendix.x_commutator_a_shift", "[X, ⟨u|x⟩] − 2 tildeL_u ≠ 0 once A moves"),
    ("appendix.x_commutator", "[X, ⟨u|x⟩] = 2 tildeL_u"),
    ("appendix.laplacian_commutator", "[Δ, ⟨u|x⟩] = −2r tildeL_u + 2⟨u|x⟩ tildeL_e"),
    ("appendix.laplacian_linear", "Δ⟨u|x⟩ = −(ρδ/2)(⟨u|x⟩ − ⟨u|e⟩r)"),
    ("appendix.o_one_b_shift", "O(1) under B + ε equals −2ε(⟨x|u₀⟩⟨x|v₀⟩/r³ − ⟨x|u₀v₀⟩/r²)"),
    ("appendix.o_one", "[tildeL_v, [tildeL_u, X]](1) − [tildeL_uv, X](1) = 0"),
    ("appendix.scr_o_one_b_shift", "[[tildeL_u, X], X](1) under B + ε equals ρδε⟨u|x⟩/r³"),
    ("appendix.scr_o_one_b_departure", "[[tildeL_u, X], X](1) ≠ 0 once B moves"),
    ("appendix.scr_o_one_a_departure", "[[tildeL_u, X], X](1) ≠ 0 once A moves"),
    ("appendix.scr_o_one", "[[tildeL_u, X], X](1) = 0"),
    ("spectrum.level", "H̃₀ eigenvalue −(I + ρδ/4) with multiplicity N_{≤I}"),
    ("spectrum.ladder", "consecutive H̃₀ eigenvalues differ by 1"),
    ("spectrum.closure", "H̃₀ preserves e^{−r}r^{−κ}·(polynomials of degree ≤ d)"),
    ("bound_state", "hψ = −½(I + ρδ/4)^{−2} ψ for ψ(x) = ψ̃(x/(I + ρδ/4))"),
    ("harmonics.phi", "H̃₀ φ_klm = −(k + l − 1 + ρδ/4) φ_klm"),
    ("harmonics.laplacian", "Δ Y_l = −l(l + ρδ/2 − 1) Y_l"),
    ("harmonics.skew", "∫ (tildeL_u ψ₁)ψ₂ + ψ₁(tildeL_u ψ₂) dvol/r = 0"),
    ("laguerre.lowering", "n L_n^α = (n+α) L_{n−1}^α − x L_{n−1}^{α+1}"),
    ("laguerre.three_term", "(n+1) L_{n+1}^α = (2n+1+α−x) L_n^α − (n+α) L_{n−1}^α"),
    ("laguerre.orthogonality", "∫ x^α e^{−x} L_n^α L_m^α = δ_nm Γ(n+α+1)/n!"),
];

/// The statement behind a check id, or `""` if none is registered.
pub fn anchor(id: &str) -> &'static str {
    ANCHORS
        .iter()
        .filter(|(p, _)| id.starts_with(p))
        .max_by_key(|(p, _)| p.len())
        .map(|(_, a)| *a)
        .unwrap_or("")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Family;

    fn sample() -> Report {
        let cfg = RunConfig {
            algebras: vec![AlgebraSpec::new(Family::Gamma, 3)],
            suites: vec!["tkk_hidden".into()],
            ..RunConfig::default()
        };
        let mut r = Report::new(cfg);
        r.checks.push(CheckRecord::residual("tkk.xx", "gamma:3", 0.0, 1e-8));
        r.checks.push(CheckRecord::departure("appendix.scr_o_one_b_departure", "gamma:3", 1e-6, 1e-4));
        r.checks.push(CheckRecord::exact("constants.A", "gamma:3", "1/2", "1/2"));
        r
    }

    #[test]
    fn json_roundtrip() {
        let r = sample();
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(!r.pass());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn csv_has_one_row_per_check() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + 3);
    }

    #[test]
    fn text_shows_anchors() {
        let t = sample().to_text();
        assert!(t.contains("[tildeX(u), tildeX(v)] = 0"));
        assert!(t.contains("1 failed"));
    }

    #[test]
    fn longest_prefix_wins() {
        assert_eq!(anchor("appendix.scr_o_one"), "[[tildeL_u, X], X](1) = 0");
        assert!(anchor("appendix.scr_o_one_b_shift").contains("ρδε"));
        assert!(anchor("vogan.killing").contains("definite"));
        assert_eq!(anchor("nothing"), "");
    }

    #[test]
    fn every_suite_check_has_an_anchor() {
        for id in ["tkk.ss", "vf.sy", "quad.laplacian", "lenz.aa", "appendix.laplacian_linear", "spectrum.level.2"] {
            assert!(!anchor(id).is_empty(), "{id}");
        }
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.suites.push("nope".into());
        assert!(matches!(c.validate(), Err(JkaError::UnknownSuite(_))));
        let c = RunConfig { tol: 0.0, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }
}
