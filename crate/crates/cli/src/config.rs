//! Run configuration: an optional TOML file, overridden by command-line flags.

use crate::Common;
use hotspot_lab::eigensolve::EigenOptions;
use hotspot_lab::hotspots::HotspotConfig;
use hotspot_lab::spectral::{Thresholds, VerifyOptions};
use hotspot_lab::Execution;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub domain: Option<String>,
    pub h: f64,
    pub refinements: usize,
    pub m: usize,
    pub out: PathBuf,
    pub solver: SolverConfig,
    pub verify: VerifyConfig,
    pub hotspots: HotspotConfig,
    pub export: ExportConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: f64,
    pub cluster_tol: f64,
    pub seed: u64,
    pub sequential: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub union_tol: f64,
    pub pad: usize,
    pub neumann_max: f64,
    pub dirichlet_min: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportConfig {
    pub vtk: bool,
    pub mesh: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            domain: None,
            h: 0.05,
            refinements: 2,
            m: 6,
            out: PathBuf::from("."),
            solver: SolverConfig::default(),
            verify: VerifyConfig::default(),
            hotspots: HotspotConfig::default(),
            export: ExportConfig::default(),
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        let e = EigenOptions::default();
        SolverConfig { tol: e.tol, cluster_tol: e.cluster_tol, seed: e.seed, sequential: false }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let v = VerifyOptions::default();
        VerifyConfig {
            union_tol: v.union_tol,
            pad: v.pad,
            neumann_max: v.thresholds.neumann_max,
            dirichlet_min: v.thresholds.dirichlet_min,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                toml::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))
            }
        }
    }

    pub fn apply(&mut self, flags: &Common) {
        if let Some(d) = &flags.domain {
            self.domain = Some(d.clone());
        }
        if let Some(h) = flags.h {
            self.h = h;
        }
        if let Some(m) = flags.m {
            self.m = m;
        }
        if let Some(r) = flags.refinements {
            self.refinements = r;
        }
        if let Some(o) = &flags.out {
            self.out = o.clone();
        }
        if let Some(t) = flags.tol {
            self.solver.tol = t;
        }
        if let Some(t) = flags.cluster_tol {
            self.solver.cluster_tol = t;
            self.hotspots.cluster_tol = t;
        }
        if let Some(t) = flags.tol_union {
            self.verify.union_tol = t;
        }
        if flags.sequential {
            self.solver.sequential = true;
        }
        self.export.vtk |= flags.vtk;
        self.export.mesh |= flags.write_mesh;
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("h", self.h),
            ("solver.tol", self.solver.tol),
            ("solver.cluster_tol", self.solver.cluster_tol),
            ("verify.union_tol", self.verify.union_tol),
            ("hotspots.eps_critical", self.hotspots.eps_critical),
            ("hotspots.parity_threshold", self.hotspots.parity_threshold),
            ("hotspots.degenerate_tol", self.hotspots.degenerate_tol),
            ("hotspots.cluster_tol", self.hotspots.cluster_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.m == 0 {
            return Err("m must be at least 1".into());
        }
        if self.domain.is_none() {
            return Err("no domain given (use --domain or `domain` in the config file)".into());
        }
        if !(self.verify.neumann_max < self.verify.dirichlet_min) {
            return Err("verify.neumann_max must be below verify.dirichlet_min".into());
        }
        Ok(())
    }

    pub fn eigen(&self) -> EigenOptions {
        EigenOptions {
            tol: self.solver.tol,
            cluster_tol: self.solver.cluster_tol,
            seed: self.solver.seed,
            exec: self.exec(),
            ..EigenOptions::default()
        }
    }

    pub fn exec(&self) -> Execution {
        if self.solver.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            eigen: self.eigen(),
            union_tol: self.verify.union_tol,
            pad: self.verify.pad,
            thresholds: Thresholds { neumann_max: self.verify.neumann_max, dirichlet_min: self.verify.dirichlet_min },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_sections_and_defaults() {
        let c: RunConfig = toml::from_str(
            "domain = \"disk:1\"\nh = 0.1\n[solver]\nseed = 7\n[hotspots]\neps_critical = 0.1\n[export]\nvtk = true\n",
        )
        .unwrap();
        assert_eq!(c.domain.as_deref(), Some("disk:1"));
        assert_eq!((c.h, c.m, c.solver.seed), (0.1, 6, 7));
        assert_eq!(c.hotspots.eps_critical, 0.1);
        assert_eq!(c.hotspots.fraction_threshold, 0.99);
        assert!(c.export.vtk && !c.export.mesh);
        assert!(toml::from_str::<RunConfig>("bogus = 1").is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig { domain: Some("square".into()), ..RunConfig::default() };
        assert!(c.validate().is_ok());
        c.h = -1.0;
        assert!(c.validate().is_err());
        c.h = 0.1;
        c.m = 0;
        assert!(c.validate().is_err());
    }
}
