//! Scenario configurations: the two bundled correspondences plus a plain
//! JSON file format for user-specified ones.

use anyhow::{anyhow, bail, Context, Result};
use flagcalc::{
    assemble_e1, assemble_e1_bgg, check_bgg_duality, check_duality, classify, CartanData,
    CycleStabilizer, FibrationSpec, ParabolicMarking, Weight, WeylWord,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::report::{FibrationInfo, PageReport, ScenarioBundleReport, ScenarioReport};

/// A scenario: one fibration plus the bundles to run through it.
/// Transport words use 1-based node indices, matching the printed form.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ScenarioConfig {
    pub name: String,
    pub cartan: String,
    pub q_marking: String,
    pub m_marking: String,
    #[serde(default)]
    pub transport: Vec<usize>,
    pub cycle_stabilizer: String,
    pub hermitian_holomorphic: bool,
    #[serde(default)]
    pub bundles: Vec<Vec<i64>>,
    /// Inclusive per-node coordinate ranges, each expanded to every valid
    /// label and appended to `bundles`.
    #[serde(default)]
    pub bundle_ranges: Vec<Vec<(i64, i64)>>,
}

impl ScenarioConfig {
    pub fn twistor_pp() -> ScenarioConfig {
        ScenarioConfig {
            name: "twistor-pp".to_string(),
            cartan: "A3".to_string(),
            q_marking: "x..".to_string(),
            m_marking: ".x.".to_string(),
            transport: Vec::new(),
            cycle_stabilizer: "parabolic".to_string(),
            hermitian_holomorphic: true,
            bundles: vec![vec![2, 0, 0], vec![-3, 0, 0], vec![1, 0, 1], vec![-6, 0, 1]],
            bundle_ranges: Vec::new(),
        }
    }

    pub fn grassmann_pm() -> ScenarioConfig {
        ScenarioConfig {
            name: "grassmann-pm".to_string(),
            cartan: "A3".to_string(),
            q_marking: ".x.".to_string(),
            m_marking: ".x.".to_string(),
            transport: vec![2],
            cycle_stabilizer: "levi".to_string(),
            hermitian_holomorphic: false,
            bundles: vec![vec![0, 0, 0], vec![0, 1, 0], vec![2, 0, 1]],
            bundle_ranges: Vec::new(),
        }
    }

    /// Resolve a bundled name or load a JSON file.
    pub fn resolve(name_or_path: &str) -> Result<ScenarioConfig> {
        match name_or_path {
            "twistor-pp" => Ok(ScenarioConfig::twistor_pp()),
            "grassmann-pm" => Ok(ScenarioConfig::grassmann_pm()),
            path => {
                if !Path::new(path).exists() {
                    bail!(
                        "unknown scenario {path:?}: not a bundled name (twistor-pp, \
                         grassmann-pm) and no such file"
                    );
                }
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read scenario file {path:?}"))?;
                let config: ScenarioConfig = serde_json::from_str(&text)
                    .with_context(|| format!("cannot parse scenario file {path:?}"))?;
                Ok(config)
            }
        }
    }

    pub fn fibration(&self) -> Result<FibrationSpec> {
        let cartan = CartanData::parse(&self.cartan).map_err(|e| anyhow!("{e}"))?;
        let q = ParabolicMarking::from_mask(cartan.clone(), &self.q_marking)
            .map_err(|e| anyhow!("q_marking: {e}"))?;
        let m = ParabolicMarking::from_mask(cartan.clone(), &self.m_marking)
            .map_err(|e| anyhow!("m_marking: {e}"))?;
        let transport = if self.transport.is_empty() {
            None
        } else {
            let zero_based: Vec<usize> = self
                .transport
                .iter()
                .map(|&i| {
                    if i == 0 || i > cartan.rank() {
                        bail!("transport node {i} out of range 1..={}", cartan.rank())
                    } else {
                        Ok(i - 1)
                    }
                })
                .collect::<Result<_>>()?;
            Some(WeylWord(zero_based))
        };
        let stabilizer = match self.cycle_stabilizer.as_str() {
            "parabolic" => CycleStabilizer::Parabolic,
            "levi" => CycleStabilizer::Levi,
            other => bail!("cycle_stabilizer must be \"parabolic\" or \"levi\", got {other:?}"),
        };
        FibrationSpec::new(
            &self.name,
            q,
            m,
            transport,
            stabilizer,
            self.hermitian_holomorphic,
        )
        .map_err(|e| anyhow!("{e}"))
    }
}

/// Run every bundle of a scenario: de Rham page, classification, duality,
/// flags, and the BGG side where the configuration admits it.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let fib = config.fibration()?;
    let mut requested = config.bundles.clone();
    for ranges in &config.bundle_ranges {
        if ranges.len() != fib.cartan().rank() {
            bail!(
                "bundle range needs {} coordinate pairs, found {}",
                fib.cartan().rank(),
                ranges.len()
            );
        }
        let mut grid: Vec<Vec<i64>> = vec![Vec::new()];
        for &(lo, hi) in ranges {
            if lo > hi {
                bail!("empty bundle range {lo}..{hi}");
            }
            let mut next = Vec::new();
            for prefix in &grid {
                for v in lo..=hi {
                    let mut row = prefix.clone();
                    row.push(v);
                    next.push(row);
                }
            }
            grid = next;
        }
        for coords in grid {
            if fib.q_marking().is_valid_label(&Weight::new(coords.clone())) {
                requested.push(coords);
            }
        }
    }
    let mut bundles = Vec::new();
    let mut all_pass = true;
    for coords in &requested {
        let weight = Weight::new(coords.clone());
        fib.q_marking()
            .validate_label(&weight)
            .map_err(|e| anyhow!("{e}"))?;
        let page = assemble_e1(&fib, &weight).map_err(|e| anyhow!("{e}"))?;
        let duality = check_duality(&fib, &weight).map_err(|e| anyhow!("{e}"))?;
        all_pass &= duality.pass;
        let discounted_classification = classify(&page.discounted()).class.to_string();
        let (bgg, bgg_duality_pass) = if fib.hermitian_holomorphic() {
            let bgg_page = assemble_e1_bgg(&fib, &weight).map_err(|e| anyhow!("{e}"))?;
            let bgg_duality = check_bgg_duality(&fib, &weight).map_err(|e| anyhow!("{e}"))?;
            all_pass &= bgg_duality.pass;
            (
                Some(PageReport::new(&fib, &weight, &bgg_page, false)),
                Some(bgg_duality.pass),
            )
        } else {
            (None, None)
        };
        bundles.push(ScenarioBundleReport {
            bundle: coords.clone(),
            de_rham: PageReport::new(&fib, &weight, &page, false),
            discounted_classification,
            duality_pass: duality.pass,
            bgg,
            bgg_duality_pass,
        });
    }
    Ok(ScenarioReport {
        fibration: FibrationInfo::new(&fib),
        bundles,
        all_duality_pass: all_pass,
    })
}
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_configs_resolve() {
        for name in ["twistor-pp", "grassmann-pm"] {
            let config = ScenarioConfig::resolve(name).unwrap();
            let fib = config.fibration().unwrap();
            assert_eq!(fib.name(), name);
        }
        assert!(ScenarioConfig::resolve("no-such-scenario").is_err());
    }

    #[test]
    fn config_validation() {
        let mut config = ScenarioConfig::twistor_pp();
        config.cycle_stabilizer = "other".to_string();
        assert!(config.fibration().is_err());
        let mut config = ScenarioConfig::grassmann_pm();
        config.transport = vec![4];
        assert!(config.fibration().is_err());
        config.transport = vec![0];
        assert!(config.fibration().is_err());
    }

    #[test]
    fn ranges_expand_to_valid_labels_only() {
        let mut config = ScenarioConfig::twistor_pp();
        config.bundles = Vec::new();
        config.bundle_ranges = vec![vec![(0, 0), (-1, 0), (0, 1)]];
        let report = run_scenario(&config).unwrap();
        // The uncrossed middle coordinate cannot go negative.
        assert_eq!(report.bundles.len(), 2);
        assert!(report
            .bundles
            .iter()
            .all(|b| b.bundle[0] == 0 && b.bundle[1] == 0));
        assert!(report.all_duality_pass);
    }
}
