//! Experiment configuration: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! precision = 1/1000000000
//! seed = 7
//! function = f.txt          # optional; random from `seed` otherwise
//! perturbation = g.txt      # optional; random from `seed + 1` otherwise
//! scales = dyadic:14        # or an explicit list: 1, 1/2, 1/3
//! final_distance = 1/1000
//! monotone_tolerance = 1/1000000
//! variation_gap = 1/1000
//! variation_from = 10
//! ```

use std::path::{Path, PathBuf};

use maxvar::verify::Thresholds;
use maxvar::Rat;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub precision: Rat,
    pub seed: u64,
    pub function: Option<PathBuf>,
    pub perturbation: Option<PathBuf>,
    pub scales: Vec<Rat>,
    pub thresholds: Thresholds,
}

fn rat(line: usize, key: &str, value: &str) -> Result<Rat, String> {
    value.parse().map_err(|_| format!("line {line}: {key} expects a rational, got {value:?}"))
}

fn scales(line: usize, value: &str) -> Result<Vec<Rat>, String> {
    if let Some(k) = value.strip_prefix("dyadic:") {
        let k: i32 = k.trim().parse().map_err(|_| format!("line {line}: bad dyadic exponent {k:?}"))?;
        if !(0..=62).contains(&k) {
            return Err(format!("line {line}: dyadic exponent must lie in 0..=62, got {k}"));
        }
        return Ok((0..=k).map(|e| Rat::pow2(-e)).collect());
    }
    value.split(',').map(|s| rat(line, "scales", s.trim())).collect()
}

/// Parses `text`; relative paths resolve against `base`.
pub fn parse(text: &str, base: &Path) -> Result<ExperimentConfig, String> {
    let mut cfg = ExperimentConfig {
        precision: Rat::frac(1, 1_000_000_000),
        seed: 0,
        function: None,
        perturbation: None,
        scales: Vec::new(),
        thresholds: Thresholds::default(),
    };
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {n}: expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let t = &mut cfg.thresholds;
        match key {
            "precision" => cfg.precision = rat(n, key, value)?,
            "seed" => cfg.seed = value.parse().map_err(|_| format!("line {n}: bad seed {value:?}"))?,
            "function" => cfg.function = Some(base.join(value)),
            "perturbation" => cfg.perturbation = Some(base.join(value)),
            "scales" => cfg.scales = scales(n, value)?,
            "final_distance" => t.final_distance = rat(n, key, value)?,
            "monotone_tolerance" => t.monotone_tolerance = rat(n, key, value)?,
            "variation_gap" => t.variation_gap = rat(n, key, value)?,
            "variation_from" => {
                t.variation_from = value.parse().map_err(|_| format!("line {n}: bad index {value:?}"))?
            }
            other => return Err(format!("line {n}: unknown key {other:?}")),
        }
    }
    if !cfg.precision.is_positive() {
        return Err(format!("precision must be positive, got {}", cfg.precision));
    }
    if cfg.scales.is_empty() {
        return Err("missing `scales`".into());
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_schedule_and_defaults() {
        let cfg = parse("scales = dyadic:3\nseed = 9 # trailing comment\n", Path::new("/tmp")).unwrap();
        assert_eq!(cfg.scales.len(), 4);
        assert_eq!(cfg.scales[3], Rat::frac(1, 8));
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.precision, Rat::frac(1, 1_000_000_000));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("scales = 1\nbogus = 3\n", Path::new(".")).unwrap_err();
        assert!(err.starts_with("line 2"), "{err}");
        assert!(parse("seed = 1\n", Path::new(".")).is_err());
        assert!(parse("scales = 1\nprecision = 0\n", Path::new(".")).is_err());
    }
}
