//! TOML run configuration: parsing, `--set` overrides, and conversion into
//! the library's typed structures.
//!
//! The grammar is a single TOML file with `[code]`, `[channel]`, `[decode]`,
//! `[sim]`, and `[output]` sections (see the README for the full key list).
//! Any key can be overridden on the command line with
//! `--set section.key=value`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use polar::{CampaignConfig, ChannelModel, DecoderKind, ReliabilityMode};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub code: CodeSection,
    pub channel: ChannelSection,
    #[serde(default)]
    pub decode: DecodeSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    /// Code length N, a power of two.
    pub block_len: usize,
    /// Single rate (construct/bounds) or rate grid (simulate/bounds).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<f64>>,
    /// Explicit information lengths; takes precedence over rates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub info_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub info_lens: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    /// "bec", "bsc", or "bawgn".
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossover: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecodeSection {
    /// Subset of {"sc", "lsc", "lclsc"}.
    pub decoders: Vec<String>,
    pub list_size: usize,
    /// "fixed" or "lower_bound".
    pub p_mode: String,
    pub p_fixed: f64,
}

impl Default for DecodeSection {
    fn default() -> Self {
        DecodeSection {
            decoders: vec!["sc".into(), "lsc".into(), "lclsc".into()],
            list_size: 16,
            p_mode: "fixed".into(),
            p_fixed: 0.9,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub trials: u64,
    /// Early-stop error-frame floor; 0 disables early stopping.
    pub min_errors: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the POLAR_WORKERS env var, then all cores.
    pub workers: usize,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            trials: 10_000,
            min_errors: 100,
            seed: 1,
            workers: 0,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub gnuplot: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            gnuplot: false,
        }
    }
}

impl Config {
    /// Loads the file, applies `--set key=value` overrides, and validates.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::from_toml(&text, overrides)
    }

    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Config> {
        let mut table: toml::Table = text.parse().context("config is not valid TOML")?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let config: Config = toml::Value::Table(table)
            .try_into()
            .context("invalid config")?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if !self.code.block_len.is_power_of_two() || self.code.block_len < 2 {
            bail!(
                "code.block_len: N must be a power of two >= 2, got {}",
                self.code.block_len
            );
        }
        self.channel()?;
        self.decoders()?;
        self.p_mode()?;
        self.info_grid()?;
        if self.sim.trials == 0 {
            bail!("sim.trials must be >= 1");
        }
        Ok(())
    }

    pub fn channel(&self) -> Result<ChannelModel<f64>> {
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| {
                anyhow::anyhow!("channel.{key} is required for kind {:?}", self.channel.kind)
            })
        };
        let ch = match self.channel.kind.as_str() {
            "bec" => ChannelModel::bec(need(self.channel.epsilon, "epsilon")?),
            "bsc" => ChannelModel::bsc(need(self.channel.crossover, "crossover")?),
            "bawgn" => ChannelModel::bawgn(need(self.channel.sigma, "sigma")?),
            other => bail!("channel.kind must be one of bec, bsc, bawgn; got {other:?}"),
        };
        ch.map_err(|e| anyhow::anyhow!("{e}"))
    }

    pub fn decoders(&self) -> Result<Vec<DecoderKind>> {
        if self.decode.decoders.is_empty() {
            bail!("decode.decoders must not be empty");
        }
        self.decode
            .decoders
            .iter()
            .map(|name| match name.as_str() {
                "sc" => Ok(DecoderKind::Sc),
                "lsc" => Ok(DecoderKind::Lsc),
                "lclsc" => Ok(DecoderKind::Lclsc),
                other => bail!("decode.decoders entries must be sc|lsc|lclsc, got {other:?}"),
            })
            .collect()
    }

    pub fn p_mode(&self) -> Result<ReliabilityMode<f64>> {
        match self.decode.p_mode.as_str() {
            "lower_bound" => Ok(ReliabilityMode::LowerBound),
            "fixed" => {
                if !(self.decode.p_fixed > 0.5 && self.decode.p_fixed < 1.0) {
                    bail!(
                        "decode.p_fixed must lie in (1/2, 1), got {}",
                        self.decode.p_fixed
                    );
                }
                Ok(ReliabilityMode::Fixed(self.decode.p_fixed))
            }
            other => bail!("decode.p_mode must be fixed or lower_bound, got {other:?}"),
        }
    }

    /// Rate grid as information lengths, `k = round(rate * N)` with
    /// `1 <= k <= N` enforced.
    pub fn info_grid(&self) -> Result<Vec<usize>> {
        let n = self.code.block_len;
        let from_rate = |r: f64| -> Result<usize> {
            let k = (r * n as f64).round() as i64;
            if k < 1 || k > n as i64 {
                bail!("code.rate {r} maps to k={k}, outside 1..=N");
            }
            Ok(k as usize)
        };
        let grid: Vec<usize> = if let Some(ks) = &self.code.info_lens {
            ks.clone()
        } else if let Some(rs) = &self.code.rates {
            rs.iter().map(|&r| from_rate(r)).collect::<Result<_>>()?
        } else if let Some(k) = self.code.info_len {
            vec![k]
        } else if let Some(r) = self.code.rate {
            vec![from_rate(r)?]
        } else {
            bail!("one of code.info_len, code.rate, code.info_lens, code.rates is required");
        };
        for &k in &grid {
            if k < 1 || k > n {
                bail!("code.info_len k={k} outside 1..=N (N={n})");
            }
        }
        if grid.is_empty() {
            bail!("code.rates / code.info_lens must not be empty");
        }
        Ok(grid)
    }

    /// The single information length required by `construct`.
    pub fn single_info_len(&self) -> Result<usize> {
        let grid = self.info_grid()?;
        if grid.len() != 1 {
            bail!("construct needs exactly one rate; set code.info_len or code.rate");
        }
        Ok(grid[0])
    }

    pub fn campaign(&self) -> Result<CampaignConfig<f64>> {
        Ok(CampaignConfig {
            channel: self.channel()?,
            block_len: self.code.block_len,
            info_lens: self.info_grid()?,
            decoders: self.decoders()?,
            list_size: self.decode.list_size,
            p_mode: self.p_mode()?,
            trials: self.sim.trials,
            min_errors: self.sim.min_errors,
            seed: self.sim.seed,
        })
    }
}

/// Applies one `section.key=value` override to the parsed TOML tree.
fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (path, raw) = item
        .split_once('=')
        .with_context(|| format!("--set expects KEY=VALUE, got {item:?}"))?;
    let value = parse_toml_value(raw);
    let keys: Vec<&str> = path.split('.').collect();
    if keys.is_empty() || keys.iter().any(|k| k.is_empty()) {
        bail!("--set key must be a dotted path, got {path:?}");
    }
    let mut current = table;
    for key in &keys[..keys.len() - 1] {
        current = current
            .entry(key.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .with_context(|| format!("--set {path}: {key} is not a table"))?;
    }
    current.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

/// Interprets the right-hand side as a TOML scalar/array, falling back to a
/// string.
fn parse_toml_value(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    if let Ok(t) = wrapped.parse::<toml::Table>() {
        if let Some(v) = t.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[code]
block_len = 8
rate = 0.5

[channel]
kind = "bec"
epsilon = 0.4
"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = Config::from_toml(BASE, &[]).unwrap();
        assert_eq!(cfg.code.block_len, 8);
        assert_eq!(cfg.info_grid().unwrap(), vec![4]);
        assert_eq!(cfg.decode.list_size, 16);
        assert_eq!(cfg.sim.min_errors, 100);
    }

    #[test]
    fn inline_channel_table_form_works() {
        let text = r#"
code = { block_len = 8, info_len = 4 }
channel = { kind = "bec", epsilon = 0.4 }
"#;
        let cfg = Config::from_toml(text, &[]).unwrap();
        assert!(matches!(
            cfg.channel().unwrap(),
            ChannelModel::Bec { erasure } if erasure == 0.4
        ));
    }

    #[test]
    fn set_overrides_nested_keys() {
        let cfg = Config::from_toml(
            BASE,
            &[
                "channel.epsilon=0.3".into(),
                "sim.seed=99".into(),
                "decode.decoders=[\"sc\"]".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.channel.epsilon, Some(0.3));
        assert_eq!(cfg.sim.seed, 99);
        assert_eq!(cfg.decoders().unwrap(), vec![DecoderKind::Sc]);
    }

    #[test]
    fn rejects_bad_block_len_with_key_name() {
        let err = Config::from_toml(BASE, &["code.block_len=3".into()])
            .unwrap_err()
            .to_string();
        assert!(err.contains("code.block_len"), "{err}");
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = format!("{BASE}\n[decode]\nlists = 4\n");
        assert!(Config::from_toml(&text, &[]).is_err());
    }

    #[test]
    fn rejects_rate_zero() {
        let err = Config::from_toml(BASE, &["code.rate=0.0".into()])
            .unwrap_err()
            .to_string();
        assert!(err.contains("outside 1..=N"), "{err}");
    }

    #[test]
    fn rejects_out_of_range_channel_param() {
        let err = Config::from_toml(BASE, &["channel.epsilon=1.0".into()])
            .unwrap_err()
            .to_string();
        assert!(err.contains("epsilon"), "{err}");
    }
}
