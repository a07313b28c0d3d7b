//! Sectioned key-value experiment configuration.
//!
//! The file is TOML with sections [ring], [source], [phases], [filters],
//! [channels.N] (N = 0..7) and [run]; every key carries its unit in the
//! name and every key is optional, falling back to the documented defaults
//! (the `paper-25C` operating point). Unknown keys are schema errors.

use std::collections::BTreeMap;
use std::path::Path;

use ring_model::{cavity_photon_lifetime_ps, RingSpec, SourceSpec};
use serde::{Deserialize, Serialize};
use timebin_core::PhaseConfig;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub ring: RingSection,
    #[serde(default)]
    pub source: SourceSection,
    #[serde(default)]
    pub phases: PhasesSection,
    #[serde(default)]
    pub filters: FiltersSection,
    /// Keys "0".."7": signal Z0, X0, X1, Z1 then idler Z'0, X'0, X'1, Z'1.
    #[serde(default)]
    pub channels: BTreeMap<String, ChannelSection>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub radius_um: Option<f64>,
    pub group_index: Option<f64>,
    pub q_factor: Option<f64>,
    pub thermo_optic_shift_nm_per_c: Option<f64>,
    pub ref_wavelength_nm: Option<f64>,
    pub ref_temperature_c: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    pub pump_power_mw: Option<f64>,
    pub pump_wavelength_nm: Option<f64>,
    pub pair_rate_coeff_hz_per_mw2: Option<f64>,
    /// Defaults to the cavity photon lifetime of [ring].
    pub pair_correlation_time_ps: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasesSection {
    pub theta1_rad: Option<f64>,
    pub theta2_rad: Option<f64>,
    pub delta_pump_rad: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltersSection {
    pub signal_center_nm: Option<f64>,
    pub idler_center_nm: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub transmittance_db: Option<f64>,
    pub jitter_fwhm_ps: Option<f64>,
    pub dark_rate_hz: Option<f64>,
    pub delay_offset_ps: Option<f64>,
    pub dead_time_ps: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Ring operating temperature, degC.
    pub temperature_c: Option<f64>,
    pub amzi_delay_ps: Option<u64>,
    pub amzi_insertion_db: Option<f64>,
    pub duration_s: Option<f64>,
    pub seed: Option<u64>,
    /// Pump power for the direct (no-AMZI) coincidence setup.
    pub direct_pump_power_mw: Option<f64>,
}

/// Defaults shared by every preset: 28/29 dB signal/idler paths, 100 ps
/// detectors, 100 Hz dark rate, 800 ps AMZIs with 7.5 dB insertion.
pub mod defaults {
    pub const SIGNAL_LOSS_DB: f64 = 28.0;
    pub const IDLER_LOSS_DB: f64 = 29.0;
    pub const JITTER_FWHM_PS: f64 = 100.0;
    pub const DARK_RATE_HZ: f64 = 100.0;
    pub const AMZI_DELAY_PS: u64 = 800;
    pub const AMZI_INSERTION_DB: f64 = 7.5;
    pub const DURATION_S: f64 = 10.0;
    pub const SEED: u64 = 1;
    pub const PUMP_POWER_MW: f64 = 0.46;
    pub const DIRECT_PUMP_POWER_MW: f64 = 0.41;
    pub const TEMPERATURE_C: f64 = 25.0;
}

/// Operating-point presets encoding the three reference temperatures.
pub fn preset(name: &str) -> Option<FileConfig> {
    let (temp, pump_nm, signal_nm, idler_nm) = match name {
        "paper-25C" => (25.0, 1551.63, 1564.34, 1539.01),
        "paper-20C" => (20.0, 1551.27, 1564.05, 1538.72),
        "paper-10C" => (10.0, 1550.59, 1563.39, 1538.04),
        _ => return None,
    };
    let mut config = FileConfig::default();
    config.run.temperature_c = Some(temp);
    config.source.pump_wavelength_nm = Some(pump_nm);
    config.source.pump_power_mw = Some(defaults::PUMP_POWER_MW);
    config.filters.signal_center_nm = Some(signal_nm);
    config.filters.idler_center_nm = Some(idler_nm);
    Some(config)
}

pub const PRESET_NAMES: [&str; 3] = ["paper-25C", "paper-20C", "paper-10C"];

/// Parse a config file; schema violations carry the TOML key path.
pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadInput {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    let config: FileConfig = toml::from_str(text).map_err(|e| {
        let path = e
            .span()
            .map(|s| locate(text, s.start))
            .unwrap_or_else(|| "<file>".to_string());
        CliError::Schema { path, message: e.message().to_string() }
    })?;
    validate(&config)?;
    Ok(config)
}

fn locate(text: &str, byte: usize) -> String {
    let upto = &text[..byte.min(text.len())];
    let line = upto.lines().count().max(1);
    format!("line {line}")
}

fn validate(config: &FileConfig) -> Result<(), CliError> {
    let range_err = |key: &str, message: String| CliError::Range { key: key.into(), message };
    for (name, section) in &config.channels {
        if name.parse::<usize>().map(|i| i > 7).unwrap_or(true) {
            return Err(CliError::Schema {
                path: format!("channels.{name}"),
                message: "channel sections are channels.0 .. channels.7".into(),
            });
        }
        if let Some(db) = section.transmittance_db {
            if db < 0.0 {
                return Err(range_err(
                    &format!("channels.{name}.transmittance_db"),
                    format!("losses are entered positive, got {db}"),
                ));
            }
        }
        if let Some(j) = section.jitter_fwhm_ps {
            if j < 0.0 {
                return Err(range_err(
                    &format!("channels.{name}.jitter_fwhm_ps"),
                    format!("must be >= 0, got {j}"),
                ));
            }
        }
        if let Some(d) = section.dark_rate_hz {
            if d < 0.0 {
                return Err(range_err(
                    &format!("channels.{name}.dark_rate_hz"),
                    format!("must be >= 0, got {d}"),
                ));
            }
        }
    }
    if let Some(p) = config.source.pump_power_mw {
        if p < 0.0 {
            return Err(range_err("source.pump_power_mw", format!("must be >= 0, got {p}")));
        }
    }
    if let Some(d) = config.run.duration_s {
        if !(d > 0.0) {
            return Err(range_err("run.duration_s", format!("must be > 0, got {d}")));
        }
    }
    if let Some(q) = config.ring.q_factor {
        if !(q > 1.0) {
            return Err(range_err("ring.q_factor", format!("must be > 1, got {q}")));
        }
    }
    Ok(())
}

impl FileConfig {
    pub fn ring_spec(&self) -> RingSpec {
        let d = RingSpec::default();
        RingSpec {
            radius_m: self.ring.radius_um.map(|um| um * 1e-6).unwrap_or(d.radius_m),
            group_index: self.ring.group_index.unwrap_or(d.group_index),
            q_factor: self.ring.q_factor.unwrap_or(d.q_factor),
            thermo_optic_shift_nm_per_c: self
                .ring
                .thermo_optic_shift_nm_per_c
                .unwrap_or(d.thermo_optic_shift_nm_per_c),
            ref_wavelength_nm: self.ring.ref_wavelength_nm.unwrap_or(d.ref_wavelength_nm),
            ref_temperature_c: self.ring.ref_temperature_c.unwrap_or(d.ref_temperature_c),
        }
    }

    pub fn source_spec(&self) -> SourceSpec {
        let ring = self.ring_spec();
        let d = SourceSpec::default();
        SourceSpec {
            pump_power_mw: self.source.pump_power_mw.unwrap_or(defaults::PUMP_POWER_MW),
            pump_wavelength_nm: self
                .source
                .pump_wavelength_nm
                .unwrap_or(ring.ref_wavelength_nm),
            pair_rate_coeff_hz_per_mw2: self
                .source
                .pair_rate_coeff_hz_per_mw2
                .unwrap_or(d.pair_rate_coeff_hz_per_mw2),
            pair_correlation_time_ps: self
                .source
                .pair_correlation_time_ps
                .unwrap_or_else(|| cavity_photon_lifetime_ps(&ring)),
        }
    }

    pub fn phase_config(&self) -> PhaseConfig {
        PhaseConfig::new(
            self.phases.theta1_rad.unwrap_or(0.0),
            self.phases.theta2_rad.unwrap_or(0.0),
            self.phases.delta_pump_rad.unwrap_or(0.0),
        )
    }

    pub fn temperature_c(&self) -> f64 {
        self.run.temperature_c.unwrap_or(defaults::TEMPERATURE_C)
    }

    pub fn duration_s(&self) -> f64 {
        self.run.duration_s.unwrap_or(defaults::DURATION_S)
    }

    pub fn seed(&self) -> u64 {
        self.run.seed.unwrap_or(defaults::SEED)
    }

    fn channel_spec(&self, index: usize) -> event_sim::ChannelSpec {
        let side_default = if index < 4 {
            defaults::SIGNAL_LOSS_DB
        } else {
            defaults::IDLER_LOSS_DB
        };
        let section = self.channels.get(&index.to_string());
        event_sim::ChannelSpec {
            channel_id: index as u16,
            transmittance_db: section
                .and_then(|s| s.transmittance_db)
                .unwrap_or(side_default),
            jitter_fwhm_ps: section
                .and_then(|s| s.jitter_fwhm_ps)
                .unwrap_or(defaults::JITTER_FWHM_PS),
            dark_rate_hz: section.and_then(|s| s.dark_rate_hz).unwrap_or(defaults::DARK_RATE_HZ),
            delay_offset_ps: section.and_then(|s| s.delay_offset_ps).unwrap_or(0.0),
            dead_time_ps: section.and_then(|s| s.dead_time_ps).unwrap_or(0),
        }
    }

    /// Full 8-channel entanglement-measurement configuration.
    pub fn experiment_config(&self) -> event_sim::ExperimentConfig {
        let mut channels = [event_sim::ChannelSpec::new(0, 0.0); 8];
        for (i, ch) in channels.iter_mut().enumerate() {
            *ch = self.channel_spec(i);
        }
        event_sim::ExperimentConfig {
            ring: self.ring_spec(),
            source: self.source_spec(),
            phases: self.phase_config(),
            amzi_delay_ps: self.run.amzi_delay_ps.unwrap_or(defaults::AMZI_DELAY_PS),
            amzi_insertion_db: self
                .run
                .amzi_insertion_db
                .unwrap_or(defaults::AMZI_INSERTION_DB),
            channels,
            duration_s: self.duration_s(),
            seed: self.seed(),
        }
    }

    /// Two-channel direct coincidence configuration (no AMZIs), using the
    /// Z0/Z'0 paths and the direct pump power.
    pub fn direct_config(&self) -> event_sim::DirectConfig {
        let mut source = self.source_spec();
        source.pump_power_mw = self
            .run
            .direct_pump_power_mw
            .unwrap_or(defaults::DIRECT_PUMP_POWER_MW);
        event_sim::DirectConfig {
            ring: self.ring_spec(),
            source,
            signal: self.channel_spec(0),
            idler: self.channel_spec(4),
            duration_s: self.duration_s(),
            seed: self.seed(),
        }
    }
}

/// Resolve --preset/--config into a file config.
pub fn resolve_config(
    preset_name: Option<&str>,
    config_path: Option<&Path>,
) -> Result<(FileConfig, String), CliError> {
    match (preset_name, config_path) {
        (Some(name), None) => {
            let config = preset(name).ok_or_else(|| {
                CliError::BadArgument(format!(
                    "unknown preset {name:?}; available: {}",
                    PRESET_NAMES.join(", ")
                ))
            })?;
            Ok((config, format!("preset:{name}")))
        }
        (None, Some(path)) => {
            Ok((load_config(path)?, path.display().to_string()))
        }
        (Some(_), Some(_)) => {
            Err(CliError::BadArgument("--preset and --config are mutually exclusive".into()))
        }
        (None, None) => Ok((preset("paper-25C").unwrap(), "preset:paper-25C".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_encode_operating_points() {
        let c = preset("paper-25C").unwrap();
        assert_eq!(c.source.pump_wavelength_nm, Some(1551.63));
        assert_eq!(c.source.pump_power_mw, Some(0.46));
        assert_eq!(c.filters.signal_center_nm, Some(1564.34));
        assert_eq!(c.filters.idler_center_nm, Some(1539.01));
        let c = preset("paper-10C").unwrap();
        assert_eq!(c.run.temperature_c, Some(10.0));
        assert_eq!(c.source.pump_wavelength_nm, Some(1550.59));
        assert_eq!(c.filters.signal_center_nm, Some(1563.39));
        assert!(preset("paper-40C").is_none());
    }

    #[test]
    fn empty_sections_get_defaults() {
        let c = parse_config("[phases]\n").unwrap();
        let phases = c.phase_config();
        assert_eq!(phases.theta1, 0.0);
        assert_eq!(phases.theta2, 0.0);
        assert_eq!(phases.delta_pump, 0.0);
        let exp = c.experiment_config();
        assert_eq!(exp.amzi_delay_ps, 800);
        assert_eq!(exp.channels[0].transmittance_db, 28.0);
        assert_eq!(exp.channels[4].transmittance_db, 29.0);
        assert_eq!(exp.channels[7].jitter_fwhm_ps, 100.0);
    }

    #[test]
    fn negative_loss_is_a_range_error() {
        let err = parse_config("[channels.2]\ntransmittance_db = -28.0\n").unwrap_err();
        match err {
            CliError::Range { key, .. } => {
                assert_eq!(key, "channels.2.transmittance_db");
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_schema_errors() {
        let err = parse_config("[ring]\nradius_nm = 7.0\n").unwrap_err();
        assert!(matches!(err, CliError::Schema { .. }), "{err:?}");
        let err = parse_config("[channels.9]\ntransmittance_db = 1.0\n").unwrap_err();
        assert!(matches!(err, CliError::Schema { .. }), "{err:?}");
    }

    #[test]
    fn direct_config_uses_direct_power() {
        let c = preset("paper-25C").unwrap();
        assert_eq!(c.direct_config().source.pump_power_mw, 0.41);
        assert_eq!(c.experiment_config().source.pump_power_mw, 0.46);
    }

    #[test]
    fn correlation_time_defaults_to_cavity_lifetime() {
        let c = parse_config("").unwrap();
        let tau = c.source_spec().pair_correlation_time_ps;
        assert!((tau - 16.475).abs() < 0.01, "{tau}");
    }
}
