//! Experiment configuration: channels, losses, timing, run parameters.

use ring_model::{RingSpec, SourceSpec};
use timebin_core::{PhaseConfig, PortLabel};

use crate::error::SimError;

/// One detection channel: the lumped fiber + filter + detector path behind
/// an AMZI output port (or behind the DWDM in the direct setup).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub channel_id: u16,
    /// Total loss of the path in dB, entered as a positive number.
    pub transmittance_db: f64,
    /// Detector timing jitter, Gaussian FWHM in ps.
    pub jitter_fwhm_ps: f64,
    /// Dark count rate in Hz.
    pub dark_rate_hz: f64,
    /// Constant cable/electronic delay added to every tag, ps.
    pub delay_offset_ps: f64,
    /// Detector dead time in ps; 0 disables it.
    pub dead_time_ps: u64,
}

impl ChannelSpec {
    pub fn new(channel_id: u16, transmittance_db: f64) -> Self {
        Self {
            channel_id,
            transmittance_db,
            jitter_fwhm_ps: 100.0,
            dark_rate_hz: 100.0,
            delay_offset_ps: 0.0,
            dead_time_ps: 0,
        }
    }

    /// Survival probability 10^(-loss/10) including `extra_db` of shared loss.
    pub fn survival(&self, extra_db: f64) -> f64 {
        10f64.powf(-(self.transmittance_db + extra_db) / 10.0)
    }

    /// Gaussian jitter sigma in ps (FWHM / 2 sqrt(2 ln 2)).
    pub fn jitter_sigma_ps(&self) -> f64 {
        self.jitter_fwhm_ps / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.transmittance_db < 0.0 {
            return Err(SimError::Config(format!(
                "channel {}: transmittance_db {} must be entered as a positive loss",
                self.channel_id, self.transmittance_db
            )));
        }
        if self.jitter_fwhm_ps < 0.0 {
            return Err(SimError::Config(format!(
                "channel {}: jitter_fwhm_ps must be >= 0",
                self.channel_id
            )));
        }
        if self.dark_rate_hz < 0.0 {
            return Err(SimError::Config(format!(
                "channel {}: dark_rate_hz must be >= 0",
                self.channel_id
            )));
        }
        Ok(())
    }
}

/// Which receiver a channel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Signal,
    Idler,
}

/// Full entanglement-measurement configuration: source, two 2x4 AMZIs and
/// eight detection channels.
///
/// Channels are indexed 0..8 as signal Z0, X0, X1, Z1 then idler Z'0, X'0,
/// X'1, Z'1.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ring: RingSpec,
    pub source: SourceSpec,
    pub phases: PhaseConfig,
    /// AMZI path imbalance tau in ps.
    pub amzi_delay_ps: u64,
    /// Insertion loss of each PLC interferometer, dB, shared by all ports.
    pub amzi_insertion_db: f64,
    pub channels: [ChannelSpec; 8],
    pub duration_s: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Reference defaults: 800 ps delay, 28/29 dB signal/idler paths,
    /// 7.5 dB PLC insertion, 100 ps FWHM detectors with 100 Hz dark rate.
    pub fn with_defaults(duration_s: f64, seed: u64) -> Self {
        let mut channels = [ChannelSpec::new(0, 28.0); 8];
        for (i, ch) in channels.iter_mut().enumerate() {
            ch.channel_id = i as u16;
            ch.transmittance_db = if i < 4 { 28.0 } else { 29.0 };
        }
        Self {
            ring: RingSpec::default(),
            source: SourceSpec::default(),
            phases: PhaseConfig::default(),
            amzi_delay_ps: 800,
            amzi_insertion_db: 7.5,
            channels,
            duration_s,
            seed,
        }
    }

    /// Channel spec behind a given AMZI output port.
    pub fn channel(&self, side: Side, port: PortLabel) -> &ChannelSpec {
        &self.channels[Self::channel_index(side, port)]
    }

    /// Index in `channels` of the path behind (side, port).
    pub fn channel_index(side: Side, port: PortLabel) -> usize {
        match side {
            Side::Signal => port.index(),
            Side::Idler => 4 + port.index(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.duration_s > 0.0) {
            return Err(SimError::Config("duration_s must be > 0".into()));
        }
        if self.amzi_delay_ps == 0 {
            return Err(SimError::Config("amzi_delay_ps must be > 0".into()));
        }
        if self.amzi_insertion_db < 0.0 {
            return Err(SimError::Config("amzi_insertion_db must be >= 0".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for ch in &self.channels {
            ch.validate()?;
            if !seen.insert(ch.channel_id) {
                return Err(SimError::Config(format!("duplicate channel id {}", ch.channel_id)));
            }
        }
        self.ring.validate()?;
        self.source.validate()?;
        Ok(())
    }
}

/// Two-channel configuration for the direct coincidence setup (no AMZIs:
/// source, pump-reject filter, DWDM split, one detector per photon).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectConfig {
    pub ring: RingSpec,
    pub source: SourceSpec,
    pub signal: ChannelSpec,
    pub idler: ChannelSpec,
    pub duration_s: f64,
    pub seed: u64,
}

impl DirectConfig {
    pub fn with_defaults(duration_s: f64, seed: u64) -> Self {
        Self {
            ring: RingSpec::default(),
            source: SourceSpec::default(),
            signal: ChannelSpec::new(0, 28.0),
            idler: ChannelSpec::new(4, 29.0),
            duration_s,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.duration_s > 0.0) {
            return Err(SimError::Config("duration_s must be > 0".into()));
        }
        if self.signal.channel_id == self.idler.channel_id {
            return Err(SimError::Config(format!(
                "duplicate channel id {}",
                self.signal.channel_id
            )));
        }
        self.signal.validate()?;
        self.idler.validate()?;
        self.ring.validate()?;
        self.source.validate()?;
        Ok(())
    }
}
