//! Classical model of a Si micro-ring photon-pair source.
//!
//! The ring is reduced to the handful of numbers that matter downstream:
//! a resonance comb with free spectral range lambda^2 / (2 pi R n_g),
//! Lorentzian drop-port lines of width lambda/Q, a uniform thermo-optic
//! shift per degree, a quadratic pump-power pair rate (two pump photons in,
//! one signal/idler pair out) and the cavity photon lifetime Q lambda /
//! (2 pi c) that sets the pair correlation time.
//!
//! The comb is built on a uniform wavenumber grid anchored at the reference
//! resonance, so symmetric comb offsets m +- k conserve energy exactly
//! (1/l_s + 1/l_i = 2/l_p); thermal tuning then shifts every line rigidly
//! in wavelength, which keeps the tuning affine and uniform across lines.

use thiserror::Error;

/// Speed of light in nm/ps.
pub const C_NM_PER_PS: f64 = 299_792.458;

/// Speed of light in m/s.
pub const C_M_PER_S: f64 = 299_792_458.0;

/// Wavelength span (nm) over which the comb model is trusted; roughly the
/// telecom O- to U-band range of the single-mode components around the ring.
pub const MODEL_WINDOW_NM: (f64, f64) = (1260.0, 1675.0);

/// Operating-temperature range accepted by the model.
pub const TEMPERATURE_RANGE_C: (f64, f64) = (-50.0, 150.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("wavelength window [{0}, {1}] nm is empty or inverted")]
    InvalidWindow(f64, f64),
    #[error("temperature {0} degC outside the supported {TEMPERATURE_RANGE_C:?} degC")]
    TemperatureOutOfRange(f64),
    #[error("comb offset {offset} falls outside the model window {MODEL_WINDOW_NM:?} nm")]
    NoResonanceInWindow { offset: i32 },
    #[error("comb offset must be >= 1, got {0}")]
    InvalidCombOffset(i32),
}

/// Resonator geometry and optics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    /// Ring radius in meters.
    pub radius_m: f64,
    /// Group index of the ring waveguide mode.
    pub group_index: f64,
    /// Loaded quality factor.
    pub q_factor: f64,
    /// Uniform resonance shift in nm per degree Celsius.
    pub thermo_optic_shift_nm_per_c: f64,
    /// Pump resonance wavelength (nm) at the reference temperature.
    pub ref_wavelength_nm: f64,
    /// Reference temperature (degC) at which `ref_wavelength_nm` holds.
    pub ref_temperature_c: f64,
}

impl Default for RingSpec {
    fn default() -> Self {
        Self {
            radius_m: 7e-6,
            group_index: 4.31,
            q_factor: 20_000.0,
            thermo_optic_shift_nm_per_c: 0.069,
            ref_wavelength_nm: 1551.63,
            ref_temperature_c: 25.0,
        }
    }
}

impl RingSpec {
    pub fn validate(&self) -> Result<(), RingError> {
        if !(self.radius_m > 0.0) {
            return Err(RingError::InvalidSpec(format!("radius {} m must be > 0", self.radius_m)));
        }
        if !(self.q_factor > 1.0) {
            return Err(RingError::InvalidSpec(format!("Q {} must be > 1", self.q_factor)));
        }
        if !(self.group_index > 1.0 && self.group_index < 6.0) {
            return Err(RingError::InvalidSpec(format!(
                "group index {} must lie in (1, 6)",
                self.group_index
            )));
        }
        if !(self.ref_wavelength_nm > 0.0) {
            return Err(RingError::InvalidSpec("reference wavelength must be > 0".into()));
        }
        Ok(())
    }

    /// Comb spacing in wavenumber, 1/(2 pi R n_g), in 1/nm.
    fn wavenumber_spacing(&self) -> f64 {
        let radius_nm = self.radius_m * 1e9;
        1.0 / (2.0 * std::f64::consts::PI * radius_nm * self.group_index)
    }

    /// Rigid thermal shift (nm) at `temperature_c`.
    fn thermal_shift_nm(&self, temperature_c: f64) -> f64 {
        self.thermo_optic_shift_nm_per_c * (temperature_c - self.ref_temperature_c)
    }

    /// Resonance wavelength (nm) of comb line `m` (m = 0 is the pump line,
    /// positive m towards longer wavelengths).
    pub fn resonance_nm(&self, temperature_c: f64, m: i32) -> Result<f64, RingError> {
        check_temperature(temperature_c)?;
        let sigma = 1.0 / self.ref_wavelength_nm - m as f64 * self.wavenumber_spacing();
        if sigma <= 0.0 {
            return Err(RingError::NoResonanceInWindow { offset: m });
        }
        Ok(1.0 / sigma + self.thermal_shift_nm(temperature_c))
    }

    /// Full width at half maximum (nm) of the resonance at `lambda0_nm`.
    pub fn linewidth_nm(&self, lambda0_nm: f64) -> f64 {
        lambda0_nm / self.q_factor
    }
}

/// Pump and pair-generation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub pump_power_mw: f64,
    pub pump_wavelength_nm: f64,
    /// gamma in R = gamma P^2, Hz per mW^2.
    pub pair_rate_coeff_hz_per_mw2: f64,
    /// Two-photon emission-time correlation scale, ps (cavity lifetime).
    pub pair_correlation_time_ps: f64,
}

impl Default for SourceSpec {
    fn default() -> Self {
        let ring = RingSpec::default();
        Self {
            pump_power_mw: 0.41,
            pump_wavelength_nm: ring.ref_wavelength_nm,
            // calibrated so 0.41 mW gives a 21 MHz intrinsic pair rate
            pair_rate_coeff_hz_per_mw2: 21e6 / (0.41 * 0.41),
            pair_correlation_time_ps: cavity_photon_lifetime_ps(&ring),
        }
    }
}

impl SourceSpec {
    pub fn validate(&self) -> Result<(), RingError> {
        if self.pump_power_mw < 0.0 {
            return Err(RingError::InvalidSpec("pump power must be >= 0".into()));
        }
        if self.pair_rate_coeff_hz_per_mw2 < 0.0 {
            return Err(RingError::InvalidSpec("pair rate coefficient must be >= 0".into()));
        }
        if !(self.pair_correlation_time_ps > 0.0) {
            return Err(RingError::InvalidSpec("pair correlation time must be > 0".into()));
        }
        Ok(())
    }
}

fn check_temperature(t: f64) -> Result<(), RingError> {
    if t < TEMPERATURE_RANGE_C.0 || t > TEMPERATURE_RANGE_C.1 {
        return Err(RingError::TemperatureOutOfRange(t));
    }
    Ok(())
}

/// Local free spectral range in wavelength, lambda^2 / (2 pi R n_g), nm.
pub fn free_spectral_range_nm(spec: &RingSpec, lambda_nm: f64) -> f64 {
    let radius_nm = spec.radius_m * 1e9;
    lambda_nm * lambda_nm / (2.0 * std::f64::consts::PI * radius_nm * spec.group_index)
}

/// All resonance wavelengths inside `window` (nm, inclusive) at the given
/// operating temperature, sorted ascending.
pub fn resonance_comb(
    spec: &RingSpec,
    temperature_c: f64,
    window: (f64, f64),
) -> Result<Vec<f64>, RingError> {
    spec.validate()?;
    check_temperature(temperature_c)?;
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(RingError::InvalidWindow(lo, hi));
    }
    let shift = spec.thermal_shift_nm(temperature_c);
    let dsigma = spec.wavenumber_spacing();
    let sigma_ref = 1.0 / spec.ref_wavelength_nm;
    // unshifted comb wavelengths run over 1/(sigma_ref - m dsigma)
    let sigma_hi = 1.0 / (lo - shift).max(1.0);
    let sigma_lo = 1.0 / (hi - shift);
    let m_min = ((sigma_ref - sigma_hi) / dsigma).ceil() as i64;
    let m_max = ((sigma_ref - sigma_lo) / dsigma).floor() as i64;
    let mut comb = Vec::new();
    for m in m_min..=m_max {
        let sigma = sigma_ref - m as f64 * dsigma;
        if sigma <= 0.0 {
            continue;
        }
        let lambda = 1.0 / sigma + shift;
        if lambda >= lo && lambda <= hi {
            comb.push(lambda);
        }
    }
    comb.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(comb)
}

/// Drop-port transmission at `lambda_nm`: a unit-peak Lorentzian around the
/// nearest comb resonance, (dl/2)^2 / ((l - l0)^2 + (dl/2)^2) with
/// dl = l0 / Q.
pub fn drop_port_transmission(spec: &RingSpec, temperature_c: f64, lambda_nm: f64) -> f64 {
    assert!(lambda_nm > 0.0, "wavelength must be positive");
    let shift = spec.thermal_shift_nm(temperature_c);
    let dsigma = spec.wavenumber_spacing();
    let sigma_ref = 1.0 / spec.ref_wavelength_nm;
    let unshifted = lambda_nm - shift;
    let m = if unshifted > 0.0 {
        ((sigma_ref - 1.0 / unshifted) / dsigma).round()
    } else {
        0.0
    };
    let sigma0 = sigma_ref - m * dsigma;
    if sigma0 <= 0.0 {
        return 0.0;
    }
    let lambda0 = 1.0 / sigma0 + shift;
    let half_width = spec.linewidth_nm(lambda0) / 2.0;
    let detuning = lambda_nm - lambda0;
    half_width * half_width / (detuning * detuning + half_width * half_width)
}

/// Sampled drop-port spectrum over `window` with `step_nm` spacing; the
/// backing data of the `spectrum` CLI output.
pub fn transmission_samples(
    spec: &RingSpec,
    temperature_c: f64,
    window: (f64, f64),
    step_nm: f64,
) -> Result<Vec<(f64, f64)>, RingError> {
    spec.validate()?;
    check_temperature(temperature_c)?;
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) || !(step_nm > 0.0) {
        return Err(RingError::InvalidWindow(lo, hi));
    }
    let n = ((hi - lo) / step_nm).floor() as usize + 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = lo + i as f64 * step_nm;
        out.push((lambda, drop_port_transmission(spec, temperature_c, lambda)));
    }
    Ok(out)
}

/// Intrinsic pair generation rate R = gamma P^2 in Hz.
pub fn pair_generation_rate(source: &SourceSpec) -> f64 {
    source.pair_rate_coeff_hz_per_mw2 * source.pump_power_mw * source.pump_power_mw
}

/// Signal/idler channel wavelengths on comb lines m = +-k around the pump.
///
/// Positive offset (signal) is the longer wavelength. The pair conserves
/// energy with the pump exactly at the reference temperature and within a
/// small fraction of a cavity linewidth elsewhere.
pub fn signal_idler_wavelengths(
    spec: &RingSpec,
    temperature_c: f64,
    comb_offset: i32,
) -> Result<(f64, f64), RingError> {
    spec.validate()?;
    if comb_offset < 1 {
        return Err(RingError::InvalidCombOffset(comb_offset));
    }
    let signal = spec.resonance_nm(temperature_c, comb_offset)?;
    let idler = spec.resonance_nm(temperature_c, -comb_offset)?;
    for (lambda, m) in [(signal, comb_offset), (idler, -comb_offset)] {
        if lambda < MODEL_WINDOW_NM.0 || lambda > MODEL_WINDOW_NM.1 {
            return Err(RingError::NoResonanceInWindow { offset: m });
        }
    }
    Ok((signal, idler))
}

/// Cavity photon lifetime Q lambda / (2 pi c), in ps.
pub fn cavity_photon_lifetime_ps(spec: &RingSpec) -> f64 {
    spec.q_factor * spec.ref_wavelength_nm / (2.0 * std::f64::consts::PI * C_NM_PER_PS)
}
