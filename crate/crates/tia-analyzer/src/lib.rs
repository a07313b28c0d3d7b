//! Time-interval analysis of detection tag streams: streaming coincidence
//! histograms, CCR/CAR statistics, peak widths, Z-basis visibility, X-basis
//! fringe scans with weighted sinusoidal fits, and the visibility -> CHSH S
//! conversion.

mod csv_io;
mod error;
mod fringe;
mod histogram;
mod stats;
mod visibility;

pub use csv_io::{read_fringe_csv, read_histogram_csv, write_fringe_csv, write_histogram_csv};
pub use error::AnalyzerError;
pub use fringe::{
    fit_fringe_points, fit_sinusoid, fringe_scan, phase_from_temperature, phase_grid, FitPoint,
    FringeFit, FringePoint, DEFAULT_DTHETA_DT, FIT_CHI2_LIMIT,
};
pub use histogram::{
    count_coincidences, cross_correlate, cross_correlate_chunked, Correlator, Histogram,
};
pub use stats::{
    accidental_floor, coincidence_stats, peak_fwhm, peak_fwhm_above_floor, windowed_car,
    CoincidenceStats, FLOOR_GUARD_PS,
};
pub use visibility::{
    visibility_from_counts, visibility_to_s, z_visibility, SParameter, Visibility,
    MIN_COINCIDENCES, S_PER_VISIBILITY,
};
