use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyzerError {
    #[error("no tags on channel {0}")]
    EmptyChannel(u16),

    #[error("histogram range {lo}..{hi} ps is not a positive multiple of bin width {bin} ps")]
    InvalidBinning { lo: i64, hi: i64, bin: i64 },

    #[error("correlation channels must differ, both are {0}")]
    SameChannel(u16),

    #[error("no coincidence peak: max bin {max} below 5x accidental floor {floor:.3}")]
    NoPeak { max: u64, floor: f64 },

    #[error("insufficient coincidences: {total} < {required}")]
    InsufficientCounts { total: u64, required: u64 },

    #[error("sinusoid fit needs >= 5 points, got {0}")]
    TooFewPoints(usize),

    #[error("fit abscissa spans {span:.3} rad at the hinted frequency, need >= pi")]
    SpanTooShort { span: f64 },

    #[error("fit diverged: reduced chi-square {chi2:.2} > {limit}")]
    FitDiverged { chi2: f64, limit: f64 },

    #[error("duration must be > 0, got {0}")]
    ZeroDuration(f64),

    #[error(transparent)]
    Sim(#[from] event_sim::SimError),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
