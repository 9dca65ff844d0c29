use thiserror::Error;

#[derive(Debug, Error)]
pub enum TurbulenceError {
    #[error("altitude must be nonnegative, got {0} m")]
    NegativeAltitude(f64),
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("Rytov budget {budget} produces a segment narrower than the quadrature resolution ({width} m at h = {altitude} m)")]
    BudgetUnderflow {
        budget: f64,
        width: f64,
        altitude: f64,
    },
    #[error("segment bounds must satisfy h_lo < h_hi, got [{0}, {1}]")]
    EmptySegment(f64, f64),
}
