use thiserror::Error;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },
    #[error("beamsplitter on modes ({a}, {b}) would truncate: populated total photon number {total} needs dimension {} but dims are ({da}, {db})", total + 1)]
    TruncationRefused {
        a: usize,
        b: usize,
        total: usize,
        da: usize,
        db: usize,
    },
    #[error("state spaces do not match: {0}")]
    SpaceMismatch(String),
    #[error("operator is not a valid state: {0}")]
    InvalidState(String),
    #[error("herald branch probability below 1e-300; the conditional state is numerically undefined")]
    ImprobableBranch,
    #[error("empty mode set for {0}")]
    EmptyModeSet(&'static str),
}
