use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trace weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("trace weights are not normalized: sum w_k n_k = {total}")]
    NormalizationViolation { total: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands belong to different algebras")]
    OwnerMismatch,
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("span is not a *-algebra (residual {residual:.3e})")]
    NotStarClosed { residual: f64 },
    #[error("numerical rank decision undetermined: relative value {value:.3e} inside [{lo:.0e}, {hi:.0e}]")]
    RankDeficiencyUndetermined { value: f64, lo: f64, hi: f64 },
    #[error("element is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("not a subalgebra of the ambient algebra: {0}")]
    NotSubalgebra(String),
    #[error("subalgebras live in different ambient algebras")]
    AmbientMismatch,
    #[error("automorphism law violated: {law} (residual {residual:.3e})")]
    InvariantViolation { law: &'static str, residual: f64 },
    #[error("normalization spectrum straddles the tolerance band (eigenvalue {value:.3e})")]
    DegenerateNormalization { value: f64 },
    #[error("index optimizer did not converge: bracket [{c_lo:.6e}, {c_hi:.6e}]")]
    OptimizerNonConvergence { c_lo: f64, c_hi: f64 },
    #[error("vector outside the carrier of E(p) (defect {defect:.3e})")]
    CarrierViolation { defect: f64 },
    #[error("operator is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("automorphisms {first} and {second} coincide")]
    DuplicateAutomorphism { first: usize, second: usize },
    #[error("configuration error: {0}")]
    ConfigParse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of numerical decisions rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficiencyUndetermined { .. }
                | Error::DegenerateNormalization { .. }
                | Error::OptimizerNonConvergence { .. }
                | Error::CarrierViolation { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
