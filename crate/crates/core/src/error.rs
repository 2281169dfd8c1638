use thiserror::Error;

/// Failure classes, mirrored by the CLI exit codes and the C status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input data.
    Input,
    /// A mathematical precondition of the requested operation does not hold.
    Precondition,
    /// The number-field pipeline could not complete.
    Pipeline,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Input => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Pipeline => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds the supported maximum of 64")]
    DimensionTooLarge(usize),
    #[error("grade mismatch: expected {expected}, got {got}")]
    GradeMismatch { expected: usize, got: usize },
    #[error("brackets: antisymmetry violated at ({0},{1})")]
    AntisymmetryViolation(usize, usize),
    #[error("brackets: Jacobi identity violated at ({i},{j},{k}), residual {residual}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: String,
    },
    #[error("malformed block specification: {0}")]
    MalformedBlock(String),
    #[error("split inconsistent with brackets: {0}")]
    InconsistentSplit(String),
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("theta is not closed")]
    ThetaNotClosed,
    #[error("omega is not d_theta-closed")]
    OmegaNotDThetaClosed,
    #[error("character '{0}' is not realizable from the block weights")]
    CharacterNotRealizable(String),
    #[error("character '{0}' does not vanish on the derived algebra")]
    CharacterNotAbelian(String),
    #[error("odd dimension {0}: no nondegenerate 2-forms")]
    OddDimension(usize),
    #[error("2-form is degenerate")]
    Degenerate,
    #[error("no Lee form: the 2-form is not locally conformally symplectic")]
    NoLeeForm,
    #[error("Lee form is not closed")]
    LeeFormNotClosed,
    #[error("the pair (omega, theta) is not LCS")]
    NotLcs,
    #[error("endomorphism does not square to minus the identity")]
    JNotAlmostComplex,
    #[error("2-form is not J-invariant")]
    NotJInvariant,
    #[error("omega(-, J-) is not positive definite")]
    NotPositive,
    #[error("Lie algebra is not unimodular")]
    NotUnimodular,
    #[error("polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("signature mismatch: expected {expected_real} real roots, found {found_real}")]
    SignatureMismatch { expected_real: usize, found_real: usize },
    #[error("zero embedding value")]
    ZeroEmbedding,
    #[error("insufficient units: need {needed} independent totally positive units, found {found}")]
    InsufficientUnits { needed: usize, found: usize },
    #[error("projection of the selected log-vectors is singular")]
    SingularProjection,
    #[error("obstruction checks disagree: {0}")]
    InconsistentCertificate(String),
    #[error("{0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            DimensionMismatch { .. }
            | DimensionTooLarge(_)
            | GradeMismatch { .. }
            | AntisymmetryViolation(..)
            | JacobiViolation { .. }
            | MalformedBlock(_)
            | InconsistentSplit(_)
            | NotSymmetric
            | CharacterNotAbelian(_)
            | InvalidPolynomial(_)
            | Parse(_)
            | Io(_) => ErrorClass::Input,
            NotPositiveDefinite
            | Singular
            | ThetaNotClosed
            | OmegaNotDThetaClosed
            | CharacterNotRealizable(_)
            | OddDimension(_)
            | Degenerate
            | NoLeeForm
            | LeeFormNotClosed
            | NotLcs
            | JNotAlmostComplex
            | NotJInvariant
            | NotPositive
            | NotUnimodular
            | Reducible(_)
            | SignatureMismatch { .. }
            | ZeroEmbedding => ErrorClass::Precondition,
            InsufficientUnits { .. } | SingularProjection | InconsistentCertificate(_) => {
                ErrorClass::Pipeline
            }
        }
    }

    /// Short machine-readable tag used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            DimensionMismatch { .. } => "DimensionMismatch",
            DimensionTooLarge(_) => "DimensionTooLarge",
            GradeMismatch { .. } => "GradeMismatch",
            AntisymmetryViolation(..) => "AntisymmetryViolation",
            JacobiViolation { .. } => "JacobiViolation",
            MalformedBlock(_) => "MalformedBlock",
            InconsistentSplit(_) => "InconsistentSplit",
            NotPositiveDefinite => "NotPositiveDefinite",
            NotSymmetric => "NotSymmetric",
            Singular => "Singular",
            ThetaNotClosed => "ThetaNotClosed",
            OmegaNotDThetaClosed => "OmegaNotDThetaClosed",
            CharacterNotRealizable(_) => "CharacterNotRealizable",
            CharacterNotAbelian(_) => "CharacterNotAbelian",
            OddDimension(_) => "OddDimension",
            Degenerate => "Degenerate",
            NoLeeForm => "NoLeeForm",
            LeeFormNotClosed => "LeeFormNotClosed",
            NotLcs => "NotLcs",
            JNotAlmostComplex => "JNotAlmostComplex",
            NotJInvariant => "NotJInvariant",
            NotPositive => "NotPositive",
            NotUnimodular => "NotUnimodular",
            InvalidPolynomial(_) => "InvalidPolynomial",
            Reducible(_) => "Reducible",
            SignatureMismatch { .. } => "SignatureMismatch",
            ZeroEmbedding => "ZeroEmbedding",
            InsufficientUnits { .. } => "InsufficientUnits",
            SingularProjection => "SingularProjection",
            InconsistentCertificate(_) => "InconsistentCertificate",
            Parse(_) => "Parse",
            Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
