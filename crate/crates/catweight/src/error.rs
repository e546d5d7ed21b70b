//! Crate-wide error type.

use thiserror::Error;

use crate::cocycle::CocycleDefect;
use crate::fincat::CategoryDefect;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid category ({} defect(s)): {}", .0.len(), fmt_defects(.0))]
    InvalidCategory(Vec<CategoryDefect>),

    #[error("invalid 2-cocycle ({} defect(s)): {}", .0.len(), fmt_cocycle_defects(.0))]
    InvalidCocycle(Vec<CocycleDefect>),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no valid modulus for F_{{{p}^{m}}}: {reason}")]
    BadModulus { p: u64, m: u32, reason: String },

    #[error("field F_{{{p}^{m}}} too large for this implementation")]
    FieldTooLarge { p: u64, m: u32 },

    #[error("randomised search budget exceeded after {attempts} attempts")]
    BudgetExceeded { attempts: usize },

    #[error("automorphism enumeration exceeded {bound} backtracking nodes")]
    AutCapExceeded { bound: u64 },

    #[error("no splitting field found with extension degree <= {m_max}: {detail}")]
    SplitCapExceeded { m_max: u32, detail: String },

    #[error("structure constants are not F_p-rational")]
    StructureConstantsNotRational,

    #[error("twisted multiplication is not associative: {0}")]
    AssociativityBroken(String),

    #[error("subgroup is not normal in the given overgroup")]
    NotNormal,

    #[error("simple module count {got} does not match p-regular class count {expected}")]
    CountMismatch { expected: usize, got: usize },

    #[error("element is not central: {0}")]
    NotCentral(String),

    #[error("operation requires an EI-category")]
    NotEI,

    #[error("restriction e*b is not central in kG_e (contradicts centrality proposition)")]
    NotCentralInGe,

    #[error("no block associated to the given datum (fatal correctness assertion)")]
    AssociatedBlockNone,

    #[error("multiple blocks associated to the given datum (fatal correctness assertion)")]
    AssociatedBlockMultiple,

    #[error("direct and indirect simple-module parametrisations disagree: {0}")]
    ParametrizationMismatch(String),

    #[error("automorphism group unavailable (enumeration capped); equivariance check skipped")]
    GroupUnavailable,

    #[error("no equivariant bijection at group level for idempotent {idem}: {detail}")]
    GroupLevelObstruction { idem: String, detail: String },

    #[error("normalisation conditions (i) and (ii) are incompatible: {0}")]
    ConditionsIncompatible(String),

    #[error("representative bijection is not equivariant: {0}")]
    RepresentativeNotEquivariant(String),

    #[error("transported weight not found in catalog (representative-system defect): {0}")]
    CatalogMissingImage(String),

    #[error("composition of orbit representatives is ill-defined: {0}")]
    IllDefinedComposition(String),

    #[error("pi reduction mismatch: {0}")]
    PiMismatch(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_defects(defects: &[CategoryDefect]) -> String {
    defects
        .iter()
        .take(3)
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn fmt_cocycle_defects(defects: &[CocycleDefect]) -> String {
    defects
        .iter()
        .take(3)
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
