use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("torsion in components, resolve first: {0}")]
    Torsion(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Linear(#[from] zlin::ZlinError),
}
