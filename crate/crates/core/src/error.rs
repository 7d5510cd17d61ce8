use std::fmt;

/// Everything that can go wrong while building, solving or sampling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("map is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("edge {edge}: conductance {value} is not positive and finite")]
    NonPositiveConductance { edge: u64, value: f64 },
    #[error("Euler characteristic V - E + F = {0}, expected 2")]
    NotPlanar(i64),
    #[error("marked vertices must be distinct")]
    MarkedNotDistinct,
    #[error("unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("unknown edge {0}")]
    UnknownEdge(u64),
    #[error("embedding: {0}")]
    Embedding(String),
    #[error("linear solve stalled: relative residual {residual:e} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },
    #[error("maximum principle violated at vertex {vertex}: h = {value}")]
    MaximumPrinciple { vertex: u64, value: f64 },
    #[error("flow out of v0 ({out}) differs from flow into v1 ({into})")]
    FlowMismatch { out: f64, into: f64 },
    #[error("conjugate does not close on dual edge {edge}: defect {defect:e} vs {winding} * eta")]
    ClosureDefect {
        edge: u64,
        defect: f64,
        winding: i64,
    },
    #[error("segment union at vertex {0} is not a single arc")]
    NonContiguous(u64),
    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),
    #[error("level {0} is not vertexed")]
    LevelNotVertexed(f64),
    #[error("height sequence is not admissible at step {0}")]
    Inadmissible(usize),
    #[error("walk exceeded its step budget of {0}")]
    StepBudget(u64),
    #[error("no excursion accepted after {0} attempts (acceptance rate below 1/{0}); lower n or raise gamma")]
    ExcursionRejected(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Schema(SchemaErrors),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// All problems found while validating a document, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaErrors(pub Vec<String>);

impl fmt::Display for SchemaErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} schema error(s)", self.0.len())?;
        for e in &self.0 {
            write!(f, "\n  - {e}")?;
        }
        Ok(())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
