use thiserror::Error;

use crate::model::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed cycle: {0}")]
    MalformedCycle(String),
    #[error("overfull: pair ({left},{right}) needs {needed} > {lambda}")]
    Overfull {
        left: Vertex,
        right: Vertex,
        needed: u32,
        lambda: u32,
    },
    #[error("leave is not even: {0} has odd degree {1}")]
    NotEven(Vertex, u32),
    #[error("invalid twin pair ({0}, {1})")]
    InvalidTwin(Vertex, Vertex),
    #[error("no excess at origin {origin} for ({alpha}, {beta})")]
    NoExcess {
        alpha: Vertex,
        beta: Vertex,
        origin: Vertex,
    },
    #[error("infeasible switch: {0}")]
    InfeasibleSwitch(String),
    #[error("lemma precondition: {0}")]
    LemmaPrecondition(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("base unavailable: {0}")]
    BaseUnavailable(String),
    #[error("plan infeasible: {0}")]
    PlanInfeasible(String),
    #[error("not covered: {0}")]
    NotCovered(String),
    #[error("constructive gap: {0}")]
    ConstructiveGap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
