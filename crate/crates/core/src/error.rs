use crate::rigidity::CertificationReport;
use crate::sparsity::Family;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge {index} endpoints out of range for {vertices} vertices")]
    InvalidEdge { index: usize, vertices: usize },

    #[error("graphs with more than 64 edges are outside subset-enumeration range (got {count})")]
    TooManyEdges { count: usize },

    #[error("edge set is not a cycle")]
    NotACycle,

    #[error("edge set is not a spanning tree")]
    NotASpanningTree,

    #[error("direction on edge {edge} is the zero vector")]
    ZeroDirection { edge: usize },

    #[error("edge {edge} has coincident lifted endpoints at this placement")]
    CollapsedEdge { edge: usize },

    #[error("input is not a member of the {family} family")]
    NotMember { family: Family },

    #[error("input is not a Ross-circuit")]
    NotRossCircuit,

    #[error("no tree-and-map decomposition exists")]
    NoDecomposition,

    #[error("construction did not verify after {attempts} attempts")]
    RetriesExhausted { attempts: usize },

    #[error("generation gave up after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("combinatorial and numeric verdicts disagree")]
    InternalDisagreement { report: Box<CertificationReport> },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
