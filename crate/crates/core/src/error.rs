use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by mesh I/O, processing, spherization, URDF handling and
/// benchmarking.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("unsupported mesh format: {0}")]
    UnsupportedFormat(PathBuf),
    #[error("malformed mesh in {path}: {reason}")]
    MalformedMesh { path: PathBuf, reason: String },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("mesh has zero surface area")]
    DegenerateMesh,
    #[error("mesh is not watertight ({0})")]
    NotWatertight(&'static str),
    #[error("shrink-ball iteration did not converge")]
    NoConvergence,
    #[error("reconstruction produced no surface")]
    EmptyResult,
    #[error("spherization failed: {0}")]
    SpherizationFailed(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("XML error in {path}: {reason}")]
    Xml { path: PathBuf, reason: String },
    #[error("invalid URDF: {0}")]
    InvalidUrdf(String),
    #[error("joint graph is not a tree: {0}")]
    KinematicLoop(String),
    #[error("joint references missing link: {0}")]
    MissingLink(String),
    #[error("unsupported joint type `{kind}` on joint `{joint}`")]
    UnsupportedJoint { joint: String, kind: String },
    #[error("could not resolve mesh paths:\n  {}", .0.join("\n  "))]
    MeshNotFound(Vec<String>),
    #[error("unknown link: {0}")]
    UnknownLink(String),
    #[error("unknown joint: {0}")]
    UnknownJoint(String),
    #[error("joint `{joint}` value {value} outside limits [{lower}, {upper}]")]
    LimitViolation {
        joint: String,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("models do not share kinematic structure: {0}")]
    StructureMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
