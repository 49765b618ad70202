use std::io;

use thiserror::Error;

use crate::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The topology is not connected; `unreachable` lists the nodes that
    /// could not be reached from the traversal root.
    #[error("topology is disconnected: {} node(s) unreachable from {root}, first {:?}", unreachable.len(), unreachable.first())]
    Disconnected {
        root: NodeId,
        unreachable: Vec<NodeId>,
    },

    #[error("no connected scenario after {attempts} attempts at radio range {radio_range}; try a larger radio range")]
    NoConnectedScenario { attempts: usize, radio_range: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
