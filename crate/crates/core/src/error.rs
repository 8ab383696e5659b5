use thiserror::Error;

use crate::lottie::ColorAddress;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid hex color `{0}`, expected #rrggbb")]
pub struct ColorParseError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("unsupported document: {0}")]
    UnsupportedDocument(String),
    #[error("invalid document structure at {path}: {message}")]
    Structure { path: String, message: String },
    #[error("no paint at {0}")]
    AddressNotFound(ColorAddress),
    #[error("color {0} does not occur in the document")]
    UnknownColor(String),
    #[error("color group is empty")]
    EmptyGroup,
    #[error("an RGB value cannot be assigned to a group of {0} colors")]
    RgbGroupEdit(usize),
    #[error("frame {frame} is outside the layer interval [{start}, {end})")]
    FrameOutOfRange { frame: f64, start: f64, end: f64 },
    #[error("frame {frame} is outside the document interval [{start}, {end})")]
    OutOfBounds { frame: f64, start: f64, end: f64 },
    #[error("document has no colored content")]
    EmptyDocument,
    #[error("document has zero total color weight")]
    ZeroWeightDocument,
    #[error("edit log is empty")]
    EmptyLog,
    #[error("nothing to redo")]
    NothingToRedo,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Color(#[from] ColorParseError),
}

impl Error {
    pub(crate) fn structure(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Structure { path: path.into(), message: message.into() }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedJson(_) => "MalformedJson",
            Error::UnsupportedDocument(_) => "UnsupportedDocument",
            Error::Structure { .. } => "StructureError",
            Error::AddressNotFound(_) => "AddressNotFound",
            Error::UnknownColor(_) => "UnknownColor",
            Error::EmptyGroup => "EmptyGroup",
            Error::RgbGroupEdit(_) => "RgbGroupEdit",
            Error::FrameOutOfRange { .. } => "FrameOutOfRange",
            Error::OutOfBounds { .. } => "OutOfBounds",
            Error::EmptyDocument => "EmptyDocument",
            Error::ZeroWeightDocument => "ZeroWeightDocument",
            Error::EmptyLog => "EmptyLog",
            Error::NothingToRedo => "NothingToRedo",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Color(_) => "InvalidColor",
        }
    }

    /// Errors about the document's content rather than its syntax or IO.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::AddressNotFound(_)
                | Error::UnknownColor(_)
                | Error::EmptyGroup
                | Error::RgbGroupEdit(_)
                | Error::FrameOutOfRange { .. }
                | Error::OutOfBounds { .. }
                | Error::EmptyDocument
                | Error::ZeroWeightDocument
                | Error::EmptyLog
                | Error::NothingToRedo
        )
    }
}
