pub mod cli;
pub mod error;
pub mod feature_engineering;
pub mod frame;
pub mod model;
pub mod rng;
pub mod stats;
pub mod structdata;
pub mod synthetic;
pub mod timeseries;
pub mod visualization;

pub use error::{Error, Result};
pub use frame::csv::{parse_csv, write_csv, CsvOptions};
pub use frame::{parse_timestamp, Cell, Column, ColumnData, DType, Frame, SliceMode, Timestamp};
