//! Bundled data.

use crate::cli::{read_series, SeriesMeta};
use crate::series::TimeSeries;

/// Monthly international airline passengers (thousands), Jan 1949 to Dec 1960.
pub const AIRLINE_CSV: &str = include_str!("../data/airline.csv");

pub fn airline() -> TimeSeries {
    read_series(AIRLINE_CSV.as_bytes(), SeriesMeta::default())
        .expect("bundled airline data is valid")
}
