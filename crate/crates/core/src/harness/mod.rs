//! Refinement studies: run the solvers over a sequence of spacings, compare
//! the profiles in the sup norm and write tables and CSV fields.
//!
//! Row `k` of a sweep writes into `<directory>/rowKK/`; `table.csv` and
//! `runs.csv` go to the directory itself.

mod config;
mod examples;
mod experiment;
mod export;
mod table;

pub use config::{parse_h_list, ExperimentConfig, GridSpec, OutputSpec, RowGrid};
pub use examples::{builtin_examples, find_example, BuiltinExample};
pub use experiment::{row_dir, run_experiment, ExperimentReport, FdSummary, Mode, RowReport};
pub use export::{write_profile_1d, write_profile_2d, write_string, SnapshotSeries};
pub use table::{fmt_value, observed_order, ErrorRow, ErrorTable, Order, COLUMNS_1D, COLUMNS_2D};
