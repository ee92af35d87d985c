//! Case-study datasets, the four-model comparison harness and the
//! initial-value / order sensitivity grid.

mod comparison;
mod datasets;
mod grid;

pub use comparison::{
    plot_rows, render_table, run_comparison, search_fgm, search_ufgm, Comparison, ModelRun, SearchPolicy, SearchSummary,
};
pub use datasets::{builtin_dataset, CaseDataset, BUILTIN_NAMES};
pub use grid::{grid_csv, grid_search_effects, GridRange, GridRecord, GridSpec};
