//! Grey-system forecasting with fractional accumulation and memory kernels.
//!
//! The crate is organized bottom-up:
//!
//! * [`fracops`]: fractional accumulation, its inverse and background values.
//! * [`models`]: the exponential-kernel fractional model and the GM(1,1),
//!   DGM(1,1) and FGM(1,1) benchmarks.
//! * [`metrics`]: MAPE / MSE / MAE and Lewis grading.
//! * [`optimize`]: PSO, GWO, WOA and ALO over a bounded box.
//! * [`experiments`]: built-in case studies, model comparison and the
//!   sensitivity grid.
//! * [`cli`]: the `greyfc` command line.
//!
//! ```
//! use greyfc::experiments::builtin_dataset;
//! use greyfc::models::{evaluate, Gm11};
//!
//! let ds = builtin_dataset("case1_henan").unwrap();
//! let report = evaluate(&Gm11, &ds.train(), 4, ds.holdout()).unwrap();
//! assert!((report.metrics_in.mape - 1.9183).abs() < 0.02);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod fracops;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod optimize;

pub use error::{GreyError, Result};
pub use fracops::{background, fago, gen_binomial, ifago, AccumulatedSeries, Series};
