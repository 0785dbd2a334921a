//! Group catalog, claim checks over sampled instances, batch reports.

pub mod catalog;
pub mod checks;
pub mod error;
pub mod presentation;
pub mod suite;

pub use catalog::{Catalog, CatalogEntry, Filter};
pub use checks::{registry, run_check, CheckVerdict, Instance, Status};
pub use error::{Error, Result};
pub use suite::{run_suite, Report, SuiteConfig};
