//! Reports behind the `g2d` command line: the `gamma_2(T_n)`
//! figure data, ellipsoid dumps, Tusnády grid, subcube and arithmetic
//! progression tables, and per-matrix bounds audits.

pub mod ap;
pub mod audit;
pub mod budget;
pub mod ellipsoid;
pub mod error;
pub mod grids;
pub mod table;
pub mod tn;

pub use budget::Budget;
pub use error::{ReportError, Result};
pub use table::{ReportRow, Table};
