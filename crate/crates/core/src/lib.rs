// SPDX-License-Identifier: Apache-2.0

//! Open-system models of light-harvesting heat engines and the
//! thermodynamic bookkeeping needed to test them against the second law.

pub mod error;
pub mod qdyn;
pub mod models;
pub mod thermo;
pub mod fmo;
pub mod sweep;

pub mod io;

pub use error::{Error, Result};
