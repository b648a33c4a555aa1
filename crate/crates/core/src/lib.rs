// SPDX-License-Identifier: Apache-2.0

//! Structural differencing of syntax trees and path-based edit operations.
//!
//! The crate is organised bottom-up:
//!
//! * [`ast`] – the tree model, paths, interchange format and demo language.
//! * [`diff`] – node mappings between two trees and edit scripts.
//! * [`paths`] – edits expressed as paths in an augmented tree.
//! * [`dataset`] – example construction, filtering, splits and metrics.

pub mod ast;
pub mod dataset;
pub mod diff;
pub mod gen;
pub mod paths;
