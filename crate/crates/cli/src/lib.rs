//! Scenario runner and report types for the `mil` tool.

pub mod recheck;
pub mod report;
pub mod scenarios;
