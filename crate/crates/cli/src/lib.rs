//! Library side of the `ascent` command: the verification suite and report
//! plumbing.

pub mod checks;
pub mod report;
