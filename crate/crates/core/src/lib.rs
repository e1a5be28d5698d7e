pub mod backforth;
pub mod cli;
pub mod ordinal;
pub mod pgroup;
pub mod profile;
pub mod scott;
