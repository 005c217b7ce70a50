//! Configuration, record persistence and the invariant suite behind the
//! `dwief` command-line tool.

pub mod config;
pub mod record;
pub mod verify;
