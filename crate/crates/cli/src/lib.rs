//! Session files, command dispatch and reports for the `coisored` tool.

pub mod commands;
pub mod emit;
pub mod report;
pub mod session;

pub use commands::{run_command, Command, Options, RouteArg, BUDGET_ENV};
pub use report::{Entry, Outcome, Report};
pub use session::{parse_session, parse_session_str, Entity, Kind, Session, SessionError};
