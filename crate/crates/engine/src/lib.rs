//! Composition layer: the quantum worker and its lock-free mailbox, the live
//! WebSocket protocol, and the `qsim` command line.

pub mod cli;
pub mod live;
pub mod mailbox;
pub mod server;
pub mod session;
pub mod worker;

pub use live::LiveBytes;
pub use mailbox::{Mailbox, ParamCell, Params, Reading};
pub use server::{serve_blocking, Server};
pub use session::{ClientFrame, ServerFrame, Session, SessionConfig};
pub use worker::{Worker, WorkerConfig};
