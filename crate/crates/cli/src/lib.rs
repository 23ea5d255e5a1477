//! Front ends for the risk-odds engine: the `risk-odds` command line and its
//! HTTP serving mode share the query layer in [`api`].

pub mod api;
pub mod figures;
pub mod render;
pub mod server;
