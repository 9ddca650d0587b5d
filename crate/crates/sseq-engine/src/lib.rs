//! Transfinite spectral sequences indexed by ordinals below $\omega^\omega$
//! (and one step beyond), executed from a ledger of differentials.
//!
//! A spectral sequence is given by a [`Kind`], which fixes its cells, their
//! ordinal indices and the grading, together with a ledger of [`Record`]s.
//! [`run`] validates the ledger against the E¹ page populated from a
//! [`stems_db::StemsDb`] and executes it page by page.

pub mod engine;
pub mod gbe;
pub mod kind;
pub mod linalg;
pub mod propagate;
pub mod record;

pub use engine::{
    expand_endpoint, populate, run, run_with, validate, Cell2, Computed, Diagnostic, Mode, Pair, Pos, PosInfo,
    RunError, SseqSpec, State, DEFAULT_TAIL, E1, TAIL_ZONE,
};
pub use gbe::{gbe_derive, gbe_search, gbt_classify, hopf_query, GbeError, GbtCase, HopfReport};
pub use kind::Kind;
pub use propagate::{pushforward_e, pushforward_p, truncate};
pub use record::{format_ledger, parse_ledger, parse_record, Endpoint, LedgerError, Record, Tag};
