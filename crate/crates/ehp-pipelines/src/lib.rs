//! Assembly of the transfinite Atiyah–Hirzebruch, Goodwillie and EHP
//! spectral sequences from shipped ledgers, with table emission and golden
//! comparison.

pub mod audit;
pub mod build;
pub mod diff;
pub mod emit;
pub mod golden;
pub mod ledger;
pub mod nishida;
pub mod stream;
