//! Exact integer algorithms for the Picard group of Lubin–Tate theory at
//! height two with its `C4` action.
//!
//! Everything here is `no_std`: matrices over `i128`, lattices, truncated
//! power series, group cohomology of cyclic groups, and the spectral
//! sequence bookkeeping built on top of them.

#![no_std]

extern crate alloc;

pub mod abgroup;
pub mod classes;
pub mod coeff;
pub mod cohomology;
pub mod hfpss;
pub mod lattice_quot;
pub mod mackey;
pub mod modules;
pub mod mono;
pub mod picss;
pub mod rep_ring;
pub mod units;
pub mod zmat;

pub use abgroup::{AbGroup, Subquotient};
pub use zmat::{Int, Lattice, Mat};

/// Errors surfaced by the public operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    GroupMismatch,
    NotSubgroup,
    NotUnit,
    UnknownModule(alloc::string::String),
    OddDegree,
    UnknownPage(u32),
    Fixture(alloc::string::String),
    Inconsistent(alloc::string::String),
    Parse(alloc::string::String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::GroupMismatch => write!(f, "group mismatch"),
            Error::NotSubgroup => write!(f, "not a subgroup"),
            Error::NotUnit => write!(f, "element is not a unit"),
            Error::UnknownModule(n) => write!(f, "unknown module `{n}`"),
            Error::OddDegree => write!(f, "odd degree has no module"),
            Error::UnknownPage(r) => write!(f, "no differential table for page {r}"),
            Error::Fixture(m) => write!(f, "fixture error: {m}"),
            Error::Inconsistent(m) => write!(f, "inconsistent data: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
