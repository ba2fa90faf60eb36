//! Cooperative cancellation for solver runs.
//!
//! Solvers poll a [`Ctl`] between fixpoint drains; when the deadline has
//! passed they unwind with [`Aborted`]. This keeps long benchmark runs
//! interruptible without killing threads mid-mutation.

use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("run aborted: deadline exceeded")]
pub struct Aborted;

#[derive(Debug, Clone, Copy, Default)]
pub struct Ctl {
    deadline: Option<Instant>,
}

impl Ctl {
    /// Never aborts.
    pub fn unbounded() -> Ctl {
        Ctl { deadline: None }
    }

    pub fn with_timeout(timeout: Duration) -> Ctl {
        Ctl { deadline: Some(Instant::now() + timeout) }
    }

    pub fn with_deadline(deadline: Instant) -> Ctl {
        Ctl { deadline: Some(deadline) }
    }

    pub fn check(&self) -> Result<(), Aborted> {
        match self.deadline {
            Some(deadline) if Instant::now() >= deadline => Err(Aborted),
            _ => Ok(()),
        }
    }
}
