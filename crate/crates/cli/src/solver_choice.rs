//! Solver names accepted on the command line.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, Error};
use pgfatal_core::reference::Rho;
use pgfatal_core::solvers::PartialSolverKind;

/// `psol | psolB | psolQ | lift-<partial> | zielonka | complete:<rho>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Partial(Rho),
    Zielonka,
    Complete(Rho),
}

fn parse_rho(name: &str) -> Option<Rho> {
    let (lifted, base) = match name.strip_prefix("lift-") {
        Some(rest) => (true, rest),
        None => (false, name),
    };
    let kind = match base {
        "psol" => PartialSolverKind::Psol,
        "psolB" => PartialSolverKind::PsolB,
        "psolQ" => PartialSolverKind::PsolQ,
        _ => return None,
    };
    Some(if lifted { Rho::Lifted(kind) } else { Rho::Plain(kind) })
}

impl FromStr for SolverChoice {
    type Err = Error;

    fn from_str(name: &str) -> Result<SolverChoice, Error> {
        if name == "zielonka" {
            return Ok(SolverChoice::Zielonka);
        }
        if let Some(rest) = name.strip_prefix("complete:") {
            let rho = parse_rho(rest)
                .ok_or_else(|| anyhow!("unknown partial solver '{rest}' in '{name}'"))?;
            return Ok(SolverChoice::Complete(rho));
        }
        parse_rho(name)
            .map(SolverChoice::Partial)
            .ok_or_else(|| anyhow!(
                "unknown solver '{name}' (expected psol, psolB, psolQ, lift-<partial>, \
                 zielonka or complete:<partial>)"
            ))
    }
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverChoice::Partial(rho) => write!(f, "{}", rho.name()),
            SolverChoice::Zielonka => write!(f, "zielonka"),
            SolverChoice::Complete(rho) => write!(f, "complete:{}", rho.name()),
        }
    }
}

impl SolverChoice {
    /// The lift preconditions are proven for psolB only; warn elsewhere.
    pub fn uncertified_lift(&self) -> Option<PartialSolverKind> {
        match self {
            SolverChoice::Partial(Rho::Lifted(kind))
            | SolverChoice::Complete(Rho::Lifted(kind))
                if !kind.lift_certified() =>
            {
                Some(*kind)
            }
            _ => None,
        }
    }
}
