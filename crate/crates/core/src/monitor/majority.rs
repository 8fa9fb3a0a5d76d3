//! Boyer–Moore majority vote over redundant samples.

use thiserror::Error;

use crate::trace::Value;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Vote {
    /// A value occurring in more than half of the inputs.
    Majority(Value),
    NoMajority,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MajorityError {
    #[error("majority vote over an empty input")]
    EmptyInput,
    #[error("majority vote over mixed boolean and numeric values")]
    HeterogeneousTypes,
}

/// Candidate pass followed by a verification count.
pub fn majority(values: &[Value]) -> Result<Vote, MajorityError> {
    let first = values.first().ok_or(MajorityError::EmptyInput)?;
    if values.iter().any(|v| v.kind() != first.kind()) {
        return Err(MajorityError::HeterogeneousTypes);
    }

    let mut candidate = *first;
    let mut weight = 0usize;
    for v in values {
        if weight == 0 {
            candidate = *v;
            weight = 1;
        } else if *v == candidate {
            weight += 1;
        } else {
            weight -= 1;
        }
    }

    let occurrences = values.iter().filter(|v| **v == candidate).count();
    Ok(if occurrences * 2 > values.len() {
        Vote::Majority(candidate)
    } else {
        Vote::NoMajority
    })
}
