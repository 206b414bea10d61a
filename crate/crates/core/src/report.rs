use std::fmt;

use serde::{Deserialize, Serialize};

/// Which constraint a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    NegativeCapacity,
    NonFiniteCapacity,
    SelfLoop,
    UnknownNode,
    MalformedCouplingGroup,
    DegenerateDemand,
    NonPositiveDemand,
    NegativeValue,
    MalformedWalk,
    TwoWalk,
    ProcessingOffWalk,
    FullProcessing,
    EdgeCapacity,
    NodeCapacity,
    DemandCap,
    FlowConservation,
    ProcessingConservation,
    UnprocessedExceedsFlow,
    ObjectiveMismatch,
}

impl ViolationKind {
    pub fn describe(self) -> &'static str {
        match self {
            ViolationKind::NegativeCapacity => "negative capacity",
            ViolationKind::NonFiniteCapacity => "non-finite capacity",
            ViolationKind::SelfLoop => "self-loop",
            ViolationKind::UnknownNode => "unknown node",
            ViolationKind::MalformedCouplingGroup => "malformed coupling group",
            ViolationKind::DegenerateDemand => "degenerate demand",
            ViolationKind::NonPositiveDemand => "non-positive demand",
            ViolationKind::NegativeValue => "negative value",
            ViolationKind::MalformedWalk => "malformed walk",
            ViolationKind::TwoWalk => "vertex visited more than twice",
            ViolationKind::ProcessingOffWalk => "processing at a vertex not on the walk",
            ViolationKind::FullProcessing => "walk flow not fully processed",
            ViolationKind::EdgeCapacity => "edge capacity",
            ViolationKind::NodeCapacity => "node capacity",
            ViolationKind::DemandCap => "demand cap",
            ViolationKind::FlowConservation => "flow conservation",
            ViolationKind::ProcessingConservation => "processing conservation",
            ViolationKind::UnprocessedExceedsFlow => "unprocessed flow exceeds flow",
            ViolationKind::ObjectiveMismatch => "objective mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    /// How far past the bound the value is (0 for purely structural problems).
    pub magnitude: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: ViolationKind, location: impl Into<String>, magnitude: f64) {
        self.violations.push(Violation {
            kind,
            location: location.into(),
            magnitude,
        });
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn find(&self, kind: ViolationKind) -> Option<&Violation> {
        self.violations.iter().find(|v| v.kind == kind)
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.ok() {
            Ok(())
        } else {
            Err(crate::Error::InvalidInstance(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {} at {}", v.kind.describe(), v.location)?;
            if v.magnitude > 0.0 {
                write!(f, " (by {:.6})", v.magnitude)?;
            }
        }
        Ok(())
    }
}
