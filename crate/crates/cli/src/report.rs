//! The JSON envelope shared by every command, and offline re-checking.

use std::process::ExitCode;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use mukai_core::claims::Claim;
use mukai_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Undecided,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Failed | Status::Undecided => ExitCode::from(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInfo {
    pub h2: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub surface: SurfaceInfo,
    pub command: String,
    pub params: Map<String, Value>,
    pub result: Value,
    pub certificate: Vec<Claim>,
    pub status: Status,
}

impl Report {
    pub fn new(h2: String, command: &str, params: Map<String, Value>, result: Value, certificate: Vec<Claim>) -> Self {
        let status = if certificate.iter().all(|c| c.holds) { Status::Ok } else { Status::Failed };
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            surface: SurfaceInfo { h2 },
            command: command.to_string(),
            params,
            result,
            certificate,
            status,
        }
    }

    /// A report for a run that stopped with `err`.
    pub fn aborted(h2: String, command: &str, params: Map<String, Value>, err: &Error, status: Status) -> Self {
        let mut r = Report::new(h2, command, params, serde_json::json!({ "error": err.to_string() }), Vec::new());
        r.status = status;
        r
    }
}

/// How a library error surfaces on the command line.
pub enum Disposition {
    Usage,
    Status(Status),
}

pub fn classify(err: &Error) -> Disposition {
    match err {
        Error::Undecided { .. } => Disposition::Status(Status::Undecided),
        Error::CertificateFailed(_)
        | Error::WallMismatch(_)
        | Error::NoWallFound
        | Error::ConflictingWitnesses(_) => Disposition::Status(Status::Failed),
        _ => Disposition::Usage,
    }
}

/// Result of re-deciding every claim of a stored report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub command: String,
    pub claims: usize,
    pub mismatches: Vec<String>,
    pub recorded_status: Status,
    pub status: Status,
    pub reproduced: bool,
}

impl CheckSummary {
    pub fn exit_code(&self) -> ExitCode {
        if self.reproduced && self.status == Status::Ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

pub fn check_report(report: &Report, max_bits: u32) -> CheckSummary {
    let mut mismatches = Vec::new();
    let mut all_hold = true;
    let mut undecided = false;
    for claim in &report.certificate {
        match claim.recheck(max_bits) {
            Ok(holds) => {
                all_hold &= holds;
                if holds != claim.holds {
                    mismatches.push(claim.label.clone());
                }
            }
            Err(_) => {
                undecided = true;
                mismatches.push(claim.label.clone());
            }
        }
    }
    let status = if undecided {
        Status::Undecided
    } else if all_hold {
        Status::Ok
    } else {
        Status::Failed
    };
    CheckSummary {
        command: report.command.clone(),
        claims: report.certificate.len(),
        reproduced: mismatches.is_empty() && status == report.status,
        mismatches,
        recorded_status: report.status,
        status,
    }
}
