//! Optional per-thread log of greedy steps, for debugging dumps.

use std::cell::RefCell;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    MaxPi,
    MaxSigma,
    MinPi,
    MinSigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub p: usize,
    pub q: usize,
    pub step_kind: StepKind,
}

thread_local! {
    static BUFFER: RefCell<Option<Vec<TraceEvent>>> = const { RefCell::new(None) };
}

/// Start recording on this thread, discarding anything recorded before.
pub fn enable() {
    BUFFER.with(|b| *b.borrow_mut() = Some(Vec::new()));
}

/// Stop recording and return what was collected.
pub fn take() -> Vec<TraceEvent> {
    BUFFER.with(|b| b.borrow_mut().take().unwrap_or_default())
}

pub fn is_enabled() -> bool {
    BUFFER.with(|b| b.borrow().is_some())
}

/// Record the pair reached after a step. Indices are in the orientation of
/// the caller, so steps taken on a role-swapped instance appear swapped.
pub(crate) fn record(p: usize, q: usize, step_kind: StepKind) {
    BUFFER.with(|b| {
        if let Some(buf) = b.borrow_mut().as_mut() {
            buf.push(TraceEvent { p, q, step_kind });
        }
    });
}
