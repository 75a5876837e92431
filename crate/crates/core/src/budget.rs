//! Cooperative wall-clock budgets.
//!
//! Long loops call [`check`]; when the deadline installed by [`with_budget`]
//! on the current thread has passed, they bail out with [`Error::Budget`].

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

thread_local! {
    static DEADLINE: Cell<Option<Instant>> = const { Cell::new(None) };
}

/// Runs `f` with a deadline `limit` from now. Nested budgets keep the
/// earlier deadline.
pub fn with_budget<T>(limit: Option<Duration>, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let Some(limit) = limit else { return f() };
    let previous = DEADLINE.with(|d| d.get());
    let mine = Instant::now() + limit;
    let effective = match previous {
        Some(p) if p < mine => p,
        _ => mine,
    };
    DEADLINE.with(|d| d.set(Some(effective)));
    let out = f();
    DEADLINE.with(|d| d.set(previous));
    out
}

pub fn check() -> Result<()> {
    match DEADLINE.with(|d| d.get()) {
        Some(t) if Instant::now() >= t => Err(Error::Budget),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expired_budget_reports() {
        let r = with_budget(Some(Duration::ZERO), || {
            std::thread::sleep(Duration::from_millis(1));
            check()
        });
        assert_eq!(r, Err(Error::Budget));
        assert!(check().is_ok());
    }
}
