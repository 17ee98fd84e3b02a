use crate::error::{Error, Result};
use std::time::Instant;

/// Size guards and the cooperative deadline threaded through every
/// potentially expensive enumeration.
///
/// Downstream enumerations are polynomial in the ring order raised to the
/// module rank, so both guards default to small desk-scale values and are
/// only meant to be raised deliberately.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum number of elements a constructed ring may have.
    pub max_ring_order: u64,
    /// Maximum number of elements a module (and the free cover of a
    /// user-constructed module) may have.
    pub max_module_order: u64,
    /// Cooperative deadline; long loops poll it and abort with
    /// [`Error::Timeout`].
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_ring_order: 256,
            max_module_order: 4096,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    /// Polls the deadline. Cheap enough to call inside inner loops.
    pub fn check_deadline(&self, stage: &str) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Error::Timeout {
                    stage: stage.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn check_ring_order(&self, order: u64) -> Result<()> {
        if order > self.max_ring_order {
            return Err(Error::GuardExceeded {
                what: "ring order".into(),
                actual: order,
                limit: self.max_ring_order,
            });
        }
        Ok(())
    }

    pub fn check_module_order(&self, what: &str, order: u64) -> Result<()> {
        if order > self.max_module_order {
            return Err(Error::GuardExceeded {
                what: what.into(),
                actual: order,
                limit: self.max_module_order,
            });
        }
        Ok(())
    }
}
