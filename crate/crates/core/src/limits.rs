use crate::error::{Error, Result};

/// Resource limits for the exponential algorithms.
///
/// Subset tables are materialized, so memory is the binding constraint;
/// limits fail loudly instead of degrading to a different answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of vertices whose full `2^n` table may be built.
    pub max_table_vertices: usize,
    /// Maximum number of pre-colored vertices whose colorings are enumerated.
    pub max_enumerated_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_vertices: 30,
            max_enumerated_vertices: 20,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `TRIMCOLOR_MAX_TABLE_VERTICES` and
    /// `TRIMCOLOR_MAX_ENUMERATED_VERTICES` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = env_usize("TRIMCOLOR_MAX_TABLE_VERTICES") {
            limits.max_table_vertices = v;
        }
        if let Some(v) = env_usize("TRIMCOLOR_MAX_ENUMERATED_VERTICES") {
            limits.max_enumerated_vertices = v;
        }
        limits
    }

    pub(crate) fn check_table(&self, vertices: usize) -> Result<()> {
        if vertices > self.max_table_vertices {
            return Err(Error::resource(format!(
                "{vertices} vertices exceed the subset-table cap of {}",
                self.max_table_vertices
            )));
        }
        Ok(())
    }

    pub(crate) fn check_enumeration(&self, vertices: usize) -> Result<()> {
        if vertices > self.max_enumerated_vertices {
            return Err(Error::resource(format!(
                "{vertices} pre-colored vertices exceed the enumeration cap of {}",
                self.max_enumerated_vertices
            )));
        }
        Ok(())
    }
}

pub(crate) fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok().and_then(|v| v.trim().parse().ok())
}
