//! Scalar expressions for user-declared models and surfaces.

use std::fmt;
use std::sync::Arc;

use exmex::prelude::*;
use exmex::FlatEx;

use crate::error::{GeomError, Result};

/// A parsed expression over a fixed, ordered list of variable names.
#[derive(Clone)]
pub struct ScalarExpr {
    source: String,
    inner: Arc<FlatEx<f64>>,
    // position in the caller's argument list for each variable exmex reports
    slots: Vec<usize>,
}

impl ScalarExpr {
    pub fn parse(source: &str, variables: &[&str]) -> Result<Self> {
        let inner = exmex::parse::<f64>(source)
            .map_err(|e| GeomError::Expression(format!("{source:?}: {e}")))?;
        let mut slots = Vec::new();
        for name in inner.var_names() {
            let slot = variables.iter().position(|v| v == name).ok_or_else(|| {
                GeomError::Expression(format!(
                    "{source:?}: unknown variable {name:?} (expected one of {variables:?})"
                ))
            })?;
            slots.push(slot);
        }
        Ok(Self {
            source: source.to_string(),
            inner: Arc::new(inner),
            slots,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluates with `args` in the order given to [`ScalarExpr::parse`].
    pub fn eval(&self, args: &[f64]) -> f64 {
        let mut vals = [0.0f64; 4];
        for (k, &slot) in self.slots.iter().enumerate() {
            vals[k] = args[slot];
        }
        self.inner.eval(&vals[..self.slots.len()]).unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({:?})", self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variables_bind_by_name_not_order() {
        let e = ScalarExpr::parse("y - 2*x", &["x", "y"]).unwrap();
        assert_eq!(e.eval(&[1.0, 5.0]), 3.0);
        let only_y = ScalarExpr::parse("y^2", &["x", "y"]).unwrap();
        assert_eq!(only_y.eval(&[7.0, 3.0]), 9.0);
    }

    #[test]
    fn unknown_variable_rejected() {
        assert!(ScalarExpr::parse("z + 1", &["x", "y"]).is_err());
    }
}
