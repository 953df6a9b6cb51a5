//! The coordinate frame shared by polynomials, scalars and forms.
//!
//! A frame fixes an ordered list of real variables. Variable `v` carries the
//! coordinate covector `d v`; forms index their components by subsets of this
//! list. A frame may designate a chart pair `(x, y)`: those two variables are
//! the ones allowed to appear in the denominator `(1 + x² + y²)^k` of a
//! [`TwistorScalar`](crate::algebra::TwistorScalar).

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default total-degree cap on polynomial numerators.
pub const DEFAULT_DEGREE_CAP: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("values belong to different frames ({0} vs {1})")]
    FrameMismatch(String, String),
    #[error("total degree {degree} exceeds the frame cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("frame has no chart pair; denominators are not available")]
    NoChartPair,
    #[error("covector index {index} out of range for frame of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Ordered coordinate system: variable names, optional chart pair, degree
/// cap and orientation sign for the induced coframe.
#[derive(Debug, PartialEq, Eq)]
pub struct Frame {
    vars: Vec<String>,
    chart: Option<(usize, usize)>,
    degree_cap: u32,
    orientation: i8,
}

impl Frame {
    /// Manifold-only frame with variables `q1..q_dim`.
    pub fn manifold(dim: usize) -> Arc<Self> {
        let vars = (1..=dim).map(|i| format!("q{i}")).collect();
        Arc::new(Self {
            vars,
            chart: None,
            degree_cap: DEFAULT_DEGREE_CAP,
            orientation: 1,
        })
    }

    /// Frame `q1..q_dim, x, y` with `(x, y)` as the chart pair.
    pub fn with_chart(dim: usize) -> Arc<Self> {
        let mut vars: Vec<String> = (1..=dim).map(|i| format!("q{i}")).collect();
        vars.push("x".to_string());
        vars.push("y".to_string());
        Arc::new(Self {
            vars,
            chart: Some((dim, dim + 1)),
            degree_cap: DEFAULT_DEGREE_CAP,
            orientation: 1,
        })
    }

    /// Chart-only frame `(x, y)`, used for fiber-local computations.
    pub fn chart_only() -> Arc<Self> {
        let vars = vec!["x".to_string(), "y".to_string()];
        Arc::new(Self {
            vars,
            chart: Some((0, 1)),
            degree_cap: DEFAULT_DEGREE_CAP,
            orientation: 1,
        })
    }

    pub fn custom(vars: Vec<String>, chart: Option<(usize, usize)>) -> Arc<Self> {
        if let Some((x, y)) = chart {
            assert!(x < vars.len() && y < vars.len() && x != y);
        }
        Arc::new(Self {
            vars,
            chart,
            degree_cap: DEFAULT_DEGREE_CAP,
            orientation: 1,
        })
    }

    /// Same frame with a different degree cap.
    pub fn with_degree_cap(self: &Arc<Self>, cap: u32) -> Arc<Self> {
        Arc::new(Self {
            vars: self.vars.clone(),
            chart: self.chart,
            degree_cap: cap,
            orientation: self.orientation,
        })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn chart_pair(&self) -> Option<(usize, usize)> {
        self.chart
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn covector_name(&self, i: usize) -> String {
        format!("d{}", self.vars[i])
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_chart_var(&self, i: usize) -> bool {
        match self.chart {
            Some((x, y)) => i == x || i == y,
            None => false,
        }
    }

    /// Indices of the non-chart (manifold) variables.
    pub fn manifold_vars(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.is_chart_var(i)).collect()
    }

    /// Two frames are compatible when their content agrees.
    pub fn compatible(a: &Arc<Frame>, b: &Arc<Frame>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn check_compatible(a: &Arc<Frame>, b: &Arc<Frame>) -> Result<(), RingError> {
        if Frame::compatible(a, b) {
            Ok(())
        } else {
            Err(RingError::FrameMismatch(a.to_string(), b.to_string()))
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.vars.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twistor_frame_layout() {
        let fr = Frame::with_chart(4);
        assert_eq!(fr.dim(), 6);
        assert_eq!(fr.var_name(0), "q1");
        assert_eq!(fr.var_name(4), "x");
        assert_eq!(fr.chart_pair(), Some((4, 5)));
        assert!(fr.is_chart_var(5));
        assert_eq!(fr.manifold_vars(), vec![0, 1, 2, 3]);
        assert_eq!(fr.covector_name(4), "dx");
    }

    #[test]
    fn compatibility_by_content() {
        let a = Frame::with_chart(4);
        let b = Frame::with_chart(4);
        let c = Frame::manifold(4);
        assert!(Frame::compatible(&a, &b));
        assert!(!Frame::compatible(&a, &c));
    }
}
