use crate::opcore::{TailDescriptor, TruncatedOperator};
use crate::{Error, Result};

/// Parameter set of a family: an increasing list of reals (optionally ending
/// in `+inf` as the point at infinity of the one-point compactification) or a
/// finite graph of labelled nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Interval { points: Vec<f64> },
    Graph { labels: Vec<String>, edges: Vec<(usize, usize)> },
}

impl Grid {
    pub fn interval(points: Vec<f64>) -> Result<Grid> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        if points.iter().any(|x| x.is_nan() || *x == f64::NEG_INFINITY) {
            return Err(Error::InvalidInput("grid points must be real or +inf".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("grid must be strictly increasing".into()));
        }
        Ok(Grid::Interval { points })
    }

    /// `n` equispaced points on `[lo, hi]`.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if n == 0 {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        if n == 1 {
            return Grid::interval(vec![lo]);
        }
        let step = (hi - lo) / (n - 1) as f64;
        Grid::interval((0..n).map(|k| lo + step * k as f64).collect())
    }

    pub fn graph(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Grid> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("empty graph".into()));
        }
        for &(a, b) in &edges {
            if a >= labels.len() || b >= labels.len() || a == b {
                return Err(Error::InvalidInput(format!("bad graph edge ({a}, {b})")));
            }
        }
        Ok(Grid::Graph { labels, edges })
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Interval { points } => points.len(),
            Grid::Graph { labels, .. } => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adjacent pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            Grid::Interval { points } => (1..points.len()).map(|k| (k - 1, k)).collect(),
            Grid::Graph { edges, .. } => {
                let mut e: Vec<(usize, usize)> =
                    edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
                e.sort_unstable();
                e.dedup();
                e
            }
        }
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges()
            .into_iter()
            .filter_map(|(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn point(&self, i: usize) -> Option<f64> {
        match self {
            Grid::Interval { points } => points.get(i).copied(),
            Grid::Graph { .. } => None,
        }
    }

    pub fn is_marker(&self, i: usize) -> bool {
        self.point(i) == Some(f64::INFINITY)
    }

    pub fn marker(&self) -> Option<usize> {
        match self {
            Grid::Interval { points } if points.last() == Some(&f64::INFINITY) => {
                Some(points.len() - 1)
            }
            _ => None,
        }
    }

    /// Parameter distance between two finite interval nodes.
    pub fn step(&self, i: usize, j: usize) -> Option<f64> {
        let (a, b) = (self.point(i)?, self.point(j)?);
        if a.is_finite() && b.is_finite() {
            Some((a - b).abs())
        } else {
            None
        }
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            Grid::Interval { points } => {
                if points[i] == f64::INFINITY {
                    "inf".into()
                } else {
                    format!("{}", points[i])
                }
            }
            Grid::Graph { labels, .. } => labels[i].clone(),
        }
    }
}

/// A family of truncated operators indexed by a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFamily {
    grid: Grid,
    operators: Vec<TruncatedOperator>,
    tail_rule: TailDescriptor,
    shared_tail: bool,
    label: String,
}

impl SampledFamily {
    /// All operators must share the dimension and the tail descriptor.
    pub fn new(
        grid: Grid,
        operators: Vec<TruncatedOperator>,
        tail_rule: TailDescriptor,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::check_shape(&grid, &operators)?;
        if let Some(bad) = operators.iter().position(|a| a.tail() != &tail_rule) {
            return Err(Error::TailMismatch(format!(
                "sample {bad} does not follow the family tail rule"
            )));
        }
        Ok(SampledFamily {
            grid,
            operators,
            tail_rule,
            shared_tail: true,
            label: label.into(),
        })
    }

    /// Family whose samples may carry different tails; `tail_rule` is the tail
    /// of the first sample and only describes it.
    pub fn with_varying_tails(
        grid: Grid,
        operators: Vec<TruncatedOperator>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::check_shape(&grid, &operators)?;
        let tail_rule = operators[0].tail().clone();
        let shared_tail = operators.iter().all(|a| a.tail() == &tail_rule);
        Ok(SampledFamily {
            grid,
            operators,
            tail_rule,
            shared_tail,
            label: label.into(),
        })
    }

    fn check_shape(grid: &Grid, operators: &[TruncatedOperator]) -> Result<()> {
        if operators.is_empty() {
            return Err(Error::InvalidInput("family has no samples".into()));
        }
        if grid.len() != operators.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} nodes but {} operators were given",
                grid.len(),
                operators.len()
            )));
        }
        let dim = operators[0].dim();
        if let Some(bad) = operators.iter().position(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "sample {bad} has dimension {} instead of {dim}",
                operators[bad].dim()
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn operators(&self) -> &[TruncatedOperator] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &TruncatedOperator {
        &self.operators[i]
    }

    pub fn tail_rule(&self) -> &TailDescriptor {
        &self.tail_rule
    }

    pub fn has_shared_tail(&self) -> bool {
        self.shared_tail
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_grid_edges_and_marker() {
        let g = Grid::interval(vec![1.0, 2.0, f64::INFINITY]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.marker(), Some(2));
        assert_eq!(g.step(0, 1), Some(1.0));
        assert_eq!(g.step(1, 2), None);
        assert_eq!(g.label(2), "inf");
        assert!(Grid::interval(vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn graph_neighbors() {
        let g = Grid::graph(vec!["a".into(), "b".into(), "c".into()], vec![(2, 0), (0, 1)]).unwrap();
        assert_eq!(g.neighbors(0), vec![1, 2]);
        assert_eq!(g.neighbors(1), vec![0]);
        assert!(Grid::graph(vec!["a".into()], vec![(0, 0)]).is_err());
    }

    #[test]
    fn family_requires_shared_shape() {
        let g = Grid::linspace(0.0, 1.0, 2).unwrap();
        let a = TruncatedOperator::from_real_diagonal(&[1.0], TailDescriptor::positive()).unwrap();
        let b = TruncatedOperator::from_real_diagonal(&[1.0, 2.0], TailDescriptor::positive()).unwrap();
        assert!(SampledFamily::new(g.clone(), vec![a.clone(), b], TailDescriptor::positive(), "x").is_err());
        let c = TruncatedOperator::from_real_diagonal(&[1.0], TailDescriptor::negative()).unwrap();
        let err = SampledFamily::new(g.clone(), vec![a.clone(), c.clone()], TailDescriptor::positive(), "x")
            .unwrap_err();
        assert_eq!(err.reason(), "tail_mismatch");
        let mixed = SampledFamily::with_varying_tails(g, vec![a, c], "x").unwrap();
        assert!(!mixed.has_shared_tail());
    }
}
