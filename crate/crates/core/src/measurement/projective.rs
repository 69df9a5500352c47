use std::cmp::Ordering;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Operator, C64};
use crate::tol;

/// Complete family of mutually orthogonal projections with outcome labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectiveMeasurement {
    labels: Vec<String>,
    projections: Vec<Operator>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurement {
    labels: Option<Vec<String>>,
    projections: Vec<Operator>,
}

impl ProjectiveMeasurement {
    pub fn new(projections: Vec<Operator>, labels: Vec<String>) -> Result<Self> {
        if projections.is_empty() {
            return Err(invalid("no projections", 0.0));
        }
        if labels.len() != projections.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} projections",
                labels.len(),
                projections.len()
            )));
        }
        let dim = projections[0].dim();
        for p in &projections {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
            let asym = p.hermitian_asymmetry();
            if asym > tol::PROJECTION {
                return Err(invalid("projection not Hermitian", asym));
            }
            let idem = (p * p).max_abs_diff(p);
            if idem > tol::PROJECTION {
                return Err(invalid("projection not idempotent", idem));
            }
        }
        for i in 0..projections.len() {
            for j in i + 1..projections.len() {
                let overlap = (&projections[i] * &projections[j]).max_abs();
                if overlap > tol::PROJECTION {
                    return Err(invalid(
                        &format!("projections {i} and {j} not orthogonal"),
                        overlap,
                    ));
                }
            }
        }
        let sum = projections
            .iter()
            .fold(Operator::zeros(dim), |acc, p| &acc + p);
        let gap = sum.max_abs_diff(&Operator::identity(dim));
        if gap > tol::PROJECTION {
            return Err(invalid("projections do not sum to the identity", gap));
        }
        Ok(ProjectiveMeasurement { labels, projections })
    }

    /// Labels `"0"`, `"1"`, ... in order.
    pub fn unlabeled(projections: Vec<Operator>) -> Result<Self> {
        let labels = (0..projections.len()).map(|j| j.to_string()).collect();
        Self::new(projections, labels)
    }

    /// Rank-one projections onto the standard basis (`"z_basis"`).
    pub fn computational_basis(dim: usize) -> Self {
        Self::unlabeled((0..dim).map(|i| Operator::basis_projector(dim, i)).collect())
            .expect("standard basis is a valid measurement")
    }

    /// Groups consecutive columns of the unitary `basis` into projections of
    /// ranks `sizes`.
    pub fn from_basis(basis: &Operator, sizes: &[usize]) -> Result<Self> {
        let dim = basis.dim();
        let total: usize = sizes.iter().sum();
        if total != dim || sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidArgument(format!(
                "partition {sizes:?} does not cover dimension {dim} with positive ranks"
            )));
        }
        basis.ensure_unitary()?;
        let mut start = 0;
        let mut projections = Vec::with_capacity(sizes.len());
        for &size in sizes {
            let cols = basis.matrix().columns(start, size);
            let p = &cols * cols.adjoint();
            projections.push(Operator::from_matrix(p)?.hermitian_part());
            start += size;
        }
        Self::unlabeled(projections)
    }

    pub fn with_labels(self, labels: Vec<String>) -> Result<Self> {
        Self::new(self.projections, labels)
    }

    pub fn dim(&self) -> usize {
        self.projections[0].dim()
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn projections(&self) -> &[Operator] {
        &self.projections
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: dim })
        }
    }

    /// The family `U P_j U†`, revalidated.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Self> {
        self.ensure_dim(u.dim())?;
        u.ensure_unitary()?;
        let projections = self
            .projections
            .iter()
            .map(|p| p.conjugate_by(u).hermitian_part())
            .collect();
        Self::new(projections, self.labels.clone())
    }

    /// Largest `||[P_j, A]||_max` over the family.
    pub fn max_commutator(&self, a: &Operator) -> f64 {
        self.projections
            .iter()
            .map(|p| p.commutator(a).max_abs())
            .fold(0.0, f64::max)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.projections
            .iter()
            .map(|p| p.trace().re.round() as usize)
            .collect()
    }
}

impl<'de> Deserialize<'de> for ProjectiveMeasurement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMeasurement::deserialize(deserializer)?;
        let m = match raw.labels {
            Some(labels) => ProjectiveMeasurement::new(raw.projections, labels),
            None => ProjectiveMeasurement::unlabeled(raw.projections),
        };
        m.map_err(D::Error::custom)
    }
}

fn invalid(reason: &str, norm: f64) -> Error {
    Error::InvalidMeasurement { reason: reason.to_string(), norm }
}

/// Outcome probabilities of a measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub probabilities: Vec<f64>,
    pub labels: Vec<String>,
}

impl OutcomeDistribution {
    pub fn new(probabilities: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if probabilities.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: probabilities.len(),
            });
        }
        if let Some(p) = probabilities
            .iter()
            .find(|&&p| !(-tol::PSD_CLAMP..=1.0 + tol::PSD_CLAMP).contains(&p))
        {
            return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > tol::DISTRIBUTION_SUM {
            return Err(Error::InvalidArgument(format!("probabilities sum to {sum}")));
        }
        Ok(OutcomeDistribution { probabilities, labels })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn shannon_entropy(&self) -> f64 {
        crate::quantum::shannon_entropy(&self.probabilities)
    }

    /// `½ Σ_j |p_j - q_j|`.
    pub fn total_variation(&self, other: &OutcomeDistribution) -> f64 {
        total_variation(&self.probabilities, &other.probabilities)
    }

    /// Index of the most likely outcome; ties go to the smallest label.
    pub fn argmax(&self) -> usize {
        (0..self.len())
            .max_by(|&a, &b| {
                self.probabilities[a]
                    .partial_cmp(&self.probabilities[b])
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| self.labels[b].cmp(&self.labels[a]))
            })
            .expect("nonempty distribution")
    }
}

/// `½ ‖p - q‖₁`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub(crate) fn real_trace_product(a: &Operator, b: &Operator) -> f64 {
    // tr(AB) without forming AB.
    let (ma, mb) = (a.matrix(), b.matrix());
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += ma[(i, k)] * mb[(k, i)];
        }
    }
    acc.re
}
