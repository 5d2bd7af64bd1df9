//! Majorization pairs for LOCC reachability between pure states.
//!
//! A pure state with Schmidt spectrum λ converts to one with spectrum λ'
//! under LOCC exactly when λ ≺ λ' (Nielsen). Pairs are sampled
//! constructively: draw the target spectrum, then mix it with T-transforms,
//! which can only move the spectrum down the majorization order.

use rand::Rng;

use crate::error::{QcorrError, Result};
use crate::sample::{random_probability_vector, rng_stream};

/// Spectra sorted descending with `source ≺ target` (prefix sums of the
/// target dominate the source's entrywise).
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationPair {
    pub source: Vec<f64>,
    pub target: Vec<f64>,
}

fn validate_probability_vector(p: &[f64], name: &str) -> Result<()> {
    if p.is_empty() {
        return Err(QcorrError::InvalidArgument {
            context: format!("{name} spectrum is empty"),
        });
    }
    if let Some(&bad) = p.iter().find(|&&x| !(x >= -1e-12)) {
        return Err(QcorrError::InvalidArgument {
            context: format!("{name} spectrum has negative entry {bad}"),
        });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(QcorrError::InvalidArgument {
            context: format!("{name} spectrum sums to {total}, expected 1"),
        });
    }
    Ok(())
}

fn sorted_desc(p: &[f64]) -> Vec<f64> {
    let mut v = p.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Whether `x ≺ y` after sorting both descending.
pub fn is_majorized_by(x: &[f64], y: &[f64]) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let (xs, ys) = (sorted_desc(x), sorted_desc(y));
    let mut px = 0.0;
    let mut py = 0.0;
    for i in 0..xs.len() {
        px += xs[i];
        py += ys[i];
        if py < px - 1e-12 {
            return false;
        }
    }
    true
}

impl MajorizationPair {
    /// Validates and stores both spectra sorted descending; rejects pairs
    /// where the source is not majorized by the target.
    pub fn new(source: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        validate_probability_vector(&source, "source")?;
        validate_probability_vector(&target, "target")?;
        if source.len() != target.len() {
            return Err(QcorrError::DimensionMismatch {
                context: format!(
                    "source spectrum has {} entries, target has {}",
                    source.len(),
                    target.len()
                ),
            });
        }
        if !is_majorized_by(&source, &target) {
            return Err(QcorrError::InvalidArgument {
                context: "source spectrum is not majorized by the target".to_string(),
            });
        }
        Ok(Self {
            source: sorted_desc(&source),
            target: sorted_desc(&target),
        })
    }

    pub fn dim(&self) -> usize {
        self.source.len()
    }
}

/// Draws a target spectrum, then degrades it into a majorized source with a
/// few random T-transforms (two-entry doubly stochastic mixes).
pub(crate) fn sample_pair(dim: usize, rng: &mut impl Rng) -> MajorizationPair {
    let target = sorted_desc(&random_probability_vector(dim, rng));
    let mut source = target.clone();
    if dim > 1 {
        let transforms = 1 + rng.random_range(0..3);
        for _ in 0..transforms {
            let i = rng.random_range(0..dim);
            let mut j = rng.random_range(0..dim - 1);
            if j >= i {
                j += 1;
            }
            let t: f64 = rng.random();
            let (a, b) = (source[i], source[j]);
            source[i] = t * a + (1.0 - t) * b;
            source[j] = (1.0 - t) * a + t * b;
        }
    }
    MajorizationPair::new(source, target).expect("T-transforms preserve majorization")
}

/// Deterministic sampler for a `dim ⊗ dim` Nielsen pair, `dim <= 4`.
pub fn nielsen_pair_sampler(dim: usize, seed: u64) -> Result<MajorizationPair> {
    if dim == 0 || dim > 4 {
        return Err(QcorrError::InvalidArgument {
            context: format!("nielsen pair dimension must be in 1..=4, got {dim}"),
        });
    }
    let mut rng = rng_stream(seed, 0);
    Ok(sample_pair(dim, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_from_seed;

    #[test]
    fn textbook_pair_accepted() {
        let pair = MajorizationPair::new(vec![0.5, 0.5], vec![0.9, 0.1]).unwrap();
        assert_eq!(pair.source, vec![0.5, 0.5]);
        assert_eq!(pair.target, vec![0.9, 0.1]);
    }

    #[test]
    fn non_majorized_pair_rejected() {
        let err = MajorizationPair::new(vec![0.6, 0.4], vec![0.5, 0.5]).unwrap_err();
        assert!(matches!(err, QcorrError::InvalidArgument { .. }));
    }

    #[test]
    fn equal_spectra_majorize_both_ways() {
        assert!(is_majorized_by(&[0.3, 0.7], &[0.7, 0.3]));
        assert!(is_majorized_by(&[0.7, 0.3], &[0.3, 0.7]));
    }

    #[test]
    fn sampled_pairs_always_valid() {
        let mut rng = rng_from_seed(11);
        for dim in 1..=4 {
            for _ in 0..200 {
                let pair = sample_pair(dim, &mut rng);
                assert!(is_majorized_by(&pair.source, &pair.target), "{pair:?}");
                let sum: f64 = pair.source.iter().sum();
                assert!((sum - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_and_bounded() {
        let a = nielsen_pair_sampler(3, 42).unwrap();
        let b = nielsen_pair_sampler(3, 42).unwrap();
        assert_eq!(a, b);
        assert!(nielsen_pair_sampler(5, 0).is_err());
    }
}
