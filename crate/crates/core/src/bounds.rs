//! Axis-aligned box in decision space.

use rand::distr::Uniform;
use rand::Rng;

use crate::scalar::Scalar;

/// Componentwise lower/upper limits for a decision vector.
///
/// Degenerate components (`lower == upper`) are allowed; inverted ones are
/// not.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    /// Per-component lower limits.
    pub lower: Vec<T>,
    /// Per-component upper limits.
    pub upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    /// Builds a box, checking that the two limit vectors agree in length and
    /// that no component is inverted.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch or `lower[i] > upper[i]`.
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Self {
        assert_eq!(
            lower.len(),
            upper.len(),
            "bound vectors must agree in length"
        );
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            assert!(lo <= hi, "inverted bound at component {i}: {lo} > {hi}");
        }
        Self { lower, upper }
    }

    /// Number of decision-vector components.
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    /// True when the box has no components.
    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// True when `point` lies inside the box (inclusive on both sides).
    pub fn contains(&self, point: &[T]) -> bool {
        point.len() == self.len()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Clamps `point` into the box componentwise.
    pub fn clamp(&self, point: &mut [T]) {
        for ((x, lo), hi) in point.iter_mut().zip(&self.lower).zip(&self.upper) {
            if *x < *lo {
                *x = *lo;
            } else if *x > *hi {
                *x = *hi;
            }
        }
    }

    /// Draws one point uniformly from the box, component by component in
    /// index order (one RNG draw per component).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| {
                let dist = Uniform::new_inclusive(*lo, *hi).expect("validated bound order");
                rng.sample(dist)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn contains_is_inclusive() {
        let b = Bounds::new(vec![0.0, -1.0], vec![1.0, 1.0]);
        assert!(b.contains(&[0.0, 1.0]));
        assert!(b.contains(&[1.0, -1.0]));
        assert!(!b.contains(&[1.0 + 1e-12, 0.0]));
        assert!(!b.contains(&[0.5]));
    }

    #[test]
    fn degenerate_component_samples_its_single_value() {
        let b = Bounds::new(vec![2.5], vec![2.5]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(b.sample(&mut rng), vec![2.5]);
    }

    #[test]
    fn samples_stay_inside() {
        let b = Bounds::new(vec![-3.0, 0.0, 10.0], vec![4.0, 0.25, 11.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(b.contains(&b.sample(&mut rng)));
        }
    }

    #[test]
    #[should_panic(expected = "inverted bound")]
    fn inverted_bounds_are_rejected() {
        let _ = Bounds::new(vec![1.0], vec![0.0]);
    }
}
