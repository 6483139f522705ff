//! Fixed-order pairwise summation. The reduction tree depends only on the
//! slice length, so results are bit-identical regardless of thread count.

use std::ops::Add;

use num_traits::Zero;

const LEAF: usize = 16;

pub fn pairwise_sum<V>(values: &[V]) -> V
where
    V: Copy + Zero + Add<Output = V>,
{
    if values.len() <= LEAF {
        return values.iter().fold(V::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn sums_exactly_representable_values() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn beats_naive_summation_on_many_small_terms() {
        let v = vec![0.1f32; 1 << 20];
        let naive: f32 = v.iter().sum();
        let exact = 0.1f64 * f64::from(1u32 << 20);
        let pw = f64::from(pairwise_sum(&v));
        assert!((pw - exact).abs() < (f64::from(naive) - exact).abs());
    }

    #[test]
    fn complex_values() {
        let v = vec![Complex64::new(1.0, -2.0); 100];
        assert_eq!(pairwise_sum(&v), Complex64::new(100.0, -200.0));
    }
}
