//! Vector norms.
//!
//! All functions sum in input order so results are bitwise reproducible.

use crate::error::{Error, Result};

fn non_empty(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Dimension("norm of an empty vector".into()));
    }
    Ok(())
}

/// Manhattan norm, `Σ|aᵢ|`.
pub fn norm_l1(a: &[f64]) -> Result<f64> {
    non_empty(a)?;
    Ok(a.iter().map(|x| x.abs()).sum())
}

/// Euclidean norm, `(Σ aᵢ²)^½`.
pub fn norm_l2(a: &[f64]) -> Result<f64> {
    non_empty(a)?;
    Ok(a.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// Max norm, `max|aᵢ|`.
pub fn norm_linf(a: &[f64]) -> Result<f64> {
    non_empty(a)?;
    Ok(a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())))
}

/// `(Σ|aᵢ|^p)^(1/p)` for `p ≥ 1`.
///
/// `p = 1` and `p = 2` are routed to [`norm_l1`] and [`norm_l2`] so the
/// reductions hold exactly rather than up to `powf` rounding.
pub fn norm_lp(a: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("p must be a finite value >= 1, got {p}")));
    }
    non_empty(a)?;
    if p == 1.0 {
        return norm_l1(a);
    }
    if p == 2.0 {
        return norm_l2(a);
    }
    Ok(a.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(p.recip()))
}

/// Weighted Euclidean norm `(Σ dᵢ aᵢ²)^½` for a diagonal weight matrix given
/// as its diagonal `d`.
pub fn norm_weighted(a: &[f64], d: &[f64]) -> Result<f64> {
    non_empty(a)?;
    if a.len() != d.len() {
        return Err(Error::Dimension(format!(
            "vector has {} components but {} weights were given",
            a.len(),
            d.len()
        )));
    }
    if let Some(w) = d.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::Parameter(format!("weights must be finite and >= 0, got {w}")));
    }
    Ok(a.iter()
        .zip(d)
        .map(|(x, w)| w * x * x)
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn l1_examples() {
        assert_eq!(norm_l1(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(norm_l1(&[1.0, -2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(norm_l1(&[5.0]).unwrap(), 5.0);
    }

    #[test]
    fn l2_examples() {
        assert_eq!(norm_l2(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(norm_l2(&[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(norm_l2(&[6.0, 8.0]).unwrap(), 10.0);
    }

    #[test]
    fn linf_examples() {
        assert_eq!(norm_linf(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(norm_linf(&[1.0, -7.0, 3.0]).unwrap(), 7.0);
        assert_eq!(norm_linf(&[2.0, 2.0]).unwrap(), 2.0);
    }

    #[test]
    fn lp_examples() {
        assert_eq!(norm_lp(&[3.0, 4.0], 2.0).unwrap(), 5.0);
        assert_eq!(norm_lp(&[1.0, 1.0], 1.0).unwrap(), 2.0);
        let v = norm_lp(&[1.0, 1.0], 3.0).unwrap();
        assert!((v - 2f64.cbrt()).abs() < 1e-12, "{v}");
        assert!((v - 1.2599).abs() < 1e-4);
    }

    #[test]
    fn weighted_examples() {
        assert_eq!(norm_weighted(&[3.0, 4.0], &[1.0, 1.0]).unwrap(), 5.0);
        assert_eq!(norm_weighted(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(norm_weighted(&[6.0, 8.0], &[0.25, 0.25]).unwrap(), 5.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(norm_l1(&[]), Err(Error::Dimension(_))));
        assert!(matches!(norm_l2(&[]), Err(Error::Dimension(_))));
        assert!(matches!(norm_linf(&[]), Err(Error::Dimension(_))));
        assert!(matches!(norm_lp(&[1.0], 0.5), Err(Error::Parameter(_))));
        assert!(matches!(norm_lp(&[1.0], f64::NAN), Err(Error::Parameter(_))));
        assert!(matches!(norm_weighted(&[1.0, 2.0], &[1.0]), Err(Error::Dimension(_))));
        assert!(matches!(norm_weighted(&[1.0], &[-0.1]), Err(Error::Parameter(_))));
    }

    fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..12).prop_flat_map(|n| {
            (
                prop::collection::vec(-1e3..1e3f64, n),
                prop::collection::vec(-1e3..1e3f64, n),
            )
        })
    }

    type NormFn = fn(&[f64]) -> Result<f64>;

    fn all_norms() -> Vec<(&'static str, NormFn)> {
        vec![
            ("l1", norm_l1),
            ("l2", norm_l2),
            ("linf", norm_linf),
            ("l3", |a| norm_lp(a, 3.0)),
            ("l1.5", |a| norm_lp(a, 1.5)),
            ("weighted", |a| {
                let d: Vec<f64> = (0..a.len()).map(|i| 0.1 + (i % 4) as f64 * 0.3).collect();
                norm_weighted(a, &d)
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn triangle_inequality((a, b) in vec_pair()) {
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            for (name, f) in all_norms() {
                let lhs = f(&sum).unwrap();
                let rhs = f(&a).unwrap() + f(&b).unwrap();
                prop_assert!(lhs <= rhs + 1e-9 * rhs.max(1.0), "{name}: {lhs} > {rhs}");
            }
        }

        #[test]
        fn homogeneity((a, _) in vec_pair(), c in 0.0..100.0f64) {
            let scaled: Vec<f64> = a.iter().map(|x| c * x).collect();
            for (name, f) in all_norms() {
                let lhs = f(&scaled).unwrap();
                let rhs = c * f(&a).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-300), "{name}: {lhs} vs {rhs}");
            }
        }

        #[test]
        fn positivity_and_ordering((a, _) in vec_pair()) {
            for (_, f) in all_norms() {
                prop_assert!(f(&a).unwrap() >= 0.0);
            }
            let (l1, l2, li) = (norm_l1(&a).unwrap(), norm_l2(&a).unwrap(), norm_linf(&a).unwrap());
            prop_assert!(li <= l2 * (1.0 + 1e-12));
            prop_assert!(l2 <= l1 * (1.0 + 1e-12));
        }

        #[test]
        fn reductions((a, _) in vec_pair()) {
            let ones = vec![1.0; a.len()];
            let l2 = norm_l2(&a).unwrap();
            prop_assert!((norm_lp(&a, 1.0).unwrap() - norm_l1(&a).unwrap()).abs() <= 1e-12 * l2.max(1.0));
            prop_assert!((norm_lp(&a, 2.0).unwrap() - l2).abs() <= 1e-12 * l2.max(1.0));
            prop_assert!((norm_weighted(&a, &ones).unwrap() - l2).abs() <= 1e-12 * l2.max(1.0));
        }

        #[test]
        fn zero_vector_maps_to_zero(n in 1usize..10) {
            let z = vec![0.0; n];
            for (_, f) in all_norms() {
                prop_assert_eq!(f(&z).unwrap(), 0.0);
            }
        }
    }
}
