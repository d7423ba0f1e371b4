use crate::error::{Error, Result};

/// Mean Euclidean distance from each particle to `best`, divided by `sqrt(D)`.
///
/// For coordinates in `[0, 1]` the result lies in `[0, 1]`.
pub fn swarm_diversity(positions: &[Vec<f64>], best: &[f64]) -> Result<f64> {
    if positions.is_empty() {
        return Err(Error::domain("diversity of an empty swarm"));
    }
    if best.is_empty() {
        return Err(Error::domain("diversity in zero dimensions"));
    }
    let dim = best.len();
    let mut total = 0.0;
    for (i, x) in positions.iter().enumerate() {
        if x.len() != dim {
            return Err(Error::domain(format!(
                "particle {i} has {} coordinates, expected {dim}",
                x.len()
            )));
        }
        let sq: f64 = x.iter().zip(best).map(|(a, b)| (a - b) * (a - b)).sum();
        total += sq.sqrt();
    }
    Ok(total / positions.len() as f64 / (dim as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapsed_swarm_has_zero_diversity() {
        let best = vec![0.3; 5];
        let swarm = vec![best.clone(); 4];
        assert_eq!(swarm_diversity(&swarm, &best).unwrap(), 0.0);
    }

    #[test]
    fn opposite_corner_is_one() {
        let best = vec![0.0; 96];
        let swarm = vec![vec![1.0; 96]];
        assert!((swarm_diversity(&swarm, &best).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mean_of_zero_and_one() {
        let best = vec![0.0; 16];
        let swarm = vec![vec![0.0; 16], vec![1.0; 16]];
        assert!((swarm_diversity(&swarm, &best).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_swarm_is_an_error() {
        assert!(matches!(
            swarm_diversity(&[], &[0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ragged_swarm_is_an_error() {
        assert!(swarm_diversity(&[vec![0.0, 1.0], vec![0.0]], &[0.0, 0.0]).is_err());
    }
}
