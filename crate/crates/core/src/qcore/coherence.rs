use super::DensityMatrix;
use crate::error::{Error, Result};

/// Spatial extent over which ρ keeps off-diagonal weight.
///
/// For every anti-diagonal `x̄ = const` the second moment of `|ρ(x̄+ξ/2, x̄-ξ/2)|²`
/// in `ξ` is taken; these are averaged with weight `ρ(x̄, x̄)` and the result is
/// `√2 · sqrt(mean second moment)`. A pure Gaussian packet of width σ gives 2σ.
/// A diagonal (fully decohered) matrix gives 0, i.e. anything below one grid
/// spacing is unresolved.
pub fn coherence_length(rho: &DensityMatrix) -> Result<f64> {
    let grid = rho.spatial_grid()?;
    let n = grid.len();
    let dx = grid.spacing();
    let m = rho.elements();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re.max(0.0)).collect();

    let mut weighted_moment = 0.0;
    let mut total_weight = 0.0;
    let mut any_support = false;
    for s in 0..(2 * n - 1) {
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        let mut abs_sum = 0.0;
        let mut sq_sum = 0.0;
        let mut moment = 0.0;
        for i in lo..=hi {
            let z = m[(i, s - i)];
            let xi = (2.0 * i as f64 - s as f64) * dx;
            let a2 = z.norm_sqr();
            abs_sum += a2.sqrt();
            sq_sum += a2;
            moment += xi * xi * a2;
        }
        if abs_sum < 1e-12 {
            continue;
        }
        any_support = true;
        let centre_weight = if s % 2 == 0 {
            diag[s / 2]
        } else {
            0.5 * (diag[s / 2] + diag[s / 2 + 1])
        };
        weighted_moment += centre_weight * moment / sq_sum;
        total_weight += centre_weight;
    }
    if !any_support || total_weight <= 0.0 {
        return Err(Error::DegenerateState);
    }
    Ok((2.0 * weighted_moment / total_weight).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{build_gaussian_packet, Basis, SpatialGrid};
    use crate::rates::apply_spatial_decoherence;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    #[test]
    fn pure_gaussian_gives_twice_width() {
        let grid = SpatialGrid::new(256, -16.0, 16.0).unwrap();
        for sigma in [0.8, 1.0, 2.0] {
            let rho = DensityMatrix::pure(&build_gaussian_packet(grid, 0.3, sigma, 0.4).unwrap());
            let l = coherence_length(&rho).unwrap();
            assert!((l / (2.0 * sigma) - 1.0).abs() < 0.02, "sigma {sigma}: {l}");
        }
    }

    #[test]
    fn decoherence_shrinks_length() {
        let grid = SpatialGrid::new(256, -16.0, 16.0).unwrap();
        let rho = DensityMatrix::pure(&build_gaussian_packet(grid, 0.0, 1.0, 0.0).unwrap());
        let before = coherence_length(&rho).unwrap();
        // Λt·(2σ)² = 10
        let after = coherence_length(&apply_spatial_decoherence(&rho, 2.5, 1.0).unwrap()).unwrap();
        assert!(after < before);
    }

    #[test]
    fn diagonal_state_is_below_resolution() {
        let grid = SpatialGrid::new(64, -4.0, 4.0).unwrap();
        let n = grid.len();
        let w = 1.0 / (n as f64 * grid.spacing());
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(w, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let rho = DensityMatrix::spatial(grid, m).unwrap();
        assert!(coherence_length(&rho).unwrap() < grid.spacing());
    }

    #[test]
    fn empty_matrix_is_degenerate() {
        let grid = SpatialGrid::new(16, -1.0, 1.0).unwrap();
        let rho = DensityMatrix::from_parts(Basis::Spatial(grid), DMatrix::zeros(16, 16));
        assert_eq!(coherence_length(&rho), Err(Error::DegenerateState));
    }
}
