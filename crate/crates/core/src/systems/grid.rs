//! Evaluation grid for sup and endpoint checks: Chebyshev-distributed interior
//! points plus geometric refinement toward both endpoints.

use std::sync::OnceLock;

pub const CHEBYSHEV_POINTS: usize = 4096;
/// Refinement reaches 10^{-REFINE_DECADES} from either endpoint.
pub const REFINE_DECADES: i32 = 10;

pub fn build_grid(cheb: usize, decades: i32) -> Vec<f64> {
    let mut v: Vec<f64> = (0..cheb)
        .map(|i| {
            let th = std::f64::consts::PI * (i as f64 + 0.5) / cheb as f64;
            0.5 * (1.0 - th.cos())
        })
        .collect();
    // four points per decade
    for j in 0..=(4 * decades) {
        let d = 10f64.powf(-(j as f64) / 4.0) * 1e-3;
        if d < 1e-3 * 10f64.powi(-decades) {
            break;
        }
        v.push(d);
        v.push(1.0 - d);
    }
    v.retain(|&x| x > 0.0 && x < 1.0);
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

/// The default grid, built once.
pub fn evaluation_grid() -> &'static [f64] {
    static GRID: OnceLock<Vec<f64>> = OnceLock::new();
    GRID.get_or_init(|| build_grid(CHEBYSHEV_POINTS, REFINE_DECADES - 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_interior_sorted_and_refined() {
        let g = evaluation_grid();
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > 0.0 && *g.last().unwrap() < 1.0);
        assert!(g[0] <= 1.0001e-10);
        assert!(1.0 - g.last().unwrap() <= 1.0001e-10);
        assert!(g.len() >= CHEBYSHEV_POINTS);
    }
}
