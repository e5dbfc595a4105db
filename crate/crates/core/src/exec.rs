//! Execution strategy for the embarrassingly parallel inner loops (per-sample
//! tensor checks, residual scans, curvature grids). With the `parallel`
//! feature the indexed map fans out over rayon; without it the same code path
//! runs sequentially. Outputs are collected in input order and all reductions
//! happen sequentially afterwards, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to 0..n, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_indexed`], kept available under every feature set
/// so the two strategies can be compared directly.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree_and_preserve_order() {
        let f = |i: usize| (i as f64) * 1.5 - 3.0;
        let par = map_indexed(257, f);
        let seq = map_indexed_seq(257, f);
        assert_eq!(par, seq);
        assert_eq!(par[0], -3.0);
        assert_eq!(par[256], 256.0 * 1.5 - 3.0);
    }

    #[test]
    fn empty_range_yields_empty_vec() {
        let out: Vec<u8> = map_indexed(0, |_| 0u8);
        assert!(out.is_empty());
    }
}
