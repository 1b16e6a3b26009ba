//! Order-preserving data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon global pool. Without it every execution mode is sequential.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// True when the crate was built with the `parallel` feature.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// `items.iter().enumerate().map(f)` collected in input order.
pub fn map_indexed<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect(),
        _ => items.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
    }
}

/// Maximum of `f` over `items`; 0 for an empty slice. NaN propagates as infinity.
pub fn max_over<T, F>(items: &[T], exec: Execution, f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    let guard = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(|t| guard(f(t))).reduce(|| 0.0, f64::max),
        _ => items.iter().map(|t| guard(f(t))).fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map_indexed(&xs, Execution::Sequential, |i, x| (i as u64) * 3 + x);
        let par = map_indexed(&xs, Execution::Parallel, |i, x| (i as u64) * 3 + x);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 40);
    }

    #[test]
    fn max_treats_nan_as_failure() {
        let xs = [1.0, f64::NAN, 0.5];
        assert_eq!(max_over(&xs, Execution::Sequential, |v| *v), f64::INFINITY);
        assert_eq!(max_over(&xs, Execution::Parallel, |v| *v), f64::INFINITY);
        assert_eq!(max_over::<f64, _>(&[], Execution::Parallel, |v| *v), 0.0);
    }
}
