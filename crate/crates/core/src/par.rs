//! Seam over the optional data-parallel runtime. Grid sweeps go through
//! [`find_first_map`], which returns the leftmost hit in parameter order in
//! both modes, so reports never depend on thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn find_first_map<P, R>(
    params: &[P],
    probe: impl Fn(&P) -> Option<R> + Sync,
) -> Option<R>
where
    P: Sync,
    R: Send,
{
    params.par_iter().find_map_first(|p| probe(p))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first_map<P, R>(
    params: &[P],
    probe: impl Fn(&P) -> Option<R> + Sync,
) -> Option<R> {
    params.iter().find_map(|p| probe(p))
}
