//! Exact patches of the chair, Ammann-Beenker, rational pinwheel and
//! pinwheel substitution tilings, their planar graphs, constructive
//! vertex/edge/face colourings and an exact chromatic oracle.

pub mod colourers;
pub mod exactgeom;
pub mod oracle;
pub mod planargraph;
pub mod render_io;
pub mod schemes;
pub mod substitution;

pub use exactgeom::{Mat2, Point, Scalar, Transform, TurnClass, Vec2};
pub use planargraph::TilingGraph;
pub use substitution::{Patch, ProtoKind, TileInstance, Tiling};

/// How data-parallel loops are run.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}
