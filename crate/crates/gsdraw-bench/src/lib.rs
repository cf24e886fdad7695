//! Instances shared by the benchmarks in `benches/`.

use gsdraw::corpus::corpus_maps;
use gsdraw::fixtures;
use gsdraw::map::PlanarMap;

/// Fanned `k x k` grids, `k^2 + 4` vertices each.
pub fn grids(sizes: &[usize]) -> Vec<(usize, PlanarMap)> {
    sizes.iter().map(|&k| (k * k + 4, fixtures::fanned_grid(k))).collect()
}

/// Every corpus map with exactly `faces` inner faces.
pub fn corpus_slice(faces: usize) -> Vec<PlanarMap> {
    corpus_maps(faces).into_iter().filter(|m| m.face_count() - 1 == faces).collect()
}
