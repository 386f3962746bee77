//! Criterion benchmarks for `lielat-core`; see `benches/`.

use lielat_core::{Prime, QMatrix};

/// Deterministic full-rank integer matrix with a spread of `p`-adic
/// valuations, used as a fixed benchmark input.
pub fn sample_matrix(p: Prime, d: usize) -> QMatrix {
    let p = p.get() as i64;
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let base = ((i * 7 + j * 3) % 11) as i64 - 5;
                    if i == j {
                        base * p.pow((i % 3) as u32) + 1
                    } else {
                        base * p.pow(((i + j) % 2) as u32)
                    }
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    QMatrix::from_i64(&refs)
}
