//! Deterministic summation.
//!
//! Every reduction in the crate goes through the same fixed tree: the input is
//! cut into blocks of [`BLOCK`] consecutive terms, each block is reduced with
//! eight interleaved accumulators, and the block sums are combined by
//! recursive halving. The result depends only on the values and their order,
//! never on how the work was scheduled.

/// Terms per leaf block.
pub const BLOCK: usize = 1024;

const LANES: usize = 8;

#[inline]
fn block_sum(block: &[f64]) -> f64 {
    let mut acc = [0.0f64; LANES];
    let chunks = block.chunks_exact(LANES);
    let rest = chunks.remainder();
    for chunk in chunks {
        for (a, &v) in acc.iter_mut().zip(chunk) {
            *a += v;
        }
    }
    for (a, &v) in acc.iter_mut().zip(rest) {
        *a += v;
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]))
}

fn tree(sums: &[f64]) -> f64 {
    match sums.len() {
        0 => 0.0,
        1 => sums[0],
        len => {
            let (left, right) = sums.split_at(len / 2);
            tree(left) + tree(right)
        }
    }
}

/// Sums a slice with the fixed block/tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    let sums: Vec<f64> = values.chunks(BLOCK).map(block_sum).collect();
    tree(&sums)
}

/// Sums `len` terms that are produced block by block.
///
/// `fill(start, out)` must write terms `start..start + out.len()` into `out`.
/// Equivalent (bitwise) to materializing all terms and calling
/// [`pairwise_sum`], without holding more than one block in memory.
pub fn pairwise_sum_blocks<F>(len: usize, mut fill: F) -> f64
where
    F: FnMut(usize, &mut [f64]),
{
    let mut buf = [0.0f64; BLOCK];
    let mut sums = Vec::with_capacity(len.div_ceil(BLOCK));
    let mut start = 0;
    while start < len {
        let end = (start + BLOCK).min(len);
        let out = &mut buf[..end - start];
        fill(start, out);
        sums.push(block_sum(out));
        start = end;
    }
    tree(&sums)
}

/// Sums `f(0) + ... + f(len - 1)` in the fixed order.
pub fn pairwise_sum_map<F>(len: usize, mut f: F) -> f64
where
    F: FnMut(usize) -> f64,
{
    pairwise_sum_blocks(len, |start, out| {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = f(start + k);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums_are_exact() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.5]), 1.5);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0]), 6.0);
        let ones = vec![1.0; 5000];
        assert_eq!(pairwise_sum(&ones), 5000.0);
    }

    #[test]
    fn streamed_matches_slice_bitwise() {
        let values: Vec<f64> = (0..10_000).map(|i| 1.0 / (1.0 + i as f64).sqrt()).collect();
        let a = pairwise_sum(&values);
        let b = pairwise_sum_map(values.len(), |i| values[i]);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn accuracy_beats_naive_on_harmonic_tail() {
        let n = 1_000_000;
        let s = pairwise_sum_map(n, |i| 1.0 / (i as f64 + 1.0));
        // H_n = ln n + euler_gamma + 1/(2n) - 1/(12 n^2) + ...
        let nf = n as f64;
        let expected = nf.ln() + 0.577_215_664_901_532_9 + 0.5 / nf - 1.0 / (12.0 * nf * nf);
        assert!((s - expected).abs() < 1e-13, "{s} vs {expected}");
    }
}
