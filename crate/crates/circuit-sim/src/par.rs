//! Iteration over the basis indices of a control subspace, optionally
//! data-parallel. Each visited index is distinct, so kernels may write
//! through a shared raw pointer without synchronisation.

/// Indices per parallel work item.
#[cfg(feature = "parallel")]
const CHUNK: u64 = 1 << 13;

/// Sorted positions of the set bits of `mask`.
pub fn bit_positions(mask: u64) -> Vec<u32> {
    (0..64).filter(|p| mask >> p & 1 == 1).collect()
}

/// Spreads the bits of `k` over the zero bits of the fixed mask, i.e. inserts
/// a zero at every position in `fixed` (ascending).
#[inline(always)]
pub fn deposit(mut k: u64, fixed: &[u32]) -> u64 {
    for &p in fixed {
        let low = k & ((1u64 << p) - 1);
        k = low | ((k ^ low) << 1);
    }
    k
}

/// Calls `f(base)` for every index whose bits in `fixed_mask` equal `value`
/// (bits of `value` outside the mask must be zero), over `n` qubits.
pub fn for_each_index<F>(n: usize, fixed_mask: u64, value: u64, f: F)
where
    F: Fn(u64) + Sync + Send,
{
    let fixed = bit_positions(fixed_mask);
    let free = n as u32 - fixed.len() as u32;
    let count: u64 = 1 << free;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if count > CHUNK {
            (0..count / CHUNK).into_par_iter().for_each(|chunk| {
                let start = chunk * CHUNK;
                for k in start..start + CHUNK {
                    f(deposit(k, &fixed) | value);
                }
            });
            return;
        }
    }
    for k in 0..count {
        f(deposit(k, &fixed) | value);
    }
}

/// Raw amplitude pointer shared across workers that touch disjoint indices.
#[derive(Clone, Copy)]
pub struct SharedMut<T>(pub *mut T);

// SAFETY: users only dereference disjoint offsets from distinct workers.
unsafe impl<T: Send> Send for SharedMut<T> {}
unsafe impl<T: Send> Sync for SharedMut<T> {}

impl<T> SharedMut<T> {
    /// # Safety
    /// `i` must be in bounds and not accessed concurrently by another worker.
    #[inline(always)]
    pub unsafe fn at<'a>(self, i: u64) -> &'a mut T {
        &mut *self.0.add(i as usize)
    }
}

/// Deterministic chunked sum: per-chunk partials combined in index order.
pub fn ordered_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(std::ops::Range<usize>) -> f64 + Sync + Send,
{
    const SUM_CHUNK: usize = 1 << 16;
    let chunks = len.div_ceil(SUM_CHUNK);
    let part = |c: usize| f(c * SUM_CHUNK..((c + 1) * SUM_CHUNK).min(len));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let partials: Vec<f64> = (0..chunks).into_par_iter().map(part).collect();
        partials.iter().sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(part).sum()
    }
}
