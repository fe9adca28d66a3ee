//! Per-path working memory for the successive cancellation recursion.
//!
//! One decoding path holds an LLR buffer and a partial-sum accumulator per
//! tree level; level `l` has `2^l` slots, level `n` being the (read-only)
//! channel LLRs. Buffers are reference counted, so cloning a path at a list
//! fork shares every buffer and copy-on-write happens only when a path
//! actually overwrites a level. Together with counting one LR call per f/g
//! evaluation actually performed, this realizes the lazy-copy cost model:
//! work done before a fork is shared by, and charged once for, both children.

use std::sync::Arc;

use crate::channels::Llr;
use crate::float::Float;

use super::{CombineKind, DecodeCounters};

#[derive(Clone, Debug)]
pub(crate) struct PathMemory<F: Float> {
    levels: usize,
    /// LLR buffer per level; index `l` has length `2^l`, `llr[levels]` is
    /// the channel vector.
    llr: Vec<Arc<Vec<Llr<F>>>>,
    /// Partial-sum accumulator per level. While a block at level `l` is in
    /// progress, `acc[l][0..2^(l-1)]` stages the completed left child's
    /// re-encoded bits for the sibling's g-combines.
    acc: Vec<Arc<Vec<u8>>>,
}

impl<F: Float> PathMemory<F> {
    pub fn new(channel_llrs: &[Llr<F>]) -> Self {
        let n = channel_llrs.len();
        assert!(n.is_power_of_two() && n >= 2);
        let levels = n.trailing_zeros() as usize;
        let mut llr: Vec<Arc<Vec<Llr<F>>>> = (0..levels)
            .map(|l| Arc::new(vec![Llr::zero(); 1 << l]))
            .collect();
        llr.push(Arc::new(channel_llrs.to_vec()));
        let acc = (0..=levels).map(|l| Arc::new(vec![0u8; 1 << l])).collect();
        PathMemory { levels, llr, acc }
    }

    pub fn channel(&self) -> &[Llr<F>] {
        &self.llr[self.levels]
    }

    /// Computes the decision LLR for leaf `phi`, refreshing exactly the
    /// levels whose values change at this leaf. Charges one LR call per f/g
    /// evaluation. Leaf 0 fills every level with f-combines; leaf `phi > 0`
    /// refreshes level `t = trailing_zeros(phi)` with g-combines against the
    /// staged sibling partial sums, then f-combines below it.
    pub fn compute_leaf_llr(
        &mut self,
        phi: usize,
        counters: &mut DecodeCounters,
        combine: CombineKind,
    ) -> Llr<F> {
        debug_assert!(phi < (1 << self.levels));
        if phi == 0 {
            for lvl in (0..self.levels).rev() {
                self.f_batch(lvl, counters, combine);
            }
        } else {
            let t = phi.trailing_zeros() as usize;
            self.g_batch(t, counters);
            for lvl in (0..t).rev() {
                self.f_batch(lvl, counters, combine);
            }
        }
        self.llr[0][0]
    }

    fn f_batch(&mut self, lvl: usize, counters: &mut DecodeCounters, combine: CombineKind) {
        let half = 1usize << lvl;
        let (head, tail) = self.llr.split_at_mut(lvl + 1);
        let src = &tail[0];
        let dst = Arc::make_mut(&mut head[lvl]);
        for i in 0..half {
            dst[i] = combine.f(counters, src[i], src[i + half]);
        }
    }

    fn g_batch(&mut self, lvl: usize, counters: &mut DecodeCounters) {
        let half = 1usize << lvl;
        let (head, tail) = self.llr.split_at_mut(lvl + 1);
        let src = &tail[0];
        let bits = &self.acc[lvl + 1];
        let dst = Arc::make_mut(&mut head[lvl]);
        for i in 0..half {
            dst[i] = super::g_combine(counters, src[i], src[i + half], bits[i]);
        }
    }

    /// Records the decision for leaf `phi` and propagates partial sums: a
    /// completed right child folds into its parent (whose block thereby
    /// completes too), a completed left child stages its bits for the
    /// sibling's g-combines. Pure bookkeeping; no LR calls are charged.
    pub fn record_decision(&mut self, phi: usize, bit: u8) {
        debug_assert!(bit <= 1);
        Arc::make_mut(&mut self.acc[0])[0] = bit;
        let mut lvl = 0usize;
        while lvl < self.levels {
            let half = 1usize << lvl;
            let (head, tail) = self.acc.split_at_mut(lvl + 1);
            let child: &[u8] = &head[lvl];
            let parent = Arc::make_mut(&mut tail[0]);
            if (phi >> lvl) & 1 == 0 {
                parent[..half].copy_from_slice(child);
                break;
            }
            for i in 0..half {
                parent[i] ^= child[i];
            }
            parent[half..2 * half].copy_from_slice(child);
            lvl += 1;
        }
    }
}
