//! Dynamic discrete distributions backed by a Fenwick (binary indexed) tree.

/// Prefix-sum tree over non-negative weights supporting append, point
/// update and inverse-CDF lookup in `O(log n)`.
#[derive(Clone, Debug, Default)]
pub struct FenwickTree {
    // 1-based; tree[0] unused.
    tree: Vec<f64>,
    total: f64,
}

#[inline]
fn lsb(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl FenwickTree {
    pub fn new() -> Self {
        Self { tree: vec![0.0], total: 0.0 }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        let mut tree = Vec::with_capacity(capacity + 1);
        tree.push(0.0);
        Self { tree, total: 0.0 }
    }

    /// Builds the tree in `O(n)`.
    pub fn from_weights(weights: &[f64]) -> Self {
        let mut tree = Vec::with_capacity(weights.len() + 1);
        tree.push(0.0);
        tree.extend_from_slice(weights);
        for i in 1..tree.len() {
            let j = i + lsb(i);
            if j < tree.len() {
                tree[j] += tree[i];
            }
        }
        Self { tree, total: weights.iter().sum() }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Sum of the first `count` weights.
    pub fn prefix_sum(&self, count: usize) -> f64 {
        let mut i = count.min(self.len());
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i];
            i -= lsb(i);
        }
        sum
    }

    pub fn push(&mut self, weight: f64) {
        let i = self.tree.len();
        let low = i - lsb(i);
        let node = weight + self.prefix_sum(i - 1) - self.prefix_sum(low);
        self.tree.push(node);
        self.total += weight;
    }

    /// Adds `delta` to the weight at 0-based `index`.
    pub fn add(&mut self, index: usize, delta: f64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += lsb(i);
        }
        self.total += delta;
    }

    /// 0-based index of the item whose cumulative interval contains `u`,
    /// i.e. the smallest `k` with `prefix_sum(k + 1) > u`. Zero-weight items
    /// are never returned for `u` in `[0, total)`.
    pub fn find(&self, mut u: f64) -> usize {
        let n = self.len();
        debug_assert!(n > 0);
        let mut pos = 0;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= u {
                pos = next;
                u -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}
