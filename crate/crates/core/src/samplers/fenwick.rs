/// Fenwick tree over integer counts, growable at the end.
#[derive(Clone, Debug, Default)]
pub(crate) struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    pub(crate) fn from_counts(counts: &[u64]) -> Self {
        let mut f = Fenwick { tree: Vec::with_capacity(counts.len() * 2) };
        for &c in counts {
            f.push(c);
        }
        f
    }

    /// Sum of the first `i` counts.
    pub(crate) fn prefix(&self, mut i: usize) -> u64 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i - 1];
            i &= i - 1;
        }
        s
    }

    pub(crate) fn push(&mut self, value: u64) {
        let i = self.tree.len() + 1;
        let low = i & i.wrapping_neg();
        let covered = self.prefix(i - 1) - self.prefix(i - low);
        self.tree.push(value + covered);
    }

    /// Adds `delta` to the count at 1-based position `i`.
    pub(crate) fn add(&mut self, mut i: usize, delta: u64) {
        while i <= self.tree.len() {
            self.tree[i - 1] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest `j` with `prefix(j) − alpha·j > u`; `prefix(j) − alpha·j` must be
    /// increasing in `j`, which holds when every count exceeds `alpha`.
    pub(crate) fn search(&self, alpha: f64, u: f64) -> usize {
        let n = self.tree.len();
        let mut pos = 0usize;
        let mut acc = 0u64;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n {
                let cand = acc + self.tree[next - 1];
                if cand as f64 - alpha * next as f64 <= u {
                    pos = next;
                    acc = cand;
                }
            }
            step >>= 1;
        }
        (pos + 1).min(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_sums_and_search() {
        let counts = [3u64, 1, 4, 1, 5, 9, 2, 6];
        let mut f = Fenwick::from_counts(&counts);
        for i in 0..=counts.len() {
            assert_eq!(f.prefix(i), counts[..i].iter().sum::<u64>());
        }
        f.add(3, 2);
        assert_eq!(f.prefix(3), 10);
        let mut counts = counts.to_vec();
        counts[2] += 2;
        for &alpha in &[0.0, 0.5, -1.5] {
            let total: f64 = counts.iter().sum::<u64>() as f64 - alpha * counts.len() as f64;
            for i in 0..200 {
                let u = total * i as f64 / 200.0;
                let mut acc = 0u64;
                let mut want = counts.len();
                for (j, &c) in counts.iter().enumerate() {
                    acc += c;
                    if acc as f64 - alpha * (j + 1) as f64 > u {
                        want = j + 1;
                        break;
                    }
                }
                assert_eq!(f.search(alpha, u), want);
            }
        }
    }
}
