//! Per-root cluster sums as truncated power series.
//!
//! Grade every polymer by `z^{size}`. The clusters whose smallest polymer
//! index is `i` sum to `log Z_{≥i}(z) − log Z_{>i}(z)`, where `Z_{≥i}` is the
//! partition function of the polymers with index at least `i`. A cluster of
//! total size at most `d` that contains `i` only uses polymers joined to `i`
//! by an incompatibility path of total size at most `d`, so both partition
//! functions may be restricted to that ball `R`. Writing `A` for the
//! partition function of `R` minus the polymers incompatible with `i` and
//! `B` for that of `R`,
//!
//! `log Z_{R ∪ i} − log Z_R = log(1 + w_i z^{|i|} A / B)`,
//!
//! and the coefficient of `z^s` is exactly the sum of the cluster terms of
//! total size `s` rooted at `i`. `A` and `B` are sums over compatible
//! families inside the ball, so the work per root is bounded by the number of
//! such families of total size at most `d`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::rc::Rc;

use num_complex::Complex64;

use super::PolymerTable;

const NONE: usize = usize::MAX;

/// Coefficients one root's memo may hold (16 bytes each). Past this, states
/// are recomputed rather than stored: same values, bounded memory.
const MEMO_COEFFICIENTS: usize = 1 << 22;

/// Per-worker buffers indexed by polymer; left clean after each root.
pub(crate) struct GradedScratch {
    dist: Vec<usize>,
    local: Vec<usize>,
    touched: Vec<usize>,
}

impl GradedScratch {
    pub fn new(n: usize) -> Self {
        GradedScratch {
            dist: vec![NONE; n],
            local: vec![NONE; n],
            touched: Vec::new(),
        }
    }
}

/// Coefficients `0..=budget` of the clusters rooted at `root`, and the number
/// of partial sums the graded partition functions were assembled from.
pub(crate) fn root_series<P>(
    table: &PolymerTable<P>,
    budget: usize,
    root: usize,
    scratch: &mut GradedScratch,
) -> (Vec<Complex64>, u64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; budget + 1];
    let w_root = table.weights[root];
    let s_root = table.sizes[root];
    if w_root == zero || s_root > budget {
        return (out, 0);
    }
    let ball = ball_around(table, budget, root, scratch);
    let depth = budget - s_root;

    // Ball positions follow table indices, so scanning a sorted list from
    // the end finds the largest position first.
    let last_after = |node: usize, pos: usize| {
        table.adjacency[node]
            .iter()
            .rev()
            .map(|&k| scratch.local[k])
            .find(|&l| l != NONE)
            .filter(|&l| pos == NONE || l > pos)
            .unwrap_or(NONE)
    };
    let mut last: Vec<usize> = ball.iter().enumerate().map(|(pos, &j)| last_after(j, pos)).collect();
    last.push(last_after(root, NONE));
    for &j in &ball {
        scratch.local[j] = NONE;
    }

    let mut ball_sums = BallSums::new(table, ball, root, last, depth);
    let b = ball_sums.suffix(0);
    let a = ball_sums.avoiding_root();

    // q = A / B; B has constant term 1.
    let mut q = vec![zero; depth + 1];
    for k in 0..=depth {
        let mut acc = a[k];
        for j in 1..=k {
            acc -= b[j] * q[k - j];
        }
        q[k] = acc;
    }
    let mut x = vec![zero; budget + 1];
    for k in 0..=depth {
        x[k + s_root] = w_root * q[k];
    }
    log_one_plus(&x, &mut out);
    (out, ball_sums.states + 1)
}

/// Truncated `log(1 + x)` for a series with `x_0 = 0`:
/// `k L_k = k x_k − Σ_{j<k} j L_j x_{k−j}`.
fn log_one_plus(x: &[Complex64], out: &mut [Complex64]) {
    for k in 1..x.len() {
        let mut acc = x[k] * k as f64;
        for j in 1..k {
            acc -= out[j] * x[k - j] * j as f64;
        }
        out[k] = acc / k as f64;
    }
}

/// Polymers with index above `root` and non-zero weight that reach `root`
/// through incompatibility paths of total size at most `budget`, in
/// increasing index order. Sets `scratch.local` to their positions.
fn ball_around<P>(table: &PolymerTable<P>, budget: usize, root: usize, scratch: &mut GradedScratch) -> Vec<usize> {
    let mut heap = BinaryHeap::new();
    scratch.dist[root] = table.sizes[root];
    scratch.touched.push(root);
    heap.push(Reverse((table.sizes[root], root)));
    while let Some(Reverse((d, j))) = heap.pop() {
        if d > scratch.dist[j] {
            continue;
        }
        for &k in &table.adjacency[j] {
            if k <= root || table.weights[k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let nd = d + table.sizes[k];
            if nd <= budget && nd < scratch.dist[k] {
                if scratch.dist[k] == NONE {
                    scratch.touched.push(k);
                }
                scratch.dist[k] = nd;
                heap.push(Reverse((nd, k)));
            }
        }
    }
    let mut ball: Vec<usize> = scratch.touched.drain(..).filter(|&j| j != root).collect();
    for &j in &ball {
        scratch.dist[j] = NONE;
    }
    scratch.dist[root] = NONE;
    ball.sort_unstable();
    for (pos, &j) in ball.iter().enumerate() {
        scratch.local[j] = pos;
    }
    ball
}

/// Graded partition functions of the ball, truncated at `depth`.
///
/// A state is a cursor `j`, a budget `d` and the *active* nodes: those
/// already taken (or the root) with a neighbour at or after `j`. Its value
/// is the sum over compatible families of total size at most `d` drawn from
/// nodes `j..` that avoid every active node's neighbours. Splitting on the
/// first node taken, only nodes up to the last neighbour of an active node
/// are constrained; the rest is the unconstrained suffix, tabulated once at
/// full depth. On hosts with local structure few nodes stay active, so
/// states are small and shared.
struct BallSums<'t, P> {
    table: &'t PolymerTable<P>,
    /// Table indices, increasing; position `n` stands for the root.
    ball: Vec<usize>,
    root: usize,
    /// Largest position of a neighbour after each node (`NONE` if none);
    /// entry `n` is the root's.
    last: Vec<usize>,
    depth: usize,
    /// `suffixes[j]` at full depth, filled from the end down to `ready`.
    suffixes: Vec<Rc<[Complex64]>>,
    ready: usize,
    /// Keyed by `[j, d, active…]`.
    memo: HashMap<Vec<u32>, Rc<[Complex64]>>,
    /// Coefficients and key words held by `memo`.
    stored: usize,
    states: u64,
}

impl<'t, P> BallSums<'t, P> {
    fn new(table: &'t PolymerTable<P>, ball: Vec<usize>, root: usize, last: Vec<usize>, depth: usize) -> Self {
        let n = ball.len();
        let mut one = vec![Complex64::new(0.0, 0.0); depth + 1];
        one[0] = Complex64::new(1.0, 0.0);
        let mut suffixes = vec![Rc::from(Vec::new()); n + 1];
        suffixes[n] = Rc::from(one);
        BallSums {
            table,
            ball,
            root,
            last,
            depth,
            suffixes,
            ready: n,
            memo: HashMap::new(),
            stored: 0,
            states: 0,
        }
    }

    fn size(&self, pos: usize) -> usize {
        self.table.sizes[self.ball[pos]]
    }

    fn weight(&self, pos: usize) -> Complex64 {
        self.table.weights[self.ball[pos]]
    }

    fn blocks(&self, active: u32, pos: usize) -> bool {
        let node = self.ball.get(active as usize).copied().unwrap_or(self.root);
        self.table.adjacency[node].binary_search(&self.ball[pos]).is_ok()
    }

    /// Families avoiding the root's neighbours.
    fn avoiding_root(&mut self) -> Rc<[Complex64]> {
        let root = self.ball.len();
        let mut key = vec![0, self.depth as u32];
        if self.last[root] != NONE {
            key.push(root as u32);
        }
        self.sum(key)
    }

    /// Families from nodes `j..` with nothing blocked, at full depth.
    fn suffix(&mut self, j: usize) -> Rc<[Complex64]> {
        while self.ready > j {
            let i = self.ready - 1;
            let mut s = self.suffixes[i + 1].to_vec();
            if self.size(i) <= self.depth {
                let rest = self.depth - self.size(i);
                let mut key = vec![(i + 1) as u32, rest as u32];
                if self.last[i] != NONE {
                    key.push(i as u32);
                }
                let tail = self.sum(key);
                add_shifted(&mut s, self.weight(i), self.size(i), &tail[..=rest]);
            }
            self.states += 1;
            self.suffixes[i] = Rc::from(s);
            self.ready = i;
        }
        self.suffixes[j].clone()
    }

    /// Value of the state `key = [j, d, active…]`; at least `d + 1`
    /// coefficients.
    fn sum(&mut self, key: Vec<u32>) -> Rc<[Complex64]> {
        let (j, d) = (key[0] as usize, key[1] as usize);
        let active = &key[2..];
        let Some(end) = active.iter().map(|&i| self.last[i as usize]).max() else {
            return self.suffix(j);
        };
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut s = self.suffix(end + 1)[..=d].to_vec();
        let mut next = Vec::new();
        for k in j..=end {
            if self.size(k) > d || active.iter().any(|&i| self.blocks(i, k)) {
                continue;
            }
            let rest = d - self.size(k);
            next.clear();
            next.extend([(k + 1) as u32, rest as u32]);
            next.extend(active.iter().copied().filter(|&i| self.last[i as usize] > k));
            if self.last[k] != NONE {
                let pos = next[2..].partition_point(|&i| i < k as u32) + 2;
                next.insert(pos, k as u32);
            }
            let tail = match self.memo.get(&next) {
                Some(hit) => hit.clone(),
                None => self.sum(next.clone()),
            };
            add_shifted(&mut s, self.weight(k), self.size(k), &tail[..=rest]);
        }
        self.states += 1;
        let s: Rc<[Complex64]> = Rc::from(s);
        let cost = s.len() + key.len().div_ceil(4);
        if self.stored + cost <= MEMO_COEFFICIENTS {
            self.stored += cost;
            self.memo.insert(key, s.clone());
        }
        s
    }
}

/// `s[i + shift] += w · tail[i]`.
fn add_shifted(s: &mut [Complex64], w: Complex64, shift: usize, tail: &[Complex64]) {
    for (i, t) in tail.iter().enumerate() {
        s[i + shift] += w * t;
    }
}
