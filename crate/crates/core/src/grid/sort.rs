//! Stable merge sort whose merge gallops from the top of the two runs.
//!
//! Each merge repeatedly compares the two largest remaining elements and
//! moves the whole run of the winning list that dominates the other top in
//! one exponential-then-binary search. A block boundary therefore costs
//! logarithmically many comparisons instead of one per element.

use std::cmp::Ordering;

/// Comparison counts for one level of the merge tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub comparisons: u64,
    /// Largest number of comparisons any single element took part in.
    pub max_per_element: u64,
}

/// Per-level statistics, bottom level first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SortStats {
    pub levels: Vec<LevelStats>,
}

impl SortStats {
    pub fn total(&self) -> u64 {
        self.levels.iter().map(|l| l.comparisons).sum()
    }
}

struct Counter<'a, T, F> {
    items: &'a [T],
    cmp: F,
    per_element: Vec<u64>,
    total: u64,
}

impl<T, F: FnMut(&T, &T) -> Ordering> Counter<'_, T, F> {
    fn compare(&mut self, a: usize, b: usize) -> Ordering {
        self.per_element[a] += 1;
        self.per_element[b] += 1;
        self.total += 1;
        (self.cmp)(&self.items[a], &self.items[b])
    }

    fn reset(&mut self) -> LevelStats {
        let s = LevelStats {
            comparisons: self.total,
            max_per_element: self.per_element.iter().copied().max().unwrap_or(0),
        };
        self.total = 0;
        self.per_element.iter_mut().for_each(|c| *c = 0);
        s
    }
}

/// Number of elements `t`, read from the top of `run`, for which `keep(t)`
/// holds. `keep` must be monotone along the run and hold for the top.
fn gallop<K: FnMut(usize) -> bool>(run: &[usize], mut keep: K) -> usize {
    let n = run.len();
    let mut lo = 1;
    let mut hi = n + 1;
    let mut off = 2;
    while off <= n {
        if keep(run[n - off]) {
            lo = off;
            off *= 2;
        } else {
            hi = off;
            break;
        }
    }
    if off > n {
        hi = n + 1;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if keep(run[n - mid]) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn merge_galloping<T, F: FnMut(&T, &T) -> Ordering>(
    a: &[usize],
    b: &[usize],
    c: &mut Counter<'_, T, F>,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 && j > 0 {
        let (ta, tb) = (a[i - 1], b[j - 1]);
        if c.compare(ta, tb) == Ordering::Greater {
            // strict: equal elements of b stay above those of a
            let k = gallop(&a[..i], |t| c.compare(t, tb) == Ordering::Greater);
            out.extend(a[i - k..i].iter().rev());
            i -= k;
        } else {
            let k = gallop(&b[..j], |t| c.compare(t, ta) != Ordering::Less);
            out.extend(b[j - k..j].iter().rev());
            j -= k;
        }
    }
    out.extend(a[..i].iter().rev());
    out.extend(b[..j].iter().rev());
    out.reverse();
    out
}

fn merge_naive<T, F: FnMut(&T, &T) -> Ordering>(
    a: &[usize],
    b: &[usize],
    c: &mut Counter<'_, T, F>,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 && j > 0 {
        if c.compare(a[i - 1], b[j - 1]) == Ordering::Greater {
            out.push(a[i - 1]);
            i -= 1;
        } else {
            out.push(b[j - 1]);
            j -= 1;
        }
    }
    out.extend(a[..i].iter().rev());
    out.extend(b[..j].iter().rev());
    out.reverse();
    out
}

fn sort_impl<T: Clone, F: FnMut(&T, &T) -> Ordering>(
    items: &[T],
    cmp: F,
    galloping: bool,
) -> (Vec<T>, SortStats) {
    let n = items.len();
    let mut c = Counter {
        items,
        cmp,
        per_element: vec![0; n],
        total: 0,
    };
    let mut runs: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut stats = SortStats::default();
    while runs.len() > 1 {
        let mut next = Vec::with_capacity(runs.len().div_ceil(2));
        let mut it = runs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(if galloping {
                    merge_galloping(&a, &b, &mut c)
                } else {
                    merge_naive(&a, &b, &mut c)
                }),
                None => next.push(a),
            }
        }
        runs = next;
        stats.levels.push(c.reset());
    }
    let order = runs.pop().unwrap_or_default();
    (order.into_iter().map(|i| items[i].clone()).collect(), stats)
}

/// Stable galloping merge sort with comparison instrumentation.
pub fn merge_sort_by<T: Clone, F: FnMut(&T, &T) -> Ordering>(items: &[T], cmp: F) -> (Vec<T>, SortStats) {
    sort_impl(items, cmp, true)
}

/// The same merge tree with the textbook one-comparison-per-output merge.
pub fn naive_merge_sort_by<T: Clone, F: FnMut(&T, &T) -> Ordering>(
    items: &[T],
    cmp: F,
) -> (Vec<T>, SortStats) {
    sort_impl(items, cmp, false)
}
