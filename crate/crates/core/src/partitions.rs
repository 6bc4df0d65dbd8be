//! Set partitions as restricted growth strings.
//!
//! A partition of positions 0..m is encoded by `labels[i]` = block of `i`,
//! with blocks numbered by first appearance (labels[0] = 0 and each new label
//! is one more than the current maximum).

/// Calls `visit(labels, block_count)` for every set partition of `m` points.
pub fn for_each_set_partition<F>(m: usize, mut visit: F)
where
    F: FnMut(&[usize], usize),
{
    if m == 0 {
        visit(&[], 0);
        return;
    }
    let mut labels = vec![0usize; m];
    let mut maxes = vec![0usize; m]; // max label among labels[..=i]
    loop {
        visit(&labels, maxes[m - 1] + 1);
        // Find rightmost position that can be incremented.
        let mut i = m - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] <= maxes[i - 1] {
                break;
            }
            i -= 1;
        }
        labels[i] += 1;
        maxes[i] = maxes[i - 1].max(labels[i]);
        for j in i + 1..m {
            labels[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_set_partition(m, |l, _| out.push(l.to_vec()));
    out
}

/// No a < b < c < d with a, c in one block and b, d in another.
pub fn is_non_crossing(labels: &[usize]) -> bool {
    let n = labels.len();
    for a in 0..n {
        for b in a + 1..n {
            if labels[b] == labels[a] {
                continue;
            }
            for c in b + 1..n {
                if labels[c] != labels[a] {
                    continue;
                }
                for d in c + 1..n {
                    if labels[d] == labels[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Block sizes in order of block label.
pub fn block_sizes(labels: &[usize], blocks: usize) -> Vec<usize> {
    let mut sizes = vec![0; blocks];
    for &l in labels {
        sizes[l] += 1;
    }
    sizes
}

pub fn catalan(k: u32) -> u64 {
    (0..k).fold(1u64, |c, i| c * 2 * (2 * i as u64 + 1) / (i as u64 + 2))
}

/// (2k - 1)!!, with (-1)!! = 1.
pub fn double_factorial_odd(k: u32) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc * (2 * i as u64 - 1))
}
