//! Partitions of a player count into `k` strategy counts, in lexicographic order.

/// Number of partitions of `total` into `k` ordered non-negative parts, `C(total + k - 1, k - 1)`.
pub fn partition_count(total: usize, k: usize) -> usize {
    if k == 0 {
        return usize::from(total == 0);
    }
    let mut acc: u128 = 1;
    for i in 1..k {
        acc = acc * (total + i) as u128 / i as u128;
    }
    acc as usize
}

/// All `(x_1, ..., x_k)` with `x_j >= 0` and `sum = total`, ascending lexicographically.
pub fn partitions(total: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(partition_count(total, k));
    if k == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0; k];
    fill(total, 0, &mut cur, &mut out);
    out
}

fn fill(rest: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rest {
        cur[pos] = v;
        fill(rest - v, pos + 1, cur, out);
    }
}

/// Position of `x` in a lexicographically sorted partition list.
pub fn rank(list: &[Vec<usize>], x: &[usize]) -> Option<usize> {
    list.binary_search_by(|p| p.as_slice().cmp(x)).ok()
}
