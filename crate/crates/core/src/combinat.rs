//! Internal helpers for subset enumeration and capped binomial counting.

/// `C(m, k)` when it does not exceed `cap`, `None` otherwise.
pub(crate) fn binomial_at_most(m: u64, k: u64, cap: u64) -> Option<u64> {
    if k > m {
        return Some(0);
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // Exact at every step: acc holds C(m, i) and (i+1) divides acc*(m-i).
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Visits every k-subset of `0..m` in lexicographic order, passing the index
/// slice to `visit`. Enumeration stops early when `visit` returns `false`;
/// the return value tells whether the walk ran to completion.
pub(crate) fn for_each_combination<F>(m: usize, k: usize, mut visit: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k > m {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return false;
        }
        // Advance the rightmost index that still has room.
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_at_most(32, 2, u64::MAX), Some(496));
        assert_eq!(binomial_at_most(32, 0, u64::MAX), Some(1));
        assert_eq!(binomial_at_most(32, 32, u64::MAX), Some(1));
        assert_eq!(binomial_at_most(5, 7, u64::MAX), Some(0));
        assert_eq!(binomial_at_most(32, 3, 2000), None);
        assert_eq!(binomial_at_most(64, 32, u64::MAX), Some(1_832_624_140_942_590_534));
    }

    #[test]
    fn combinations_visit_all_in_lex_order() {
        let mut seen = Vec::new();
        assert!(for_each_combination(5, 3, |ix| {
            seen.push(ix.to_vec());
            true
        }));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen.first().unwrap(), &vec![0, 1, 2]);
        assert_eq!(seen.last().unwrap(), &vec![2, 3, 4]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted, "lexicographic order");
    }

    #[test]
    fn combinations_empty_and_full() {
        let mut count = 0;
        for_each_combination(4, 0, |ix| {
            assert!(ix.is_empty());
            count += 1;
            true
        });
        assert_eq!(count, 1);
        let mut full = Vec::new();
        for_each_combination(3, 3, |ix| {
            full = ix.to_vec();
            true
        });
        assert_eq!(full, vec![0, 1, 2]);
    }

    #[test]
    fn combinations_early_exit() {
        let mut count = 0;
        let finished = for_each_combination(6, 2, |_| {
            count += 1;
            count < 4
        });
        assert!(!finished);
        assert_eq!(count, 4);
    }
}
