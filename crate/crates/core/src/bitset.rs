//! Fixed-width bitsets over `u64` words.

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn contains(set: &[u64], i: usize) -> bool {
    set[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
pub(crate) fn insert(set: &mut [u64], i: usize) {
    set[i >> 6] |= 1 << (i & 63);
}

#[inline]
pub(crate) fn remove(set: &mut [u64], i: usize) {
    set[i >> 6] &= !(1 << (i & 63));
}

pub(crate) fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn is_empty(set: &[u64]) -> bool {
    set.iter().all(|&w| w == 0)
}

pub(crate) fn and_assign(set: &mut [u64], other: &[u64]) {
    for (a, b) in set.iter_mut().zip(other) {
        *a &= b;
    }
}

pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Clears bits at positions `>= n`.
pub(crate) fn trim(set: &mut [u64], n: usize) {
    let full = n / 64;
    let rem = n % 64;
    if rem != 0 {
        set[full] &= (1u64 << rem) - 1;
    }
    for w in set.iter_mut().skip(full + usize::from(rem != 0)) {
        *w = 0;
    }
}

#[cfg(test)]
pub(crate) fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut set = vec![0; words_for(n)];
    for i in idx {
        insert(&mut set, i);
    }
    set
}

/// Smallest set bit.
pub(crate) fn first(set: &[u64]) -> Option<usize> {
    set.iter().position(|&w| w != 0).map(|w| w * 64 + set[w].trailing_zeros() as usize)
}

/// Ascending iterator over set bits.
pub(crate) fn ones(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = from_indices(130, [0, 63, 64, 129]);
        assert_eq!(ones(&s).collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        remove(&mut s, 63);
        assert!(!contains(&s, 63));
        assert_eq!(count(&s), 3);
        let mut all = vec![u64::MAX; words_for(130)];
        trim(&mut all, 130);
        assert_eq!(count(&all), 130);
        assert_eq!(and_count(&all, &s), 3);
    }
}
