use crate::word::Word;

/// Whether every pair of factors of equal length `m <= max_factor_len`
/// contains numbers of `1`s differing by at most one.
pub fn check_balanced(word: &Word, max_factor_len: usize) -> bool {
    let symbols = word.symbols();
    let mut prefix = Vec::with_capacity(symbols.len() + 1);
    prefix.push(0u32);
    let mut ones = 0u32;
    for &s in symbols {
        ones += u32::from(s);
        prefix.push(ones);
    }
    let longest = max_factor_len.min(symbols.len());
    (1..=longest).all(|m| {
        let (mut lo, mut hi) = (u32::MAX, 0u32);
        for (start, end) in prefix.iter().zip(&prefix[m..]) {
            let count = end - start;
            lo = lo.min(count);
            hi = hi.max(count);
        }
        hi - lo <= 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert!(check_balanced(&w("01001010"), 4));
        assert!(!check_balanced(&w("0011"), 2));
        assert!(check_balanced(&w("0011"), 1));
        assert!(check_balanced(&w(""), 3));
    }

    /// Every factor pair compared directly.
    fn brute_force(word: &Word, max_len: usize) -> bool {
        let s = word.symbols();
        (1..=max_len.min(s.len())).all(|m| {
            let counts: Vec<u32> = s
                .windows(m)
                .map(|f| f.iter().map(|&x| u32::from(x)).sum())
                .collect();
            counts
                .iter()
                .all(|x| counts.iter().all(|y| x.abs_diff(*y) <= 1))
        })
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(bits in proptest::collection::vec(0u8..2, 0..40), max in 1usize..12) {
            let word = Word::new(bits).unwrap();
            proptest::prop_assert_eq!(check_balanced(&word, max), brute_force(&word, max));
        }
    }
}
