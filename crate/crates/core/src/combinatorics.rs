use thiserror::Error;

/// Largest `c` for which every `count_subsets(c, p)` is accepted.
pub const MAX_SET_SIZE: u64 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("invalid subset size: {p} > {c}")]
    InvalidSubsetSize { c: u64, p: u64 },
    #[error("set size {c} exceeds the exact 64-bit limit of {max}")]
    Overflow { c: u64, max: u64 },
}

/// Number of `p`-element subsets of a `c`-element set.
///
/// Evaluated as a running product `r = r * (c - k + i) / i` with `k = min(p, c - p)`,
/// so each intermediate is itself a binomial coefficient and the division is exact.
pub fn count_subsets(c: u64, p: u64) -> Result<u64, CombinatoricsError> {
    if p > c {
        return Err(CombinatoricsError::InvalidSubsetSize { c, p });
    }
    if c > MAX_SET_SIZE {
        return Err(CombinatoricsError::Overflow {
            c,
            max: MAX_SET_SIZE,
        });
    }
    let k = p.min(c - p);
    let mut result: u128 = 1;
    for i in 1..=k {
        // C(c-k+i-1, i-1) * (c-k+i) fits u128 easily for c <= 62
        result = result * u128::from(c - k + i) / u128::from(i);
    }
    Ok(u64::try_from(result).expect("C(62, k) fits in u64"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_choose_five() {
        assert_eq!(count_subsets(11, 5), Ok(462));
    }

    #[test]
    fn empty_and_full_subsets() {
        for n in 0..=MAX_SET_SIZE {
            assert_eq!(count_subsets(n, 0), Ok(1));
            assert_eq!(count_subsets(n, n), Ok(1));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            count_subsets(3, 4),
            Err(CombinatoricsError::InvalidSubsetSize { c: 3, p: 4 })
        );
        assert_eq!(
            count_subsets(63, 1),
            Err(CombinatoricsError::Overflow { c: 63, max: 62 })
        );
    }

    #[test]
    fn largest_supported_value() {
        // C(62, 31), from the Pascal recurrence in tests/combinatorics.rs
        assert_eq!(count_subsets(62, 31), Ok(465_428_353_255_261_088));
    }
}
