//! Digit strings and the two significance conventions.
//!
//! Output digits `σ_1..σ_n` are most-significant first,
//! `s = Σ d^{n-k} σ_k`; input digits `τ_1..τ_n` are least-significant first,
//! `t = Σ d^{k-1} τ_k`. The transform is low-rank only with this pairing, so
//! every digit string carries its convention.

use crate::error::{arg, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignificanceOrder {
    /// Site 1 carries the least significant digit (input side, `τ`).
    LsbFirst,
    /// Site 1 carries the most significant digit (output side, `σ`).
    MsbFirst,
}

impl SignificanceOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LsbFirst => "LSB_FIRST",
            Self::MsbFirst => "MSB_FIRST",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "LSB_FIRST" => Ok(Self::LsbFirst),
            "MSB_FIRST" => Ok(Self::MsbFirst),
            other => arg(format!("unknown significance order {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString {
    digits: Vec<usize>,
    d: usize,
    order: SignificanceOrder,
}

impl BitString {
    pub fn new(digits: Vec<usize>, d: usize, order: SignificanceOrder) -> Result<Self> {
        if d < 2 {
            return arg(format!("digit base must be at least 2, got {d}"));
        }
        if let Some(pos) = digits.iter().position(|&x| x >= d) {
            return arg(format!(
                "digit {} at position {} is out of range for base {d}",
                digits[pos],
                pos + 1
            ));
        }
        Ok(Self { digits, d, order })
    }

    /// Output-side string `σ`.
    pub fn msb_first(digits: Vec<usize>, d: usize) -> Result<Self> {
        Self::new(digits, d, SignificanceOrder::MsbFirst)
    }

    /// Input-side string `τ`.
    pub fn lsb_first(digits: Vec<usize>, d: usize) -> Result<Self> {
        Self::new(digits, d, SignificanceOrder::LsbFirst)
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn base(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> SignificanceOrder {
        self.order
    }

    pub fn to_index(&self) -> usize {
        digits_to_index(self)
    }

    pub(crate) fn expect(&self, n: usize, d: usize, order: SignificanceOrder) -> Result<()> {
        if self.order != order {
            return Err(Error::Convention {
                expected: order,
                found: self.order,
            });
        }
        if self.d != d || self.digits.len() != n {
            return arg(format!(
                "expected {n} digits in base {d}, got {} in base {}",
                self.digits.len(),
                self.d
            ));
        }
        Ok(())
    }
}

pub(crate) fn checked_pow(d: usize, n: usize) -> Option<usize> {
    u32::try_from(n).ok().and_then(|n| d.checked_pow(n))
}

/// Expands `index < d^n` into `n` base-`d` digits under `order`.
pub fn index_to_digits(
    index: usize,
    n: usize,
    d: usize,
    order: SignificanceOrder,
) -> Result<BitString> {
    if d < 2 {
        return arg(format!("digit base must be at least 2, got {d}"));
    }
    if let Some(size) = checked_pow(d, n) {
        if index >= size {
            return arg(format!("index {index} is out of range for {d}^{n}"));
        }
    }
    let mut digits = vec![0; n];
    let mut rest = index;
    for k in 0..n {
        let slot = match order {
            SignificanceOrder::LsbFirst => k,
            SignificanceOrder::MsbFirst => n - 1 - k,
        };
        digits[slot] = rest % d;
        rest /= d;
    }
    Ok(BitString { digits, d, order })
}

pub fn digits_to_index(bits: &BitString) -> usize {
    let fold = |acc: usize, &x: &usize| acc * bits.d + x;
    match bits.order {
        SignificanceOrder::MsbFirst => bits.digits.iter().fold(0, fold),
        SignificanceOrder::LsbFirst => bits.digits.iter().rev().fold(0, fold),
    }
}

/// Reverses the base-`d` digit order of every index: `out[rev(i)] = v[i]`.
pub fn digit_reverse_permute<T: Copy>(v: &[T], d: usize) -> Result<Vec<T>> {
    let n = exponent_of(v.len(), d)?;
    let mut out = v.to_vec();
    for (i, &x) in v.iter().enumerate() {
        let mut rest = i;
        let mut rev = 0;
        for _ in 0..n {
            rev = rev * d + rest % d;
            rest /= d;
        }
        out[rev] = x;
    }
    Ok(out)
}

/// `n` such that `len == d^n`.
pub fn exponent_of(len: usize, d: usize) -> Result<usize> {
    if d < 2 {
        return arg(format!("digit base must be at least 2, got {d}"));
    }
    let mut n = 0;
    let mut size = 1usize;
    while size < len {
        size = size.saturating_mul(d);
        n += 1;
    }
    if size != len {
        return arg(format!("length {len} is not a power of {d}"));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignificanceOrder::*;

    #[test]
    fn expansions() {
        assert_eq!(
            index_to_digits(6, 3, 2, MsbFirst).unwrap().digits(),
            &[1, 1, 0]
        );
        assert_eq!(
            index_to_digits(6, 3, 2, LsbFirst).unwrap().digits(),
            &[0, 1, 1]
        );
        assert_eq!(
            index_to_digits(5, 2, 3, MsbFirst).unwrap().digits(),
            &[1, 2]
        );
        assert!(index_to_digits(8, 3, 2, MsbFirst).is_err());
    }

    #[test]
    fn round_trip_all_indices() {
        for d in [2usize, 3] {
            for n in 0..=10 {
                let size = d.pow(n as u32);
                if size > 1 << 12 {
                    continue;
                }
                for s in 0..size {
                    for order in [LsbFirst, MsbFirst] {
                        let b = index_to_digits(s, n, d, order).unwrap();
                        assert_eq!(digits_to_index(&b), s);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_digits() {
        assert!(BitString::msb_first(vec![0, 2], 2).is_err());
        assert!(BitString::lsb_first(vec![0, 1], 1).is_err());
    }

    #[test]
    fn reversal_is_an_involution() {
        let v: Vec<usize> = (0..27).collect();
        let r = digit_reverse_permute(&v, 3).unwrap();
        assert_eq!(r[1], 9);
        assert_eq!(digit_reverse_permute(&r, 3).unwrap(), v);
        assert!(digit_reverse_permute(&v[..10], 3).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent_of(1, 2).unwrap(), 0);
        assert_eq!(exponent_of(256, 2).unwrap(), 8);
        assert_eq!(exponent_of(81, 3).unwrap(), 4);
        assert!(exponent_of(12, 2).is_err());
    }
}
