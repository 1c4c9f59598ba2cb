//! Permutations of the four vertices of a tetrahedron.

use std::fmt;
use std::str::FromStr;

/// A permutation of `{0, 1, 2, 3}` stored by images: `p.apply(i) == images[i]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

/// All 24 permutations in lexicographic order of their image words.
pub const S4: [Perm4; 24] = {
    let mut out = [Perm4([0, 1, 2, 3]); 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let d = 6 - a - b - c;
                if a != b && a != c && b != c && d < 4 && d != a && d != b && d != c {
                    out[k] = Perm4([a as u8, b as u8, c as u8, d as u8]);
                    k += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its image word, rejecting non-bijections.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Self {
        let mut images = [0u8, 1, 2, 3];
        images.swap(a, b);
        Perm4(images)
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for i in 0..4 {
            inv[self.0[i] as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(self, other: Perm4) -> Self {
        Perm4([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
            self.0[other.0[3] as usize],
        ])
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(self) -> bool {
        self.sign() == 1
    }

    /// Position of this permutation in [`S4`].
    pub fn index(self) -> usize {
        // Lehmer code.
        let mut idx = 0;
        let fact = [6, 2, 1, 1];
        for i in 0..4 {
            let smaller = (i + 1..4).filter(|&j| self.0[j] < self.0[i]).count();
            idx += smaller * fact[i];
        }
        idx
    }

    pub fn from_index(idx: usize) -> Option<Self> {
        S4.get(idx).copied()
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

impl FromStr for Perm4 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(format!("permutation word `{s}` must have 4 characters"));
        }
        let mut images = [0u8; 4];
        for (slot, &b) in images.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(&b) {
                return Err(format!("permutation word `{s}` has a character outside 0-3"));
            }
            *slot = b - b'0';
        }
        Perm4::new(images).ok_or_else(|| format!("permutation word `{s}` is not a bijection"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s4_is_sorted_and_indexed() {
        for (k, p) in S4.iter().enumerate() {
            assert_eq!(p.index(), k);
            assert_eq!(Perm4::from_index(k), Some(*p));
        }
        assert!(S4.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn compose_and_inverse() {
        for p in S4 {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            for q in S4 {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
                assert_eq!(p.compose(q).apply(2), p.apply(q.apply(2)));
            }
        }
        assert_eq!(S4.iter().filter(|p| p.is_even()).count(), 12);
    }

    #[test]
    fn parse_words() {
        assert_eq!("0132".parse::<Perm4>().unwrap(), Perm4::transposition(2, 3));
        assert!("0112".parse::<Perm4>().is_err());
        assert!("012".parse::<Perm4>().is_err());
        assert!("0124".parse::<Perm4>().is_err());
    }
}
