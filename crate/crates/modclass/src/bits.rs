/// Fixed-length bit set over element indices 0..len.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; (len + 63) / 64],
        }
    }

    pub fn singleton(len: usize, i: usize) -> Self {
        let mut b = Bits::new(len);
        b.set(i);
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] & (1u64 << (i & 63)) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1u64 << (i & 63);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        Bits {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// True when the intersection contains an index other than 0.
    pub fn meets_nontrivially(&self, other: &Bits) -> bool {
        for (k, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut w = a & b;
            if k == 0 {
                w &= !1u64;
            }
            if w != 0 {
                return true;
            }
        }
        false
    }

    /// True when the intersection is exactly {0}.
    pub fn intersects_only_zero(&self, other: &Bits) -> bool {
        !self.meets_nontrivially(other)
    }

    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().map(|i| i as u32).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = Bits::new(130);
        a.set(0);
        a.set(5);
        a.set(129);
        assert_eq!(a.count(), 3);
        assert!(a.get(129));
        assert_eq!(a.to_vec(), vec![0, 5, 129]);
        let b = Bits::singleton(130, 5);
        assert!(a.meets_nontrivially(&b));
        let z = Bits::singleton(130, 0);
        assert!(a.intersects_only_zero(&z));
        assert!(z.is_subset_of(&a));
    }
}
