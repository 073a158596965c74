use std::fmt;

use crate::elemset::ElemSet;

/// An injective partial map on `{0, .., size-1}`, stored as one optional
/// target per point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialBijection {
    map: Vec<Option<u32>>,
}

impl PartialBijection {
    /// Returns `None` if two points share a target or a target is out of
    /// range.
    pub fn new(map: Vec<Option<u32>>) -> Option<Self> {
        let mut seen = vec![false; map.len()];
        for &y in map.iter().flatten() {
            let y = y as usize;
            if y >= map.len() || std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(PartialBijection { map })
    }

    pub fn empty(size: usize) -> Self {
        PartialBijection { map: vec![None; size] }
    }

    pub fn identity_on(set: &ElemSet) -> Self {
        PartialBijection { map: (0..set.universe()).map(|x| set.contains(x).then_some(x as u32)).collect() }
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map[x].map(|y| y as usize)
    }

    pub fn targets(&self) -> &[Option<u32>] {
        &self.map
    }

    pub fn domain(&self) -> ElemSet {
        ElemSet::from_iter(self.size(), (0..self.size()).filter(|&x| self.map[x].is_some()))
    }

    pub fn range(&self) -> ElemSet {
        ElemSet::from_iter(self.size(), self.map.iter().flatten().map(|&y| y as usize))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PartialBijection) -> PartialBijection {
        debug_assert_eq!(self.size(), other.size());
        PartialBijection { map: other.map.iter().map(|y| y.and_then(|y| self.map[y as usize])).collect() }
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut map = vec![None; self.size()];
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = y {
                map[*y as usize] = Some(x as u32);
            }
        }
        PartialBijection { map }
    }

    /// Image of a set of points (points outside the domain are dropped).
    pub fn image(&self, set: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.size(), set.iter().filter_map(|x| self.get(x)))
    }

    /// Restriction order: `self` is a restriction of `other`.
    pub fn leq(&self, other: &PartialBijection) -> bool {
        self.map.iter().zip(&other.map).all(|(a, b)| a.is_none() || a == b)
    }

    pub fn is_partial_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, y)| y.is_none_or(|y| y as usize == x))
    }

    /// Keeps only the points of `set` in the domain.
    pub fn restrict_domain(&self, set: &ElemSet) -> PartialBijection {
        PartialBijection {
            map: self.map.iter().enumerate().map(|(x, &y)| y.filter(|_| set.contains(x))).collect(),
        }
    }
}

/// `{0->1, 2->0}`
impl fmt::Debug for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = y {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{x}->{y}")?;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
