//! Finite inverse semigroups given by Cayley tables.
//!
//! Elements are dense ids `0..n`. A table is accepted only after checking
//! associativity, existence and uniqueness of generalized inverses, and
//! commutation of idempotents; the inverse table is computed during that
//! validation and cached.

use std::fmt::Write as _;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::par;

/// Element id.
pub type Elem = usize;

/// Largest table the exhaustive validator accepts unless told otherwise.
pub const DEFAULT_VALIDATION_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSemigroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    names: Option<Vec<String>>,
    idempotents: ElemSet,
}

impl InverseSemigroup {
    /// Validates a row-major `n*n` table with the default size cap.
    pub fn from_table(n: usize, table: Vec<u32>, names: Option<Vec<String>>) -> Result<Self> {
        Self::from_table_with_cap(n, table, names, DEFAULT_VALIDATION_CAP)
    }

    pub fn from_table_with_cap(
        n: usize,
        table: Vec<u32>,
        names: Option<Vec<String>>,
        cap: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse(1, "semigroup must have at least one element"));
        }
        if n > cap {
            return Err(Error::TooLarge { what: "semigroup for validation", size: n as u128, cap: cap as u128 });
        }
        check_shape(n, &table, names.as_deref())?;

        let at = |a: usize, b: usize| table[a * n + b] as usize;

        // associativity, first witness in lexicographic order
        if let Some((a, b, c)) = par::find_first(n, |a| {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        }) {
            return Err(Error::NotAssociative { a, b, c });
        }

        let candidates: Vec<Vec<usize>> = par::map_range(n, |s| {
            (0..n)
                .filter(|&x| at(at(s, x), s) == s && at(at(x, s), x) == x)
                .take(2)
                .collect()
        });
        let mut inv = Vec::with_capacity(n);
        for (s, c) in candidates.iter().enumerate() {
            if c.len() != 1 {
                let count = if c.is_empty() {
                    0
                } else {
                    (0..n).filter(|&x| at(at(s, x), s) == s && at(at(x, s), x) == x).count()
                };
                return Err(Error::NotInverse { elem: s, candidates: count });
            }
            inv.push(c[0] as u32);
        }

        let idem: Vec<usize> = (0..n).filter(|&e| at(e, e) == e).collect();
        for (i, &e) in idem.iter().enumerate() {
            for &f in &idem[i + 1..] {
                if at(e, f) != at(f, e) {
                    return Err(Error::IdempotentsDontCommute { e, f });
                }
            }
        }

        Ok(Self::assemble(n, table, inv, names))
    }

    /// Builds a semigroup whose table and inverses are known to be correct by
    /// construction. Only shape is checked.
    pub(crate) fn from_trusted_parts(
        n: usize,
        table: Vec<u32>,
        inv: Vec<u32>,
        names: Option<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(table.len(), n * n);
        debug_assert_eq!(inv.len(), n);
        Self::assemble(n, table, inv, names)
    }

    fn assemble(n: usize, table: Vec<u32>, inv: Vec<u32>, names: Option<Vec<String>>) -> Self {
        let idempotents = ElemSet::from_iter(n, (0..n).filter(|&e| table[e * n + e] as usize == e));
        InverseSemigroup { n, table, inv, names, idempotents }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    #[inline]
    pub fn product(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inverse(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    /// `a a*`
    #[inline]
    pub fn range_idempotent(&self, a: Elem) -> Elem {
        self.product(a, self.inverse(a))
    }

    /// `a* a`
    #[inline]
    pub fn domain_idempotent(&self, a: Elem) -> Elem {
        self.product(self.inverse(a), a)
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_names(self.n, &names)?;
        self.names = Some(names);
        Ok(self)
    }

    /// Display name, falling back to the numeric id.
    pub fn name(&self, a: Elem) -> String {
        match &self.names {
            Some(ns) => ns[a].clone(),
            None => a.to_string(),
        }
    }

    /// Looks an element up by name, then by numeric id.
    pub fn find(&self, token: &str) -> Option<Elem> {
        if let Some(ns) = &self.names {
            if let Some(i) = ns.iter().position(|x| x == token) {
                return Some(i);
            }
        }
        token.parse::<usize>().ok().filter(|&i| i < self.n)
    }

    /// Renders a subset as `{a,b,c}` using element names.
    pub fn set_name(&self, set: &ElemSet) -> String {
        let parts: Vec<String> = set.iter().map(|a| self.name(a)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn idempotents(&self) -> &ElemSet {
        &self.idempotents
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.idempotents.contains(a)
    }

    /// Natural partial order `a <= b`, computed both as `a = b a*a` and
    /// `a = aa* b`.
    pub fn natural_leq(&self, a: Elem, b: Elem) -> Result<bool> {
        let right = self.product(b, self.domain_idempotent(a)) == a;
        let left = self.product(self.range_idempotent(a), b) == a;
        if right != left {
            return Err(Error::InternalInconsistency(format!(
                "order characterizations disagree for ({a}, {b})"
            )));
        }
        Ok(right)
    }

    /// `natural_leq` for callers that already trust the table.
    #[inline]
    pub(crate) fn leq(&self, a: Elem, b: Elem) -> bool {
        self.product(b, self.domain_idempotent(a)) == a
    }

    pub fn is_e_unitary(&self) -> bool {
        self.e_unitary_witness().is_none()
    }

    /// A pair `(e, s)` with `e` and `es` idempotent but `s` not.
    pub fn e_unitary_witness(&self) -> Option<(Elem, Elem)> {
        for e in self.idempotents.iter() {
            for s in 0..self.n {
                if !self.is_idempotent(s) && self.is_idempotent(self.product(e, s)) {
                    return Some((e, s));
                }
            }
        }
        None
    }

    pub fn is_semilattice(&self) -> bool {
        self.idempotents.len() == self.n
    }

    /// Whether `set` is an `e`-set: it contains `e` and `ss* = e` for all
    /// of its members.
    pub fn is_e_set(&self, set: &ElemSet, e: Elem) -> Result<bool> {
        if !self.is_idempotent(e) {
            return Err(Error::NotIdempotent(e));
        }
        Ok(set.contains(e) && set.iter().all(|s| self.range_idempotent(s) == e))
    }

    /// The sub-semigroup on `members`, relabelled densely in increasing id
    /// order. Fails if `members` is not closed under products and inverses.
    pub fn subsemigroup(&self, members: &ElemSet) -> Result<InverseSemigroup> {
        let ids: Vec<Elem> = members.iter().collect();
        if ids.is_empty() {
            return Err(Error::PropertyViolation("empty subsemigroup".into()));
        }
        let mut relabel = vec![u32::MAX; self.n];
        for (i, &a) in ids.iter().enumerate() {
            relabel[a] = i as u32;
        }
        let m = ids.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &ids {
            for &b in &ids {
                let ab = self.product(a, b);
                if relabel[ab] == u32::MAX {
                    return Err(Error::PropertyViolation(format!(
                        "{}*{} = {} leaves the subset",
                        self.name(a),
                        self.name(b),
                        self.name(ab)
                    )));
                }
                table.push(relabel[ab]);
            }
        }
        let mut inv = Vec::with_capacity(m);
        for &a in &ids {
            let ai = self.inverse(a);
            if relabel[ai] == u32::MAX {
                return Err(Error::PropertyViolation(format!("inverse of {} leaves the subset", self.name(a))));
            }
            inv.push(relabel[ai]);
        }
        let names = self.names.as_ref().map(|ns| ids.iter().map(|&a| ns[a].clone()).collect());
        Ok(InverseSemigroup::from_trusted_parts(m, table, inv, names))
    }

    /// The idempotent semilattice `E(S)` as a semigroup in its own right.
    pub fn idempotent_semilattice(&self) -> InverseSemigroup {
        self.subsemigroup(&self.idempotents)
            .expect("idempotents of an inverse semigroup form a subsemigroup")
    }

    /// Parses the plain-text Cayley document and validates it.
    pub fn parse_cayley(text: &str) -> Result<Self> {
        Self::parse_cayley_with_cap(text, DEFAULT_VALIDATION_CAP)
    }

    pub fn parse_cayley_with_cap(text: &str, cap: usize) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (lno, first) = lines.next().ok_or_else(|| Error::parse(1, "empty document"))?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::parse(lno, format!("expected element count, found `{first}`")))?;
        if n == 0 {
            return Err(Error::parse(lno, "element count must be positive"));
        }
        if n > cap {
            return Err(Error::TooLarge { what: "semigroup for validation", size: n as u128, cap: cap as u128 });
        }

        let mut table = Vec::with_capacity(n * n);
        for row in 0..n {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(lno + row + 1, format!("missing table row {row}")))?;
            let before = table.len();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(lno, format!("bad entry `{tok}`")))?;
                if v >= n {
                    return Err(Error::parse(lno, format!("entry {v} out of range 0..{n}")));
                }
                table.push(v as u32);
            }
            if table.len() - before != n {
                return Err(Error::parse(lno, format!("row {row} has {} entries, expected {n}", table.len() - before)));
            }
        }

        let mut names = None;
        if let Some((lno, line)) = lines.next() {
            let rest = line
                .strip_prefix("names:")
                .ok_or_else(|| Error::parse(lno, format!("unexpected line `{line}`")))?;
            let ns: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            check_names(n, &ns).map_err(|e| Error::parse(lno, e.to_string()))?;
            names = Some(ns);
        }
        if let Some((lno, line)) = lines.next() {
            return Err(Error::parse(lno, format!("trailing content `{line}`")));
        }

        Self::from_table_with_cap(n, table, names, cap)
    }

    /// Serializes to the Cayley document: count, rows, optional names line.
    pub fn to_cayley_string(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 3 + 16);
        let _ = writeln!(out, "{}", self.n);
        for a in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|b| self.product(a, b).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        if let Some(ns) = &self.names {
            let _ = writeln!(out, "names: {}", ns.join(" "));
        }
        out
    }
}

fn check_shape(n: usize, table: &[u32], names: Option<&[String]>) -> Result<()> {
    if table.len() != n * n {
        return Err(Error::parse(0, format!("table has {} entries, expected {}", table.len(), n * n)));
    }
    if let Some(&bad) = table.iter().find(|&&v| v as usize >= n) {
        return Err(Error::parse(0, format!("entry {bad} out of range 0..{n}")));
    }
    if let Some(ns) = names {
        check_names(n, ns)?;
    }
    Ok(())
}

fn check_names(n: usize, names: &[String]) -> Result<()> {
    if names.len() != n {
        return Err(Error::parse(0, format!("{} names for {n} elements", names.len())));
    }
    for (i, a) in names.iter().enumerate() {
        if a.is_empty() || a.chars().any(|c| c.is_whitespace() || matches!(c, '[' | ']' | '*' | '#')) {
            return Err(Error::parse(0, format!("invalid element name `{a}`")));
        }
        if names[..i].contains(a) {
            return Err(Error::parse(0, format!("duplicate element name `{a}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn trivial_table() {
        let s = InverseSemigroup::parse_cayley("1\n0\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.inverse(0), 0);
    }

    #[test]
    fn left_zero_band_is_not_inverse() {
        // xy = x for all x, y: every element is a generalized inverse of every other
        let err = InverseSemigroup::parse_cayley("2\n0 0\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::NotInverse { elem: 0, candidates: 2 }), "{err}");
    }

    #[test]
    fn non_associative_witness() {
        // 0*0 = 1, everything else 0: (0*0)*1 = 0 but 0*(0*1) = 1
        let err = InverseSemigroup::parse_cayley("2\n1 0\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }), "{err}");
    }

    #[test]
    fn noncommuting_idempotents_rejected() {
        // 1 and 2 idempotent with 1*2 = 0 but 2*1 = 2. Unique inverses force
        // commuting idempotents, so some earlier check may fire first.
        let table = vec![0, 0, 0, 0, 1, 0, 0, 2, 2];
        let err = InverseSemigroup::from_table(3, table, None).unwrap_err();
        assert!(
            matches!(err, Error::NotAssociative { .. } | Error::NotInverse { .. } | Error::IdempotentsDontCommute { .. }),
            "{err}"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(InverseSemigroup::parse_cayley(""), Err(Error::Parse { .. })));
        assert!(matches!(InverseSemigroup::parse_cayley("2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(InverseSemigroup::parse_cayley("1\n3\n"), Err(Error::Parse { .. })));
        assert!(matches!(InverseSemigroup::parse_cayley("1\n0\nnames: a b\n"), Err(Error::Parse { .. })));
        assert!(matches!(InverseSemigroup::parse_cayley("1\n0\nfoo\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_and_names() {
        let doc = "# trivial group\n1  # count\n0\nnames: one\n";
        let s = InverseSemigroup::parse_cayley(doc).unwrap();
        assert_eq!(s.name(0), "one");
        assert_eq!(s.to_cayley_string(), "1\n0\nnames: one\n");
    }

    #[test]
    fn five_element_products() {
        let g = catalog::five_element();
        let [z, e, f, s, t] = ["0", "e", "f", "s", "t"].map(|x| g.find(x).unwrap());
        assert_eq!(g.product(s, s), z);
        assert_eq!(g.product(s, t), e);
        assert_eq!(g.product(t, s), f);
        assert_eq!(g.inverse(s), t);
        let inv: Vec<usize> = g.elements().map(|a| g.inverse(a)).collect();
        assert_eq!(inv, vec![z, e, f, t, s]);
        for a in g.elements() {
            assert_eq!(g.product(a, g.product(g.inverse(a), a)), a);
        }
    }

    #[test]
    fn idempotent_sets() {
        let g = catalog::five_element();
        let names: Vec<String> = g.idempotents().iter().map(|a| g.name(a)).collect();
        assert_eq!(names, ["0", "e", "f"]);
        let z3 = catalog::cyclic_group(3);
        assert_eq!(z3.idempotents().iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(catalog::symmetric_inverse_monoid(2).unwrap().idempotents().len(), 4);
    }

    #[test]
    fn natural_order_examples() {
        let g = catalog::five_element();
        let [z, s, t] = ["0", "s", "t"].map(|x| g.find(x).unwrap());
        assert!(g.natural_leq(z, s).unwrap());
        assert!(g.natural_leq(s, s).unwrap());
        assert!(!g.natural_leq(s, t).unwrap());
    }

    #[test]
    fn e_unitary_and_semilattice() {
        assert!(catalog::klein_four().is_e_unitary());
        assert!(catalog::cyclic_group(4).is_e_unitary());
        let g = catalog::five_element();
        assert!(!g.is_e_unitary());
        let (e, s) = g.e_unitary_witness().unwrap();
        assert!(g.is_idempotent(g.product(e, s)) && !g.is_idempotent(s));
        let ei2 = catalog::symmetric_inverse_monoid(2).unwrap().idempotent_semilattice();
        assert!(ei2.is_e_unitary());
        assert!(ei2.is_semilattice());
        assert!(catalog::trivial().is_semilattice());
        assert!(!g.is_semilattice());
    }

    #[test]
    fn e_sets() {
        let g = catalog::five_element();
        let [e, s, t] = ["e", "s", "t"].map(|x| g.find(x).unwrap());
        let n = g.len();
        assert!(g.is_e_set(&ElemSet::from_iter(n, [e, s]), e).unwrap());
        assert!(g.is_e_set(&ElemSet::from_iter(n, [e]), e).unwrap());
        assert!(!g.is_e_set(&ElemSet::from_iter(n, [e, t]), e).unwrap());
        assert!(matches!(g.is_e_set(&ElemSet::from_iter(n, [s]), s), Err(Error::NotIdempotent(_))));
    }

    #[test]
    fn symmetric_inverse_monoid_swap() {
        let i2 = catalog::symmetric_inverse_monoid(2).unwrap();
        let swap = i2.find("21").unwrap();
        let id = i2.find("12").unwrap();
        assert_eq!(i2.product(swap, swap), id);
    }

    #[test]
    fn cap_enforced() {
        let doc = catalog::symmetric_inverse_monoid(3).unwrap().to_cayley_string();
        assert!(matches!(
            InverseSemigroup::parse_cayley_with_cap(&doc, 10),
            Err(Error::TooLarge { .. })
        ));
    }
}
