//! The prefix expansion `S(G)` as normal-form pairs `(A, t)`.
//!
//! An element `eps_A [t]` is stored as the pair `(A, t)` where `A` is a
//! `tt*`-set containing `t` (hence also `tt*`). Normal forms are unique, so
//! structural equality of pairs is equality in `S(G)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::actions;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::par;
use crate::report::Report;
use crate::semigroup::{Elem, InverseSemigroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpElem {
    set: ElemSet,
    degree: Elem,
}

impl ExpElem {
    /// Builds a pair, checking that it is in normal form over `g`.
    pub fn new(g: &InverseSemigroup, set: ElemSet, degree: Elem) -> Result<Self> {
        let x = ExpElem { set, degree };
        x.check_normal(g)?;
        Ok(x)
    }

    pub(crate) fn from_parts(set: ElemSet, degree: Elem) -> Self {
        ExpElem { set, degree }
    }

    pub fn set(&self) -> &ElemSet {
        &self.set
    }

    /// The degree `t` of `eps_A [t]`.
    pub fn degree(&self) -> Elem {
        self.degree
    }

    pub fn is_normal(&self, g: &InverseSemigroup) -> bool {
        self.check_normal(g).is_ok()
    }

    fn check_normal(&self, g: &InverseSemigroup) -> Result<()> {
        let t = self.degree;
        if self.set.universe() != g.len() || t >= g.len() {
            return Err(Error::NotNormalForm(format!("pair does not live over a semigroup of size {}", g.len())));
        }
        let e = g.range_idempotent(t);
        if !self.set.contains(t) {
            return Err(Error::NotNormalForm(format!("degree {} missing from {}", g.name(t), g.set_name(&self.set))));
        }
        if !self.set.contains(e) {
            return Err(Error::NotNormalForm(format!("{} missing from {}", g.name(e), g.set_name(&self.set))));
        }
        if let Some(s) = self.set.iter().find(|&s| g.range_idempotent(s) != e) {
            return Err(Error::NotNormalForm(format!(
                "{} has range idempotent {} but degree has {}",
                g.name(s),
                g.name(g.range_idempotent(s)),
                g.name(e)
            )));
        }
        Ok(())
    }

    /// Whether the element is idempotent in `S(G)`; by essential injectivity
    /// of the degree map this is whether its degree is.
    pub fn is_idempotent(&self, g: &InverseSemigroup) -> bool {
        g.is_idempotent(self.degree)
    }

    /// `eps{A}[t]`
    pub fn render(&self, g: &InverseSemigroup) -> String {
        format!("eps{}[{}]", g.set_name(&self.set), g.name(self.degree))
    }

    /// Element name used in serialized expansion tables: `eps{A}` for
    /// idempotents, `br{t}` for a bare generator `[t]`, `eps{A}br{t}`
    /// otherwise.
    pub fn table_name(&self, g: &InverseSemigroup) -> String {
        let t = self.degree;
        if g.is_idempotent(t) {
            return format!("eps{}", g.set_name(&self.set));
        }
        let bare = ElemSet::from_iter(g.len(), [t, g.range_idempotent(t)]);
        if self.set == bare {
            format!("br{{{}}}", g.name(t))
        } else {
            format!("eps{}br{{{}}}", g.set_name(&self.set), g.name(t))
        }
    }
}

/// `[s]` in normal form: `({ss*, s}, s)`.
pub fn canonical_gen(g: &InverseSemigroup, s: Elem) -> ExpElem {
    ExpElem { set: ElemSet::from_iter(g.len(), [g.range_idempotent(s), s]), degree: s }
}

/// Product of two normal forms:
/// `(A, t)(B, s) = (tss*t* A ∪ tB, ts)`.
pub fn exp_product(g: &InverseSemigroup, x: &ExpElem, y: &ExpElem) -> Result<ExpElem> {
    x.check_normal(g)?;
    y.check_normal(g)?;
    Ok(product_unchecked(g, x, y))
}

#[inline]
pub(crate) fn product_unchecked(g: &InverseSemigroup, x: &ExpElem, y: &ExpElem) -> ExpElem {
    let (t, s) = (x.degree, y.degree);
    let ts = g.product(t, s);
    let q = g.range_idempotent(ts);
    let mut set = x.set.map(g.len(), |a| g.product(q, a));
    set.union_with(&y.set.map(g.len(), |b| g.product(t, b)));
    ExpElem { set, degree: ts }
}

/// Puts an arbitrary product `eps_C [u]` into normal form.
///
/// With `p = c1c1* ... cncn* uu*` the element equals
/// `eps_{pC} [pu]`, after which `pu` and `p` are adjoined to the set.
pub fn normalize(g: &InverseSemigroup, set: &ElemSet, u: Elem) -> ExpElem {
    let p = set
        .iter()
        .map(|c| g.range_idempotent(c))
        .fold(g.range_idempotent(u), |acc, e| g.product(acc, e));
    let mut out = set.map(g.len(), |c| g.product(p, c));
    let pu = g.product(p, u);
    out.insert(pu);
    out.insert(p);
    ExpElem { set: out, degree: pu }
}

/// Product computed as `eps_{A ∪ tB} [ts]` followed by normalization; an
/// independent route to [`exp_product`].
pub fn exp_product_via_union(g: &InverseSemigroup, x: &ExpElem, y: &ExpElem) -> Result<ExpElem> {
    x.check_normal(g)?;
    y.check_normal(g)?;
    let t = x.degree;
    let mut set = x.set.clone();
    set.union_with(&y.set.map(g.len(), |b| g.product(t, b)));
    Ok(normalize(g, &set, g.product(t, y.degree)))
}

/// Inverse `(t*A, t*)`.
pub fn exp_inverse(g: &InverseSemigroup, x: &ExpElem) -> Result<ExpElem> {
    x.check_normal(g)?;
    Ok(inverse_unchecked(g, x))
}

fn inverse_unchecked(g: &InverseSemigroup, x: &ExpElem) -> ExpElem {
    let ti = g.inverse(x.degree);
    ExpElem { set: x.set.map(g.len(), |a| g.product(ti, a)), degree: ti }
}

pub fn degree(x: &ExpElem) -> Elem {
    x.degree
}

/// Predicted orders of `S(G)` and of its idempotent semilattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Count {
    pub total: u128,
    pub idempotent: u128,
}

/// `|E(S(G))| = Σ_e 2^(p_e-1)` and
/// `|S(G)| = Σ_e 2^(p_e-1) + (p_e-1) 2^(p_e-2)`, where
/// `p_e = |{s : ss* = e}|`.
pub fn predicted_count(g: &InverseSemigroup) -> Result<Count> {
    let mut p = vec![0u32; g.len()];
    for s in g.elements() {
        p[g.range_idempotent(s)] += 1;
    }
    let overflow = || Error::TooLarge { what: "predicted expansion order", size: u128::MAX, cap: u128::MAX };
    let pow2 = |k: u32| 1u128.checked_shl(k).filter(|_| k < 128).ok_or_else(overflow);
    let mut total = 0u128;
    let mut idempotent = 0u128;
    for e in g.idempotents().iter() {
        let pe = p[e];
        debug_assert!(pe >= 1);
        let idem = pow2(pe - 1)?;
        let non_idem = if pe >= 2 {
            u128::from(pe - 1).checked_mul(pow2(pe - 2)?).ok_or_else(overflow)?
        } else {
            0
        };
        idempotent = idempotent.checked_add(idem).ok_or_else(overflow)?;
        total = total
            .checked_add(idem)
            .and_then(|x| x.checked_add(non_idem))
            .ok_or_else(overflow)?;
    }
    Ok(Count { total, idempotent })
}

#[derive(Clone, Copy, Debug)]
pub struct ExpansionOptions {
    /// Upper bound on `|S(G)|`.
    pub cap: u128,
    /// Tables up to this size are run through the full inverse-semigroup
    /// validator after construction.
    pub validation_cap: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { cap: 1_000_000, validation_cap: 512 }
    }
}

/// Largest expansion whose Cayley table we are willing to materialize.
const TABLE_LIMIT: u128 = 46_000;

/// `S(G)` enumerated, with its Cayley table.
#[derive(Clone, Debug)]
pub struct ExpansionTable {
    source: InverseSemigroup,
    base: InverseSemigroup,
    elems: Vec<ExpElem>,
    index: HashMap<ExpElem, usize>,
    validated: bool,
}

impl ExpansionTable {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// The semigroup `G` this was built from.
    pub fn source(&self) -> &InverseSemigroup {
        &self.source
    }

    /// `S(G)` as a Cayley table.
    pub fn base(&self) -> &InverseSemigroup {
        &self.base
    }

    pub fn elems(&self) -> &[ExpElem] {
        &self.elems
    }

    pub fn elem(&self, id: usize) -> &ExpElem {
        &self.elems[id]
    }

    pub fn id_of(&self, x: &ExpElem) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Whether the full inverse-semigroup validator ran on the table.
    pub fn validated(&self) -> bool {
        self.validated
    }

    /// Id of `[s]`.
    pub fn iota(&self, s: Elem) -> usize {
        self.index[&canonical_gen(&self.source, s)]
    }

    pub fn degree_of(&self, id: usize) -> Elem {
        self.elems[id].degree
    }

    /// `id: ({A}, t)` per line.
    pub fn sidecar_string(&self) -> String {
        let g = &self.source;
        let mut out = String::new();
        for (i, x) in self.elems.iter().enumerate() {
            let _ = writeln!(out, "{i}: ({}, {})", g.set_name(&x.set), g.name(x.degree));
        }
        out
    }
}

/// Enumerates `S(G)` and builds its Cayley table.
pub fn build_expansion(g: &InverseSemigroup) -> Result<ExpansionTable> {
    build_expansion_with(g, ExpansionOptions::default())
}

pub fn build_expansion_with(g: &InverseSemigroup, opts: ExpansionOptions) -> Result<ExpansionTable> {
    let predicted = predicted_count(g)?;
    if predicted.total > opts.cap {
        return Err(Error::TooLarge { what: "expansion", size: predicted.total, cap: opts.cap });
    }
    if predicted.total > TABLE_LIMIT {
        return Err(Error::TooLarge { what: "expansion Cayley table", size: predicted.total, cap: TABLE_LIMIT });
    }

    let elems = enumerate_normal_forms(g);
    if elems.len() as u128 != predicted.total {
        return Err(Error::InternalInconsistency(format!(
            "enumerated {} normal forms but predicted {}",
            elems.len(),
            predicted.total
        )));
    }
    let index: HashMap<ExpElem, usize> = elems.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let m = elems.len();

    let rows: Vec<Result<Vec<u32>>> = par::map_range(m, |i| {
        let x = &elems[i];
        elems
            .iter()
            .map(|y| {
                let xy = product_unchecked(g, x, y);
                index.get(&xy).map(|&k| k as u32).ok_or_else(|| {
                    Error::InternalInconsistency(format!(
                        "product {} * {} = {} not among enumerated normal forms",
                        x.render(g),
                        y.render(g),
                        xy.render(g)
                    ))
                })
            })
            .collect()
    });
    let mut table = Vec::with_capacity(m * m);
    for row in rows {
        table.extend(row?);
    }
    let inv: Vec<u32> = elems
        .iter()
        .map(|x| {
            index
                .get(&inverse_unchecked(g, x))
                .map(|&k| k as u32)
                .ok_or_else(|| Error::InternalInconsistency(format!("inverse of {} not enumerated", x.render(g))))
        })
        .collect::<Result<_>>()?;
    let names: Vec<String> = elems.iter().map(|x| x.table_name(g)).collect();

    let (base, validated) = if m <= opts.validation_cap {
        let checked = InverseSemigroup::from_table_with_cap(m, table, Some(names), opts.validation_cap)?;
        if (0..m).any(|x| checked.inverse(x) != inv[x] as usize) {
            return Err(Error::InternalInconsistency("validator found different inverses than (t*A, t*)".into()));
        }
        (checked, true)
    } else {
        let base = InverseSemigroup::from_trusted_parts(m, table, inv, Some(names));
        if let Some(x) = (0..m).find(|&x| base.product(base.product(x, base.inverse(x)), x) != x) {
            return Err(Error::InternalInconsistency(format!("x x^-1 x != x for {}", base.name(x))));
        }
        (base, false)
    };

    Ok(ExpansionTable { source: g.clone(), base, elems, index, validated })
}

/// All normal forms, ordered by idempotent, then subset in binary order,
/// then degree.
fn enumerate_normal_forms(g: &InverseSemigroup) -> Vec<ExpElem> {
    let n = g.len();
    let idempotents: Vec<Elem> = g.idempotents().iter().collect();
    let blocks = par::map_slice(&idempotents, |&e| {
        let others: Vec<Elem> = g.elements().filter(|&s| s != e && g.range_idempotent(s) == e).collect();
        let mut subsets: Vec<ElemSet> = (0u64..1 << others.len())
            .map(|mask| {
                let mut set = ElemSet::from_iter(n, [e]);
                for (i, &s) in others.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        set.insert(s);
                    }
                }
                set
            })
            .collect();
        subsets.sort();
        let mut out = Vec::new();
        for set in subsets {
            for t in set.iter() {
                out.push(ExpElem { set: set.clone(), degree: t });
            }
        }
        out
    });
    blocks.into_iter().flatten().collect()
}

/// Extends a partial homomorphism `pi: G -> H` to the homomorphism
/// `S(G) -> H`, `eps_A [t] ↦ Π_{a∈A} pi(a)pi(a*) · pi(t)`, and verifies it.
///
/// Returns the images indexed by expansion id.
pub fn lift_partial_hom(
    table: &ExpansionTable,
    h: &InverseSemigroup,
    pi: &[Elem],
) -> Result<(Vec<Elem>, Report)> {
    let g = table.source();
    let ph = actions::is_partial_homomorphism(g, h, pi)?;
    if let Some(c) = ph.first_failure() {
        return Err(Error::NotPartialHom(c.to_string()));
    }
    let hom: Vec<Elem> = table
        .elems()
        .iter()
        .map(|x| {
            let eps = x
                .set
                .iter()
                .map(|a| h.product(pi[a], pi[g.inverse(a)]))
                .reduce(|acc, e| h.product(acc, e))
                .expect("normal-form sets are nonempty");
            h.product(eps, pi[x.degree])
        })
        .collect();

    let mut report = Report::new();
    let base = table.base();
    let m = table.len();
    let bad = par::find_first(m, |x| {
        (0..m)
            .find(|&y| hom[base.product(x, y)] != h.product(hom[x], hom[y]))
            .map(|y| (x, y))
    });
    let hom_witness = bad.map(|(x, y)| format!("({},{})", base.name(x), base.name(y)));
    report.check("lift-homomorphism", hom_witness.clone());
    let ext = g.elements().find(|&s| hom[table.iota(s)] != pi[s]);
    let ext_witness = ext.map(|s| g.name(s));
    report.check("lift-extends-map", ext_witness.clone());
    if let Some(w) = hom_witness.or(ext_witness) {
        return Err(Error::LiftNotHomomorphism(w));
    }
    Ok((hom, report))
}

/// Checks the unit-counit equations of the expansion adjunction
/// elementwise: `∂_{S(G)} ∘ Pr(ι_G) = id` on `S(G)` and `∂_G ∘ ι_G = id`
/// on `G`.
///
/// `Pr(ι_G)` is evaluated directly on normal forms over `S(G)`, so the
/// table of `S(S(G))` is never materialized; its predicted order must
/// still be within `opts.cap`.
pub fn check_unit_counit(g: &InverseSemigroup, opts: ExpansionOptions) -> Result<Report> {
    let table = build_expansion_with(g, opts)?;
    let sg = table.base();
    let second = predicted_count(sg)?;
    if second.total > opts.cap {
        return Err(Error::TooLarge { what: "second expansion", size: second.total, cap: opts.cap });
    }

    let mut report = Report::new();
    report.info("orders", format!("G={} S(G)={} S(S(G))={}", g.len(), table.len(), second.total));

    // [[g]] for every g in G, as normal forms over S(G)
    let phi: Vec<ExpElem> = g.elements().map(|s| canonical_gen(sg, table.iota(s))).collect();
    let first_bad = par::find_first(table.len(), |id| {
        let x = table.elem(id);
        let image = x
            .set
            .iter()
            .map(|a| product_unchecked(sg, &phi[a], &phi[g.inverse(a)]))
            .chain(std::iter::once(phi[x.degree].clone()))
            .reduce(|acc, y| product_unchecked(sg, &acc, &y))
            .expect("nonempty");
        (image.degree != id).then(|| format!("{} -> {}", sg.name(id), sg.name(image.degree)))
    });
    report.check("counit-after-expanded-unit", first_bad);

    let bad = g.elements().find(|&s| table.degree_of(table.iota(s)) != s);
    report.check("degree-after-iota", bad.map(|s| g.name(s)));
    Ok(report)
}

/// Returns whether `G` is E-unitary, after confirming `S(G)` agrees.
pub fn check_e_unitary_transfer(table: &ExpansionTable) -> Result<bool> {
    let g = table.source().is_e_unitary();
    let sg = table.base().is_e_unitary();
    if g != sg {
        return Err(Error::PropertyViolation(format!("G E-unitary={g} but S(G) E-unitary={sg}")));
    }
    Ok(g)
}

/// A semilattice is its own expansion; anything else grows strictly and
/// `ι_G` fails to be multiplicative.
pub fn check_semilattice_fixedpoint(table: &ExpansionTable) -> Result<Report> {
    let g = table.source();
    let base = table.base();
    let iota: Vec<usize> = g.elements().map(|s| table.iota(s)).collect();
    let witness = g.elements().find_map(|a| {
        g.elements()
            .find(|&b| iota[g.product(a, b)] != base.product(iota[a], iota[b]))
            .map(|b| (a, b))
    });
    let mut report = Report::new();
    if g.is_semilattice() {
        report.info("semilattice", "yes");
        let mut seen = iota.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != g.len() || table.len() != g.len() {
            return Err(Error::PropertyViolation(format!(
                "iota is not bijective: |G|={} |S(G)|={}",
                g.len(),
                table.len()
            )));
        }
        if let Some((a, b)) = witness {
            return Err(Error::PropertyViolation(format!(
                "iota not multiplicative on semilattice at ({},{})",
                g.name(a),
                g.name(b)
            )));
        }
        report.pass("iota-isomorphism");
    } else {
        report.info("semilattice", "no");
        if table.len() <= g.len() {
            return Err(Error::PropertyViolation(format!("|S(G)|={} not larger than |G|={}", table.len(), g.len())));
        }
        report.pass("strict-growth");
        let (a, b) = witness.ok_or_else(|| {
            Error::PropertyViolation("iota is multiplicative on a non-semilattice".into())
        })?;
        report.pass("iota-not-multiplicative");
        report.info(
            "witness",
            format!(
                "[{a}][{b}]={} [{ab}]={}",
                base.name(base.product(iota[a], iota[b])),
                base.name(iota[g.product(a, b)]),
                a = g.name(a),
                b = g.name(b),
                ab = g.name(g.product(a, b)),
            ),
        );
    }
    Ok(report)
}
