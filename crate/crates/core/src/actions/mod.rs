//! Partial homomorphisms, partial actions on finite sets, filters and the
//! canonical partial action of `G` on its filters.

mod filters;
mod partial_map;

use std::collections::HashMap;

pub use filters::{
    enumerate_filters, enumerate_filters_with_cap, filter_closure, is_filter, is_filter_base, is_filter_by_conditions,
    DEFAULT_FILTER_CAP,
};
pub use partial_map::PartialBijection;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::expansion::ExpansionTable;
use crate::par;
use crate::report::Report;
use crate::semigroup::{Elem, InverseSemigroup};

/// An inverse semigroup a map can land in: either a Cayley table or the
/// symmetric inverse monoid on a finite set.
pub trait Target: Sync {
    type Elem: Clone + PartialEq + Send + Sync;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn show(&self, a: &Self::Elem) -> String;
}

impl Target for InverseSemigroup {
    type Elem = Elem;
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.product(*a, *b)
    }
    fn star(&self, a: &Elem) -> Elem {
        self.inverse(*a)
    }
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        InverseSemigroup::leq(self, *a, *b)
    }
    fn show(&self, a: &Elem) -> String {
        self.name(*a)
    }
}

/// `I(X)` for a finite `X`.
pub struct SymmetricInverse;

impl Target for SymmetricInverse {
    type Elem = PartialBijection;
    fn mul(&self, a: &PartialBijection, b: &PartialBijection) -> PartialBijection {
        a.compose(b)
    }
    fn star(&self, a: &PartialBijection) -> PartialBijection {
        a.inverse()
    }
    fn leq(&self, a: &PartialBijection, b: &PartialBijection) -> bool {
        a.leq(b)
    }
    fn show(&self, a: &PartialBijection) -> String {
        a.to_string()
    }
}

fn pair_witness(g: &InverseSemigroup, f: impl Fn(Elem, Elem) -> bool + Sync + Send) -> Option<String> {
    let n = g.len();
    par::find_first(n * n, |k| {
        let (s, t) = (k / n, k % n);
        (!f(s, t)).then(|| format!("({},{})", g.name(s), g.name(t)))
    })
}

/// Checks the three partial-homomorphism axioms over all pairs:
/// `π(s*)π(s)π(t) = π(s*)π(st)`, `π(s)π(t)π(t*) = π(st)π(t*)` and
/// `π(s)π(s*)π(s) = π(s)`.
pub fn partial_hom_report<T: Target>(g: &InverseSemigroup, h: &T, pi: &[T::Elem]) -> Report {
    assert_eq!(pi.len(), g.len(), "map must be total on G");
    let p = |s: Elem| &pi[s];
    let mut r = Report::new();
    r.check(
        "axiom-i",
        pair_witness(g, |s, t| {
            let si = g.inverse(s);
            h.mul(&h.mul(p(si), p(s)), p(t)) == h.mul(p(si), p(g.product(s, t)))
        }),
    );
    r.check(
        "axiom-ii",
        pair_witness(g, |s, t| {
            let ti = g.inverse(t);
            h.mul(&h.mul(p(s), p(t)), p(ti)) == h.mul(p(g.product(s, t)), p(ti))
        }),
    );
    r.check(
        "axiom-iii",
        g.elements()
            .find(|&s| h.mul(&h.mul(p(s), p(g.inverse(s))), p(s)) != *p(s))
            .map(|s| g.name(s)),
    );
    r
}

/// Checks `π(s*) = π(s)*`, `π(s)π(t) ≤ π(st)` and `s ≤ t ⇒ π(s) ≤ π(t)`.
pub fn dual_prehom_report<T: Target>(g: &InverseSemigroup, h: &T, pi: &[T::Elem]) -> Report {
    assert_eq!(pi.len(), g.len(), "map must be total on G");
    let p = |s: Elem| &pi[s];
    let mut r = Report::new();
    r.check(
        "star",
        g.elements().find(|&s| *p(g.inverse(s)) != h.star(p(s))).map(|s| g.name(s)),
    );
    r.check(
        "sub-multiplicative",
        pair_witness(g, |s, t| h.leq(&h.mul(p(s), p(t)), p(g.product(s, t)))),
    );
    r.check(
        "order-preserving",
        pair_witness(g, |s, t| !g.leq(s, t) || h.leq(p(s), p(t))),
    );
    r
}

/// Partial-homomorphism axioms for `pi: G -> H`, failures carried in the
/// report.
pub fn is_partial_homomorphism<T: Target>(g: &InverseSemigroup, h: &T, pi: &[T::Elem]) -> Result<Report> {
    check_len(g, pi.len())?;
    Ok(partial_hom_report(g, h, pi))
}

/// Dual-prehomomorphism conditions, cross-checked against the
/// partial-homomorphism axioms; the two verdicts must agree.
pub fn is_dual_prehomomorphism<T: Target>(g: &InverseSemigroup, h: &T, pi: &[T::Elem]) -> Result<Report> {
    check_len(g, pi.len())?;
    let dual = dual_prehom_report(g, h, pi);
    let axioms = partial_hom_report(g, h, pi);
    if dual.passed() != axioms.passed() {
        return Err(Error::EquivalenceViolation(format!(
            "dual prehomomorphism {} but partial homomorphism {}",
            verdict(dual.passed()),
            verdict(axioms.passed())
        )));
    }
    Ok(dual)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "fails"
    }
}

fn check_len(g: &InverseSemigroup, len: usize) -> Result<()> {
    if len != g.len() {
        return Err(Error::DimensionMismatch(format!("map has {len} entries, G has {}", g.len())));
    }
    Ok(())
}

/// A family of partial bijections of `{0, .., x_size-1}` indexed by `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialActionOnSet {
    pub x_size: usize,
    pub maps: Vec<PartialBijection>,
}

impl PartialActionOnSet {
    pub fn new(g: &InverseSemigroup, x_size: usize, maps: Vec<PartialBijection>) -> Result<Self> {
        check_len(g, maps.len())?;
        if let Some(m) = maps.iter().find(|m| m.size() != x_size) {
            return Err(Error::DimensionMismatch(format!("map on {} points, |X| = {x_size}", m.size())));
        }
        Ok(PartialActionOnSet { x_size, maps })
    }

    /// Parses `|X|` on the first line, then one `name: i->j, k->l` line per
    /// element (an element with empty map has nothing after the colon).
    pub fn parse(text: &str, g: &InverseSemigroup) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "missing |X|"))?;
        let x_size: usize = first.parse().map_err(|_| Error::parse(ln, format!("bad |X| `{first}`")))?;
        let mut maps: Vec<Option<PartialBijection>> = vec![None; g.len()];
        for (ln, line) in lines {
            let (name, body) = line.split_once(':').ok_or_else(|| Error::parse(ln, "expected `name: i->j, ...`"))?;
            let s = g.find(name.trim()).ok_or_else(|| Error::UnknownElement(name.trim().to_string()))?;
            let mut map = vec![None; x_size];
            for item in body.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let (a, b) = item.split_once("->").ok_or_else(|| Error::parse(ln, format!("bad pair `{item}`")))?;
                let point = |x: &str| -> Result<usize> {
                    x.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v < x_size)
                        .ok_or_else(|| Error::parse(ln, format!("bad point `{}`", x.trim())))
                };
                let (a, b) = (point(a)?, point(b)?);
                if map[a].replace(b as u32).is_some() {
                    return Err(Error::parse(ln, format!("point {a} mapped twice")));
                }
            }
            let pb = PartialBijection::new(map).ok_or_else(|| Error::parse(ln, "map is not injective"))?;
            if maps[s].replace(pb).is_some() {
                return Err(Error::parse(ln, format!("element {} listed twice", g.name(s))));
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(s, m)| m.ok_or_else(|| Error::parse(0, format!("no map for element {}", g.name(s)))))
            .collect::<Result<Vec<_>>>()?;
        PartialActionOnSet::new(g, x_size, maps)
    }

    pub fn to_doc_string(&self, g: &InverseSemigroup) -> String {
        let mut out = format!("{}\n", self.x_size);
        for (s, m) in self.maps.iter().enumerate() {
            let pairs: Vec<String> =
                (0..self.x_size).filter_map(|x| m.get(x).map(|y| format!("{x}->{y}"))).collect();
            out.push_str(&format!("{}: {}\n", g.name(s), pairs.join(", ")));
        }
        out
    }

    /// `X_s`, the range of `π_s`.
    pub fn range_of(&self, s: Elem) -> ElemSet {
        self.maps[s].range()
    }
}

/// Runs both partial-action criteria. The first (`A-*`) requires
/// `π_s^-1 = π_{s*}`, `π_s(X_{s*} ∩ X_t) = X_s ∩ X_{st}` and
/// `π_s π_t = π_{st}` on `X_{t*} ∩ X_{t*s*}`; the second (`B-*`) weakens the
/// middle equality to `⊆ X_{st}` and adds `s ≤ t ⇒ X_s ⊆ X_t`.
pub fn is_partial_action(g: &InverseSemigroup, act: &PartialActionOnSet) -> Result<Report> {
    check_len(g, act.maps.len())?;
    let pi = &act.maps;
    let x: Vec<ElemSet> = pi.iter().map(PartialBijection::range).collect();
    let inv = |s: Elem| g.inverse(s);
    let inter = |a: &ElemSet, b: &ElemSet| {
        let mut c = a.clone();
        c.intersect_with(b);
        c
    };
    let inverse_ok = g.elements().find(|&s| pi[s].inverse() != pi[inv(s)]).map(|s| g.name(s));
    let composition = pair_witness(g, |s, t| {
        let dom = inter(&x[inv(t)], &x[g.product(inv(t), inv(s))]);
        let ok = dom.iter().all(|p| {
            let via = pi[t].get(p).and_then(|q| pi[s].get(q));
            via.is_some() && via == pi[g.product(s, t)].get(p)
        });
        ok
    });

    let mut a = Report::new();
    a.check("A-i", inverse_ok.clone());
    a.check(
        "A-ii",
        pair_witness(g, |s, t| {
            let src = inter(&x[inv(s)], &x[t]);
            src.iter().all(|p| pi[s].get(p).is_some())
                && pi[s].image(&src) == inter(&x[s], &x[g.product(s, t)])
        }),
    );
    a.check("A-iii", composition.clone());

    let mut b = Report::new();
    b.check("B-i", inverse_ok);
    b.check(
        "B-ii",
        pair_witness(g, |s, t| {
            let src = inter(&x[inv(s)], &x[t]);
            src.iter().all(|p| pi[s].get(p).is_some()) && pi[s].image(&src).is_subset(&x[g.product(s, t)])
        }),
    );
    b.check("B-iii", pair_witness(g, |s, t| !g.leq(s, t) || x[s].is_subset(&x[t])));
    b.check("B-iv", composition);

    if a.passed() != b.passed() {
        return Err(Error::CriteriaDisagree(format!(
            "first criterion {}, second {}",
            verdict(a.passed()),
            verdict(b.passed())
        )));
    }
    let mut r = Report::new();
    r.extend_prefixed("", a);
    r.extend_prefixed("", b);
    Ok(r)
}

/// The filters of `G` together with the canonical partial action
/// `π_t(ξ) = ⟨tξ⟩` on `X_{t*} = {ξ : t* ∈ ξ}`.
#[derive(Clone, Debug)]
pub struct CanonicalAction {
    pub filters: Vec<ElemSet>,
    pub action: PartialActionOnSet,
}

pub fn canonical_partial_action(g: &InverseSemigroup) -> Result<CanonicalAction> {
    canonical_partial_action_with_cap(g, DEFAULT_FILTER_CAP)
}

pub fn canonical_partial_action_with_cap(g: &InverseSemigroup, cap: usize) -> Result<CanonicalAction> {
    let filters = enumerate_filters_with_cap(g, cap)?;
    let index: HashMap<&ElemSet, u32> = filters.iter().enumerate().map(|(i, f)| (f, i as u32)).collect();
    let maps = par::map_range(g.len(), |t| -> Result<PartialBijection> {
        let ti = g.inverse(t);
        let mut map = vec![None; filters.len()];
        for (i, xi) in filters.iter().enumerate() {
            if !xi.contains(ti) {
                continue;
            }
            let base = xi.map(g.len(), |s| g.product(t, s));
            let image = filter_closure(g, &base)
                .map_err(|e| Error::InternalInconsistency(format!("t·ξ is not a filter base: {e}")))?;
            let j = index
                .get(&image)
                .ok_or_else(|| Error::InternalInconsistency(format!("<tξ> = {} is not a filter", g.set_name(&image))))?;
            map[i] = Some(*j);
        }
        PartialBijection::new(map)
            .ok_or_else(|| Error::InternalInconsistency(format!("π_{} is not injective", g.name(t))))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let action = PartialActionOnSet::new(g, filters.len(), maps)?;
    Ok(CanonicalAction { filters, action })
}

/// Extends a partial action of `G` to the action of `S(G)` given by
/// `eps_A[t] ↦ id_{X_A} ∘ π_t`, where `X_A = ∩_{a∈A} X_a`, and checks that
/// it is a homomorphism `S(G) -> I(X)` extending `π`.
pub fn lift_action(table: &ExpansionTable, act: &PartialActionOnSet) -> Result<(Vec<PartialBijection>, Report)> {
    let g = table.source();
    let pa = is_partial_action(g, act)?;
    if let Some(c) = pa.first_failure() {
        return Err(Error::NotPartialAction(c.to_string()));
    }
    let lift = lift_maps(table, act);

    let base = table.base();
    let m = table.len();
    let mut report = Report::new();
    let bad = par::find_first(m * m, |k| {
        let (x, y) = (k / m, k % m);
        (lift[base.product(x, y)] != lift[x].compose(&lift[y])).then(|| format!("({},{})", base.name(x), base.name(y)))
    });
    report.check("lift-homomorphism", bad.clone());
    let ext = g.elements().find(|&s| lift[table.iota(s)] != act.maps[s]).map(|s| g.name(s));
    report.check("lift-extends-action", ext.clone());
    let idem = (0..m)
        .filter(|&x| base.is_idempotent(x))
        .find(|&x| !lift[x].is_partial_identity())
        .map(|x| base.name(x));
    report.check("idempotents-to-partial-identities", idem.clone());
    if let Some(w) = bad.or(ext).or(idem) {
        return Err(Error::LiftNotHomomorphism(w));
    }
    Ok((lift, report))
}

fn domains(table: &ExpansionTable, act: &PartialActionOnSet) -> Vec<ElemSet> {
    let ranges: Vec<ElemSet> = act.maps.iter().map(PartialBijection::range).collect();
    table
        .elems()
        .iter()
        .map(|x| {
            let mut xa = ElemSet::full(act.x_size);
            for a in x.set().iter() {
                xa.intersect_with(&ranges[a]);
            }
            xa
        })
        .collect()
}

/// `id_{X_A} ∘ π_t`: restricts the range of `π_t` to `X_A`.
pub fn lift_maps(table: &ExpansionTable, act: &PartialActionOnSet) -> Vec<PartialBijection> {
    let xa = domains(table, act);
    table
        .elems()
        .iter()
        .zip(&xa)
        .map(|(x, xa)| PartialBijection::identity_on(xa).compose(&act.maps[x.degree()]))
        .collect()
}

/// `π_t` with its domain cut down to `π_t^-1(X_A)`; equal to
/// [`lift_maps`] entry by entry.
pub fn lift_maps_by_domain(table: &ExpansionTable, act: &PartialActionOnSet) -> Vec<PartialBijection> {
    let xa = domains(table, act);
    table
        .elems()
        .iter()
        .zip(&xa)
        .map(|(x, xa)| {
            let pt = &act.maps[x.degree()];
            pt.restrict_domain(&pt.inverse().image(xa))
        })
        .collect()
}

/// Result of [`separation_check`].
#[derive(Clone, Debug)]
pub struct Separation {
    pub separated: bool,
    pub elements: usize,
    pub filters: usize,
    pub distinct_lifts: usize,
    pub report: Report,
}

/// Whether the lifted canonical action, together with the degree map,
/// tells all elements of `S(G)` apart (and the lift alone tells the
/// idempotents apart).
pub fn separation_check(table: &ExpansionTable) -> Result<Separation> {
    let g = table.source();
    let canon = canonical_partial_action(g)?;
    let (lift, _) = lift_action(table, &canon.action)?;
    let base = table.base();
    let m = table.len();

    let mut report = Report::new();
    let idem: Vec<usize> = (0..m).filter(|&x| base.is_idempotent(x)).collect();
    let idem_clash = idem
        .iter()
        .enumerate()
        .find_map(|(i, &x)| idem[i + 1..].iter().find(|&&y| lift[x] == lift[y]).map(|&y| (x, y)));
    report.check("idempotents-separated", idem_clash.map(|(x, y)| format!("({},{})", base.name(x), base.name(y))));
    let clash = par::find_first(m * m, |k| {
        let (x, y) = (k / m, k % m);
        (x < y && lift[x] == lift[y] && table.degree_of(x) == table.degree_of(y)).then_some((x, y))
    });
    report.check("lift-and-degree-separate", clash.map(|(x, y)| format!("({},{})", base.name(x), base.name(y))));

    let mut distinct = lift.clone();
    distinct.sort_by(|a, b| a.targets().cmp(b.targets()));
    distinct.dedup();
    if let Some(c) = report.first_failure() {
        return Err(Error::PropertyViolation(format!("canonical action fails to separate: {c}")));
    }
    Ok(Separation {
        separated: true,
        elements: m,
        filters: canon.filters.len(),
        distinct_lifts: distinct.len(),
        report,
    })
}
