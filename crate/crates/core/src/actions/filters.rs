//! Filters: nonempty `ξ ⊆ G` with `es ∈ ξ ⇔ e ∈ ξ and s ∈ ξ` for every
//! idempotent `e`.

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::semigroup::{Elem, InverseSemigroup};

/// Default bound on `|G|` for filter enumeration.
pub const DEFAULT_FILTER_CAP: usize = 64;

/// Checks the defining condition directly.
pub fn is_filter(g: &InverseSemigroup, xi: &ElemSet) -> bool {
    if xi.is_empty() {
        return false;
    }
    g.idempotents()
        .iter()
        .all(|e| g.elements().all(|s| xi.contains(g.product(e, s)) == (xi.contains(e) && xi.contains(s))))
}

/// Checks the equivalent conditions: `ss* ∈ ξ`, `ss*t ∈ ξ` and upward
/// closure.
pub fn is_filter_by_conditions(g: &InverseSemigroup, xi: &ElemSet) -> bool {
    !xi.is_empty() && filter_base_witness(g, xi).is_none() && is_up_closed(g, xi)
}

fn is_up_closed(g: &InverseSemigroup, xi: &ElemSet) -> bool {
    xi.iter().all(|s| g.elements().all(|t| !g.leq(s, t) || xi.contains(t)))
}

/// First violation of `ss* ∈ η` or `ss*t ∈ η`, as a message.
fn filter_base_witness(g: &InverseSemigroup, eta: &ElemSet) -> Option<String> {
    for s in eta.iter() {
        let e = g.range_idempotent(s);
        if !eta.contains(e) {
            return Some(format!("{s}{s}*={e} missing", s = g.name(s), e = g.name(e)));
        }
        for t in eta.iter() {
            let u = g.product(e, t);
            if !eta.contains(u) {
                return Some(format!(
                    "s={} t={}: ss*t={} missing",
                    g.name(s),
                    g.name(t),
                    g.name(u)
                ));
            }
        }
    }
    None
}

pub fn is_filter_base(g: &InverseSemigroup, eta: &ElemSet) -> bool {
    !eta.is_empty() && filter_base_witness(g, eta).is_none()
}

/// `⟨η⟩ = {t : t ≥ s for some s ∈ η}` for a filter base `η`.
pub fn filter_closure(g: &InverseSemigroup, eta: &ElemSet) -> Result<ElemSet> {
    if eta.is_empty() {
        return Err(Error::NotFilterBase("empty set".into()));
    }
    if let Some(w) = filter_base_witness(g, eta) {
        return Err(Error::NotFilterBase(w));
    }
    Ok(up_closure(g, eta))
}

pub(crate) fn up_closure(g: &InverseSemigroup, eta: &ElemSet) -> ElemSet {
    ElemSet::from_iter(g.len(), g.elements().filter(|&t| eta.iter().any(|s| g.leq(s, t))))
}

/// All filters of `G`, in increasing binary order.
///
/// Backtracking over the elements; each decision is propagated (an element
/// in forces everything above it, its range idempotent and the `ss*t`
/// products; an element out forces everything below it out) so only
/// consistent branches are explored.
pub fn enumerate_filters(g: &InverseSemigroup) -> Result<Vec<ElemSet>> {
    enumerate_filters_with_cap(g, DEFAULT_FILTER_CAP)
}

pub fn enumerate_filters_with_cap(g: &InverseSemigroup, cap: usize) -> Result<Vec<ElemSet>> {
    if g.len() > cap {
        return Err(Error::TooLarge { what: "filter enumeration", size: g.len() as u128, cap: cap as u128 });
    }
    let n = g.len();
    let above: Vec<Vec<Elem>> = g.elements().map(|s| g.elements().filter(|&t| g.leq(s, t)).collect()).collect();
    let below: Vec<Vec<Elem>> = g.elements().map(|t| g.elements().filter(|&s| g.leq(s, t)).collect()).collect();
    let ctx = Search { g, above, below };
    let mut out = Vec::new();
    ctx.go(0, ElemSet::empty(n), ElemSet::empty(n), &mut out);
    out.sort();
    Ok(out)
}

struct Search<'a> {
    g: &'a InverseSemigroup,
    above: Vec<Vec<Elem>>,
    below: Vec<Vec<Elem>>,
}

impl Search<'_> {
    fn go(&self, next: usize, inside: ElemSet, outside: ElemSet, out: &mut Vec<ElemSet>) {
        let n = self.g.len();
        let Some(x) = (next..n).find(|&x| !inside.contains(x) && !outside.contains(x)) else {
            if !inside.is_empty() {
                debug_assert!(is_filter(self.g, &inside));
                out.push(inside);
            }
            return;
        };
        let (mut i, mut o) = (inside.clone(), outside.clone());
        if self.add_in(x, &mut i, &mut o) {
            self.go(x + 1, i, o, out);
        }
        let (i, mut o) = (inside, outside);
        if self.add_out(x, &i, &mut o) {
            self.go(x + 1, i, o, out);
        }
    }

    /// Adds `x` and everything it forces; false on conflict.
    fn add_in(&self, x: Elem, inside: &mut ElemSet, outside: &mut ElemSet) -> bool {
        let g = self.g;
        let mut stack = vec![x];
        while let Some(s) = stack.pop() {
            if inside.contains(s) {
                continue;
            }
            if outside.contains(s) {
                return false;
            }
            let members: Vec<Elem> = inside.iter().collect();
            inside.insert(s);
            stack.extend(self.above[s].iter().copied());
            let e = g.range_idempotent(s);
            stack.push(e);
            for t in members {
                stack.push(g.product(e, t));
                stack.push(g.product(g.range_idempotent(t), s));
            }
        }
        true
    }

    fn add_out(&self, x: Elem, inside: &ElemSet, outside: &mut ElemSet) -> bool {
        let g = self.g;
        let mut stack = vec![x];
        while let Some(t) = stack.pop() {
            if outside.contains(t) {
                continue;
            }
            if inside.contains(t) {
                return false;
            }
            outside.insert(t);
            stack.extend(self.below[t].iter().copied());
            if g.is_idempotent(t) {
                // s in ξ forces ss* in ξ
                stack.extend(g.elements().filter(|&s| g.range_idempotent(s) == t));
            }
        }
        true
    }
}
