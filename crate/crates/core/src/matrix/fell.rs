use super::subspace::{ideal_unit, CMatrix, MatrixSubspace};
use crate::error::{Error, Result};
use crate::expansion::ExpansionTable;
use crate::par;
use crate::report::Report;
use crate::semigroup::{Elem, InverseSemigroup};

/// One matrix subspace `A_s ⊆ M_n` per element of `G`.
#[derive(Clone, Debug)]
pub struct ConcreteFellBundle {
    fibers: Vec<MatrixSubspace>,
}

impl ConcreteFellBundle {
    pub fn new(g: &InverseSemigroup, fibers: Vec<MatrixSubspace>) -> Result<Self> {
        if fibers.len() != g.len() {
            return Err(Error::DimensionMismatch(format!("{} fibers for {} elements", fibers.len(), g.len())));
        }
        if fibers.is_empty() {
            return Err(Error::DimensionMismatch("bundle over an empty semigroup".into()));
        }
        let n = fibers[0].n();
        if let Some(f) = fibers.iter().find(|f| f.n() != n) {
            return Err(Error::DimensionMismatch(format!("fibers in M_{n} and M_{}", f.n())));
        }
        Ok(ConcreteFellBundle { fibers })
    }

    pub fn n(&self) -> usize {
        self.fibers[0].n()
    }

    pub fn tol(&self) -> f64 {
        self.fibers[0].tol()
    }

    pub fn fiber(&self, s: Elem) -> &MatrixSubspace {
        &self.fibers[s]
    }

    pub fn fibers(&self) -> &[MatrixSubspace] {
        &self.fibers
    }

    pub fn set_fiber(&mut self, s: Elem, fiber: MatrixSubspace) {
        assert_eq!(fiber.n(), self.n());
        self.fibers[s] = fiber;
    }
}

/// First pair `(s,t)` in row-major order for which `bad` holds.
pub(crate) fn first_pair(g: &InverseSemigroup, bad: impl Fn(Elem, Elem) -> bool + Sync + Send) -> Option<String> {
    let n = g.len();
    par::find_first(n * n, |i| bad(i / n, i % n).then_some(i))
        .map(|i| format!("({},{})", g.name(i / n), g.name(i % n)))
}

/// Checks `A_s A_t ⊆ A_{st}`, `A_s* ⊆ A_{s*}` and `s ≤ t ⇒ A_s ⊆ A_t`,
/// plus the ternary-ring identity `A_s A_s* A_s = A_s`.
pub fn check_concrete_fell_bundle(g: &InverseSemigroup, bundle: &ConcreteFellBundle) -> Report {
    let a = |s: Elem| bundle.fiber(s);
    let mut r = Report::new();
    r.check("product-inclusion", first_pair(g, |s, t| !a(s).product(a(t)).leq(a(g.product(s, t)))));
    r.check(
        "adjoint-inclusion",
        g.elements().find(|&s| !a(s).adjoint().leq(a(g.inverse(s)))).map(|s| g.name(s)),
    );
    r.check("order-monotone", first_pair(g, |s, t| g.leq(s, t) && !a(s).leq(a(t))));
    r.check(
        "ternary-ring",
        g.elements()
            .find(|&s| !a(s).product(&a(s).adjoint()).product(a(s)).equals(a(s)))
            .map(|s| g.name(s)),
    );
    // a*a lies in A_{s*s}; given concretely this is the positivity condition
    let pos = g.elements().find(|&s| {
        let target = a(g.domain_idempotent(s));
        a(s).basis().iter().any(|x| !target.contains(&(x.adjoint() * x)))
    });
    match pos {
        None => r.info("positivity", "a*a in A_{s*s} for every basis element"),
        Some(s) => r.info("positivity", format!("a*a outside A_{{s*s}} at {}", g.name(s))),
    }
    r
}

/// First pair with `A_s·A_t ≠ A_{st}`, if any.
pub fn saturation_witness(g: &InverseSemigroup, bundle: &ConcreteFellBundle) -> Option<String> {
    first_pair(g, |s, t| !bundle.fiber(s).product(bundle.fiber(t)).equals(bundle.fiber(g.product(s, t))))
}

/// The bundle over `S(G)` with fiber `A_{a1}A_{a1*}···A_{ak}A_{ak*}·A_t`
/// over `eps_A[t]`. Fails if the result is not a saturated Fell bundle.
pub fn expand_bundle(table: &ExpansionTable, bundle: &ConcreteFellBundle) -> Result<ConcreteFellBundle> {
    let g = table.source();
    let fibers: Vec<MatrixSubspace> = table
        .elems()
        .iter()
        .map(|x| {
            let mut f: Option<MatrixSubspace> = None;
            for a in x.set().iter() {
                let eps = bundle.fiber(a).product(bundle.fiber(g.inverse(a)));
                f = Some(match f {
                    None => eps,
                    Some(acc) => acc.product(&eps),
                });
            }
            f.expect("normal-form sets are nonempty").product(bundle.fiber(x.degree()))
        })
        .collect();
    let expanded = ConcreteFellBundle::new(table.base(), fibers)?;
    let report = check_concrete_fell_bundle(table.base(), &expanded);
    if let Some(c) = report.first_failure() {
        return Err(Error::SaturationFailure(format!("expanded bundle is not a Fell bundle: {c}")));
    }
    if let Some(w) = saturation_witness(table.base(), &expanded) {
        return Err(Error::SaturationFailure(w));
    }
    Ok(expanded)
}

/// For each `s`, the fibers over `x` with degree `s` span exactly `A_s`;
/// and all fibers of both bundles span the same space.
pub fn check_span_refinement(
    table: &ExpansionTable,
    bundle: &ConcreteFellBundle,
    expanded: &ConcreteFellBundle,
) -> Report {
    let g = table.source();
    let (n, tol) = (bundle.n(), bundle.tol());
    let mut r = Report::new();
    let bad = g.elements().find(|&s| {
        let mut acc = MatrixSubspace::zero(n, tol);
        for x in (0..table.len()).filter(|&x| table.degree_of(x) == s) {
            acc = acc.sum(expanded.fiber(x));
        }
        !acc.equals(bundle.fiber(s))
    });
    r.check("fiberwise-span", bad.map(|s| g.name(s)));
    let total = |b: &ConcreteFellBundle| b.fibers().iter().fold(MatrixSubspace::zero(n, tol), |acc, f| acc.sum(f));
    let (a, b) = (total(bundle), total(expanded));
    r.check("total-span", (!a.equals(&b)).then(|| format!("dims {} vs {}", a.dim(), b.dim())));
    r.check(
        "fibers-inside-degree-fiber",
        (0..table.len())
            .find(|&x| !expanded.fiber(x).leq(bundle.fiber(table.degree_of(x))))
            .map(|x| table.base().name(x)),
    );
    r
}

/// Partial isometries `u_s` implementing a regular bundle.
#[derive(Clone, Debug)]
pub struct RegularityData {
    pub u: Vec<CMatrix>,
}

/// `D_s = A_s·A_s*` for every `s`, with its unit `1_s`.
pub(crate) fn domains_and_units(bundle: &ConcreteFellBundle) -> Result<(Vec<MatrixSubspace>, Vec<CMatrix>)> {
    let domains: Vec<MatrixSubspace> = bundle.fibers().iter().map(|a| a.product(&a.adjoint())).collect();
    let units = domains.iter().map(ideal_unit).collect::<Result<Vec<_>>>()?;
    Ok((domains, units))
}

pub(crate) fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn span_of(n: usize, mats: Vec<CMatrix>, tol: f64) -> MatrixSubspace {
    MatrixSubspace::from_matrices(n, &mats, tol).expect("shapes match")
}

/// Checks `u_s A_s* = A_s·A_s*`, `A_s* u_s = A_s*·A_s`, `u_s u_s* = 1_s`,
/// `u_s* u_s = 1_{s*}` and `u_e = 1_e`, where `1_s` is the unit of
/// `A_s·A_s*`.
pub fn check_regularity(g: &InverseSemigroup, bundle: &ConcreteFellBundle, u: &RegularityData) -> Result<Report> {
    let (n, tol) = (bundle.n(), bundle.tol());
    if u.u.len() != g.len() || u.u.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(Error::DimensionMismatch("regularity data must hold one n×n matrix per element".into()));
    }
    let (domains, units) = domains_and_units(bundle)?;
    let a = |s: Elem| bundle.fiber(s);
    let mut r = Report::new();
    r.check(
        "u-range",
        g.elements()
            .find(|&s| {
                let left = span_of(n, a(s).basis().iter().map(|x| &u.u[s] * x.adjoint()).collect(), tol);
                !left.equals(&domains[s])
            })
            .map(|s| g.name(s)),
    );
    r.check(
        "u-domain",
        g.elements()
            .find(|&s| {
                let adj = a(s).adjoint();
                let right = span_of(n, adj.basis().iter().map(|x| x * &u.u[s]).collect(), tol);
                !right.equals(&adj.product(a(s)))
            })
            .map(|s| g.name(s)),
    );
    r.check(
        "u-coisometry",
        g.elements().find(|&s| !close(&(&u.u[s] * u.u[s].adjoint()), &units[s], tol)).map(|s| g.name(s)),
    );
    r.check(
        "u-isometry",
        g.elements()
            .find(|&s| !close(&(u.u[s].adjoint() * &u.u[s]), &units[g.inverse(s)], tol))
            .map(|s| g.name(s)),
    );
    r.check(
        "u-idempotent",
        g.idempotents().iter().find(|&e| !close(&u.u[e], &units[e], tol)).map(|e| g.name(e)),
    );
    Ok(r)
}
