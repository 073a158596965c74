use num_complex::Complex64;

use super::fell::{check_regularity, close, domains_and_units, first_pair, ConcreteFellBundle, RegularityData};
use super::subspace::{generated_star_algebra, ideal_unit, CMatrix, MatrixSubspace};
use crate::error::{Error, Result};
use crate::expansion::ExpansionTable;
use crate::par;
use crate::report::Report;
use crate::semigroup::{Elem, InverseSemigroup};

/// A twisted partial action of `G` on a finite-dimensional `*`-algebra `B`.
///
/// `β_s: D_{s*} → D_s` is stored as its conjugating partial isometry
/// `conj[s]`, so `β_s(x) = conj[s]·x·conj[s]*`. The cocycle `ω(s,t)` is
/// `omega[s·|G| + t]`. Units `1_s` of the domains are computed once.
#[derive(Clone, Debug)]
pub struct TwistedPartialActionFD {
    b: MatrixSubspace,
    domains: Vec<MatrixSubspace>,
    units: Vec<CMatrix>,
    conj: Vec<CMatrix>,
    omega: Vec<CMatrix>,
}

impl TwistedPartialActionFD {
    pub fn new(
        b: MatrixSubspace,
        domains: Vec<MatrixSubspace>,
        conj: Vec<CMatrix>,
        omega: Vec<CMatrix>,
    ) -> Result<Self> {
        let k = domains.len();
        let n = b.n();
        if conj.len() != k || omega.len() != k * k {
            return Err(Error::DimensionMismatch(format!(
                "{k} domains need {k} conjugators and {} cocycle values",
                k * k
            )));
        }
        let bad_shape = |m: &CMatrix| m.nrows() != n || m.ncols() != n;
        if domains.iter().any(|d| d.n() != n) || conj.iter().any(bad_shape) || omega.iter().any(bad_shape) {
            return Err(Error::DimensionMismatch(format!("all data must live in M_{n}")));
        }
        let units = domains.iter().map(ideal_unit).collect::<Result<Vec<_>>>()?;
        Ok(TwistedPartialActionFD { b, domains, units, conj, omega })
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn tol(&self) -> f64 {
        self.b.tol()
    }

    pub fn algebra(&self) -> &MatrixSubspace {
        &self.b
    }

    pub fn domain(&self, s: Elem) -> &MatrixSubspace {
        &self.domains[s]
    }

    pub fn unit(&self, s: Elem) -> &CMatrix {
        &self.units[s]
    }

    pub fn conjugator(&self, s: Elem) -> &CMatrix {
        &self.conj[s]
    }

    pub fn omega(&self, s: Elem, t: Elem) -> &CMatrix {
        &self.omega[s * self.len() + t]
    }

    pub fn beta(&self, s: Elem, x: &CMatrix) -> CMatrix {
        &self.conj[s] * x * self.conj[s].adjoint()
    }

    /// Copy with `ω(s,t)` multiplied by `e^{iθ}`.
    pub fn with_omega_phase(&self, s: Elem, t: Elem, theta: f64) -> Self {
        let mut out = self.clone();
        let k = self.len();
        out.omega[s * k + t] *= Complex64::from_polar(1.0, theta);
        out
    }

    fn beta_image(&self, s: Elem, d: &MatrixSubspace) -> MatrixSubspace {
        let imgs: Vec<CMatrix> = d.basis().iter().map(|x| self.beta(s, x)).collect();
        MatrixSubspace::from_matrices(self.n(), &imgs, self.tol()).expect("shapes match")
    }

    fn close(&self, a: &CMatrix, b: &CMatrix) -> bool {
        close(a, b, self.tol())
    }
}

/// `D_s = A_s·A_s*`, `β_s = Ad u_s`, `ω(s,t) = u_s u_t u_{st}*`, acting on
/// the algebra `B` generated by the domains.
pub fn twisted_from_regular(
    g: &InverseSemigroup,
    bundle: &ConcreteFellBundle,
    u: &RegularityData,
) -> Result<TwistedPartialActionFD> {
    let reg = check_regularity(g, bundle, u)?;
    if let Some(c) = reg.first_failure() {
        return Err(Error::RegularityFailure(c.to_string()));
    }
    let (domains, _) = domains_and_units(bundle)?;
    let b = generated_star_algebra(bundle.n(), &domains, bundle.tol());
    let k = g.len();
    let omega = par::map_range(k * k, |i| {
        let (s, t) = (i / k, i % k);
        &u.u[s] * &u.u[t] * u.u[g.product(s, t)].adjoint()
    });
    TwistedPartialActionFD::new(b, domains, u.u.clone(), omega)
}

/// First `(r,s)` and basis element of `dom(r,s)` violating `ok`.
fn first_pair_on(
    g: &InverseSemigroup,
    dom: impl Fn(Elem, Elem) -> MatrixSubspace + Sync + Send,
    ok: impl Fn(Elem, Elem, &CMatrix) -> bool + Sync + Send,
) -> Option<String> {
    first_pair(g, |r, s| dom(r, s).basis().iter().any(|x| !ok(r, s, x)))
}

/// Every axiom of a twisted partial action, plus the structural facts the
/// axioms presuppose and the domain identities they imply. Each axiom is
/// tested on an orthonormal basis of the relevant ideal intersection.
pub fn check_twisted_partial_action(g: &InverseSemigroup, tpa: &TwistedPartialActionFD) -> Report {
    let mut r = Report::new();
    if tpa.len() != g.len() {
        r.fail("shape", format!("{} domains for {} elements", tpa.len(), g.len()));
        return r;
    }
    let d = |s: Elem| tpa.domain(s);
    let one = |s: Elem| tpa.unit(s);
    let inv = |s: Elem| g.inverse(s);
    let mul = |a: Elem, b: Elem| g.product(a, b);
    let n = tpa.n();

    // domains are ideals of B, products of ideals are intersections
    r.check(
        "ideals",
        g.elements()
            .find(|&s| !(tpa.algebra().product(d(s)).leq(d(s)) && d(s).product(tpa.algebra()).leq(d(s))))
            .map(|s| g.name(s)),
    );
    r.check(
        "ideals-commute",
        first_pair(g, |s, t| {
            let (st, ts, cap) = (d(s).product(d(t)), d(t).product(d(s)), d(s).intersection(d(t)));
            !(st.equals(&ts) && st.equals(&cap))
        }),
    );
    let total = g.elements().fold(MatrixSubspace::zero(n, tpa.tol()), |acc, s| acc.sum(d(s)));
    r.check(
        "span",
        (!total.equals(tpa.algebra())).then(|| format!("dims {} vs {}", total.dim(), tpa.algebra().dim())),
    );
    r.check(
        "beta-isomorphism",
        g.elements()
            .find(|&s| {
                let dom = d(inv(s));
                let b = dom.basis();
                !tpa.beta_image(s, dom).equals(d(s))
                    || b.iter().any(|x| !tpa.close(&tpa.beta(s, &x.adjoint()), &tpa.beta(s, x).adjoint()))
                    || b.iter().any(|x| {
                        b.iter().any(|y| !tpa.close(&tpa.beta(s, &(x * y)), &(tpa.beta(s, x) * tpa.beta(s, y))))
                    })
            })
            .map(|s| g.name(s)),
    );
    r.check(
        "omega-unitary",
        first_pair(g, |s, t| {
            let w = tpa.omega(s, t);
            let ideal = d(s).product(d(mul(s, t)));
            let u = ideal_unit(&ideal).unwrap_or_else(|_| CMatrix::zeros(n, n));
            !ideal.contains(w)
                || !tpa.close(&(w.adjoint() * w), &u)
                || !tpa.close(&(w * w.adjoint()), &u)
        }),
    );

    // (i) β_r(D_{r*} ∩ D_s) = D_r ∩ D_{rs}
    r.check(
        "axiom-i",
        first_pair(g, |a, s| {
            let src = d(inv(a)).intersection(d(s));
            !tpa.beta_image(a, &src).equals(&d(a).intersection(d(mul(a, s))))
        }),
    );
    // (ii) β_r β_s(x) = ω(r,s) β_{rs}(x) ω(r,s)* on D_{s*} ∩ D_{s*r*}
    r.check(
        "axiom-ii",
        first_pair_on(
            g,
            |a, s| d(inv(s)).intersection(d(mul(inv(s), inv(a)))),
            |a, s, x| {
                let w = tpa.omega(a, s);
                tpa.close(&tpa.beta(a, &tpa.beta(s, x)), &(w * tpa.beta(mul(a, s), x) * w.adjoint()))
            },
        ),
    );
    // (iii) β_r(x ω(s,t)) ω(r,st) = β_r(x) ω(r,s) ω(rs,t) on D_{r*} ∩ D_s ∩ D_{st}
    let k = g.len();
    let axiom_iii = par::find_first(k * k * k, |i| {
        let (a, s, t) = (i / (k * k), i / k % k, i % k);
        let dom = d(inv(a)).intersection(d(s)).intersection(d(mul(s, t)));
        dom.basis()
            .iter()
            .any(|x| {
                let lhs = tpa.beta(a, &(x * tpa.omega(s, t))) * tpa.omega(a, mul(s, t));
                let rhs = tpa.beta(a, x) * tpa.omega(a, s) * tpa.omega(mul(a, s), t);
                !tpa.close(&lhs, &rhs)
            })
            .then(|| format!("({},{},{})", g.name(a), g.name(s), g.name(t)))
    });
    r.check("axiom-iii", axiom_iii);
    // (iv) ω(e,f) = 1_{ef}; ω(r,r*r) = ω(rr*,r) = 1_r
    let idem: Vec<Elem> = g.idempotents().iter().collect();
    let bad_ef = idem
        .iter()
        .flat_map(|&e| idem.iter().map(move |&f| (e, f)))
        .find(|&(e, f)| !tpa.close(tpa.omega(e, f), one(mul(e, f))))
        .map(|(e, f)| format!("omega({},{})", g.name(e), g.name(f)));
    let bad_r = g
        .elements()
        .find_map(|a| {
            if !tpa.close(tpa.omega(a, g.domain_idempotent(a)), one(a)) {
                Some(format!("omega({},{})", g.name(a), g.name(g.domain_idempotent(a))))
            } else if !tpa.close(tpa.omega(g.range_idempotent(a), a), one(a)) {
                Some(format!("omega({},{})", g.name(g.range_idempotent(a)), g.name(a)))
            } else {
                None
            }
        });
    r.check("axiom-iv", bad_ef.or(bad_r));
    // (v) ω(s*,e) ω(s*e,s) x = ω(s*,s) x on D_{s*e}
    r.check(
        "axiom-v",
        first_pair(g, |s, e| {
            if !g.is_idempotent(e) {
                return false;
            }
            let se = mul(inv(s), e);
            let lhs_w = tpa.omega(inv(s), e) * tpa.omega(se, s);
            let rhs_w = tpa.omega(inv(s), s);
            d(se).basis().iter().any(|x| !tpa.close(&(&lhs_w * x), &(rhs_w * x)))
        }),
    );

    // consequences of the axioms
    r.check(
        "prop-domain-below-range",
        g.elements().find(|&s| !d(s).leq(d(g.range_idempotent(s)))).map(|s| g.name(s)),
    );
    r.check(
        "prop-beta-idempotent-identity",
        idem.iter()
            .find(|&&e| d(e).basis().iter().any(|x| !tpa.close(&tpa.beta(e, x), x)))
            .map(|&e| g.name(e)),
    );
    r.check(
        "prop-intersection-shift",
        first_pair(g, |s, t| {
            !d(s).intersection(d(t)).equals(&d(s).intersection(d(mul(g.range_idempotent(s), t))))
        }),
    );
    r.check(
        "prop-idempotent-cut",
        first_pair(g, |e, s| g.is_idempotent(e) && !d(e).intersection(d(s)).equals(d(mul(e, s)))),
    );
    r.check("prop-order-monotone", first_pair(g, |s, t| g.leq(s, t) && !d(s).leq(d(t))));
    r.check(
        "prop-preimage",
        first_pair(g, |s, a| {
            // β_s^{-1} = β_{s*} on D_s
            let pre = tpa.beta_image(inv(s), &d(s).intersection(d(inv(a))));
            !pre.equals(&d(inv(s)).intersection(d(mul(inv(s), inv(a)))))
        }),
    );
    r
}

/// Lifts `(β, ω)` over `G` to `S(G)`: `D̃_x = Π_{a∈A} D_a · D_r`,
/// `β̃_x = Ad((Π 1_a)·u_r)` and `ω̃(x,y) = ω(r,s)·1_{D̃_{xy}}` for
/// `x = eps_A[r]`, `y = eps_B[s]`. The report covers globality, all
/// axioms over `S(G)` and the restriction back along `ι`.
pub fn twisted_global_from_partial(
    table: &ExpansionTable,
    tpa: &TwistedPartialActionFD,
) -> Result<(TwistedPartialActionFD, Report)> {
    let g = table.source();
    let h = table.base();
    if tpa.len() != g.len() {
        return Err(Error::DimensionMismatch(format!("{} domains for {} elements", tpa.len(), g.len())));
    }
    let (n, tol) = (tpa.n(), tpa.tol());
    let domains: Vec<MatrixSubspace> = par::map_slice(table.elems(), |x| {
        let mut acc = tpa.domain(x.degree()).clone();
        for a in x.set().iter() {
            acc = tpa.domain(a).product(&acc);
        }
        acc
    });
    let conj: Vec<CMatrix> = table
        .elems()
        .iter()
        .map(|x| {
            let mut c = CMatrix::identity(n, n);
            for a in x.set().iter() {
                c *= tpa.unit(a);
            }
            c * tpa.conjugator(x.degree())
        })
        .collect();
    let k = table.len();
    let units = domains.iter().map(ideal_unit).collect::<Result<Vec<_>>>()?;
    let omega = par::map_range(k * k, |i| {
        let (x, y) = (i / k, i % k);
        let xy = h.product(x, y);
        tpa.omega(table.degree_of(x), table.degree_of(y)) * &units[xy]
    });
    let global = TwistedPartialActionFD::new(tpa.algebra().clone(), domains, conj, omega)?;

    let mut report = Report::new();
    if let Some(x) = h.elements().find(|&x| !global.domain(x).equals(global.domain(h.range_idempotent(x)))) {
        return Err(Error::GlobalityFailure(format!("domain of {} differs from domain of xx*", h.name(x))));
    }
    report.pass("globality");
    report.extend_prefixed("expanded-", check_twisted_partial_action(h, &global));
    let bad_dom = g.elements().find(|&s| !global.domain(table.iota(s)).equals(tpa.domain(s)));
    report.check("restriction-domains", bad_dom.map(|s| g.name(s)));
    let bad_beta = g.elements().find(|&s| {
        tpa.domain(g.inverse(s))
            .basis()
            .iter()
            .any(|x| !close(&global.beta(table.iota(s), x), &tpa.beta(s, x), tol))
    });
    report.check("restriction-beta", bad_beta.map(|s| g.name(s)));
    report.check(
        "restriction-omega",
        first_pair(g, |a, s| !close(global.omega(table.iota(a), table.iota(s)), tpa.omega(a, s), tol)),
    );
    Ok((global, report))
}

/// The regular bundle of a twisted partial action given by conjugators:
/// `A_s = span{d·u_s : d ∈ D_s}`.
pub fn bundle_from_twisted(
    g: &InverseSemigroup,
    tpa: &TwistedPartialActionFD,
) -> Result<(ConcreteFellBundle, RegularityData)> {
    let (n, tol) = (tpa.n(), tpa.tol());
    let fibers = g
        .elements()
        .map(|s| {
            let mats: Vec<CMatrix> = tpa.domain(s).basis().iter().map(|x| x * tpa.conjugator(s)).collect();
            MatrixSubspace::from_matrices(n, &mats, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let bundle = ConcreteFellBundle::new(g, fibers)?;
    Ok((bundle, RegularityData { u: tpa.conj.clone() }))
}

/// Largest deviation in `(A,u) → (β,ω) → (A',u') → (β',ω')`: fibers,
/// domains, cocycle values and `β` on domain bases.
pub fn twisted_round_trip_deviation(
    g: &InverseSemigroup,
    bundle: &ConcreteFellBundle,
    u: &RegularityData,
) -> Result<f64> {
    let tpa = twisted_from_regular(g, bundle, u)?;
    let (bundle2, u2) = bundle_from_twisted(g, &tpa)?;
    let tpa2 = twisted_from_regular(g, &bundle2, &u2)?;
    let mut dev: f64 = 0.0;
    for s in g.elements() {
        dev = dev.max(bundle.fiber(s).deviation(bundle2.fiber(s)));
        dev = dev.max(tpa.domain(s).deviation(tpa2.domain(s)));
        for x in tpa.domain(g.inverse(s)).basis() {
            dev = dev.max((tpa.beta(s, x) - tpa2.beta(s, x)).norm());
        }
        for t in g.elements() {
            dev = dev.max((tpa.omega(s, t) - tpa2.omega(s, t)).norm());
        }
    }
    Ok(dev)
}
