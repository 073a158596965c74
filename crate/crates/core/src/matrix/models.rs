//! Small matrix models used by tests, the acceptance suite and the CLI.

use num_complex::Complex64;

use super::fell::{ConcreteFellBundle, RegularityData};
use super::subspace::{unit, CMatrix, MatrixSubspace, DEFAULT_TOL};
use crate::catalog;
use crate::semigroup::InverseSemigroup;

/// A bundle over a semigroup, with regularity data when it has some.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub semigroup: InverseSemigroup,
    pub bundle: ConcreteFellBundle,
    pub u: Option<RegularityData>,
}

fn span(n: usize, mats: &[CMatrix]) -> MatrixSubspace {
    MatrixSubspace::from_matrices(n, mats, DEFAULT_TOL).expect("model matrices have the right shape")
}

fn model(g: InverseSemigroup, n: usize, fibers: Vec<Vec<CMatrix>>, u: Option<Vec<CMatrix>>) -> MatrixModel {
    let fibers = fibers.iter().map(|m| span(n, m)).collect();
    let bundle = ConcreteFellBundle::new(&g, fibers).expect("one fiber per element");
    MatrixModel { semigroup: g, bundle, u: u.map(|u| RegularityData { u }) }
}

/// `A_0 = 0`, `A_e = ℂE11`, `A_f = ℂE22`, `A_s = ℂE12`, `A_t = ℂE21` in
/// `M_2`, with `u = (0, E11, E22, E12, E21)`.
pub fn five_element() -> MatrixModel {
    let e = |i, j| unit(2, i, j);
    model(
        catalog::five_element(),
        2,
        vec![vec![], vec![e(0, 0)], vec![e(1, 1)], vec![e(0, 1)], vec![e(1, 0)]],
        Some(vec![CMatrix::zeros(2, 2), e(0, 0), e(1, 1), e(0, 1), e(1, 0)]),
    )
}

/// The five-element model with `u_s = i·E12`, which makes `ω(t,s) = i·E22`.
pub fn five_element_twisted() -> MatrixModel {
    let mut m = five_element();
    if let Some(u) = &mut m.u {
        u.u[3] = unit(2, 0, 1) * Complex64::i();
    }
    m
}

/// The five-element model with `A_s = ℂE11`, which is not a Fell bundle.
pub fn five_element_corrupt() -> MatrixModel {
    let mut m = five_element();
    m.bundle.set_fiber(3, span(2, &[unit(2, 0, 0)]));
    m.u = None;
    m
}

/// `M_2` graded by `Z2`: diagonal over the identity, antidiagonal over the
/// generator, with `u = (I, X)`.
pub fn z2_graded() -> MatrixModel {
    let e = |i, j| unit(2, i, j);
    model(
        catalog::cyclic_group(2),
        2,
        vec![vec![e(0, 0), e(1, 1)], vec![e(0, 1), e(1, 0)]],
        Some(vec![CMatrix::identity(2, 2), e(0, 1) + e(1, 0)]),
    )
}

/// `ℂ` over the trivial group.
pub fn trivial() -> MatrixModel {
    model(catalog::trivial(), 1, vec![vec![unit(1, 0, 0)]], Some(vec![CMatrix::identity(1, 1)]))
}

/// Looks up a model by name: `five`, `five-twisted`, `five-corrupt`, `z2`,
/// `trivial`.
pub fn builtin(name: &str) -> Option<MatrixModel> {
    Some(match name {
        "five" => five_element(),
        "five-twisted" => five_element_twisted(),
        "five-corrupt" => five_element_corrupt(),
        "z2" => z2_graded(),
        "trivial" => trivial(),
        _ => return None,
    })
}

pub const BUILTIN_NAMES: [&str; 5] = ["five", "five-twisted", "five-corrupt", "z2", "trivial"];
