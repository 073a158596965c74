//! Built-in inverse semigroups used by the tests, the acceptance suite and
//! the command line (`builtin:<name>`).

use crate::error::{Error, Result};
use crate::semigroup::InverseSemigroup;

/// The one-element group.
pub fn trivial() -> InverseSemigroup {
    cyclic_group(1)
}

/// `{0, e, f, s, t}` with `s^2 = 0`, `t = s*`, `ss* = e`, `s*s = f`; the
/// five matrix units of `M_2` together with zero.
pub fn five_element() -> InverseSemigroup {
    #[rustfmt::skip]
    let table = vec![
        0, 0, 0, 0, 0,
        0, 1, 0, 3, 0,
        0, 0, 2, 0, 4,
        0, 0, 3, 0, 1,
        0, 4, 0, 2, 0,
    ];
    let names = ["0", "e", "f", "s", "t"].map(String::from).to_vec();
    InverseSemigroup::from_table(5, table, Some(names)).expect("five-element table is valid")
}

/// The cyclic group of order `m`, elements named `g0..g{m-1}`.
pub fn cyclic_group(m: usize) -> InverseSemigroup {
    assert!(m >= 1);
    let table = (0..m).flat_map(|a| (0..m).map(move |b| ((a + b) % m) as u32)).collect();
    let inv = (0..m).map(|a| ((m - a) % m) as u32).collect();
    let names = (0..m).map(|a| format!("g{a}")).collect();
    InverseSemigroup::from_trusted_parts(m, table, inv, Some(names))
}

/// Klein four-group `Z2 x Z2`, elements `1, a, b, c`.
pub fn klein_four() -> InverseSemigroup {
    let table = (0..4u32).flat_map(|a| (0..4u32).map(move |b| a ^ b)).collect();
    let names = ["1", "a", "b", "c"].map(String::from).to_vec();
    InverseSemigroup::from_trusted_parts(4, table, vec![0, 1, 2, 3], Some(names))
}

/// Partial bijections of `{1..k}` under composition `(ab)(x) = a(b(x))`.
///
/// Elements are named by their image word: position `i` holds the image of
/// `i` (1-based) or `-` when undefined, e.g. `21` is the swap on two points.
pub fn symmetric_inverse_monoid(k: usize) -> Result<InverseSemigroup> {
    if k > 4 {
        return Err(Error::TooLarge { what: "symmetric inverse monoid points", size: k as u128, cap: 4 });
    }
    let maps = partial_bijections(k);
    let index = |m: &[Option<u8>]| maps.iter().position(|x| x.as_slice() == m).expect("closed");
    let n = maps.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &maps {
        for b in &maps {
            let c: Vec<Option<u8>> = b.iter().map(|&x| x.and_then(|y| a[y as usize])).collect();
            table.push(index(&c) as u32);
        }
    }
    let inv = maps
        .iter()
        .map(|a| {
            let mut r = vec![None; k];
            for (x, &y) in a.iter().enumerate() {
                if let Some(y) = y {
                    r[y as usize] = Some(x as u8);
                }
            }
            index(&r) as u32
        })
        .collect();
    let names = maps
        .iter()
        .map(|m| {
            if k == 0 {
                return "0".to_string();
            }
            m.iter()
                .map(|x| match x {
                    Some(y) => char::from(b'1' + y),
                    None => '-',
                })
                .collect()
        })
        .collect();
    Ok(InverseSemigroup::from_trusted_parts(n, table, inv, Some(names)))
}

/// All injective partial maps on `k` points, lexicographic with "undefined"
/// before every point.
fn partial_bijections(k: usize) -> Vec<Vec<Option<u8>>> {
    fn go(k: usize, cur: &mut Vec<Option<u8>>, used: &mut [bool], out: &mut Vec<Vec<Option<u8>>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(k, cur, used, out);
        cur.pop();
        for y in 0..k {
            if !used[y] {
                used[y] = true;
                cur.push(Some(y as u8));
                go(k, cur, used, out);
                cur.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Resolves a built-in name: `trivial`, `five`, `Z<m>`, `V4`, `I<k>`, `EI<k>`.
pub fn builtin(name: &str) -> Option<InverseSemigroup> {
    match name {
        "trivial" => return Some(trivial()),
        "five" => return Some(five_element()),
        "V4" | "klein" => return Some(klein_four()),
        _ => {}
    }
    if let Some(m) = name.strip_prefix('Z').and_then(|m| m.parse::<usize>().ok()) {
        return (1..=64).contains(&m).then(|| cyclic_group(m));
    }
    if let Some(k) = name.strip_prefix("EI").and_then(|k| k.parse::<usize>().ok()) {
        return symmetric_inverse_monoid(k).ok().map(|s| s.idempotent_semilattice());
    }
    if let Some(k) = name.strip_prefix('I').and_then(|k| k.parse::<usize>().ok()) {
        return symmetric_inverse_monoid(k).ok();
    }
    None
}

/// The semigroups every structural check is run against: all groups of
/// order at most 4, `E(I2)`, `E(I3)`, `I2`, `I3` and the five-element example.
pub fn standard_suite() -> Vec<(&'static str, InverseSemigroup)> {
    ["Z1", "Z2", "Z3", "Z4", "V4", "EI2", "EI3", "I2", "I3", "five"]
        .into_iter()
        .map(|n| (n, builtin(n).expect("known builtin")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        // sum_j C(k,j)^2 j!
        for k in 0..=4u64 {
            let expected: u64 = (0..=k).map(|j| binomial(k, j).pow(2) * (1..=j).product::<u64>()).sum();
            assert_eq!(symmetric_inverse_monoid(k as usize).unwrap().len() as u64, expected);
        }
        assert_eq!(symmetric_inverse_monoid(1).unwrap().len(), 2);
        assert_eq!(symmetric_inverse_monoid(2).unwrap().len(), 7);
        assert_eq!(symmetric_inverse_monoid(3).unwrap().len(), 34);
        assert!(matches!(symmetric_inverse_monoid(5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn symmetric_inverse_monoid_passes_validation() {
        for k in 0..=3 {
            let s = symmetric_inverse_monoid(k).unwrap();
            let reloaded = InverseSemigroup::parse_cayley(&s.to_cayley_string()).unwrap();
            assert_eq!(reloaded, s);
        }
    }

    #[test]
    fn groups_validate() {
        for m in 1..=6 {
            let g = cyclic_group(m);
            assert_eq!(InverseSemigroup::from_table(m, g.table().to_vec(), None).unwrap().table(), g.table());
        }
        let v = klein_four();
        InverseSemigroup::from_table(4, v.table().to_vec(), None).unwrap();
    }

    #[test]
    fn builtins_resolve() {
        assert_eq!(builtin("I2").unwrap().len(), 7);
        assert_eq!(builtin("EI2").unwrap().len(), 4);
        assert_eq!(builtin("EI3").unwrap().len(), 8);
        assert_eq!(builtin("Z4").unwrap().len(), 4);
        assert!(builtin("Q8").is_none());
        assert_eq!(standard_suite().len(), 10);
    }
}
