//! Words over the generators `[s]` and their reduction to normal form.
//!
//! [`reduce_to_normal_form`] folds the pair formula over the letters.
//! [`rewrite_steps`] reaches the same normal form by applying the defining
//! relations one at a time and records each step, so the two can be checked
//! against each other.

use std::fmt;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::expansion::{canonical_gen, product_unchecked, ExpElem};
use crate::semigroup::{Elem, InverseSemigroup};

pub const DEFAULT_STEP_LIMIT: usize = 10_000;

/// A nonempty product of generators `[s1][s2]...[sk]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Elem>,
}

impl Word {
    pub fn new(g: &InverseSemigroup, letters: Vec<Elem>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::parse(1, "empty word"));
        }
        if let Some(&bad) = letters.iter().find(|&&s| s >= g.len()) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Elem] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word { letters: self.letters.iter().chain(&other.letters).copied().collect() }
    }

    pub fn render(&self, g: &InverseSemigroup) -> String {
        self.letters.iter().map(|&s| format!("[{}]", g.name(s))).collect()
    }
}

/// Parses `[x] [y*] ...`, where `x` is an element name or id and a trailing
/// `*` inside the brackets denotes the inverse.
pub fn parse_word(text: &str, g: &InverseSemigroup) -> Result<Word> {
    let mut letters = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| Error::parse(1, format!("expected `[` at `{rest}`")))?;
        let close = body.find(']').ok_or_else(|| Error::parse(1, "unterminated `[`"))?;
        let token = body[..close].trim();
        let (name, star) = match token.strip_suffix('*') {
            Some(n) => (n.trim_end(), true),
            None => (token, false),
        };
        if name.is_empty() {
            return Err(Error::parse(1, "empty generator `[]`"));
        }
        let s = g.find(name).ok_or_else(|| Error::UnknownElement(name.to_string()))?;
        letters.push(if star { g.inverse(s) } else { s });
        rest = body[close + 1..].trim_start();
    }
    Word::new(g, letters)
}

/// Normal form of a word: the left fold of `[s1][s2]...` under the pair
/// product.
pub fn reduce_to_normal_form(g: &InverseSemigroup, w: &Word) -> ExpElem {
    let mut letters = w.letters.iter();
    let first = canonical_gen(g, *letters.next().expect("words are nonempty"));
    letters.fold(first, |acc, &s| product_unchecked(g, &acc, &canonical_gen(g, s)))
}

pub fn words_equal(g: &InverseSemigroup, w1: &Word, w2: &Word) -> bool {
    reduce_to_normal_form(g, w1) == reduce_to_normal_form(g, w2)
}

/// One factor of an intermediate term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `eps_s = [s][s*]`
    Eps(Elem),
    /// `[s]`; `absorbed` records that `eps_s` has already been split off.
    Br { s: Elem, absorbed: bool },
}

/// A product of factors, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn from_word(w: &Word) -> Term {
        Term { factors: w.letters.iter().map(|&s| Factor::Br { s, absorbed: false }).collect() }
    }

    /// Runs of `eps` factors are grouped as `eps{a,b}` in listed order.
    pub fn render(&self, g: &InverseSemigroup) -> String {
        let mut out = String::new();
        let mut run: Vec<String> = Vec::new();
        for f in &self.factors {
            match *f {
                Factor::Eps(s) => run.push(g.name(s)),
                Factor::Br { s, .. } => {
                    if !run.is_empty() {
                        out.push_str(&format!("eps{{{}}}", run.join(",")));
                        run.clear();
                    }
                    out.push_str(&format!("[{}]", g.name(s)));
                }
            }
        }
        if !run.is_empty() {
            out.push_str(&format!("eps{{{}}}", run.join(",")));
        }
        out
    }
}

/// Value of a term in `S(G)`.
pub fn evaluate_term(g: &InverseSemigroup, term: &Term) -> ExpElem {
    let value = |f: &Factor| match *f {
        Factor::Eps(s) => {
            let e = g.range_idempotent(s);
            ExpElem::from_parts(ElemSet::from_iter(g.len(), [e, s]), e)
        }
        Factor::Br { s, .. } => canonical_gen(g, s),
    };
    term.factors
        .iter()
        .map(value)
        .reduce(|acc, x| product_unchecked(g, &acc, &x))
        .expect("terms are nonempty")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `[s][t][t*] = [st][t*]`, used as `[t]eps_s = eps_{ts}[t]`.
    R1,
    /// `[s*][s][t] = [s*][st]`, used as `[t][r] = eps_t[tr]`.
    R2,
    /// `[s][s*][s] = [s]`, used as `[r] = eps_r[r]`.
    R3,
    /// `eps_C[u] = eps_{pC}[pu]` with `p = c1c1*...cncn* uu*`.
    Reductor,
    /// Reorders and deduplicates the commuting `eps` factors and adds
    /// `eps_u`, `eps_{uu*}`.
    NormShape,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::Reductor => "Reductor",
            Rule::NormShape => "NormShape",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub before: Term,
    pub after: Term,
    before_text: String,
    after_text: String,
}

/// Steps taken by [`rewrite_steps`]; displays as `RULE: before => after`
/// lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{}: {} => {}", s.rule, s.before_text, s.after_text)?;
        }
        Ok(())
    }
}

/// Reduces `w` by relation-level rewriting and checks the result against
/// [`reduce_to_normal_form`].
///
/// Rule priority is R3, then R2, then R1, then Reductor, then NormShape,
/// each applied at the leftmost redex.
pub fn rewrite_steps(g: &InverseSemigroup, w: &Word, max_steps: usize) -> Result<(ExpElem, RewriteTrace)> {
    let (result, trace) = rewrite_term(g, Term::from_word(w), max_steps)?;
    let expected = reduce_to_normal_form(g, w);
    if result != expected {
        return Err(Error::OracleMismatch(format!(
            "{}: rewriting gave {} but fold gave {}",
            w.render(g),
            result.render(g),
            expected.render(g)
        )));
    }
    Ok((result, trace))
}

/// Applies the highest-priority applicable rule, if any.
fn step(g: &InverseSemigroup, term: &Term) -> Option<(Rule, Term)> {
    let fs = &term.factors;
    let splice = |i: usize, len: usize, with: &[Factor]| {
        let mut factors = fs[..i].to_vec();
        factors.extend_from_slice(with);
        factors.extend_from_slice(&fs[i + len..]);
        Term { factors }
    };

    if let Some(i) = fs.iter().position(|f| matches!(f, Factor::Br { absorbed: false, .. })) {
        let Factor::Br { s, .. } = fs[i] else { unreachable!() };
        return Some((Rule::R3, splice(i, 1, &[Factor::Eps(s), Factor::Br { s, absorbed: true }])));
    }
    for i in 0..fs.len().saturating_sub(1) {
        if let (Factor::Br { s: t, .. }, Factor::Br { s: r, .. }) = (fs[i], fs[i + 1]) {
            let merged = [Factor::Eps(t), Factor::Br { s: g.product(t, r), absorbed: true }];
            return Some((Rule::R2, splice(i, 2, &merged)));
        }
    }
    for i in 0..fs.len().saturating_sub(1) {
        if let (Factor::Br { s: t, absorbed }, Factor::Eps(s)) = (fs[i], fs[i + 1]) {
            let pushed = [Factor::Eps(g.product(t, s)), Factor::Br { s: t, absorbed }];
            return Some((Rule::R1, splice(i, 2, &pushed)));
        }
    }

    // Only eps_C[u] remains.
    let (u, absorbed, eps) = split_shape(term)?;
    let e = g.range_idempotent(u);
    if eps.iter().any(|&c| g.range_idempotent(c) != e) {
        let p = eps.iter().fold(e, |acc, &c| g.product(acc, g.range_idempotent(c)));
        let mut factors: Vec<Factor> = eps.iter().map(|&c| Factor::Eps(g.product(p, c))).collect();
        factors.push(Factor::Br { s: g.product(p, u), absorbed });
        return Some((Rule::Reductor, Term { factors }));
    }
    let mut set = ElemSet::from_iter(g.len(), eps.iter().copied());
    set.insert(u);
    set.insert(e);
    let mut factors: Vec<Factor> = set.iter().map(Factor::Eps).collect();
    factors.push(Factor::Br { s: u, absorbed });
    let shaped = Term { factors };
    (shaped != *term).then_some((Rule::NormShape, shaped))
}

/// Splits `eps_{c1}...eps_{cn}[u]` into `(u, absorbed, [c1..cn])`.
fn split_shape(term: &Term) -> Option<(Elem, bool, Vec<Elem>)> {
    let (last, init) = term.factors.split_last()?;
    let Factor::Br { s: u, absorbed } = *last else { return None };
    let eps = init
        .iter()
        .map(|f| match *f {
            Factor::Eps(c) => Some(c),
            Factor::Br { .. } => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some((u, absorbed, eps))
}

fn read_normal_form(g: &InverseSemigroup, term: &Term) -> Result<ExpElem> {
    let (u, _, eps) = split_shape(term)
        .ok_or_else(|| Error::InternalInconsistency(format!("rewriting stopped at {}", term.render(g))))?;
    ExpElem::new(g, ElemSet::from_iter(g.len(), eps), u)
}

/// Reduces an arbitrary term by rewriting and checks the result against
/// [`evaluate_term`].
pub fn rewrite_term(g: &InverseSemigroup, term: Term, max_steps: usize) -> Result<(ExpElem, RewriteTrace)> {
    let expected = evaluate_term(g, &term);
    let mut term = term;
    let mut trace = RewriteTrace::default();
    while let Some((rule, next)) = step(g, &term) {
        if trace.len() == max_steps {
            return Err(Error::StepLimitExceeded { limit: max_steps, trace: Box::new(trace) });
        }
        trace.steps.push(RewriteStep {
            rule,
            before_text: term.render(g),
            after_text: next.render(g),
            before: term,
            after: next.clone(),
        });
        term = next;
    }
    let result = read_normal_form(g, &term)?;
    if result != expected {
        return Err(Error::OracleMismatch(format!("rewriting gave {} but product gave {}", result.render(g), expected.render(g))));
    }
    Ok((result, trace))
}
