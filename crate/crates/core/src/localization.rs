//! Multiplicative systems, the cubic scaling relation and the localized
//! structure `S⁻¹T`.
//!
//! Fractions are pairs `(a, s)` with `s ∈ S`. Two fractions are related when
//! some `u ∈ S` and modes `γ, δ, η` give
//! `{u, a, {t,t,t}_γ}_δ = {u, b, {s,s,s}_η}_δ`. That relation need not be
//! transitive or compatible with the operations, so `S⁻¹T` is built as the
//! smallest congruence containing it. Whether the congruence adds anything is
//! reported as `raw_equals_closure`.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{MapSearch, DEFAULT_NODE_BUDGET};
use crate::par;
use crate::semiring::{Elem, GammaSemiring, Mode};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativeSystem {
    members: Vec<Elem>,
    generators: Vec<Elem>,
}

impl MultiplicativeSystem {
    /// Checks `0 ∉ S` and closure under every ternary product.
    pub fn new(t: &GammaSemiring, members: &[Elem]) -> Result<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::input("multiplicative system must be nonempty"));
        }
        if let Some(&e) = sorted.iter().find(|&&e| e >= t.size()) {
            return Err(Error::input(format!("element {e} outside carrier")));
        }
        if sorted[0] == 0 {
            return Err(Error::precondition("degenerate system: 0 belongs to S"));
        }
        for &a in &sorted {
            for &b in &sorted {
                for &c in &sorted {
                    for g in 0..t.gamma_count() {
                        let v = t.tern(a, b, c, g);
                        if sorted.binary_search(&v).is_err() {
                            return Err(Error::precondition(format!(
                                "S is not closed: {{{a},{b},{c}}}_{} = {v}",
                                t.gamma_labels()[g]
                            )));
                        }
                    }
                }
            }
        }
        Ok(MultiplicativeSystem {
            generators: sorted.clone(),
            members: sorted,
        })
    }

    /// Sorted members.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn index_of(&self, e: Elem) -> Option<usize> {
        self.members.binary_search(&e).ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Least superset of `seed` closed under all ternary products.
pub fn close_multiplicative(t: &GammaSemiring, seed: &[Elem]) -> Result<MultiplicativeSystem> {
    if seed.is_empty() {
        return Err(Error::input("seed must be nonempty"));
    }
    if let Some(&e) = seed.iter().find(|&&e| e >= t.size()) {
        return Err(Error::input(format!("seed element {e} outside carrier")));
    }
    let mut inside = vec![false; t.size()];
    for &s in seed {
        inside[s] = true;
    }
    loop {
        let current: Vec<Elem> = (0..t.size()).filter(|&e| inside[e]).collect();
        if inside[0] {
            return Err(Error::precondition(format!(
                "degenerate system: closure of {seed:?} reaches 0"
            )));
        }
        let mut grew = false;
        for &a in &current {
            for &b in &current {
                for &c in &current {
                    for g in 0..t.gamma_count() {
                        let v = t.tern(a, b, c, g);
                        if !inside[v] {
                            inside[v] = true;
                            grew = true;
                        }
                    }
                }
            }
        }
        if !grew {
            let mut generators = seed.to_vec();
            generators.sort_unstable();
            generators.dedup();
            return Ok(MultiplicativeSystem {
                members: current,
                generators,
            });
        }
    }
}

/// `u ∈ S` and modes `(γ, δ, η)` certifying `(a,s) ∼ (b,t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicWitness {
    pub u: Elem,
    pub gamma: Mode,
    pub delta: Mode,
    pub eta: Mode,
}

impl CubicWitness {
    /// Both sides of the cubic scaling identity.
    pub fn sides(&self, t: &GammaSemiring, a: Elem, s: Elem, b: Elem, tt: Elem) -> (Elem, Elem) {
        (
            t.tern(self.u, a, t.cube(tt, self.gamma), self.delta),
            t.tern(self.u, b, t.cube(s, self.eta), self.delta),
        )
    }
}

fn first_witness(t: &GammaSemiring, sys: &MultiplicativeSystem, a: Elem, s: Elem, b: Elem, tt: Elem) -> Option<CubicWitness> {
    let g = t.gamma_count();
    for &u in sys.members() {
        for gamma in 0..g {
            let left_inner = t.cube(tt, gamma);
            for delta in 0..g {
                let left = t.tern(u, a, left_inner, delta);
                for eta in 0..g {
                    if left == t.tern(u, b, t.cube(s, eta), delta) {
                        return Some(CubicWitness { u, gamma, delta, eta });
                    }
                }
            }
        }
    }
    None
}

/// First witness in `(u, γ, δ, η)` order for `(a,s) ∼ (b,t)`, if any.
pub fn cubic_related(
    t: &GammaSemiring,
    sys: &MultiplicativeSystem,
    a: Elem,
    s: Elem,
    b: Elem,
    tt: Elem,
) -> Result<Option<CubicWitness>> {
    for (name, v) in [("a", a), ("b", b)] {
        if v >= t.size() {
            return Err(Error::input(format!("{name} = {v} outside carrier")));
        }
    }
    for (name, v) in [("s", s), ("t", tt)] {
        if !sys.contains(v) {
            return Err(Error::precondition(format!("{name} = {v} is not in S")));
        }
    }
    Ok(first_witness(t, sys, a, s, b, tt))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeRule {
    /// The two fractions satisfy the cubic identity.
    Cubic,
    /// Forced by compatibility with the induced ternary product.
    Ternary,
    /// Forced by compatibility with common-denominator addition.
    Addition,
}

/// One union performed while building the congruence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeStep {
    pub rule: MergeRule,
    pub left: (Elem, Elem),
    pub right: (Elem, Elem),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedSemiring {
    system: MultiplicativeSystem,
    /// Fractions `(a, s)` in lexicographic order.
    pairs: Vec<(Elem, Elem)>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    quotient: GammaSemiring,
    raw_equals_closure: bool,
    raw_class_count: usize,
    steps: Vec<MergeStep>,
}

impl LocalizedSemiring {
    pub fn system(&self) -> &MultiplicativeSystem {
        &self.system
    }

    /// The quotient as a structure in its own right; class `0` is `0/s`.
    pub fn quotient(&self) -> &GammaSemiring {
        &self.quotient
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class of the fraction `a/s`.
    pub fn class_of(&self, a: Elem, s: Elem) -> Option<usize> {
        let si = self.system.index_of(s)?;
        self.class_of.get(a * self.system.len() + si).copied()
    }

    /// Lexicographically minimal representative of each class.
    pub fn representatives(&self) -> Vec<(Elem, Elem)> {
        self.classes.iter().map(|c| self.pairs[c[0]]).collect()
    }

    pub fn members(&self, class: usize) -> Vec<(Elem, Elem)> {
        self.classes[class].iter().map(|&p| self.pairs[p]).collect()
    }

    pub fn raw_equals_closure(&self) -> bool {
        self.raw_equals_closure
    }

    /// Number of classes of the equivalence generated by the cubic relation
    /// alone (before operation compatibility).
    pub fn raw_class_count(&self) -> usize {
        self.raw_class_count
    }

    pub fn steps(&self) -> &[MergeStep] {
        &self.steps
    }
}

struct FractionSpace<'a> {
    t: &'a GammaSemiring,
    sys: &'a MultiplicativeSystem,
    k: usize,
}

impl FractionSpace<'_> {
    fn index(&self, a: Elem, si: usize) -> usize {
        a * self.k + si
    }

    fn split(&self, p: usize) -> (Elem, usize) {
        (p / self.k, p % self.k)
    }

    fn pair(&self, p: usize) -> (Elem, Elem) {
        let (a, si) = self.split(p);
        (a, self.sys.members()[si])
    }

    fn tern(&self, p: usize, q: usize, r: usize, g: Mode) -> usize {
        let (a, sa) = self.pair(p);
        let (b, sb) = self.pair(q);
        let (c, sc) = self.pair(r);
        let num = self.t.tern(a, b, c, g);
        let den = self.t.tern(sa, sb, sc, g);
        self.index(num, self.sys.index_of(den).expect("S is closed"))
    }
}

/// Builds `S⁻¹T` as the congruence generated by the cubic relation.
pub fn localize(t: &GammaSemiring, sys: &MultiplicativeSystem) -> Result<LocalizedSemiring> {
    let space = FractionSpace { t, sys, k: sys.len() };
    let n_pairs = t.size() * sys.len();
    let raw: Vec<Vec<bool>> = par::map_range(n_pairs, |p| {
        let (a, s) = space.pair(p);
        (0..n_pairs)
            .map(|q| {
                let (b, tt) = space.pair(q);
                first_witness(t, sys, a, s, b, tt).is_some()
            })
            .collect()
    });

    let mut uf = UnionFind::new(n_pairs);
    let mut steps = Vec::new();
    for p in 0..n_pairs {
        for q in p + 1..n_pairs {
            if raw[p][q] && uf.union(p, q) {
                steps.push(MergeStep {
                    rule: MergeRule::Cubic,
                    left: space.pair(p),
                    right: space.pair(q),
                });
            }
        }
    }
    let raw_class_count = uf.clone().labels().1;

    loop {
        let mut merged = false;
        // ternary compatibility in each slot
        for p in 0..n_pairs {
            let r = uf.find(p);
            if r == p {
                continue;
            }
            for q1 in 0..n_pairs {
                for q2 in 0..n_pairs {
                    for g in 0..t.gamma_count() {
                        for slot in 0..3 {
                            let (x, y) = match slot {
                                0 => (space.tern(p, q1, q2, g), space.tern(r, q1, q2, g)),
                                1 => (space.tern(q1, p, q2, g), space.tern(q1, r, q2, g)),
                                _ => (space.tern(q1, q2, p, g), space.tern(q1, q2, r, g)),
                            };
                            if uf.union(x, y) {
                                merged = true;
                                steps.push(MergeStep {
                                    rule: MergeRule::Ternary,
                                    left: space.pair(x),
                                    right: space.pair(y),
                                });
                            }
                        }
                    }
                }
            }
        }
        // addition over common denominators
        let mut sums: HashMap<(usize, usize), usize> = HashMap::new();
        for si in 0..sys.len() {
            for a in 0..t.size() {
                for b in 0..t.size() {
                    let key = (uf.find(space.index(a, si)), uf.find(space.index(b, si)));
                    let sum = space.index(t.add(a, b), si);
                    match sums.get(&key) {
                        Some(&first) => {
                            if uf.union(first, sum) {
                                merged = true;
                                steps.push(MergeStep {
                                    rule: MergeRule::Addition,
                                    left: space.pair(first),
                                    right: space.pair(sum),
                                });
                            }
                        }
                        None => {
                            sums.insert(key, sum);
                        }
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }

    let (class_of, count) = uf.labels();
    let mut classes = vec![Vec::new(); count];
    for (p, &c) in class_of.iter().enumerate() {
        classes[c].push(p);
    }
    let raw_equals_closure = classes
        .iter()
        .all(|members| members.iter().all(|&p| members.iter().all(|&q| raw[p][q])));

    // smallest numerator per (class, denominator)
    let mut by_denominator = vec![vec![None; sys.len()]; count];
    for p in 0..n_pairs {
        let (a, si) = space.split(p);
        let slot = &mut by_denominator[class_of[p]][si];
        if slot.is_none() {
            *slot = Some(a);
        }
    }
    let mut add = vec![0; count * count];
    for x in 0..count {
        for y in 0..count {
            let common = (0..sys.len()).find_map(|si| {
                Some((by_denominator[x][si]?, by_denominator[y][si]?, si))
            });
            let (a, b, si) = common.ok_or_else(|| {
                Error::structural(format!(
                    "no common-denominator representatives for the classes of {:?} and {:?}",
                    space.pair(classes[x][0]),
                    space.pair(classes[y][0])
                ))
            })?;
            add[x * count + y] = class_of[space.index(t.add(a, b), si)];
        }
    }
    for si in 0..sys.len() {
        for a in 0..t.size() {
            for b in 0..t.size() {
                let x = class_of[space.index(a, si)];
                let y = class_of[space.index(b, si)];
                if class_of[space.index(t.add(a, b), si)] != add[x * count + y] {
                    return Err(Error::structural("induced addition depends on representatives"));
                }
            }
        }
    }

    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let quotient = GammaSemiring::from_fn(
        count,
        t.gamma_labels().to_vec(),
        |x, y| add[x * count + y],
        |x, y, z, g| class_of[space.tern(reps[x], reps[y], reps[z], g)],
    )?;
    let independent = par::all_range(n_pairs, |p| {
        (0..n_pairs).all(|q| {
            (0..n_pairs).all(|r| {
                (0..t.gamma_count()).all(|g| {
                    class_of[space.tern(p, q, r, g)]
                        == quotient.tern(class_of[p], class_of[q], class_of[r], g)
                })
            })
        })
    });
    if !independent {
        return Err(Error::structural("induced ternary product depends on representatives"));
    }

    Ok(LocalizedSemiring {
        system: sys.clone(),
        pairs: (0..n_pairs).map(|p| space.pair(p)).collect(),
        class_of,
        classes,
        quotient,
        raw_equals_closure,
        raw_class_count,
        steps,
    })
}

fn preserves_operations(t: &GammaSemiring, q: &GammaSemiring, map: &[usize]) -> bool {
    map[0] == 0
        && (0..t.size()).all(|a| {
            (0..t.size()).all(|b| {
                map[t.add(a, b)] == q.add(map[a], map[b])
                    && (0..t.size()).all(|c| {
                        (0..t.gamma_count()).all(|g| map[t.tern(a, b, c, g)] == q.tern(map[a], map[b], map[c], g))
                    })
            })
        })
}

/// `{x/s, h(a), h(b)}_γ = {x,a,b}_γ / s` for all `x, a, b ∈ T`, `s ∈ S`.
fn respects_fractions(t: &GammaSemiring, l: &LocalizedSemiring, h: &[usize]) -> bool {
    let q = l.quotient();
    l.system.members().iter().all(|&s| {
        (0..t.size()).all(|x| {
            let xs = l.class_of(x, s).expect("fraction exists");
            (0..t.size()).all(|a| {
                (0..t.size()).all(|b| {
                    (0..t.gamma_count())
                        .all(|g| q.tern(xs, h[a], h[b], g) == l.class_of(t.tern(x, a, b, g), s).expect("fraction exists"))
                })
            })
        })
    })
}

/// The canonical map `ℓ: T → S⁻¹T`.
///
/// Without a unit, `a/1` is not a fraction in general. `ℓ(a) = a/s₀` (with
/// `s₀` the least element of `S`) is used when it preserves the operations,
/// inverts `S` and respects fractions; otherwise `ℓ` is the lexicographically
/// first homomorphism with those properties.
pub fn canonical_map(t: &GammaSemiring, l: &LocalizedSemiring) -> Result<Vec<usize>> {
    let q = l.quotient();
    let acceptable = |h: &[usize]| {
        preserves_operations(t, q, h)
            && l.system.members().iter().all(|&s| is_invertible(q, h[s]).is_some())
            && respects_fractions(t, l, h)
    };
    let s0 = l.system.members()[0];
    let direct: Vec<usize> = (0..t.size())
        .map(|a| l.class_of(a, s0).expect("fraction exists"))
        .collect();
    if acceptable(&direct) {
        return Ok(direct);
    }
    let search = crate::maps::additive_maps(t.size(), t.add_table(), q.size(), q.add_table());
    let mut found = None;
    search.run(DEFAULT_NODE_BUDGET, |h| {
        if acceptable(h) {
            found = Some(h.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    found.ok_or_else(|| Error::structural("no homomorphism T → S⁻¹T inverts S and respects fractions"))
}

/// A partner `s̄` and mode `γ` with `{s, s̄, x}_γ = x` for every `x`.
pub fn is_invertible(r: &GammaSemiring, s: Elem) -> Option<(Elem, Mode)> {
    (0..r.size()).find_map(|partner| {
        (0..r.gamma_count())
            .find(|&g| (0..r.size()).all(|x| r.tern(s, partner, x, g) == x))
            .map(|g| (partner, g))
    })
}

/// Checks that `f` preserves `0`, `+` and every ternary product.
pub fn is_homomorphism(t: &GammaSemiring, r: &GammaSemiring, f: &[usize]) -> Result<()> {
    if f.len() != t.size() || f.iter().any(|&v| v >= r.size()) {
        return Err(Error::input("map table does not match the carriers"));
    }
    if t.gamma_count() != r.gamma_count() {
        return Err(Error::input("structures have different mode sets"));
    }
    if f[0] != 0 {
        return Err(Error::precondition("map does not send 0 to 0"));
    }
    for a in 0..t.size() {
        for b in 0..t.size() {
            if f[t.add(a, b)] != r.add(f[a], f[b]) {
                return Err(Error::precondition(format!("map is not additive at ({a}, {b})")));
            }
            for c in 0..t.size() {
                for g in 0..t.gamma_count() {
                    if f[t.tern(a, b, c, g)] != r.tern(f[a], f[b], f[c], g) {
                        return Err(Error::precondition(format!(
                            "map does not preserve {{{a},{b},{c}}}_{}",
                            t.gamma_labels()[g]
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// Number of homomorphisms `g: S⁻¹T → R` with `g ∘ ℓ = f`.
    pub count: u64,
    pub first: Option<Vec<usize>>,
}

impl Factorization {
    pub fn unique(&self) -> bool {
        self.count == 1
    }
}

/// Enumerates every factorization of `f: T → R` through `ℓ: T → S⁻¹T`.
pub fn check_universal_property(
    t: &GammaSemiring,
    l: &LocalizedSemiring,
    r: &GammaSemiring,
    f: &[usize],
) -> Result<Factorization> {
    is_homomorphism(t, r, f)?;
    for &s in l.system.members() {
        if is_invertible(r, f[s]).is_none() {
            return Err(Error::precondition(format!("f({s}) = {} is not invertible in R", f[s])));
        }
    }
    let ell = canonical_map(t, l)?;
    factor_through(t, l, &ell, r, f)
}

pub(crate) fn factor_through(
    t: &GammaSemiring,
    l: &LocalizedSemiring,
    ell: &[usize],
    r: &GammaSemiring,
    f: &[usize],
) -> Result<Factorization> {
    let q = l.quotient();
    let n = q.size();
    let mut search = MapSearch::new(n, r.size(), r.add_table().to_vec());
    search.fix(0, 0);
    for a in 0..t.size() {
        search.fix(ell[a], f[a]);
    }
    for x in 0..n {
        for y in x..n {
            search.sum(x, y, q.add(x, y));
        }
    }
    let mut count = 0;
    let mut first = None;
    search.run(DEFAULT_NODE_BUDGET, |g| {
        let preserves = (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| (0..q.gamma_count()).all(|m| g[q.tern(x, y, z, m)] == r.tern(g[x], g[y], g[z], m)))
            })
        });
        if preserves {
            count += 1;
            if first.is_none() {
                first = Some(g.to_vec());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(Factorization { count, first })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5(gammas: &[usize]) -> GammaSemiring {
        GammaSemiring::standard_family(5, gammas).unwrap()
    }

    #[test]
    fn closures() {
        assert_eq!(close_multiplicative(&z5(&[1, 2]), &[2]).unwrap().members(), &[1, 2, 3, 4]);
        assert_eq!(close_multiplicative(&z5(&[1]), &[1]).unwrap().members(), &[1]);
        assert!(close_multiplicative(&z5(&[1]), &[0]).is_err());
    }

    #[test]
    fn witnesses() {
        let t = z5(&[1, 2]);
        let s = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let w = cubic_related(&t, &s, 1, 1, 2, 1).unwrap().unwrap();
        let (l, r) = w.sides(&t, 1, 1, 2, 1);
        assert_eq!(l, r);
        // 1·γ = 2·η forces γ = 2, η = 1
        assert_eq!((w.gamma, w.eta), (1, 0));

        let t1 = z5(&[1]);
        let s1 = MultiplicativeSystem::new(&t1, &[1, 2, 3, 4]).unwrap();
        assert!(cubic_related(&t1, &s1, 1, 1, 2, 1).unwrap().is_none());
        assert!(cubic_related(&t1, &s1, 1, 0, 2, 1).is_err());

        let refl = cubic_related(&t, &s, 3, 2, 3, 2).unwrap().unwrap();
        assert_eq!(refl.gamma, refl.eta);
    }

    #[test]
    fn z5_single_mode_localization() {
        let t = z5(&[1]);
        let s = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let l = localize(&t, &s).unwrap();
        assert_eq!(l.class_count(), 5);
        // class of a/s is determined by a·s mod 5
        for a in 0..5 {
            for &sd in s.members() {
                for b in 0..5 {
                    for &td in s.members() {
                        let same = l.class_of(a, sd) == l.class_of(b, td);
                        assert_eq!(same, a * sd % 5 == b * td % 5);
                    }
                }
            }
        }
        let ell = canonical_map(&t, &l).unwrap();
        let mut seen = ell.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn z5_two_mode_localization_collapses() {
        let t = z5(&[1, 2]);
        let s = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let l = localize(&t, &s).unwrap();
        // 1/1 ~ 2/1 and additivity then chain every residue to 0
        assert_eq!(l.class_count(), 1);
        assert!(!l.raw_equals_closure());
        assert!(l.raw_class_count() > l.class_count());
        assert!(l.steps().iter().any(|s| s.rule == MergeRule::Addition));
        let ell = canonical_map(&t, &l).unwrap();
        assert_eq!(ell, vec![0; 5]);
    }

    #[test]
    fn invertibility() {
        let t = z5(&[1]);
        assert_eq!(is_invertible(&t, 2), Some((3, 0)));
        assert_eq!(is_invertible(&t, 0), None);
    }

    #[test]
    fn universal_property_identity() {
        let t = z5(&[1]);
        let s = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let l = localize(&t, &s).unwrap();
        let ell = canonical_map(&t, &l).unwrap();
        let f = check_universal_property(&t, &l, l.quotient(), &ell).unwrap();
        assert!(f.unique());
        assert_eq!(f.first.unwrap(), (0..5).collect::<Vec<_>>());

        let single = GammaSemiring::singleton(vec!["1".into()]).unwrap();
        let zero = vec![0; 5];
        assert!(check_universal_property(&t, &l, &single, &zero).unwrap().unique());
    }
}
