//! Γ-ideals, prime Γ-ideals and the basic-open topology on the spectrum.
//!
//! Subsets of the carrier are bitmasks, so the carrier is capped (16 by
//! default). Every ideal is required to contain `0`; this convention is
//! recorded in [`SpecGamma::zero_convention`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::semiring::{Elem, GammaSemiring, Mode};

pub const DEFAULT_SPEC_BOUND: usize = 16;
const HARD_SPEC_BOUND: usize = 30;

pub type Mask = u32;

pub fn mask_of(elems: &[Elem]) -> Mask {
    elems.iter().fold(0, |m, &e| m | (1 << e))
}

pub fn elements_of(mask: Mask, size: usize) -> Vec<Elem> {
    (0..size).filter(|&e| mask & (1 << e) != 0).collect()
}

#[inline]
fn has(mask: Mask, e: Elem) -> bool {
    mask & (1 << e) != 0
}

/// Why a subset is not an absorbing, additively closed subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum IdealDefect {
    MissingZero,
    NotAdditivelyClosed { a: Elem, b: Elem, sum: Elem },
    NotAbsorbing { slot: usize, a: Elem, b: Elem, c: Elem, mode: Mode, value: Elem },
    NotProper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCheck {
    pub members: Vec<Elem>,
    /// Contains 0, additively closed and absorbing (properness not required).
    pub absorbing_subset: bool,
    pub proper: bool,
    /// `absorbing_subset && proper`
    pub is_ideal: bool,
    pub defect: Option<IdealDefect>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheck {
    pub members: Vec<Elem>,
    pub is_prime: bool,
    /// `{a,b,c}_γ` lands in the set although no factor does.
    pub witness: Option<(Elem, Elem, Elem, Mode)>,
}

/// Precomputed per-element data that makes subset tests linear in |S|.
struct IdealOracle<'a> {
    t: &'a GammaSemiring,
    /// All products having `x` in at least one slot.
    absorb: Vec<Mask>,
    full: Mask,
}

impl<'a> IdealOracle<'a> {
    fn new(t: &'a GammaSemiring) -> Self {
        let n = t.size();
        let mut absorb = vec![0 as Mask; n];
        for g in 0..t.gamma_count() {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let v: Mask = 1 << t.tern(a, b, c, g);
                        absorb[a] |= v;
                        absorb[b] |= v;
                        absorb[c] |= v;
                    }
                }
            }
        }
        let full = if n == 32 { Mask::MAX } else { (1 << n) - 1 };
        IdealOracle { t, absorb, full }
    }

    fn absorbing_subset(&self, s: Mask) -> bool {
        if !has(s, 0) {
            return false;
        }
        let members = elements_of(s, self.t.size());
        for &x in &members {
            if self.absorb[x] & !s != 0 {
                return false;
            }
            for &y in &members {
                if !has(s, self.t.add(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    fn prime_witness(&self, s: Mask) -> Option<(Elem, Elem, Elem, Mode)> {
        let t = self.t;
        let outside = elements_of(!s & self.full, t.size());
        for &a in &outside {
            for &b in &outside {
                for &c in &outside {
                    for g in 0..t.gamma_count() {
                        if has(s, t.tern(a, b, c, g)) {
                            return Some((a, b, c, g));
                        }
                    }
                }
            }
        }
        None
    }
}

fn check_size(t: &GammaSemiring) -> Result<()> {
    if t.size() > HARD_SPEC_BOUND {
        return Err(Error::resource("subset masks", t.size() as u128, HARD_SPEC_BOUND as u128));
    }
    Ok(())
}

fn validate_subset(t: &GammaSemiring, subset: &[Elem]) -> Result<Mask> {
    check_size(t)?;
    if let Some(&e) = subset.iter().find(|&&e| e >= t.size()) {
        return Err(Error::input(format!("element {e} outside carrier of size {}", t.size())));
    }
    Ok(mask_of(subset))
}

/// Classifies `subset` as a Γ-ideal candidate, with the first defect found.
pub fn is_ideal(t: &GammaSemiring, subset: &[Elem]) -> Result<IdealCheck> {
    let s = validate_subset(t, subset)?;
    let n = t.size();
    let members = elements_of(s, n);
    let mut defect = None;
    if !has(s, 0) {
        defect = Some(IdealDefect::MissingZero);
    }
    if defect.is_none() {
        'add: for &a in &members {
            for &b in &members {
                let sum = t.add(a, b);
                if !has(s, sum) {
                    defect = Some(IdealDefect::NotAdditivelyClosed { a, b, sum });
                    break 'add;
                }
            }
        }
    }
    if defect.is_none() {
        'abs: for slot in 0..3 {
            for &x in &members {
                for p in 0..n {
                    for q in 0..n {
                        for g in 0..t.gamma_count() {
                            let (a, b, c) = match slot {
                                0 => (x, p, q),
                                1 => (p, x, q),
                                _ => (p, q, x),
                            };
                            let value = t.tern(a, b, c, g);
                            if !has(s, value) {
                                defect = Some(IdealDefect::NotAbsorbing { slot, a, b, c, mode: g, value });
                                break 'abs;
                            }
                        }
                    }
                }
            }
        }
    }
    let absorbing_subset = defect.is_none();
    let proper = members.len() < n;
    if absorbing_subset && !proper {
        defect = Some(IdealDefect::NotProper);
    }
    Ok(IdealCheck {
        members,
        absorbing_subset,
        proper,
        is_ideal: absorbing_subset && proper,
        defect,
    })
}

/// Primeness of a proper Γ-ideal.
pub fn is_prime(t: &GammaSemiring, subset: &[Elem]) -> Result<PrimeCheck> {
    let ideal = is_ideal(t, subset)?;
    if !ideal.is_ideal {
        return Err(Error::precondition(format!(
            "{:?} is not a proper Γ-ideal ({:?})",
            ideal.members, ideal.defect
        )));
    }
    let oracle = IdealOracle::new(t);
    let witness = oracle.prime_witness(mask_of(&ideal.members));
    Ok(PrimeCheck {
        members: ideal.members,
        is_prime: witness.is_none(),
        witness,
    })
}

/// The prime spectrum with its basic opens `D(a) = { P : a ∉ P }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecGamma {
    pub carrier: usize,
    /// Prime ideals in increasing mask order.
    pub primes: Vec<Mask>,
    /// `basic_opens[a]` lists the indices of primes not containing `a`.
    pub basic_opens: Vec<BTreeSet<usize>>,
    pub zero_convention: bool,
}

impl SpecGamma {
    pub fn prime_elements(&self, i: usize) -> Vec<Elem> {
        elements_of(self.primes[i], self.carrier)
    }

    pub fn all_points(&self) -> BTreeSet<usize> {
        (0..self.primes.len()).collect()
    }

    pub fn basic_open(&self, a: Elem) -> &BTreeSet<usize> {
        &self.basic_opens[a]
    }

    /// Some `c` with `D(c)` equal to `points`, smallest first.
    pub fn basic_generator(&self, points: &BTreeSet<usize>) -> Option<Elem> {
        self.basic_opens.iter().position(|d| d == points)
    }
}

/// Enumerates every prime Γ-ideal, refusing carriers above the default bound.
pub fn spec(t: &GammaSemiring) -> Result<SpecGamma> {
    spec_with_bound(t, DEFAULT_SPEC_BOUND)
}

/// Like [`spec`] with a configurable carrier cap.
pub fn spec_with_bound(t: &GammaSemiring, bound: usize) -> Result<SpecGamma> {
    let n = t.size();
    let bound = bound.min(HARD_SPEC_BOUND);
    if n > bound {
        return Err(Error::resource("carrier size for subset enumeration", n as u128, bound as u128));
    }
    let oracle = IdealOracle::new(t);
    let masks = 1usize << n;
    let flags = par::map_range(masks, |m| {
        let s = m as Mask;
        s != oracle.full && oracle.absorbing_subset(s) && oracle.prime_witness(s).is_none()
    });
    let primes: Vec<Mask> = flags
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(m, _)| m as Mask)
        .collect();
    let basic_opens = (0..n)
        .map(|a| {
            primes
                .iter()
                .enumerate()
                .filter(|(_, &p)| !has(p, a))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(SpecGamma {
        carrier: n,
        primes,
        basic_opens,
        zero_convention: true,
    })
}

/// Every absorbing, additively closed subset (including the whole carrier
/// when it qualifies), in mask order.
pub fn list_ideals(t: &GammaSemiring, bound: usize) -> Result<Vec<Vec<Elem>>> {
    let n = t.size();
    if n > bound.min(HARD_SPEC_BOUND) {
        return Err(Error::resource("carrier size for subset enumeration", n as u128, bound as u128));
    }
    let oracle = IdealOracle::new(t);
    let flags = par::map_range(1usize << n, |m| oracle.absorbing_subset(m as Mask));
    Ok(flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(m, _)| elements_of(m as Mask, n))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "law")]
pub enum BasisViolation {
    /// `D(a) ∩ D(b) ≠ D({a,b,b}_γ)`
    Intersection { a: Elem, b: Elem, mode: Mode, product: Elem },
    ZeroOpenNonempty { points: Vec<usize> },
    /// `D(a) ∩ D(b)` is not the union of the basic opens inside it.
    NotUnionOfBasics { a: Elem, b: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub intersections_checked: usize,
    pub violations: Vec<BasisViolation>,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the basic-open laws on a computed spectrum.
pub fn check_basis_laws(t: &GammaSemiring, spec: &SpecGamma) -> BasisReport {
    let n = t.size();
    let mut violations = Vec::new();
    let mut checked = 0;
    if !spec.basic_opens[0].is_empty() {
        violations.push(BasisViolation::ZeroOpenNonempty {
            points: spec.basic_opens[0].iter().copied().collect(),
        });
    }
    for a in 0..n {
        for b in 0..n {
            let meet: BTreeSet<usize> = spec.basic_opens[a]
                .intersection(&spec.basic_opens[b])
                .copied()
                .collect();
            for g in 0..t.gamma_count() {
                checked += 1;
                let product = t.tern(a, b, b, g);
                if spec.basic_opens[product] != meet {
                    violations.push(BasisViolation::Intersection { a, b, mode: g, product });
                }
            }
            let covered: BTreeSet<usize> = spec
                .basic_opens
                .iter()
                .filter(|d| d.is_subset(&meet))
                .flat_map(|d| d.iter().copied())
                .collect();
            if covered != meet {
                violations.push(BasisViolation::NotUnionOfBasics { a, b });
            }
        }
    }
    BasisReport {
        intersections_checked: checked,
        violations,
    }
}

/// `V(I)` together with the basic opens whose union is its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedSet {
    pub ideal: Vec<Elem>,
    pub points: BTreeSet<usize>,
    /// Generators `a ∈ I` whose `D(a)` cover the complement of `V(I)`.
    pub complement_generators: Vec<Elem>,
}

/// Primes containing the absorbing subset `ideal`.
pub fn vanishing(t: &GammaSemiring, spec: &SpecGamma, ideal: &[Elem]) -> Result<ClosedSet> {
    let check = is_ideal(t, ideal)?;
    if !check.absorbing_subset {
        return Err(Error::precondition(format!(
            "{:?} is not an absorbing additively closed subset ({:?})",
            check.members, check.defect
        )));
    }
    let i = mask_of(&check.members);
    let points: BTreeSet<usize> = spec
        .primes
        .iter()
        .enumerate()
        .filter(|(_, &p)| p & i == i)
        .map(|(k, _)| k)
        .collect();
    let complement: BTreeSet<usize> = spec.all_points().difference(&points).copied().collect();
    let union: BTreeSet<usize> = check
        .members
        .iter()
        .flat_map(|&a| spec.basic_opens[a].iter().copied())
        .collect();
    if union != complement {
        return Err(Error::structural(
            "complement of V(I) differs from the union of D(a) over a in I",
        ));
    }
    Ok(ClosedSet {
        ideal: check.members.clone(),
        points,
        complement_generators: check.members,
    })
}
