//! Binary shadows: small commutative rings `R` with an additive `ι: T → R`,
//! tested for reflection of cubic fraction equality by ordinary
//! denominator clearing `w(ι(a)ι(t) − ι(b)ι(s)) = 0`.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::{cubic_related, localize, CubicWitness, LocalizedSemiring, MultiplicativeSystem};
use crate::maps::additive_maps;
use crate::par;
use crate::semiring::{Elem, GammaSemiring};

/// A finite commutative ring, or semiring when additive inverses are missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryRing {
    pub name: String,
    pub size: usize,
    pub add: Vec<usize>,
    pub mul: Vec<usize>,
    pub one: usize,
    pub has_negatives: bool,
}

impl BinaryRing {
    /// Verifies commutativity, associativity, distributivity, `0` absorbing and
    /// `one` neutral. Element `0` is the additive identity.
    pub fn new(name: impl Into<String>, size: usize, add: Vec<usize>, mul: Vec<usize>, one: usize) -> Result<Self> {
        let name = name.into();
        if size == 0 || add.len() != size * size || mul.len() != size * size || one >= size {
            return Err(Error::input(format!("ring {name}: malformed tables")));
        }
        if add.iter().chain(&mul).any(|&v| v >= size) {
            return Err(Error::input(format!("ring {name}: table entry outside carrier")));
        }
        let (p, m) = (|x: usize, y: usize| add[x * size + y], |x: usize, y: usize| mul[x * size + y]);
        for x in 0..size {
            if p(0, x) != x || m(0, x) != 0 || m(one, x) != x {
                return Err(Error::input(format!("ring {name}: identity or absorption fails at {x}")));
            }
            for y in 0..size {
                if p(x, y) != p(y, x) || m(x, y) != m(y, x) {
                    return Err(Error::input(format!("ring {name}: not commutative at ({x}, {y})")));
                }
                for z in 0..size {
                    if p(p(x, y), z) != p(x, p(y, z))
                        || m(m(x, y), z) != m(x, m(y, z))
                        || m(x, p(y, z)) != p(m(x, y), m(x, z))
                    {
                        return Err(Error::input(format!("ring {name}: axiom fails at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        let has_negatives = (0..size).all(|x| (0..size).any(|y| p(x, y) == 0));
        Ok(BinaryRing {
            name,
            size,
            add,
            mul,
            one,
            has_negatives,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let table = |f: fn(usize, usize) -> usize| (0..n * n).map(|i| f(i / n, i % n) % n).collect::<Vec<_>>();
        BinaryRing::new(format!("Z{n}"), n, table(|x, y| x + y), table(|x, y| x * y), 1 % n)
    }

    /// `Z_n × Z_m` with `(x, y)` encoded as `x·m + y`.
    pub fn product(n: usize, m: usize) -> Result<Self> {
        let size = n * m;
        let op = |f: fn(usize, usize) -> usize| {
            (0..size * size)
                .map(|i| {
                    let (a, b) = (i / size, i % size);
                    f(a / m, b / m) % n * m + f(a % m, b % m) % m
                })
                .collect::<Vec<_>>()
        };
        BinaryRing::new(format!("Z{n}xZ{m}"), size, op(|x, y| x + y), op(|x, y| x * y), (1 % n) * m + 1 % m)
    }

    /// `{0, 1}` with `1 + 1 = 1`.
    pub fn boolean() -> Self {
        BinaryRing::new("B", 2, vec![0, 1, 1, 1], vec![0, 0, 0, 1], 1).expect("boolean semiring")
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    /// Multiplicative closure of `seed ∪ {1}`, sorted.
    pub fn multiplicative_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.size];
        let mut stack = vec![self.one];
        stack.extend_from_slice(seed);
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            if inside[x] {
                continue;
            }
            inside[x] = true;
            members.push(x);
            for &y in &members.clone() {
                stack.push(self.mul(x, y));
            }
        }
        members.sort_unstable();
        members
    }
}

/// Least `w ∈ simg` with `w·a·t = w·b·s` (rings), or with
/// `w·a·t + x = w·b·s + x` for some `x` (semirings).
pub fn binary_fraction_equal(r: &BinaryRing, simg: &[usize], a: usize, s: usize, b: usize, t: usize) -> Result<Option<usize>> {
    if [a, s, b, t].iter().any(|&v| v >= r.size) {
        return Err(Error::input("element outside the ring"));
    }
    if !simg.contains(&s) || !simg.contains(&t) {
        return Err(Error::precondition("denominators must lie in the image system"));
    }
    if simg.iter().any(|&x| simg.iter().any(|&y| !simg.contains(&r.mul(x, y)))) {
        return Err(Error::precondition("image system is not multiplicatively closed"));
    }
    let (at, bs) = (r.mul(a, t), r.mul(b, s));
    let mut sorted = simg.to_vec();
    sorted.sort_unstable();
    Ok(sorted.into_iter().find(|&w| {
        let (l, rr) = (r.mul(w, at), r.mul(w, bs));
        if r.has_negatives {
            l == rr
        } else {
            (0..r.size).any(|x| r.add(l, x) == r.add(rr, x))
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowCandidate {
    pub ring: BinaryRing,
    pub iota: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub left: (Elem, Elem),
    pub right: (Elem, Elem),
    /// Equal in `S⁻¹T`.
    pub cubic_equal: bool,
    /// Least binary witness, if any.
    pub binary_witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    /// `0` lies in the multiplicative closure of `ι(S)`.
    ZeroInImage,
    /// Some pair of fractions is judged differently.
    NoReflection { first: Disagreement },
}

impl Rejection {
    pub fn key(&self) -> &'static str {
        match self {
            Rejection::ZeroInImage => "zero_in_image",
            Rejection::NoReflection { .. } => "no_reflection",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub system: Vec<Elem>,
    /// Multiplicative closure of `ι(S) ∪ {1}` in `R`.
    pub image_system: Vec<usize>,
    pub rejected: Option<Rejection>,
    pub pairs: usize,
    pub disagreements: Vec<Disagreement>,
    pub agrees: bool,
    /// The cubic side uses the generated congruence; these describe how it
    /// relates to the raw relation.
    pub class_count: usize,
    pub raw_class_count: usize,
    pub raw_equals_closure: bool,
}

fn image_system(r: &BinaryRing, iota: &[usize], sys: &MultiplicativeSystem, include_zero_ring: bool) -> (Vec<usize>, bool) {
    let seed: Vec<usize> = sys.members().iter().map(|&s| iota[s]).collect();
    let simg = r.multiplicative_closure(&seed);
    let zero_free = !simg.contains(&0) || (include_zero_ring && r.size == 1);
    (simg, zero_free)
}

fn compare(
    t_sys: &MultiplicativeSystem,
    l: &LocalizedSemiring,
    r: &BinaryRing,
    iota: &[usize],
    simg: &[usize],
    size: usize,
    first_only: bool,
) -> Result<(usize, Vec<Disagreement>)> {
    let fractions: Vec<(Elem, Elem)> = (0..size)
        .flat_map(|a| t_sys.members().iter().map(move |&s| (a, s)))
        .collect();
    let mut out = Vec::new();
    let mut pairs = 0;
    for (i, &(a, s)) in fractions.iter().enumerate() {
        for &(b, t) in &fractions[i..] {
            pairs += 1;
            let cubic_equal = l.class_of(a, s) == l.class_of(b, t);
            let binary_witness = binary_fraction_equal(r, simg, iota[a], iota[s], iota[b], iota[t])?;
            if cubic_equal != binary_witness.is_some() {
                out.push(Disagreement {
                    left: (a, s),
                    right: (b, t),
                    cubic_equal,
                    binary_witness,
                });
                if first_only {
                    return Ok((pairs, out));
                }
            }
        }
    }
    Ok((pairs, out))
}

fn reflection_with(
    t: &GammaSemiring,
    sys: &MultiplicativeSystem,
    l: &LocalizedSemiring,
    cand: &ShadowCandidate,
    include_zero_ring: bool,
    first_only: bool,
) -> Result<ReflectionReport> {
    if cand.iota.len() != t.size() || cand.iota.iter().any(|&v| v >= cand.ring.size) {
        return Err(Error::input("ι does not map the carrier into the ring"));
    }
    let (image_system, zero_free) = image_system(&cand.ring, &cand.iota, sys, include_zero_ring);
    let mut report = ReflectionReport {
        system: sys.members().to_vec(),
        image_system,
        rejected: None,
        pairs: 0,
        disagreements: Vec::new(),
        agrees: false,
        class_count: l.class_count(),
        raw_class_count: l.raw_class_count(),
        raw_equals_closure: l.raw_equals_closure(),
    };
    if !zero_free {
        report.rejected = Some(Rejection::ZeroInImage);
        return Ok(report);
    }
    let (pairs, disagreements) = compare(sys, l, &cand.ring, &cand.iota, &report.image_system, t.size(), first_only)?;
    report.pairs = pairs;
    report.agrees = disagreements.is_empty();
    if let Some(first) = disagreements.first() {
        report.rejected = Some(Rejection::NoReflection { first: first.clone() });
    }
    report.disagreements = disagreements;
    Ok(report)
}

/// Compares cubic equality in `S⁻¹T` with binary fraction equality of the
/// images for every pair of fractions.
pub fn reflection_check(t: &GammaSemiring, sys: &MultiplicativeSystem, cand: &ShadowCandidate) -> Result<ReflectionReport> {
    let l = localize(t, sys)?;
    reflection_with(t, sys, &l, cand, false, false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowOptions {
    /// Largest ring order.
    pub max_ring: usize,
    /// Add the boolean semiring, judged with the slack criterion.
    pub semiring: bool,
    /// Exempt the one-element ring from the `0 ∉ ι(S)` rule.
    pub include_zero_ring: bool,
    /// Cap on additive maps enumerated per ring.
    pub max_maps_per_ring: u64,
}

impl Default for ShadowOptions {
    fn default() -> Self {
        ShadowOptions {
            max_ring: 12,
            semiring: false,
            include_zero_ring: false,
            max_maps_per_ring: 1_000_000,
        }
    }
}

/// Cyclic rings `Z_n` (`n ≥ 1`, or `≥ 2` without the zero ring), products
/// `Z_n × Z_m` with `2 ≤ n ≤ m`, and optionally the boolean semiring; ordered
/// by size, then by name.
pub fn ring_family(opts: &ShadowOptions) -> Result<Vec<BinaryRing>> {
    let mut rings = Vec::new();
    let start = if opts.include_zero_ring { 1 } else { 2 };
    for n in start..=opts.max_ring {
        rings.push(BinaryRing::cyclic(n)?);
    }
    for n in 2..=opts.max_ring {
        for m in n..=opts.max_ring / n {
            rings.push(BinaryRing::product(n, m)?);
        }
    }
    if opts.semiring && opts.max_ring >= 2 {
        rings.push(BinaryRing::boolean());
    }
    rings.sort_by(|a, b| (a.size, &a.name).cmp(&(b.size, &b.name)));
    Ok(rings)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTally {
    pub ring: String,
    pub size: usize,
    pub candidates: u64,
    pub satisfying: u64,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowSearchReport {
    pub system: Vec<Elem>,
    pub options: ShadowOptions,
    pub rings: Vec<RingTally>,
    pub candidates: u64,
    /// Rejection reason → count.
    pub rejections: BTreeMap<String, u64>,
    /// Every candidate satisfying reflection, in search order.
    pub satisfying: Vec<ShadowCandidate>,
    /// All candidates of the family were examined.
    pub complete: bool,
    pub class_count: usize,
    pub raw_class_count: usize,
    pub raw_equals_closure: bool,
    pub scope: String,
}

impl ShadowSearchReport {
    /// Complete search with no satisfying candidate.
    pub fn is_exhaustion_certificate(&self) -> bool {
        self.complete && self.satisfying.is_empty()
    }
}

struct RingOutcome {
    tally: RingTally,
    rejections: BTreeMap<String, u64>,
    satisfying: Vec<ShadowCandidate>,
}

fn search_ring(
    t: &GammaSemiring,
    sys: &MultiplicativeSystem,
    l: &LocalizedSemiring,
    ring: &BinaryRing,
    opts: &ShadowOptions,
) -> Result<RingOutcome> {
    let search = additive_maps(t.size(), t.add_table(), ring.size, &ring.add);
    let mut maps = Vec::new();
    let mut complete = true;
    search.run(crate::maps::DEFAULT_NODE_BUDGET, |iota| {
        if maps.len() as u64 >= opts.max_maps_per_ring {
            complete = false;
            return ControlFlow::Break(());
        }
        maps.push(iota.to_vec());
        ControlFlow::Continue(())
    })?;
    let verdicts: Vec<Result<Option<Rejection>>> = par::map_slice(&maps, |iota| {
        let cand = ShadowCandidate {
            ring: ring.clone(),
            iota: iota.clone(),
        };
        Ok(reflection_with(t, sys, l, &cand, opts.include_zero_ring, true)?.rejected)
    });
    let mut rejections = BTreeMap::new();
    let mut satisfying = Vec::new();
    for (iota, v) in maps.iter().zip(verdicts) {
        match v? {
            Some(r) => *rejections.entry(r.key().to_string()).or_insert(0) += 1,
            None => satisfying.push(ShadowCandidate {
                ring: ring.clone(),
                iota: iota.clone(),
            }),
        }
    }
    Ok(RingOutcome {
        tally: RingTally {
            ring: ring.name.clone(),
            size: ring.size,
            candidates: maps.len() as u64,
            satisfying: satisfying.len() as u64,
            complete,
        },
        rejections,
        satisfying,
    })
}

/// Exhaustive search over `(R, ι)` for the reflection condition on the
/// regular module. Only this necessary condition is searched; a satisfying
/// candidate is not claimed to be a full shadow.
pub fn shadow_search(t: &GammaSemiring, sys: &MultiplicativeSystem, opts: &ShadowOptions) -> Result<ShadowSearchReport> {
    let l = localize(t, sys)?;
    let rings = ring_family(opts)?;
    let outcomes: Vec<Result<RingOutcome>> = par::map_slice(&rings, |r| search_ring(t, sys, &l, r, opts));
    let mut report = ShadowSearchReport {
        system: sys.members().to_vec(),
        options: opts.clone(),
        rings: Vec::new(),
        candidates: 0,
        rejections: BTreeMap::new(),
        satisfying: Vec::new(),
        complete: true,
        class_count: l.class_count(),
        raw_class_count: l.raw_class_count(),
        raw_equals_closure: l.raw_equals_closure(),
        scope: "reflection of fraction equality on the regular module (necessary condition only)".into(),
    };
    for outcome in outcomes {
        let o = outcome?;
        report.candidates += o.tally.candidates;
        report.complete &= o.tally.complete;
        for (k, v) in o.rejections {
            *report.rejections.entry(k).or_insert(0) += v;
        }
        report.satisfying.extend(o.satisfying);
        report.rings.push(o.tally);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeCube {
    pub mode: String,
    pub value: Elem,
}

/// `{x,x,x}_γ` for every mode.
pub fn mode_cubes(t: &GammaSemiring, x: Elem) -> Result<Vec<ModeCube>> {
    (0..t.gamma_count())
        .map(|g| {
            Ok(ModeCube {
                mode: t.gamma_labels()[g].clone(),
                value: t.evaluate_tern(x, x, x, g)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessGapRecord {
    pub left: (Elem, Elem),
    pub right: (Elem, Elem),
    pub reflexive: bool,
    pub witness: CubicWitness,
    /// Mode labels of `(γ, δ, η)`.
    pub modes: (String, String, String),
    /// Both sides of the cubic identity.
    pub sides: (Elem, Elem),
    pub left_cubes: Vec<ModeCube>,
    pub right_cubes: Vec<ModeCube>,
    /// The cube of a denominator differs between modes.
    pub mode_dependent: bool,
    /// `a·t = b·s` cannot be written: `T` has no binary product.
    pub linear_clearing_formable: bool,
    pub statement: String,
}

/// The cubic witness for `a/s ∼ b/t` next to the absent linear form.
pub fn witness_gap_demo(t: &GammaSemiring, sys: &MultiplicativeSystem, a: Elem, s: Elem, b: Elem, tt: Elem) -> Result<WitnessGapRecord> {
    let witness = cubic_related(t, sys, a, s, b, tt)?
        .ok_or_else(|| Error::precondition(format!("{a}/{s} and {b}/{tt} are not cubically related")))?;
    let labels = t.gamma_labels();
    let (left_cubes, right_cubes) = (mode_cubes(t, s)?, mode_cubes(t, tt)?);
    let varies = |c: &[ModeCube]| c.iter().any(|m| m.value != c[0].value);
    let mode_dependent = varies(&left_cubes) || varies(&right_cubes);
    let sides = witness.sides(t, a, s, b, tt);
    let statement = format!(
        "{{{u},{a},{{{tt},{tt},{tt}}}_{g}}}_{d} = {l} = {{{u},{b},{{{s},{s},{s}}}_{e}}}_{d}; \
         no expression {a}·{tt} = {b}·{s} exists because the structure has only ternary products",
        u = witness.u,
        g = labels[witness.gamma],
        d = labels[witness.delta],
        e = labels[witness.eta],
        l = sides.0,
    );
    Ok(WitnessGapRecord {
        left: (a, s),
        right: (b, tt),
        reflexive: (a, s) == (b, tt),
        modes: (
            labels[witness.gamma].clone(),
            labels[witness.delta].clone(),
            labels[witness.eta].clone(),
        ),
        witness,
        sides,
        left_cubes,
        right_cubes,
        mode_dependent,
        linear_clearing_formable: false,
        statement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::close_multiplicative;

    #[test]
    fn ring_constructors() {
        let z6 = BinaryRing::cyclic(6).unwrap();
        assert!(z6.has_negatives);
        assert_eq!(z6.mul(4, 5), 2);
        let p = BinaryRing::product(2, 3).unwrap();
        assert_eq!(p.one, 4);
        assert_eq!(p.mul(5, 5), 4);
        assert!(!BinaryRing::boolean().has_negatives);
        assert_eq!(z6.multiplicative_closure(&[2]), vec![1, 2, 4]);
    }

    #[test]
    fn binary_fraction_examples() {
        let z6 = BinaryRing::cyclic(6).unwrap();
        let simg = [1, 2, 4];
        assert_eq!(binary_fraction_equal(&z6, &simg, 1, 2, 4, 2).unwrap(), Some(1));
        assert_eq!(binary_fraction_equal(&z6, &simg, 3, 2, 3, 2).unwrap(), Some(1));
        let z5 = BinaryRing::cyclic(5).unwrap();
        assert_eq!(binary_fraction_equal(&z5, &[1], 1, 1, 2, 1).unwrap(), None);
        assert!(matches!(
            binary_fraction_equal(&z6, &[1, 2], 1, 2, 1, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zero_iota_is_rejected() {
        let t = GammaSemiring::standard_family(5, &[1]).unwrap();
        let sys = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let cand = ShadowCandidate {
            ring: BinaryRing::cyclic(5).unwrap(),
            iota: vec![0; 5],
        };
        let r = reflection_check(&t, &sys, &cand).unwrap();
        assert_eq!(r.rejected, Some(Rejection::ZeroInImage));
    }

    #[test]
    fn sharpness_identity_reflects() {
        let t = GammaSemiring::standard_family(6, &[1]).unwrap();
        for seed in [1, 2, 5] {
            let sys = close_multiplicative(&t, &[seed]).unwrap();
            let cand = ShadowCandidate {
                ring: BinaryRing::cyclic(6).unwrap(),
                iota: (0..6).collect(),
            };
            let r = reflection_check(&t, &sys, &cand).unwrap();
            assert!(r.agrees, "seed {seed}: {:?}", r.disagreements.first());
        }
    }

    #[test]
    fn z5_two_modes_has_no_shadow() {
        let t = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
        let sys = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let r = shadow_search(&t, &sys, &ShadowOptions::default()).unwrap();
        assert!(r.is_exhaustion_certificate());
        let with_zero = ShadowOptions {
            include_zero_ring: true,
            ..ShadowOptions::default()
        };
        let r = shadow_search(&t, &sys, &with_zero).unwrap();
        assert_eq!(r.satisfying.len(), 1);
        assert_eq!(r.satisfying[0].ring.size, 1);
    }

    #[test]
    fn witness_gap_records_modes() {
        let t = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
        let sys = MultiplicativeSystem::new(&t, &[1, 2, 3, 4]).unwrap();
        let rec = witness_gap_demo(&t, &sys, 1, 1, 2, 1).unwrap();
        assert_eq!((rec.modes.0.as_str(), rec.modes.2.as_str()), ("2", "1"));
        assert!(rec.mode_dependent);
        assert!(!rec.linear_clearing_formable);
        let cubes = mode_cubes(&GammaSemiring::z6_z4_example(), 2).unwrap();
        assert_eq!(cubes[1].value, 4);
    }
}
