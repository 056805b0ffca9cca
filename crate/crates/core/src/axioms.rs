//! Exhaustive (or windowed) verification of the six structure axioms.
//!
//! Every axiom is split into clauses; each clause is a universally
//! quantified equation over a fixed number of element and mode variables.
//! A clause scan walks the quantifier range in lexicographic order, so the
//! reported witness is always the smallest failing tuple.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::semiring::GammaSemiring;

/// Anything with an addition and mode-indexed ternary product over `u64`
/// values, scanned over the window `0..scan_size()`.
pub trait TernaryAlgebra: Sync {
    fn scan_size(&self) -> usize;
    fn mode_count(&self) -> usize;
    fn mode_label(&self, g: usize) -> String;
    fn plus(&self, a: u64, b: u64) -> u64;
    fn triple(&self, a: u64, b: u64, c: u64, g: usize) -> u64;
}

impl TernaryAlgebra for GammaSemiring {
    fn scan_size(&self) -> usize {
        self.size()
    }
    fn mode_count(&self) -> usize {
        self.gamma_count()
    }
    fn mode_label(&self, g: usize) -> String {
        self.gamma_labels()[g].clone()
    }
    fn plus(&self, a: u64, b: u64) -> u64 {
        self.add(a as usize, b as usize) as u64
    }
    fn triple(&self, a: u64, b: u64, c: u64, g: usize) -> u64 {
        self.tern(a as usize, b as usize, c as usize, g) as u64
    }
}

/// Formula families over the naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// `{a,b,c}_γ = ab + bc + ca + γ`
    PairwisePlusGamma,
    /// `{a,b,c}_γ = a·b·c·γ`
    ProductTimesGamma,
}

/// A formula family on ℕ restricted to the scan window `[0, bound]` with a
/// finite list of modes. Values produced by the operations may leave the
/// window; they are evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalFamily {
    pub formula: Formula,
    pub bound: u64,
    pub modes: Vec<u64>,
}

impl NaturalFamily {
    pub fn new(formula: Formula, bound: u64, modes: Vec<u64>) -> Result<Self> {
        // nested terms need at least 0 and 1 in the window
        if bound < 1 {
            return Err(Error::input(
                "scan window [0, bound] needs bound >= 1 to evaluate nested terms",
            ));
        }
        if bound > 1_000 {
            return Err(Error::input("scan window bound above 1000 is not supported"));
        }
        if modes.is_empty() {
            return Err(Error::input("mode list must be nonempty"));
        }
        Ok(NaturalFamily {
            formula,
            bound,
            modes,
        })
    }

    /// The mode window `[0, bound]`.
    pub fn with_mode_window(formula: Formula, bound: u64) -> Result<Self> {
        NaturalFamily::new(formula, bound, (0..=bound).collect())
    }

    pub fn eval(&self, a: u64, b: u64, c: u64, gamma: u64) -> u64 {
        match self.formula {
            Formula::PairwisePlusGamma => a * b + b * c + c * a + gamma,
            Formula::ProductTimesGamma => a * b * c * gamma,
        }
    }
}

impl TernaryAlgebra for NaturalFamily {
    fn scan_size(&self) -> usize {
        self.bound as usize + 1
    }
    fn mode_count(&self) -> usize {
        self.modes.len()
    }
    fn mode_label(&self, g: usize) -> String {
        self.modes[g].to_string()
    }
    fn plus(&self, a: u64, b: u64) -> u64 {
        a + b
    }
    fn triple(&self, a: u64, b: u64, c: u64, g: usize) -> u64 {
        self.eval(a, b, c, self.modes[g])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    AdditiveMonoid,
    TernaryOperations,
    Distributivity,
    Associativity,
    Absorption,
    Symmetry,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::AdditiveMonoid,
        Axiom::TernaryOperations,
        Axiom::Distributivity,
        Axiom::Associativity,
        Axiom::Absorption,
        Axiom::Symmetry,
    ];

    fn clauses(self) -> &'static [Clause] {
        match self {
            Axiom::AdditiveMonoid => &[
                Clause::LeftIdentity,
                Clause::RightIdentity,
                Clause::AddCommutative,
                Clause::AddAssociative,
            ],
            Axiom::TernaryOperations => &[],
            Axiom::Distributivity => &[
                Clause::DistributeFirst,
                Clause::DistributeSecond,
                Clause::DistributeThird,
            ],
            Axiom::Associativity => &[Clause::Associative],
            Axiom::Absorption => &[Clause::Absorbs],
            Axiom::Symmetry => &[Clause::SwapFirstPair, Clause::SwapLastPair],
        }
    }
}

/// One universally quantified equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `0 + a = a`
    LeftIdentity,
    /// `a + 0 = a`
    RightIdentity,
    /// `a + b = b + a`
    AddCommutative,
    /// `(a + b) + c = a + (b + c)`
    AddAssociative,
    /// `{a+a',b,c} = {a,b,c} + {a',b,c}`
    DistributeFirst,
    /// `{a,b+b',c} = {a,b,c} + {a,b',c}`
    DistributeSecond,
    /// `{a,b,c+c'} = {a,b,c} + {a,b,c'}`
    DistributeThird,
    /// `{a,b,{c,d,e}_γ}_δ = {{a,b,c}_γ,d,e}_δ`
    Associative,
    /// `{a,0,b}_γ = 0`
    Absorbs,
    /// `{a,b,c}_γ = {b,a,c}_γ`
    SwapFirstPair,
    /// `{a,b,c}_γ = {a,c,b}_γ`
    SwapLastPair,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            Clause::LeftIdentity => "0 + a = a",
            Clause::RightIdentity => "a + 0 = a",
            Clause::AddCommutative => "a + b = b + a",
            Clause::AddAssociative => "(a + b) + c = a + (b + c)",
            Clause::DistributeFirst => "{a+a',b,c} = {a,b,c} + {a',b,c}",
            Clause::DistributeSecond => "{a,b+b',c} = {a,b,c} + {a,b',c}",
            Clause::DistributeThird => "{a,b,c+c'} = {a,b,c} + {a,b,c'}",
            Clause::Associative => "{a,b,{c,d,e}_g}_h = {{a,b,c}_g,d,e}_h",
            Clause::Absorbs => "{a,0,b}_g = 0",
            Clause::SwapFirstPair => "{a,b,c}_g = {b,a,c}_g",
            Clause::SwapLastPair => "{a,b,c}_g = {a,c,b}_g",
        };
        f.write_str(text)
    }
}

impl Clause {
    /// (element variables, mode variables)
    fn arity(self) -> (usize, usize) {
        match self {
            Clause::LeftIdentity | Clause::RightIdentity => (1, 0),
            Clause::AddCommutative => (2, 0),
            Clause::AddAssociative => (3, 0),
            Clause::DistributeFirst | Clause::DistributeSecond | Clause::DistributeThird => (4, 1),
            Clause::Associative => (5, 2),
            Clause::Absorbs => (2, 1),
            Clause::SwapFirstPair | Clause::SwapLastPair => (3, 1),
        }
    }

    /// Both sides of the equation at the given assignment.
    pub fn evaluate<A: TernaryAlgebra + ?Sized>(self, alg: &A, e: &[u64], m: &[usize]) -> (u64, u64) {
        let t = |a, b, c, g| alg.triple(a, b, c, g);
        let p = |a, b| alg.plus(a, b);
        match self {
            Clause::LeftIdentity => (p(0, e[0]), e[0]),
            Clause::RightIdentity => (p(e[0], 0), e[0]),
            Clause::AddCommutative => (p(e[0], e[1]), p(e[1], e[0])),
            Clause::AddAssociative => (p(p(e[0], e[1]), e[2]), p(e[0], p(e[1], e[2]))),
            Clause::DistributeFirst => (
                t(p(e[0], e[1]), e[2], e[3], m[0]),
                p(t(e[0], e[2], e[3], m[0]), t(e[1], e[2], e[3], m[0])),
            ),
            Clause::DistributeSecond => (
                t(e[2], p(e[0], e[1]), e[3], m[0]),
                p(t(e[2], e[0], e[3], m[0]), t(e[2], e[1], e[3], m[0])),
            ),
            Clause::DistributeThird => (
                t(e[2], e[3], p(e[0], e[1]), m[0]),
                p(t(e[2], e[3], e[0], m[0]), t(e[2], e[3], e[1], m[0])),
            ),
            Clause::Associative => (
                t(e[0], e[1], t(e[2], e[3], e[4], m[0]), m[1]),
                t(t(e[0], e[1], e[2], m[0]), e[3], e[4], m[1]),
            ),
            Clause::Absorbs => (t(e[0], 0, e[1], m[0]), 0),
            Clause::SwapFirstPair => (t(e[0], e[1], e[2], m[0]), t(e[1], e[0], e[2], m[0])),
            Clause::SwapLastPair => (t(e[0], e[1], e[2], m[0]), t(e[0], e[2], e[1], m[0])),
        }
    }
}

/// A failing assignment together with the two unequal sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub clause: Clause,
    pub elements: Vec<u64>,
    pub modes: Vec<String>,
    pub mode_indices: Vec<usize>,
    pub lhs: u64,
    pub rhs: u64,
}

impl Witness {
    /// Re-evaluates the clause; true when the sides still differ.
    pub fn reproduces<A: TernaryAlgebra + ?Sized>(&self, alg: &A) -> bool {
        let (l, r) = self.clause.evaluate(alg, &self.elements, &self.mode_indices);
        l == self.lhs && r == self.rhs && l != r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub passed: bool,
    /// Number of assignments evaluated across all clauses.
    pub checked: u64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// False when some clause was sampled instead of scanned in full.
    pub exhaustive: bool,
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, axiom: Axiom) -> &AxiomVerdict {
        self.verdicts
            .iter()
            .find(|v| v.axiom == axiom)
            .expect("every axiom has a verdict")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

/// How a clause's quantifier range is covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    /// Scan in full when the range fits the budget, otherwise draw `budget`
    /// assignments with a seeded generator.
    Sampled { budget: u64, seed: u64 },
}

/// Mixed-radix decoding of an assignment index; elements are the high
/// digits, modes the low ones.
fn decode(index: usize, n: usize, g: usize, elems: &mut [u64], modes: &mut [usize]) {
    let mut rest = index;
    for slot in modes.iter_mut().rev() {
        *slot = rest % g;
        rest /= g;
    }
    for slot in elems.iter_mut().rev() {
        *slot = (rest % n) as u64;
        rest /= n;
    }
}

fn range_size(n: usize, g: usize, ne: usize, nm: usize) -> Option<usize> {
    let mut total: usize = 1;
    for _ in 0..ne {
        total = total.checked_mul(n)?;
    }
    for _ in 0..nm {
        total = total.checked_mul(g)?;
    }
    Some(total)
}

fn scan_clause<A: TernaryAlgebra + ?Sized>(
    alg: &A,
    clause: Clause,
    mode: ScanMode,
    stream: u64,
) -> (u64, bool, Option<Witness>) {
    let (ne, nm) = clause.arity();
    let n = alg.scan_size();
    let g = alg.mode_count();
    let total = range_size(n, g, ne, nm).unwrap_or(usize::MAX);
    let probe = |idx: usize| {
        let (mut e, mut m) = ([0u64; 5], [0usize; 2]);
        let (e, m) = (&mut e[..ne], &mut m[..nm]);
        decode(idx, n, g, e, m);
        let (lhs, rhs) = clause.evaluate(alg, e, m);
        (lhs != rhs).then(|| Witness {
            clause,
            modes: m.iter().map(|&i| alg.mode_label(i)).collect(),
            elements: e.to_vec(),
            mode_indices: m.to_vec(),
            lhs,
            rhs,
        })
    };
    match mode {
        ScanMode::Sampled { budget, seed } if (total as u128) > budget as u128 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut picks: Vec<usize> = (0..budget).map(|_| rng.gen_range(0..total)).collect();
            picks.sort_unstable();
            picks.dedup();
            let checked = picks.len() as u64;
            let w = par::find_map_first(picks.len(), |i| probe(picks[i]));
            (checked, false, w)
        }
        _ => {
            let w = par::find_map_first(total, probe);
            (total as u64, true, w)
        }
    }
}

fn check_with<A: TernaryAlgebra + ?Sized>(alg: &A, mode: ScanMode) -> AxiomReport {
    let mut exhaustive = true;
    let mut verdicts = Vec::with_capacity(Axiom::ALL.len());
    let mut stream = 0u64;
    for axiom in Axiom::ALL {
        let mut checked = 0;
        let mut witness = None;
        for &clause in axiom.clauses() {
            stream += 1;
            let (c, full, w) = scan_clause(alg, clause, mode, stream);
            checked += c;
            exhaustive &= full;
            if w.is_some() {
                witness = w;
                break;
            }
        }
        verdicts.push(AxiomVerdict {
            axiom,
            passed: witness.is_none(),
            checked,
            witness,
        });
    }
    AxiomReport {
        exhaustive,
        verdicts,
    }
}

/// Scans every axiom over the full finite quantifier range.
pub fn check_axioms(t: &GammaSemiring) -> AxiomReport {
    check_with(t, ScanMode::Exhaustive)
}

/// Scans a formula family over its window. Failures are genuine
/// counterexamples for the unbounded structure.
pub fn check_axioms_sampled(family: &NaturalFamily, sample_budget: u64, seed: u64) -> AxiomReport {
    check_with(
        family,
        ScanMode::Sampled {
            budget: sample_budget,
            seed,
        },
    )
}

/// First violation of the commutative monoid laws for `+`, if any.
pub fn additive_monoid_violation(t: &GammaSemiring) -> Option<Witness> {
    Axiom::AdditiveMonoid
        .clauses()
        .iter()
        .find_map(|&c| scan_clause(t, c, ScanMode::Exhaustive, 0).2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z5_standard_passes() {
        let t = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
        let report = check_axioms(&t);
        assert!(report.all_pass(), "{report:?}");
        assert!(report.exhaustive);
        // 5^5 · 2^2 assignments for associativity
        assert_eq!(report.verdict(Axiom::Associativity).checked, 3125 * 4);
    }

    #[test]
    fn singleton_passes() {
        let t = GammaSemiring::singleton(vec!["x".into(), "y".into()]).unwrap();
        assert!(check_axioms(&t).all_pass());
    }

    #[test]
    fn z6_z4_example_fails_absorption_and_symmetry() {
        let t = GammaSemiring::z6_z4_example();
        let report = check_axioms(&t);
        let abs = report.verdict(Axiom::Absorption);
        assert!(!abs.passed);
        let w = abs.witness.as_ref().unwrap();
        assert!(w.reproduces(&t));
        // {0,0,1}_1 = 1 is the lexicographically first failure
        assert_eq!(w.elements, vec![0, 1]);
        assert_eq!(w.modes, vec!["1".to_string()]);
        let sym = report.verdict(Axiom::Symmetry);
        assert!(!sym.passed);
        assert!(sym.witness.as_ref().unwrap().reproduces(&t));
        assert!(report.verdict(Axiom::AdditiveMonoid).passed);
    }

    #[test]
    fn witness_is_deterministic() {
        let t = GammaSemiring::z6_z4_example();
        assert_eq!(check_axioms(&t), check_axioms(&t));
    }

    #[test]
    fn window_must_fit_nested_terms() {
        assert!(NaturalFamily::with_mode_window(Formula::PairwisePlusGamma, 0).is_err());
    }

    #[test]
    fn natural_family_associativity_witness() {
        let fam = NaturalFamily::with_mode_window(Formula::PairwisePlusGamma, 5).unwrap();
        let report = check_axioms_sampled(&fam, u64::MAX, 0);
        assert!(report.exhaustive);
        let w = report.verdict(Axiom::Associativity).witness.clone().unwrap();
        assert_eq!(w.elements, vec![0, 0, 0, 0, 1]);
        assert_eq!(w.mode_indices, vec![1, 0]);
        // LHS = δ, RHS = 1 + δ
        assert_eq!((w.lhs, w.rhs), (0, 1));
    }

    #[test]
    fn sampling_is_seeded() {
        let fam = NaturalFamily::with_mode_window(Formula::PairwisePlusGamma, 5).unwrap();
        let a = check_axioms_sampled(&fam, 500, 7);
        let b = check_axioms_sampled(&fam, 500, 7);
        assert_eq!(a, b);
        assert!(!a.exhaustive);
        assert!(!a.verdict(Axiom::Absorption).passed);
    }
}
