//! Finite Γ-modules: an additive monoid with an action
//! `T × T × M × Γ → M`, `(a, b, m, γ) ↦ {a,b,m}_γ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapSearch;
use crate::par;
use crate::semiring::{Elem, GammaSemiring, Mode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaModule {
    scalars: usize,
    gammas: usize,
    size: usize,
    add: Vec<usize>,
    /// Index `((a * scalars + b) * size + m) * gammas + γ`.
    action: Vec<usize>,
}

impl GammaModule {
    pub fn new(scalars: usize, gammas: usize, size: usize, add: Vec<usize>, action: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::input("module carrier must contain the zero element"));
        }
        if add.len() != size * size {
            return Err(Error::input(format!(
                "module addition has {} entries, expected {}",
                add.len(),
                size * size
            )));
        }
        let expected = scalars * scalars * size * gammas;
        if action.len() != expected {
            return Err(Error::input(format!(
                "action table has {} entries, expected {expected}",
                action.len()
            )));
        }
        if add.iter().chain(&action).any(|&v| v >= size) {
            return Err(Error::input("module table entry outside carrier"));
        }
        Ok(GammaModule {
            scalars,
            gammas,
            size,
            add,
            action,
        })
    }

    pub fn from_fn(
        t: &GammaSemiring,
        size: usize,
        add: impl Fn(usize, usize) -> usize,
        act: impl Fn(Elem, Elem, usize, Mode) -> usize,
    ) -> Result<Self> {
        let (s, g) = (t.size(), t.gamma_count());
        let add_table = (0..size * size).map(|i| add(i / size, i % size)).collect();
        let mut action = Vec::with_capacity(s * s * size * g);
        for a in 0..s {
            for b in 0..s {
                for m in 0..size {
                    for gm in 0..g {
                        action.push(act(a, b, m, gm));
                    }
                }
            }
        }
        GammaModule::new(s, g, size, add_table, action)
    }

    /// `T` acting on itself through the ternary product.
    pub fn regular(t: &GammaSemiring) -> Self {
        GammaModule::from_fn(t, t.size(), |x, y| t.add(x, y), |a, b, m, g| t.tern(a, b, m, g))
            .expect("regular tables are well formed")
    }

    /// The one-element module.
    pub fn zero(t: &GammaSemiring) -> Self {
        GammaModule::from_fn(t, 1, |_, _| 0, |_, _, _, _| 0).expect("zero module is well formed")
    }

    /// A commutative monoid with the action identically `0`.
    pub fn zero_action(t: &GammaSemiring, size: usize, add: Vec<usize>) -> Result<Self> {
        let s = t.size();
        let g = t.gamma_count();
        GammaModule::new(s, g, size, add, vec![0; s * s * size * g])
    }

    /// `Z_n` with the action identically `0`.
    pub fn cyclic_zero_action(t: &GammaSemiring, n: usize) -> Result<Self> {
        GammaModule::zero_action(t, n, (0..n * n).map(|i| (i / n + i % n) % n).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn scalar_count(&self) -> usize {
        self.scalars
    }

    pub fn gamma_count(&self) -> usize {
        self.gammas
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    #[inline]
    pub fn act(&self, a: Elem, b: Elem, m: usize, g: Mode) -> usize {
        self.action[((a * self.scalars + b) * self.size + m) * self.gammas + g]
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn action_table(&self) -> &[usize] {
        &self.action
    }

    /// `m ↦ {a,b,m}_γ` as a table.
    pub fn action_map(&self, a: Elem, b: Elem, g: Mode) -> Vec<usize> {
        (0..self.size).map(|m| self.act(a, b, m, g)).collect()
    }

    /// Additive inverse of every element, if all exist.
    pub fn negation(&self) -> Option<Vec<usize>> {
        (0..self.size)
            .map(|x| (0..self.size).find(|&y| self.add(x, y) == 0))
            .collect()
    }

    pub fn is_group(&self) -> bool {
        self.negation().is_some()
    }

    /// Scalars pulled back along `f: T' → T`.
    pub fn restrict(&self, scalars: usize, f: &[usize]) -> Result<Self> {
        if f.len() != scalars || f.iter().any(|&v| v >= self.scalars) {
            return Err(Error::input("restriction map does not match scalar carriers"));
        }
        let mut action = Vec::with_capacity(scalars * scalars * self.size * self.gammas);
        for a in 0..scalars {
            for b in 0..scalars {
                for m in 0..self.size {
                    for g in 0..self.gammas {
                        action.push(self.act(f[a], f[b], m, g));
                    }
                }
            }
        }
        GammaModule::new(scalars, self.gammas, self.size, self.add.clone(), action)
    }

    pub fn to_document(&self, over: &str) -> ModuleDocument {
        ModuleDocument {
            over: over.to_string(),
            carrier: self.size,
            add: (0..self.size)
                .map(|x| self.add[x * self.size..(x + 1) * self.size].to_vec())
                .collect(),
            action: self.action.clone(),
        }
    }

    pub fn from_document(doc: &ModuleDocument, t: &GammaSemiring) -> Result<Self> {
        let n = doc.carrier;
        if doc.add.len() != n || doc.add.iter().any(|r| r.len() != n) {
            return Err(Error::input(format!("module addition must be a {n}×{n} table")));
        }
        let add = doc.add.concat();
        GammaModule::new(t.size(), t.gamma_count(), n, add, doc.action.clone())
    }
}

/// On-disk form of a module; `action` is flattened `[a][b][m][γ]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub over: String,
    pub carrier: usize,
    pub add: Vec<Vec<usize>>,
    pub action: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleClause {
    /// `0 + m = m`
    Identity,
    /// `m + n = n + m`
    AddCommutative,
    /// `(m + n) + p = m + (n + p)`
    AddAssociative,
    /// `{a+a',b,m} = {a,b,m} + {a',b,m}`
    DistributeFirst,
    /// `{a,b+b',m} = {a,b,m} + {a,b',m}`
    DistributeSecond,
    /// `{a,b,m+m'} = {a,b,m} + {a,b,m'}`
    DistributeVector,
    /// `{a,b,{c,d,m}_γ}_δ = {{a,b,c}_γ,d,m}_δ`
    Associative,
    /// `{0,b,m}_γ = 0`
    AbsorbFirst,
    /// `{a,0,m}_γ = 0`
    AbsorbSecond,
}

impl ModuleClause {
    pub const ALL: [ModuleClause; 9] = [
        ModuleClause::Identity,
        ModuleClause::AddCommutative,
        ModuleClause::AddAssociative,
        ModuleClause::DistributeFirst,
        ModuleClause::DistributeSecond,
        ModuleClause::DistributeVector,
        ModuleClause::Associative,
        ModuleClause::AbsorbFirst,
        ModuleClause::AbsorbSecond,
    ];

    /// (scalar variables, vector variables, mode variables)
    fn arity(self) -> (usize, usize, usize) {
        match self {
            ModuleClause::Identity => (0, 1, 0),
            ModuleClause::AddCommutative => (0, 2, 0),
            ModuleClause::AddAssociative => (0, 3, 0),
            ModuleClause::DistributeFirst | ModuleClause::DistributeSecond => (3, 1, 1),
            ModuleClause::DistributeVector => (2, 2, 1),
            ModuleClause::Associative => (4, 1, 2),
            ModuleClause::AbsorbFirst | ModuleClause::AbsorbSecond => (1, 1, 1),
        }
    }

    fn evaluate(self, t: &GammaSemiring, m: &GammaModule, s: &[usize], v: &[usize], g: &[usize]) -> (usize, usize) {
        match self {
            ModuleClause::Identity => (m.add(0, v[0]), v[0]),
            ModuleClause::AddCommutative => (m.add(v[0], v[1]), m.add(v[1], v[0])),
            ModuleClause::AddAssociative => (
                m.add(m.add(v[0], v[1]), v[2]),
                m.add(v[0], m.add(v[1], v[2])),
            ),
            ModuleClause::DistributeFirst => (
                m.act(t.add(s[0], s[1]), s[2], v[0], g[0]),
                m.add(m.act(s[0], s[2], v[0], g[0]), m.act(s[1], s[2], v[0], g[0])),
            ),
            ModuleClause::DistributeSecond => (
                m.act(s[0], t.add(s[1], s[2]), v[0], g[0]),
                m.add(m.act(s[0], s[1], v[0], g[0]), m.act(s[0], s[2], v[0], g[0])),
            ),
            ModuleClause::DistributeVector => (
                m.act(s[0], s[1], m.add(v[0], v[1]), g[0]),
                m.add(m.act(s[0], s[1], v[0], g[0]), m.act(s[0], s[1], v[1], g[0])),
            ),
            ModuleClause::Associative => (
                m.act(s[0], s[1], m.act(s[2], s[3], v[0], g[0]), g[1]),
                m.act(t.tern(s[0], s[1], s[2], g[0]), s[3], v[0], g[1]),
            ),
            ModuleClause::AbsorbFirst => (m.act(0, s[0], v[0], g[0]), 0),
            ModuleClause::AbsorbSecond => (m.act(s[0], 0, v[0], g[0]), 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleWitness {
    pub scalars: Vec<usize>,
    pub vectors: Vec<usize>,
    pub modes: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleVerdict {
    pub clause: ModuleClause,
    pub passed: bool,
    pub checked: u64,
    pub witness: Option<ModuleWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub verdicts: Vec<ModuleVerdict>,
}

impl ModuleReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, clause: ModuleClause) -> &ModuleVerdict {
        self.verdicts.iter().find(|v| v.clause == clause).expect("every clause is checked")
    }
}

/// Exhaustive scan of every module law; each failing clause carries its
/// lexicographically least counterexample (scalars, then vectors, then modes).
pub fn check_module_axioms(t: &GammaSemiring, m: &GammaModule) -> Result<ModuleReport> {
    if t.size() != m.scalars || t.gamma_count() != m.gammas {
        return Err(Error::input("module scalars or modes do not match the structure"));
    }
    let verdicts = ModuleClause::ALL
        .iter()
        .map(|&clause| {
            let (ns, nv, ng) = clause.arity();
            let radices: Vec<usize> = std::iter::repeat_n(t.size(), ns)
                .chain(std::iter::repeat_n(m.size, nv))
                .chain(std::iter::repeat_n(t.gamma_count(), ng))
                .collect();
            let total: usize = radices.iter().product();
            let witness = par::find_map_first(total, |mut i| {
                let mut digits = vec![0; radices.len()];
                for (d, &r) in digits.iter_mut().zip(&radices).rev() {
                    *d = i % r;
                    i /= r;
                }
                let (s, rest) = digits.split_at(ns);
                let (v, g) = rest.split_at(nv);
                let (lhs, rhs) = clause.evaluate(t, m, s, v, g);
                (lhs != rhs).then(|| ModuleWitness {
                    scalars: s.to_vec(),
                    vectors: v.to_vec(),
                    modes: g.to_vec(),
                    lhs,
                    rhs,
                })
            });
            ModuleVerdict {
                clause,
                passed: witness.is_none(),
                checked: total as u64,
                witness,
            }
        })
        .collect();
    Ok(ModuleReport { verdicts })
}

/// Search for Γ-linear maps `source → target`: additive and commuting with
/// every `{a,b,·}_γ`.
pub fn module_hom_search(source: &GammaModule, target: &GammaModule) -> Result<MapSearch> {
    if source.scalars != target.scalars || source.gammas != target.gammas {
        return Err(Error::input("modules are over different structures"));
    }
    let n = source.size;
    let mut search = MapSearch::new(n, target.size, target.add.clone());
    search.fix(0, 0);
    for x in 0..n {
        for y in x..n {
            search.sum(x, y, source.add(x, y));
        }
    }
    for a in 0..source.scalars {
        for b in 0..source.scalars {
            for g in 0..source.gammas {
                let table = search.table(target.action_map(a, b, g));
                for x in 0..n {
                    search.image(source.act(a, b, x, g), x, table);
                }
            }
        }
    }
    Ok(search)
}

/// Whether `f` is additive and commutes with the action.
pub fn is_module_hom(source: &GammaModule, target: &GammaModule, f: &[usize]) -> bool {
    f.len() == source.size
        && f.iter().all(|&v| v < target.size)
        && f[0] == 0
        && (0..source.size).all(|x| (0..source.size).all(|y| f[source.add(x, y)] == target.add(f[x], f[y])))
        && (0..source.scalars).all(|a| {
            (0..source.scalars).all(|b| {
                (0..source.gammas).all(|g| {
                    (0..source.size).all(|x| f[source.act(a, b, x, g)] == target.act(a, b, f[x], g))
                })
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::DEFAULT_NODE_BUDGET;

    #[test]
    fn regular_and_zero_action_pass() {
        let t = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
        assert!(check_module_axioms(&t, &GammaModule::regular(&t)).unwrap().all_pass());
        let z = GammaModule::cyclic_zero_action(&t, 3).unwrap();
        assert!(check_module_axioms(&t, &z).unwrap().all_pass());
    }

    #[test]
    fn flipped_entry_is_caught() {
        let t = GammaSemiring::standard_family(3, &[1]).unwrap();
        let r = GammaModule::regular(&t);
        let mut action = r.action_table().to_vec();
        // {1,1,1}_1 = 1 becomes 2
        let idx = ((3 + 1) * 3 + 1) * 1;
        action[idx] = 2;
        let bad = GammaModule::new(3, 1, 3, r.add_table().to_vec(), action).unwrap();
        let report = check_module_axioms(&t, &bad).unwrap();
        assert!(!report.all_pass());
        let w = report.verdict(ModuleClause::DistributeVector).witness.clone().unwrap();
        assert_eq!(w.scalars, vec![1, 1]);
    }

    #[test]
    fn hom_counts() {
        let t = GammaSemiring::standard_family(5, &[1]).unwrap();
        let r = GammaModule::regular(&t);
        // Γ-linear endomorphisms of the regular Z5 module are multiplications
        let homs = module_hom_search(&r, &r).unwrap().collect(DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(homs.len(), 5);
        assert!(homs.iter().all(|f| is_module_hom(&r, &r, f)));
        let z2 = GammaModule::cyclic_zero_action(&t, 2).unwrap();
        assert_eq!(module_hom_search(&z2, &r).unwrap().count(DEFAULT_NODE_BUDGET).unwrap(), 1);
    }
}
