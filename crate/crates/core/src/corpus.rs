//! The instance corpus shared by the test suites and the shipped fixtures.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::homological::ChainMap;
use crate::homological::{direct_sum, ChainComplex};
use crate::module::GammaModule;
use crate::semiring::GammaSemiring;

#[derive(Debug, Clone)]
pub struct NamedStructure {
    pub name: String,
    pub structure: GammaSemiring,
}

#[derive(Debug, Clone)]
pub struct NamedModule {
    pub name: String,
    pub over: String,
    pub module: GammaModule,
    /// Built from regular modules; zero-action modules are annihilated by
    /// every localization and so fall outside the affine comparison.
    pub regular_type: bool,
}

#[derive(Debug, Clone)]
pub struct NamedComplex {
    pub name: String,
    pub over: String,
    pub complex: ChainComplex,
    /// Module name of each degree, lowest first.
    pub degree_modules: Vec<String>,
}

impl NamedComplex {
    pub fn regular_type(&self, corpus: &Corpus) -> bool {
        self.degree_modules.iter().all(|m| corpus.module(m).regular_type)
    }
}

#[derive(Debug, Clone)]
pub struct NamedChainMap {
    pub name: String,
    pub source: String,
    pub target: String,
    pub components: BTreeMap<i64, Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub structures: Vec<NamedStructure>,
    /// Group modules.
    pub modules: Vec<NamedModule>,
    /// Commutative monoids with zero action that are not groups.
    pub monoids: Vec<NamedModule>,
    pub complexes: Vec<NamedComplex>,
    pub maps: Vec<NamedChainMap>,
}

fn cyclic_add(n: usize) -> Vec<usize> {
    (0..n * n).map(|i| (i / n + i % n) % n).collect()
}

fn mult_table(n: usize, c: usize) -> Vec<usize> {
    (0..n).map(|x| x * c % n).collect()
}

impl Corpus {
    pub fn standard() -> Result<Corpus> {
        let structures = vec![
            ("z2_standard", GammaSemiring::standard_family(2, &[1])?),
            ("z3_standard", GammaSemiring::standard_family(3, &[1])?),
            ("z5_standard", GammaSemiring::standard_family(5, &[1])?),
            ("z5_two_modes", GammaSemiring::standard_family(5, &[1, 2])?),
            ("z6_sharpness", GammaSemiring::standard_family(6, &[1])?),
            ("z6z4_example", GammaSemiring::z6_z4_example()),
        ];
        let structures: Vec<NamedStructure> = structures
            .into_iter()
            .map(|(n, s)| NamedStructure {
                name: n.into(),
                structure: s,
            })
            .collect();
        let get = |name: &str| structures.iter().find(|s| s.name == name).expect("known structure").structure.clone();
        let (z2, z3, z5, z6) = (get("z2_standard"), get("z3_standard"), get("z5_standard"), get("z6_sharpness"));

        let named = |name: &str, over: &str, module: GammaModule, regular_type: bool| NamedModule {
            name: name.into(),
            over: over.into(),
            module,
            regular_type,
        };
        let r2 = GammaModule::regular(&z2);
        let r3 = GammaModule::regular(&z3);
        let modules = vec![
            named("z2_zero", "z2_standard", GammaModule::zero(&z2), true),
            named("z2_regular", "z2_standard", r2.clone(), true),
            named("z2_regular_sq", "z2_standard", direct_sum(&r2, &r2)?, true),
            named("z2_trivial_z2", "z2_standard", GammaModule::cyclic_zero_action(&z2, 2)?, false),
            named("z3_zero", "z3_standard", GammaModule::zero(&z3), true),
            named("z3_regular", "z3_standard", r3.clone(), true),
            named("z3_trivial_z2", "z3_standard", GammaModule::cyclic_zero_action(&z3, 2)?, false),
            named("z3_trivial_z3", "z3_standard", GammaModule::cyclic_zero_action(&z3, 3)?, false),
            named("z3_trivial_z4", "z3_standard", GammaModule::cyclic_zero_action(&z3, 4)?, false),
            named(
                "z3_trivial_z2sq",
                "z3_standard",
                GammaModule::zero_action(&z3, 4, (0..16).map(|i| (i / 4) ^ (i % 4)).collect())?,
                false,
            ),
            named("z5_regular", "z5_standard", GammaModule::regular(&z5), true),
            named("z6_regular", "z6_sharpness", GammaModule::regular(&z6), true),
        ];
        let monoids = vec![
            named("z3_boolean_monoid", "z3_standard", GammaModule::zero_action(&z3, 2, vec![0, 1, 1, 1])?, false),
            named(
                "z3_truncated_monoid",
                "z3_standard",
                GammaModule::zero_action(&z3, 3, (0..9).map(|i| (i / 3 + i % 3).min(2)).collect())?,
                false,
            ),
            named(
                "z3_max_monoid",
                "z3_standard",
                GammaModule::zero_action(&z3, 4, (0..16).map(|i| (i / 4).max(i % 4)).collect())?,
                false,
            ),
            named(
                "z3_z2_with_absorber",
                "z3_standard",
                // {0, 1, ∞} with 1 + 1 = 0 and ∞ absorbing
                GammaModule::zero_action(&z3, 3, vec![0, 1, 2, 1, 0, 2, 2, 2, 2])?,
                false,
            ),
        ];
        let mut corpus = Corpus {
            structures,
            modules,
            monoids,
            complexes: Vec::new(),
            maps: Vec::new(),
        };

        let double = mult_table(4, 2);
        let specs: Vec<(&str, &str, i64, Vec<&str>, Vec<Vec<usize>>)> = vec![
            ("z3_zero_deg0", "z3_standard", 0, vec!["z3_zero"], vec![vec![0]]),
            ("z3_z2_deg0", "z3_standard", 0, vec!["z3_trivial_z2"], vec![vec![0; 2]]),
            ("z3_z2_identity", "z3_standard", 0, vec!["z3_trivial_z2"; 2], vec![vec![0; 2], mult_table(2, 1)]),
            ("z3_z4_double", "z3_standard", 0, vec!["z3_trivial_z4"; 2], vec![vec![0; 4], double.clone()]),
            ("z3_z4_deg0", "z3_standard", 0, vec!["z3_trivial_z4"], vec![vec![0; 4]]),
            ("z3_z4_deg2", "z3_standard", 2, vec!["z3_trivial_z4"], vec![vec![0; 4]]),
            (
                "z3_z4_double_chain",
                "z3_standard",
                -1,
                vec!["z3_trivial_z4"; 3],
                vec![vec![0; 4], double.clone(), double.clone()],
            ),
            ("z3_regular_deg0", "z3_standard", 0, vec!["z3_regular"], vec![vec![0; 3]]),
            ("z3_regular_identity", "z3_standard", 0, vec!["z3_regular"; 2], vec![vec![0; 3], mult_table(3, 1)]),
            ("z3_regular_zero_d", "z3_standard", 0, vec!["z3_regular"; 2], vec![vec![0; 3], vec![0; 3]]),
            ("z3_regular_deg_minus1", "z3_standard", -1, vec!["z3_regular"], vec![vec![0; 3]]),
            ("z5_regular_deg0", "z5_standard", 0, vec!["z5_regular"], vec![vec![0; 5]]),
            ("z6_regular_deg0", "z6_sharpness", 0, vec!["z6_regular"], vec![vec![0; 6]]),
            ("z6_regular_identity", "z6_sharpness", 0, vec!["z6_regular"; 2], vec![vec![0; 6], mult_table(6, 1)]),
            ("z6_regular_triple", "z6_sharpness", 0, vec!["z6_regular"; 2], vec![vec![0; 6], mult_table(6, 3)]),
        ];
        for (name, over, lo, mods, diffs) in specs {
            let modules = mods.iter().map(|m| corpus.module(m).module.clone()).collect();
            corpus.complexes.push(NamedComplex {
                name: name.into(),
                over: over.into(),
                complex: ChainComplex::new(lo, modules, diffs)?,
                degree_modules: mods.iter().map(|m| m.to_string()).collect(),
            });
        }
        let maps: Vec<(&str, &str, &str, Vec<(i64, Vec<usize>)>)> = vec![
            ("z3_z2_into_z4", "z3_z2_deg0", "z3_z4_deg0", vec![(0, vec![0, 2])]),
            ("z3_double_identity", "z3_z4_double", "z3_z4_double", vec![(0, (0..4).collect()), (1, (0..4).collect())]),
            ("z3_regular_zero_map", "z3_regular_deg0", "z3_regular_deg0", vec![]),
            ("z6_regular_triple_map", "z6_regular_deg0", "z6_regular_deg0", vec![(0, mult_table(6, 3))]),
        ];
        for (name, source, target, components) in maps {
            let m = NamedChainMap {
                name: name.into(),
                source: source.into(),
                target: target.into(),
                components: components.into_iter().collect(),
            };
            corpus.chain_map(&m)?;
            corpus.maps.push(m);
        }
        Ok(corpus)
    }

    pub fn complex(&self, name: &str) -> &NamedComplex {
        self.complexes.iter().find(|c| c.name == name).expect("known complex")
    }

    pub fn chain_map(&self, m: &NamedChainMap) -> Result<ChainMap> {
        ChainMap::new(
            self.complex(&m.source).complex.clone(),
            self.complex(&m.target).complex.clone(),
            m.components.clone(),
        )
    }

    pub fn structure(&self, name: &str) -> &GammaSemiring {
        &self.structures.iter().find(|s| s.name == name).expect("known structure").structure
    }

    pub fn module(&self, name: &str) -> &NamedModule {
        self.modules
            .iter()
            .chain(&self.monoids)
            .find(|m| m.name == name)
            .expect("known module")
    }

    pub fn modules_over<'a>(&'a self, over: &'a str) -> impl Iterator<Item = &'a NamedModule> + 'a {
        self.modules.iter().filter(move |m| m.over == over)
    }

    pub fn complexes_over<'a>(&'a self, over: &'a str) -> impl Iterator<Item = &'a NamedComplex> + 'a {
        self.complexes.iter().filter(move |c| c.over == over)
    }
}

/// Cyclic groups `Z_n` as addition tables, for initiality targets.
pub fn cyclic_group(n: usize) -> Vec<usize> {
    cyclic_add(n)
}
