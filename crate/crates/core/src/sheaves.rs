//! The tilde presheaf `a ↦ M_a = S(a)⁻¹M` on the basic opens of `Spec_Γ`,
//! its restriction maps, global sections, gluing and full faithfulness.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::{close_multiplicative, factor_through, is_invertible};
use crate::maps::DEFAULT_NODE_BUDGET;
use crate::module::{module_hom_search, GammaModule};
use crate::presentation::group_invariants;
use crate::semiring::{Elem, GammaSemiring};
use crate::spectrum::{spec, SpecGamma};
use crate::tensor::{localize_module, localize_morphism, tensor_map, LocalizedModule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    Localized,
    /// `D(a) = ∅`; the section is the zero module.
    EmptyOpen,
}

#[derive(Debug, Clone)]
pub struct Section {
    pub generator: Elem,
    pub open: BTreeSet<usize>,
    pub kind: SectionKind,
    pub local: Option<LocalizedModule>,
}

impl Section {
    pub fn size(&self) -> usize {
        self.local.as_ref().map_or(1, |l| l.module.size())
    }

    /// Image of `m ∈ M^gp` under the unit `M^gp → M_a`.
    pub fn unit(&self, m: usize) -> usize {
        self.local.as_ref().map_or(0, |l| l.unit[m])
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.local.as_ref().map_or(0, |l| l.module.add(x, y))
    }

    pub fn invariants(&self) -> Vec<u64> {
        match &self.local {
            Some(l) => group_invariants(l.module.size(), l.module.add_table()).unwrap_or_default(),
            None => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SheafDefect {
    MissingRestriction { from: Elem, to: Elem, reason: String },
    IdentityFails { at: Elem },
    CompositionFails { a: Elem, b: Elem, c: Elem },
    GeneratorDependent { a: Elem, b: Elem },
}

#[derive(Debug, Clone)]
pub struct BasisPresheaf {
    pub spec: SpecGamma,
    /// The group-completed module the presheaf is built from.
    pub module: GammaModule,
    pub sections: Vec<Section>,
    /// `(a, b) ↦ M_a → M_b` for every `D(b) ⊆ D(a)` that could be built.
    pub restrictions: BTreeMap<(Elem, Elem), Vec<usize>>,
    pub defects: Vec<SheafDefect>,
}

impl BasisPresheaf {
    pub fn restriction(&self, a: Elem, b: Elem) -> Option<&[usize]> {
        self.restrictions.get(&(a, b)).map(Vec::as_slice)
    }

    pub fn is_defect_free(&self) -> bool {
        self.defects.is_empty()
    }

    /// One generator per distinct nonempty basic open, the least one.
    pub fn open_generators(&self) -> Vec<Elem> {
        let mut seen = HashSet::new();
        (0..self.sections.len())
            .filter(|&a| !self.sections[a].open.is_empty() && seen.insert(self.sections[a].open.clone()))
            .collect()
    }

    fn restrict(&self, a: Elem, b: Elem) -> Result<&[usize]> {
        self.restriction(a, b).ok_or_else(|| {
            Error::precondition(format!("restriction from D({a}) to D({b}) is unavailable"))
        })
    }
}

fn section(t: &GammaSemiring, spec: &SpecGamma, m: &GammaModule, a: Elem) -> Result<Section> {
    let open = spec.basic_open(a).clone();
    if open.is_empty() {
        return Ok(Section {
            generator: a,
            open,
            kind: SectionKind::EmptyOpen,
            local: None,
        });
    }
    // a ∉ some prime, so the closure of {a} avoids 0
    let sys = close_multiplicative(t, &[a])?;
    let local = localize_module(t, &sys, m)?;
    Ok(Section {
        generator: a,
        open,
        kind: SectionKind::Localized,
        local: Some(local),
    })
}

/// `M_a → M_b` from the unique `S(a)⁻¹T → S(b)⁻¹T` under `T`.
fn build_restriction(t: &GammaSemiring, from: &Section, to: &Section) -> std::result::Result<Vec<usize>, String> {
    let (Some(la), Some(lb)) = (&from.local, &to.local) else {
        return Ok(vec![0; from.size()]);
    };
    let lq = lb.localized.quotient();
    for &s in la.localized.system().members() {
        if is_invertible(lq, lb.ell[s]).is_none() {
            return Err(format!("image of {s} is not invertible in the smaller localization"));
        }
    }
    let fac = factor_through(t, &la.localized, &la.ell, lq, &lb.ell).map_err(|e| e.to_string())?;
    let g = match (fac.count, fac.first) {
        (1, Some(g)) => g,
        (n, _) => return Err(format!("{n} scalar maps factor the canonical map")),
    };
    let neg = lb.scalars_gp.negation().ok_or("completed scalars are not a group")?;
    let g_gp: Vec<usize> = la
        .scalars_reps
        .iter()
        .map(|&(x, y)| lb.scalars_gp.add(lb.scalars_unit[g[x]], neg[lb.scalars_unit[g[y]]]))
        .collect();
    let id: Vec<usize> = (0..la.unit.len()).collect();
    tensor_map(&la.tensor, &lb.tensor, &g_gp, &id).map_err(|e| e.to_string())
}

fn compose(first: &[usize], second: &[usize]) -> Vec<usize> {
    first.iter().map(|&x| second[x]).collect()
}

/// Builds sections over every `D(a)` and restrictions for every inclusion.
pub fn tilde(t: &GammaSemiring, m: &GammaModule) -> Result<BasisPresheaf> {
    if !m.is_group() {
        return Err(Error::precondition("module is not a group; complete it first"));
    }
    let spec = spec(t)?;
    let sections: Vec<Section> = (0..t.size())
        .map(|a| section(t, &spec, m, a))
        .collect::<Result<_>>()?;
    let n = t.size();
    let mut restrictions = BTreeMap::new();
    let mut defects = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if !sections[b].open.is_subset(&sections[a].open) {
                continue;
            }
            match build_restriction(t, &sections[a], &sections[b]) {
                Ok(map) => {
                    restrictions.insert((a, b), map);
                }
                Err(reason) => defects.push(SheafDefect::MissingRestriction { from: a, to: b, reason }),
            }
        }
    }
    for a in 0..n {
        if let Some(r) = restrictions.get(&(a, a)) {
            if r.iter().enumerate().any(|(i, &v)| i != v) {
                defects.push(SheafDefect::IdentityFails { at: a });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (Some(ab), Some(bc), Some(ac)) =
                    (restrictions.get(&(a, b)), restrictions.get(&(b, c)), restrictions.get(&(a, c)))
                else {
                    continue;
                };
                if compose(ab, bc) != *ac {
                    defects.push(SheafDefect::CompositionFails { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if sections[a].open != sections[b].open || sections[a].open.is_empty() {
                continue;
            }
            let inverse = match (restrictions.get(&(a, b)), restrictions.get(&(b, a))) {
                (Some(ab), Some(ba)) => {
                    compose(ab, ba).iter().enumerate().all(|(i, &v)| i == v)
                        && compose(ba, ab).iter().enumerate().all(|(i, &v)| i == v)
                }
                _ => false,
            };
            if !inverse {
                defects.push(SheafDefect::GeneratorDependent { a, b });
            }
        }
    }
    Ok(BasisPresheaf {
        spec,
        module: m.clone(),
        sections,
        restrictions,
        defects,
    })
}

/// First cover of `Spec` by the fewest basic opens, as generators.
pub fn minimal_cover(p: &BasisPresheaf) -> Option<Vec<Elem>> {
    let points = p.spec.all_points();
    if points.is_empty() {
        return Some(Vec::new());
    }
    let gens = p.open_generators();
    for k in 1..=gens.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let union: BTreeSet<usize> = idx.iter().flat_map(|&i| p.sections[gens[i]].open.iter().copied()).collect();
            if union == points {
                return Some(idx.iter().map(|&i| gens[i]).collect());
            }
            // next combination
            let mut i = k;
            while i > 0 && idx[i - 1] == gens.len() - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// Generator of `D(a) ∩ D(b)`, preferring `{a,b,b}_γ` in the first mode.
fn overlap(t: &GammaSemiring, p: &BasisPresheaf, a: Elem, b: Elem) -> Result<Elem> {
    let target: BTreeSet<usize> = p.sections[a].open.intersection(&p.sections[b].open).copied().collect();
    let c = t.tern(a, b, b, 0);
    if p.sections[c].open == target {
        return Ok(c);
    }
    p.spec
        .basic_generator(&target)
        .ok_or_else(|| Error::precondition(format!("D({a}) ∩ D({b}) is not a basic open")))
}

/// Families `(s_i ∈ M_{a_i})` agreeing on all pairwise overlaps.
fn compatible_families(t: &GammaSemiring, p: &BasisPresheaf, cover: &[Elem]) -> Result<Vec<Vec<usize>>> {
    let mut checks = Vec::new();
    for i in 0..cover.len() {
        for j in 0..i {
            let c = overlap(t, p, cover[i], cover[j])?;
            checks.push((j, i, p.restrict(cover[j], c)?, p.restrict(cover[i], c)?));
        }
    }
    let sizes: Vec<usize> = cover.iter().map(|&a| p.sections[a].size()).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(cover.len());
    let mut nodes = 0u64;
    fn walk(
        i: usize,
        sizes: &[usize],
        checks: &[(usize, usize, &[usize], &[usize])],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
    ) -> Result<()> {
        if i == sizes.len() {
            out.push(current.clone());
            return Ok(());
        }
        for s in 0..sizes[i] {
            *nodes += 1;
            if *nodes > DEFAULT_NODE_BUDGET {
                return Err(Error::resource("section family enumeration", *nodes as u128, DEFAULT_NODE_BUDGET as u128));
            }
            current.push(s);
            let ok = checks
                .iter()
                .filter(|c| c.1 == i)
                .all(|&(j, _, rj, ri)| rj[current[j]] == ri[s]);
            if ok {
                walk(i + 1, sizes, checks, current, out, nodes)?;
            }
            current.pop();
        }
        Ok(())
    }
    walk(0, &sizes, &checks, &mut current, &mut out, &mut nodes)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalSections {
    pub cover: Vec<Elem>,
    pub equalizer_size: usize,
    pub equalizer_invariants: Vec<u64>,
    pub completion_size: usize,
    pub completion_invariants: Vec<u64>,
    /// The natural map `M^gp → Γ(X, M̃)` lands in the equalizer.
    pub natural_map_lands: bool,
    pub isomorphic: bool,
    pub witness: Option<String>,
}

pub fn global_sections(t: &GammaSemiring, p: &BasisPresheaf) -> Result<GlobalSections> {
    let cover = minimal_cover(p).ok_or_else(|| Error::precondition("no basic cover of Spec exists"))?;
    global_sections_over(t, p, &cover)
}

/// Equalizer over a given basic cover, compared with `M^gp`.
pub fn global_sections_over(t: &GammaSemiring, p: &BasisPresheaf, cover: &[Elem]) -> Result<GlobalSections> {
    let union: BTreeSet<usize> = cover.iter().flat_map(|&a| p.sections[a].open.iter().copied()).collect();
    if union != p.spec.all_points() {
        return Err(Error::precondition(format!("{cover:?} does not cover Spec")));
    }
    let families = compatible_families(t, p, cover)?;
    let index: HashMap<&Vec<usize>, usize> = families.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let k = families.len();
    let mut add = Vec::with_capacity(k * k);
    for x in &families {
        for y in &families {
            let sum: Vec<usize> = cover
                .iter()
                .enumerate()
                .map(|(i, &a)| p.sections[a].add(x[i], y[i]))
                .collect();
            add.push(*index.get(&sum).ok_or_else(|| Error::structural("equalizer is not closed under addition"))?);
        }
    }
    let m = &p.module;
    let mut witness = None;
    let mut images = Vec::with_capacity(m.size());
    for x in 0..m.size() {
        let family: Vec<usize> = cover.iter().map(|&a| p.sections[a].unit(x)).collect();
        match index.get(&family) {
            Some(&i) => images.push(i),
            None => {
                witness.get_or_insert(format!("image of {x} is not a compatible family"));
            }
        }
    }
    let natural_map_lands = images.len() == m.size();
    let bijective = natural_map_lands && k == m.size() && images.iter().collect::<HashSet<_>>().len() == k;
    if natural_map_lands && !bijective && witness.is_none() {
        witness = Some(format!(
            "natural map from {} elements onto {} compatible families is not bijective",
            m.size(),
            k
        ));
    }
    Ok(GlobalSections {
        cover: cover.to_vec(),
        equalizer_size: k,
        equalizer_invariants: group_invariants(k, &add)?,
        completion_size: m.size(),
        completion_invariants: group_invariants(m.size(), m.add_table())?,
        natural_map_lands,
        isomorphic: bijective,
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueVerdict {
    Pass,
    Fail,
    /// The union of the cover is not a basic open.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueReport {
    pub cover: Vec<Elem>,
    pub union_generator: Option<Elem>,
    pub families: u64,
    pub verdict: GlueVerdict,
    /// A compatible family with no glue or several.
    pub witness: Option<Vec<usize>>,
    pub witness_glues: Option<u64>,
}

/// For every compatible family on `cover`, counts sections over the union
/// restricting to it; passes when every count is exactly one.
pub fn check_gluing(t: &GammaSemiring, p: &BasisPresheaf, cover: &[Elem]) -> Result<GlueReport> {
    if let Some(&a) = cover.iter().find(|&&a| a >= p.sections.len()) {
        return Err(Error::input(format!("cover element {a} outside carrier")));
    }
    let union: BTreeSet<usize> = cover.iter().flat_map(|&a| p.sections[a].open.iter().copied()).collect();
    let Some(c) = p.spec.basic_generator(&union) else {
        return Ok(GlueReport {
            cover: cover.to_vec(),
            union_generator: None,
            families: 0,
            verdict: GlueVerdict::Skipped,
            witness: None,
            witness_glues: None,
        });
    };
    let families = compatible_families(t, p, cover)?;
    let maps: Vec<&[usize]> = cover.iter().map(|&a| p.restrict(c, a)).collect::<Result<_>>()?;
    let mut glue_counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for s in 0..p.sections[c].size() {
        let key: Vec<usize> = maps.iter().map(|r| r[s]).collect();
        *glue_counts.entry(key).or_default() += 1;
    }
    let bad = families
        .iter()
        .map(|f| (f, glue_counts.get(f).copied().unwrap_or(0)))
        .find(|&(_, n)| n != 1);
    Ok(GlueReport {
        cover: cover.to_vec(),
        union_generator: Some(c),
        families: families.len() as u64,
        verdict: if bad.is_none() { GlueVerdict::Pass } else { GlueVerdict::Fail },
        witness: bad.map(|(f, _)| f.clone()),
        witness_glues: bad.map(|(_, n)| n),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullFaithfulness {
    pub opens: Vec<Elem>,
    pub homs: u64,
    pub families: u64,
    /// `φ ↦ (id ⊗ φ)_a` is a bijection onto compatible families.
    pub bijective: bool,
}

fn local_homs(ms: &Section, ns: &Section) -> Result<Vec<Vec<usize>>> {
    match (&ms.local, &ns.local) {
        (Some(lm), Some(ln)) => module_hom_search(&lm.module, &ln.module)?.collect(DEFAULT_NODE_BUDGET),
        _ => Ok(vec![vec![0; ms.size()]]),
    }
}

/// Compares `Hom_T(M^gp, N^gp)` with families of section morphisms over the
/// basis that commute with every restriction.
pub fn check_full_faithfulness(t: &GammaSemiring, m: &GammaModule, n: &GammaModule) -> Result<FullFaithfulness> {
    let pm = tilde(t, m)?;
    let pn = tilde(t, n)?;
    let opens = pm.open_generators();
    let homs: Vec<Vec<usize>> = module_hom_search(m, n)?.collect(DEFAULT_NODE_BUDGET)?;
    let local: Vec<Vec<Vec<usize>>> = opens
        .iter()
        .map(|&a| local_homs(&pm.sections[a], &pn.sections[a]))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for (i, &a) in opens.iter().enumerate() {
        for (j, &b) in opens.iter().enumerate() {
            if i != j && pm.sections[b].open.is_subset(&pm.sections[a].open) {
                pairs.push((i, j, pm.restrict(a, b)?, pn.restrict(a, b)?));
            }
        }
    }
    let compatible = |choice: &[usize], upto: usize| {
        pairs.iter().filter(|p| p.0.max(p.1) == upto).all(|&(i, j, rm, rn)| {
            let (fi, fj) = (&local[i][choice[i]], &local[j][choice[j]]);
            (0..rm.len()).all(|x| rn[fi[x]] == fj[rm[x]])
        })
    };
    let mut families = HashSet::new();
    let mut choice = vec![0usize; opens.len()];
    let mut nodes = 0u64;
    fn walk(
        i: usize,
        local: &[Vec<Vec<usize>>],
        choice: &mut Vec<usize>,
        ok: &dyn Fn(&[usize], usize) -> bool,
        out: &mut HashSet<Vec<Vec<usize>>>,
        nodes: &mut u64,
    ) -> Result<()> {
        if i == local.len() {
            out.insert(choice.iter().enumerate().map(|(k, &c)| local[k][c].clone()).collect());
            return Ok(());
        }
        for c in 0..local[i].len() {
            *nodes += 1;
            if *nodes > DEFAULT_NODE_BUDGET {
                return Err(Error::resource("morphism family enumeration", *nodes as u128, DEFAULT_NODE_BUDGET as u128));
            }
            choice[i] = c;
            if ok(choice, i) {
                walk(i + 1, local, choice, ok, out, nodes)?;
            }
        }
        Ok(())
    }
    walk(0, &local, &mut choice, &compatible, &mut families, &mut nodes)?;

    let mut images = HashSet::new();
    let mut bijective = true;
    for phi in &homs {
        let family: Vec<Vec<usize>> = opens
            .iter()
            .map(|&a| match (&pm.sections[a].local, &pn.sections[a].local) {
                (Some(lm), Some(ln)) => localize_morphism(lm, ln, phi),
                _ => Ok(vec![0; pm.sections[a].size()]),
            })
            .collect::<Result<_>>()?;
        if !families.contains(&family) || !images.insert(family) {
            bijective = false;
        }
    }
    bijective &= images.len() == families.len();
    Ok(FullFaithfulness {
        opens,
        homs: homs.len() as u64,
        families: families.len() as u64,
        bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::group_completion;

    fn z(n: usize, g: &[usize]) -> GammaSemiring {
        GammaSemiring::standard_family(n, g).unwrap()
    }

    #[test]
    fn z5_regular_presheaf() {
        let t = z(5, &[1]);
        let p = tilde(&t, &GammaModule::regular(&t)).unwrap();
        assert!(p.is_defect_free(), "{:?}", p.defects);
        assert_eq!(p.sections[0].kind, SectionKind::EmptyOpen);
        for a in 1..5 {
            assert_eq!(p.sections[a].size(), 5);
        }
        let g = global_sections(&t, &p).unwrap();
        assert!(g.isomorphic, "{g:?}");
        assert_eq!(g.equalizer_size, 5);
        let glue = check_gluing(&t, &p, &[1]).unwrap();
        assert_eq!(glue.verdict, GlueVerdict::Pass);
    }

    #[test]
    fn zero_module_sections_are_zero() {
        let t = z(6, &[1]);
        let p = tilde(&t, &GammaModule::zero(&t)).unwrap();
        assert!(p.sections.iter().all(|s| s.size() == 1));
        assert!(global_sections(&t, &p).unwrap().isomorphic);
    }

    #[test]
    fn z6_regular_sections_and_gluing() {
        let t = z(6, &[1]);
        let p = tilde(&t, &GammaModule::regular(&t)).unwrap();
        assert!(p.is_defect_free(), "{:?}", p.defects);
        let g = global_sections(&t, &p).unwrap();
        assert!(g.isomorphic, "{g:?}");
        let glue = check_gluing(&t, &p, &[2, 3]).unwrap();
        assert_eq!(glue.verdict, GlueVerdict::Pass, "{glue:?}");
        let other = global_sections_over(&t, &p, &[2, 3]).unwrap();
        assert_eq!(other.equalizer_invariants, g.equalizer_invariants);
    }

    #[test]
    fn full_faithfulness_counts() {
        let t = z(5, &[1]);
        let r = GammaModule::regular(&t);
        let z2 = GammaModule::cyclic_zero_action(&t, 2).unwrap();
        let zero = GammaModule::zero(&t);
        let f = check_full_faithfulness(&t, &r, &r).unwrap();
        assert_eq!(f.homs, f.families);
        assert!(f.bijective);
        let f = check_full_faithfulness(&t, &r, &zero).unwrap();
        assert_eq!((f.homs, f.families), (1, 1));
        let f = check_full_faithfulness(&t, &r, &group_completion(&z2).unwrap().module).unwrap();
        assert_eq!(f.homs, f.families);
    }
}
