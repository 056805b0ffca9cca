//! Bounded chain complexes of group-completed Γ-modules.
//!
//! Indexing is homological: `d_n: K_n → K_{n−1}`. Cohomological statements
//! translate through `H^i = H_{−i}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::close_multiplicative;
use crate::maps::DEFAULT_NODE_BUDGET;
use crate::module::{is_module_hom, module_hom_search, GammaModule};
use crate::par;
use crate::semiring::{Elem, GammaSemiring};
use crate::spectrum::spec;
use crate::tensor::{localize_module, localize_morphism, LocalizedModule};

pub type Degree = i64;

fn zero_module(scalars: usize, gammas: usize) -> GammaModule {
    GammaModule::new(scalars, gammas, 1, vec![0], vec![0; scalars * scalars * gammas]).expect("zero module")
}

/// `A ⊕ B` with `(x, y)` encoded as `x * |B| + y`.
pub fn direct_sum(a: &GammaModule, b: &GammaModule) -> Result<GammaModule> {
    if a.scalar_count() != b.scalar_count() || a.gamma_count() != b.gamma_count() {
        return Err(Error::input("summands are over different structures"));
    }
    let (na, nb) = (a.size(), b.size());
    let size = na * nb;
    let split = |z: usize| (z / nb, z % nb);
    let add = (0..size * size)
        .map(|i| {
            let ((x1, y1), (x2, y2)) = (split(i / size), split(i % size));
            a.add(x1, x2) * nb + b.add(y1, y2)
        })
        .collect();
    let (s, g) = (a.scalar_count(), a.gamma_count());
    let mut action = Vec::with_capacity(s * s * size * g);
    for p in 0..s {
        for q in 0..s {
            for z in 0..size {
                let (x, y) = split(z);
                for gm in 0..g {
                    action.push(a.act(p, q, x, gm) * nb + b.act(p, q, y, gm));
                }
            }
        }
    }
    GammaModule::new(s, g, size, add, action)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    lo: Degree,
    modules: Vec<GammaModule>,
    /// `diffs[i]` is `d_{lo+i}`.
    diffs: Vec<Vec<usize>>,
    zero: GammaModule,
}

impl ChainComplex {
    /// `modules[i]` sits in degree `lo + i` and `diffs[i]` is its outgoing
    /// differential; the lowest one must vanish.
    pub fn new(lo: Degree, modules: Vec<GammaModule>, diffs: Vec<Vec<usize>>) -> Result<Self> {
        let first = modules.first().ok_or_else(|| Error::input("complex has no degrees"))?;
        let (s, g) = (first.scalar_count(), first.gamma_count());
        if diffs.len() != modules.len() {
            return Err(Error::input(format!(
                "{} differentials for {} degrees",
                diffs.len(),
                modules.len()
            )));
        }
        for (i, m) in modules.iter().enumerate() {
            let n = lo + i as Degree;
            if m.scalar_count() != s || m.gamma_count() != g {
                return Err(Error::input(format!("degree {n} is over a different structure")));
            }
            if !m.is_group() {
                return Err(Error::precondition(format!("degree {n} is not a group; complete it first")));
            }
        }
        let k = ChainComplex {
            lo,
            modules,
            diffs,
            zero: zero_module(s, g),
        };
        for n in k.degrees() {
            let d = &k.diffs[(n - lo) as usize];
            if d.len() != k.module(n).size() {
                return Err(Error::input(format!("d_{n} has {} entries, expected {}", d.len(), k.module(n).size())));
            }
            if !is_module_hom(k.module(n), k.module(n - 1), d) {
                return Err(Error::input(format!("d_{n} is not Γ-linear")));
            }
        }
        for n in k.degrees() {
            if let Some(x) = (0..k.module(n).size()).find(|&x| k.d(n - 1, k.d(n, x)) != 0) {
                return Err(Error::structural(format!("d_{} ∘ d_{n} is nonzero at {x}", n - 1)));
            }
        }
        Ok(k)
    }

    /// `M` placed in degree `n`.
    pub fn concentrated(n: Degree, m: GammaModule) -> Result<Self> {
        let d = vec![0; m.size()];
        ChainComplex::new(n, vec![m], vec![d])
    }

    /// Entries `(n, K_n, d_n)` in any order; degrees must be contiguous.
    pub fn from_degrees(mut entries: Vec<(Degree, GammaModule, Vec<usize>)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        let lo = entries.first().ok_or_else(|| Error::input("complex has no degrees"))?.0;
        for (i, e) in entries.iter().enumerate() {
            if e.0 != lo + i as Degree {
                return Err(Error::input(format!("degree {} is missing or repeated", lo + i as Degree)));
            }
        }
        let (modules, diffs) = entries.into_iter().map(|(_, m, d)| (m, d)).unzip();
        ChainComplex::new(lo, modules, diffs)
    }

    pub fn lo(&self) -> Degree {
        self.lo
    }

    pub fn hi(&self) -> Degree {
        self.lo + self.modules.len() as Degree - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<Degree> {
        self.lo..=self.hi()
    }

    pub fn scalar_count(&self) -> usize {
        self.zero.scalar_count()
    }

    pub fn gamma_count(&self) -> usize {
        self.zero.gamma_count()
    }

    /// `K_n`, the zero module outside the support.
    pub fn module(&self, n: Degree) -> &GammaModule {
        self.index(n).map_or(&self.zero, |i| &self.modules[i])
    }

    pub fn d(&self, n: Degree, x: usize) -> usize {
        self.index(n).map_or(0, |i| self.diffs[i][x])
    }

    pub fn differential(&self, n: Degree) -> Vec<usize> {
        (0..self.module(n).size()).map(|x| self.d(n, x)).collect()
    }

    fn index(&self, n: Degree) -> Option<usize> {
        (self.degrees().contains(&n)).then(|| (n - self.lo) as usize)
    }
}

/// `{x ∈ carrier}` modulo the subgroup `sub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subquotient {
    pub module: GammaModule,
    /// Class of each ambient element inside the carrier.
    pub class_of: Vec<Option<usize>>,
    /// Least ambient element of each class.
    pub representatives: Vec<usize>,
}

pub fn subquotient(m: &GammaModule, carrier: &[bool], sub: &[bool]) -> Result<Subquotient> {
    let n = m.size();
    let members: Vec<usize> = (0..n).filter(|&x| sub[x]).collect();
    let mut class_of = vec![None; n];
    let mut representatives = Vec::new();
    for x in (0..n).filter(|&x| carrier[x]) {
        if class_of[x].is_some() {
            continue;
        }
        let c = representatives.len();
        representatives.push(x);
        for &s in &members {
            let y = m.add(x, s);
            if !carrier[y] {
                return Err(Error::structural("subgroup is not contained in the carrier"));
            }
            class_of[y] = Some(c);
        }
    }
    let count = representatives.len();
    let class = |x: usize| class_of[x].ok_or_else(|| Error::structural("carrier is not closed"));
    let mut add = vec![0; count * count];
    for (i, &x) in representatives.iter().enumerate() {
        for (j, &y) in representatives.iter().enumerate() {
            add[i * count + j] = class(m.add(x, y))?;
        }
    }
    let (s, g) = (m.scalar_count(), m.gamma_count());
    let mut action = vec![0; s * s * count * g];
    for a in 0..s {
        for b in 0..s {
            for gm in 0..g {
                for (c, &r) in representatives.iter().enumerate() {
                    action[((a * s + b) * count + c) * g + gm] = class(m.act(a, b, r, gm))?;
                }
            }
        }
    }
    let module = GammaModule::new(s, g, count, add, action)?;
    for x in (0..n).filter(|&x| carrier[x]) {
        let cx = class(x)?;
        for y in (0..n).filter(|&y| carrier[y]) {
            if module.add(cx, class(y)?) != class(m.add(x, y))? {
                return Err(Error::structural("induced addition depends on representatives"));
            }
        }
        for a in 0..s {
            for b in 0..s {
                for gm in 0..g {
                    if module.act(a, b, cx, gm) != class(m.act(a, b, x, gm))? {
                        return Err(Error::structural(format!(
                            "induced action depends on representatives at ({a}, {b}, mode {gm})"
                        )));
                    }
                }
            }
        }
    }
    Ok(Subquotient {
        module,
        class_of,
        representatives,
    })
}

/// `H_n = ker d_n / im d_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub degree: Degree,
    pub module: GammaModule,
    /// Class of each cycle of `K_n`; `None` off the cycles.
    pub class_of: Vec<Option<usize>>,
    pub representatives: Vec<usize>,
    pub cycles: usize,
    pub boundaries: usize,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.module.size() == 1
    }
}

pub fn homology(k: &ChainComplex, n: Degree) -> Result<Homology> {
    let m = k.module(n);
    let cycles: Vec<bool> = (0..m.size()).map(|x| k.d(n, x) == 0).collect();
    let mut boundaries = vec![false; m.size()];
    for y in 0..k.module(n + 1).size() {
        boundaries[k.d(n + 1, y)] = true;
    }
    let q = subquotient(m, &cycles, &boundaries)?;
    let (z, b) = (
        cycles.iter().filter(|&&c| c).count(),
        boundaries.iter().filter(|&&c| c).count(),
    );
    if z % q.module.size() != 0 || z / q.module.size() != b {
        return Err(Error::structural(format!("|H_{n}| does not match |Z_{n}| / |B_{n}|")));
    }
    Ok(Homology {
        degree: n,
        module: q.module,
        class_of: q.class_of,
        representatives: q.representatives,
        cycles: z,
        boundaries: b,
    })
}

/// `H_n` for every degree of the support, computed independently.
pub fn homology_all(k: &ChainComplex) -> Result<Vec<Homology>> {
    let degrees: Vec<Degree> = k.degrees().collect();
    par::map_slice(&degrees, |&n| homology(k, n)).into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    /// Indexed by the source support.
    components: Vec<Vec<usize>>,
}

impl ChainMap {
    /// Components keyed by degree; missing degrees of the source support
    /// default to zero.
    pub fn new(source: ChainComplex, target: ChainComplex, components: BTreeMap<Degree, Vec<usize>>) -> Result<Self> {
        if source.scalar_count() != target.scalar_count() || source.gamma_count() != target.gamma_count() {
            return Err(Error::input("complexes are over different structures"));
        }
        if let Some(n) = components.keys().find(|n| !source.degrees().contains(n)) {
            return Err(Error::input(format!("component in degree {n} lies outside the source support")));
        }
        let components: Vec<Vec<usize>> = source
            .degrees()
            .map(|n| components.get(&n).cloned().unwrap_or_else(|| vec![0; source.module(n).size()]))
            .collect();
        let f = ChainMap {
            source,
            target,
            components,
        };
        for n in f.source.degrees() {
            if !is_module_hom(f.source.module(n), f.target.module(n), &f.components[(n - f.source.lo) as usize]) {
                return Err(Error::input(format!("component f_{n} is not Γ-linear")));
            }
            for x in 0..f.source.module(n).size() {
                if f.apply(n - 1, f.source.d(n, x)) != f.target.d(n, f.apply(n, x)) {
                    return Err(Error::input(format!("f does not commute with d_{n} at {x}")));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(k: &ChainComplex) -> ChainMap {
        let components = k.degrees().map(|n| (n, (0..k.module(n).size()).collect())).collect();
        ChainMap::new(k.clone(), k.clone(), components).expect("identity is a chain map")
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Result<ChainMap> {
        ChainMap::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn compose(&self, next: &ChainMap) -> Result<ChainMap> {
        if self.target != next.source {
            return Err(Error::input("maps are not composable"));
        }
        let components = self
            .source
            .degrees()
            .map(|n| (n, (0..self.source.module(n).size()).map(|x| next.apply(n, self.apply(n, x))).collect()))
            .collect();
        ChainMap::new(self.source.clone(), next.target.clone(), components)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn apply(&self, n: Degree, x: usize) -> usize {
        self.source.index(n).map_or(0, |i| self.components[i][x])
    }

    pub fn component(&self, n: Degree) -> Vec<usize> {
        (0..self.source.module(n).size()).map(|x| self.apply(n, x)).collect()
    }

    /// Union of both supports.
    pub fn degrees(&self) -> std::ops::RangeInclusive<Degree> {
        self.source.lo.min(self.target.lo)..=self.source.hi().max(self.target.hi())
    }
}

/// Every chain map `K → L`, components chosen degree by degree from the
/// Γ-linear maps and pruned by commutation with `d`.
pub fn enumerate_chain_maps(source: &ChainComplex, target: &ChainComplex, cap: usize) -> Result<Vec<ChainMap>> {
    let degrees: Vec<Degree> = source.degrees().collect();
    let options: Vec<Vec<Vec<usize>>> = degrees
        .iter()
        .map(|&n| module_hom_search(source.module(n), target.module(n))?.collect(DEFAULT_NODE_BUDGET))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn walk(
        i: usize,
        degrees: &[Degree],
        options: &[Vec<Vec<usize>>],
        source: &ChainComplex,
        target: &ChainComplex,
        chosen: &mut Vec<usize>,
        out: &mut Vec<BTreeMap<Degree, Vec<usize>>>,
        cap: usize,
    ) -> Result<()> {
        if i == degrees.len() {
            if out.len() >= cap {
                return Err(Error::resource("chain map enumeration", out.len() as u128 + 1, cap as u128));
            }
            out.push(degrees.iter().zip(chosen.iter()).map(|(&n, &c)| (n, options[(n - degrees[0]) as usize][c].clone())).collect());
            return Ok(());
        }
        let n = degrees[i];
        for c in 0..options[i].len() {
            let f = &options[i][c];
            // f_{n−1} ∘ d_n = d_n ∘ f_n, with f_{n−1} known (or zero below the support)
            let below = |y: usize| if i == 0 { 0 } else { options[i - 1][chosen[i - 1]][y] };
            if (0..source.module(n).size()).all(|x| below(source.d(n, x)) == target.d(n, f[x])) {
                chosen.push(c);
                walk(i + 1, degrees, options, source, target, chosen, out, cap)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    let mut components = Vec::new();
    walk(0, &degrees, &options, source, target, &mut chosen, &mut components, cap)?;
    for c in components {
        out.push(ChainMap::new(source.clone(), target.clone(), c)?);
    }
    Ok(out)
}

/// `H(K) → H(L)` for a degreewise map `x ↦ map(x)` carrying cycles to cycles.
fn induced_on(source: &Homology, target: &Homology, map: impl Fn(usize) -> usize) -> Result<Vec<usize>> {
    let mut table = vec![usize::MAX; source.module.size()];
    for (x, c) in source.class_of.iter().enumerate() {
        let Some(c) = *c else { continue };
        let image = target.class_of[map(x)]
            .ok_or_else(|| Error::structural(format!("cycle {x} in degree {} maps off the cycles", source.degree)))?;
        if table[c] == usize::MAX {
            table[c] = image;
        } else if table[c] != image {
            return Err(Error::structural(format!(
                "induced map on H_{} depends on representatives",
                source.degree
            )));
        }
    }
    Ok(table)
}

/// `H_n(f): H_n(K) → H_n(L)`.
pub fn induced_on_homology(f: &ChainMap, n: Degree) -> Result<Vec<usize>> {
    let (hs, ht) = (homology(&f.source, n)?, homology(&f.target, n)?);
    induced_on(&hs, &ht, |x| f.apply(n, x))
}

fn is_bijection(table: &[usize], target_size: usize) -> bool {
    table.len() == target_size && table.iter().copied().collect::<BTreeSet<_>>().len() == target_size
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIsoVerdict {
    pub quasi_iso: bool,
    /// First degree where `H_n(f)` is not bijective.
    pub failing_degree: Option<Degree>,
}

pub fn is_quasi_iso(f: &ChainMap) -> Result<QuasiIsoVerdict> {
    let degrees: Vec<Degree> = f.degrees().collect();
    let verdicts: Vec<Result<bool>> = par::map_slice(&degrees, |&n| {
        let (hs, ht) = (homology(&f.source, n)?, homology(&f.target, n)?);
        Ok(is_bijection(&induced_on(&hs, &ht, |x| f.apply(n, x))?, ht.module.size()))
    });
    for (&n, v) in degrees.iter().zip(verdicts) {
        if !v? {
            return Ok(QuasiIsoVerdict {
                quasi_iso: false,
                failing_degree: Some(n),
            });
        }
    }
    Ok(QuasiIsoVerdict {
        quasi_iso: true,
        failing_degree: None,
    })
}

/// `K[k]_n = K_{n−k}` with differential `(−1)^k d`.
pub fn shift(k: &ChainComplex, by: Degree) -> ChainComplex {
    let odd = by.rem_euclid(2) == 1;
    let diffs = k
        .degrees()
        .map(|n| {
            let d = k.differential(n);
            if odd {
                let neg = k.module(n - 1).negation().expect("complexes are groups");
                d.into_iter().map(|y| neg[y]).collect()
            } else {
                d
            }
        })
        .collect();
    ChainComplex::new(k.lo + by, k.modules.clone(), diffs).expect("shift of a complex is a complex")
}

/// Mapping cone with `C_n = L_n ⊕ K_{n−1}` and
/// `d(l, x) = (d l + f x, −d x)`.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    let (k, l) = (&f.source, &f.target);
    let lo = l.lo.min(k.lo + 1);
    let hi = l.hi().max(k.hi() + 1);
    let mut modules = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        modules.push(direct_sum(l.module(n), k.module(n - 1))?);
        let (kn1, kn2) = (k.module(n - 1).size(), k.module(n - 2).size());
        let neg = k.module(n - 2).negation().expect("complexes are groups");
        let d: Vec<usize> = (0..l.module(n).size() * kn1)
            .map(|z| {
                let (y, x) = (z / kn1, z % kn1);
                let top = l.module(n - 1).add(l.d(n, y), f.apply(n - 1, x));
                top * kn2 + neg[k.d(n - 1, x)]
            })
            .collect();
        diffs.push(d);
    }
    ChainComplex::new(lo, modules, diffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Joint {
    /// At `H_n(L)`: image of `H_n(f)` equals kernel of `H_n(L) → H_n(C)`.
    Target,
    /// At `H_n(C)`: image of `H_n(L)` equals kernel of `H_n(C) → H_{n−1}(K)`.
    Cone,
    /// At `H_{n−1}(K)`: image of `H_n(C)` equals kernel of `H_{n−1}(f)`.
    Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointCheck {
    pub degree: Degree,
    pub joint: Joint,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongExactReport {
    pub joints: Vec<JointCheck>,
    pub exact: bool,
}

fn exact_at(first: &[usize], second: &[usize]) -> bool {
    let image: BTreeSet<usize> = first.iter().copied().collect();
    let kernel: BTreeSet<usize> = (0..second.len()).filter(|&x| second[x] == 0).collect();
    image == kernel
}

/// Exactness of `H_n(K) → H_n(L) → H_n(C) → H_{n−1}(K) → H_{n−1}(L)` at
/// every joint around the support of the cone.
pub fn cone_long_exact(f: &ChainMap) -> Result<LongExactReport> {
    let c = cone(f)?;
    let (k, l) = (&f.source, &f.target);
    let mut joints = Vec::new();
    for n in c.lo - 1..=c.hi() + 1 {
        let (hk, hl, hc) = (homology(k, n)?, homology(l, n)?, homology(&c, n)?);
        let (hk1, hl1) = (homology(k, n - 1)?, homology(l, n - 1)?);
        let kn1 = k.module(n - 1).size();
        let fl = induced_on(&hk, &hl, |x| f.apply(n, x))?;
        let inc = induced_on(&hl, &hc, |y| y * kn1)?;
        let proj = induced_on(&hc, &hk1, |z| z % kn1)?;
        let fl1 = induced_on(&hk1, &hl1, |x| f.apply(n - 1, x))?;
        for (joint, first, second) in [
            (Joint::Target, &fl, &inc),
            (Joint::Cone, &inc, &proj),
            (Joint::Source, &proj, &fl1),
        ] {
            joints.push(JointCheck {
                degree: n,
                joint,
                exact: exact_at(first, second),
            });
        }
    }
    let exact = joints.iter().all(|j| j.exact);
    Ok(LongExactReport { joints, exact })
}

/// Sides of the standard t-structure, in cohomological terms: `Le0` has
/// `H^i = 0` for `i > 0` (homological degrees `n < 0` vanish), `Ge0` has
/// `H^i = 0` for `i < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Le0,
    Ge0,
}

/// `τ≤0 K → K` (inclusion) for `Le0`, `K → τ≥0 K` (projection) for `Ge0`.
pub fn truncation_map(k: &ChainComplex, side: Truncation) -> Result<ChainMap> {
    let mut entries = Vec::new();
    let mut components = BTreeMap::new();
    match side {
        Truncation::Le0 => {
            let m0 = k.module(0);
            let cycles: Vec<bool> = (0..m0.size()).map(|x| k.d(0, x) == 0).collect();
            let mut trivial = vec![false; m0.size()];
            trivial[0] = true;
            let z = subquotient(m0, &cycles, &trivial)?;
            entries.push((0, z.module.clone(), vec![0; z.representatives.len()]));
            components.insert(0, z.representatives.clone());
            for n in 1..=k.hi().max(0) {
                let d = if n == 1 {
                    (0..k.module(1).size())
                        .map(|x| z.class_of[k.d(1, x)].expect("boundaries are cycles"))
                        .collect()
                } else {
                    k.differential(n)
                };
                entries.push((n, k.module(n).clone(), d));
                components.insert(n, (0..k.module(n).size()).collect());
            }
            let truncated = ChainComplex::from_degrees(entries)?;
            ChainMap::new(truncated, k.clone(), components)
        }
        Truncation::Ge0 => {
            let m0 = k.module(0);
            let all = vec![true; m0.size()];
            let mut boundaries = vec![false; m0.size()];
            for y in 0..k.module(1).size() {
                boundaries[k.d(1, y)] = true;
            }
            let q = subquotient(m0, &all, &boundaries)?;
            let d0 = q.representatives.iter().map(|&r| k.d(0, r)).collect();
            entries.push((0, q.module.clone(), d0));
            for n in k.lo.min(0)..0 {
                entries.push((n, k.module(n).clone(), k.differential(n)));
            }
            for n in k.degrees().filter(|&n| n < 0) {
                components.insert(n, (0..k.module(n).size()).collect());
            }
            if k.degrees().contains(&0) {
                components.insert(0, q.class_of.iter().map(|c| c.expect("every element is in the carrier")).collect());
            }
            let truncated = ChainComplex::from_degrees(entries)?;
            ChainMap::new(k.clone(), truncated, components)
        }
    }
}

pub fn truncate(k: &ChainComplex, side: Truncation) -> Result<ChainComplex> {
    let f = truncation_map(k, side)?;
    Ok(match side {
        Truncation::Le0 => f.source,
        Truncation::Ge0 => f.target,
    })
}

/// Whether `τ≥0 τ≤0 K` is `H_0(K)` placed in degree 0, via the natural
/// comparison map.
pub fn truncation_matches_h0(k: &ChainComplex) -> Result<bool> {
    let le = truncation_map(k, Truncation::Le0)?;
    let both = truncate(&le.source, Truncation::Ge0)?;
    let h0 = homology(k, 0)?;
    if both.degrees().any(|n| n != 0 && both.module(n).size() != 1) {
        return Ok(false);
    }
    let inner = truncation_map(&le.source, Truncation::Ge0)?;
    // class of τ≥0τ≤0K in degree 0 ← cycle of Z_0 ← element of K_0
    let q = both.module(0);
    let mut table = vec![usize::MAX; q.size()];
    for z in 0..le.source.module(0).size() {
        let c = inner.apply(0, z);
        let image = h0.class_of[le.apply(0, z)].ok_or_else(|| Error::structural("Z_0 element is not a cycle"))?;
        if table[c] != usize::MAX && table[c] != image {
            return Ok(false);
        }
        table[c] = image;
    }
    Ok(is_bijection(&table, h0.module.size()) && is_module_hom(q, &h0.module, &table))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeartVerdict {
    pub in_heart: bool,
    /// Degrees with nonzero homology.
    pub nonzero_degrees: Vec<Degree>,
    /// `τ≤0 K → K`
    pub inclusion_quasi_iso: bool,
    /// `τ≤0 K → τ≥0 τ≤0 K`
    pub projection_quasi_iso: bool,
    pub h0_size: usize,
}

/// `K` lies in the heart when its homology is concentrated in degree 0 and
/// `K ← τ≤0 K → τ≥0 τ≤0 K` are both quasi-isomorphisms.
pub fn heart_check(k: &ChainComplex) -> Result<HeartVerdict> {
    let nonzero_degrees: Vec<Degree> = homology_all(k)?
        .iter()
        .filter(|h| !h.is_zero())
        .map(|h| h.degree)
        .collect();
    let inclusion = truncation_map(k, Truncation::Le0)?;
    let projection = truncation_map(inclusion.source(), Truncation::Ge0)?;
    let inclusion_quasi_iso = is_quasi_iso(&inclusion)?.quasi_iso;
    let projection_quasi_iso = is_quasi_iso(&projection)?.quasi_iso;
    Ok(HeartVerdict {
        in_heart: nonzero_degrees.iter().all(|&n| n == 0) && inclusion_quasi_iso && projection_quasi_iso,
        nonzero_degrees,
        inclusion_quasi_iso,
        projection_quasi_iso,
        h0_size: homology(k, 0)?.module.size(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenVerdict {
    pub generator: Elem,
    pub quasi_iso: Option<bool>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TildeComplexReport {
    pub global: bool,
    pub opens: Vec<OpenVerdict>,
    /// A global quasi-isomorphism is one on every basic open.
    pub preserves: bool,
    /// Quasi-isomorphisms on every basic open give a global one.
    pub reflects: bool,
}

impl TildeComplexReport {
    pub fn passed(&self) -> bool {
        self.preserves && self.reflects && self.opens.iter().all(|o| o.skipped.is_none())
    }
}

fn localize_complex(t: &GammaSemiring, a: Elem, k: &ChainComplex, range: (Degree, Degree)) -> Result<Vec<LocalizedModule>> {
    let sys = close_multiplicative(t, &[a])?;
    (range.0 - 1..=range.1)
        .map(|n| localize_module(t, &sys, k.module(n)))
        .collect()
}

/// `f` on the sections of the tilde sheaves over `D(a)`.
fn sections_map(t: &GammaSemiring, f: &ChainMap, a: Elem) -> Result<ChainMap> {
    let range = (*f.degrees().start(), *f.degrees().end());
    let at = |n: Degree| (n - range.0 + 1) as usize;
    let (lk, ll) = (
        localize_complex(t, a, &f.source, range)?,
        localize_complex(t, a, &f.target, range)?,
    );
    let complex = |k: &ChainComplex, loc: &[LocalizedModule]| -> Result<ChainComplex> {
        let entries = (range.0..=range.1)
            .map(|n| {
                let d = localize_morphism(&loc[at(n)], &loc[at(n - 1)], &k.differential(n))?;
                Ok((n, loc[at(n)].module.clone(), d))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::from_degrees(entries)
    };
    let (source, target) = (complex(&f.source, &lk)?, complex(&f.target, &ll)?);
    let components = (range.0..=range.1)
        .map(|n| Ok((n, localize_morphism(&lk[at(n)], &ll[at(n)], &f.component(n))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    ChainMap::new(source, target, components)
}

/// Compares `f` being a quasi-isomorphism with the same property for its
/// sections over each distinct nonempty basic open.
pub fn tilde_complex_check(t: &GammaSemiring, f: &ChainMap) -> Result<TildeComplexReport> {
    if f.source.scalar_count() != t.size() || f.source.gamma_count() != t.gamma_count() {
        return Err(Error::input("complexes are not over the given structure"));
    }
    let global = is_quasi_iso(f)?.quasi_iso;
    let sp = spec(t)?;
    let mut seen = BTreeSet::new();
    let generators: Vec<Elem> = (0..t.size())
        .filter(|&a| !sp.basic_open(a).is_empty() && seen.insert(sp.basic_open(a).clone()))
        .collect();
    let opens: Vec<OpenVerdict> = generators
        .iter()
        .map(|&a| match sections_map(t, f, a).and_then(|g| is_quasi_iso(&g)) {
            Ok(v) => OpenVerdict {
                generator: a,
                quasi_iso: Some(v.quasi_iso),
                skipped: None,
            },
            Err(e) => OpenVerdict {
                generator: a,
                quasi_iso: None,
                skipped: Some(e.to_string()),
            },
        })
        .collect();
    let local: Vec<bool> = opens.iter().filter_map(|o| o.quasi_iso).collect();
    let all_local = local.iter().all(|&q| q);
    Ok(TildeComplexReport {
        global,
        preserves: !global || all_local,
        reflects: !all_local || global,
        opens,
    })
}

/// `{"over", "degrees": [{"n", "module", "d"}]}` with module references by path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub over: String,
    pub degrees: Vec<DegreeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDocument {
    pub n: Degree,
    pub module: String,
    pub d: Vec<usize>,
}

/// A chain map between two complex documents, by path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMapDocument {
    pub source: String,
    pub target: String,
    pub components: Vec<ComponentDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDocument {
    pub n: Degree,
    pub map: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::check_module_axioms;

    fn t() -> GammaSemiring {
        GammaSemiring::standard_family(3, &[1]).unwrap()
    }

    fn z(n: usize) -> GammaModule {
        GammaModule::cyclic_zero_action(&t(), n).unwrap()
    }

    fn two_term(n: usize, d: Vec<usize>) -> ChainComplex {
        ChainComplex::new(0, vec![z(n), z(n)], vec![vec![0; n], d]).unwrap()
    }

    #[test]
    fn zero_differential_keeps_modules() {
        let k = ChainComplex::new(0, vec![z(2), z(3)], vec![vec![0; 2], vec![0; 3]]).unwrap();
        let h = homology_all(&k).unwrap();
        assert_eq!(h[0].module.size(), 2);
        assert_eq!(h[1].module.size(), 3);
    }

    #[test]
    fn identity_complex_is_exact() {
        let k = two_term(2, vec![0, 1]);
        assert!(homology_all(&k).unwrap().iter().all(Homology::is_zero));
        let v = heart_check(&k).unwrap();
        assert!(v.in_heart);
        assert_eq!(v.h0_size, 1);
    }

    #[test]
    fn doubling_on_z4() {
        let k = two_term(4, vec![0, 2, 0, 2]);
        for h in homology_all(&k).unwrap() {
            assert_eq!(h.module.size(), 2);
            assert!(check_module_axioms(&t(), &h.module).unwrap().all_pass());
        }
    }

    #[test]
    fn d_squared_is_checked() {
        let m = z(2);
        let r = ChainComplex::new(0, vec![m.clone(), m.clone(), m], vec![vec![0, 0], vec![0, 1], vec![0, 1]]);
        assert!(matches!(r, Err(Error::Structural(_))));
    }

    #[test]
    fn shift_round_trip_and_homology() {
        let k = two_term(4, vec![0, 2, 0, 2]);
        assert_eq!(shift(&k, 0), k);
        assert_eq!(shift(&shift(&k, 1), -1), k);
        let s = shift(&k, 1);
        assert_eq!(s.lo(), 1);
        assert_eq!(homology(&s, 2).unwrap().module.size(), homology(&k, 1).unwrap().module.size());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let k = two_term(4, vec![0, 2, 0, 2]);
        let c = cone(&ChainMap::identity(&k)).unwrap();
        assert!(homology_all(&c).unwrap().iter().all(Homology::is_zero));
        assert!(cone_long_exact(&ChainMap::identity(&k)).unwrap().exact);
    }

    #[test]
    fn cone_of_zero_is_sum_with_shift() {
        let k = two_term(2, vec![0, 1]);
        let l = ChainComplex::concentrated(0, z(3)).unwrap();
        let c = cone(&ChainMap::zero(&k, &l).unwrap()).unwrap();
        let s = shift(&k, 1);
        for n in c.degrees() {
            assert_eq!(c.module(n).size(), l.module(n).size() * s.module(n).size());
        }
    }

    #[test]
    fn inclusion_of_two_z4_is_not_quasi_iso() {
        let sub = ChainComplex::concentrated(0, z(2)).unwrap();
        let whole = ChainComplex::concentrated(0, z(4)).unwrap();
        let f = ChainMap::new(sub, whole, BTreeMap::from([(0, vec![0, 2])])).unwrap();
        let v = is_quasi_iso(&f).unwrap();
        assert!(!v.quasi_iso);
        assert_eq!(v.failing_degree, Some(0));
        assert!(cone_long_exact(&f).unwrap().exact);
    }

    #[test]
    fn chain_maps_between_doubling_complexes() {
        let k = two_term(4, vec![0, 2, 0, 2]);
        // (×b, ×a) on Z4 with 2a ≡ 2b (mod 4): a ≡ b (mod 2)
        assert_eq!(enumerate_chain_maps(&k, &k, 100).unwrap().len(), 8);
        let e = two_term(2, vec![0, 1]);
        // d = id forces f_0 = f_1
        assert_eq!(enumerate_chain_maps(&e, &e, 100).unwrap().len(), 2);
    }

    #[test]
    fn truncations() {
        let k = ChainComplex::new(-1, vec![z(4), z(4), z(4)], vec![vec![0; 4], vec![0, 2, 0, 2], vec![0, 2, 0, 2]])
            .unwrap();
        let le = truncate(&k, Truncation::Le0).unwrap();
        assert_eq!(le.lo(), 0);
        assert_eq!(truncate(&le, Truncation::Le0).unwrap(), le);
        assert!(homology(&le, -1).unwrap().is_zero());
        let ge = truncate(&k, Truncation::Ge0).unwrap();
        assert_eq!(ge.hi(), 0);
        assert!(truncation_matches_h0(&k).unwrap());
        assert!(!heart_check(&k).unwrap().in_heart);

        let single = ChainComplex::concentrated(0, z(3)).unwrap();
        assert_eq!(truncate(&single, Truncation::Le0).unwrap(), single);
        assert_eq!(truncate(&single, Truncation::Ge0).unwrap(), single);
        assert!(heart_check(&single).unwrap().in_heart);
        assert!(!heart_check(&ChainComplex::concentrated(2, z(2)).unwrap()).unwrap().in_heart);
    }

    #[test]
    fn tilde_identity_on_regular_complex() {
        let t = GammaSemiring::standard_family(5, &[1]).unwrap();
        let k = ChainComplex::concentrated(0, GammaModule::regular(&t)).unwrap();
        let r = tilde_complex_check(&t, &ChainMap::identity(&k)).unwrap();
        assert!(r.global && r.passed());
        assert_eq!(r.opens.len(), 1);
    }
}
