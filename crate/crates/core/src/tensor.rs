//! Ternary Γ-tensor products of group-completed modules, balanced maps and
//! localization of modules by scalar extension.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::completion::group_completion;
use crate::error::{Error, Result};
use crate::localization::{canonical_map, localize, LocalizedSemiring, MultiplicativeSystem};
use crate::maps::{MapSearch, DEFAULT_NODE_BUDGET};
use crate::module::{check_module_axioms, module_hom_search, GammaModule};
use crate::par;
use crate::presentation::{AbelianPresentation, PresentedGroup, DEFAULT_ELEMENT_CAP};
use crate::semiring::{Elem, GammaSemiring};

/// Default cap on `|M|·|N|` for balanced-map enumeration.
pub const DEFAULT_PAIR_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorProduct {
    pub module: GammaModule,
    pub presentation: AbelianPresentation,
    pub group: PresentedGroup,
    /// Element `m ⊗ n` at index `m * |N| + n`.
    pub pure: Vec<usize>,
    right: usize,
}

impl TensorProduct {
    pub fn pure_tensor(&self, m: usize, n: usize) -> usize {
        self.pure[m * self.right + n]
    }
}

fn pair(m: usize, n: usize, right: usize) -> usize {
    m * right + n
}

/// Integer relations presenting `M ⊗ N` on generators `m ⊗ n`.
pub fn tensor_presentation(m: &GammaModule, n: &GammaModule) -> AbelianPresentation {
    let (mm, nn) = (m.size(), n.size());
    let labels = (0..mm)
        .flat_map(|x| (0..nn).map(move |y| format!("{x}⊗{y}")))
        .collect();
    let mut p = AbelianPresentation::new(labels);
    let e = |x, y| pair(x, y, nn);
    for y in 0..nn {
        p.relate(&[(e(0, y), 1)]);
    }
    for x in 0..mm {
        p.relate(&[(e(x, 0), 1)]);
    }
    for x1 in 0..mm {
        for x2 in x1..mm {
            for y in 0..nn {
                p.relate(&[(e(m.add(x1, x2), y), 1), (e(x1, y), -1), (e(x2, y), -1)]);
            }
        }
    }
    for x in 0..mm {
        for y1 in 0..nn {
            for y2 in y1..nn {
                p.relate(&[(e(x, n.add(y1, y2)), 1), (e(x, y1), -1), (e(x, y2), -1)]);
            }
        }
    }
    let balancing = par::map_range(m.scalar_count() * m.scalar_count() * m.gamma_count(), |i| {
        let g = i % m.gamma_count();
        let u = (i / m.gamma_count()) % m.scalar_count();
        let t = i / (m.gamma_count() * m.scalar_count());
        let mut rows = Vec::new();
        for x in 0..mm {
            for y in 0..nn {
                let left = e(m.act(t, u, x, g), y);
                let right = e(x, n.act(t, u, y, g));
                if left != right {
                    rows.push((left, right));
                }
            }
        }
        rows
    });
    let mut seen = HashSet::new();
    for (l, r) in balancing.into_iter().flatten() {
        if seen.insert((l.min(r), l.max(r))) {
            p.relate(&[(l, 1), (r, -1)]);
        }
    }
    p
}

/// `M ⊗_Γ N` with the induced action `{a,b,m⊗n}_γ = {a,b,m}_γ ⊗ n`.
pub fn tensor(t: &GammaSemiring, m: &GammaModule, n: &GammaModule) -> Result<TensorProduct> {
    tensor_with_cap(t, m, n, DEFAULT_ELEMENT_CAP)
}

pub fn tensor_with_cap(t: &GammaSemiring, m: &GammaModule, n: &GammaModule, cap: u64) -> Result<TensorProduct> {
    for (name, x) in [("left", m), ("right", n)] {
        if x.scalar_count() != t.size() || x.gamma_count() != t.gamma_count() {
            return Err(Error::input(format!("{name} module is not over this structure")));
        }
        if !x.is_group() {
            return Err(Error::precondition(format!("{name} module is not a group; complete it first")));
        }
    }
    let presentation = tensor_presentation(m, n);
    let group = PresentedGroup::from_presentation(&presentation)?;
    let size = group.element_count(cap)?;
    let add = group.add_table(cap)?;
    let pure: Vec<usize> = (0..presentation.generators()).map(|j| group.generator_element(j)).collect();
    let (s, g) = (t.size(), t.gamma_count());
    let maps = par::map_range(s * s * g, |i| {
        let gm = i % g;
        let b = (i / g) % s;
        let a = i / (g * s);
        let images: Vec<usize> = (0..m.size())
            .flat_map(|x| (0..n.size()).map(move |y| (x, y)))
            .map(|(x, y)| pure[pair(m.act(a, b, x, gm), y, n.size())])
            .collect();
        group
            .induced_map(&presentation.relations, &images, size, &add, cap)
            .map(|r| r.ok_or((a, b, gm)))
    });
    let mut action = vec![0; s * s * size * g];
    for (i, result) in maps.into_iter().enumerate() {
        let table = result?.map_err(|(a, b, gm)| {
            Error::structural(format!(
                "induced action {{{a},{b},·}}_{} is not well defined on the tensor product",
                t.gamma_labels()[gm]
            ))
        })?;
        let gm = i % g;
        let ab = i / g;
        for (x, &v) in table.iter().enumerate() {
            action[(ab * size + x) * g + gm] = v;
        }
    }
    let module = GammaModule::new(s, g, size, add, action)?;
    Ok(TensorProduct {
        module,
        presentation,
        group,
        pure,
        right: n.size(),
    })
}

/// Search over maps `M × N → P` (indexed `m * |N| + n`) that are additive in
/// each slot, balanced, absorb zero and commute with the action on the left
/// factor.
pub fn balanced_map_search(m: &GammaModule, n: &GammaModule, p: &GammaModule, pair_cap: usize) -> Result<MapSearch> {
    let (mm, nn) = (m.size(), n.size());
    if mm * nn > pair_cap {
        return Err(Error::resource("balanced map domain |M|·|N|", (mm * nn) as u128, pair_cap as u128));
    }
    if m.scalar_count() != p.scalar_count() || n.scalar_count() != p.scalar_count() {
        return Err(Error::input("modules are over different structures"));
    }
    let e = |x, y| pair(x, y, nn);
    let mut search = MapSearch::new(mm * nn, p.size(), p.add_table().to_vec());
    for y in 0..nn {
        search.fix(e(0, y), 0);
    }
    for x in 0..mm {
        search.fix(e(x, 0), 0);
    }
    for x1 in 0..mm {
        for x2 in x1..mm {
            for y in 0..nn {
                search.sum(e(x1, y), e(x2, y), e(m.add(x1, x2), y));
            }
        }
    }
    for x in 0..mm {
        for y1 in 0..nn {
            for y2 in y1..nn {
                search.sum(e(x, y1), e(x, y2), e(x, n.add(y1, y2)));
            }
        }
    }
    for t in 0..m.scalar_count() {
        for u in 0..m.scalar_count() {
            for g in 0..m.gamma_count() {
                let table = search.table(p.action_map(t, u, g));
                for x in 0..mm {
                    for y in 0..nn {
                        let left = e(m.act(t, u, x, g), y);
                        let right = e(x, n.act(t, u, y, g));
                        if left != right {
                            search.equal(left, right);
                        }
                        search.image(left, e(x, y), table);
                    }
                }
            }
        }
    }
    Ok(search)
}

pub fn enumerate_balanced_maps(m: &GammaModule, n: &GammaModule, p: &GammaModule) -> Result<Vec<Vec<usize>>> {
    balanced_map_search(m, n, p, DEFAULT_PAIR_CAP)?.collect(DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorUniversal {
    pub homs: u64,
    pub balanced: u64,
    pub tensor_size: usize,
}

/// Verifies that `φ ↦ φ ∘ ⊗` is a bijection `Hom(M⊗N, P) → balanced maps`.
pub fn check_tensor_universal(
    t: &GammaSemiring,
    m: &GammaModule,
    n: &GammaModule,
    p: &GammaModule,
) -> Result<TensorUniversal> {
    let tp = tensor(t, m, n)?;
    let balanced: HashSet<Vec<usize>> = enumerate_balanced_maps(m, n, p)?.into_iter().collect();
    let mut composed = HashSet::new();
    let mut homs = 0u64;
    let mut failure = None;
    module_hom_search(&tp.module, p)?.run(DEFAULT_NODE_BUDGET, |phi| {
        homs += 1;
        let beta: Vec<usize> = tp.pure.iter().map(|&x| phi[x]).collect();
        if !balanced.contains(&beta) {
            failure = Some(format!("composite of {phi:?} is not balanced"));
            return ControlFlow::Break(());
        }
        if !composed.insert(beta) {
            failure = Some(format!("composition is not injective at {phi:?}"));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    if let Some(msg) = failure {
        return Err(Error::structural(msg));
    }
    if let Some(missing) = balanced.iter().filter(|b| !composed.contains(*b)).min() {
        return Err(Error::structural(format!(
            "balanced map {missing:?} does not factor through the tensor product"
        )));
    }
    Ok(TensorUniversal {
        homs,
        balanced: balanced.len() as u64,
        tensor_size: tp.module.size(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedModule {
    pub localized: LocalizedSemiring,
    /// `ℓ: T → S⁻¹T`
    pub ell: Vec<usize>,
    /// Group completion of `S⁻¹T` acting on itself, over `S⁻¹T`.
    pub scalars_gp: GammaModule,
    /// Unit map `S⁻¹T → (S⁻¹T)^gp`.
    pub scalars_unit: Vec<usize>,
    /// Least pair `(x, y)` of each class of `(S⁻¹T)^gp`.
    pub scalars_reps: Vec<(usize, usize)>,
    pub tensor: TensorProduct,
    /// `S⁻¹M` with its `S⁻¹T`-action.
    pub module: GammaModule,
    /// `m ↦ e ⊗ m`.
    pub unit: Vec<usize>,
    /// The fraction class used as `e`, and whether it acts as an identity.
    pub unit_fraction: (Elem, Elem),
    pub unit_identity_like: bool,
}

/// `S⁻¹M = (S⁻¹T) ⊗ M`, with `S⁻¹T` viewed as a group-completed
/// `T`-module through `ℓ`.
pub fn localize_module(t: &GammaSemiring, sys: &MultiplicativeSystem, m: &GammaModule) -> Result<LocalizedModule> {
    if !m.is_group() {
        return Err(Error::precondition("module is not a group; complete it first"));
    }
    let localized = localize(t, sys)?;
    let ell = canonical_map(t, &localized)?;
    let l = localized.quotient();
    let regular_l = GammaModule::regular(l);
    let completed = group_completion(&regular_l)?;
    let scalars_gp = completed.module;
    let scalars_unit = completed.unit;
    let scalars_reps = completed.representatives;
    let over_t = scalars_gp.restrict(t.size(), &ell)?;
    let tp = tensor(t, &over_t, m)?;

    let (ls, g) = (l.size(), l.gamma_count());
    let size = tp.module.size();
    let add = tp.module.add_table().to_vec();
    let mut action = vec![0; ls * ls * size * g];
    for a in 0..ls {
        for b in 0..ls {
            for gm in 0..g {
                let images: Vec<usize> = (0..over_t.size())
                    .flat_map(|x| (0..m.size()).map(move |y| (x, y)))
                    .map(|(x, y)| tp.pure_tensor(scalars_gp.act(a, b, x, gm), y))
                    .collect();
                let table = tp
                    .group
                    .induced_map(&tp.presentation.relations, &images, size, &add, DEFAULT_ELEMENT_CAP)?
                    .ok_or_else(|| {
                        Error::structural(format!(
                            "localized scalars ({a}, {b}) in mode {} do not act on the tensor product",
                            l.gamma_labels()[gm]
                        ))
                    })?;
                for (x, &v) in table.iter().enumerate() {
                    action[((a * ls + b) * size + x) * g + gm] = v;
                }
            }
        }
    }
    let module = GammaModule::new(ls, g, size, add, action)?;
    let report = check_module_axioms(l, &module)?;
    if let Some(v) = report.verdicts.iter().find(|v| !v.passed) {
        return Err(Error::structural(format!(
            "localized module fails {:?} at {:?}",
            v.clause, v.witness
        )));
    }

    let identity_like = |c: usize| (0..g).any(|gm| (0..ls).all(|x| l.tern(c, c, x, gm) == x));
    let (unit_fraction, unit_identity_like) = sys
        .members()
        .iter()
        .map(|&s| (s, s))
        .find(|&(s, _)| identity_like(localized.class_of(s, s).expect("fraction exists")))
        .map(|f| (f, true))
        .unwrap_or(((sys.members()[0], sys.members()[0]), false));
    let e = scalars_unit[localized.class_of(unit_fraction.0, unit_fraction.1).expect("fraction exists")];
    let unit = (0..m.size()).map(|y| tp.pure_tensor(e, y)).collect();

    Ok(LocalizedModule {
        localized,
        ell,
        scalars_gp,
        scalars_unit,
        scalars_reps,
        tensor: tp,
        module,
        unit,
        unit_fraction,
        unit_identity_like,
    })
}

/// The additive map `P ⊗ Q → P' ⊗ Q'` induced by `f ⊗ g` on generators.
pub fn tensor_map(
    source: &TensorProduct,
    target: &TensorProduct,
    f: &[usize],
    g: &[usize],
) -> Result<Vec<usize>> {
    let right = source.right;
    let images: Vec<usize> = (0..source.pure.len())
        .map(|j| target.pure_tensor(f[j / right], g[j % right]))
        .collect();
    let size = target.module.size();
    source
        .group
        .induced_map(
            &source.presentation.relations,
            &images,
            size,
            target.module.add_table(),
            DEFAULT_ELEMENT_CAP,
        )?
        .ok_or_else(|| Error::structural("tensor of the given maps is not well defined"))
}

/// `id ⊗ φ: S⁻¹M → S⁻¹N` for a Γ-linear `φ: M → N`; both localizations must
/// share the same system.
pub fn localize_morphism(source: &LocalizedModule, target: &LocalizedModule, phi: &[usize]) -> Result<Vec<usize>> {
    if source.scalars_gp != target.scalars_gp {
        return Err(Error::input("localized modules use different scalar systems"));
    }
    let id: Vec<usize> = (0..source.scalars_gp.size()).collect();
    tensor_map(&source.tensor, &target.tensor, &id, phi)
}
