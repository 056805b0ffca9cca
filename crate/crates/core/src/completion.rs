//! Grothendieck group completion of a finite Γ-module.
//!
//! `M^gp` is the set of pairs `(m, n)` modulo `(m,n) ∼ (p,q)` iff
//! `m + q + k = p + n + k` for some `k`. Over a finite monoid this reduces to
//! comparing `m + q` and `p + n` in the cancellative quotient of `M`.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{additive_maps, MapSearch, DEFAULT_NODE_BUDGET};
use crate::module::GammaModule;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCompletion {
    pub module: GammaModule,
    /// `m ↦ [(m, 0)]`
    pub unit: Vec<usize>,
    /// Least pair `(m, n)` in each class.
    pub representatives: Vec<(usize, usize)>,
    /// Number of pairs in each class.
    pub class_sizes: Vec<usize>,
    pub certificate: ExtensionCertificate,
}

/// Evidence that the extended action is well defined and the only one
/// compatible with the unit map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCertificate {
    /// Pairs `(a, b, γ)` checked.
    pub operators: usize,
    /// Additive endomorphisms agreeing with the action on the unit image,
    /// maximum over all operators (1 means unique).
    pub max_compatible: u64,
    pub restriction_agrees: bool,
}

/// `a ≡ b` iff `a + k = b + k` for some `k`; returns class labels.
fn cancellative_labels(m: &GammaModule) -> Vec<usize> {
    let n = m.size();
    let mut uf = UnionFind::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if (0..n).any(|k| m.add(a, k) == m.add(b, k)) {
                uf.union(a, b);
            }
        }
    }
    uf.labels().0
}

pub fn group_completion(m: &GammaModule) -> Result<GroupCompletion> {
    let n = m.size();
    let canc = cancellative_labels(m);
    let mut uf = UnionFind::new(n * n);
    for x in 0..n {
        for y in 0..n {
            for p in 0..n {
                for q in 0..n {
                    if (p, q) > (x, y) && canc[m.add(x, q)] == canc[m.add(p, y)] {
                        uf.union(x * n + y, p * n + q);
                    }
                }
            }
        }
    }
    let (label, count) = uf.labels();
    let mut representatives = vec![(usize::MAX, usize::MAX); count];
    let mut class_sizes = vec![0; count];
    for x in 0..n {
        for y in 0..n {
            let c = label[x * n + y];
            if representatives[c].0 == usize::MAX {
                representatives[c] = (x, y);
            }
            class_sizes[c] += 1;
        }
    }
    let class = |x: usize, y: usize| label[x * n + y];

    let mut add = vec![0; count * count];
    for (i, &(x, y)) in representatives.iter().enumerate() {
        for (j, &(p, q)) in representatives.iter().enumerate() {
            add[i * count + j] = class(m.add(x, p), m.add(y, q));
        }
    }
    let (s, g) = (m.scalar_count(), m.gamma_count());
    let mut action = Vec::with_capacity(s * s * count * g);
    for a in 0..s {
        for b in 0..s {
            for &(x, y) in &representatives {
                for gm in 0..g {
                    action.push(class(m.act(a, b, x, gm), m.act(a, b, y, gm)));
                }
            }
        }
    }
    // representative independence
    for x in 0..n {
        for y in 0..n {
            let c = class(x, y);
            for p in 0..n {
                for q in 0..n {
                    if add[c * count + class(p, q)] != class(m.add(x, p), m.add(y, q)) {
                        return Err(Error::structural("completion addition depends on representatives"));
                    }
                }
            }
            for a in 0..s {
                for b in 0..s {
                    for gm in 0..g {
                        let expected = action[((a * s + b) * count + c) * g + gm];
                        if class(m.act(a, b, x, gm), m.act(a, b, y, gm)) != expected {
                            return Err(Error::structural(format!(
                                "extended action depends on representatives at ({a}, {b}, mode {gm})"
                            )));
                        }
                    }
                }
            }
        }
    }
    let module = GammaModule::new(s, g, count, add, action)?;
    if !module.is_group() {
        return Err(Error::structural("completion is not a group"));
    }
    let unit: Vec<usize> = (0..n).map(|x| class(x, 0)).collect();
    for x in 0..n {
        for y in 0..n {
            if unit[m.add(x, y)] != module.add(unit[x], unit[y]) {
                return Err(Error::structural("unit map is not additive"));
            }
        }
    }
    let restriction_agrees = (0..s).all(|a| {
        (0..s).all(|b| {
            (0..g).all(|gm| (0..n).all(|x| unit[m.act(a, b, x, gm)] == module.act(a, b, unit[x], gm)))
        })
    });

    // every additive endomorphism of M^gp that extends {a,b,·}_γ along the
    // unit must coincide with the constructed one
    let mut max_compatible = 0;
    for a in 0..s {
        for b in 0..s {
            for gm in 0..g {
                let mut search = endomorphisms(&module);
                for x in 0..n {
                    search.fix(unit[x], unit[m.act(a, b, x, gm)]);
                }
                let mut found = 0u64;
                let mut mismatch = false;
                search.run(DEFAULT_NODE_BUDGET, |f| {
                    found += 1;
                    if (0..count).any(|c| f[c] != module.act(a, b, c, gm)) {
                        mismatch = true;
                    }
                    ControlFlow::Continue(())
                })?;
                if mismatch || found != 1 {
                    return Err(Error::structural(format!(
                        "action extension not unique at ({a}, {b}, mode {gm}): {found} candidates"
                    )));
                }
                max_compatible = max_compatible.max(found);
            }
        }
    }

    Ok(GroupCompletion {
        module,
        unit,
        representatives,
        class_sizes,
        certificate: ExtensionCertificate {
            operators: s * s * g,
            max_compatible,
            restriction_agrees,
        },
    })
}

fn endomorphisms(m: &GammaModule) -> MapSearch {
    additive_maps(m.size(), m.add_table(), m.size(), m.add_table())
}

/// Result of testing initiality of the unit against one target group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialityReport {
    /// Additive maps `M → G` examined.
    pub maps: u64,
    /// Every one of them factors through the unit exactly once.
    pub all_unique: bool,
    /// A map with zero or several factorizations, if any.
    pub witness: Option<Vec<usize>>,
}

/// Checks that every additive `f: M → G` factors uniquely as `g ∘ unit`.
pub fn check_completion_initial(
    m: &GammaModule,
    completion: &GroupCompletion,
    target_size: usize,
    target_add: &[usize],
) -> Result<InitialityReport> {
    let maps = additive_maps(m.size(), m.add_table(), target_size, target_add).collect(DEFAULT_NODE_BUDGET)?;
    let gp = &completion.module;
    let mut witness = None;
    for f in &maps {
        let mut search = additive_maps(gp.size(), gp.add_table(), target_size, target_add);
        for x in 0..m.size() {
            search.fix(completion.unit[x], f[x]);
        }
        if search.count(DEFAULT_NODE_BUDGET)? != 1 {
            witness = Some(f.clone());
            break;
        }
    }
    Ok(InitialityReport {
        maps: maps.len() as u64,
        all_unique: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::GammaSemiring;

    fn t() -> GammaSemiring {
        GammaSemiring::standard_family(3, &[1]).unwrap()
    }

    #[test]
    fn boolean_monoid_completes_to_trivial_group() {
        let m = GammaModule::zero_action(&t(), 2, vec![0, 1, 1, 1]).unwrap();
        let c = group_completion(&m).unwrap();
        assert_eq!(c.module.size(), 1);
        assert_eq!(c.unit, vec![0, 0]);
    }

    #[test]
    fn groups_are_fixed() {
        let m = GammaModule::cyclic_zero_action(&t(), 3).unwrap();
        let c = group_completion(&m).unwrap();
        assert_eq!(c.module.size(), 3);
        let mut u = c.unit.clone();
        u.sort_unstable();
        assert_eq!(u, vec![0, 1, 2]);

        let r = GammaModule::regular(&t());
        let c = group_completion(&r).unwrap();
        assert_eq!(c.module.size(), 3);
        assert!(c.certificate.restriction_agrees);
        assert_eq!(c.certificate.max_compatible, 1);
    }

    #[test]
    fn truncated_monoid_completion_is_initial() {
        // {0,1,2} with x + y = min(x + y, 2): completes to the trivial group
        let add: Vec<usize> = (0..9).map(|i| (i / 3 + i % 3).min(2)).collect();
        let m = GammaModule::zero_action(&t(), 3, add).unwrap();
        let c = group_completion(&m).unwrap();
        assert_eq!(c.module.size(), 1);
        let z2: Vec<usize> = vec![0, 1, 1, 0];
        let report = check_completion_initial(&m, &c, 2, &z2).unwrap();
        assert!(report.all_unique);
        assert_eq!(report.maps, 1);
    }
}
