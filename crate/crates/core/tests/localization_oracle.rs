//! Localization counts against a brute-force closure computed directly from
//! the formula `{a,b,c}_γ = abcγ mod n`.

use std::collections::BTreeSet;

use gamma_core::localization::{close_multiplicative, localize};
use gamma_core::GammaSemiring;

struct Counts {
    raw: usize,
    congruence: usize,
}

fn oracle(n: usize, gammas: &[usize], system: &[usize]) -> Counts {
    let tern = |a: usize, b: usize, c: usize, g: usize| a * b * c * g % n;
    let fr: Vec<(usize, usize)> = (0..n).flat_map(|a| system.iter().map(move |&d| (a, d))).collect();
    let k = fr.len();
    let idx = |a: usize, d: usize| fr.iter().position(|&p| p == (a, d)).expect("closed system");
    let related = |(a, s): (usize, usize), (b, t): (usize, usize)| {
        system.iter().any(|&u| {
            gammas.iter().any(|&g| {
                gammas.iter().any(|&d| gammas.iter().any(|&e| tern(u, a, tern(t, t, t, g), d) == tern(u, b, tern(s, s, s, e), d)))
            })
        })
    };
    // classes as explicit sets, merged until stable
    let mut label: Vec<usize> = (0..k).collect();
    fn merge(label: &mut [usize], x: usize, y: usize) -> bool {
        let (a, b) = (label[x].min(label[y]), label[x].max(label[y]));
        if a == b {
            return false;
        }
        label.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);
        true
    }
    for p in 0..k {
        for q in 0..k {
            if related(fr[p], fr[q]) {
                merge(&mut label, p, q);
            }
        }
    }
    let raw = label.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut changed = false;
        for p in 0..k {
            for q in 0..k {
                if p == q || label[p] != label[q] {
                    continue;
                }
                let ((a, sa), (b, sb)) = (fr[p], fr[q]);
                for &(c, sc) in &fr {
                    for &(e, se) in &fr {
                        for &g in gammas {
                            for (x, y) in [
                                (idx(tern(a, c, e, g), tern(sa, sc, se, g)), idx(tern(b, c, e, g), tern(sb, sc, se, g))),
                                (idx(tern(c, a, e, g), tern(sc, sa, se, g)), idx(tern(c, b, e, g), tern(sc, sb, se, g))),
                                (idx(tern(c, e, a, g), tern(sc, se, sa, g)), idx(tern(c, e, b, g), tern(sc, se, sb, g))),
                            ] {
                                changed |= merge(&mut label, x, y);
                            }
                        }
                    }
                }
                if sa == sb {
                    for c in 0..n {
                        changed |= merge(&mut label, idx((a + c) % n, sa), idx((b + c) % n, sa));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Counts {
        raw,
        congruence: label.iter().collect::<BTreeSet<_>>().len(),
    }
}

#[test]
fn small_family_instances_match_oracle() {
    let mut compared = 0;
    for n in 2..=6usize {
        for gammas in [vec![1], vec![1, 2], vec![1, n - 1]] {
            let gammas: Vec<usize> = gammas.into_iter().collect::<BTreeSet<_>>().into_iter().filter(|&g| g < n).collect();
            let t = GammaSemiring::standard_family(n, &gammas).unwrap();
            for seed in 1..n {
                let Ok(sys) = close_multiplicative(&t, &[seed]) else { continue };
                let l = localize(&t, &sys).unwrap();
                let o = oracle(n, &gammas, sys.members());
                assert_eq!(l.class_count(), o.congruence, "Z{n} Γ={gammas:?} seed {seed}");
                assert_eq!(l.raw_class_count(), o.raw, "Z{n} Γ={gammas:?} seed {seed}");
                compared += 1;
            }
        }
    }
    assert!(compared > 20);
}

#[test]
fn two_mode_z5_collapses() {
    let t = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
    let sys = close_multiplicative(&t, &[1, 2, 3, 4]).unwrap();
    let l = localize(&t, &sys).unwrap();
    let o = oracle(5, &[1, 2], sys.members());
    assert_eq!((l.class_count(), o.congruence), (1, 1));
    assert_eq!((l.raw_class_count(), o.raw), (2, 2));
    assert!(!l.raw_equals_closure());
}
