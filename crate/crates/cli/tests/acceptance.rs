//! The ten acceptance criteria, one printed line each.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gamma_core::axioms::{check_axioms, check_axioms_sampled, Axiom, Formula, NaturalFamily};
use gamma_core::completion::{check_completion_initial, group_completion};
use gamma_core::corpus::{cyclic_group, Corpus};
use gamma_core::homological::{
    cone, cone_long_exact, enumerate_chain_maps, heart_check, homology_all, tilde_complex_check, truncation_matches_h0,
    ChainComplex, ChainMap,
};
use gamma_core::localization::{canonical_map, close_multiplicative, is_invertible, localize, MultiplicativeSystem};
use gamma_core::obstruction::{shadow_search, ShadowOptions};
use gamma_core::sheaves::{check_full_faithfulness, global_sections, tilde};
use gamma_core::spectrum::{check_basis_laws, spec};
use gamma_core::tensor::check_tensor_universal;
use gamma_core::GammaSemiring;

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line {
        pass,
        detail: detail.into(),
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every valid standard-family instance with modulus ≤ 8.
fn valid_instances() -> Vec<(usize, Vec<usize>, GammaSemiring)> {
    let mut out = Vec::new();
    for n in 1..=8usize {
        for mask in 1u32..(1 << n) {
            let gammas: Vec<usize> = (0..n).filter(|g| mask >> g & 1 == 1).collect();
            let t = GammaSemiring::standard_family(n, &gammas).expect("family instance");
            out.push((n, gammas, t));
        }
    }
    out
}

fn criterion_1() -> Line {
    let t = GammaSemiring::z6_z4_example();
    let g = t.gamma_index("1").expect("mode 1");
    let v = t.tern(2, 2, 2, g);
    // 2·2·2 + 2·1 = 10 ≡ 4 (mod 6)
    let direct = (2 * 2 * 2 + 2) % 6;
    line(v == 4 && direct == 4, format!("{{2,2,2}}_1 = {v} in the Z6/Z4 fixture"))
}

fn criterion_2() -> Line {
    let t = GammaSemiring::z6_z4_example();
    let report = check_axioms(&t);
    let g1 = t.gamma_index("1").unwrap();
    let absorption = !report.verdict(Axiom::Absorption).passed;
    let symmetry = !report.verdict(Axiom::Symmetry).passed;
    let cited_absorption = t.tern(1, 0, 1, g1) == 1;
    let cited_symmetry = t.tern(1, 1, 2, g1) == 4 && t.tern(2, 1, 1, g1) == 3;
    let reported_reproduce = [Axiom::Absorption, Axiom::Symmetry]
        .iter()
        .all(|&a| report.verdict(a).witness.as_ref().is_some_and(|w| w.reproduces(&t)));

    let family = NaturalFamily::with_mode_window(Formula::PairwisePlusGamma, 5).unwrap();
    let nat = check_axioms_sampled(&family, u64::MAX, 0);
    let nat_absorption = nat.verdict(Axiom::Absorption);
    let nat_assoc = nat.verdict(Axiom::Associativity);
    let nat_reproduce = [nat_absorption, nat_assoc]
        .iter()
        .all(|v| v.witness.as_ref().is_some_and(|w| w.reproduces(&family)));
    // {0,0,0}_1 = 1 ≠ 0; {0,0,{0,0,0}_1}_0 = 0 but {{0,0,0}_0,0,0}_1 = 1
    let nat_direct = family.eval(0, 0, 0, 1) != 0
        && family.eval(0, 0, family.eval(0, 0, 0, 1), 0) != family.eval(family.eval(0, 0, 0, 0), 0, 0, 1);
    let pass = absorption
        && symmetry
        && cited_absorption
        && cited_symmetry
        && reported_reproduce
        && !nat_absorption.passed
        && !nat_assoc.passed
        && nat_reproduce
        && nat_direct;
    line(
        pass,
        format!(
            "Z6/Z4 fails absorption ({}) and symmetry ({}); naturals window [0,5] fails absorption ({}) and associativity ({})",
            !report.verdict(Axiom::Absorption).passed,
            !report.verdict(Axiom::Symmetry).passed,
            !nat_absorption.passed,
            !nat_assoc.passed
        ),
    )
}

fn criterion_3(instances: &[(usize, Vec<usize>, GammaSemiring)]) -> Line {
    let failing: Vec<String> = instances
        .iter()
        .filter(|(_, _, t)| !check_axioms(t).all_pass())
        .map(|(n, g, _)| format!("Z{n} {g:?}"))
        .collect();
    line(
        failing.is_empty(),
        format!("{} standard-family instances checked, {} failing {:?}", instances.len(), failing.len(), failing),
    )
}

fn criterion_4(instances: &[(usize, Vec<usize>, GammaSemiring)]) -> Line {
    let mut bad = Vec::new();
    for (n, g, t) in instances {
        let sp = spec(t).expect("spec");
        let basis = check_basis_laws(t, &sp);
        // independent: D(a) ∩ D(b) = D({a,b,b}_γ), with D(a) the primes missing a
        let d = |a: usize| -> BTreeSet<usize> {
            (0..sp.primes.len()).filter(|&i| !sp.prime_elements(i).contains(&a)).collect()
        };
        let mut ok = basis.passed() && d(0).is_empty();
        for a in 0..t.size() {
            for b in 0..t.size() {
                for gm in 0..t.gamma_count() {
                    let lhs: BTreeSet<usize> = d(a).intersection(&d(b)).copied().collect();
                    ok &= lhs == d(t.tern(a, b, b, gm));
                }
            }
        }
        if !ok {
            bad.push(format!("Z{n} {g:?}"));
        }
    }
    line(bad.is_empty(), format!("{} instances, violations in {:?}", instances.len(), bad))
}

/// Brute-force localization oracle for `Z_5` with `{a,b,c}_γ = abcγ`: the
/// raw cubic relation, its equivalence closure, and the smallest
/// equivalence compatible with the ternary products and same-denominator
/// sums, computed by relabelling until stable.
struct Oracle {
    raw_classes: usize,
    congruence_classes: usize,
}

fn localization_oracle(gammas: &[usize]) -> Oracle {
    let n = 5;
    let s: Vec<usize> = (1..5).collect();
    let tern = |a: usize, b: usize, c: usize, g: usize| a * b * c * g % n;
    let fr: Vec<(usize, usize)> = (0..n).flat_map(|a| s.iter().map(move |&d| (a, d))).collect();
    let idx = |a: usize, d: usize| a * 4 + (d - 1);
    let k = fr.len();
    let mut rel = vec![vec![false; k]; k];
    for (p, &(a, sa)) in fr.iter().enumerate() {
        for (q, &(b, sb)) in fr.iter().enumerate() {
            rel[p][q] = s.iter().any(|&u| {
                gammas.iter().any(|&ga| {
                    gammas.iter().any(|&de| {
                        gammas
                            .iter()
                            .any(|&et| tern(u, a, tern(sb, sb, sb, ga), de) == tern(u, b, tern(sa, sa, sa, et), de))
                    })
                })
            });
        }
    }
    // transitive closure
    let mut eq = rel.clone();
    for m in 0..k {
        for p in 0..k {
            if eq[p][m] {
                for q in 0..k {
                    if eq[m][q] {
                        eq[p][q] = true;
                    }
                }
            }
        }
    }
    let mut label: Vec<usize> = (0..k).map(|p| (0..k).find(|&q| eq[p][q]).unwrap()).collect();
    let raw_classes = label.iter().collect::<BTreeSet<_>>().len();
    let merge = |label: &mut Vec<usize>, x: usize, y: usize| -> bool {
        let (lx, ly) = (label[x], label[y]);
        if lx == ly {
            return false;
        }
        let (keep, drop) = (lx.min(ly), lx.max(ly));
        for l in label.iter_mut() {
            if *l == drop {
                *l = keep;
            }
        }
        true
    };
    loop {
        let mut changed = false;
        for p in 0..k {
            for q in 0..k {
                if label[p] != label[q] {
                    continue;
                }
                let ((a, sa), (b, sb)) = (fr[p], fr[q]);
                for &(c, sc) in &fr {
                    for &(e, se) in &fr {
                        for &g in gammas {
                            let x = idx(tern(a, c, e, g), tern(sa, sc, se, g));
                            let y = idx(tern(b, c, e, g), tern(sb, sc, se, g));
                            changed |= merge(&mut label, x, y);
                            let x = idx(tern(c, a, e, g), tern(sc, sa, se, g));
                            let y = idx(tern(c, b, e, g), tern(sc, sb, se, g));
                            changed |= merge(&mut label, x, y);
                            let x = idx(tern(c, e, a, g), tern(sc, se, sa, g));
                            let y = idx(tern(c, e, b, g), tern(sc, se, sb, g));
                            changed |= merge(&mut label, x, y);
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
    Oracle {
        raw_classes,
        congruence_classes: label.iter().collect::<BTreeSet<_>>().len(),
    }
}

/// Criterion 5 has two halves; the second is unattainable (see README).
fn criterion_5() -> (Line, bool, bool) {
    let t1 = GammaSemiring::standard_family(5, &[1]).unwrap();
    let sys1 = close_multiplicative(&t1, &[1, 2, 3, 4]).unwrap();
    let l1 = localize(&t1, &sys1).unwrap();
    let ell = canonical_map(&t1, &l1).unwrap();
    let injective = ell.iter().collect::<BTreeSet<_>>().len() == ell.len();
    let invertible = sys1.members().iter().all(|&s| is_invertible(l1.quotient(), ell[s]).is_some());
    let o1 = localization_oracle(&[1]);
    let first = l1.class_count() == 5 && injective && invertible && o1.congruence_classes == 5;

    let t2 = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
    let sys2 = close_multiplicative(&t2, &[1, 2, 3, 4]).unwrap();
    let l2 = localize(&t2, &sys2).unwrap();
    let o2 = localization_oracle(&[1, 2]);
    let second = l2.class_count() == 2 && !l2.raw_equals_closure() && o2.congruence_classes == 2;
    let oracle_agrees = l2.class_count() == o2.congruence_classes && l2.raw_class_count() == o2.raw_classes;
    let detail = format!(
        "Γ={{1}}: {} classes (oracle {}), ℓ injective {injective}, S invertible {invertible}; \
         Γ={{1,2}}: {} congruence classes (oracle {}), raw closure {} classes (oracle {}), raw_equals_closure {}; \
         expected 2 congruence classes",
        l1.class_count(),
        o1.congruence_classes,
        l2.class_count(),
        o2.congruence_classes,
        l2.raw_class_count(),
        o2.raw_classes,
        l2.raw_equals_closure()
    );
    (line(first && second, detail), first, oracle_agrees && !l2.raw_equals_closure())
}

fn criterion_6(corpus: &Corpus) -> Line {
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in &corpus.structures {
        // tensor products are formed over groups; monoids are completed first
        let ms: Vec<_> = corpus.modules_over(&s.name).filter(|m| m.module.size() <= 4).collect();
        for m in &ms {
            for n in &ms {
                for p in &ms {
                    let u = check_tensor_universal(&s.structure, &m.module, &n.module, &p.module).expect("tensor");
                    checked += 1;
                    if u.homs != u.balanced {
                        bad.push(format!("{}⊗{}→{}", m.name, n.name, p.name));
                    }
                }
            }
        }
    }
    let klein: Vec<usize> = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
    let mut targets: Vec<(usize, Vec<usize>)> = (1..=4).map(|n| (n, cyclic_group(n))).collect();
    targets.push((4, klein));
    let mut initial = 0;
    for m in corpus.modules.iter().chain(&corpus.monoids).filter(|m| m.module.size() <= 8) {
        let c = group_completion(&m.module).expect("completion");
        for (size, add) in &targets {
            let r = check_completion_initial(&m.module, &c, *size, add).expect("initiality");
            initial += 1;
            if !r.all_unique {
                bad.push(format!("{} into group of order {size}", m.name));
            }
        }
    }
    line(
        bad.is_empty(),
        format!("{checked} tensor triples, {initial} initiality checks, failures {bad:?}"),
    )
}

/// `|H_n|` by counting kernel and image elements directly.
fn homology_sizes(k: &ChainComplex) -> BTreeMap<i64, usize> {
    k.degrees()
        .map(|n| {
            let cycles = (0..k.module(n).size()).filter(|&x| k.d(n, x) == 0).count();
            let above = k.module(n + 1);
            let image: BTreeSet<usize> = (0..above.size()).map(|x| k.d(n + 1, x)).collect();
            (n, cycles / image.len())
        })
        .collect()
}

fn chain_maps(corpus: &Corpus, max_module: usize) -> Vec<(String, ChainMap)> {
    let mut out: Vec<(String, ChainMap)> = corpus
        .maps
        .iter()
        .map(|m| (m.name.clone(), corpus.chain_map(m).unwrap()))
        .collect();
    let small: Vec<_> = corpus
        .complexes
        .iter()
        .filter(|c| c.complex.degrees().all(|n| c.complex.module(n).size() <= max_module))
        .collect();
    for a in &small {
        for b in small.iter().filter(|b| b.over == a.over) {
            for (i, f) in enumerate_chain_maps(&a.complex, &b.complex, 4096).unwrap().into_iter().enumerate() {
                out.push((format!("{}→{}#{i}", a.name, b.name), f));
            }
        }
    }
    out
}

fn criterion_7(corpus: &Corpus) -> Line {
    let mut bad = Vec::new();
    for c in &corpus.complexes {
        let id = ChainMap::identity(&c.complex);
        let cid = cone(&id).unwrap();
        if homology_sizes(&cid).values().any(|&s| s != 1) || homology_all(&cid).unwrap().iter().any(|h| !h.is_zero()) {
            bad.push(format!("cone(id) of {} not acyclic", c.name));
        }
        if !truncation_matches_h0(&c.complex).unwrap() {
            bad.push(format!("truncation of {}", c.name));
        }
        let sizes = homology_sizes(&c.complex);
        let concentrated = sizes.iter().all(|(&n, &s)| n == 0 || s == 1);
        if heart_check(&c.complex).unwrap().in_heart != concentrated {
            bad.push(format!("heart verdict of {}", c.name));
        }
    }
    let maps = chain_maps(corpus, 8);
    let mut joints = 0;
    for (name, f) in &maps {
        let les = cone_long_exact(f).unwrap();
        joints += les.joints.len();
        if !les.exact {
            bad.push(format!("long exact sequence of {name}"));
        }
    }
    line(
        bad.is_empty(),
        format!(
            "{} complexes, {} maps, {joints} joints, failures {bad:?}",
            corpus.complexes.len(),
            maps.len()
        ),
    )
}

fn criterion_8(corpus: &Corpus) -> Line {
    let mut bad = Vec::new();
    let z5 = corpus.structure("z5_standard");
    let gs = global_sections(z5, &tilde(z5, &corpus.module("z5_regular").module).unwrap()).unwrap();
    if !gs.isomorphic {
        bad.push("global sections on z5_regular".to_string());
    }
    let mut pairs = 0;
    for s in &corpus.structures {
        let ms: Vec<_> = corpus.modules_over(&s.name).filter(|m| m.regular_type).collect();
        for m in &ms {
            for n in &ms {
                pairs += 1;
                if !check_full_faithfulness(&s.structure, &m.module, &n.module).unwrap().bijective {
                    bad.push(format!("full faithfulness {}→{}", m.name, n.name));
                }
            }
        }
    }
    let regular: BTreeSet<&str> = corpus
        .complexes
        .iter()
        .filter(|c| c.regular_type(corpus))
        .map(|c| c.name.as_str())
        .collect();
    let mut tilde_maps = 0;
    for (name, f) in chain_maps(corpus, 8) {
        let source = corpus.complexes.iter().find(|c| c.complex == *f.source()).unwrap();
        let target = corpus.complexes.iter().find(|c| c.complex == *f.target()).unwrap();
        if !regular.contains(source.name.as_str()) || !regular.contains(target.name.as_str()) {
            continue;
        }
        tilde_maps += 1;
        if !tilde_complex_check(corpus.structure(&source.over), &f).unwrap().passed() {
            bad.push(format!("tilde check {name}"));
        }
    }
    line(
        bad.is_empty(),
        format!("Γ(X,M~) ≅ M^gp {}, {pairs} module pairs, {tilde_maps} chain maps, failures {bad:?}", gs.isomorphic),
    )
}

fn criterion_9() -> Line {
    let z6 = GammaSemiring::standard_family(6, &[1]).unwrap();
    let s6 = close_multiplicative(&z6, &[1]).unwrap();
    let r6 = shadow_search(&z6, &s6, &ShadowOptions::default()).unwrap();
    let identity = r6
        .satisfying
        .iter()
        .any(|c| c.ring.name == "Z6" && c.iota == (0..6).collect::<Vec<_>>());

    let z5 = GammaSemiring::standard_family(5, &[1, 2]).unwrap();
    let s5: MultiplicativeSystem = close_multiplicative(&z5, &[1, 2, 3, 4]).unwrap();
    let r5 = shadow_search(&z5, &s5, &ShadowOptions::default()).unwrap();
    let mut expected: BTreeSet<String> = (2..=12).map(|n| format!("Z{n}")).collect();
    for n in 2..=12 {
        for m in n..=12 {
            if n * m <= 12 {
                expected.insert(format!("Z{n}xZ{m}"));
            }
        }
    }
    let covered: BTreeSet<String> = r5.rings.iter().map(|r| r.ring.clone()).collect();
    let pass = identity && r5.is_exhaustion_certificate() && r5.rings.iter().all(|r| r.complete) && covered == expected;
    line(
        pass,
        format!(
            "Z6 identity satisfies {identity}; Z5 Γ={{1,2}}: {} rings, {} candidates, {} satisfying, complete {}",
            r5.rings.len(),
            r5.candidates,
            r5.satisfying.len(),
            r5.complete
        ),
    )
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn fixture_commands(corpus: &Corpus) -> Vec<Vec<String>> {
    let f = |name: &str| fixtures().join(name).display().to_string();
    let mut cmds: Vec<Vec<String>> = Vec::new();
    let mut push = |v: Vec<String>| cmds.push(v);
    for s in &corpus.structures {
        let st = f(&format!("{}.json", s.name));
        push(vec!["check-axioms".into(), st.clone()]);
        push(vec!["spec".into(), st.clone()]);
        let units: Vec<String> = (1..s.structure.size())
            .filter(|x| gcd(*x, s.structure.size()) == 1)
            .map(|x| x.to_string())
            .collect();
        // every system of the invalid Z6/Z4 fixture reaches 0
        if s.name != "z6z4_example" {
            push(vec!["localize".into(), st.clone(), "--seed".into(), units.join(",")]);
        }
    }
    let z3 = f("z3_standard.json");
    let m = |n: &str| f(&format!("{n}.module.json"));
    push(vec!["localize-module".into(), z3.clone(), m("z3_regular"), "--seed".into(), "2".into()]);
    push(vec![
        "tensor".into(),
        z3.clone(),
        m("z3_regular"),
        m("z3_trivial_z2"),
        "--universal".into(),
        m("z3_trivial_z4"),
    ]);
    push(vec![
        "complete".into(),
        z3.clone(),
        m("z3_max_monoid"),
        "--target-cyclic".into(),
        "2".into(),
    ]);
    push(vec!["sheaf-check".into(), f("z5_standard.json"), m("z5_regular")]);
    push(vec!["sheaf-check".into(), z3.clone(), m("z3_boolean_monoid")]);
    for c in &corpus.complexes {
        let st = f(&format!("{}.json", c.over));
        let cx = f(&format!("{}.complex.json", c.name));
        push(vec!["homology".into(), st.clone(), cx.clone()]);
        push(vec!["homology".into(), st.clone(), cx.clone(), "--truncate".into(), "le0".into()]);
        push(vec!["homology".into(), st, cx, "--truncate".into(), "ge0".into()]);
    }
    for mp in &corpus.maps {
        let c = corpus.complex(&mp.source);
        push(vec![
            "homology".into(),
            f(&format!("{}.json", c.over)),
            f(&format!("{}.complex.json", c.name)),
            "--cone".into(),
            f(&format!("{}.map.json", mp.name)),
        ]);
    }
    push(vec!["shadow-search".into(), f("z6_sharpness.json"), "--seed".into(), "1".into()]);
    push(vec!["shadow-search".into(), f("z5_two_modes.json"), "--seed".into(), "1,2,3,4".into()]);
    push(vec![
        "generate".into(),
        "family".into(),
        "--modulus".into(),
        "6".into(),
        "--gammas".into(),
        "1,5".into(),
    ]);
    cmds
}

fn criterion_10(corpus: &Corpus) -> Line {
    let cmds = fixture_commands(corpus);
    let mut bad = Vec::new();
    for cmd in &cmds {
        for format in ["json", "text"] {
            let argv: Vec<String> = ["--no-timing", "--format", format].iter().map(|s| s.to_string()).chain(cmd.clone()).collect();
            let (c1, o1) = gamma_cli::run(argv.clone());
            let (c2, o2) = gamma_cli::run(argv);
            if c1 != c2 || o1 != o2 || c1 == gamma_cli::EXIT_INPUT {
                bad.push(cmd.join(" "));
            }
        }
    }
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let outs: Vec<(i32, String)> = dirs
        .iter()
        .map(|d| {
            gamma_cli::run([
                "--no-timing".to_string(),
                "generate".into(),
                "corpus".into(),
                "--out".into(),
                d.path().display().to_string(),
            ])
        })
        .collect();
    let strip = |s: &str, d: &Path| s.replace(&d.display().to_string(), "<dir>");
    if strip(&outs[0].1, dirs[0].path()) != strip(&outs[1].1, dirs[1].path()) {
        bad.push("generate corpus".into());
    }
    line(bad.is_empty(), format!("{} commands run twice in two formats, differing {bad:?}", cmds.len() + 1))
}

/// Criteria whose full statement cannot hold; they print FAIL and the test
/// instead pins the documented behaviour.
const UNATTAINABLE: [usize; 1] = [5];

#[test]
fn acceptance_criteria() {
    let corpus = Corpus::standard().unwrap();
    let mut results: Vec<(usize, Line, Duration, Duration)> = Vec::new();
    let mut timed = |id: usize, limit: Duration, f: &mut dyn FnMut() -> Line| {
        let start = Instant::now();
        let l = f();
        results.push((id, l, start.elapsed(), limit));
    };
    timed(1, Duration::from_millis(1), &mut criterion_1);
    timed(2, Duration::from_secs(1), &mut criterion_2);
    let instances = valid_instances();
    timed(3, Duration::from_secs(30), &mut || criterion_3(&instances));
    timed(4, Duration::from_secs(30), &mut || criterion_4(&instances));
    let mut halves = (false, false);
    timed(5, Duration::from_secs(5), &mut || {
        let (l, first, documented) = criterion_5();
        halves = (first, documented);
        l
    });
    timed(6, Duration::from_secs(60), &mut || criterion_6(&corpus));
    timed(7, Duration::from_secs(60), &mut || criterion_7(&corpus));
    timed(8, Duration::from_secs(60), &mut || criterion_8(&corpus));
    timed(9, Duration::from_secs(300), &mut criterion_9);
    timed(10, Duration::from_secs(300), &mut || criterion_10(&corpus));

    let mut unexpected = Vec::new();
    for (id, l, elapsed, limit) in &results {
        let within = elapsed <= limit;
        let pass = l.pass && within;
        // written past the test harness capture so plain `cargo test` shows it
        let _ = writeln!(
            std::io::stderr(),
            "criterion {id:>2}: {} ({} ms, limit {} ms) {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_millis(),
            limit.as_millis(),
            l.detail
        );
        if !pass && !UNATTAINABLE.contains(id) {
            unexpected.push(*id);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
    // the attainable half of criterion 5 holds and the other half fails
    // exactly as documented: one congruence class, confirmed by the oracle
    assert!(halves.0, "criterion 5 first half");
    assert!(halves.1, "criterion 5 documented outcome");
}
