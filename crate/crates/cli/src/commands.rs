use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use gamma_core::axioms::check_axioms;
use gamma_core::completion::{check_completion_initial, group_completion};
use gamma_core::corpus::{cyclic_group, Corpus};
use gamma_core::homological::{
    cone, cone_long_exact, heart_check, homology_all, truncate, truncation_matches_h0, ChainComplex,
    ChainMapDocument, ComplexDocument, ComponentDocument, DegreeDocument,
};
use gamma_core::localization::{canonical_map, close_multiplicative, is_invertible, localize};
use gamma_core::obstruction::{shadow_search, ShadowOptions};
use gamma_core::presentation::{group_invariants, DEFAULT_ELEMENT_CAP};
use gamma_core::sheaves::{check_gluing, global_sections, minimal_cover, tilde};
use gamma_core::spectrum::{check_basis_laws, spec_with_bound};
use gamma_core::tensor::{check_tensor_universal, localize_module, tensor_with_cap};
use gamma_core::GammaSemiring;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::load::{InputDigest, Loader};
use crate::{CliError, Command, Generate, Outcome, EXIT_RESOURCE};

type Out = Result<Outcome, CliError>;

pub(crate) fn dispatch(command: &Command, loader: &mut Loader, budget: Option<u64>) -> Out {
    match command {
        Command::CheckAxioms { structure } => check_axioms_cmd(loader, structure),
        Command::Spec { structure, bound } => spec_cmd(loader, structure, *bound),
        Command::Localize { structure, seed } => localize_cmd(loader, structure, &seed.seed),
        Command::LocalizeModule { structure, module, seed } => localize_module_cmd(loader, structure, module, &seed.seed),
        Command::Tensor {
            structure,
            left,
            right,
            universal,
        } => tensor_cmd(loader, structure, left, right, universal.as_deref(), budget),
        Command::Complete {
            structure,
            module,
            target_cyclic,
        } => complete_cmd(loader, structure, module, target_cyclic),
        Command::SheafCheck { structure, module } => sheaf_cmd(loader, structure, module),
        Command::Homology {
            structure,
            complex,
            truncate,
            cone,
        } => homology_cmd(loader, structure, complex, truncate.map(Into::into), cone.as_deref()),
        Command::ShadowSearch {
            structure,
            seed,
            max_ring,
            semiring,
            include_zero_ring,
        } => {
            let mut opts = ShadowOptions {
                max_ring: *max_ring,
                semiring: *semiring,
                include_zero_ring: *include_zero_ring,
                ..ShadowOptions::default()
            };
            if let Some(b) = budget {
                opts.max_maps_per_ring = b;
            }
            shadow_cmd(loader, structure, &seed.seed, &opts)
        }
        Command::Generate(Generate::Family { modulus, gammas, out }) => family_cmd(*modulus, gammas, out.as_deref()),
        Command::Generate(Generate::Corpus { out }) => corpus_cmd(out),
    }
}

fn check_axioms_cmd(loader: &mut Loader, path: &Path) -> Out {
    let t = loader.structure(path)?;
    let report = check_axioms(&t);
    let mut out = Outcome::new(&report);
    for v in report.failures() {
        let w = match &v.witness {
            Some(w) => format!(
                "{} at elements {:?} modes {:?}: {} vs {}",
                w.clause, w.elements, w.modes, w.lhs, w.rhs
            ),
            None => "no witness".into(),
        };
        out.finding(true, format!("{:?} fails: {w}", v.axiom));
    }
    Ok(out)
}

fn spec_cmd(loader: &mut Loader, path: &Path, bound: usize) -> Out {
    let t = loader.structure(path)?;
    let sp = spec_with_bound(&t, bound)?;
    let basis = check_basis_laws(&t, &sp);
    let primes: Vec<Vec<usize>> = (0..sp.primes.len()).map(|i| sp.prime_elements(i)).collect();
    let mut out = Outcome::new(json!({
        "primes": primes,
        "basic_opens": sp.basic_opens,
        "zero_convention": sp.zero_convention,
        "basis": basis,
    }));
    out.finding(!basis.passed(), "basic opens violate the basis laws");
    Ok(out)
}

fn localize_cmd(loader: &mut Loader, path: &Path, seed: &[usize]) -> Out {
    let t = loader.structure(path)?;
    let sys = close_multiplicative(&t, seed)?;
    let l = localize(&t, &sys)?;
    let ell = canonical_map(&t, &l)?;
    let q = l.quotient();
    let invertible = sys.members().iter().all(|&s| is_invertible(q, ell[s]).is_some());
    let mut distinct = ell.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut out = Outcome::new(json!({
        "system": sys.members(),
        "class_count": l.class_count(),
        "raw_class_count": l.raw_class_count(),
        "raw_equals_closure": l.raw_equals_closure(),
        "representatives": l.representatives(),
        "canonical_map": ell,
        "canonical_map_injective": distinct.len() == ell.len(),
        "images_of_system_invertible": invertible,
        "merge_steps": l.steps().len(),
        "quotient": q.to_document(),
    }));
    out.finding(!invertible, "some element of S is not invertible in the localization");
    Ok(out)
}

fn localize_module_cmd(loader: &mut Loader, sp: &Path, mp: &Path, seed: &[usize]) -> Out {
    let t = loader.structure(sp)?;
    let m = loader.module(mp, &t, sp)?;
    let sys = close_multiplicative(&t, seed)?;
    let lm = localize_module(&t, &sys, &m)?;
    Ok(Outcome::new(json!({
        "system": sys.members(),
        "size": lm.module.size(),
        "invariants": group_invariants(lm.module.size(), lm.module.add_table())?,
        "unit": lm.unit,
        "unit_fraction": lm.unit_fraction,
        "unit_identity_like": lm.unit_identity_like,
        "module": lm.module.to_document("localization"),
    })))
}

fn tensor_cmd(loader: &mut Loader, sp: &Path, lp: &Path, rp: &Path, universal: Option<&Path>, budget: Option<u64>) -> Out {
    let t = loader.structure(sp)?;
    let m = loader.module(lp, &t, sp)?;
    let n = loader.module(rp, &t, sp)?;
    let tp = tensor_with_cap(&t, &m, &n, budget.unwrap_or(DEFAULT_ELEMENT_CAP))?;
    let mut result = json!({
        "size": tp.module.size(),
        "invariants": group_invariants(tp.module.size(), tp.module.add_table())?,
        "pure_tensors": tp.pure,
        "module": tp.module.to_document(&sp.display().to_string()),
    });
    if let Some(pp) = universal {
        let p = loader.module(pp, &t, sp)?;
        let u = check_tensor_universal(&t, &m, &n, &p)?;
        result["universal"] = serde_json::to_value(&u).expect("serializes");
    }
    Ok(Outcome::new(result))
}

fn complete_cmd(loader: &mut Loader, sp: &Path, mp: &Path, targets: &[usize]) -> Out {
    let t = loader.structure(sp)?;
    let m = loader.module(mp, &t, sp)?;
    let c = group_completion(&m)?;
    let mut initiality = BTreeMap::new();
    for &n in targets {
        if n == 0 {
            return Err(CliError::input("target order must be positive"));
        }
        initiality.insert(n, check_completion_initial(&m, &c, n, &cyclic_group(n))?);
    }
    let mut out = Outcome::new(json!({
        "size": c.module.size(),
        "invariants": group_invariants(c.module.size(), c.module.add_table())?,
        "unit": c.unit,
        "representatives": c.representatives,
        "class_sizes": c.class_sizes,
        "certificate": c.certificate,
        "initiality": initiality,
    }));
    for (n, r) in &initiality {
        out.finding(!r.all_unique, format!("a map into Z{n} does not factor uniquely: {:?}", r.witness));
    }
    out.finding(!c.certificate.restriction_agrees, "extended action disagrees with the original on the unit image");
    Ok(out)
}

#[derive(Serialize)]
struct SectionSummary {
    generator: usize,
    open: Vec<usize>,
    kind: gamma_core::sheaves::SectionKind,
    size: usize,
    invariants: Vec<u64>,
}

fn sheaf_cmd(loader: &mut Loader, sp: &Path, mp: &Path) -> Out {
    let t = loader.structure(sp)?;
    let m = loader.module(mp, &t, sp)?;
    let completed = !m.is_group();
    let m = if completed { group_completion(&m)?.module } else { m };
    let p = tilde(&t, &m)?;
    let sections: Vec<SectionSummary> = p
        .sections
        .iter()
        .map(|s| SectionSummary {
            generator: s.generator,
            open: s.open.iter().copied().collect(),
            kind: s.kind,
            size: s.size(),
            invariants: s.invariants(),
        })
        .collect();
    let cover = minimal_cover(&p);
    let gs = global_sections(&t, &p)?;
    let glue = match &cover {
        Some(c) => Some(check_gluing(&t, &p, c)?),
        None => None,
    };
    let mut out = Outcome::new(json!({
        "completed_first": completed,
        "sections": sections,
        "restrictions": p.restrictions.len(),
        "defects": p.defects,
        "global_sections": gs,
        "gluing": glue,
    }));
    out.finding(!p.is_defect_free(), format!("{} presheaf defects", p.defects.len()));
    out.finding(!gs.isomorphic, format!("global sections differ from the module: {:?}", gs.witness));
    if let Some(g) = &glue {
        out.finding(
            g.verdict == gamma_core::sheaves::GlueVerdict::Fail,
            format!("gluing fails on {:?}", g.cover),
        );
    }
    Ok(out)
}

fn homology_summary(k: &ChainComplex) -> Result<serde_json::Value, CliError> {
    let hs = homology_all(k)?;
    let degrees: Vec<serde_json::Value> = hs
        .iter()
        .map(|h| {
            Ok(json!({
                "n": h.degree,
                "cohomological_degree": -h.degree,
                "size": h.module.size(),
                "invariants": group_invariants(h.module.size(), h.module.add_table())?,
                "cycles": h.cycles,
                "boundaries": h.boundaries,
            }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(json!({ "lo": k.lo(), "hi": k.hi(), "homology": degrees }))
}

fn homology_cmd(
    loader: &mut Loader,
    sp: &Path,
    cp: &Path,
    side: Option<gamma_core::homological::Truncation>,
    cone_map: Option<&Path>,
) -> Out {
    let t = loader.structure(sp)?;
    let mut findings = Vec::new();
    let mut result = serde_json::Map::new();
    let mut k = loader.complex(cp, &t, sp)?;
    if let Some(mp) = cone_map {
        let f = loader.chain_map(mp, &t, sp)?;
        if f.source() != &k && f.target() != &k {
            return Err(CliError::input("the chain map involves neither end of the given complex"));
        }
        let les = cone_long_exact(&f)?;
        if !les.exact {
            findings.push("long exact sequence of the cone is not exact".to_string());
        }
        result.insert("quasi_iso".into(), serde_json::to_value(gamma_core::homological::is_quasi_iso(&f)?).unwrap());
        result.insert("long_exact".into(), serde_json::to_value(les).unwrap());
        k = cone(&f)?;
    }
    if let Some(side) = side {
        k = truncate(&k, side)?;
        result.insert("truncation".into(), serde_json::to_value(side).unwrap());
    }
    result.insert("complex".into(), homology_summary(&k)?);
    result.insert("heart".into(), serde_json::to_value(heart_check(&k)?).unwrap());
    result.insert("truncation_matches_h0".into(), json!(truncation_matches_h0(&k)?));
    result.insert("indexing".into(), json!("homological; H^i = H_{-i}"));
    let matches = truncation_matches_h0(&k)?;
    if !matches {
        findings.push("τ≥0 τ≤0 K differs from H_0(K)".to_string());
    }
    Ok(Outcome {
        result: serde_json::Value::Object(result),
        findings,
        exit_override: None,
    })
}

fn shadow_cmd(loader: &mut Loader, sp: &Path, seed: &[usize], opts: &ShadowOptions) -> Out {
    let t = loader.structure(sp)?;
    let sys = close_multiplicative(&t, seed)?;
    let report = shadow_search(&t, &sys, opts)?;
    let complete = report.complete;
    let mut out = Outcome::new(json!({
        "outcome": if !complete { "incomplete" } else if report.satisfying.is_empty() { "exhausted" } else { "found" },
        "search": report,
    }));
    if !complete {
        out.findings.push("candidate budget exhausted before the family was covered".into());
        out.exit_override = Some(EXIT_RESOURCE);
    }
    Ok(out)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<InputDigest, CliError> {
    let text = serde_json::to_string_pretty(value).expect("documents serialize") + "\n";
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, &text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(InputDigest {
        path: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
    })
}

fn family_cmd(modulus: usize, gammas: &[usize], out: Option<&Path>) -> Out {
    let t = GammaSemiring::standard_family(modulus, gammas)?;
    let doc = t.to_document();
    let written = match out {
        Some(p) => Some(write_json(p, &doc)?),
        None => None,
    };
    Ok(Outcome::new(json!({ "document": doc, "written": written })))
}

fn corpus_cmd(dir: &Path) -> Out {
    let corpus = Corpus::standard()?;
    let mut written = Vec::new();
    let file = |name: &str, kind: &str| -> PathBuf {
        match kind {
            "" => dir.join(format!("{name}.json")),
            k => dir.join(format!("{name}.{k}.json")),
        }
    };
    let reference = |name: &str, kind: &str| -> String { file(name, kind).file_name().unwrap().to_string_lossy().into_owned() };
    for s in &corpus.structures {
        written.push(write_json(&file(&s.name, ""), &s.structure.to_document())?);
    }
    for m in corpus.modules.iter().chain(&corpus.monoids) {
        written.push(write_json(&file(&m.name, "module"), &m.module.to_document(&reference(&m.over, "")))?);
    }
    for c in &corpus.complexes {
        let doc = ComplexDocument {
            over: reference(&c.over, ""),
            degrees: c
                .complex
                .degrees()
                .zip(&c.degree_modules)
                .map(|(n, m)| DegreeDocument {
                    n,
                    module: reference(m, "module"),
                    d: c.complex.differential(n),
                })
                .collect(),
        };
        written.push(write_json(&file(&c.name, "complex"), &doc)?);
    }
    for m in &corpus.maps {
        let doc = ChainMapDocument {
            source: reference(&m.source, "complex"),
            target: reference(&m.target, "complex"),
            components: m
                .components
                .iter()
                .map(|(&n, map)| ComponentDocument { n, map: map.clone() })
                .collect(),
        };
        written.push(write_json(&file(&m.name, "map"), &doc)?);
    }
    Ok(Outcome::new(json!({ "files": written })))
}
