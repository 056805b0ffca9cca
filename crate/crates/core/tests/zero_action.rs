//! Modules with zero action are killed by every localization, so the
//! affine comparisons only hold for modules built from regular ones.

use gamma_core::corpus::Corpus;
use gamma_core::homological::tilde_complex_check;
use gamma_core::sheaves::check_full_faithfulness;

#[test]
fn full_faithfulness_fails_for_zero_action() {
    let c = Corpus::standard().unwrap();
    let t = c.structure("z3_standard");
    let m = &c.module("z3_trivial_z2").module;
    let ff = check_full_faithfulness(t, m, m).unwrap();
    assert_eq!(ff.homs, 2);
    assert_eq!(ff.families, 1);
    assert!(!ff.bijective);

    let r = &c.module("z3_regular").module;
    assert!(check_full_faithfulness(t, r, r).unwrap().bijective);
}

#[test]
fn tilde_does_not_reflect_for_zero_action() {
    let c = Corpus::standard().unwrap();
    let t = c.structure("z3_standard");
    let f = c.chain_map(c.maps.iter().find(|m| m.name == "z3_z2_into_z4").unwrap()).unwrap();
    let report = tilde_complex_check(t, &f).unwrap();
    assert!(!report.global);
    assert!(report.opens.iter().all(|o| o.quasi_iso == Some(true)));
    assert!(!report.reflects);
    assert!(report.preserves);
}
