use torelli::charvar::{relation_k, Surface};
use torelli::groebner::*;
use torelli::poisson::VectorField;
use torelli::polyring::MonomialOrder;

#[test]
fn sphere_field_is_transverse() {
    let c = transversality_certificate(Surface::FourHoledSphere, &CertificateOptions::default()).unwrap();
    assert!(c.verdict && c.residue_nonzero);
    assert_eq!(c.components.len(), 1);
    let w = c.witness.expect("sphere witness");
    let k = relation_k();
    assert!(k.eval_f64(&w).abs() < 1e-10);
    assert!(c.s.eval_f64(&w).abs() < 1e-10);
    assert!(c.h12s.eval_f64(&w).abs() > 1e-3);
}

#[test]
fn zero_field_control_fails() {
    for surface in [Surface::FourHoledSphere, Surface::TwoHoledTorus] {
        let c = certificate_for_field(surface, &VectorField::zero(), &CertificateOptions::default()).unwrap();
        assert!(!c.verdict, "{surface}");
        assert!(c.components.iter().all(|x| x.residue.is_zero() && x.witness.is_none()));
    }
}

#[test]
fn lex_agrees_with_grevlex_on_sphere() {
    let lex = CertificateOptions {
        order: MonomialOrder::Lex,
        ..CertificateOptions::default()
    };
    let a = transversality_certificate(Surface::FourHoledSphere, &CertificateOptions::default()).unwrap();
    let b = transversality_certificate(Surface::FourHoledSphere, &lex).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.h12s, b.h12s);
}

#[test]
fn torus_field_is_transverse_to_both_factors() {
    let c = transversality_certificate(Surface::TwoHoledTorus, &CertificateOptions::default()).unwrap();
    assert!(c.verdict);
    assert_eq!(c.components.len(), 2);
    let k = relation_k();
    for comp in &c.components {
        assert!(comp.residue_nonzero);
        let w = comp.witness.expect("component witness");
        assert!(k.eval_f64(&w).abs() < 1e-10);
        assert!(comp.factor.eval_f64(&w).abs() < 1e-10);
        assert!(c.h12s.eval_f64(&w).abs() > 1e-3);
    }
    let again = transversality_certificate(Surface::TwoHoledTorus, &CertificateOptions::default()).unwrap();
    assert_eq!(serde_json::to_string(&again.components).unwrap(), serde_json::to_string(&c.components).unwrap());
}

#[test]
fn tiny_budget_reports_exhaustion() {
    let opts = CertificateOptions {
        budget: Budget::new(5, 5),
        ..CertificateOptions::default()
    };
    let err = transversality_certificate(Surface::FourHoledSphere, &opts).unwrap_err();
    assert!(matches!(err, GroebnerError::BudgetExceeded { .. }));
}
