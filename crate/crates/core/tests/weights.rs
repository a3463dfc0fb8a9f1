use airy_core::ff::{build_field, FieldElement, DEFAULT_BUDGET};
use airy_core::fiber::{fiber_l_poly, AiryFamily};

#[test]
fn equal_modulus_fiber_terminates() {
    let fam = AiryFamily::from_ints(7, 1, &[6, 0, 6, 5, 5, 3]).unwrap();
    let t = FieldElement::from_index(fam.base(), 1).unwrap();
    let fiber = fiber_l_poly(&fam, 1, &t, DEFAULT_BUDGET).unwrap();
    assert_eq!(fiber.l.degree(), Some(4));
    assert!(fiber.weight_deviation() < 1e-9);
}

#[test]
fn every_fiber_over_the_quadratic_extension_is_pure() {
    let fam = AiryFamily::from_ints(7, 1, &[6, 0, 6, 5, 5, 3]).unwrap();
    let field = build_field(7, 2).unwrap();
    for t in FieldElement::all(&field) {
        let fiber = fiber_l_poly(&fam, 2, &t, DEFAULT_BUDGET).unwrap();
        assert!(fiber.weight_deviation() < 1e-6, "t = {}", t.index());
    }
}
