use fibtype::diagram::{
    self, assign_angles, boundary_word, color_faces, curvature_report, forbidden_patterns, is_reduced,
    lane_decomposition, parse_and_validate, rational, vertex_label, xx_violations, z_placement_check, ColoredDisk,
    DiagramError,
};
use fibtype::words::Word;

fn load(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn fig1_shape() {
    let d = parse_and_validate(&load("fig1.vkd")).unwrap();
    assert_eq!((d.vertex_count(), d.edges().len(), d.faces().len()), (18, 37, 20));
    assert!(is_reduced(&d));
    assert!(xx_violations(&d).is_empty());
    let w = boundary_word(&d);
    assert_eq!(w, Word::parse(10, "x0 x5 x1 x0 x2 x1 x3 x0 x5 X3 X1 X2 X0 X1").unwrap());
    // the four interior vertices sit on the middle row
    let interior: Vec<usize> = (0..d.vertex_count()).filter(|&v| d.is_interior_vertex(v)).collect();
    assert_eq!(interior.len(), 4);
    for v in interior {
        assert_eq!(d.degree(v), 6);
        let l = vertex_label(&d, v);
        assert!(l == "XZZXYY" || l == "ZZXYYX", "{l}");
    }
}

#[test]
fn fig1_curvature() {
    let d = parse_and_validate(&load("fig1.vkd")).unwrap();
    let r = curvature_report(&d, &assign_angles(&d));
    assert_eq!(r.total, rational(360, 1));
    assert!(r.interior_flat());
    assert!(z_placement_check(&d).is_empty());
    // interior vertices are flat, so faces and boundary carry everything
    assert_eq!(&r.face_total + &r.boundary_total, rational(360, 1));
}

#[test]
fn fig1_json_round_trip() {
    let d = parse_and_validate(&load("fig1.vkd")).unwrap();
    let again = parse_and_validate(&d.to_json()).unwrap();
    assert_eq!(again.edges(), d.edges());
    assert_eq!(again.faces(), d.faces());
    assert_eq!(again.boundary(), d.boundary());
    assert_eq!(again.base(), d.base());
}

#[test]
fn broken_fixture_has_euler_characteristic_zero() {
    match parse_and_validate(&load("broken.vkd")) {
        Err(e @ DiagramError::EulerCharacteristic { chi: 0, .. }) => assert_eq!(e.code(), "euler-characteristic"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn wheel_fixture() {
    let d = parse_and_validate(&load("z3-wheel.vkd")).unwrap();
    assert_eq!(vertex_label(&d, 0), "ZZZ");
    let cd = color_faces(&d);
    assert_eq!(cd.black_faces().len(), 3);
    let ls = lane_decomposition(&cd).unwrap();
    assert!(ls.elements.iter().all(|e| e.kind == (1, 0)));
    let lc = diagram::lane_curvature(&d, &ls);
    assert_eq!(lc.kappa_max, Some(rational(-2, 1)));
    assert_eq!(lc.verdict, diagram::lanes::Verdict::Confirmed);
}

#[test]
fn pattern_fixtures_round_trip() {
    for name in ["fig3-1.cdk", "fig3-2.cdk", "fig3-3.cdk", "fig3-4.cdk", "fig3-5.cdk", "fig4.cdk"] {
        let cd = ColoredDisk::parse_cdk(&load(name)).unwrap();
        let again = ColoredDisk::parse_cdk(&cd.to_cdk()).unwrap();
        assert_eq!(again.faces(), cd.faces(), "{name}");
        assert_eq!(forbidden_patterns(&again), forbidden_patterns(&cd), "{name}");
    }
}

#[test]
fn fig4_lanes() {
    let cd = ColoredDisk::parse_cdk(&load("fig4.cdk")).unwrap();
    let ls = lane_decomposition(&cd).unwrap();
    assert_eq!(ls.maximal.len(), 2);
    let j = ls.maximal[0].junction.unwrap();
    assert_eq!(cd.label(j), "W2");
    assert!(ls.maximal.iter().all(|l| l.junction == Some(j)));
    assert_eq!(ls.elements.len(), 1);
    assert_eq!(ls.elements[0].faces.len(), cd.len());
}
