use proptest::prelude::*;

use twcoh::poset::Poset;
use twcoh::sset::*;
use twcoh::suite;

#[test]
fn suite_presentations_validate() {
    for (name, x) in suite::all() {
        let r = x.validate();
        assert!(r.valid, "{name}: {:?}", r.errors);
        assert_eq!(r.cells, x.len());
    }
}

#[test]
fn decreasing_edge_is_invalid() {
    let mut b = Builder::new(Poset::linear(1));
    b.vertex("u", "1").unwrap();
    b.vertex("v", "0").unwrap();
    b.cell("uv", &["1", "0"], &["v", "u"]).unwrap();
    assert!(b.build().is_err());
}

#[test]
fn face_labels_must_match() {
    let mut b = Builder::new(Poset::linear(1));
    b.vertex("u", "0").unwrap();
    b.vertex("v", "1").unwrap();
    // faces swapped: face 0 must be the target vertex
    b.cell("uv", &["0", "1"], &["u", "v"]).unwrap();
    assert!(b.build().is_err());
}

#[test]
fn singular_cells_of_crac() {
    let r = suite::crac().validate();
    assert_eq!(r.nonsingular_cells, vec!["c".to_string()]);
    assert_eq!(r.maximal_cells, vec!["abc".to_string()]);
    assert_eq!(r.regular_cells, vec!["c", "ac", "bc", "abc"]);
}

#[test]
fn butterfly_splits_under_gluing() {
    let x = suite::butterfly();
    let r = restrict(&x);
    assert_eq!(r.len(), 12);
    let glued = extend_i(&r).unwrap();
    // two disjoint triangles
    assert_eq!(glued.count_by_dim(), vec![6, 6, 2]);
    assert_eq!(glued.euler_characteristic(), 2);
    let nerved = extend_n(&r);
    assert!(isomorphism(&nerved, &x).is_some());
}

#[test]
fn crac_is_recovered_by_gluing() {
    let x = suite::crac();
    let r = restrict(&x);
    assert!(isomorphism(&extend_i(&r).unwrap(), &x).is_some());
    let nerved = extend_n(&r);
    // a and b collapse onto the nerve vertex, ab becomes degenerate
    assert_eq!(nerved.count_by_dim(), vec![2, 2, 1]);
    assert!(nerved.validate().valid);
}

#[test]
fn restriction_undoes_both_extensions() {
    for (name, x) in suite::all() {
        let r = restrict(&x);
        assert_eq!(restrict(&extend_n(&r)), r, "{name}");
        if let Ok(g) = extend_i(&r) {
            assert_eq!(restrict(&g), r, "{name}");
        }
    }
}

#[test]
fn normalization_is_idempotent() {
    for (name, x) in suite::all() {
        let Ok(n) = normalize(&x) else { continue };
        let nn = normalize(&n).unwrap();
        assert!(isomorphism(&n, &nn).is_some(), "{name}");
    }
}

#[test]
fn product_of_edges() {
    let e = plain_simplex(1);
    let p = product(&e, &e).pres;
    assert_eq!(p.count_by_dim(), vec![4, 5, 2]);
    assert!(p.validate().valid);
    assert_eq!(tensor_with_standard(&e, 1).count_by_dim(), vec![4, 5, 2]);
}

#[test]
fn euler_characteristics() {
    let c = plain_boundary(2);
    assert_eq!(join(&c, &c).euler_characteristic(), 0);
    assert_eq!(suite::sphere_cone().euler_characteristic(), 0);
    assert_eq!(suite::sphere().euler_characteristic(), 2);
    assert_eq!(suite::projective_plane().euler_characteristic(), 1);
    assert_eq!(suite::projective_cone().euler_characteristic(), 1);
    assert_eq!(product_sphere_cone(2, 1).unwrap().euler_characteristic(), 2);
    assert!(product_sphere_cone(2, 2).is_err());
}

#[test]
fn circle_as_quotient() {
    let e = plain_simplex(1);
    let (q, f) = quotient(&e, &[0, 1]).unwrap();
    assert_eq!(q.count_by_dim(), vec![1, 1]);
    f.check(&e, &q, &[0]).unwrap();
    // not closed under faces
    assert!(quotient(&plain_simplex(2), &[3]).is_err());
}

#[test]
fn skeleton_of_tetrahedron() {
    let k4 = skeleton(&suite::sphere(), 1);
    assert_eq!(k4.count_by_dim(), vec![4, 6]);
    assert_eq!(k4.euler_characteristic(), -2);
}

#[test]
fn nerve_of_linear_poset() {
    let n = nerve(&Poset::linear(2));
    assert_eq!(n.count_by_dim(), vec![3, 3, 1]);
    assert!(n.validate().valid);
    assert!(isomorphism(&n, &standard_simplex(&Poset::linear(2), &[0, 1, 2])).is_some());
}

#[test]
fn json_round_trip() {
    for (name, x) in suite::all() {
        let back = Presentation::from_json_str(&x.to_json_string()).unwrap();
        assert_eq!(back, x, "{name}");
    }
    assert!(Presentation::from_json_str("{\"cells\": []}").is_err());
    assert!(Presentation::from_json_str("[").is_err());
}

#[test]
fn identity_maps_and_isomorphisms() {
    for (name, x) in suite::all() {
        SimplicialMap::identity(&x).check(&x, &x, &(0..x.poset.len()).collect::<Vec<_>>()).unwrap();
        let iso = isomorphism(&x, &x).unwrap_or_else(|| panic!("{name}"));
        assert_eq!(iso.len(), x.len());
    }
    assert!(isomorphism(&suite::butterfly(), &suite::crac()).is_none());
}

#[test]
fn degenerate_faces_normalize() {
    let rp = suite::projective_plane();
    let t = rp.find("t").unwrap();
    let f = rp.cell_face(t, 1);
    assert!(!f.is_nondegenerate());
    assert_eq!(rp.cells[f.cell].id, "v");
    // face of a degenerate simplex: s0 of an edge, then d0 gives the edge back
    let a = rp.find("a").unwrap();
    let s = rp.normalize_simplex(a, &[0, 0, 1]);
    assert_eq!(rp.face_simplex(&s, 0), rp.cell_simplex(a));
}

proptest! {
    #[test]
    fn closures_of_simplex_faces_validate(n in 0usize..5, picks in proptest::collection::vec(any::<usize>(), 1..4)) {
        let s = plain_simplex(n);
        let chosen: Vec<usize> = picks.iter().map(|p| p % s.len()).collect();
        let keep = s.closure(&chosen);
        let (sub, inc) = s.subpresentation(&keep).unwrap();
        prop_assert!(sub.validate().valid);
        inc.check(&sub, &s, &[0]).unwrap();
        for c in chosen {
            prop_assert!(keep.contains(&c));
        }
    }

    #[test]
    fn products_of_simplices_are_contractible(p in 0usize..3, q in 0usize..3) {
        let x = product(&plain_simplex(p), &plain_simplex(q)).pres;
        prop_assert!(x.validate().valid);
        prop_assert_eq!(x.euler_characteristic(), 1);
        prop_assert_eq!(x.dim(), Some(p + q));
    }

    #[test]
    fn standard_simplices_over_chains(chain in proptest::collection::vec(0usize..3, 1..5)) {
        let mut chain = chain;
        chain.sort();
        let p = Poset::linear(2);
        let x = standard_simplex(&p, &chain);
        prop_assert!(x.validate().valid);
        prop_assert_eq!(x.len(), (1usize << chain.len()) - 1);
        let r = restrict(&x);
        if let Ok(g) = extend_i(&r) {
            prop_assert_eq!(restrict(&g), r);
        }
    }
}
