//! Small named presentations used by tests, the gallery and the benches.

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::sset::{cone_on, join, plain_boundary, plain_simplex, product_sphere_cone, Builder, Presentation};

/// Two triangles sharing their singular vertex `a`.
pub fn butterfly() -> Presentation {
    let mut b = Builder::new(Poset::linear(1));
    b.vertex("a", "0").unwrap();
    for v in ["b", "c", "d", "e"] {
        b.vertex(v, "1").unwrap();
    }
    for (e, f) in [("ab", ["b", "a"]), ("ac", ["c", "a"]), ("ad", ["d", "a"]), ("ae", ["e", "a"])] {
        b.cell(e, &["0", "1"], &f).unwrap();
    }
    b.cell("bc", &["1", "1"], &["c", "b"]).unwrap();
    b.cell("de", &["1", "1"], &["e", "d"]).unwrap();
    b.cell("abc", &["0", "1", "1"], &["bc", "ac", "ab"]).unwrap();
    b.cell("ade", &["0", "1", "1"], &["de", "ae", "ad"]).unwrap();
    b.build().unwrap()
}

/// `Δ[0] ∗ Δ[0]`: one edge from the singular point to the regular one.
pub fn point_cone() -> Presentation {
    join(&plain_simplex(0), &plain_simplex(0))
}

/// `Δ[1] ∗ Δ[0]`: a singular edge coned to the regular vertex.
pub fn crac() -> Presentation {
    let mut b = Builder::new(Poset::linear(1));
    b.vertex("a", "0").unwrap();
    b.vertex("b", "0").unwrap();
    b.vertex("c", "1").unwrap();
    b.cell("ab", &["0", "0"], &["b", "a"]).unwrap();
    b.cell("ac", &["0", "1"], &["c", "a"]).unwrap();
    b.cell("bc", &["0", "1"], &["c", "b"]).unwrap();
    b.cell("abc", &["0", "0", "1"], &["bc", "ac", "ab"]).unwrap();
    b.build().unwrap()
}

/// `Δ[0] ∗ Δ[1]`.
pub fn point_edge() -> Presentation {
    join(&plain_simplex(0), &plain_simplex(1))
}

/// The cone on a triangle circle.
pub fn cone_circle() -> Presentation {
    cone_on(&plain_boundary(2))
}

/// `S¹ × cS¹` over `[1]`.
pub fn sphere_cone() -> Presentation {
    product_sphere_cone(1, 1).unwrap()
}

/// `∂Δ[3]` over the point.
pub fn sphere() -> Presentation {
    plain_boundary(3)
}

/// One vertex, one loop and one triangle glued along `2a`, over the point.
pub fn projective_plane() -> Presentation {
    let mut b = Builder::new(Poset::point());
    b.vertex("v", "0").unwrap();
    b.cell("a", &["0", "0"], &["v", "v"]).unwrap();
    b.cell_degen("t", &["0", "0", "0"], &[("a", vec![0, 1]), ("v", vec![0, 0]), ("a", vec![0, 1])])
        .unwrap();
    b.build().unwrap()
}

/// The cone on the projective plane.
pub fn projective_cone() -> Presentation {
    cone_on(&projective_plane())
}

pub const NAMES: &[&str] = &[
    "point_cone",
    "butterfly",
    "crac",
    "point_edge",
    "cone_circle",
    "sphere_cone",
    "sphere",
    "projective_plane",
    "projective_cone",
];

pub fn by_name(name: &str) -> Result<Presentation> {
    Ok(match name {
        "point_cone" => point_cone(),
        "butterfly" => butterfly(),
        "crac" => crac(),
        "point_edge" => point_edge(),
        "cone_circle" => cone_circle(),
        "sphere_cone" => sphere_cone(),
        "sphere" => sphere(),
        "projective_plane" => projective_plane(),
        "projective_cone" => projective_cone(),
        _ => return Err(Error::Parse(format!("unknown example `{name}`"))),
    })
}

/// Every named example.
pub fn all() -> Vec<(&'static str, Presentation)> {
    NAMES.iter().map(|n| (*n, by_name(n).unwrap())).collect()
}
