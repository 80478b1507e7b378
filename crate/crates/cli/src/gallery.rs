use serde_json::json;

use twcoh::complex::{Cylinder, GlobalComplex};
use twcoh::eml::{operation_group, perverse_eml_skeleton, stable_cohomology, zero_perversity_model};
use twcoh::ffs::{delta_cochain_complex, forget_to_ffs};
use twcoh::linalg::{CohomologyGroup, Ring};
use twcoh::poset::{ExtInt, Perversity, Poset};
use twcoh::sset::{isomorphism, nerve, skeleton, Presentation};
use twcoh::{suite, Result};

use crate::table::Table;
use crate::{emit, CliError, Format, Output, SCHEMA};

struct Case {
    name: &'static str,
    quantity: &'static str,
    expected: &'static str,
    run: fn() -> Result<String>,
}

fn join(groups: &[CohomologyGroup]) -> String {
    groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
}

fn constant(x: &Presentation, v: ExtInt) -> Perversity {
    Perversity::constant(&x.poset, v)
}

fn groups(x: &Presentation, p: &Perversity, ring: Ring, top: usize) -> Result<Vec<CohomologyGroup>> {
    let c = GlobalComplex::new(x, top + 1)?;
    (0..=top).map(|k| c.cohomology(p, ring, k, None)).collect()
}

fn point_cone() -> Result<String> {
    let x = suite::point_cone();
    Ok(join(&groups(&x, &constant(&x, ExtInt::Fin(0)), Ring::Fp(2), 2)?))
}

fn butterfly() -> Result<String> {
    let x = suite::butterfly();
    Ok(groups(&x, &constant(&x, ExtInt::Fin(0)), Ring::Z, 0)?[0].to_string())
}

fn crac() -> Result<String> {
    let x = suite::crac();
    Ok(join(&groups(&x, &constant(&x, ExtInt::PosInf), Ring::Z, 2)?))
}

fn sphere_cone() -> Result<String> {
    let x = suite::sphere_cone();
    let c = GlobalComplex::new(&x, 3)?;
    let out = [ExtInt::Fin(0), ExtInt::Fin(1), ExtInt::PosInf]
        .into_iter()
        .map(|v| c.cohomology(&constant(&x, v), Ring::Z, 2, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(join(&out))
}

fn suspension() -> Result<String> {
    let mut bad = Vec::new();
    for (name, x) in suite::all() {
        let cyl = Cylinder::new(&x);
        let ends = cyl.ends();
        let big = GlobalComplex::new(cyl.total(), 4)?;
        let small = GlobalComplex::new(&x, 3)?;
        for v in [ExtInt::Fin(0), ExtInt::PosInf] {
            let p = constant(&x, v);
            for k in 0..=2 {
                let a = small.cohomology(&p, Ring::Z, k, None)?;
                let b = big.cohomology(&p, Ring::Z, k + 1, Some(&ends))?;
                if a != b {
                    bad.push(format!("{name} p={v} k={k}"));
                }
            }
        }
    }
    Ok(if bad.is_empty() { "isomorphic".into() } else { format!("differs at {}", bad.join("; ")) })
}

fn eml_skeleta() -> Result<String> {
    let p = Poset::linear(1);
    for n in 1..=2 {
        let mut tops = Vec::new();
        for v in [ExtInt::Fin(0), ExtInt::Fin(1), ExtInt::PosInf] {
            let k = perverse_eml_skeleton(&p, 2, n, &Perversity::constant(&p, v), n)?;
            if isomorphism(&skeleton(&k.pres, n - 1), &skeleton(&nerve(&p), n - 1)).is_none() {
                return Ok(format!("n={n}, p={v}: low skeleton differs from the nerve"));
            }
            tops.push(skeleton(&k.pres, n));
        }
        if tops.iter().any(|t| isomorphism(&tops[0], t).is_none()) {
            return Ok(format!("n={n}: depends on the perversity"));
        }
    }
    Ok("nerve below n, perversity independent at n".into())
}

fn operations(source: ExtInt, target: ExtInt, m: usize) -> Result<String> {
    let p = Poset::linear(1);
    let r = operation_group(
        &p,
        2,
        1,
        &Perversity::constant(&p, source),
        m,
        &Perversity::constant(&p, target),
        3,
    )?;
    Ok(if r.stable { r.group.to_string() } else { format!("{} (unstable, next {})", r.group, r.next) })
}

fn zero_perversity() -> Result<String> {
    let mut out = Vec::new();
    for k in 1..=2 {
        let a = zero_perversity_model(2, 1, k + 2)?;
        let b = zero_perversity_model(2, 1, k + 3)?;
        for v in [ExtInt::Fin(0), ExtInt::Fin(1), ExtInt::PosInf] {
            let (h, stable) = stable_cohomology(&a, &b, &constant(&a, v), Ring::Fp(2), k)?;
            out.push(if stable { h.to_string() } else { format!("{h}?") });
        }
    }
    out.dedup();
    Ok(out.join(", "))
}

fn face_sets() -> Result<String> {
    let mut bad = Vec::new();
    for (name, x) in suite::all() {
        let lmax = x.regular_cells().iter().map(|&c| x.blocks(c).len() - 1).max().unwrap_or(0);
        let t = forget_to_ffs(&x, 3 + lmax);
        let dc = delta_cochain_complex(&t, 3)?;
        let c = GlobalComplex::new(&x, 3)?;
        for v in [ExtInt::Fin(0), ExtInt::PosInf] {
            let p = constant(&x, v);
            for ring in [Ring::Z, Ring::Fp(2)] {
                if c.cohomology_all(&p, ring, None)? != dc.cohomology_all(&p, ring, None)? {
                    bad.push(format!("{name} p={v} {ring}"));
                }
            }
        }
    }
    Ok(if bad.is_empty() { "isomorphic".into() } else { format!("differs at {}", bad.join("; ")) })
}

const CASES: &[Case] = &[
    Case {
        name: "point_cone",
        quantity: "H^0..2 of the cone on a point, p=0, F2",
        expected: "F2, 0, 0",
        run: point_cone,
    },
    Case {
        name: "butterfly",
        quantity: "H^0 of the butterfly, p=0, Z",
        expected: "Z^2",
        run: butterfly,
    },
    Case {
        name: "crac",
        quantity: "H^0..2 of the singular edge coned to a regular point, p=inf, Z",
        expected: "Z, 0, 0",
        run: crac,
    },
    Case {
        name: "sphere_cone",
        quantity: "H^2 of S1 x cS1 at p=0, 1, inf, Z",
        expected: "0, Z, Z",
        run: sphere_cone,
    },
    Case {
        name: "suspension",
        quantity: "H^k(X) against H^(k+1)(X x I, X x dI), every example",
        expected: "isomorphic",
        run: suspension,
    },
    Case {
        name: "eml_skeleta",
        quantity: "skeleta of K(F2, n, [1], p) for n=1,2",
        expected: "nerve below n, perversity independent at n",
        run: eml_skeleta,
    },
    Case {
        name: "operations_le",
        quantity: "Nat(H^1_q, H^1_p), q=0, p=1, F2, d=3",
        expected: "F2",
        run: || operations(ExtInt::Fin(0), ExtInt::Fin(1), 1),
    },
    Case {
        name: "operations_gt",
        quantity: "Nat(H^1_q, H^1_p), q=1, p=0, F2, d=3",
        expected: "0",
        run: || operations(ExtInt::Fin(1), ExtInt::Fin(0), 1),
    },
    Case {
        name: "operations_degree_zero",
        quantity: "Nat(H^1_q, H^0_p), q=0, p=0, F2, d=3",
        expected: "0",
        run: || operations(ExtInt::Fin(0), ExtInt::Fin(0), 0),
    },
    Case {
        name: "zero_perversity",
        quantity: "H^1, H^2 of the zero perversity model over F2, p=0,1,inf",
        expected: "F2",
        run: zero_perversity,
    },
    Case {
        name: "face_sets",
        quantity: "face set cochains against normalized cochains, every example",
        expected: "isomorphic",
        run: face_sets,
    },
];

pub fn run(format: Format, case: Option<&str>, list: bool) -> std::result::Result<Output, CliError> {
    let chosen: Vec<&Case> = match case {
        Some(name) => {
            let c = CASES
                .iter()
                .find(|c| c.name == name)
                .ok_or_else(|| CliError::Usage(format!("unknown gallery case `{name}`")))?;
            vec![c]
        }
        None => CASES.iter().collect(),
    };
    if list {
        let value = json!({
            "schema": SCHEMA,
            "command": "gallery",
            "cases": chosen.iter().map(|c| json!({"case": c.name, "quantity": c.quantity, "expected": c.expected})).collect::<Vec<_>>(),
        });
        return Ok(emit(format, value, || {
            let mut t = Table::new(&["case", "quantity", "expected"]);
            for c in &chosen {
                t.row(vec![c.name.into(), c.quantity.into(), c.expected.into()]);
            }
            t.render()
        }));
    }
    let mut rows = Vec::new();
    for c in &chosen {
        let computed = (c.run)().unwrap_or_else(|e| format!("error: {e}"));
        let pass = computed == c.expected;
        rows.push((c, computed, pass));
    }
    let all = rows.iter().all(|r| r.2);
    let value = json!({
        "schema": SCHEMA,
        "command": "gallery",
        "pass": all,
        "cases": rows.iter().map(|(c, got, pass)| json!({
            "case": c.name,
            "quantity": c.quantity,
            "expected": c.expected,
            "computed": got,
            "pass": pass,
        })).collect::<Vec<_>>(),
    });
    let mut out = emit(format, value, || {
        let mut t = Table::new(&["case", "quantity", "expected", "computed", "status"]);
        for (c, got, pass) in &rows {
            t.row(vec![
                c.name.into(),
                c.quantity.into(),
                c.expected.into(),
                got.clone(),
                if *pass { "ok".into() } else { "MISMATCH".into() },
            ]);
        }
        t.render()
    });
    if !all {
        out.code = 1;
    }
    Ok(out)
}
