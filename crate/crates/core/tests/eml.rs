use twcoh::complex::{GlobalComplex, RelativeComplex};
use twcoh::eml::*;
use twcoh::linalg::{CohomologyGroup, Ring};
use twcoh::poset::{ExtInt, Perversity, Poset};
use twcoh::sset::{isomorphism, nerve, skeleton};
use twcoh::Error;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of `n`-cocycles on `Δ[k]` with values in `F_q`, by enumeration.
fn cocycle_count(q: u64, n: usize, k: usize) -> usize {
    let subsets = |size: usize| -> Vec<u32> { (0u32..1 << (k + 1)).filter(|s| s.count_ones() as usize == size).collect() };
    let src = subsets(n + 1);
    let tgt = subsets(n + 2);
    let mut count = 0;
    let total = (q as usize).pow(src.len() as u32);
    for code in 0..total {
        let mut vals = vec![0u64; src.len()];
        let mut c = code;
        for v in vals.iter_mut() {
            *v = (c % q as usize) as u64;
            c /= q as usize;
        }
        let ok = tgt.iter().all(|&t| {
            let verts: Vec<u32> = (0..=k as u32).filter(|i| t >> i & 1 == 1).collect();
            let mut s = 0i64;
            for (i, &v) in verts.iter().enumerate() {
                let face = t & !(1 << v);
                let idx = src.iter().position(|&f| f == face).unwrap();
                let sign = if i % 2 == 0 { 1 } else { -1 };
                s += sign * vals[idx] as i64;
            }
            s.rem_euclid(q as i64) == 0
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// Nondegenerate simplices by binomial inversion of the simplex counts.
fn nondegenerate_counts(q: u64, n: usize, top: usize) -> Vec<usize> {
    let totals: Vec<i64> = (0..=top).map(|k| cocycle_count(q, n, k) as i64).collect();
    (0..=top)
        .map(|k| {
            let v: i64 = (0..=k)
                .map(|m| {
                    let s = if (k - m) % 2 == 0 { 1 } else { -1 };
                    s * binom(k, m) as i64 * totals[m]
                })
                .sum();
            v as usize
        })
        .collect()
}

#[test]
fn classical_cell_counts_match_enumeration() {
    for (q, n, top) in [(2, 1, 4), (3, 1, 3), (2, 2, 3), (2, 3, 4), (3, 2, 3)] {
        let k = classical_eml_skeleton(q, n, top).unwrap();
        let want = nondegenerate_counts(q, n, top);
        let mut got = k.count_by_dim();
        got.resize(top + 1, 0);
        assert_eq!(got, want, "q={q} n={n}");
    }
}

#[test]
fn circle_group_counts() {
    // K(F_2, 1) has one cell per dimension, K(F_3, 1) has 2^k
    assert_eq!(classical_eml_skeleton(2, 1, 5).unwrap().count_by_dim(), vec![1; 6]);
    assert_eq!(classical_eml_skeleton(3, 1, 3).unwrap().count_by_dim(), vec![1, 2, 4, 8]);
}

#[test]
fn projective_space_cohomology() {
    // K(F_p, 1) is an infinite lens space
    for q in [2u64, 3] {
        let k = classical_eml_skeleton(q, 1, 5).unwrap();
        let p = Perversity::zero(&k.poset);
        let c = GlobalComplex::new(&k, 5).unwrap();
        for d in 0..4 {
            assert_eq!(c.cohomology(&p, Ring::Fp(q), d, None).unwrap(), CohomologyGroup::free(Ring::Fp(q), 1));
            let hq = c.cohomology(&p, Ring::Q, d, None).unwrap();
            assert_eq!(hq.free_rank, (d == 0) as usize);
        }
        let hz = c.cohomology(&p, Ring::Z, 2, None).unwrap();
        assert_eq!(hz.torsion, vec![q.into()]);
    }
}

#[test]
fn skeleta_are_valid_and_nested() {
    let p = Poset::linear(1);
    for v in [ExtInt::Fin(0), ExtInt::Fin(1), ExtInt::PosInf] {
        let per = Perversity::constant(&p, v);
        let big = perverse_eml_skeleton(&p, 2, 1, &per, 3).unwrap();
        let small = perverse_eml_skeleton(&p, 2, 1, &per, 2).unwrap();
        assert!(big.pres.validate().valid);
        assert!(isomorphism(&skeleton(&big.pres, 2), &small.pres).is_some());
        assert_eq!(big.cocycles.len(), big.pres.len());
        assert!(big.pres.dim().unwrap() <= 3);
    }
}

#[test]
fn basepoint_is_the_nerve() {
    let p = Poset::linear(1);
    let per = Perversity::constant(&p, ExtInt::Fin(0));
    let k = perverse_eml_skeleton(&p, 2, 2, &per, 3).unwrap();
    let (base, _) = k.pres.subpresentation(&k.basepoint).unwrap();
    let mut counts = base.count_by_dim();
    counts.truncate(2);
    assert_eq!(counts, nerve(&p).count_by_dim());
    for &c in &k.basepoint {
        assert!(k.cocycles[c].iter().all(|&v| v == 0));
    }
    assert!(RelativeComplex::new(&k.pres, &k.basepoint, 3).is_ok());
}

#[test]
fn point_poset_gives_the_classical_space() {
    let pt = Poset::point();
    let per = Perversity::zero(&pt);
    let a = perverse_eml_skeleton(&pt, 3, 1, &per, 3).unwrap();
    assert_eq!(a.pres.count_by_dim(), vec![1, 2, 4, 8]);
    assert_eq!(a.prime, 3);
    assert_eq!(a.n, 1);
}

#[test]
fn models_over_the_interval() {
    let j = joyal_infinite_model(2, 1, 3).unwrap();
    let z = zero_perversity_model(2, 1, 3).unwrap();
    assert!(j.validate().valid);
    assert!(z.validate().valid);
    assert_eq!(j.poset, Poset::linear(1));
    // both have a single singular vertex
    for x in [&j, &z] {
        let singular = (0..x.len()).filter(|&c| x.cells[c].chain.iter().all(|&s| s == 0)).count();
        assert_eq!(singular, 1);
    }
}

#[test]
fn operation_groups_need_room() {
    let p = Poset::linear(1);
    let zero = Perversity::zero(&p);
    assert!(matches!(
        operation_group(&p, 2, 1, &zero, 1, &zero, 1),
        Err(Error::Truncation { .. })
    ));
    let r = operation_group(&p, 2, 1, &zero, 1, &zero, 3).unwrap();
    assert_eq!(r.truncation, 3);
    assert_eq!(r.group, CohomologyGroup::free(Ring::Fp(2), 1));
    assert!(r.stable);
}

#[test]
fn no_operations_from_degree_one_to_zero() {
    let p = Poset::linear(1);
    let zero = Perversity::zero(&p);
    let r = operation_group(&p, 2, 1, &zero, 0, &zero, 3).unwrap();
    assert!(r.group.is_zero());
}

#[test]
fn bad_primes_and_caps() {
    let p = Poset::linear(1);
    let zero = Perversity::zero(&p);
    assert!(perverse_eml_skeleton(&p, 4, 1, &zero, 2).is_err());
    assert!(matches!(
        perverse_eml_skeleton_capped(&p, 2, 1, &zero, 4, 5),
        Err(Error::TooLarge(_))
    ));
}

#[test]
fn stability_flag() {
    let k3 = classical_eml_skeleton(2, 1, 3).unwrap();
    let k4 = classical_eml_skeleton(2, 1, 4).unwrap();
    let p = Perversity::zero(&k3.poset);
    let (h, stable) = stable_cohomology(&k3, &k4, &p, Ring::Fp(2), 2).unwrap();
    assert!(stable);
    assert_eq!(h, CohomologyGroup::free(Ring::Fp(2), 1));
    // integrally the top cell of the 3-skeleton is a spurious class
    let (h, stable) = stable_cohomology(&k3, &k4, &p, Ring::Z, 3).unwrap();
    assert_eq!(h, CohomologyGroup::free(Ring::Z, 1));
    assert!(!stable);
}
