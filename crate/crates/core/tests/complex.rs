use num_traits::ToPrimitive;

use twcoh::blowup::LocalComplex;
use twcoh::complex::*;
use twcoh::linalg::{kernel_z, CohomologyGroup, Ring, SparseMatrix};
use twcoh::poset::{ExtInt, MonotoneMap, Perversity, Poset};
use twcoh::sset::*;
use twcoh::{suite, Error};

/// Globally compatible cochains computed as a literal equalizer: one local
/// complex per regular cell, glued by the face relations.
struct Equalizer {
    offsets: Vec<Vec<usize>>,
    locals: Vec<Option<LocalComplex>>,
    ambient: Vec<usize>,
    /// Columns of each matrix span the equalizer in degree `k`.
    basis: Vec<SparseMatrix>,
    diff: Vec<SparseMatrix>,
    /// Ambient coordinates that are not allowable, per degree.
    allowable: Vec<Vec<(usize, usize, usize)>>,
}

fn to_sparse(rows: usize, cols: &[Vec<i64>]) -> SparseMatrix {
    let mut t = Vec::new();
    for (c, v) in cols.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            if x != 0 {
                t.push((r, c, x));
            }
        }
    }
    SparseMatrix::from_triplets(rows, cols.len(), t)
}

fn kernel_columns(m: &SparseMatrix) -> Vec<Vec<i64>> {
    kernel_z(m)
        .into_iter()
        .map(|v| {
            let mut d = vec![0i64; m.cols];
            for (i, x) in v {
                d[i] = x.to_i64().unwrap();
            }
            d
        })
        .collect()
}

/// Pullback along the surjection `map`, from the local complex of `cell`.
fn degeneracy_chain(lc: &LocalComplex, map: &[usize]) -> (LocalComplex, Vec<SparseMatrix>) {
    let mut cur = lc.clone();
    let mut mats: Vec<SparseMatrix> = (0..=lc.top_degree()).map(|k| SparseMatrix::identity(lc.dim(k))).collect();
    for i in 0..map.len() - 1 {
        if map[i] == map[i + 1] {
            let (big, s) = cur.degeneracy_pullback(i);
            mats = (0..=big.top_degree())
                .map(|k| {
                    if k < mats.len() {
                        s[k].mul(&mats[k])
                    } else {
                        SparseMatrix::zeros(big.dim(k), lc.dim(k))
                    }
                })
                .collect();
            cur = big;
        }
    }
    (cur, mats)
}

impl Equalizer {
    fn new(x: &Presentation, kmax: usize) -> Equalizer {
        let locals: Vec<Option<LocalComplex>> = (0..x.len())
            .map(|c| x.is_regular(c).then(|| LocalComplex::new(&x.blocks(c))))
            .collect();
        let mut offsets = vec![vec![usize::MAX; x.len()]; kmax + 2];
        let mut ambient = vec![0usize; kmax + 2];
        let mut allowable = vec![Vec::new(); kmax + 2];
        for k in 0..=kmax + 1 {
            for (c, lc) in locals.iter().enumerate() {
                if let Some(lc) = lc {
                    offsets[k][c] = ambient[k];
                    for j in 0..lc.dim(k) {
                        allowable[k].push((c, k, j));
                    }
                    ambient[k] += lc.dim(k);
                }
            }
        }
        // face constraints: restricting the cochain on a cell to its j-th face
        // agrees with the cochain on the face cell, pulled back along the
        // degeneracy that names that face
        let mut basis = Vec::new();
        for k in 0..=kmax + 1 {
            let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
            for (c, lc) in locals.iter().enumerate() {
                let Some(lc) = lc else { continue };
                if x.cells[c].dim == 0 {
                    continue;
                }
                for j in 0..=x.cells[c].dim {
                    let fs = x.cell_face(c, j);
                    if !x.poset.is_regular(&x.simplex_chain(&fs)) {
                        continue;
                    }
                    let (face, d) = lc.face_pullback(j).unwrap();
                    let (big, s) = degeneracy_chain(locals[fs.cell].as_ref().unwrap(), &fs.map);
                    assert_eq!(face.blocks, big.blocks);
                    if k > face.top_degree() {
                        continue;
                    }
                    let dk = d[k].to_dense();
                    let sk = s[k].to_dense();
                    for r in 0..face.dim(k) {
                        let mut row = Vec::new();
                        for (col, &v) in dk[r].iter().enumerate() {
                            if v != 0 {
                                row.push((offsets[k][c] + col, v));
                            }
                        }
                        for (col, &v) in sk[r].iter().enumerate() {
                            if v != 0 {
                                row.push((offsets[k][fs.cell] + col, -v));
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            let mut t = Vec::new();
            for (r, row) in rows.iter().enumerate() {
                for &(c, v) in row {
                    t.push((r, c, v));
                }
            }
            let cons = SparseMatrix::from_triplets(rows.len(), ambient[k], t);
            basis.push(to_sparse(ambient[k], &kernel_columns(&cons)));
        }
        let mut diff = Vec::new();
        for k in 0..=kmax {
            let mut t = Vec::new();
            for (c, lc) in locals.iter().enumerate() {
                let Some(lc) = lc else { continue };
                if k >= lc.diff.len() {
                    continue;
                }
                let d = lc.diff[k].to_dense();
                for (r, row) in d.iter().enumerate() {
                    for (col, &v) in row.iter().enumerate() {
                        if v != 0 {
                            t.push((offsets[k + 1][c] + r, offsets[k][c] + col, v));
                        }
                    }
                }
            }
            diff.push(SparseMatrix::from_triplets(ambient[k + 1], ambient[k], t));
        }
        Equalizer {
            offsets,
            locals,
            ambient,
            basis,
            diff,
            allowable,
        }
    }

    fn bad_rows(&self, k: usize, p: &Perversity) -> Vec<usize> {
        self.allowable[k]
            .iter()
            .enumerate()
            .filter(|(_, &(c, k, j))| {
                let lc = self.locals[c].as_ref().unwrap();
                !lc.is_allowable(&lc.basis[k][j], p)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Basis of allowable equalizer cochains with allowable coboundary.
    fn intersection(&self, k: usize, p: &Perversity) -> SparseMatrix {
        let e = &self.basis[k];
        let a = self.bad_rows(k, p);
        let b = self.bad_rows(k + 1, p);
        let top = e.select_rows(&a);
        let bottom = self.diff[k].mul(e).select_rows(&b);
        let mut t = Vec::new();
        for (r, row) in top.to_dense().iter().chain(bottom.to_dense().iter()).enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    t.push((r, c, v));
                }
            }
        }
        let m = SparseMatrix::from_triplets(a.len() + b.len(), e.cols, t);
        e.mul(&to_sparse(e.cols, &kernel_columns(&m)))
    }

    fn betti(&self, k: usize, p: &Perversity) -> usize {
        let ik = self.intersection(k, p);
        let boundaries = if k == 0 {
            0
        } else {
            self.diff[k - 1].mul(&self.intersection(k - 1, p)).rank(Ring::Q)
        };
        ik.cols - self.diff[k].mul(&ik).rank(Ring::Q) - boundaries
    }
}

fn perversities(poset: &Poset) -> Vec<Perversity> {
    let mut out: Vec<Perversity> = [ExtInt::NegInf, ExtInt::Fin(0), ExtInt::Fin(1), ExtInt::Fin(2), ExtInt::PosInf]
        .into_iter()
        .map(|v| Perversity::constant(poset, v))
        .collect();
    if poset.len() == 2 {
        out.push(Perversity::new(poset, vec![ExtInt::Fin(-1), ExtInt::Fin(0)]).unwrap());
    }
    out
}

#[test]
fn generators_match_the_literal_equalizer() {
    for (name, x) in suite::all() {
        let c = GlobalComplex::new(&x, 3).unwrap();
        let eq = Equalizer::new(&x, 3);
        for k in 0..=3 {
            assert_eq!(eq.basis[k].cols, c.rank(k), "{name} degree {k}");
        }
        assert!(eq.ambient.iter().sum::<usize>() >= c.ranks().iter().sum::<usize>());
        assert_eq!(eq.offsets.len(), 5);
    }
}

#[test]
fn cohomology_matches_the_literal_equalizer() {
    for (name, x) in suite::all() {
        let c = GlobalComplex::new(&x, 3).unwrap();
        let eq = Equalizer::new(&x, 3);
        for p in perversities(&x.poset) {
            for k in 0..3 {
                let h = c.cohomology(&p, Ring::Q, k, None).unwrap();
                assert_eq!(h.free_rank, eq.betti(k, &p), "{name} p={} k={k}", p.display(&x.poset));
            }
        }
    }
}

#[test]
fn known_groups() {
    let z = |r| CohomologyGroup::free(Ring::Z, r);
    let sphere = suite::sphere();
    let p = Perversity::zero(&sphere.poset);
    let h = intersection_cohomology(&sphere, &p, Ring::Z, 0..=2).unwrap();
    assert_eq!(h, vec![z(1), z(0), z(1)]);
    let rp = suite::projective_plane();
    let p = Perversity::zero(&rp.poset);
    let h = intersection_cohomology(&rp, &p, Ring::Z, 0..=2).unwrap();
    assert_eq!(h[0], z(1));
    assert!(h[1].is_zero());
    assert_eq!(h[2].free_rank, 0);
    assert_eq!(h[2].torsion, vec![2.into()]);
    for (name, x) in suite::all() {
        let p = Perversity::infinite(&x.poset);
        let h = intersection_cohomology(&x, &p, Ring::Z, 0..=0).unwrap();
        assert!(h[0].free_rank >= 1, "{name}");
    }
}

#[test]
fn degrees_at_the_truncation_are_rejected() {
    let x = suite::butterfly();
    let c = GlobalComplex::new(&x, 2).unwrap();
    let p = Perversity::zero(&x.poset);
    assert!(c.cohomology(&p, Ring::Z, 1, None).is_ok());
    assert!(matches!(
        c.cohomology(&p, Ring::Z, 2, None),
        Err(Error::Truncation { degree: 2, kmax: 2 })
    ));
}

#[test]
fn generator_cap_is_enforced() {
    let x = suite::sphere_cone();
    assert!(matches!(GlobalComplex::with_cap(&x, 4, 10), Err(Error::TooLarge(_))));
}

#[test]
fn relative_cohomology_extremes() {
    for (name, x) in suite::all() {
        let all: Vec<usize> = (0..x.len()).collect();
        let full = RelativeComplex::new(&x, &all, 3).unwrap();
        let none = RelativeComplex::new(&x, &[], 3).unwrap();
        let c = GlobalComplex::new(&x, 3).unwrap();
        for p in perversities(&x.poset) {
            for k in 0..3 {
                assert!(full.cohomology(&p, Ring::Z, k).unwrap().is_zero(), "{name}");
                assert_eq!(
                    none.cohomology(&p, Ring::Z, k).unwrap(),
                    c.cohomology(&p, Ring::Z, k, None).unwrap(),
                    "{name}"
                );
            }
        }
        assert!(full.ranks().iter().all(|&r| r == 0));
    }
}

#[test]
fn relative_pair_must_be_closed() {
    let x = suite::point_edge();
    let top = (0..x.len()).find(|&c| x.cells[c].dim == 1).unwrap();
    assert!(RelativeComplex::new(&x, &[top], 2).is_err());
}

#[test]
fn circle_relative_to_a_point() {
    // (∂Δ[2], vertex) has the reduced cohomology of the circle
    let x = plain_boundary(2);
    let v = x.find("0").unwrap();
    let r = RelativeComplex::new(&x, &[v], 3).unwrap();
    let p = Perversity::zero(&x.poset);
    assert!(r.cohomology(&p, Ring::Z, 0).unwrap().is_zero());
    assert_eq!(r.cohomology(&p, Ring::Z, 1).unwrap(), CohomologyGroup::free(Ring::Z, 1));
}

#[test]
fn both_extensions_have_the_same_cohomology() {
    for (name, x) in suite::all() {
        let r = restrict(&x);
        let a = extend_n(&r);
        let Ok(b) = extend_i(&r) else { continue };
        let ca = GlobalComplex::new(&a, 3).unwrap();
        let cb = GlobalComplex::new(&b, 3).unwrap();
        let cx = GlobalComplex::new(&x, 3).unwrap();
        assert_eq!(ca.ranks(), cx.ranks(), "{name}");
        for p in perversities(&x.poset) {
            let h = cx.cohomology_all(&p, Ring::Z, None).unwrap();
            assert_eq!(ca.cohomology_all(&p, Ring::Z, None).unwrap(), h, "{name}");
            assert_eq!(cb.cohomology_all(&p, Ring::Z, None).unwrap(), h, "{name}");
        }
    }
}

#[test]
fn collapsing_the_singular_edge_is_an_isomorphism() {
    let x = suite::crac();
    let a: Vec<usize> = ["a", "b", "ab"].iter().map(|id| x.find(id).unwrap()).collect();
    let (q, pi) = quotient(&x, &a).unwrap();
    assert_eq!(q.count_by_dim(), vec![2, 2, 1]);
    let cx = GlobalComplex::new(&x, 3).unwrap();
    let cq = GlobalComplex::new(&q, 3).unwrap();
    for k in 0..=3 {
        let m = induced_matrix(&x, &cx, &q, &cq, &pi, k).unwrap();
        assert_eq!(m.rows, m.cols);
        assert_eq!(m.rank(Ring::Z), m.rows);
        assert_eq!(m.transpose().mul(&m), SparseMatrix::identity(m.rows));
    }
    for p in perversities(&x.poset) {
        assert_eq!(
            cx.cohomology_all(&p, Ring::Z, None).unwrap(),
            cq.cohomology_all(&p, Ring::Z, None).unwrap()
        );
    }
}

#[test]
fn pullbacks_compose() {
    for (name, x) in suite::all() {
        let cyl = Cylinder::new(&x);
        let y = cyl.total();
        let cx = GlobalComplex::new(&x, 3).unwrap();
        let cy = GlobalComplex::new(y, 3).unwrap();
        for end in 0..2 {
            let comp = cyl.iota[end].compose(&cyl.pi, y, &x);
            for k in 0..=3 {
                let i = induced_matrix(&x, &cx, y, &cy, &cyl.iota[end], k).unwrap();
                let p = induced_matrix(y, &cy, &x, &cx, &cyl.pi, k).unwrap();
                let c = induced_matrix(&x, &cx, &x, &cx, &comp, k).unwrap();
                assert_eq!(i.mul(&p), c, "{name}");
                assert_eq!(c, SparseMatrix::identity(cx.rank(k)), "{name}");
            }
        }
    }
}

#[test]
fn perversity_contract_is_checked() {
    let x = suite::butterfly();
    let id = SimplicialMap::identity(&x);
    let f = MonotoneMap::identity(&x.poset);
    let one = Perversity::constant(&x.poset, ExtInt::Fin(1));
    let zero = Perversity::zero(&x.poset);
    assert!(induced_map(&x, &x, &id, &f, &one, &zero, 3).is_ok());
    assert!(matches!(
        induced_map(&x, &x, &id, &f, &zero, &one, 3),
        Err(Error::PerversityContract(s)) if s == "0"
    ));
}

#[test]
fn merging_strata_is_unsupported() {
    // the point cone mapped onto a plain edge, both strata sent to the point
    let x = suite::point_cone();
    let y = plain_simplex(1);
    let f = SimplicialMap {
        images: (0..x.len()).map(|c| y.cell_simplex(c)).collect(),
    };
    f.check(&x, &y, &[0, 0]).unwrap();
    let cx = GlobalComplex::new(&x, 2).unwrap();
    let cy = GlobalComplex::new(&y, 2).unwrap();
    assert!(matches!(induced_matrix(&x, &cx, &y, &cy, &f, 0), Err(Error::Unsupported(_))));
}

#[test]
fn cup_product_with_unit() {
    for (name, x) in suite::all() {
        let c = GlobalComplex::new(&x, 3).unwrap();
        let unit = vec![1i64; c.rank(0)];
        for k in 0..=2 {
            for g in 0..c.rank(k) {
                let mut a = vec![0i64; c.rank(k)];
                a[g] = 1;
                assert_eq!(c.cup(&x, 0, &unit, k, &a).unwrap(), a, "{name}");
            }
        }
    }
}

#[test]
fn euler_characteristic_of_generators() {
    // with every generator allowed the complex computes the cohomology of
    // the regular part, blown up
    for (name, x) in suite::all() {
        let c = GlobalComplex::new(&x, 6).unwrap();
        let top = x.dim().unwrap() + x.poset.len();
        if top >= 6 {
            continue;
        }
        let chi: i64 = (0..6).map(|k| if k % 2 == 0 { c.rank(k) as i64 } else { -(c.rank(k) as i64) }).sum();
        let p = Perversity::infinite(&x.poset);
        let h = c.cohomology_all(&p, Ring::Q, None).unwrap();
        let chi_h: i64 = h.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
        assert_eq!(chi, chi_h, "{name}");
    }
}
