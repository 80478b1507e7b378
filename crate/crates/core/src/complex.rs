//! Global blown-up cochains of a presentation.
//!
//! A compatible family of local cochains is determined by its values on the
//! full faces `(ρ, ε)` of the blow-ups of regular nondegenerate cells `ρ`,
//! where `ε` picks cone vertices on the singular blocks. These pairs are the
//! generators used here; every other local coordinate is the value at the
//! generator of the face it spans, or zero when that face is degenerate.

use std::collections::HashMap;

use crate::blowup::{for_each_split, BasisElement, Factor};
use crate::error::{Error, Result};
use crate::linalg::{columns_to_matrix, invariant_factors, kernel_z, CohomologyGroup, Ring, SparseMatrix};
use crate::poset::{pullback_perversity, Block, ExtInt, MonotoneMap, Perversity};
use crate::sset::{plain_simplex, product, Presentation, Product, SimplicialMap, Simplex};

/// Default cap on the number of generators in one degree.
pub const GENERATOR_CAP: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub cell: usize,
    /// Bit `i` set when the cone vertex of block `i` is used.
    pub eps: u32,
    pub degree: usize,
}

#[derive(Debug, Clone)]
pub struct GlobalComplex {
    pub kmax: usize,
    pub npos: usize,
    pub gens: Vec<Vec<Generator>>,
    index: HashMap<(usize, u32), usize>,
    /// `diff[k]` maps degree `k` to degree `k+1`, for `k < kmax`.
    pub diff: Vec<SparseMatrix>,
    blocks: Vec<Vec<Block>>,
}

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn remove_bit(eps: u32, i: usize) -> u32 {
    let low = eps & ((1u32 << i) - 1);
    let high = (eps >> (i + 1)) << i;
    low | high
}

impl GlobalComplex {
    pub fn new(x: &Presentation, kmax: usize) -> Result<GlobalComplex> {
        Self::with_cap(x, kmax, GENERATOR_CAP)
    }

    pub fn with_cap(x: &Presentation, kmax: usize, cap: usize) -> Result<GlobalComplex> {
        let blocks: Vec<Vec<Block>> = (0..x.len())
            .map(|i| if x.is_regular(i) { x.blocks(i) } else { Vec::new() })
            .collect();
        let mut gens: Vec<Vec<Generator>> = vec![Vec::new(); kmax + 1];
        for (cell, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                continue;
            }
            let l = b.len() - 1;
            if l > 31 {
                return Err(Error::TooLarge("more than 31 singular blocks".into()));
            }
            let dim = x.cells[cell].dim;
            for eps in 0..(1u32 << l) {
                let degree = dim - l + eps.count_ones() as usize;
                if degree <= kmax {
                    gens[degree].push(Generator { cell, eps, degree });
                }
            }
        }
        for (k, g) in gens.iter().enumerate() {
            if g.len() > cap {
                return Err(Error::TooLarge(format!(
                    "{} generators in degree {k} exceed the cap {cap}",
                    g.len()
                )));
            }
        }
        let mut index = HashMap::new();
        for g in gens.iter() {
            for (i, gen) in g.iter().enumerate() {
                index.insert((gen.cell, gen.eps), i);
            }
        }
        let mut c = GlobalComplex {
            kmax,
            npos: x.poset.len(),
            gens,
            index,
            diff: Vec::new(),
            blocks,
        };
        c.diff = (0..kmax).map(|k| c.build_diff(x, k)).collect();
        Ok(c)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.gens.get(k).map_or(0, |g| g.len())
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.kmax).map(|k| self.rank(k)).collect()
    }

    pub fn position(&self, cell: usize, eps: u32) -> Option<usize> {
        self.index.get(&(cell, eps)).copied()
    }

    pub fn cell_blocks(&self, cell: usize) -> &[Block] {
        &self.blocks[cell]
    }

    /// Target row `t` collects a cone term per cone vertex in use and a face
    /// term per removable vertex.
    fn build_diff(&self, x: &Presentation, k: usize) -> SparseMatrix {
        let mut trip = Vec::new();
        for (ti, t) in self.gens[k + 1].iter().enumerate() {
            let b = &self.blocks[t.cell];
            let l = b.len() - 1;
            let faces = &x.cells[t.cell].faces;
            let mut pre = 0usize;
            let mut off = 0usize;
            for (i, blk) in b.iter().enumerate() {
                let cone = i < l && t.eps >> i & 1 == 1;
                if cone {
                    let src = self.index[&(t.cell, t.eps & !(1 << i))];
                    trip.push((ti, src, sign(pre + blk.q + 1)));
                }
                if cone || blk.q >= 1 {
                    for j in 0..=blk.q {
                        let f = &faces[off + j];
                        if f.is_degenerate() {
                            continue;
                        }
                        let eps = if blk.q == 0 { remove_bit(t.eps, i) } else { t.eps };
                        let src = self.index[&(f.cell, eps)];
                        trip.push((ti, src, sign(pre + j)));
                    }
                }
                pre += blk.q + cone as usize;
                off += blk.q + 1;
            }
        }
        SparseMatrix::from_triplets(self.rank(k + 1), self.rank(k), trip)
    }

    /// Perverse degree of a generator, per poset element.
    pub fn pdeg(&self, g: &Generator) -> Vec<ExtInt> {
        let b = &self.blocks[g.cell];
        let l = b.len() - 1;
        let mut v = vec![ExtInt::NegInf; self.npos];
        let mut tail = 0i64;
        for i in (0..=l).rev() {
            v[b[i].elem] = if i == l {
                ExtInt::Fin(0)
            } else if g.eps >> i & 1 == 1 {
                ExtInt::NegInf
            } else {
                ExtInt::Fin(tail)
            };
            tail += b[i].q as i64 + if i < l { (g.eps >> i & 1) as i64 } else { 0 };
        }
        v
    }

    pub fn is_allowable(&self, g: &Generator, p: &Perversity) -> bool {
        self.pdeg(g).iter().zip(p.values()).all(|(a, b)| a <= b)
    }

    /// Perverse degree of a cochain given in generator coordinates.
    pub fn cochain_pdeg(&self, k: usize, x: &[i64]) -> Vec<ExtInt> {
        let mut v = vec![ExtInt::NegInf; self.npos];
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                for (a, b) in v.iter_mut().zip(self.pdeg(&self.gens[k][i])) {
                    *a = (*a).max(b);
                }
            }
        }
        v
    }

    fn split(&self, k: usize, p: &Perversity, active: &dyn Fn(usize) -> bool) -> (Vec<usize>, Vec<usize>) {
        let mut a = Vec::new();
        let mut n = Vec::new();
        for (i, g) in self.gens[k].iter().enumerate() {
            if !active(g.cell) {
                continue;
            }
            if self.is_allowable(g, p) {
                a.push(i);
            } else {
                n.push(i);
            }
        }
        (a, n)
    }

    /// Intersection cohomology in degree `k < kmax`. Generators on cells
    /// flagged in `exclude` are dropped (relative cohomology).
    pub fn cohomology(&self, p: &Perversity, ring: Ring, k: usize, exclude: Option<&[bool]>) -> Result<CohomologyGroup> {
        if k >= self.kmax {
            return Err(Error::Truncation {
                degree: k,
                kmax: self.kmax,
            });
        }
        let active = |c: usize| exclude.map_or(true, |e| !e[c]);
        let (a_k, n_k) = self.split(k, p, &active);
        let (a_n, _) = self.split(k + 1, p, &active);
        let all_next: Vec<usize> = {
            let (a, n) = self.split(k + 1, p, &active);
            let mut v = a;
            v.extend(n);
            v.sort_unstable();
            v
        };
        let _ = a_n;
        let d_out = self.diff[k].select_columns(&a_k).select_rows(&all_next);
        if k == 0 {
            let r = d_out.rank(ring);
            return Ok(CohomologyGroup::free(ring, a_k.len() - r));
        }
        let (a_p, _) = self.split(k - 1, p, &active);
        let d_in = self.diff[k - 1].select_columns(&a_p);
        let into_a = d_in.select_rows(&a_k);
        let into_n = d_in.select_rows(&n_k);
        match ring {
            Ring::Fp(_) | Ring::Q => {
                let r1 = d_out.rank(ring);
                let mut all_k = a_k.clone();
                all_k.extend(&n_k);
                all_k.sort_unstable();
                let r2 = d_in.select_rows(&all_k).rank(ring);
                let r3 = into_n.rank(ring);
                Ok(CohomologyGroup::free(ring, a_k.len() + r3 - r1 - r2))
            }
            Ring::Z => {
                let kb = kernel_z(&into_n);
                let kmat = columns_to_matrix(a_p.len(), &kb);
                let bmat = into_a.mul(&kmat);
                let inv = invariant_factors(&bmat);
                let free = a_k.len() - invariant_factors(&d_out).len() - inv.len();
                Ok(CohomologyGroup {
                    ring,
                    free_rank: free,
                    torsion: inv.into_iter().filter(|d| *d != num_bigint::BigInt::from(1)).collect(),
                })
            }
        }
    }

    /// Degrees `0..kmax`.
    pub fn cohomology_all(&self, p: &Perversity, ring: Ring, exclude: Option<&[bool]>) -> Result<Vec<CohomologyGroup>> {
        (0..self.kmax).map(|k| self.cohomology(p, ring, k, exclude)).collect()
    }

    /// Basis of the intersection cochains in degree `k < kmax`, in generator
    /// coordinates (saturated over Z).
    pub fn intersection_basis(&self, p: &Perversity, k: usize) -> Result<Vec<Vec<i64>>> {
        if k >= self.kmax {
            return Err(Error::Truncation {
                degree: k,
                kmax: self.kmax,
            });
        }
        let all = |_: usize| true;
        let (a_k, _) = self.split(k, p, &all);
        let (_, n_n) = self.split(k + 1, p, &all);
        let c = self.diff[k].select_columns(&a_k).select_rows(&n_n);
        Ok(kernel_z(&c)
            .into_iter()
            .map(|v| {
                let mut out = vec![0i64; self.rank(k)];
                for (i, x) in v {
                    out[a_k[i]] = i64::try_from(&x).expect("kernel entry exceeds i64");
                }
                out
            })
            .collect())
    }

    /// Generator reached by the blow-up face of `cell` with the given
    /// factors (vertex sets local to each block). `None` when the face spans
    /// a degenerate simplex, which carries no value.
    pub fn support(&self, x: &Presentation, cell: usize, factors: &[Factor]) -> Option<Generator> {
        let b = &self.blocks[cell];
        let l = b.len() - 1;
        let mut verts = Vec::new();
        let mut eps = 0u32;
        let mut kept = 0usize;
        let mut off = 0usize;
        for (i, f) in factors.iter().enumerate() {
            if f.verts == 0 {
                debug_assert!(f.cone && i < l);
            } else {
                for v in f.vertices() {
                    verts.push(off + v);
                }
                if i < l && f.cone {
                    eps |= 1 << kept;
                }
                kept += 1;
            }
            off += b[i].q + 1;
        }
        let s = x.normalize_simplex(cell, &verts);
        if !s.is_nondegenerate() {
            return None;
        }
        let pos = self.index.get(&(s.cell, eps))?;
        let tb = &self.blocks[s.cell];
        let degree = x.cells[s.cell].dim + 1 - tb.len() + eps.count_ones() as usize;
        debug_assert_eq!(self.gens[degree][*pos].cell, s.cell);
        Some(Generator {
            cell: s.cell,
            eps,
            degree,
        })
    }

    fn full_factors(&self, g: &Generator) -> Vec<Factor> {
        let b = &self.blocks[g.cell];
        let l = b.len() - 1;
        b.iter()
            .enumerate()
            .map(|(i, blk)| Factor::full(blk.q, i < l && g.eps >> i & 1 == 1))
            .collect()
    }

    /// Local coordinates of a global cochain on the blow-up of `cell`.
    pub fn local_cochain(&self, x: &Presentation, k: usize, omega: &[i64], cell: usize, basis: &[BasisElement]) -> Vec<i64> {
        basis
            .iter()
            .map(|e| match self.support(x, cell, &e.factors) {
                Some(g) if g.degree == k => omega[self.index[&(g.cell, g.eps)]],
                _ => 0,
            })
            .collect()
    }

    /// Cup product of global cochains of degrees `a` and `b`.
    pub fn cup(&self, x: &Presentation, a: usize, alpha: &[i64], b: usize, beta: &[i64]) -> Result<Vec<i64>> {
        let k = a + b;
        if k > self.kmax {
            return Err(Error::Truncation {
                degree: k,
                kmax: self.kmax,
            });
        }
        let mut out = vec![0i64; self.rank(k)];
        for (ti, g) in self.gens[k].iter().enumerate() {
            let factors = self.full_factors(g);
            let lists: Vec<Vec<Option<usize>>> = factors
                .iter()
                .map(|f| {
                    let mut v: Vec<Option<usize>> = f.vertices().into_iter().map(Some).collect();
                    if f.cone {
                        v.push(None);
                    }
                    v
                })
                .collect();
            let mut total = 0i64;
            for_each_split(&lists, a, &mut |split| {
                let mut front = Vec::with_capacity(lists.len());
                let mut back = Vec::with_capacity(lists.len());
                for (l, &r) in lists.iter().zip(split) {
                    front.push(to_factor(&l[..=r]));
                    back.push(to_factor(&l[r..]));
                }
                let (Some(fg), Some(bg)) = (self.support(x, g.cell, &front), self.support(x, g.cell, &back)) else {
                    return;
                };
                let xv = alpha[self.index[&(fg.cell, fg.eps)]];
                let yv = beta[self.index[&(bg.cell, bg.eps)]];
                if xv == 0 || yv == 0 {
                    return;
                }
                let mut sg = 0usize;
                for i in 0..lists.len() {
                    for j in 0..i {
                        sg += split[i] * (lists[j].len() - 1 - split[j]);
                    }
                }
                total += sign(sg) * xv * yv;
            });
            out[ti] = total;
        }
        Ok(out)
    }
}

fn to_factor(list: &[Option<usize>]) -> Factor {
    let mut f = Factor {
        verts: 0,
        cone: false,
    };
    for v in list {
        match v {
            Some(i) => f.verts |= 1 << i,
            None => f.cone = true,
        }
    }
    f
}

/// Errors unless `p >= f^* q`, naming the first failing stratum.
pub fn check_perversity_contract(f: &MonotoneMap, p: &Perversity, q: &Perversity) -> Result<()> {
    let pq = pullback_perversity(f, q)?;
    for s in 0..f.source.len() {
        if p.at(s) < pq.at(s) {
            return Err(Error::PerversityContract(f.source.label(s).to_string()));
        }
    }
    Ok(())
}

/// Matrix of `f^*` in degree `k`, from generator coordinates of the target
/// complex to those of the source complex. Maps that merge two blocks of a
/// chain are rejected.
pub fn induced_matrix(
    x: &Presentation,
    cx: &GlobalComplex,
    y: &Presentation,
    cy: &GlobalComplex,
    f: &SimplicialMap,
    k: usize,
) -> Result<SparseMatrix> {
    let mut t = Vec::new();
    for (r, g) in cx.gens[k].iter().enumerate() {
        let im = &f.images[g.cell];
        if !im.is_nondegenerate() || !y.is_regular(im.cell) {
            continue;
        }
        if cy.blocks[im.cell].len() != cx.blocks[g.cell].len() {
            return Err(Error::Unsupported(format!(
                "map merges strata along cell `{}`",
                x.cells[g.cell].id
            )));
        }
        if let Some(c) = cy.position(im.cell, g.eps) {
            t.push((r, c, 1));
        }
    }
    Ok(SparseMatrix::from_triplets(cx.rank(k), cy.rank(k), t))
}

/// `f^*` in every degree up to `min(kmax)`, after the perversity check.
pub fn induced_map(
    x: &Presentation,
    y: &Presentation,
    f: &SimplicialMap,
    fmap: &MonotoneMap,
    p: &Perversity,
    q: &Perversity,
    kmax: usize,
) -> Result<Vec<SparseMatrix>> {
    check_perversity_contract(fmap, p, q)?;
    f.check(x, y, &fmap.map)?;
    let cx = GlobalComplex::new(x, kmax)?;
    let cy = GlobalComplex::new(y, kmax)?;
    (0..=kmax).map(|k| induced_matrix(x, &cx, y, &cy, f, k)).collect()
}

/// `X ⊗ Δ[1]` with the structure maps used by the prism arguments.
pub struct Cylinder {
    pub base: Presentation,
    pub prod: Product,
    pub interval: Presentation,
    pub iota: [SimplicialMap; 2],
    pub pi: SimplicialMap,
    pub psi: [SimplicialMap; 2],
}

impl Cylinder {
    pub fn new(x: &Presentation) -> Cylinder {
        let interval = plain_simplex(1);
        let prod = product(x, &interval);
        let top = interval.len() - 1;
        let y = &prod.pres;
        let iota = [0usize, 1].map(|j| SimplicialMap {
            images: (0..x.len())
                .map(|c| {
                    let pairs: Vec<(usize, usize)> = (0..=x.cells[c].dim).map(|v| (v, j)).collect();
                    prod.simplex_of(x, &interval, c, top, &pairs)
                })
                .collect(),
        });
        let pi = SimplicialMap {
            images: prod
                .origin
                .iter()
                .map(|pc| {
                    let a: Vec<usize> = pc.path.iter().map(|p| p.0).collect();
                    x.normalize_simplex(pc.x, &a)
                })
                .collect(),
        };
        let psi = [0usize, 1].map(|j| SimplicialMap {
            images: prod
                .origin
                .iter()
                .map(|pc| {
                    let pairs: Vec<(usize, usize)> = pc.path.iter().map(|p| (p.0, j)).collect();
                    prod.simplex_of(x, &interval, pc.x, top, &pairs)
                })
                .collect(),
        });
        let _ = y;
        Cylinder {
            base: x.clone(),
            prod,
            interval,
            iota,
            pi,
            psi,
        }
    }

    pub fn total(&self) -> &Presentation {
        &self.prod.pres
    }

    /// Cells over the two ends `X ⊗ ∂Δ[1]`.
    pub fn ends(&self) -> Vec<bool> {
        self.prod
            .origin
            .iter()
            .map(|pc| self.interval.cells[pc.k].dim == 0)
            .collect()
    }

    fn abs_b(&self, kcell: usize, local: usize) -> usize {
        let id = &self.interval.cells[kcell].id;
        (id.as_bytes()[local] - b'0') as usize
    }

    /// Vertices of a product cell as (vertex of its x-cell, absolute end).
    pub fn grid(&self, cell: usize) -> (usize, Vec<(usize, usize)>) {
        let pc = &self.prod.origin[cell];
        (pc.x, pc.path.iter().map(|&(a, b)| (a, self.abs_b(pc.k, b))).collect())
    }

    fn simplex(&self, xc: usize, pairs: &[(usize, usize)]) -> Simplex {
        let top = self.interval.len() - 1;
        self.prod.simplex_of(&self.base, &self.interval, xc, top, pairs)
    }

    /// `Φ(ω0, ω1)` as a matrix `[Φ0 | Φ1]` from two copies of the base
    /// complex in degree `k` to the cylinder complex.
    pub fn section_phi(&self, cb: &GlobalComplex, cy: &GlobalComplex, k: usize) -> Result<(SparseMatrix, SparseMatrix)> {
        let pi = induced_matrix(self.total(), cy, &self.base, cb, &self.pi, k)?;
        let ends: Vec<usize> = cy.gens[k].iter().map(|g| self.grid(g.cell).1[0].1).collect();
        let mut parts = [Vec::new(), Vec::new()];
        for (c, col) in pi.columns.iter().enumerate() {
            for &(r, v) in col {
                parts[ends[r]].push((r, c, v));
            }
        }
        let [p0, p1] = parts;
        Ok((
            SparseMatrix::from_triplets(cy.rank(k), cb.rank(k), p0),
            SparseMatrix::from_triplets(cy.rank(k), cb.rank(k), p1),
        ))
    }

    /// The degree `-1` map `G̃_k : C^k -> C^{k-1}` on the cylinder complex with
    /// `δG̃ + G̃δ = ψ_j^* - id`.
    pub fn prism_homotopy(&self, cy: &GlobalComplex, j: usize, k: usize) -> Result<SparseMatrix> {
        if k == 0 {
            return Ok(SparseMatrix::zeros(0, cy.rank(0)));
        }
        let y = self.total();
        let mut trip = Vec::new();
        for (r, g) in cy.gens[k - 1].iter().enumerate() {
            let (xc, grid) = self.grid(g.cell);
            let blocks = cy.cell_blocks(g.cell);
            let l = blocks.len() - 1;
            let mut segs: Vec<Vec<(usize, usize)>> = Vec::new();
            let mut off = 0;
            for b in blocks {
                segs.push(grid[off..off + b.q + 1].to_vec());
                off += b.q + 1;
            }
            let cone = |i: usize| i < l && g.eps >> i & 1 == 1;
            let mut pre = 0usize;
            for jb in 0..=l {
                let mut fixed: Vec<Option<Vec<(usize, usize)>>> = Vec::new();
                for (i, s) in segs.iter().enumerate() {
                    let moved = (j == 0 && i < jb) || (j == 1 && i > jb);
                    if moved {
                        let m: Vec<(usize, usize)> = s.iter().map(|&(a, _)| (a, j)).collect();
                        if m.windows(2).any(|w| w[0] == w[1]) {
                            fixed.push(None);
                        } else {
                            fixed.push(Some(m));
                        }
                    } else {
                        fixed.push(Some(s.clone()));
                    }
                }
                if fixed.iter().any(|f| f.is_none()) {
                    pre += segs[jb].len() - 1 + cone(jb) as usize;
                    continue;
                }
                let tau = &segs[jb];
                let d = tau.len() - 1;
                for i in 0..=d {
                    let mut pr: Vec<(usize, usize)> = Vec::with_capacity(d + 2);
                    for (t, &(a, b)) in tau.iter().enumerate() {
                        if t <= i {
                            pr.push((a, if j == 0 { b.min(0) } else { b.max(0) }));
                        }
                        if t >= i {
                            pr.push((a, if j == 0 { b.min(1) } else { b.max(1) }));
                        }
                    }
                    if pr.windows(2).any(|w| w[0] == w[1]) {
                        continue;
                    }
                    let mut pairs = Vec::new();
                    for (bi, f) in fixed.iter().enumerate() {
                        if bi == jb {
                            pairs.extend(pr.iter().copied());
                        } else {
                            pairs.extend(f.as_ref().unwrap().iter().copied());
                        }
                    }
                    let s = self.simplex(xc, &pairs);
                    if !s.is_nondegenerate() || !y.is_regular(s.cell) {
                        continue;
                    }
                    let Some(c) = cy.position(s.cell, g.eps) else { continue };
                    let hs = if j == 0 { -1 } else { 1 };
                    trip.push((r, c, hs * sign(pre + i)));
                }
                pre += segs[jb].len() - 1 + cone(jb) as usize;
            }
        }
        Ok(SparseMatrix::from_triplets(cy.rank(k - 1), cy.rank(k), trip))
    }
}

/// Relative complex of a pair `(X, A)`: cochains vanishing on `A`.
pub struct RelativeComplex {
    pub complex: GlobalComplex,
    pub exclude: Vec<bool>,
}

impl RelativeComplex {
    pub fn new(x: &Presentation, a: &[usize], kmax: usize) -> Result<RelativeComplex> {
        let closed = x.closure(a);
        if closed.len() != {
            let mut s = a.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        } {
            return Err(Error::Presentation("subcomplex is not closed under faces".into()));
        }
        let mut exclude = vec![false; x.len()];
        for &c in a {
            exclude[c] = true;
        }
        Ok(RelativeComplex {
            complex: GlobalComplex::new(x, kmax)?,
            exclude,
        })
    }

    pub fn cohomology(&self, p: &Perversity, ring: Ring, k: usize) -> Result<CohomologyGroup> {
        self.complex.cohomology(p, ring, k, Some(&self.exclude))
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.complex.kmax)
            .map(|k| self.complex.gens[k].iter().filter(|g| !self.exclude[g.cell]).count())
            .collect()
    }
}

/// Intersection cohomology `H^k` for `k` in `0..=kmax_report`.
pub fn intersection_cohomology(x: &Presentation, p: &Perversity, ring: Ring, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<CohomologyGroup>> {
    let top = *degrees.end();
    let c = GlobalComplex::new(x, top + 1)?;
    degrees.map(|k| c.cohomology(p, ring, k, None)).collect()
}
