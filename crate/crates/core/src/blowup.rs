//! The blown-up cochain complex of one regular simplex
//! `cΔ[q_0] × ... × cΔ[q_{l-1}] × Δ[q_l]`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{kernel_dense_mod_p, kernel_z, to_mod, Ring, SparseMatrix};
use crate::poset::{join_decomposition, Block, ExtInt, Perversity, Poset};

/// One factor `(F, ε)`: a vertex set of `Δ[q]` as a bitmask, and whether the
/// cone vertex is used. `(∅, 1)` is the apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub verts: u64,
    pub cone: bool,
}

impl Factor {
    pub fn apex() -> Factor {
        Factor {
            verts: 0,
            cone: true,
        }
    }

    pub fn full(q: usize, cone: bool) -> Factor {
        Factor {
            verts: (1u64 << (q + 1)) - 1,
            cone,
        }
    }

    pub fn size(&self) -> usize {
        self.verts.count_ones() as usize + self.cone as usize
    }

    /// Dimension of the face; `(∅,0)` is not a face.
    pub fn degree(&self) -> usize {
        self.size() - 1
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.verts >> i & 1 == 1).collect()
    }

    fn key(&self) -> (bool, Vec<usize>) {
        (self.cone, self.vertices())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub factors: Vec<Factor>,
}

impl BasisElement {
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).sum()
    }

    /// Perverse degree along block `i`: `-inf` if the cone vertex of that
    /// block is used, else the dimension of the later factors. The last block
    /// always has perverse degree 0.
    pub fn block_pdeg(&self, i: usize) -> ExtInt {
        let l = self.factors.len() - 1;
        if i == l {
            return ExtInt::Fin(0);
        }
        if self.factors[i].cone {
            return ExtInt::NegInf;
        }
        ExtInt::Fin(self.factors[i + 1..].iter().map(|f| f.degree() as i64).sum())
    }

    fn sort_key(&self) -> Vec<(bool, Vec<usize>)> {
        self.factors.iter().map(|f| f.key()).collect()
    }

    pub fn describe(&self) -> String {
        let l = self.factors.len() - 1;
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let vs: String = f.vertices().iter().map(|v| format!("e{v}")).collect();
                let vs = if vs.is_empty() { "∅".to_string() } else { vs };
                if i < l {
                    format!("({},{})", vs, f.cone as u8)
                } else {
                    vs
                }
            })
            .collect::<Vec<_>>()
            .join("x")
    }
}

#[derive(Debug, Clone)]
pub struct LocalComplex {
    pub blocks: Vec<Block>,
    /// Basis per degree, canonically ordered.
    pub basis: Vec<Vec<BasisElement>>,
    index: HashMap<BasisElement, (usize, usize)>,
    /// `diff[k]` maps degree `k` to degree `k+1`.
    pub diff: Vec<SparseMatrix>,
}

fn factor_choices(q: usize, cone: bool) -> Vec<Factor> {
    let mut out = Vec::new();
    for verts in 0..(1u64 << (q + 1)) {
        for c in [false, true] {
            if c && !cone {
                continue;
            }
            if verts == 0 && !c {
                continue;
            }
            out.push(Factor { verts, cone: c });
        }
    }
    out
}

impl LocalComplex {
    /// Complex of a regular grouped chain.
    pub fn new(blocks: &[Block]) -> LocalComplex {
        assert!(!blocks.is_empty(), "empty chain");
        let l = blocks.len() - 1;
        let choices: Vec<Vec<Factor>> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| factor_choices(b.q, i < l))
            .collect();
        let top: usize = blocks[..l].iter().map(|b| b.q + 1).sum::<usize>() + blocks[l].q;
        let mut basis: Vec<Vec<BasisElement>> = vec![Vec::new(); top + 1];
        let mut cur = vec![0usize; blocks.len()];
        loop {
            let factors: Vec<Factor> = cur.iter().enumerate().map(|(i, &c)| choices[i][c]).collect();
            let e = BasisElement { factors };
            basis[e.degree()].push(e);
            let mut k = 0;
            loop {
                if k == cur.len() {
                    break;
                }
                cur[k] += 1;
                if cur[k] < choices[k].len() {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == cur.len() {
                break;
            }
        }
        for b in basis.iter_mut() {
            b.sort_by_key(|e| e.sort_key());
        }
        let mut index = HashMap::new();
        for (d, b) in basis.iter().enumerate() {
            for (i, e) in b.iter().enumerate() {
                index.insert(e.clone(), (d, i));
            }
        }
        let mut lc = LocalComplex {
            blocks: blocks.to_vec(),
            basis,
            index,
            diff: Vec::new(),
        };
        lc.diff = (0..top).map(|k| lc.build_diff(k)).collect();
        lc
    }

    pub fn from_chain(poset: &Poset, chain: &[usize]) -> Result<LocalComplex> {
        if !poset.is_regular(chain) {
            return Err(Error::Unsupported("local complex of a non-regular chain".into()));
        }
        Ok(LocalComplex::new(&join_decomposition(chain)))
    }

    pub fn top_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, |b| b.len())
    }

    pub fn position(&self, e: &BasisElement) -> Option<(usize, usize)> {
        self.index.get(e).copied()
    }

    /// Cofaces of a basis element with their signs.
    pub fn coboundary_terms(&self, e: &BasisElement) -> Vec<(BasisElement, i64)> {
        let l = self.blocks.len() - 1;
        let mut out = Vec::new();
        let mut pre = 0usize;
        for (i, f) in e.factors.iter().enumerate() {
            let q = self.blocks[i].q;
            for w in 0..=q {
                if f.verts >> w & 1 == 1 {
                    continue;
                }
                let pos = (f.verts & ((1u64 << w) - 1)).count_ones() as usize;
                let mut g = e.clone();
                g.factors[i].verts |= 1 << w;
                out.push((g, if (pre + pos) % 2 == 0 { 1 } else { -1 }));
            }
            if i < l && !f.cone {
                let mut g = e.clone();
                g.factors[i].cone = true;
                let pos = f.size();
                out.push((g, if (pre + pos) % 2 == 0 { 1 } else { -1 }));
            }
            pre += f.degree();
        }
        out
    }

    fn build_diff(&self, k: usize) -> SparseMatrix {
        let mut t = Vec::new();
        for (j, e) in self.basis[k].iter().enumerate() {
            for (g, s) in self.coboundary_terms(e) {
                let (d, i) = self.index[&g];
                debug_assert_eq!(d, k + 1);
                t.push((i, j, s));
            }
        }
        SparseMatrix::from_triplets(self.dim(k + 1), self.dim(k), t)
    }

    /// `δx` for a homogeneous cochain of degree `k`.
    pub fn differential(&self, k: usize, x: &[i64]) -> Vec<i64> {
        if k >= self.diff.len() {
            return Vec::new();
        }
        self.diff[k].mul_vec(x)
    }

    /// Perverse degree per poset element.
    pub fn pdeg(&self, e: &BasisElement, npos: usize) -> Vec<ExtInt> {
        let mut v = vec![ExtInt::NegInf; npos];
        for (i, b) in self.blocks.iter().enumerate() {
            v[b.elem] = e.block_pdeg(i);
        }
        v
    }

    pub fn is_allowable(&self, e: &BasisElement, p: &Perversity) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(i, b)| e.block_pdeg(i) <= p.at(b.elem))
    }

    /// Maximum over the support, `-inf` for the zero cochain.
    pub fn cochain_pdeg(&self, k: usize, x: &[i64], npos: usize) -> Vec<ExtInt> {
        let mut v = vec![ExtInt::NegInf; npos];
        for (j, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d = self.pdeg(&self.basis[k][j], npos);
            for (a, b) in v.iter_mut().zip(d) {
                *a = (*a).max(b);
            }
        }
        v
    }

    fn allowable_split(&self, k: usize, p: &Perversity) -> (Vec<usize>, Vec<usize>) {
        let mut a = Vec::new();
        let mut n = Vec::new();
        for (j, e) in self.basis.get(k).into_iter().flatten().enumerate() {
            if self.is_allowable(e, p) {
                a.push(j);
            } else {
                n.push(j);
            }
        }
        (a, n)
    }

    /// Basis of `{ω allowable : δω allowable}` in degree `k`, as vectors in
    /// the full degree-`k` basis. Over Z the basis spans a saturated lattice.
    pub fn intersection_basis(&self, p: &Perversity, k: usize, ring: Ring) -> Vec<Vec<i64>> {
        let n = self.dim(k);
        if n == 0 {
            return Vec::new();
        }
        let (allow, _) = self.allowable_split(k, p);
        let (_, bad_next) = self.allowable_split(k + 1, p);
        let constraint = if k < self.diff.len() {
            self.diff[k].select_columns(&allow).select_rows(&bad_next)
        } else {
            SparseMatrix::zeros(0, allow.len())
        };
        let embed = |coords: Vec<i64>| -> Vec<i64> {
            let mut v = vec![0i64; n];
            for (t, &j) in allow.iter().enumerate() {
                v[j] = coords[t];
            }
            v
        };
        match ring {
            Ring::Fp(q) => kernel_dense_mod_p(&dense_mod(&constraint, q), allow.len(), q)
                .into_iter()
                .map(|v| embed(v.into_iter().map(|x| x as i64).collect()))
                .collect(),
            Ring::Z | Ring::Q => kernel_z(&constraint)
                .into_iter()
                .map(|v| {
                    let mut c = vec![0i64; allow.len()];
                    for (i, x) in v {
                        c[i] = i64::try_from(&x).expect("kernel entry exceeds i64");
                    }
                    embed(c)
                })
                .collect(),
        }
    }

    /// All allowable degree-`k` cocycles over `F_q`, enumerated.
    pub fn cocycles_mod_p(&self, p: &Perversity, k: usize, q: u64, cap: usize) -> Result<Vec<Vec<u64>>> {
        let n = self.dim(k);
        if n == 0 {
            return Ok(vec![Vec::new()]);
        }
        let (allow, _) = self.allowable_split(k, p);
        let d = if k < self.diff.len() {
            self.diff[k].select_columns(&allow)
        } else {
            SparseMatrix::zeros(0, allow.len())
        };
        let kb = kernel_dense_mod_p(&dense_mod(&d, q), allow.len(), q);
        let total = (q as f64).powi(kb.len() as i32);
        if total > cap as f64 {
            return Err(Error::TooLarge(format!(
                "{} cocycles in one local complex exceed the cap {cap}",
                total
            )));
        }
        let mut out = Vec::new();
        let mut coef = vec![0u64; kb.len()];
        loop {
            let mut v = vec![0u64; n];
            for (c, b) in coef.iter().zip(&kb) {
                if *c == 0 {
                    continue;
                }
                for (t, &j) in allow.iter().enumerate() {
                    v[j] = (v[j] + c * b[t]) % q;
                }
            }
            out.push(v);
            let mut i = 0;
            while i < coef.len() {
                coef[i] += 1;
                if coef[i] < q {
                    break;
                }
                coef[i] = 0;
                i += 1;
            }
            if i == coef.len() {
                break;
            }
        }
        out.sort();
        Ok(out)
    }

    /// Unit: the sum of all vertices.
    pub fn unit(&self) -> Vec<i64> {
        vec![1; self.dim(0)]
    }

    fn vertex_list(f: &Factor) -> Vec<Option<usize>> {
        let mut v: Vec<Option<usize>> = f.vertices().into_iter().map(Some).collect();
        if f.cone {
            v.push(None);
        }
        v
    }

    fn factor_from_list(list: &[Option<usize>]) -> Factor {
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

    /// Factorwise Alexander-Whitney product with Koszul interchange signs.
    pub fn cup(&self, a: usize, x: &[i64], b: usize, y: &[i64]) -> Vec<i64> {
        let k = a + b;
        let n = self.dim(k);
        let mut out = vec![0i64; n];
        if n == 0 {
            return out;
        }
        for (ti, t) in self.basis[k].iter().enumerate() {
            let lists: Vec<Vec<Option<usize>>> = t.factors.iter().map(Self::vertex_list).collect();
            let mut total = 0i64;
            for_each_split(&lists, a, &mut |split| {
                let mut front = Vec::with_capacity(lists.len());
                let mut back = Vec::with_capacity(lists.len());
                for (l, &r) in lists.iter().zip(split) {
                    front.push(Self::factor_from_list(&l[..=r]));
                    back.push(Self::factor_from_list(&l[r..]));
                }
                let fe = BasisElement { factors: front };
                let be = BasisElement { factors: back };
                let (Some(&(_, fi)), Some(&(_, bi))) = (self.index.get(&fe), self.index.get(&be)) else {
                    return;
                };
                let (xv, yv) = (x[fi], y[bi]);
                if xv == 0 || yv == 0 {
                    return;
                }
                let mut sgn = 0usize;
                for i in 0..lists.len() {
                    for j in 0..i {
                        sgn += split[i] * (lists[j].len() - 1 - split[j]);
                    }
                }
                let s = if sgn % 2 == 0 { 1 } else { -1 };
                total += s * xv * yv;
            });
            out[ti] = total;
        }
        out
    }

    /// Pullback along the inclusion of the face missing global vertex `m`.
    /// Rows index the face's basis, columns this complex's basis, per degree.
    pub fn face_pullback(&self, m: usize) -> Result<(LocalComplex, Vec<SparseMatrix>)> {
        let (bi, j) = self.locate(m);
        let l = self.blocks.len() - 1;
        let mut fblocks = self.blocks.clone();
        let dropped = fblocks[bi].q == 0;
        if dropped {
            if bi == l {
                return Err(Error::Unsupported("face is not regular".into()));
            }
            fblocks.remove(bi);
        } else {
            fblocks[bi].q -= 1;
        }
        let face = LocalComplex::new(&fblocks);
        let mut mats = Vec::new();
        for k in 0..=self.top_degree() {
            let mut t = Vec::new();
            for (r, e) in face.basis.get(k).into_iter().flatten().enumerate() {
                let mut factors = e.factors.clone();
                if dropped {
                    factors.insert(bi, Factor::apex());
                } else {
                    let f = factors[bi];
                    let low = f.verts & ((1u64 << j) - 1);
                    let high = (f.verts >> j) << (j + 1);
                    factors[bi] = Factor {
                        verts: low | high,
                        cone: f.cone,
                    };
                }
                let (d, c) = self.index[&BasisElement { factors }];
                debug_assert_eq!(d, k);
                t.push((r, c, 1));
            }
            mats.push(SparseMatrix::from_triplets(face.dim(k), self.dim(k), t));
        }
        Ok((face, mats))
    }

    /// Pullback along the degeneracy repeating global vertex `m`.
    pub fn degeneracy_pullback(&self, m: usize) -> (LocalComplex, Vec<SparseMatrix>) {
        let (bi, j) = self.locate(m);
        let mut dblocks = self.blocks.clone();
        dblocks[bi].q += 1;
        let big = LocalComplex::new(&dblocks);
        let mut mats = Vec::new();
        for k in 0..=big.top_degree() {
            let mut t = Vec::new();
            for (r, e) in big.basis[k].iter().enumerate() {
                let f = e.factors[bi];
                if f.verts >> j & 1 == 1 && f.verts >> (j + 1) & 1 == 1 {
                    continue;
                }
                let low = f.verts & ((1u64 << (j + 1)) - 1);
                let high = (f.verts >> (j + 1)) << j;
                let mut factors = e.factors.clone();
                factors[bi] = Factor {
                    verts: low | high,
                    cone: f.cone,
                };
                let (_, c) = self.index[&BasisElement { factors }];
                t.push((r, c, 1));
            }
            mats.push(SparseMatrix::from_triplets(big.dim(k), self.dim(k), t));
        }
        (big, mats)
    }

    /// Block and local index of a global vertex.
    pub fn locate(&self, m: usize) -> (usize, usize) {
        let mut off = 0;
        for (i, b) in self.blocks.iter().enumerate() {
            if m <= off + b.q {
                return (i, m - off);
            }
            off += b.q + 1;
        }
        panic!("vertex {m} out of range");
    }

    /// One line per basis element: `factors | degree | pdeg per stratum`.
    pub fn dump(&self, poset: &Poset) -> String {
        let mut s = String::new();
        for (k, b) in self.basis.iter().enumerate() {
            for e in b {
                let pd: Vec<String> = self
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(i, bl)| format!("{}:{}", poset.label(bl.elem), e.block_pdeg(i)))
                    .collect();
                s.push_str(&format!("{} | {} | {}\n", e.describe(), k, pd.join(" ")));
            }
        }
        s
    }
}

fn dense_mod(m: &SparseMatrix, q: u64) -> Vec<Vec<u64>> {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|v| to_mod(v, q)).collect())
        .collect()
}

/// Calls `f` with every choice of split points `r_i < len_i` summing to `a`.
pub(crate) fn for_each_split<T>(lists: &[Vec<T>], a: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec<T>(lists: &[Vec<T>], i: usize, left: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == lists.len() {
            if left == 0 {
                f(cur);
            }
            return;
        }
        let rest: usize = lists[i + 1..].iter().map(|l| l.len() - 1).sum();
        for r in 0..lists[i].len() {
            if r > left {
                break;
            }
            if left - r > rest {
                continue;
            }
            cur.push(r);
            rec(lists, i + 1, left - r, cur, f);
            cur.pop();
        }
    }
    rec(lists, 0, a, &mut Vec::new(), f);
}
