//! Exact linear algebra over Z, Q and prime fields.
//!
//! Matrices are sparse and column-major with `i64` entries. Anything that can
//! grow (Smith form, integer kernels) runs on `BigInt`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Q,
    Fp(u64),
}

impl Ring {
    /// Accepts `Z`, `Q`, `F<p>` and `Fp:<p>`.
    pub fn parse(s: &str) -> Result<Ring> {
        let t = s.trim();
        match t {
            "Z" | "z" => return Ok(Ring::Z),
            "Q" | "q" => return Ok(Ring::Q),
            _ => {}
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("F"))
            .ok_or_else(|| Error::Ring(format!("unknown ring `{t}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Ring(format!("bad characteristic in `{t}`")))?;
        if !is_prime(p) {
            return Err(Error::Ring(format!("{p} is not prime")));
        }
        if p > (1u64 << 31) {
            return Err(Error::Ring(format!("characteristic {p} too large")));
        }
        Ok(Ring::Fp(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Z)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Ring::Fp(p) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Fp(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

pub(crate) fn to_mod(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Column-major sparse integer matrix. Each column is sorted by row and
/// holds no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.columns[i].push((i, 1));
        }
        m
    }

    /// Duplicate positions are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of bounds");
            let e = acc[c].entry(r).or_insert(0);
            *e = e.checked_add(v).expect("matrix entry overflow");
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(nr, nc, t)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                d[i][j] = v;
            }
        }
        d
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        match self.columns[c].binary_search_by_key(&r, |&(i, _)| i) {
            Ok(k) => self.columns[c][k].1,
            Err(_) => 0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut columns = Vec::with_capacity(other.cols);
        for ocol in &other.columns {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in ocol {
                for &(i, a) in &self.columns[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = a
                        .checked_mul(b)
                        .and_then(|ab| e.checked_add(ab))
                        .expect("matrix entry overflow");
                }
            }
            columns.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.lin_comb(other, 1)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.lin_comb(other, -1)
    }

    fn lin_comb(&self, other: &SparseMatrix, s: i64) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets()
                .chain(other.triplets().map(|(i, j, v)| (i, j, s * v))),
        )
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0i64; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j] == 0 {
                continue;
            }
            for &(i, v) in col {
                y[i] += v * x[j];
            }
        }
        y
    }

    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: idx.len(),
            columns: idx.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> SparseMatrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut c: Vec<(usize, i64)> = col
                    .iter()
                    .filter(|&&(i, _)| pos[i] != usize::MAX)
                    .map(|&(i, v)| (pos[i], v))
                    .collect();
                c.sort_unstable_by_key(|&(i, _)| i);
                c
            })
            .collect();
        SparseMatrix {
            rows: idx.len(),
            cols: self.cols,
            columns,
        }
    }

    pub fn rank(&self, ring: Ring) -> usize {
        match ring {
            Ring::Fp(p) => rank_mod_p(self, p),
            Ring::Z | Ring::Q => invariant_factors(self).len(),
        }
    }

    /// Text triplet format: a header `rows cols` and one `row col value` line
    /// per nonzero entry.
    pub fn to_triplet_string(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        let mut t: Vec<_> = self.triplets().collect();
        t.sort_unstable();
        for (i, j, v) in t {
            s.push_str(&format!("{i} {j} {v}\n"));
        }
        s
    }

    pub fn from_triplet_str(s: &str) -> Result<SparseMatrix> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty triplet file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        if dims.len() != 2 {
            return Err(Error::Parse(format!("bad header `{header}`")));
        }
        let mut t = Vec::new();
        for l in lines {
            let w: Vec<&str> = l.split_whitespace().collect();
            if w.len() != 3 {
                return Err(Error::Parse(format!("bad entry `{l}`")));
            }
            let bad = || Error::Parse(format!("bad entry `{l}`"));
            let i: usize = w[0].parse().map_err(|_| bad())?;
            let j: usize = w[1].parse().map_err(|_| bad())?;
            let v: i64 = w[2].parse().map_err(|_| bad())?;
            if i >= dims[0] || j >= dims[1] {
                return Err(Error::Parse(format!("entry `{l}` out of bounds")));
            }
            t.push((i, j, v));
        }
        Ok(Self::from_triplets(dims[0], dims[1], t))
    }
}

/// Rank over F_p by column reduction.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let cols = m
        .columns
        .iter()
        .map(|c| {
            c.iter()
                .map(|&(i, v)| (i, to_mod(v, p)))
                .filter(|&(_, v)| v != 0)
                .collect()
        })
        .collect();
    reduce_columns_mod_p(cols, p).0
}

/// Column-reduces `cols` over F_p. Returns the rank and, for every input
/// column, whether it became zero.
pub(crate) fn reduce_columns_mod_p(cols: Vec<Vec<(usize, u64)>>, p: u64) -> (usize, Vec<bool>) {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut zero = Vec::with_capacity(cols.len());
    for mut col in cols {
        loop {
            let Some(&(low, lv)) = col.last() else { break };
            match pivots.get(&low) {
                Some(pc) => {
                    let c = (p - lv) % p;
                    col = axpy_mod(&col, pc, c, p);
                }
                None => {
                    let inv = mod_inv(lv, p);
                    for e in col.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    break;
                }
            }
        }
        if col.is_empty() {
            zero.push(true);
        } else {
            zero.push(false);
            pivots.insert(col.last().unwrap().0, col);
        }
    }
    (pivots.len(), zero)
}

/// `x + c*y` over F_p for sorted sparse vectors.
pub(crate) fn axpy_mod(x: &[(usize, u64)], y: &[(usize, u64)], c: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut a, mut b) = (0, 0);
    while a < x.len() || b < y.len() {
        let ia = x.get(a).map_or(usize::MAX, |e| e.0);
        let ib = y.get(b).map_or(usize::MAX, |e| e.0);
        if ia < ib {
            out.push(x[a]);
            a += 1;
        } else if ib < ia {
            let v = y[b].1 * c % p;
            if v != 0 {
                out.push((ib, v));
            }
            b += 1;
        } else {
            let v = (x[a].1 + y[b].1 * c) % p;
            if v != 0 {
                out.push((ia, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

/// Basis of the kernel of `m` over F_p, as dense vectors.
pub fn kernel_mod_p(m: &SparseMatrix, p: u64) -> Vec<Vec<u64>> {
    let dense: Vec<Vec<u64>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|v| to_mod(v, p)).collect())
        .collect();
    kernel_dense_mod_p(&dense, m.cols, p)
}

pub(crate) fn kernel_dense_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = mod_inv(a[r][c], p);
        for v in a[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..ncols {
                    a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let is_pivot: Vec<Option<usize>> = {
        let mut v = vec![None; ncols];
        for (k, &c) in pivot_cols.iter().enumerate() {
            v[c] = Some(k);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut x = vec![0u64; ncols];
        x[free] = 1;
        for (k, &c) in pivot_cols.iter().enumerate() {
            x[c] = (p - a[k][free]) % p;
        }
        basis.push(x);
    }
    basis
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Nonzero invariant factors of an integer matrix, positive and ordered so
/// that each divides the next.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, j, v) in m.triplets() {
        rows[i].insert(j, big(v));
        col_rows[j].insert(i);
    }
    let mut alive: BTreeSet<usize> = (0..m.rows).filter(|&i| !rows[i].is_empty()).collect();
    let mut diag: Vec<BigInt> = Vec::new();
    loop {
        let mut best: Option<(usize, usize, BigInt)> = None;
        'scan: for &i in &alive {
            for (&j, v) in &rows[i] {
                let a = v.abs();
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => a < *b,
                };
                if better {
                    let unit = a.is_one();
                    best = Some((i, j, a));
                    if unit {
                        break 'scan;
                    }
                }
            }
        }
        let Some((r, c, _)) = best else { break };
        let a = rows[r][&c].clone();
        let mut restart = false;
        let others: Vec<usize> = col_rows[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let b = rows[i][&c].clone();
            let q = &b / &a;
            if !q.is_zero() {
                let pivot_row: Vec<(usize, BigInt)> =
                    rows[r].iter().map(|(&j, v)| (j, v.clone())).collect();
                for (j, v) in pivot_row {
                    let e = rows[i].entry(j).or_insert_with(BigInt::zero);
                    *e -= &q * v;
                    if e.is_zero() {
                        rows[i].remove(&j);
                        col_rows[j].remove(&i);
                    } else {
                        col_rows[j].insert(i);
                    }
                }
            }
            if rows[i].contains_key(&c) {
                restart = true;
            }
            if rows[i].is_empty() {
                alive.remove(&i);
            }
        }
        if restart {
            continue;
        }
        let row_entries: Vec<(usize, BigInt)> = rows[r]
            .iter()
            .filter(|(&j, _)| j != c)
            .map(|(&j, v)| (j, v.clone()))
            .collect();
        for (j, v) in row_entries {
            let rem = &v % &a;
            if rem.is_zero() {
                continue;
            }
            rows[r].insert(j, rem);
            restart = true;
        }
        if restart {
            continue;
        }
        diag.push(a.abs());
        for &j in rows[r].keys() {
            col_rows[j].remove(&r);
        }
        rows[r].clear();
        alive.remove(&r);
        for i in std::mem::take(&mut col_rows[c]) {
            rows[i].remove(&c);
        }
    }
    normalize_diagonal(diag)
}

fn normalize_diagonal(diag: Vec<BigInt>) -> Vec<BigInt> {
    let units = diag.iter().filter(|d| d.is_one()).count();
    let mut rest: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            let l = rest[i].lcm(&rest[j]);
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(rest);
    out.sort();
    out
}

/// Dense Smith normal form with both transforms and their inverses:
/// `u * m * v = d` with `d` diagonal.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

pub type DenseBig = Vec<Vec<BigInt>>;

pub fn dense_identity(n: usize) -> DenseBig {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn dense_mul(a: &DenseBig, b: &DenseBig, inner: usize) -> DenseBig {
    let n = a.len();
    let m = if b.is_empty() { 0 } else { b[0].len() };
    let mut c = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

pub fn to_big_dense(m: &SparseMatrix) -> DenseBig {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

pub fn smith_normal_form(m: &SparseMatrix) -> Snf {
    smith_dense(to_big_dense(m), m.rows, m.cols)
}

pub fn smith_dense(mut a: DenseBig, nr: usize, nc: usize) -> Snf {
    let mut u = dense_identity(nr);
    let mut u_inv = dense_identity(nr);
    let mut v = dense_identity(nc);
    let mut v_inv = dense_identity(nc);

    // row_i += c * row_j
    fn row_add(a: &mut DenseBig, u: &mut DenseBig, u_inv: &mut DenseBig, i: usize, j: usize, c: &BigInt) {
        for k in 0..a[0].len() {
            let t = &a[j][k] * c;
            a[i][k] += t;
        }
        for k in 0..u[0].len() {
            let t = &u[j][k] * c;
            u[i][k] += t;
        }
        for row in u_inv.iter_mut() {
            let t = &row[i] * c;
            row[j] -= t;
        }
    }
    // col_i += c * col_j
    fn col_add(a: &mut DenseBig, v: &mut DenseBig, v_inv: &mut DenseBig, i: usize, j: usize, c: &BigInt) {
        for row in a.iter_mut() {
            let t = &row[j] * c;
            row[i] += t;
        }
        for row in v.iter_mut() {
            let t = &row[j] * c;
            row[i] += t;
        }
        for k in 0..v_inv[0].len() {
            let t = &v_inv[i][k] * c;
            v_inv[j][k] -= t;
        }
    }
    fn row_swap(a: &mut DenseBig, u: &mut DenseBig, u_inv: &mut DenseBig, i: usize, j: usize) {
        a.swap(i, j);
        u.swap(i, j);
        for row in u_inv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_swap(a: &mut DenseBig, v: &mut DenseBig, v_inv: &mut DenseBig, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    }

    let mut diag = Vec::new();
    let tmax = nr.min(nc);
    for t in 0..tmax {
        'outer: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break 'outer };
            if bi != t {
                row_swap(&mut a, &mut u, &mut u_inv, t, bi);
            }
            if bj != t {
                col_swap(&mut a, &mut v, &mut v_inv, t, bj);
            }
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                row_add(&mut a, &mut u, &mut u_inv, i, t, &(-q));
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                col_add(&mut a, &mut v, &mut v_inv, j, t, &(-q));
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let mut bad = None;
            'find: for i in t + 1..nr {
                for j in t + 1..nc {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad = Some(i);
                        break 'find;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    row_add(&mut a, &mut u, &mut u_inv, t, i, &one);
                }
                None => break 'outer,
            }
        }
        if a[t][t].is_negative() {
            let m1 = BigInt::from(-1);
            for k in 0..nc {
                a[t][k] = -&a[t][k];
            }
            for k in 0..nr {
                u[t][k] = -&u[t][k];
            }
            for row in u_inv.iter_mut() {
                row[t] = &row[t] * &m1;
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        diag.push(a[t][t].clone());
    }
    Snf {
        diag,
        u,
        u_inv,
        v,
        v_inv,
    }
}

pub type BigVec = Vec<(usize, BigInt)>;

fn big_axpy(x: &BigVec, y: &BigVec, c: &BigInt) -> BigVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut a, mut b) = (0, 0);
    while a < x.len() || b < y.len() {
        let ia = x.get(a).map_or(usize::MAX, |e| e.0);
        let ib = y.get(b).map_or(usize::MAX, |e| e.0);
        if ia < ib {
            out.push(x[a].clone());
            a += 1;
        } else if ib < ia {
            let v = &y[b].1 * c;
            if !v.is_zero() {
                out.push((ib, v));
            }
            b += 1;
        } else {
            let v = &x[a].1 + &y[b].1 * c;
            if !v.is_zero() {
                out.push((ia, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

fn big_comb(x: &BigVec, cx: &BigInt, y: &BigVec, cy: &BigInt) -> BigVec {
    let scaled: BigVec = x
        .iter()
        .map(|(i, v)| (*i, v * cx))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    big_axpy(&scaled, y, cy)
}

/// Basis of the integer kernel of `m`. The basis spans a saturated lattice:
/// it extends to a basis of Z^cols.
pub fn kernel_z(m: &SparseMatrix) -> Vec<BigVec> {
    let mut cols: Vec<BigVec> = m
        .columns
        .iter()
        .map(|c| c.iter().map(|&(i, v)| (i, big(v))).collect())
        .collect();
    let mut combos: Vec<BigVec> = (0..m.cols).map(|j| vec![(j, BigInt::one())]).collect();
    let mut pivots: HashMap<usize, usize> = HashMap::new();
    let mut kernel_cols = Vec::new();
    for j in 0..m.cols {
        loop {
            let Some((low, b)) = cols[j].last().cloned() else {
                kernel_cols.push(j);
                break;
            };
            let Some(&i) = pivots.get(&low) else {
                pivots.insert(low, j);
                break;
            };
            let a = cols[i].last().unwrap().1.clone();
            if (&b % &a).is_zero() {
                let q = -(&b / &a);
                cols[j] = big_axpy(&cols[j], &cols[i], &q);
                combos[j] = big_axpy(&combos[j], &combos[i], &q);
            } else {
                let eg = a.extended_gcd(&b);
                let (g, s, t) = (eg.gcd, eg.x, eg.y);
                let ag = &a / &g;
                let bg = -(&b / &g);
                let new_i = big_comb(&cols[i], &s, &cols[j], &t);
                let new_j = big_comb(&cols[j], &ag, &cols[i], &bg);
                let ci = big_comb(&combos[i], &s, &combos[j], &t);
                let cj = big_comb(&combos[j], &ag, &combos[i], &bg);
                cols[i] = new_i;
                cols[j] = new_j;
                combos[i] = ci;
                combos[j] = cj;
            }
        }
    }
    kernel_cols.into_iter().map(|j| combos[j].clone()).collect()
}

/// Matrix with the given sparse big vectors as columns; panics if an entry
/// does not fit in `i64`.
pub fn columns_to_matrix(rows: usize, vecs: &[BigVec]) -> SparseMatrix {
    let mut t = Vec::new();
    for (j, v) in vecs.iter().enumerate() {
        for (i, x) in v {
            t.push((*i, j, x.to_i64().expect("kernel entry exceeds i64")));
        }
    }
    SparseMatrix::from_triplets(rows, vecs.len(), t)
}

/// A finitely generated module `R^free ⊕ ⊕ R/t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub ring: Ring,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn zero(ring: Ring) -> Self {
        CohomologyGroup {
            ring,
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        CohomologyGroup {
            ring,
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Same rank and torsion, ignoring the ring tag.
    pub fn same_shape(&self, other: &CohomologyGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(format!("{}", self.ring)),
            r => parts.push(format!("{}^{}", self.ring, r)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cohomology at the middle of `C^{k-1} --d_in--> C^k --d_out--> C^{k+1}`.
pub fn cohomology(d_in: &SparseMatrix, d_out: &SparseMatrix, ring: Ring) -> CohomologyGroup {
    assert_eq!(d_in.rows, d_out.cols, "complex dimensions do not match");
    let n = d_out.cols;
    match ring {
        Ring::Fp(p) => CohomologyGroup::free(ring, n - rank_mod_p(d_out, p) - rank_mod_p(d_in, p)),
        Ring::Q => CohomologyGroup::free(
            ring,
            n - invariant_factors(d_out).len() - invariant_factors(d_in).len(),
        ),
        Ring::Z => {
            let inv = invariant_factors(d_in);
            let free = n - invariant_factors(d_out).len() - inv.len();
            CohomologyGroup {
                ring,
                free_rank: free,
                torsion: inv.into_iter().filter(|d| !d.is_one()).collect(),
            }
        }
    }
}

/// Explicit cohomology with cocycle representatives and a coordinate map,
/// computed with dense transforms (small complexes only).
#[derive(Debug, Clone)]
pub struct CohomologyPresentation {
    pub group: CohomologyGroup,
    /// Orders of the cyclic summands, `0` meaning free.
    pub orders: Vec<BigInt>,
    /// One cocycle per summand, as a dense vector in `C^k`.
    pub reps: Vec<Vec<BigInt>>,
    kernel: DenseBig,
    ker_snf: Snf,
    quot_u: DenseBig,
    keep: Vec<usize>,
    ring: Ring,
}

impl CohomologyPresentation {
    pub fn new(d_in: &SparseMatrix, d_out: &SparseMatrix, ring: Ring) -> Result<Self> {
        let n = d_out.cols;
        let p = ring.prime();
        // cycles
        let kernel: DenseBig = match p {
            Some(p) => {
                let kb = kernel_mod_p(d_out, p);
                (0..n)
                    .map(|i| kb.iter().map(|v| BigInt::from(v[i])).collect())
                    .collect()
            }
            None => {
                let kb = kernel_z(d_out);
                let mut k = vec![vec![BigInt::zero(); kb.len()]; n];
                for (j, v) in kb.iter().enumerate() {
                    for (i, x) in v {
                        k[*i][j] = x.clone();
                    }
                }
                k
            }
        };
        let z = kernel.first().map_or(0, |r| r.len());
        let ker_snf = smith_dense(kernel.clone(), n, z);
        let mut pres = CohomologyPresentation {
            group: CohomologyGroup::zero(ring),
            orders: Vec::new(),
            reps: Vec::new(),
            kernel,
            ker_snf,
            quot_u: Vec::new(),
            keep: Vec::new(),
            ring,
        };
        // boundaries in cycle coordinates
        let b = to_big_dense(d_in);
        let mut bc: DenseBig = vec![vec![BigInt::zero(); d_in.cols]; z];
        for j in 0..d_in.cols {
            let col: Vec<BigInt> = (0..n).map(|i| b[i][j].clone()).collect();
            let y = pres.cycle_coordinates(&col)?;
            for i in 0..z {
                bc[i][j] = y[i].clone();
            }
        }
        let bsnf = match p {
            Some(p) => smith_mod_p(bc, z, d_in.cols, p),
            None => smith_dense(bc, z, d_in.cols),
        };
        let mut orders = Vec::new();
        let mut keep = Vec::new();
        for i in 0..z {
            let d = bsnf.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_one() || (ring == Ring::Q && !d.is_zero()) {
                continue;
            }
            keep.push(i);
            orders.push(d);
        }
        // reps = kernel * quot_u_inv columns
        let kq = dense_mul(&pres.kernel, &bsnf.u_inv, z);
        let mut reps = Vec::new();
        for &i in &keep {
            let mut r: Vec<BigInt> = (0..n).map(|row| kq[row][i].clone()).collect();
            if let Some(p) = p {
                for x in r.iter_mut() {
                    *x = x.mod_floor(&BigInt::from(p));
                }
            }
            reps.push(r);
        }
        let free_rank = orders.iter().filter(|d| d.is_zero()).count();
        let torsion = orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        pres.group = CohomologyGroup {
            ring,
            free_rank,
            torsion,
        };
        pres.orders = orders;
        pres.reps = reps;
        pres.quot_u = bsnf.u;
        pres.keep = keep;
        Ok(pres)
    }

    fn cycle_coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        // kernel = U^-1 D V^-1 with D having unit pivots
        let s = &self.ker_snf;
        let n = x.len();
        let z = s.v.len();
        let mut ux = vec![BigInt::zero(); n];
        for i in 0..n {
            for k in 0..n {
                if !s.u[i][k].is_zero() && !x[k].is_zero() {
                    ux[i] += &s.u[i][k] * &x[k];
                }
            }
        }
        let modp = self.ring.prime().map(BigInt::from);
        let mut w = vec![BigInt::zero(); z];
        for i in 0..n {
            let val = match &modp {
                Some(p) => ux[i].mod_floor(p),
                None => ux[i].clone(),
            };
            if i < s.diag.len() {
                let d = &s.diag[i];
                let q = match &modp {
                    Some(p) => {
                        let inv = mod_inv(d.mod_floor(p).to_u64().unwrap(), p.to_u64().unwrap());
                        (&val * BigInt::from(inv)).mod_floor(p)
                    }
                    None => {
                        if !(&val % d).is_zero() {
                            return Err(Error::Unsupported("vector is not a cycle".into()));
                        }
                        &val / d
                    }
                };
                w[i] = q;
            } else if !val.is_zero() {
                return Err(Error::Unsupported("vector is not a cycle".into()));
            }
        }
        let mut y = vec![BigInt::zero(); z];
        for i in 0..z {
            for k in 0..z {
                if !s.v[i][k].is_zero() && !w[k].is_zero() {
                    y[i] += &s.v[i][k] * &w[k];
                }
            }
            if let Some(p) = &modp {
                y[i] = y[i].mod_floor(p);
            }
        }
        Ok(y)
    }

    /// Coordinates of a cocycle in the summands (reduced modulo each order).
    pub fn coordinates(&self, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self.cycle_coordinates(cocycle)?;
        let z = y.len();
        let mut out = Vec::with_capacity(self.keep.len());
        for (k, &i) in self.keep.iter().enumerate() {
            let mut c = BigInt::zero();
            for j in 0..z {
                c += &self.quot_u[i][j] * &y[j];
            }
            let ord = &self.orders[k];
            if let Some(p) = self.ring.prime() {
                c = c.mod_floor(&BigInt::from(p));
            } else if !ord.is_zero() {
                c = c.mod_floor(ord);
            }
            out.push(c);
        }
        Ok(out)
    }
}

fn smith_mod_p(a: DenseBig, nr: usize, nc: usize, p: u64) -> Snf {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
        .collect();
    let mut u: Vec<Vec<u64>> = (0..nr).map(|i| (0..nr).map(|j| (i == j) as u64).collect()).collect();
    let mut u_inv = u.clone();
    let mut rank = 0;
    for c in 0..nc {
        let Some(r) = (rank..nr).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, r);
        u.swap(rank, r);
        for row in u_inv.iter_mut() {
            row.swap(rank, r);
        }
        let inv = mod_inv(m[rank][c], p);
        let piv = m[rank][c];
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for x in u[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for row in u_inv.iter_mut() {
            row[rank] = row[rank] * piv % p;
        }
        for i in 0..nr {
            if i == rank || m[i][c] == 0 {
                continue;
            }
            let f = m[i][c];
            for j in 0..nc {
                m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
            }
            for j in 0..nr {
                u[i][j] = (u[i][j] + (p - f) * u[rank][j]) % p;
            }
            for row in u_inv.iter_mut() {
                row[rank] = (row[rank] + f * row[i]) % p;
            }
        }
        rank += 1;
    }
    let conv = |x: Vec<Vec<u64>>| -> DenseBig {
        x.into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    };
    Snf {
        diag: vec![BigInt::one(); rank],
        u: conv(u),
        u_inv: conv(u_inv),
        v: Vec::new(),
        v_inv: Vec::new(),
    }
}

/// Checks `d_tgt[k] * phi[k] == phi[k+1] * d_src[k]` wherever both sides
/// are defined.
pub fn check_chain_map(phi: &[SparseMatrix], d_src: &[SparseMatrix], d_tgt: &[SparseMatrix]) -> Result<()> {
    for k in 0..phi.len().saturating_sub(1) {
        if k >= d_src.len() || k >= d_tgt.len() {
            break;
        }
        if d_tgt[k].mul(&phi[k]) != phi[k + 1].mul(&d_src[k]) {
            return Err(Error::NotChainMap(k));
        }
    }
    Ok(())
}

/// Matrix of the map induced by `phi: C_src^k -> C_tgt^k` between two
/// cohomology presentations. Column `j` holds the image of source summand `j`.
pub fn induced_on_cohomology(
    phi: &SparseMatrix,
    src: &CohomologyPresentation,
    tgt: &CohomologyPresentation,
) -> Result<Vec<Vec<BigInt>>> {
    let mut cols = Vec::new();
    for r in &src.reps {
        let mut img = vec![BigInt::zero(); phi.rows];
        for (j, col) in phi.columns.iter().enumerate() {
            if r[j].is_zero() {
                continue;
            }
            for &(i, v) in col {
                img[i] += &r[j] * BigInt::from(v);
            }
        }
        cols.push(tgt.coordinates(&img)?);
    }
    let rows = tgt.reps.len();
    Ok((0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect())
}
