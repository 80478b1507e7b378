//! Filtered face sets: presheaves on filtered simplices with face maps only.
//!
//! A face set is stored as a presentation whose faces are all plain cells.
//! The underlying face set of a simplicial set has every simplex, degenerate
//! ones included, so it is only ever built up to a finite dimension.

use std::collections::HashMap;

use crate::complex::GlobalComplex;
use crate::error::{Error, Result};
use crate::sset::{extend_i, isomorphism, restrict, Cell, FaceRef, Presentation, SimplicialMap, Simplex};

#[derive(Debug, Clone)]
pub struct FilteredFaceSet {
    pub pres: Presentation,
    /// Every simplex of dimension `<= complete_to` is present.
    pub complete_to: Option<usize>,
}

impl FilteredFaceSet {
    pub fn new(pres: Presentation) -> Result<FilteredFaceSet> {
        if let Some(c) = pres.cells.iter().find(|c| c.faces.iter().any(|f| f.is_degenerate())) {
            return Err(Error::Presentation(format!(
                "cell `{}` has a degenerate face; face sets have none",
                c.id
            )));
        }
        Ok(FilteredFaceSet {
            pres,
            complete_to: None,
        })
    }

    pub fn len(&self) -> usize {
        self.pres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pres.is_empty()
    }
}

fn surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    // monotone surjections [n] -> [m]
    let mut out = Vec::new();
    let mut cur = vec![0usize];
    fn go(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            if *cur.last().unwrap() == m {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        for next in [last, last + 1] {
            if next > m || m - next > n - cur.len() {
                continue;
            }
            cur.push(next);
            go(n, m, cur, out);
            cur.pop();
        }
    }
    go(n, m, &mut cur, &mut out);
    out
}

/// The underlying face set of `x` up to dimension `max_dim`: every simplex
/// `(cell, surjection)` becomes a cell, with plain faces.
pub fn forget_to_ffs(x: &Presentation, max_dim: usize) -> FilteredFaceSet {
    let mut cells: Vec<Cell> = Vec::new();
    let mut index: HashMap<Simplex, usize> = HashMap::new();
    for dim in 0..=max_dim {
        for c in 0..x.len() {
            let cd = x.cells[c].dim;
            if cd > dim {
                continue;
            }
            for map in surjections(dim, cd) {
                let s = Simplex { cell: c, map };
                let faces = if dim == 0 {
                    vec![]
                } else {
                    (0..=dim)
                        .map(|i| FaceRef::plain(index[&x.face_simplex(&s, i)], dim - 1))
                        .collect()
                };
                let chain: Vec<usize> = x.simplex_chain(&s);
                let id = if s.is_nondegenerate() {
                    x.cells[c].id.clone()
                } else {
                    format!(
                        "s{}({})",
                        s.map.iter().map(|v| v.to_string()).collect::<String>(),
                        x.cells[c].id
                    )
                };
                index.insert(s, cells.len());
                cells.push(Cell { id, dim, faces, chain });
            }
        }
    }
    FilteredFaceSet {
        pres: Presentation::new(x.poset.clone(), cells).expect("simplices are distinct"),
        complete_to: Some(max_dim),
    }
}

/// The nondegenerate simplices of `x`, when they are closed under faces.
pub fn nondegenerate_core(x: &Presentation) -> Result<FilteredFaceSet> {
    FilteredFaceSet::new(x.clone())
}

/// Free simplicial set on a face set: the cells are its nondegenerate
/// simplices and degeneracies stay formal.
pub fn kan_extend(t: &FilteredFaceSet) -> Presentation {
    t.pres.clone()
}

/// The cochain complex of the face set, with no degeneracy constraints.
/// Truncated face sets must contain every simplex that carries a generator
/// of degree `<= kmax`.
pub fn delta_cochain_complex(t: &FilteredFaceSet, kmax: usize) -> Result<GlobalComplex> {
    if let Some(top) = t.complete_to {
        let lmax = t
            .pres
            .regular_cells()
            .into_iter()
            .map(|c| t.pres.blocks(c).len() - 1)
            .max()
            .unwrap_or(0);
        if top < kmax + lmax {
            return Err(Error::Truncation {
                degree: kmax,
                kmax: top.saturating_sub(lmax),
            });
        }
    }
    GlobalComplex::new(&t.pres, kmax)
}

/// Evidence that `normalize(x) -> x` is a normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalityCertificate {
    /// Image of each cell of the normalization.
    pub map: Vec<Simplex>,
    pub is_map: bool,
    pub regular_bijective: bool,
    /// Every non-regular cell of the normalization is the last face of a
    /// regular cell.
    pub regular_lifts: bool,
    /// Normalizing again gives an isomorphic presentation.
    pub idempotent: bool,
}

impl NormalityCertificate {
    pub fn holds(&self) -> bool {
        self.is_map && self.regular_bijective && self.regular_lifts && self.idempotent
    }
}

/// Builds `normalize(x)` and checks the comparison map cell by cell.
pub fn normality_certificate(x: &Presentation) -> Result<(Presentation, NormalityCertificate)> {
    let r = restrict(x);
    let nx = extend_i(&r)?;
    let regular: Vec<usize> = (0..x.len()).filter(|&c| x.is_regular(c)).collect();
    let nreg = regular.len();
    let mut map: Vec<Option<Simplex>> = vec![None; nx.len()];
    for (k, &c) in regular.iter().enumerate() {
        map[k] = Some(x.cell_simplex(c));
    }
    let mut regular_lifts = true;
    for c in nreg..nx.len() {
        let owner = (0..nreg).find(|&r| {
            let f = nx.cells[r].faces.last();
            nx.cells[r].dim == nx.cells[c].dim + 1 && f.is_some_and(|f| f.cell == c)
        });
        match owner {
            Some(r) => {
                let d = x.cells[regular[r]].dim;
                map[c] = Some(x.cell_face(regular[r], d));
            }
            None => regular_lifts = false,
        }
    }
    let map: Vec<Simplex> = map
        .into_iter()
        .map(|s| s.unwrap_or(Simplex { cell: 0, map: vec![0] }))
        .collect();
    let f = SimplicialMap { images: map.clone() };
    let ident: Vec<usize> = (0..x.poset.len()).collect();
    let is_map = regular_lifts && f.check(&nx, x, &ident).is_ok();
    let mut hit = vec![false; x.len()];
    let mut regular_bijective = true;
    for (c, s) in map.iter().enumerate().take(nreg) {
        if !s.is_nondegenerate() || hit[s.cell] || !nx.is_regular(c) {
            regular_bijective = false;
        } else {
            hit[s.cell] = true;
        }
    }
    regular_bijective &= regular.iter().all(|&c| hit[c]);
    let again = extend_i(&restrict(&nx))?;
    let idempotent = isomorphism(&again, &nx).is_some();
    Ok((
        nx,
        NormalityCertificate {
            map,
            is_map,
            regular_bijective,
            regular_lifts,
            idempotent,
        },
    ))
}
