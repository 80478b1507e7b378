//! Finite simplicial sets over the nerve of a poset.
//!
//! A presentation lists nondegenerate cells. Each face is a cell together
//! with a monotone surjection describing a possibly degenerate simplex in
//! Eilenberg-Zilber normal form.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{join_decomposition, Block, Poset, PosetSpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub cell: usize,
    /// Vertex map `[dim-1] -> [dim of cell]`, the identity for a
    /// nondegenerate face.
    pub degen: Vec<usize>,
}

impl FaceRef {
    pub fn plain(cell: usize, dim: usize) -> FaceRef {
        FaceRef {
            cell,
            degen: (0..=dim).collect(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degen.iter().enumerate().any(|(i, &j)| i != j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<FaceRef>,
    pub chain: Vec<usize>,
}

/// A simplex in normal form: a nondegenerate cell and a monotone surjection
/// onto its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub cell: usize,
    pub map: Vec<usize>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.map.len() - 1
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn is_surjection(v: &[usize], top: usize) -> bool {
    !v.is_empty()
        && v[0] == 0
        && *v.last().unwrap() == top
        && v.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub poset: Poset,
    pub cells: Vec<Cell>,
    index: HashMap<String, usize>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset && self.cells == other.cells
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<String>,
    pub cells: usize,
    pub maximal_cells: Vec<String>,
    pub regular_cells: Vec<String>,
    pub nonsingular_cells: Vec<String>,
}

impl Presentation {
    pub fn new(poset: Poset, cells: Vec<Cell>) -> Result<Presentation> {
        let mut index = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::Presentation(format!("duplicate cell id `{}`", c.id)));
            }
        }
        Ok(Presentation {
            poset,
            cells,
            index,
        })
    }

    /// Builds and validates.
    pub fn checked(poset: Poset, cells: Vec<Cell>) -> Result<Presentation> {
        let p = Presentation::new(poset, cells)?;
        let r = p.validate();
        if !r.valid {
            return Err(Error::Presentation(r.errors.join("; ")));
        }
        Ok(p)
    }

    pub fn empty(poset: Poset) -> Presentation {
        Presentation::new(poset, Vec::new()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn find_or_err(&self, id: &str) -> Result<usize> {
        self.find(id)
            .ok_or_else(|| Error::Presentation(format!("unknown cell `{id}`")))
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn is_regular(&self, i: usize) -> bool {
        self.poset.is_regular(&self.cells[i].chain)
    }

    pub fn regular_cells(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_regular(i)).collect()
    }

    pub fn blocks(&self, i: usize) -> Vec<Block> {
        join_decomposition(&self.cells[i].chain)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let d = self.dim().map_or(0, |d| d + 1);
        let mut v = vec![0; d];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    /// Normal form of the simplex `cell ∘ map` for a monotone `map` into the
    /// vertices of `cell`.
    pub fn normalize_simplex(&self, cell: usize, map: &[usize]) -> Simplex {
        let mut cell = cell;
        let mut map = map.to_vec();
        loop {
            let dim = self.cells[cell].dim;
            let mut hit = vec![false; dim + 1];
            for &v in &map {
                hit[v] = true;
            }
            let Some(j) = (0..=dim).rev().find(|&j| !hit[j]) else {
                return Simplex { cell, map };
            };
            let f = &self.cells[cell].faces[j];
            map = map
                .iter()
                .map(|&v| f.degen[if v < j { v } else { v - 1 }])
                .collect();
            cell = f.cell;
        }
    }

    pub fn face_simplex(&self, s: &Simplex, i: usize) -> Simplex {
        let mut m = s.map.clone();
        m.remove(i);
        self.normalize_simplex(s.cell, &m)
    }

    pub fn cell_simplex(&self, i: usize) -> Simplex {
        Simplex {
            cell: i,
            map: (0..=self.cells[i].dim).collect(),
        }
    }

    pub fn cell_face(&self, i: usize, j: usize) -> Simplex {
        let f = &self.cells[i].faces[j];
        Simplex {
            cell: f.cell,
            map: f.degen.clone(),
        }
    }

    pub fn simplex_chain(&self, s: &Simplex) -> Vec<usize> {
        let c = &self.cells[s.cell].chain;
        s.map.iter().map(|&v| c[v]).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut errors = Vec::new();
        let n = self.cells.len();
        for c in &self.cells {
            if c.chain.len() != c.dim + 1 {
                errors.push(format!(
                    "cell `{}`: chain has {} letters for dimension {}",
                    c.id,
                    c.chain.len(),
                    c.dim
                ));
            } else if !self.poset.is_chain(&c.chain) {
                errors.push(format!("cell `{}`: chain is not weakly increasing", c.id));
            }
            let want = if c.dim == 0 { 0 } else { c.dim + 1 };
            if c.faces.len() != want {
                errors.push(format!(
                    "cell `{}`: {} faces, expected {}",
                    c.id,
                    c.faces.len(),
                    want
                ));
                continue;
            }
            for (i, f) in c.faces.iter().enumerate() {
                if f.cell >= n {
                    errors.push(format!("cell `{}`: face {} out of range", c.id, i));
                    continue;
                }
                let fc = &self.cells[f.cell];
                if fc.dim + 1 > c.dim || f.degen.len() != c.dim || !is_surjection(&f.degen, fc.dim) {
                    errors.push(format!(
                        "cell `{}`: face {} -> `{}` has an invalid degeneracy {:?}",
                        c.id, i, fc.id, f.degen
                    ));
                    continue;
                }
                if fc.chain.len() == fc.dim + 1 && c.chain.len() == c.dim + 1 {
                    let got: Vec<usize> = f.degen.iter().map(|&v| fc.chain[v]).collect();
                    let mut want = c.chain.clone();
                    want.remove(i);
                    if got != want {
                        errors.push(format!(
                            "cell `{}`: face {} -> `{}` has chain {:?}, expected {:?}",
                            c.id,
                            i,
                            fc.id,
                            self.poset.chain_labels(&got),
                            self.poset.chain_labels(&want)
                        ));
                    }
                }
            }
        }
        if errors.is_empty() {
            for (ci, c) in self.cells.iter().enumerate() {
                if c.dim < 2 {
                    continue;
                }
                let s = self.cell_simplex(ci);
                for j in 1..=c.dim {
                    for i in 0..j {
                        let a = self.face_simplex(&self.face_simplex(&s, j), i);
                        let b = self.face_simplex(&self.face_simplex(&s, i), j - 1);
                        if a != b {
                            errors.push(format!(
                                "cell `{}`: d{} d{} != d{} d{}",
                                c.id,
                                i,
                                j,
                                j - 1,
                                i
                            ));
                        }
                    }
                }
            }
        }
        let mut is_face = vec![false; n];
        for c in &self.cells {
            for f in &c.faces {
                if f.cell < n {
                    is_face[f.cell] = true;
                }
            }
        }
        let valid = errors.is_empty();
        let ids = |pred: &dyn Fn(usize) -> bool| -> Vec<String> {
            (0..n).filter(|&i| pred(i)).map(|i| self.cells[i].id.clone()).collect()
        };
        ValidationReport {
            valid,
            errors,
            cells: n,
            maximal_cells: ids(&|i| !is_face[i]),
            regular_cells: if valid { ids(&|i| self.is_regular(i)) } else { vec![] },
            nonsingular_cells: if valid {
                ids(&|i| {
                    let ch = &self.cells[i].chain;
                    self.poset.is_maximal(ch[0]) && ch.iter().all(|&s| s == ch[0])
                })
            } else {
                vec![]
            },
        }
    }

    /// Sub-presentation on a face-closed set of cells, with the inclusion.
    pub fn subpresentation(&self, keep: &[usize]) -> Result<(Presentation, SimplicialMap)> {
        let mut pos = vec![usize::MAX; self.len()];
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (k, &i) in sorted.iter().enumerate() {
            pos[i] = k;
        }
        let mut cells = Vec::new();
        for &i in &sorted {
            let c = &self.cells[i];
            let mut faces = Vec::new();
            for f in &c.faces {
                if pos[f.cell] == usize::MAX {
                    return Err(Error::Presentation(format!(
                        "subset is not closed under faces at `{}`",
                        c.id
                    )));
                }
                faces.push(FaceRef {
                    cell: pos[f.cell],
                    degen: f.degen.clone(),
                });
            }
            cells.push(Cell {
                id: c.id.clone(),
                dim: c.dim,
                faces,
                chain: c.chain.clone(),
            });
        }
        let sub = Presentation::new(self.poset.clone(), cells)?;
        let map = SimplicialMap {
            images: sorted.iter().map(|&i| self.cell_simplex(i)).collect(),
        };
        Ok((sub, map))
    }

    /// Face closure of a set of cells.
    pub fn closure(&self, cells: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = cells.to_vec();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                for f in &self.cells[c].faces {
                    stack.push(f.cell);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Deterministic per-cell keys that only depend on dimensions, labels and
    /// face structure. Equal keys mean isomorphic face-closures.
    pub fn canonical_keys(&self) -> Vec<u64> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.cells[i].dim);
        let mut keys = vec![0u64; self.len()];
        for i in order {
            let c = &self.cells[i];
            let mut h = DefaultHasher::new();
            c.dim.hash(&mut h);
            for &s in &c.chain {
                self.poset.label(s).hash(&mut h);
            }
            for f in &c.faces {
                keys[f.cell].hash(&mut h);
                f.degen.hash(&mut h);
            }
            keys[i] = h.finish();
        }
        keys
    }

    pub fn canonical_form(&self) -> Vec<(usize, u64)> {
        let keys = self.canonical_keys();
        let mut v: Vec<(usize, u64)> = (0..self.len()).map(|i| (self.cells[i].dim, keys[i])).collect();
        v.sort_unstable();
        v
    }

    pub fn to_spec(&self) -> PresentationSpec {
        PresentationSpec {
            poset: Some(self.poset.to_spec()),
            cells: self
                .cells
                .iter()
                .map(|c| CellSpec {
                    id: c.id.clone(),
                    dim: c.dim,
                    faces: c
                        .faces
                        .iter()
                        .map(|f| {
                            let id = self.cells[f.cell].id.clone();
                            if f.is_degenerate() {
                                FaceSpec::Degenerate {
                                    cell: id,
                                    degeneracy: f.degen.clone(),
                                }
                            } else {
                                FaceSpec::Id(id)
                            }
                        })
                        .collect(),
                    chain: self.poset.chain_labels(&c.chain),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("presentation serializes")
    }

    /// Parses the JSON form. A missing poset defaults to `fallback`.
    pub fn from_spec(spec: &PresentationSpec, fallback: Option<&Poset>) -> Result<Presentation> {
        let poset = match (&spec.poset, fallback) {
            (Some(p), _) => Poset::from_spec(p)?,
            (None, Some(p)) => p.clone(),
            (None, None) => return Err(Error::Presentation("no poset given".into())),
        };
        let mut index = HashMap::new();
        for (i, c) in spec.cells.iter().enumerate() {
            if index.insert(c.id.as_str(), i).is_some() {
                return Err(Error::Presentation(format!("duplicate cell id `{}`", c.id)));
            }
        }
        let mut cells = Vec::new();
        for c in &spec.cells {
            let chain = c
                .chain
                .iter()
                .map(|l| poset.index_of(l))
                .collect::<Result<Vec<_>>>()?;
            let mut faces = Vec::new();
            for f in &c.faces {
                let (id, degen) = match f {
                    FaceSpec::Id(id) => (id, None),
                    FaceSpec::Degenerate { cell, degeneracy } => (cell, Some(degeneracy.clone())),
                };
                let k = *index.get(id.as_str()).ok_or_else(|| {
                    Error::Presentation(format!("cell `{}` refers to unknown face `{id}`", c.id))
                })?;
                let degen = degen.unwrap_or_else(|| (0..c.dim).collect());
                faces.push(FaceRef { cell: k, degen });
            }
            cells.push(Cell {
                id: c.id.clone(),
                dim: c.dim,
                faces,
                chain,
            });
        }
        Presentation::new(poset, cells)
    }

    pub fn from_json_str(s: &str) -> Result<Presentation> {
        let spec: PresentationSpec =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("presentation: {e}")))?;
        Presentation::from_spec(&spec, None)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FaceSpec {
    Id(String),
    Degenerate { cell: String, degeneracy: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellSpec {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<FaceSpec>,
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetSpec>,
    pub cells: Vec<CellSpec>,
}

/// Incremental construction by cell id.
pub struct Builder {
    poset: Poset,
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
}

impl Builder {
    pub fn new(poset: Poset) -> Builder {
        Builder {
            poset,
            cells: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn vertex(&mut self, id: &str, label: &str) -> Result<usize> {
        self.cell(id, &[label], &[])
    }

    /// Adds a cell with nondegenerate faces given by id.
    pub fn cell(&mut self, id: &str, chain: &[&str], faces: &[&str]) -> Result<usize> {
        let dim = chain.len() - 1;
        let faces: Vec<(&str, Vec<usize>)> = faces.iter().map(|f| (*f, (0..dim).collect())).collect();
        self.cell_degen(id, chain, &faces)
    }

    pub fn cell_degen(&mut self, id: &str, chain: &[&str], faces: &[(&str, Vec<usize>)]) -> Result<usize> {
        let chain = chain
            .iter()
            .map(|l| self.poset.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        let mut fr = Vec::new();
        for (f, d) in faces {
            let k = *self
                .index
                .get(*f)
                .ok_or_else(|| Error::Presentation(format!("unknown face `{f}`")))?;
            fr.push(FaceRef {
                cell: k,
                degen: d.clone(),
            });
        }
        if self.index.insert(id.to_string(), self.cells.len()).is_some() {
            return Err(Error::Presentation(format!("duplicate cell id `{id}`")));
        }
        self.cells.push(Cell {
            id: id.to_string(),
            dim: chain.len() - 1,
            faces: fr,
            chain,
        });
        Ok(self.cells.len() - 1)
    }

    pub fn build(self) -> Result<Presentation> {
        Presentation::checked(self.poset, self.cells)
    }
}

/// A map of presentations, one normalized image simplex per source cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub images: Vec<Simplex>,
}

impl SimplicialMap {
    pub fn identity(x: &Presentation) -> SimplicialMap {
        SimplicialMap {
            images: (0..x.len()).map(|i| x.cell_simplex(i)).collect(),
        }
    }

    /// Image of an arbitrary simplex of the source.
    pub fn apply(&self, tgt: &Presentation, s: &Simplex) -> Simplex {
        let im = &self.images[s.cell];
        let m: Vec<usize> = s.map.iter().map(|&v| im.map[v]).collect();
        tgt.normalize_simplex(im.cell, &m)
    }

    pub fn compose(&self, after: &SimplicialMap, mid: &Presentation, tgt: &Presentation) -> SimplicialMap {
        let _ = mid;
        SimplicialMap {
            images: self.images.iter().map(|s| after.apply(tgt, s)).collect(),
        }
    }

    /// Checks dimensions, faces and labels through `fmap` on poset elements.
    pub fn check(&self, src: &Presentation, tgt: &Presentation, fmap: &[usize]) -> Result<()> {
        if self.images.len() != src.len() {
            return Err(Error::Presentation("map has the wrong number of images".into()));
        }
        for (i, c) in src.cells.iter().enumerate() {
            let im = &self.images[i];
            if im.map.len() != c.dim + 1 || tgt.normalize_simplex(im.cell, &im.map) != *im {
                return Err(Error::Presentation(format!("bad image for `{}`", c.id)));
            }
            let want: Vec<usize> = c.chain.iter().map(|&s| fmap[s]).collect();
            if tgt.simplex_chain(im) != want {
                return Err(Error::Stratification(format!(
                    "image of `{}` has the wrong labels",
                    c.id
                )));
            }
            for j in 0..c.faces.len() {
                let a = tgt.face_simplex(im, j);
                let b = self.apply(tgt, &src.cell_face(i, j));
                if a != b {
                    return Err(Error::Presentation(format!(
                        "map does not commute with face {j} of `{}`",
                        c.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Plain presentations live over the one-point poset.
pub fn standard_simplex(poset: &Poset, chain: &[usize]) -> Presentation {
    let n = chain.len() - 1;
    let name = |v: &[usize]| -> String {
        if n < 10 {
            v.iter().map(|x| x.to_string()).collect()
        } else {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
        }
    };
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for mask in 1u64..(1u64 << (n + 1)) {
        subsets.push((0..=n).filter(|&i| mask >> i & 1 == 1).collect());
    }
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let index: HashMap<Vec<usize>, usize> =
        subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let cells = subsets
        .iter()
        .map(|s| {
            let dim = s.len() - 1;
            let faces = if dim == 0 {
                vec![]
            } else {
                (0..=dim)
                    .map(|i| {
                        let mut t = s.clone();
                        t.remove(i);
                        FaceRef::plain(index[&t], dim - 1)
                    })
                    .collect()
            };
            Cell {
                id: name(s),
                dim,
                faces,
                chain: s.iter().map(|&v| chain[v]).collect(),
            }
        })
        .collect();
    Presentation::new(poset.clone(), cells).unwrap()
}

pub fn plain_simplex(n: usize) -> Presentation {
    standard_simplex(&Poset::point(), &vec![0; n + 1])
}

pub fn plain_boundary(n: usize) -> Presentation {
    let full = plain_simplex(n);
    let keep: Vec<usize> = (0..full.len()).filter(|&i| full.cells[i].dim < n).collect();
    full.subpresentation(&keep).unwrap().0
}

/// Cells of dimension at most `d`.
pub fn skeleton(x: &Presentation, d: usize) -> Presentation {
    let keep: Vec<usize> = (0..x.len()).filter(|&i| x.cells[i].dim <= d).collect();
    x.subpresentation(&keep).unwrap().0
}

/// Restricted presentation: regular cells, with missing non-regular faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restricted {
    pub poset: Poset,
    pub cells: Vec<RCell>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RCell {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<Option<FaceRef>>,
    pub chain: Vec<usize>,
}

impl Restricted {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Normal form inside the restricted part; `None` when a needed face is
    /// missing.
    fn normalize_simplex(&self, cell: usize, map: &[usize]) -> Option<Simplex> {
        let mut cell = cell;
        let mut map = map.to_vec();
        loop {
            let dim = self.cells[cell].dim;
            let mut hit = vec![false; dim + 1];
            for &v in &map {
                hit[v] = true;
            }
            let Some(j) = (0..=dim).rev().find(|&j| !hit[j]) else {
                return Some(Simplex { cell, map });
            };
            let f = self.cells[cell].faces[j].as_ref()?;
            map = map
                .iter()
                .map(|&v| f.degen[if v < j { v } else { v - 1 }])
                .collect();
            cell = f.cell;
        }
    }
}

/// The restriction functor: keep regular cells and the faces that stay
/// regular.
pub fn restrict(x: &Presentation) -> Restricted {
    let mut pos = vec![usize::MAX; x.len()];
    let mut k = 0;
    for i in 0..x.len() {
        if x.is_regular(i) {
            pos[i] = k;
            k += 1;
        }
    }
    let cells = (0..x.len())
        .filter(|&i| x.is_regular(i))
        .map(|i| {
            let c = &x.cells[i];
            RCell {
                id: c.id.clone(),
                dim: c.dim,
                faces: c
                    .faces
                    .iter()
                    .map(|f| {
                        (pos[f.cell] != usize::MAX).then(|| FaceRef {
                            cell: pos[f.cell],
                            degen: f.degen.clone(),
                        })
                    })
                    .collect(),
                chain: c.chain.clone(),
            }
        })
        .collect();
    Restricted {
        poset: x.poset.clone(),
        cells,
    }
}

fn fresh_id(base: String, taken: &HashSet<String>) -> String {
    let mut id = base;
    while taken.contains(&id) {
        id.push('\'');
    }
    id
}

/// Adds one cell per nondegenerate non-regular chain of the nerve and sends
/// every missing face there.
pub fn extend_n(r: &Restricted) -> Presentation {
    let p = &r.poset;
    let mut taken: HashSet<String> = r.cells.iter().map(|c| c.id.clone()).collect();
    let vchains: Vec<Vec<usize>> = p
        .strict_chains()
        .into_iter()
        .filter(|c| !p.is_regular(c))
        .collect();
    let base = r.cells.len();
    let vindex: HashMap<Vec<usize>, usize> = vchains
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), base + i))
        .collect();
    let mut cells: Vec<Cell> = r
        .cells
        .iter()
        .map(|c| Cell {
            id: c.id.clone(),
            dim: c.dim,
            faces: c
                .faces
                .iter()
                .enumerate()
                .map(|(i, f)| match f {
                    Some(f) => f.clone(),
                    None => {
                        let mut ch = c.chain.clone();
                        ch.remove(i);
                        let mut strict = ch.clone();
                        strict.dedup();
                        let degen = ch
                            .iter()
                            .map(|s| strict.iter().position(|t| t == s).unwrap())
                            .collect();
                        FaceRef {
                            cell: vindex[&strict],
                            degen,
                        }
                    }
                })
                .collect(),
            chain: c.chain.clone(),
        })
        .collect();
    for c in &vchains {
        let dim = c.len() - 1;
        let id = fresh_id(format!("v[{}]", p.chain_labels(c).join(",")), &taken);
        taken.insert(id.clone());
        let faces = if dim == 0 {
            vec![]
        } else {
            (0..=dim)
                .map(|i| {
                    let mut d = c.clone();
                    d.remove(i);
                    FaceRef::plain(vindex[&d], dim - 1)
                })
                .collect()
        };
        cells.push(Cell {
            id,
            dim,
            faces,
            chain: c.clone(),
        });
    }
    Presentation::new(p.clone(), cells).expect("fresh ids are unique")
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let n = self.0[a];
            self.0[a] = r;
            a = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// The left Kan extension along the inclusion of regular simplices.
///
/// Every regular cell whose last vertex alone carries a maximal label gets
/// its missing last face as a new cell. Two such faces are glued when they
/// are the bases of faces of one regular cell that differ only in which
/// vertex of the last block they keep.
pub fn extend_i(r: &Restricted) -> Result<Presentation> {
    let p = &r.poset;
    let n = r.cells.len();
    let unsupported = |id: &str| {
        Error::Unsupported(format!(
            "cell `{id}` has a degenerate regular face; the gluing needs nondegenerate faces"
        ))
    };
    let is_node = |c: &RCell| c.dim >= 1 && !p.is_maximal(c.chain[c.dim - 1]);
    let mut uf = UnionFind((0..n).collect());
    for (ci, c) in r.cells.iter().enumerate() {
        let blocks = join_decomposition(&c.chain);
        let last = *blocks.last().unwrap();
        if blocks.len() < 2 || last.q == 0 {
            continue;
        }
        let start = c.dim - last.q;
        let base: Vec<usize> = (0..start).collect();
        let mut members = Vec::new();
        for w in start..=c.dim {
            let mut m = base.clone();
            m.push(w);
            let s = r
                .normalize_simplex(ci, &m)
                .ok_or_else(|| unsupported(&c.id))?;
            if !s.is_nondegenerate() {
                return Err(unsupported(&c.id));
            }
            members.push(s.cell);
        }
        for w in members.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        if is_node(&r.cells[i]) {
            let root = uf.find(i);
            if class_of[root] == usize::MAX {
                class_of[root] = reps.len();
                reps.push(root);
            }
            class_of[i] = class_of[root];
        }
    }
    let mut taken: HashSet<String> = r.cells.iter().map(|c| c.id.clone()).collect();
    let mut cells: Vec<Cell> = Vec::with_capacity(n + reps.len());
    for c in &r.cells {
        let mut faces = Vec::new();
        for (i, f) in c.faces.iter().enumerate() {
            match f {
                Some(f) => faces.push(f.clone()),
                None => {
                    if i != c.dim || !is_node(c) {
                        return Err(Error::Presentation(format!(
                            "cell `{}` misses a face that should be regular",
                            c.id
                        )));
                    }
                    let me = cells.len();
                    faces.push(FaceRef::plain(n + class_of[me], c.dim - 1));
                }
            }
        }
        cells.push(Cell {
            id: c.id.clone(),
            dim: c.dim,
            faces,
            chain: c.chain.clone(),
        });
    }
    for &rep in &reps {
        let t = &r.cells[rep];
        let dim = t.dim - 1;
        let id = fresh_id(format!("i({})", t.id), &taken);
        taken.insert(id.clone());
        let mut faces = Vec::new();
        if dim > 0 {
            for i in 0..t.dim {
                let f = t.faces[i].as_ref().ok_or_else(|| unsupported(&t.id))?;
                if f.is_degenerate() || !is_node(&r.cells[f.cell]) {
                    return Err(unsupported(&t.id));
                }
                faces.push(FaceRef::plain(n + class_of[f.cell], dim - 1));
            }
        }
        cells.push(Cell {
            id,
            dim,
            faces,
            chain: t.chain[..t.dim].to_vec(),
        });
    }
    // every member of a class must produce the same faces
    for i in 0..n {
        let c = &r.cells[i];
        if class_of[i] == usize::MAX || c.dim < 2 {
            continue;
        }
        let mine: Vec<FaceRef> = (0..c.dim)
            .map(|j| {
                let f = c.faces[j].as_ref().ok_or_else(|| unsupported(&c.id))?;
                if f.is_degenerate() || !is_node(&r.cells[f.cell]) {
                    return Err(unsupported(&c.id));
                }
                Ok(FaceRef::plain(n + class_of[f.cell], c.dim - 2))
            })
            .collect::<Result<_>>()?;
        if cells[n + class_of[i]].faces != mine {
            return Err(Error::Unsupported(format!(
                "gluing is not consistent at `{}`",
                c.id
            )));
        }
    }
    Presentation::checked(p.clone(), cells)
}

pub fn normalize(x: &Presentation) -> Result<Presentation> {
    extend_i(&restrict(x))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductCell {
    pub x: usize,
    pub k: usize,
    /// Vertices as pairs (vertex of x, vertex of k).
    pub path: Vec<(usize, usize)>,
}

/// `x × k` with labels taken from `x`; `k` is read as a plain simplicial set.
#[derive(Debug, Clone)]
pub struct Product {
    pub pres: Presentation,
    pub origin: Vec<ProductCell>,
    lookup: HashMap<ProductCell, usize>,
}

impl Product {
    pub fn find(&self, pc: &ProductCell) -> Option<usize> {
        self.lookup.get(pc).copied()
    }

    /// Normal form of the simplex with vertex sequence `pairs` on `(x, k)`.
    pub fn simplex_of(&self, x: &Presentation, k: &Presentation, xc: usize, kc: usize, pairs: &[(usize, usize)]) -> Simplex {
        let a: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let sx = x.normalize_simplex(xc, &a);
        let sk = k.normalize_simplex(kc, &b);
        let joint: Vec<(usize, usize)> = sx.map.iter().copied().zip(sk.map.iter().copied()).collect();
        let mut path = joint.clone();
        path.dedup();
        let degen = joint
            .iter()
            .map(|q| path.binary_search(q).unwrap())
            .collect();
        let cell = self.lookup[&ProductCell {
            x: sx.cell,
            k: sk.cell,
            path,
        }];
        Simplex { cell, map: degen }
    }
}

fn lattice_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = vec![(0usize, 0usize)];
    fn rec(p: usize, q: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (a, b) = *cur.last().unwrap();
        if a == p && b == q {
            out.push(cur.clone());
            return;
        }
        for (da, db) in [(1, 0), (0, 1), (1, 1)] {
            if a + da <= p && b + db <= q {
                cur.push((a + da, b + db));
                rec(p, q, cur, out);
                cur.pop();
            }
        }
    }
    rec(p, q, &mut cur, &mut out);
    out
}

fn path_code(path: &[(usize, usize)]) -> String {
    path.windows(2)
        .map(|w| match (w[1].0 - w[0].0, w[1].1 - w[0].1) {
            (1, 0) => 'a',
            (0, 1) => 'b',
            _ => 'c',
        })
        .collect()
}

pub fn product(x: &Presentation, k: &Presentation) -> Product {
    let mut origin: Vec<ProductCell> = Vec::new();
    for xi in 0..x.len() {
        for ki in 0..k.len() {
            for path in lattice_paths(x.cells[xi].dim, k.cells[ki].dim) {
                origin.push(ProductCell { x: xi, k: ki, path });
            }
        }
    }
    origin.sort_by(|a, b| a.path.len().cmp(&b.path.len()).then(a.cmp(b)));
    let lookup: HashMap<ProductCell, usize> =
        origin.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut prod = Product {
        pres: Presentation::empty(x.poset.clone()),
        origin,
        lookup,
    };
    let mut cells = Vec::with_capacity(prod.origin.len());
    for pc in &prod.origin {
        let dim = pc.path.len() - 1;
        let xcell = &x.cells[pc.x];
        let code = path_code(&pc.path);
        let id = if code.is_empty() {
            format!("({},{})", xcell.id, k.cells[pc.k].id)
        } else {
            format!("({},{})[{}]", xcell.id, k.cells[pc.k].id, code)
        };
        let faces = if dim == 0 {
            vec![]
        } else {
            (0..=dim)
                .map(|i| {
                    let mut pairs = pc.path.clone();
                    pairs.remove(i);
                    let s = prod.simplex_of(x, k, pc.x, pc.k, &pairs);
                    FaceRef {
                        cell: s.cell,
                        degen: s.map,
                    }
                })
                .collect()
        };
        cells.push(Cell {
            id,
            dim,
            faces,
            chain: pc.path.iter().map(|&(a, _)| xcell.chain[a]).collect(),
        });
    }
    prod.pres = Presentation::new(x.poset.clone(), cells).expect("product ids are unique");
    prod
}

/// `X ⊗ Δ[n]`.
pub fn tensor_with_standard(x: &Presentation, n: usize) -> Presentation {
    product(x, &plain_simplex(n)).pres
}

/// Join of two plain presentations over `[1]`: `A` sits over 0, `B` over 1.
pub fn join(a: &Presentation, b: &Presentation) -> Presentation {
    let poset = Poset::linear(1);
    let ids_a: HashSet<&str> = a.cells.iter().map(|c| c.id.as_str()).collect();
    let clash = b.cells.iter().any(|c| ids_a.contains(c.id.as_str()));
    let na = |s: &str| if clash { format!("a{s}") } else { s.to_string() };
    let nb = |s: &str| if clash { format!("b{s}") } else { s.to_string() };
    let (la, lb) = (a.len(), b.len());
    let joint = |i: usize, j: usize| la + lb + i * lb + j;
    let mut cells = Vec::with_capacity(la + lb + la * lb);
    for c in &a.cells {
        cells.push(Cell {
            id: na(&c.id),
            dim: c.dim,
            faces: c.faces.clone(),
            chain: vec![0; c.dim + 1],
        });
    }
    for c in &b.cells {
        cells.push(Cell {
            id: nb(&c.id),
            dim: c.dim,
            faces: c
                .faces
                .iter()
                .map(|f| FaceRef {
                    cell: f.cell + la,
                    degen: f.degen.clone(),
                })
                .collect(),
            chain: vec![1; c.dim + 1],
        });
    }
    for (i, s) in a.cells.iter().enumerate() {
        for (j, t) in b.cells.iter().enumerate() {
            let dim = s.dim + t.dim + 1;
            let mut faces = Vec::with_capacity(dim + 1);
            for f in 0..=s.dim {
                if s.dim == 0 {
                    faces.push(FaceRef::plain(la + j, t.dim));
                } else {
                    let fr = &s.faces[f];
                    let sd = a.cells[fr.cell].dim;
                    let mut degen = fr.degen.clone();
                    degen.extend((0..=t.dim).map(|v| sd + 1 + v));
                    faces.push(FaceRef {
                        cell: joint(fr.cell, j),
                        degen,
                    });
                }
            }
            for f in 0..=t.dim {
                if t.dim == 0 {
                    faces.push(FaceRef::plain(i, s.dim));
                } else {
                    let fr = &t.faces[f];
                    let mut degen: Vec<usize> = (0..=s.dim).collect();
                    degen.extend(fr.degen.iter().map(|&v| s.dim + 1 + v));
                    faces.push(FaceRef {
                        cell: joint(i, fr.cell),
                        degen,
                    });
                }
            }
            let mut chain = vec![0; s.dim + 1];
            chain.extend(std::iter::repeat(1).take(t.dim + 1));
            cells.push(Cell {
                id: format!("{}*{}", na(&s.id), nb(&t.id)),
                dim,
                faces,
                chain,
            });
        }
    }
    Presentation::new(poset, cells).expect("join ids are unique")
}

/// Collapses a face-closed set of cells with a single common label to one
/// vertex. Returns the quotient and the projection.
pub fn quotient(x: &Presentation, a: &[usize]) -> Result<(Presentation, SimplicialMap)> {
    if a.is_empty() {
        return Ok((x.clone(), SimplicialMap::identity(x)));
    }
    let mut in_a = vec![false; x.len()];
    for &i in a {
        in_a[i] = true;
    }
    for &i in a {
        for f in &x.cells[i].faces {
            if !in_a[f.cell] {
                return Err(Error::Presentation(format!(
                    "collapsed set is not closed under faces at `{}`",
                    x.cells[i].id
                )));
            }
        }
    }
    let label = x.cells[a[0]].chain[0];
    for &i in a {
        if x.cells[i].chain.iter().any(|&s| s != label) {
            return Err(Error::Stratification(format!(
                "cell `{}` does not carry the single label `{}`",
                x.cells[i].id,
                x.poset.label(label)
            )));
        }
    }
    let taken: HashSet<String> = x.cells.iter().map(|c| c.id.clone()).collect();
    let mut pos = vec![usize::MAX; x.len()];
    let mut k = 1;
    for i in 0..x.len() {
        if !in_a[i] {
            pos[i] = k;
            k += 1;
        }
    }
    let mut cells = vec![Cell {
        id: fresh_id("*".into(), &taken),
        dim: 0,
        faces: vec![],
        chain: vec![label],
    }];
    for (i, c) in x.cells.iter().enumerate() {
        if in_a[i] {
            continue;
        }
        cells.push(Cell {
            id: c.id.clone(),
            dim: c.dim,
            faces: c
                .faces
                .iter()
                .map(|f| {
                    if in_a[f.cell] {
                        FaceRef {
                            cell: 0,
                            degen: vec![0; c.dim],
                        }
                    } else {
                        FaceRef {
                            cell: pos[f.cell],
                            degen: f.degen.clone(),
                        }
                    }
                })
                .collect(),
            chain: c.chain.clone(),
        });
    }
    let q = Presentation::new(x.poset.clone(), cells)?;
    let images = (0..x.len())
        .map(|i| {
            if in_a[i] {
                Simplex {
                    cell: 0,
                    map: vec![0; x.cells[i].dim + 1],
                }
            } else {
                q.cell_simplex(pos[i])
            }
        })
        .collect();
    Ok((q, SimplicialMap { images }))
}

/// `S^a × cS^b` over `[1]`, with `S^a = ∂Δ[a+1]` and the cone apex first.
pub fn product_sphere_cone(a: usize, b: usize) -> Result<Presentation> {
    if a < 1 || b < 1 || a + b + 1 > 4 {
        return Err(Error::Unsupported(format!(
            "sphere-cone product needs a,b >= 1 and a+b+1 <= 4, got a={a}, b={b}"
        )));
    }
    let cone = cone_on(&plain_boundary(b + 1));
    Ok(product(&cone, &plain_boundary(a + 1)).pres)
}

/// `Δ[0] ∗ B` with apex `c` over 0.
pub fn cone_on(b: &Presentation) -> Presentation {
    let apex = Presentation::new(
        Poset::point(),
        vec![Cell {
            id: "c".into(),
            dim: 0,
            faces: vec![],
            chain: vec![0],
        }],
    )
    .unwrap();
    join(&apex, b)
}

/// Finds an isomorphism of presentations (face- and label-preserving
/// bijection of cells), as the image index of every cell of `a`.
pub fn isomorphism(a: &Presentation, b: &Presentation) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.poset.labels() != b.poset.labels() {
        return None;
    }
    if a.canonical_form() != b.canonical_form() {
        return None;
    }
    let ka = a.canonical_keys();
    let kb = b.canonical_keys();
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(a.cells[i].dim));
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];

    fn assign(
        a: &Presentation,
        b: &Presentation,
        i: usize,
        j: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        trail: &mut Vec<usize>,
    ) -> bool {
        if map[i] != usize::MAX {
            return map[i] == j;
        }
        if used[j] {
            return false;
        }
        map[i] = j;
        used[j] = true;
        trail.push(i);
        let (ci, cj) = (&a.cells[i], &b.cells[j]);
        for (fi, fj) in ci.faces.iter().zip(&cj.faces) {
            if fi.degen != fj.degen || !assign(a, b, fi.cell, fj.cell, map, used, trail) {
                return false;
            }
        }
        true
    }

    fn search(
        a: &Presentation,
        b: &Presentation,
        ka: &[u64],
        kb: &[u64],
        order: &[usize],
        pos: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&i) = order.get(pos) else { return true };
        if map[i] != usize::MAX {
            return search(a, b, ka, kb, order, pos + 1, map, used);
        }
        for j in 0..b.len() {
            if used[j] || kb[j] != ka[i] {
                continue;
            }
            let mut trail = Vec::new();
            if assign(a, b, i, j, map, used, &mut trail)
                && search(a, b, ka, kb, order, pos + 1, map, used)
            {
                return true;
            }
            for t in trail {
                used[map[t]] = false;
                map[t] = usize::MAX;
            }
        }
        false
    }

    search(a, b, &ka, &kb, &order, 0, &mut map, &mut used).then_some(map)
}

/// The nerve `N(P)`: one cell per strict chain.
pub fn nerve(poset: &Poset) -> Presentation {
    let chains = poset.strict_chains();
    let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let cells = chains
        .iter()
        .map(|c| {
            let dim = c.len() - 1;
            let faces = if dim == 0 {
                vec![]
            } else {
                (0..=dim)
                    .map(|i| {
                        let mut d = c.clone();
                        d.remove(i);
                        FaceRef::plain(index[&d], dim - 1)
                    })
                    .collect()
            };
            Cell {
                id: format!("[{}]", poset.chain_labels(c).join(",")),
                dim,
                faces,
                chain: c.clone(),
            }
        })
        .collect();
    Presentation::new(poset.clone(), cells).expect("chains are distinct")
}
