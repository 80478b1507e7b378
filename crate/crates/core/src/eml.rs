//! Skeleta of Eilenberg-MacLane spaces over `F_q`, classical and perverse,
//! and the groups of cohomology operations they classify.

use std::collections::HashMap;

use crate::blowup::LocalComplex;
use crate::complex::{GlobalComplex, RelativeComplex};
use crate::error::{Error, Result};
use crate::linalg::{is_prime, CohomologyGroup, Ring, SparseMatrix};
use crate::poset::{Perversity, Poset};
use crate::sset::{cone_on, product, quotient, skeleton, standard_simplex, Cell, FaceRef, Presentation};

/// Default cap on the number of cells of one skeleton.
pub const CELL_CAP: usize = 200_000;

#[derive(Debug, Clone)]
pub struct EmlSkeleton {
    pub prime: u64,
    pub n: usize,
    pub perversity: Perversity,
    pub dim: usize,
    pub pres: Presentation,
    /// Cells of the copy of the nerve made of zero cocycles.
    pub basepoint: Vec<usize>,
    /// Cocycle carried by each cell; empty over non-regular chains.
    pub cocycles: Vec<Vec<u64>>,
}

struct ChainData {
    local: LocalComplex,
    /// Face pullbacks in degree `n`, `None` for non-regular faces.
    faces: Vec<Option<SparseMatrix>>,
    /// `s_j^* d_j^*` in degree `n` for each repeated pair `j, j+1`.
    degen: Vec<Option<SparseMatrix>>,
}

fn apply_mod(m: &SparseMatrix, z: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; m.rows];
    for (c, col) in m.columns.iter().enumerate() {
        if z[c] == 0 {
            continue;
        }
        for &(r, v) in col {
            out[r] = (out[r] + (v.rem_euclid(q as i64) as u64) * z[c]) % q;
        }
    }
    out
}

fn chain_id(poset: &Poset, chain: &[usize], z: &[u64]) -> String {
    let labels = poset.chain_labels(chain).join(",");
    let z: String = z.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
    format!("[{labels}]{z}")
}

fn strict(chain: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut s = chain.to_vec();
    s.dedup();
    let map = chain.iter().map(|c| s.iter().position(|t| t == c).unwrap()).collect();
    (s, map)
}

/// The `d`-skeleton of `K(F_q, n, P, p)`: over a regular chain `σ` the cells
/// are the nondegenerate allowable `n`-cocycles of the blow-up of `Δ[σ]`;
/// non-regular chains carry a single point.
pub fn perverse_eml_skeleton(poset: &Poset, q: u64, n: usize, p: &Perversity, d: usize) -> Result<EmlSkeleton> {
    perverse_eml_skeleton_capped(poset, q, n, p, d, CELL_CAP)
}

pub fn perverse_eml_skeleton_capped(
    poset: &Poset,
    q: u64,
    n: usize,
    p: &Perversity,
    d: usize,
    cap: usize,
) -> Result<EmlSkeleton> {
    if !is_prime(q) {
        return Err(Error::Ring(format!("cell enumeration needs a prime field, got {q}")));
    }
    if p.len() != poset.len() {
        return Err(Error::Perversity("perversity does not match the poset".into()));
    }
    let mut data: HashMap<Vec<usize>, ChainData> = HashMap::new();
    let mut cells: Vec<Cell> = Vec::new();
    let mut cocycles: Vec<Vec<u64>> = Vec::new();
    let mut lookup: HashMap<(Vec<usize>, Vec<u64>), usize> = HashMap::new();
    let mut vcell: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut basepoint = Vec::new();

    for k in 0..=d {
        for sigma in poset.weak_chains(k + 1) {
            if !poset.is_regular(&sigma) {
                let (s, _) = strict(&sigma);
                if s.len() != sigma.len() {
                    continue;
                }
                let faces = if k == 0 {
                    vec![]
                } else {
                    (0..=k)
                        .map(|i| {
                            let mut t = sigma.clone();
                            t.remove(i);
                            FaceRef::plain(vcell[&t], k - 1)
                        })
                        .collect()
                };
                vcell.insert(sigma.clone(), cells.len());
                basepoint.push(cells.len());
                cells.push(Cell {
                    id: format!("v[{}]", poset.chain_labels(&sigma).join(",")),
                    dim: k,
                    faces,
                    chain: sigma.clone(),
                });
                cocycles.push(Vec::new());
                continue;
            }
            let cd = chain_data(poset, &sigma, n)?;
            let zs = cd.local.cocycles_mod_p(p, n, q, cap)?;
            for z in zs {
                let degenerate = cd.degen.iter().flatten().any(|m| apply_mod(m, &z, q) == z);
                if degenerate {
                    continue;
                }
                let mut faces = Vec::new();
                if k > 0 {
                    for i in 0..=k {
                        let mut tau = sigma.clone();
                        tau.remove(i);
                        let w = match &cd.faces[i] {
                            Some(m) => apply_mod(m, &z, q),
                            None => Vec::new(),
                        };
                        faces.push(face_ref(poset, &mut data, &lookup, &vcell, &tau, w, n, q)?);
                    }
                }
                if cells.len() >= cap {
                    return Err(Error::TooLarge(format!(
                        "skeleton exceeds {cap} cells in dimension {k}"
                    )));
                }
                let zero = z.iter().all(|v| *v == 0);
                if zero {
                    basepoint.push(cells.len());
                }
                lookup.insert((sigma.clone(), z.clone()), cells.len());
                cells.push(Cell {
                    id: chain_id(poset, &sigma, &z),
                    dim: k,
                    faces,
                    chain: sigma.clone(),
                });
                cocycles.push(z);
            }
            data.insert(sigma, cd);
        }
    }
    Ok(EmlSkeleton {
        prime: q,
        n,
        perversity: p.clone(),
        dim: d,
        pres: Presentation::new(poset.clone(), cells)?,
        basepoint,
        cocycles,
    })
}

fn chain_data(poset: &Poset, sigma: &[usize], n: usize) -> Result<ChainData> {
    let local = LocalComplex::from_chain(poset, sigma)?;
    let k = sigma.len() - 1;
    let mut faces = Vec::new();
    if k > 0 {
        for i in 0..=k {
            let mut tau = sigma.to_vec();
            tau.remove(i);
            if !poset.is_regular(&tau) {
                faces.push(None);
                continue;
            }
            let (_, mats) = local.face_pullback(i)?;
            faces.push(Some(mats.get(n).cloned().unwrap_or_else(|| SparseMatrix::zeros(0, local.dim(n)))));
        }
    }
    let mut degen = Vec::new();
    for j in 0..k {
        if sigma[j] != sigma[j + 1] {
            degen.push(None);
            continue;
        }
        let face = faces[j].as_ref().expect("repeated vertex keeps the chain regular");
        let (small, _) = local.face_pullback(j)?;
        let (_, up) = small.degeneracy_pullback(j);
        let s = up.get(n).cloned().unwrap_or_else(|| SparseMatrix::zeros(local.dim(n), 0));
        degen.push(Some(s.mul(face)));
    }
    Ok(ChainData { local, faces, degen })
}

/// Normal form of the simplex `(τ, w)` as a face reference.
#[allow(clippy::too_many_arguments)]
fn face_ref(
    poset: &Poset,
    data: &mut HashMap<Vec<usize>, ChainData>,
    lookup: &HashMap<(Vec<usize>, Vec<u64>), usize>,
    vcell: &HashMap<Vec<usize>, usize>,
    tau: &[usize],
    w: Vec<u64>,
    n: usize,
    q: u64,
) -> Result<FaceRef> {
    if !poset.is_regular(tau) {
        let (s, map) = strict(tau);
        return Ok(FaceRef {
            cell: vcell[&s],
            degen: map,
        });
    }
    let mut tau = tau.to_vec();
    let mut w = w;
    let mut collapse: Vec<usize> = Vec::new();
    'outer: loop {
        if !data.contains_key(&tau) {
            let cd = chain_data(poset, &tau, n)?;
            data.insert(tau.clone(), cd);
        }
        let cd = &data[&tau];
        for (j, m) in cd.degen.iter().enumerate() {
            let Some(m) = m else { continue };
            if apply_mod(m, &w, q) == w {
                let f = cd.faces[j].as_ref().unwrap();
                w = apply_mod(f, &w, q);
                tau.remove(j);
                collapse.push(j);
                continue 'outer;
            }
        }
        break;
    }
    let cell = *lookup
        .get(&(tau.clone(), w.clone()))
        .ok_or_else(|| Error::Presentation(format!("missing face cell over {:?}", tau)))?;
    // compose the collapses s_{j_1}, s_{j_2}, ... applied outermost first
    let len = tau.len() + collapse.len();
    let mut map: Vec<usize> = (0..len).collect();
    for &j in &collapse {
        map = map.iter().map(|&v| if v > j { v - 1 } else { v }).collect();
    }
    Ok(FaceRef { cell, degen: map })
}

/// `K(F_q, n)^(d)` as a presentation over the point.
pub fn classical_eml_skeleton(q: u64, n: usize, d: usize) -> Result<Presentation> {
    let pt = Poset::point();
    Ok(perverse_eml_skeleton(&pt, q, n, &Perversity::zero(&pt), d)?.pres)
}

/// `(Δ[0] ∗ K(F_q, n))^(d)` over `[1]`.
pub fn joyal_infinite_model(q: u64, n: usize, d: usize) -> Result<Presentation> {
    let k = classical_eml_skeleton(q, n, d)?;
    Ok(skeleton(&cone_on(&k), d))
}

/// `((Δ[1] × K(F_q, n)) / (Δ[0] × K(F_q, n)))^(d)` over `[1]`.
pub fn zero_perversity_model(q: u64, n: usize, d: usize) -> Result<Presentation> {
    let k = classical_eml_skeleton(q, n, d)?;
    let poset = Poset::linear(1);
    let edge = standard_simplex(&poset, &[0, 1]);
    let prod = product(&edge, &k);
    let bottom = edge.find("0").expect("vertex 0");
    let collapsed: Vec<usize> = (0..prod.pres.len())
        .filter(|&c| prod.origin[c].x == bottom)
        .collect();
    let (qp, _) = quotient(&prod.pres, &collapsed)?;
    Ok(skeleton(&qp, d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationReport {
    pub group: CohomologyGroup,
    pub next: CohomologyGroup,
    pub truncation: usize,
    pub stable: bool,
}

/// Natural transformations `H^n_source -> H^m_target` over `F_q`, read off
/// the reduced cohomology of the `d`- and `(d+1)`-skeleta of
/// `K(F_q, n, P, source)`.
pub fn operation_group(
    poset: &Poset,
    q: u64,
    n: usize,
    source: &Perversity,
    m: usize,
    target: &Perversity,
    d: usize,
) -> Result<OperationReport> {
    if d < m + 1 {
        return Err(Error::Truncation { degree: m, kmax: d });
    }
    let big = perverse_eml_skeleton(poset, q, n, source, d + 1)?;
    let small_pres = skeleton(&big.pres, d);
    let group = skeleton_cohomology(&small_pres, &big.basepoint, m, target, q)?;
    let next = skeleton_cohomology(&big.pres, &big.basepoint, m, target, q)?;
    let stable = group == next;
    Ok(OperationReport {
        group,
        next,
        truncation: d,
        stable,
    })
}

fn skeleton_cohomology(x: &Presentation, basepoint: &[usize], m: usize, target: &Perversity, q: u64) -> Result<CohomologyGroup> {
    let a: Vec<usize> = basepoint.iter().copied().filter(|&c| c < x.len()).collect();
    let rel = RelativeComplex::new(x, &a, m + 1)?;
    rel.cohomology(target, Ring::Fp(q), m)
}

/// Unreduced cohomology of a presentation in degree `k`, checked against the
/// next skeleton.
pub fn stable_cohomology(x_d: &Presentation, x_next: &Presentation, p: &Perversity, ring: Ring, k: usize) -> Result<(CohomologyGroup, bool)> {
    let a = GlobalComplex::new(x_d, k + 1)?.cohomology(p, ring, k, None)?;
    let b = GlobalComplex::new(x_next, k + 1)?.cohomology(p, ring, k, None)?;
    let stable = a == b;
    Ok((a, stable))
}
