//! Finite posets, chains of the nerve and perversities.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integers extended by both infinities, ordered `-inf < n < +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn parse(s: &str) -> Result<ExtInt> {
        match s.trim() {
            "-inf" | "-∞" | "neginf" => Ok(ExtInt::NegInf),
            "+inf" | "inf" | "∞" | "+∞" => Ok(ExtInt::PosInf),
            t => t
                .parse::<i64>()
                .map(ExtInt::Fin)
                .map_err(|_| Error::Parse(format!("not an extended integer: `{t}`"))),
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            ExtInt::Fin(v) => serde_json::Value::from(v),
            other => serde_json::Value::from(other.to_string()),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ExtInt> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(ExtInt::Fin)
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
            serde_json::Value::String(s) => ExtInt::parse(s),
            other => Err(Error::Parse(format!("not an extended integer: {other}"))),
        }
    }
}

/// `-inf` absorbs everything, including `+inf`.
impl Add for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: ExtInt) -> ExtInt {
        use ExtInt::*;
        match (self, rhs) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Fin(a), Fin(b)) => Fin(a + b),
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::PosInf => write!(f, "+inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
        }
    }
}

/// A finite poset. Order queries use a precomputed reachability matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    covers: Vec<(usize, usize)>,
    leq: Vec<Vec<bool>>,
    maximal: Vec<bool>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

impl Poset {
    pub fn new(labels: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Poset> {
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Poset(format!("duplicate element `{l}`")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(s, t) in &covers {
            if s >= n || t >= n {
                return Err(Error::Poset(format!("cover ({s},{t}) out of range")));
            }
            leq[s][t] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Poset(format!(
                        "cycle through `{}` and `{}`",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let maximal = (0..n)
            .map(|i| (0..n).all(|j| j == i || !leq[i][j]))
            .collect();
        Ok(Poset {
            labels,
            covers,
            leq,
            maximal,
            index,
        })
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Poset> {
        let labels = spec.elements.clone();
        let pos: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut covers = Vec::new();
        for (s, t) in &spec.covers {
            let a = *pos.get(s.as_str()).ok_or_else(|| Error::UnknownLabel(s.clone()))?;
            let b = *pos.get(t.as_str()).ok_or_else(|| Error::UnknownLabel(t.clone()))?;
            covers.push((a, b));
        }
        Poset::new(labels, covers)
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            elements: self.labels.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(s, t)| (self.labels[s].clone(), self.labels[t].clone()))
                .collect(),
        }
    }

    /// The one-point poset.
    pub fn point() -> Poset {
        Poset::new(vec!["0".into()], vec![]).unwrap()
    }

    /// `[n] = {0 < 1 < ... < n}`.
    pub fn linear(n: usize) -> Poset {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        Poset::new(labels, (0..n).map(|i| (i, i + 1)).collect()).unwrap()
    }

    /// `[n]^op`: element `i` sits above `i+1`, so `0` is the maximum.
    pub fn linear_op(n: usize) -> Poset {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        Poset::new(labels, (0..n).map(|i| (i + 1, i)).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn is_maximal(&self, a: usize) -> bool {
        self.maximal[a]
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.maximal[i]).collect()
    }

    /// Up-closed subsets are the open sets of the Alexandrov topology.
    pub fn alexandrov_open(&self, subset: &[usize]) -> bool {
        let mut inside = vec![false; self.len()];
        for &s in subset {
            inside[s] = true;
        }
        subset
            .iter()
            .all(|&s| (0..self.len()).all(|t| !self.leq[s][t] || inside[t]))
    }

    pub fn alexandrov_open_labels(&self, subset: &[&str]) -> Result<bool> {
        let idx: Vec<usize> = subset
            .iter()
            .map(|l| self.index_of(l))
            .collect::<Result<_>>()?;
        Ok(self.alexandrov_open(&idx))
    }

    /// Weakly increasing and nonempty.
    pub fn is_chain(&self, chain: &[usize]) -> bool {
        !chain.is_empty()
            && chain.iter().all(|&s| s < self.len())
            && chain.windows(2).all(|w| self.leq[w[0]][w[1]])
    }

    pub fn is_regular(&self, chain: &[usize]) -> bool {
        chain.last().is_some_and(|&s| self.maximal[s])
    }

    /// Strictly increasing chains, sorted by length then lexicographically.
    pub fn strict_chains(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let last = *c.last().unwrap();
                for t in 0..self.len() {
                    if self.lt(last, t) {
                        let mut d = c.clone();
                        d.push(t);
                        next.push(d);
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Weakly increasing chains with `len` letters, in lexicographic order.
    pub fn weak_chains(&self, len: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return vec![];
        }
        let mut cur: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for c in &cur {
                let last = *c.last().unwrap();
                for t in 0..self.len() {
                    if self.leq[last][t] {
                        let mut d = c.clone();
                        d.push(t);
                        next.push(d);
                    }
                }
            }
            cur = next;
        }
        cur.sort();
        cur
    }

    pub fn chain_labels(&self, chain: &[usize]) -> Vec<String> {
        chain.iter().map(|&s| self.labels[s].clone()).collect()
    }
}

/// One block `s^[q]` of a grouped chain: element `s` repeated `q+1` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub elem: usize,
    pub q: usize,
}

/// Groups equal consecutive letters: `(0,0,1)` becomes `0^[1] < 1^[0]`.
pub fn join_decomposition(chain: &[usize]) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for &s in chain {
        match out.last_mut() {
            Some(b) if b.elem == s => b.q += 1,
            _ => out.push(Block { elem: s, q: 0 }),
        }
    }
    out
}

pub fn flatten_blocks(blocks: &[Block]) -> Vec<usize> {
    blocks
        .iter()
        .flat_map(|b| std::iter::repeat(b.elem).take(b.q + 1))
        .collect()
}

/// An order preserving map between two posets.
#[derive(Debug, Clone)]
pub struct MonotoneMap {
    pub source: Poset,
    pub target: Poset,
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Poset, target: Poset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::NotMonotone(format!(
                "map has {} entries for {} elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::NotMonotone(format!("target index {bad} out of range")));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(map[a], map[b]) {
                    return Err(Error::NotMonotone(format!(
                        "{} <= {} but {} is not <= {}",
                        source.label(a),
                        source.label(b),
                        target.label(map[a]),
                        target.label(map[b])
                    )));
                }
            }
        }
        Ok(MonotoneMap { source, target, map })
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// A perversity: one extended integer per element, zero on maximal elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perversity {
    values: Vec<ExtInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GmKind {
    Zero,
    Top,
    LowerMiddle,
    UpperMiddle,
    Explicit(Vec<i64>),
}

impl Perversity {
    pub fn new(poset: &Poset, values: Vec<ExtInt>) -> Result<Perversity> {
        if values.len() != poset.len() {
            return Err(Error::Perversity(format!(
                "{} values for {} elements",
                values.len(),
                poset.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if poset.is_maximal(i) && *v != ExtInt::Fin(0) {
                return Err(Error::Perversity(format!(
                    "maximal element `{}` must have value 0",
                    poset.label(i)
                )));
            }
        }
        Ok(Perversity { values })
    }

    /// Values for non-maximal elements keyed by label; missing keys are errors.
    pub fn from_labels(poset: &Poset, values: &BTreeMap<String, ExtInt>) -> Result<Perversity> {
        for k in values.keys() {
            poset.index_of(k)?;
        }
        let mut v = Vec::with_capacity(poset.len());
        for i in 0..poset.len() {
            let l = poset.label(i);
            match values.get(l) {
                Some(x) => v.push(*x),
                None if poset.is_maximal(i) => v.push(ExtInt::Fin(0)),
                None => {
                    return Err(Error::Perversity(format!("no value for element `{l}`")));
                }
            }
        }
        Perversity::new(poset, v)
    }

    /// `value` on every non-maximal element.
    pub fn constant(poset: &Poset, value: ExtInt) -> Perversity {
        Perversity {
            values: (0..poset.len())
                .map(|i| if poset.is_maximal(i) { ExtInt::Fin(0) } else { value })
                .collect(),
        }
    }

    pub fn zero(poset: &Poset) -> Perversity {
        Self::constant(poset, ExtInt::Fin(0))
    }

    pub fn infinite(poset: &Poset) -> Perversity {
        Self::constant(poset, ExtInt::PosInf)
    }

    pub fn values(&self) -> &[ExtInt] {
        &self.values
    }

    pub fn at(&self, s: usize) -> ExtInt {
        self.values[s]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise order.
    pub fn le(&self, other: &Perversity) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Perversity) -> Result<Perversity> {
        if self.len() != other.len() {
            return Err(Error::Perversity("perversities live on different posets".into()));
        }
        Ok(Perversity {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn to_json(&self, poset: &Poset) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for i in 0..poset.len() {
            if !poset.is_maximal(i) {
                m.insert(poset.label(i).to_string(), self.values[i].to_json());
            }
        }
        serde_json::Value::Object(m)
    }

    pub fn display(&self, poset: &Poset) -> String {
        let parts: Vec<String> = (0..poset.len())
            .filter(|&i| !poset.is_maximal(i))
            .map(|i| format!("{}:{}", poset.label(i), self.values[i]))
            .collect();
        format!("({})", parts.join(","))
    }
}

fn gm_values(n: usize, kind: &GmKind) -> Vec<i64> {
    let f = |i: usize, g: &dyn Fn(i64) -> i64| if i >= 2 { g(i as i64) } else { 0 };
    match kind {
        GmKind::Zero => vec![0; n + 1],
        GmKind::Top => (0..=n).map(|i| f(i, &|i| i - 2)).collect(),
        GmKind::LowerMiddle => (0..=n).map(|i| f(i, &|i| (i - 2).div_euclid(2))).collect(),
        GmKind::UpperMiddle => (0..=n).map(|i| f(i, &|i| (i - 1).div_euclid(2))).collect(),
        GmKind::Explicit(v) => v.clone(),
    }
}

fn check_gm(values: &[i64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate().take(3) {
        if v != 0 {
            return Err(Error::Perversity(format!("value at {i} must be 0, got {v}")));
        }
    }
    for i in 0..values.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if !(a <= b && b <= a + 1) {
            return Err(Error::Perversity(format!(
                "growth condition fails at i={i}: {a} then {b}"
            )));
        }
    }
    Ok(())
}

/// A GM perversity on `[n]^op`, where element `i` has codimension `i`.
pub fn gm_perversity(n: usize, kind: GmKind) -> Result<Perversity> {
    let v = gm_values(n, &kind);
    if v.len() != n + 1 {
        return Err(Error::Perversity(format!(
            "expected {} values, got {}",
            n + 1,
            v.len()
        )));
    }
    check_gm(&v)?;
    Ok(Perversity {
        values: v.into_iter().map(ExtInt::Fin).collect(),
    })
}

/// `t - p` for a GM perversity `p` on `[n]^op`.
pub fn complementary(n: usize, p: &Perversity) -> Result<Perversity> {
    if p.len() != n + 1 {
        return Err(Error::Perversity("perversity is not on [n]^op".into()));
    }
    let vals: Vec<i64> = p
        .values
        .iter()
        .map(|v| v.finite().ok_or_else(|| Error::Perversity("infinite value".into())))
        .collect::<Result<_>>()?;
    check_gm(&vals)?;
    let t = gm_values(n, &GmKind::Top);
    gm_perversity(n, GmKind::Explicit(t.iter().zip(&vals).map(|(a, b)| a - b).collect()))
}

/// `(f^* q)(s) = q(f(s))` off the maximal elements.
pub fn pullback_perversity(f: &MonotoneMap, q: &Perversity) -> Result<Perversity> {
    if q.len() != f.target.len() {
        return Err(Error::Perversity("perversity is not on the target".into()));
    }
    Ok(Perversity {
        values: (0..f.source.len())
            .map(|s| {
                if f.source.is_maximal(s) {
                    ExtInt::Fin(0)
                } else {
                    q.at(f.map[s])
                }
            })
            .collect(),
    })
}

/// Infimum over fibers; `+inf` over an empty fiber, `0` on maximal elements.
pub fn pushforward_perversity(f: &MonotoneMap, p: &Perversity) -> Result<Perversity> {
    if p.len() != f.source.len() {
        return Err(Error::Perversity("perversity is not on the source".into()));
    }
    let mut vals = vec![ExtInt::PosInf; f.target.len()];
    for s in 0..f.source.len() {
        let t = f.map[s];
        vals[t] = vals[t].min(p.at(s));
    }
    for (t, v) in vals.iter_mut().enumerate() {
        if f.target.is_maximal(t) {
            *v = ExtInt::Fin(0);
        }
    }
    Ok(Perversity { values: vals })
}

/// Perversity from a name or inline JSON: `zero`, `inf`, `-inf`, an integer
/// (constant off the maximal elements), or `{"values": {...}}`.
pub fn parse_perversity(poset: &Poset, text: &str) -> Result<Perversity> {
    let t = text.trim();
    match t {
        "zero" | "0bar" => return Ok(Perversity::zero(poset)),
        "inf" | "infinity" | "+inf" => return Ok(Perversity::infinite(poset)),
        "-inf" => return Ok(Perversity::constant(poset, ExtInt::NegInf)),
        _ => {}
    }
    if let Ok(v) = t.parse::<i64>() {
        return Ok(Perversity::constant(poset, ExtInt::Fin(v)));
    }
    let json: serde_json::Value =
        serde_json::from_str(t).map_err(|e| Error::Parse(format!("perversity: {e}")))?;
    perversity_from_json(poset, &json)
}

pub fn perversity_from_json(poset: &Poset, json: &serde_json::Value) -> Result<Perversity> {
    if let Some(name) = json.get("name").and_then(|n| n.as_str()) {
        if json.get("values").is_none() {
            return parse_perversity(poset, name);
        }
    }
    // a bare object is read as the values map
    let vals = json
        .get("values")
        .unwrap_or(json)
        .as_object()
        .ok_or_else(|| Error::Parse("perversity needs a `values` object".into()))?;
    let mut m = BTreeMap::new();
    for (k, v) in vals {
        m.insert(k.clone(), ExtInt::from_json(v)?);
    }
    Perversity::from_labels(poset, &m)
}
