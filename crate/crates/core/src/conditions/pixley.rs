//! Pixley–Wille reduction: a congruence inclusion in the restricted shape
//! holds in the variety iff a single membership holds in a finitely
//! generated free algebra with canonically generated congruences.
//!
//! Every congruence here is generated by pairs of generators, hence equals
//! the kernel of the retraction that merges those generators. Membership is
//! therefore a comparison of tuple restrictions to the assignments constant
//! on the merged blocks, and the free algebra only needs to be built over
//! the union of those assignment positions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::free::{FreeAlgebra, FreeCap, Grouping};

use super::scheme::{InclusionScheme, RelAst};

/// Dense element set over free-algebra indices.
#[derive(Clone, PartialEq, Eq)]
pub struct ElemSet {
    words: Vec<u64>,
    n: usize,
}

impl ElemSet {
    pub fn new(n: usize) -> Self {
        ElemSet { words: vec![0; n.div_ceil(64).max(1)], n }
    }

    pub fn singleton(n: usize, e: usize) -> Self {
        let mut s = ElemSet::new(n);
        s.insert(e);
        s
    }

    #[inline]
    pub fn insert(&mut self, e: usize) {
        self.words[e / 64] |= 1u64 << (e % 64);
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&e| self.contains(e))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A merge-kernel congruence of the free algebra.
pub struct PwVar {
    /// Block label per generator, canonical.
    pub partition: Vec<usize>,
    /// Raw assignment codes per base (constant on blocks).
    pub codes: Vec<Vec<u32>>,
    /// Offsets of those codes within the free algebra's stored positions.
    pub offsets: Vec<Vec<usize>>,
    /// Element classes: same key iff congruent.
    pub grouping: Grouping,
}

/// Free algebra plus the congruences a scheme's variables denote.
pub struct PwContext {
    pub free: FreeAlgebra,
    pub gens: usize,
    pub vars: BTreeMap<char, PwVar>,
}

pub(crate) fn union_find_partition(gens: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..gens).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let labels: Vec<usize> = (0..gens).map(|g| find(&mut parent, g)).collect();
    // canonicalize to block ids in order of least member
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut out = vec![0usize; gens];
    for (g, &l) in labels.iter().enumerate() {
        let next = map.len();
        out[g] = *map.entry(l).or_insert(next);
    }
    out
}

/// Assignment codes (row-major, first generator most significant) constant
/// on the partition blocks.
pub(crate) fn constant_codes(size: usize, gens: usize, partition: &[usize]) -> Vec<u32> {
    let blocks = partition.iter().max().map_or(0, |m| m + 1);
    let mut vals = vec![0usize; blocks];
    let mut out = Vec::with_capacity(size.pow(blocks as u32));
    'outer: loop {
        let mut code: u64 = 0;
        for g in 0..gens {
            code = code * size as u64 + vals[partition[g]] as u64;
        }
        out.push(code as u32);
        let mut i = blocks;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            vals[i] += 1;
            if vals[i] < size {
                break;
            }
            vals[i] = 0;
        }
    }
    out.sort_unstable();
    out
}

/// Builds the free algebra and congruences for a scheme over the given
/// bases. The free algebra is restricted to the union of the assignment
/// positions any variable's membership test reads.
pub fn build_context(
    bases: &[FiniteAlgebra],
    scheme: &InclusionScheme,
    cap: &FreeCap,
) -> Result<PwContext> {
    let gens = scheme.generators();
    let mut pairs: BTreeMap<char, Vec<(usize, usize)>> = BTreeMap::new();
    for v in scheme.variables() {
        pairs.insert(v, Vec::new());
    }
    for (i, set) in scheme.chain.iter().enumerate() {
        for &v in set {
            pairs.get_mut(&v).unwrap().push((i, i + 1));
        }
    }
    if let Some(a) = scheme.outer {
        pairs.get_mut(&a).unwrap().push((0, gens - 1));
    }

    let mut partitions: BTreeMap<char, Vec<usize>> = BTreeMap::new();
    for (&v, ps) in &pairs {
        partitions.insert(v, union_find_partition(gens, ps));
    }

    let mut union_codes: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); bases.len()];
    let mut var_codes: BTreeMap<char, Vec<Vec<u32>>> = BTreeMap::new();
    for (&v, part) in &partitions {
        let mut per_base = Vec::with_capacity(bases.len());
        for (b, base) in bases.iter().enumerate() {
            let codes = constant_codes(base.size(), gens, part);
            union_codes[b].extend(codes.iter().copied());
            per_base.push(codes);
        }
        var_codes.insert(v, per_base);
    }
    let positions: Vec<Vec<u32>> = union_codes
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();

    let free = FreeAlgebra::build_restricted(bases, gens, positions, cap)?;
    let mut vars = BTreeMap::new();
    for (v, part) in partitions {
        let codes = var_codes.remove(&v).unwrap();
        let offsets = free.resolve_positions(&codes)?;
        let grouping = free.group_by(&offsets);
        vars.insert(v, PwVar { partition: part, codes, offsets, grouping });
    }
    Ok(PwContext { free, gens, vars })
}

impl PwContext {
    pub fn n(&self) -> usize {
        self.free.len()
    }

    pub fn start(&self) -> usize {
        self.free.generator_element(0)
    }

    pub fn target(&self) -> usize {
        self.free.generator_element(self.gens - 1)
    }

    fn var(&self, v: char) -> Result<&PwVar> {
        self.vars
            .get(&v)
            .ok_or_else(|| Error::Scheme(format!("unknown variable `{v}`")))
    }

    /// Whether `(u,w)` lies in the congruence denoted by `v`.
    pub fn related(&self, v: char, u: usize, w: usize) -> Result<bool> {
        let var = self.var(v)?;
        Ok(var.grouping.class_of[u] == var.grouping.class_of[w])
    }

    fn step_var(&self, v: char, from: &ElemSet) -> Result<ElemSet> {
        let var = self.var(v)?;
        let mut touched = vec![false; var.grouping.classes.len()];
        for e in from.iter() {
            touched[var.grouping.class_of[e] as usize] = true;
        }
        let mut out = ElemSet::new(self.n());
        for (c, hit) in touched.iter().enumerate() {
            if *hit {
                for &m in &var.grouping.classes[c] {
                    out.insert(m as usize);
                }
            }
        }
        Ok(out)
    }

    /// Meet of pure-variable parts is still an equivalence: group by the
    /// tuple of class ids.
    fn step_var_meet(&self, vs: &[char], from: &ElemSet) -> Result<ElemSet> {
        let groupings: Vec<&Grouping> = vs
            .iter()
            .map(|&v| self.var(v).map(|pv| &pv.grouping))
            .collect::<Result<Vec<_>>>()?;
        let n = self.n();
        let mut key_of: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut class_of = vec![0u32; n];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for (e, slot) in class_of.iter_mut().enumerate() {
            let key: Vec<u32> = groupings.iter().map(|g| g.class_of[e]).collect();
            let id = *key_of.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                (classes.len() - 1) as u32
            });
            *slot = id;
            classes[id as usize].push(e as u32);
        }
        let mut touched = vec![false; classes.len()];
        for e in from.iter() {
            touched[class_of[e] as usize] = true;
        }
        let mut out = ElemSet::new(n);
        for (c, hit) in touched.iter().enumerate() {
            if *hit {
                for &m in &classes[c] {
                    out.insert(m as usize);
                }
            }
        }
        Ok(out)
    }

    fn pure_vars(ast: &RelAst) -> Option<Vec<char>> {
        match ast {
            RelAst::Var(c) => Some(vec![*c]),
            RelAst::Meet(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(Self::pure_vars(x)?);
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Image of `from` under the relation: `{w : ∃u ∈ from, (u,w) ∈ rel}`,
    /// or the preimage when `forward` is false.
    pub fn reach(&self, rel: &RelAst, from: &ElemSet, forward: bool) -> Result<ElemSet> {
        match rel {
            RelAst::Var(v) => self.step_var(*v, from),
            RelAst::Converse(r) => self.reach(r, from, !forward),
            RelAst::Compose(rs) => {
                let mut cur = from.clone();
                if forward {
                    for r in rs {
                        cur = self.reach(r, &cur, true)?;
                    }
                } else {
                    for r in rs.iter().rev() {
                        cur = self.reach(r, &cur, false)?;
                    }
                }
                Ok(cur)
            }
            RelAst::Meet(parts) => {
                if let Some(vs) = Self::pure_vars(rel) {
                    return self.step_var_meet(&vs, from);
                }
                // general meet: intersect per-source images
                let mut out = ElemSet::new(self.n());
                for u in from.iter() {
                    let single = ElemSet::singleton(self.n(), u);
                    let mut acc: Option<ElemSet> = None;
                    for p in parts {
                        let img = self.reach(p, &single, forward)?;
                        acc = Some(match acc {
                            None => img,
                            Some(mut a) => {
                                a.intersect_with(&img);
                                a
                            }
                        });
                    }
                    if let Some(a) = acc {
                        out.union_with(&a);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Membership `(u,w) ∈ rel`.
    pub fn member(&self, rel: &RelAst, u: usize, w: usize) -> Result<bool> {
        Ok(self
            .reach(rel, &ElemSet::singleton(self.n(), u), true)?
            .contains(w))
    }

    /// Decides `(start, target) ∈ factor_1 ∘ … ∘ factor_j` layer by layer
    /// and reconstructs a witnessing chain of elements.
    pub fn chain_through(
        &self,
        factors: &[RelAst],
        start: usize,
        target: usize,
    ) -> Result<Option<Vec<usize>>> {
        let mut layers: Vec<ElemSet> = vec![ElemSet::singleton(self.n(), start)];
        for f in factors {
            let next = self.reach(f, layers.last().unwrap(), true)?;
            layers.push(next);
        }
        if !layers.last().unwrap().contains(target) {
            return Ok(None);
        }
        let mut chain = vec![target];
        let mut cur = target;
        for i in (0..factors.len()).rev() {
            let mut pred = None;
            for u in layers[i].iter() {
                if self.member(&factors[i], u, cur)? {
                    pred = Some(u);
                    break;
                }
            }
            let u = pred.ok_or_else(|| Error::Internal("chain backtrack failed".into()))?;
            chain.push(u);
            cur = u;
        }
        chain.reverse();
        Ok(Some(chain))
    }
}

/// Outcome of a generic scheme check on the free algebra.
#[derive(Clone, Debug)]
pub struct GenericCheck {
    pub holds: bool,
    pub generators: usize,
    pub free_elements: usize,
    /// Witness chain through the right side's top-level factors when the
    /// inclusion holds.
    pub chain: Option<Vec<usize>>,
}

/// Decides whether the inclusion holds in the variety generated by `bases`.
pub fn check_identity_generic(
    bases: &[FiniteAlgebra],
    scheme: &InclusionScheme,
    cap: &FreeCap,
) -> Result<GenericCheck> {
    let ctx = build_context(bases, scheme, cap)?;
    let factors: Vec<RelAst> = match &scheme.rhs {
        RelAst::Compose(fs) => fs.clone(),
        other => vec![other.clone()],
    };
    let chain = ctx.chain_through(&factors, ctx.start(), ctx.target())?;
    Ok(GenericCheck {
        holds: chain.is_some(),
        generators: ctx.gens,
        free_elements: ctx.free.len(),
        chain,
    })
}
