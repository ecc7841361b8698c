//! Spectrum functions: the distributivity levels J and J⌣ on free algebras,
//! the Day and Tschantz modularity functions, and the per-algebra relational
//! variants J^r, J^r⌣ together with the composition-factoring check (C1).

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{holds_identity, FiniteAlgebra, Term};
use crate::error::{Error, Result};
use crate::free::{FreeAlgebra, FreeCap};
use crate::rel::{all_congruences, enumerate_reflexive_admissible, enumerate_tolerances, BinRel};

use super::pixley::{build_context, ElemSet, PwContext};
use super::scheme::{InclusionScheme, RelAst};
use super::terms::TermScheme;
use super::{CapsEcho, SpectrumResult, SpectrumValue, SpectrumVariant, WitnessSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistVariant {
    Standard,
    Converse,
}

/// Witness for `(y0, y_{m+1}) ∈ αβ ∘_{k+1} αγ` (or the converse variant) in
/// the free algebra on m+2 generators: a chain of k+2 elements with a
/// relation label per step.
pub struct Witness {
    pub m: usize,
    pub k: usize,
    pub variant: DistVariant,
    pub chain: Vec<usize>,
    /// Per step: "ab" or "ag".
    pub labels: Vec<String>,
    pub free: FreeAlgebra,
    ab_off: Vec<Vec<usize>>,
    ag_off: Vec<Vec<usize>>,
}

impl Witness {
    /// Re-checks every invariant: endpoints, length, and each step pair.
    pub fn verify(&self) -> bool {
        if self.chain.len() != self.k + 2 || self.labels.len() != self.k + 1 {
            return false;
        }
        let gens = self.free.generators();
        if self.chain[0] != self.free.generator_element(0)
            || *self.chain.last().unwrap() != self.free.generator_element(gens - 1)
        {
            return false;
        }
        for (i, label) in self.labels.iter().enumerate() {
            let (u, w) = (self.chain[i], self.chain[i + 1]);
            let off = if label == "ab" { &self.ab_off } else { &self.ag_off };
            if self.free.restriction_key(u, off) != self.free.restriction_key(w, off) {
                return false;
            }
        }
        true
    }

    pub fn summary(&self) -> WitnessSummary {
        WitnessSummary {
            free_elements: self.free.len(),
            chain: self.chain.clone(),
            labels: self.labels.clone(),
        }
    }
}

/// Positions read by the three dist congruences on m+2 generators.
struct DistSetup {
    gens: usize,
    positions: Vec<Vec<u32>>,
    ab_off: Vec<Vec<usize>>,
    ag_off: Vec<Vec<usize>>,
}

fn sorted_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn offsets_in(sub: &[u32], all: &[u32]) -> Vec<usize> {
    sub.iter()
        .map(|c| all.binary_search(c).expect("subset of stored positions"))
        .collect()
}

fn dist_setup(bases: &[FiniteAlgebra], m: usize) -> DistSetup {
    use super::pixley::{constant_codes, union_find_partition};
    let gens = m + 2;
    let alpha = union_find_partition(gens, &[(0, gens - 1)]);
    let beta_pairs: Vec<(usize, usize)> =
        (0..gens - 1).step_by(2).map(|i| (i, i + 1)).collect();
    let gamma_pairs: Vec<(usize, usize)> =
        (1..gens - 1).step_by(2).map(|i| (i, i + 1)).collect();
    let beta = union_find_partition(gens, &beta_pairs);
    let gamma = union_find_partition(gens, &gamma_pairs);
    let mut positions = Vec::with_capacity(bases.len());
    let mut ab_codes = Vec::with_capacity(bases.len());
    let mut ag_codes = Vec::with_capacity(bases.len());
    for base in bases {
        let pa = constant_codes(base.size(), gens, &alpha);
        let pb = constant_codes(base.size(), gens, &beta);
        let pg = constant_codes(base.size(), gens, &gamma);
        let ab = sorted_union(&pa, &pb);
        let ag = sorted_union(&pa, &pg);
        positions.push(sorted_union(&ab, &ag));
        ab_codes.push(ab);
        ag_codes.push(ag);
    }
    let ab_off = ab_codes
        .iter()
        .zip(&positions)
        .map(|(sub, all)| offsets_in(sub, all))
        .collect();
    let ag_off = ag_codes
        .iter()
        .zip(&positions)
        .map(|(sub, all)| offsets_in(sub, all))
        .collect();
    DistSetup { gens, positions, ab_off, ag_off }
}

/// Least j ≤ max_factors with the target reachable from the first generator
/// by j alternating key-equality steps, with a witnessing chain. Sound on
/// partial closures (success is monotone in the element set).
fn bfs_keys(
    free: &FreeAlgebra,
    first_off: &[Vec<usize>],
    second_off: &[Vec<usize>],
    max_factors: usize,
) -> Option<(usize, Vec<usize>)> {
    let n = free.len();
    let start = free.generator_element(0);
    let target = free.generator_element(free.generators() - 1);
    fn classify(
        free: &FreeAlgebra,
        offsets: &[Vec<usize>],
    ) -> (Vec<u32>, Vec<Vec<u32>>) {
        let n = free.len();
        let mut class_of = Vec::with_capacity(n);
        let mut members: Vec<Vec<u32>> = Vec::new();
        match free.restriction_words(offsets) {
            Some(words) => {
                let mut map: HashMap<u64, u32> = HashMap::with_capacity(n / 2);
                for (e, &w) in words.iter().enumerate() {
                    let id = *map.entry(w).or_insert_with(|| {
                        members.push(Vec::new());
                        (members.len() - 1) as u32
                    });
                    class_of.push(id);
                    members[id as usize].push(e as u32);
                }
            }
            None => {
                let mut map: HashMap<Vec<u64>, u32> = HashMap::new();
                for e in 0..n {
                    let key = free.restriction_key(e, offsets);
                    let id = *map.entry(key).or_insert_with(|| {
                        members.push(Vec::new());
                        (members.len() - 1) as u32
                    });
                    class_of.push(id);
                    members[id as usize].push(e as u32);
                }
            }
        }
        (class_of, members)
    }
    let (first_of, first_members) = classify(free, first_off);
    let (second_of, second_members) = classify(free, second_off);
    let mut layers: Vec<Vec<u32>> = vec![vec![start as u32]];
    let mut in_layer = vec![false; n];
    let mut found_at: Option<usize> = None;
    for j in 1..=max_factors {
        let (class_of, members) = if j % 2 == 1 {
            (&first_of, &first_members)
        } else {
            (&second_of, &second_members)
        };
        let mut touched: Vec<u32> = Vec::new();
        let mut seen_class = vec![false; members.len()];
        for &e in layers.last().unwrap() {
            let c = class_of[e as usize];
            if !seen_class[c as usize] {
                seen_class[c as usize] = true;
                touched.push(c);
            }
        }
        touched.sort_unstable();
        let mut next: Vec<u32> = Vec::new();
        in_layer.iter_mut().for_each(|b| *b = false);
        for c in touched {
            for &e in &members[c as usize] {
                if !in_layer[e as usize] {
                    in_layer[e as usize] = true;
                    next.push(e);
                }
            }
        }
        next.sort_unstable();
        let hit = in_layer[target];
        layers.push(next);
        if hit {
            found_at = Some(j);
            break;
        }
    }
    let j = found_at?;
    // backtrack: least predecessor related to the current element
    let mut chain = vec![target];
    let mut cur = target;
    for i in (1..=j).rev() {
        let (class_of, _) = if i % 2 == 1 {
            (&first_of, &first_members)
        } else {
            (&second_of, &second_members)
        };
        let pred = layers[i - 1]
            .iter()
            .copied()
            .find(|&u| class_of[u as usize] == class_of[cur])
            .expect("predecessor exists") as usize;
        chain.push(pred);
        cur = pred;
    }
    chain.reverse();
    Some((j, chain))
}

enum DistOutcome {
    Found { k: usize, chain: Vec<usize>, free: FreeAlgebra },
    Exceeded { free: FreeAlgebra },
}

/// Shared engine: builds the (restricted) free algebra on m+2 generators,
/// probing after every closure round so a reachability success within
/// `stop_k` stops the closure early; failures are certified on the complete
/// closure.
fn dist_search(
    bases: &[FiniteAlgebra],
    m: usize,
    variant: DistVariant,
    bfs_k: usize,
    stop_k: Option<usize>,
    cap: &FreeCap,
) -> Result<DistOutcome> {
    let setup = dist_setup(bases, m);
    let (first_off, second_off) = match variant {
        DistVariant::Standard => (&setup.ab_off, &setup.ag_off),
        DistVariant::Converse => (&setup.ag_off, &setup.ab_off),
    };
    if bfs_k == 0 {
        // a single αβ factor is a key comparison of the two seed tuples;
        // no closure is needed in either direction
        let free =
            FreeAlgebra::build_probed(bases, setup.gens, setup.positions.clone(), cap, |_| Ok(true))?;
        return Ok(match bfs_keys(&free, first_off, second_off, 1) {
            Some((j, chain)) => DistOutcome::Found { k: j - 1, chain, free },
            None => DistOutcome::Exceeded { free },
        });
    }
    let mut early: Option<(usize, Vec<usize>)> = None;
    let stop_factors = stop_k.map(|k| k + 1);
    let free = FreeAlgebra::build_probed(
        bases,
        setup.gens,
        setup.positions.clone(),
        cap,
        |partial| {
            let Some(limit) = stop_factors else { return Ok(false) };
            if let Some(hit) = bfs_keys(partial, first_off, second_off, limit) {
                early = Some(hit);
                return Ok(true);
            }
            Ok(false)
        },
    )?;
    let hit = match early {
        Some(h) => Some(h),
        None => bfs_keys(&free, first_off, second_off, bfs_k + 1),
    };
    match hit {
        Some((j, chain)) => Ok(DistOutcome::Found { k: j - 1, chain, free }),
        None => {
            debug_assert!(free.is_complete());
            Ok(DistOutcome::Exceeded { free })
        }
    }
}

fn make_witness(
    bases: &[FiniteAlgebra],
    m: usize,
    k: usize,
    variant: DistVariant,
    mut chain: Vec<usize>,
    free: FreeAlgebra,
) -> Witness {
    let setup = dist_setup(bases, m);
    while chain.len() < k + 2 {
        chain.push(*chain.last().unwrap());
    }
    let (first, second) = match variant {
        DistVariant::Standard => ("ab", "ag"),
        DistVariant::Converse => ("ag", "ab"),
    };
    let labels = (0..k + 1)
        .map(|i| if i % 2 == 0 { first.to_string() } else { second.to_string() })
        .collect();
    Witness { m, k, variant, chain, labels, free, ab_off: setup.ab_off, ag_off: setup.ag_off }
}

/// Layered search for the least number of alternating steps from `start`
/// to `target`, optionally after a prefix factor. Returns the number of
/// alternating steps and a witnessing chain (including both endpoints and
/// the prefix hop if present).
fn least_alternation(
    ctx: &PwContext,
    prefix: Option<&RelAst>,
    first: &RelAst,
    second: &RelAst,
    max_steps: usize,
) -> Result<Option<(usize, Vec<usize>)>> {
    let (start, target) = (ctx.start(), ctx.target());
    let mut factors: Vec<RelAst> = Vec::new();
    let mut layers: Vec<ElemSet> = vec![ElemSet::singleton(ctx.n(), start)];
    let base = if let Some(p) = prefix {
        factors.push(p.clone());
        let s = ctx.reach(p, &layers[0], true)?;
        layers.push(s);
        1
    } else {
        0
    };
    let mut found: Option<usize> = None;
    if layers[base].contains(target) {
        found = Some(0);
    }
    let mut steps = 0usize;
    while found.is_none() && steps < max_steps {
        let f = if steps.is_multiple_of(2) { first } else { second };
        factors.push(f.clone());
        let next = ctx.reach(f, layers.last().unwrap(), true)?;
        layers.push(next);
        steps += 1;
        if layers.last().unwrap().contains(target) {
            found = Some(steps);
        }
    }
    let Some(steps) = found else { return Ok(None) };
    let used = base + steps;
    let chain = ctx
        .chain_through(&factors[..used], start, target)?
        .ok_or_else(|| Error::Internal("layer search and chain extraction disagree".into()))?;
    Ok(Some((steps, chain)))
}

/// Decides `(m+1,k+1)-dist` (or its converse) for the variety generated by
/// `bases` by the free-algebra membership test, returning a witness chain
/// padded to k+2 elements, or `None` when the identity fails at this k.
/// A success can be certified on a partial closure; a failure requires the
/// complete one.
pub fn check_dist(
    bases: &[FiniteAlgebra],
    m: usize,
    k: usize,
    variant: DistVariant,
    cap: &FreeCap,
) -> Result<Option<Witness>> {
    match dist_search(bases, m, variant, k, Some(k), cap)? {
        DistOutcome::Found { k: found, chain, free } if found <= k => {
            Ok(Some(make_witness(bases, m, k, variant, chain, free)))
        }
        _ => Ok(None),
    }
}

/// Terms t_0 … t_{k+1} read off a witness chain via provenance; their
/// defining identities are re-verified on the bases before returning.
pub fn extract_chain_terms(w: &Witness) -> Result<Vec<Term>> {
    let free = &w.free;
    let gens = free.generators();
    let mut terms: Vec<Term> = w.chain.iter().map(|&e| free.element_term(e)).collect();
    if *w.chain.last().unwrap() == free.generator_element(gens - 1) {
        *terms.last_mut().unwrap() = Term::Var(gens - 1);
    }
    verify_b_identities(free.bases(), &terms, w.m, w.variant)?;
    Ok(terms)
}

/// Checks (B1)–(B4) for a term chain over m+2 variables; the converse
/// variant exchanges the even and odd linking patterns.
pub fn verify_b_identities(
    bases: &[FiniteAlgebra],
    terms: &[Term],
    m: usize,
    variant: DistVariant,
) -> Result<()> {
    let last_var = m + 1;
    let fail = |what: String| Err(Error::Internal(format!("extracted terms fail {what}")));
    if !holds_identity(bases, &Term::Var(0), &terms[0])? {
        return fail("(B1)".into());
    }
    for (i, t) in terms.iter().enumerate() {
        let folded = t.rename_vars(&|v| if v == last_var { 0 } else { v });
        if !holds_identity(bases, &Term::Var(0), &folded)? {
            return fail(format!("(B2) at t{i}"));
        }
    }
    let even_pat = |v: usize| v - (v % 2);
    let odd_pat = |v: usize| {
        if v == 0 {
            0
        } else if v % 2 == 1 {
            v
        } else {
            v - 1
        }
    };
    for i in 0..terms.len() - 1 {
        let beta_step = match variant {
            DistVariant::Standard => i % 2 == 0,
            DistVariant::Converse => i % 2 == 1,
        };
        let (l, r) = if beta_step {
            (
                terms[i].rename_vars(&even_pat),
                terms[i + 1].rename_vars(&even_pat),
            )
        } else {
            (
                terms[i].rename_vars(&odd_pat),
                terms[i + 1].rename_vars(&odd_pat),
            )
        };
        if !holds_identity(bases, &l, &r)? {
            return fail(format!("(B3) between t{i} and t{}", i + 1));
        }
    }
    if !holds_identity(bases, terms.last().unwrap(), &Term::Var(last_var))? {
        return fail("(B4)".into());
    }
    Ok(())
}

/// True when the variety has a Maltsev term, read off F(3).
pub fn has_maltsev_term(bases: &[FiniteAlgebra], cap: &FreeCap) -> Result<bool> {
    // p(x,y,y)=x and p(x,x,y)=y: membership needs assignments constant on
    // {1,2} and on {0,1}
    let scheme = InclusionScheme::parse("a^(b*g) <= a^b * a^g")?; // same variables as dist m=1
    let ctx = build_context(bases, &scheme, cap)?;
    let b = &ctx.vars[&'b'];
    let g = &ctx.vars[&'g'];
    let x0 = ctx.free.generator_element(0);
    let x2 = ctx.free.generator_element(2);
    let want_g = g.grouping.class_of[x0]; // agrees with x on v1=v2
    let want_b = b.grouping.class_of[x2]; // agrees with z on v0=v1
    Ok((0..ctx.free.len())
        .any(|e| g.grouping.class_of[e] == want_g && b.grouping.class_of[e] == want_b))
}

fn spectrum_skeleton(
    variant: SpectrumVariant,
    bases: &[FiniteAlgebra],
    m: usize,
    k_max: usize,
    cap: &FreeCap,
) -> SpectrumResult {
    SpectrumResult {
        variant,
        algebras: bases.iter().map(|a| a.name().to_string()).collect(),
        m,
        value: SpectrumValue::Exceeded { k_max },
        caps: CapsEcho { max_elements: cap.max_elements, max_width: cap.max_width, k_max },
        witness: None,
        terms: None,
        note: None,
        timing_ms: 0,
    }
}

/// J_V(m) (or J⌣): least k ≤ k_max such that (m+1,k+1)-dist holds, with
/// witness and verified terms. J is monotone in m, so J(m-1) is computed
/// first as a lower bound: a witness found at that level certifies the
/// value without completing the closure.
pub fn jonsson_level(
    bases: &[FiniteAlgebra],
    m: usize,
    k_max: usize,
    variant: DistVariant,
    cap: &FreeCap,
) -> Result<SpectrumResult> {
    let started = Instant::now();
    let sv = match variant {
        DistVariant::Standard => SpectrumVariant::J,
        DistVariant::Converse => SpectrumVariant::JConv,
    };
    let mut out = spectrum_skeleton(sv, bases, m, k_max, cap);

    let stop_k = if m >= 2 {
        let prev = jonsson_level(bases, m - 1, k_max, variant, cap)?;
        match prev.value.level() {
            Some(l) => Some(l),
            None => {
                out.note = Some(format!(
                    "J({}) already exceeds k_max and J is monotone in m",
                    m - 1
                ));
                out.timing_ms = started.elapsed().as_millis() as u64;
                return Ok(out);
            }
        }
    } else {
        None
    };

    match dist_search(bases, m, variant, k_max, stop_k, cap)? {
        DistOutcome::Found { k, chain, free } => {
            if !free.is_complete() {
                // a witness below the monotone lower bound is impossible
                if Some(k) != stop_k {
                    return Err(Error::Internal(format!(
                        "witness at k = {k} on a partial closure contradicts the lower bound {stop_k:?}"
                    )));
                }
                out.note = Some(format!(
                    "certified on a partial closure of {} elements: witness meets the monotone lower bound J({})",
                    free.len(),
                    m - 1
                ));
            }
            let witness = make_witness(bases, m, k, variant, chain, free);
            let terms = extract_chain_terms(&witness)?;
            out.value = SpectrumValue::Level(k);
            out.witness = Some(witness.summary());
            out.terms = Some(terms.iter().map(|t| t.to_string()).collect());
            if m == 1 && variant == DistVariant::Standard {
                cross_check_jonsson(bases, Some(&witness.free), out.value.level(), k_max, cap)?;
            }
        }
        DistOutcome::Exceeded { free } => {
            if m == 1 && variant == DistVariant::Standard {
                cross_check_jonsson(bases, Some(&free), None, k_max, cap)?;
            }
        }
    }
    out.timing_ms = started.elapsed().as_millis() as u64;
    Ok(out)
}

/// The Jónsson chain search must agree with the free-algebra membership
/// route at m = 1; it reuses the dist search's F(3) when that closure ran
/// to completion.
fn cross_check_jonsson(
    bases: &[FiniteAlgebra],
    free: Option<&FreeAlgebra>,
    level: Option<usize>,
    k_max: usize,
    cap: &FreeCap,
) -> Result<()> {
    let chain = match free {
        Some(f) if f.is_complete() => {
            super::terms::find_terms_on(bases, f, TermScheme::Jonsson, k_max + 3)?
        }
        _ => super::terms::find_terms(bases, TermScheme::Jonsson, k_max + 3, cap)?,
    };
    let from_terms = chain.chain.as_ref().map(|c| c.len().saturating_sub(2));
    let agreed = match (level, from_terms) {
        (Some(a), Some(b)) => a == b,
        // the searches run with different bounds; exceeding both is
        // consistent, as is a term chain longer than k_max+2
        (None, Some(b)) => b > k_max,
        (None, None) => true,
        (Some(_), None) => false,
    };
    if !agreed {
        return Err(Error::Internal(format!(
            "jonsson_level ({level:?}) disagrees with term search ({from_terms:?})"
        )));
    }
    Ok(())
}

/// Day modularity function D_V(m): least k with
/// `α(β ∘_m αγ) ⊆ αβ ∘_k αγ`; `m = 3` is the Day level.
pub fn day_function(
    bases: &[FiniteAlgebra],
    m: usize,
    k_max: usize,
    cap: &FreeCap,
) -> Result<SpectrumResult> {
    let started = Instant::now();
    let variant = if m == 3 { SpectrumVariant::DayLevel } else { SpectrumVariant::Day };
    let mut out = spectrum_skeleton(variant, bases, m, k_max, cap);
    let chain: Vec<BTreeSet<char>> = (0..m)
        .map(|i| {
            if i % 2 == 0 {
                BTreeSet::from(['b'])
            } else {
                BTreeSet::from(['a', 'g'])
            }
        })
        .collect();
    let rhs = RelAst::alternating(RelAst::meet_of(&['a', 'b']), RelAst::meet_of(&['a', 'g']), k_max);
    let scheme = InclusionScheme::new(Some('a'), chain, rhs)?;
    let ctx = build_context(bases, &scheme, cap)?;
    let first = RelAst::meet_of(&['a', 'b']);
    let second = RelAst::meet_of(&['a', 'g']);
    if let Some((steps, chain)) = least_alternation(&ctx, None, &first, &second, k_max)? {
        out.value = SpectrumValue::Level(steps);
        out.witness = Some(WitnessSummary {
            free_elements: ctx.free.len(),
            chain,
            labels: (0..steps)
                .map(|i| if i % 2 == 0 { "ab".into() } else { "ag".into() })
                .collect(),
        });
    }
    out.timing_ms = started.elapsed().as_millis() as u64;
    Ok(out)
}

/// Day level: least k with the Day identity (D_k).
pub fn day_level(bases: &[FiniteAlgebra], k_max: usize, cap: &FreeCap) -> Result<SpectrumResult> {
    day_function(bases, 3, k_max, cap)
}

/// Tschantz modularity function T_V(m), m ≥ 2: least k with
/// `α(β ∘_m γ) ⊆ α(γ∘β) ∘ (αγ ∘_k αβ)`.
pub fn tschantz_function(
    bases: &[FiniteAlgebra],
    m: usize,
    k_max: usize,
    cap: &FreeCap,
) -> Result<SpectrumResult> {
    if m < 2 {
        return Err(Error::Scheme("Tschantz function needs m ≥ 2".into()));
    }
    let started = Instant::now();
    let mut out = spectrum_skeleton(SpectrumVariant::Tschantz, bases, m, k_max, cap);
    let chain: Vec<BTreeSet<char>> = (0..m)
        .map(|i| BTreeSet::from([if i % 2 == 0 { 'b' } else { 'g' }]))
        .collect();
    let prefix = RelAst::Meet(vec![
        RelAst::Var('a'),
        RelAst::Compose(vec![RelAst::Var('g'), RelAst::Var('b')]),
    ]);
    let mut rhs_factors = vec![prefix.clone()];
    if let RelAst::Compose(fs) =
        RelAst::alternating(RelAst::meet_of(&['a', 'g']), RelAst::meet_of(&['a', 'b']), k_max)
    {
        rhs_factors.extend(fs);
    }
    let scheme = InclusionScheme::new(Some('a'), chain, RelAst::Compose(rhs_factors))?;
    let ctx = build_context(bases, &scheme, cap)?;
    let first = RelAst::meet_of(&['a', 'g']);
    let second = RelAst::meet_of(&['a', 'b']);
    if let Some((steps, chain)) = least_alternation(&ctx, Some(&prefix), &first, &second, k_max)? {
        out.value = SpectrumValue::Level(steps);
        let mut labels = vec!["a(g*b)".to_string()];
        labels.extend((0..steps).map(|i| if i % 2 == 0 { "ag".into() } else { "ab".into() }));
        out.witness = Some(WitnessSummary { free_elements: ctx.free.len(), chain, labels });
    }
    out.timing_ms = started.elapsed().as_millis() as u64;
    Ok(out)
}

/// Budgets for relation enumeration on a single finite algebra.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RelBudget {
    /// Generate closures of at most this many off-diagonal pairs.
    pub max_pairs: usize,
    /// Below this universe size, enumerate exhaustively instead.
    pub exhaustive_max_n: usize,
    /// Cap for congruence enumeration.
    pub con_cap: usize,
}

impl Default for RelBudget {
    fn default() -> Self {
        RelBudget { max_pairs: 2, exhaustive_max_n: 4, con_cap: 64 }
    }
}

fn alphas_of(a: &FiniteAlgebra, kind: AlphaKind, budget: &RelBudget) -> Result<Vec<BinRel>> {
    Ok(match kind {
        AlphaKind::Congruence => all_congruences(a, budget.con_cap)?
            .into_iter()
            .map(|c| c.as_binrel())
            .collect(),
        AlphaKind::Tolerance => enumerate_tolerances(a, budget.max_pairs, budget.exhaustive_max_n),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AlphaKind {
    Congruence,
    Tolerance,
}

/// J^r (and J^r⌣) on a single finite algebra: least k such that
/// `α(S ∘_{m+1} T) ⊆ αS ∘_{k+1} αT` for all enumerated α, S, T. A
/// per-algebra necessary condition for the variety, not a variety-level
/// decision.
pub fn relational_level(
    a: &FiniteAlgebra,
    m: usize,
    k_max: usize,
    converse: bool,
    alpha_kind: AlphaKind,
    budget: &RelBudget,
) -> Result<SpectrumResult> {
    let started = Instant::now();
    let cap = FreeCap::default();
    let sv = if converse { SpectrumVariant::JrConv } else { SpectrumVariant::Jr };
    let mut out = spectrum_skeleton(sv, std::slice::from_ref(a), m, k_max, &cap);
    let rels = enumerate_reflexive_admissible(a, budget.max_pairs, budget.exhaustive_max_n);
    let alphas = alphas_of(a, alpha_kind, budget)?;
    let exhaustive = a.size() <= budget.exhaustive_max_n;
    let mut least = 0usize;
    for alpha in &alphas {
        for s in &rels {
            for t in &rels {
                let lhs = alpha.meet(&BinRel::compose_alt(s, t, m + 1)?)?;
                let als = alpha.meet(s)?;
                let alt = alpha.meet(t)?;
                let (f1, f2) = if converse { (&alt, &als) } else { (&als, &alt) };
                let mut k = least;
                loop {
                    let rhs = BinRel::compose_alt(f1, f2, k + 1)?;
                    if lhs.is_subset(&rhs)? {
                        break;
                    }
                    k += 1;
                    if k > k_max {
                        out.note = Some(format!(
                            "exceeded at alpha={:?} S={:?} T={:?}",
                            alpha, s, t
                        ));
                        out.timing_ms = started.elapsed().as_millis() as u64;
                        return Ok(out);
                    }
                }
                least = least.max(k);
            }
        }
    }
    out.value = SpectrumValue::Level(least);
    out.note = Some(format!(
        "checked {} alphas × {}² relations on `{}` ({}); necessary condition for the variety",
        alphas.len(),
        rels.len(),
        a.name(),
        if exhaustive { "exhaustive" } else { "budgeted" },
    ));
    out.timing_ms = started.elapsed().as_millis() as u64;
    Ok(out)
}

/// A violation of (C1), replayable through the relations module.
#[derive(Clone, Debug, Serialize)]
pub struct SmileCounterexample {
    pub algebra: String,
    pub alpha: Vec<String>,
    pub relations: Vec<Vec<String>>,
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub enum SmileOutcome {
    Verified { exhaustive: bool, combos_checked: usize },
    Violated { counterexample: SmileCounterexample },
}

fn rel_lines(r: &BinRel) -> Vec<String> {
    r.to_string().lines().map(|s| s.to_string()).collect()
}

pub fn rel_from_lines(lines: &[String]) -> Result<BinRel> {
    let n = lines.len();
    let mut r = BinRel::empty(n);
    for (i, line) in lines.iter().enumerate() {
        if line.len() != n {
            return Err(Error::Parse { line: i + 1, msg: "ragged relation".into() });
        }
        for (j, c) in line.chars().enumerate() {
            if c == '1' {
                r.set(i, j);
            }
        }
    }
    Ok(r)
}

/// Condition (C1): for all enumerated reflexive admissible S_0 … S_ℓ and
/// all α of the requested kind, with R = S_0∘…∘S_ℓ and
/// Θ = αS_0∘…∘αS_ℓ, checks `α(R ∘_m R⌣) ⊆ Θ ∘_k Θ⌣`.
pub fn check_smile_c(
    a: &FiniteAlgebra,
    m: usize,
    k: usize,
    ell: usize,
    alpha_kind: AlphaKind,
    budget: &RelBudget,
) -> Result<SmileOutcome> {
    let rels = enumerate_reflexive_admissible(a, budget.max_pairs, budget.exhaustive_max_n);
    let alphas = alphas_of(a, alpha_kind, budget)?;
    let exhaustive = a.size() <= budget.exhaustive_max_n;
    let mut combos = 0usize;
    let mut idx = vec![0usize; ell + 1];
    loop {
        let ss: Vec<&BinRel> = idx.iter().map(|&i| &rels[i]).collect();
        let mut r = ss[0].clone();
        for s in &ss[1..] {
            r = r.compose(s)?;
        }
        let rconv = r.converse();
        for alpha in &alphas {
            combos += 1;
            let lhs = alpha.meet(&BinRel::compose_alt(&r, &rconv, m)?)?;
            let mut theta = alpha.meet(ss[0])?;
            for s in &ss[1..] {
                theta = theta.compose(&alpha.meet(s)?)?;
            }
            let rhs = BinRel::compose_alt(&theta, &theta.converse(), k)?;
            if !lhs.is_subset(&rhs)? {
                let pair = lhs
                    .pairs()
                    .into_iter()
                    .find(|&(x, y)| !rhs.get(x, y))
                    .expect("violation pair exists");
                return Ok(SmileOutcome::Violated {
                    counterexample: SmileCounterexample {
                        algebra: a.name().to_string(),
                        alpha: rel_lines(alpha),
                        relations: ss.iter().map(|s| rel_lines(s)).collect(),
                        pair,
                    },
                });
            }
        }
        // odometer over relation choices
        let mut i = ell + 1;
        loop {
            if i == 0 {
                return Ok(SmileOutcome::Verified { exhaustive, combos_checked: combos });
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < rels.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Replays a counterexample: true when the violation still holds.
pub fn replay_smile(
    a: &FiniteAlgebra,
    m: usize,
    k: usize,
    ce: &SmileCounterexample,
) -> Result<bool> {
    let alpha = rel_from_lines(&ce.alpha)?;
    let ss: Vec<BinRel> = ce
        .relations
        .iter()
        .map(|l| rel_from_lines(l))
        .collect::<Result<Vec<_>>>()?;
    if !alpha.is_reflexive()
        || !alpha.is_symmetric()
        || !alpha.is_admissible_for(a)
        || ss.iter().any(|s| !s.is_reflexive() || !s.is_admissible_for(a))
    {
        return Ok(false);
    }
    let mut r = ss[0].clone();
    for s in &ss[1..] {
        r = r.compose(s)?;
    }
    let lhs = alpha.meet(&BinRel::compose_alt(&r, &r.converse(), m)?)?;
    let mut theta = alpha.meet(&ss[0])?;
    for s in &ss[1..] {
        theta = theta.compose(&alpha.meet(s)?)?;
    }
    let rhs = BinRel::compose_alt(&theta, &theta.converse(), k)?;
    Ok(lhs.get(ce.pair.0, ce.pair.1) && !rhs.get(ce.pair.0, ce.pair.1))
}
