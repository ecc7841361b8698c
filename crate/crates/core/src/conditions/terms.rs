//! Shortest term chains on F(3): Jónsson, directed Jónsson, and Gumm
//! schemes as graph searches over elements satisfying the schemes'
//! pointwise constraints, with edges given by the linking identities.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{holds_identity, FiniteAlgebra, Term};
use crate::error::{Error, Result};
use crate::free::{FreeAlgebra, FreeCap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TermScheme {
    Jonsson,
    DirectedJonsson,
    Gumm,
    /// The two-term fragment p, j with x=p(x,y,y), p(x,x,y)=j(x,x,y),
    /// j(x,y,y)=y, x=j(x,y,x); equivalent to a three-term Gumm chain.
    PJ,
}

/// Result of a chain search. `chain: None` with `exceeded: true` means the
/// bound was hit; with `exceeded: false` the chain definitively does not
/// exist at the fixed length.
#[derive(Clone, Debug, Serialize)]
pub struct TermChain {
    pub scheme: TermScheme,
    pub max_len: usize,
    #[serde(skip)]
    pub chain: Option<Vec<Term>>,
    pub rendered: Option<Vec<String>>,
    pub exceeded: bool,
    pub free_elements: usize,
    pub timing_ms: u64,
}

struct F3Keys {
    valid: Vec<bool>,           // (J2): t(x,y,x) = x
    beta_key: Vec<Vec<u64>>,    // restriction to (a,a,c), (a,c)-ordered
    gamma_key: Vec<Vec<u64>>,   // restriction to (a,c,c), (a,c)-ordered
}

/// Position codes per base, (a,c)-ordered.
type PerBaseCodes = Vec<Vec<u32>>;

/// Aligned position code lists per base: the (x,x,z) pattern, the (x,z,z)
/// pattern, the (x,y,x) pattern, and their sorted union.
fn f3_codes(
    bases: &[FiniteAlgebra],
) -> (PerBaseCodes, PerBaseCodes, PerBaseCodes, PerBaseCodes) {
    let mut beta_codes = Vec::with_capacity(bases.len());
    let mut gamma_codes = Vec::with_capacity(bases.len());
    let mut alpha_codes = Vec::with_capacity(bases.len());
    let mut union = Vec::with_capacity(bases.len());
    for b in bases {
        let s = b.size() as u32;
        let mut bc = Vec::new();
        let mut gc = Vec::new();
        let mut ac = Vec::new();
        for a in 0..s {
            for c in 0..s {
                bc.push(a * s * s + a * s + c);
                gc.push(a * s * s + c * s + c);
                ac.push(a * s * s + c * s + a);
            }
        }
        let mut u: Vec<u32> = bc.iter().chain(&gc).chain(&ac).copied().collect();
        u.sort_unstable();
        u.dedup();
        union.push(u);
        beta_codes.push(bc);
        gamma_codes.push(gc);
        alpha_codes.push(ac);
    }
    (beta_codes, gamma_codes, alpha_codes, union)
}

fn keys_from(bases: &[FiniteAlgebra], free: &FreeAlgebra) -> Result<F3Keys> {
    let (beta_codes, gamma_codes, alpha_codes, _) = f3_codes(bases);
    let beta_off = free.resolve_positions(&beta_codes)?;
    let gamma_off = free.resolve_positions(&gamma_codes)?;
    let alpha_off = free.resolve_positions(&alpha_codes)?;
    let n = free.len();
    let x0 = free.generator_element(0);
    let alpha_want = free.restriction_key(x0, &alpha_off);
    let mut valid = Vec::with_capacity(n);
    let mut beta_key = Vec::with_capacity(n);
    let mut gamma_key = Vec::with_capacity(n);
    for e in 0..n {
        valid.push(free.restriction_key(e, &alpha_off) == alpha_want);
        beta_key.push(free.restriction_key(e, &beta_off));
        gamma_key.push(free.restriction_key(e, &gamma_off));
    }
    Ok(F3Keys { valid, beta_key, gamma_key })
}

fn group<'a>(keys: &'a [Vec<u64>], only_valid: Option<&[bool]>) -> HashMap<&'a [u64], Vec<u32>> {
    let mut map: HashMap<&[u64], Vec<u32>> = HashMap::new();
    for (e, k) in keys.iter().enumerate() {
        if only_valid.is_none_or(|v| v[e]) {
            map.entry(k.as_slice()).or_default().push(e as u32);
        }
    }
    map
}

/// Minimal chains for each scheme by breadth-first search from the first
/// projection to the last, ties broken by least element index. Extracted
/// terms are re-verified through `holds_identity` before returning.
pub fn find_terms(
    bases: &[FiniteAlgebra],
    scheme: TermScheme,
    max_len: usize,
    cap: &FreeCap,
) -> Result<TermChain> {
    // every scheme constraint reads only the pattern positions, so the
    // search runs on the restriction of F(3) to them
    let (_, _, _, union) = f3_codes(bases);
    let free = FreeAlgebra::build_restricted(bases, 3, union, cap)?;
    find_terms_on(bases, &free, scheme, max_len)
}

/// The chain search over an already-built (restriction of) F(3); the
/// algebra must be complete and cover the pattern positions.
pub(crate) fn find_terms_on(
    bases: &[FiniteAlgebra],
    free: &FreeAlgebra,
    scheme: TermScheme,
    max_len: usize,
) -> Result<TermChain> {
    if max_len < 2 {
        return Err(Error::Scheme("max_len must be at least 2".into()));
    }
    if !free.is_complete() {
        return Err(Error::Internal("term search needs a complete closure".into()));
    }
    let started = Instant::now();
    let keys = keys_from(bases, free)?;
    let n = free.len();
    let (x0, x2) = (free.generator_element(0), free.generator_element(2));

    let chain: Option<Vec<usize>> = match scheme {
        TermScheme::Jonsson => {
            // states (element, edges_done mod 2); even edges use the
            // (x,x,z) pattern, odd edges the (x,z,z) pattern
            let by_beta = group(&keys.beta_key, Some(&keys.valid));
            let by_gamma = group(&keys.gamma_key, Some(&keys.valid));
            let mut dist = vec![[usize::MAX; 2]; n];
            let mut parent = vec![[u32::MAX; 2]; n];
            let mut frontier = vec![(x0 as u32, 0u8)];
            dist[x0][0] = 0;
            let mut found: Option<(usize, u8)> = None;
            if keys.valid[x0] && x0 == x2 {
                found = Some((x0, 0));
            }
            let max_edges = max_len - 1;
            'bfs: while !frontier.is_empty() {
                let mut next = Vec::new();
                for &(e, p) in &frontier {
                    let d = dist[e as usize][p as usize];
                    if d >= max_edges {
                        continue;
                    }
                    let neighbors = if p == 0 {
                        by_beta.get(keys.beta_key[e as usize].as_slice())
                    } else {
                        by_gamma.get(keys.gamma_key[e as usize].as_slice())
                    };
                    if let Some(ns) = neighbors {
                        for &v in ns {
                            let q = (p ^ 1) as usize;
                            if dist[v as usize][q] == usize::MAX {
                                dist[v as usize][q] = d + 1;
                                parent[v as usize][q] = e | ((p as u32) << 31);
                                if v as usize == x2 {
                                    found = Some((v as usize, q as u8));
                                    break 'bfs;
                                }
                                next.push((v, q as u8));
                            }
                        }
                    }
                }
                next.sort_unstable();
                frontier = next;
            }
            found.map(|(e, p)| {
                let mut path = vec![e];
                let (mut e, mut p) = (e, p as usize);
                while dist[e][p] > 0 {
                    let enc = parent[e][p];
                    let pe = (enc & 0x7fff_ffff) as usize;
                    let pp = (enc >> 31) as usize;
                    path.push(pe);
                    e = pe;
                    p = pp;
                }
                path.reverse();
                path
            })
        }
        TermScheme::DirectedJonsson => {
            let by_beta = group(&keys.beta_key, Some(&keys.valid));
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![u32::MAX; n];
            let mut frontier = vec![x0 as u32];
            dist[x0] = 0;
            let mut found = keys.valid[x0] && x0 == x2;
            let max_edges = max_len - 1;
            'dbfs: while !frontier.is_empty() && !found {
                let mut next = Vec::new();
                for &e in &frontier {
                    let d = dist[e as usize];
                    if d >= max_edges {
                        continue;
                    }
                    if let Some(ns) = by_beta.get(keys.gamma_key[e as usize].as_slice()) {
                        for &v in ns {
                            if dist[v as usize] == usize::MAX {
                                dist[v as usize] = d + 1;
                                parent[v as usize] = e;
                                if v as usize == x2 {
                                    found = true;
                                    break 'dbfs;
                                }
                                next.push(v);
                            }
                        }
                    }
                }
                next.sort_unstable();
                frontier = next;
            }
            if found {
                let mut path = vec![x2];
                while dist[*path.last().unwrap()] > 0 {
                    path.push(parent[*path.last().unwrap()] as usize);
                }
                path.reverse();
                Some(path)
            } else {
                None
            }
        }
        TermScheme::Gumm => gumm_search(free, &keys, max_len, false)?,
        TermScheme::PJ => gumm_search(free, &keys, 3, true)?,
    };

    let mut out = TermChain {
        scheme,
        max_len,
        chain: None,
        rendered: None,
        exceeded: chain.is_none() && scheme != TermScheme::PJ,
        free_elements: n,
        timing_ms: 0,
    };
    if let Some(path) = chain {
        let mut terms: Vec<Term> = path.iter().map(|&e| free.element_term(e)).collect();
        if *path.last().unwrap() == x2 {
            *terms.last_mut().unwrap() = Term::Var(2);
        }
        verify_chain(bases, scheme, &terms)?;
        out.rendered = Some(terms.iter().map(|t| t.to_string()).collect());
        out.chain = Some(terms);
    }
    out.timing_ms = started.elapsed().as_millis() as u64;
    Ok(out)
}

/// Gumm search: a preamble element p with x = p(x,z,z) whose (x,x,z)
/// restriction matches the first chain node, then alternating links
/// starting with the (x,z,z) pattern. `pj` fixes the chain at p, j, proj3.
fn gumm_search(
    free: &FreeAlgebra,
    keys: &F3Keys,
    max_len: usize,
    pj: bool,
) -> Result<Option<Vec<usize>>> {
    let n = free.len();
    let (x0, x2) = (free.generator_element(0), free.generator_element(2));
    let p_want = keys.gamma_key[x0].clone();
    let p_set: Vec<u32> = (0..n as u32)
        .filter(|&e| keys.gamma_key[e as usize] == p_want)
        .collect();
    if pj {
        // chain [p, j, proj3]: j valid, j(x,z,z) = z, p matches j on (x,x,z)
        let z_gamma = keys.gamma_key[x2].clone();
        for j in 0..n {
            if keys.valid[j] && keys.gamma_key[j] == z_gamma {
                if let Some(&p) = p_set
                    .iter()
                    .find(|&&p| keys.beta_key[p as usize] == keys.beta_key[j])
                {
                    return Ok(Some(vec![p as usize, j, x2]));
                }
            }
        }
        return Ok(None);
    }
    let by_beta = group(&keys.beta_key, Some(&keys.valid));
    let by_gamma = group(&keys.gamma_key, Some(&keys.valid));
    // BFS over j-chain positions; position 1 nodes: valid nodes sharing a
    // beta key with some p
    let mut dist = vec![[usize::MAX; 2]; n];
    let mut parent = vec![[u32::MAX; 2]; n];
    let mut frontier: Vec<(u32, u8)> = Vec::new();
    let mut found: Option<(usize, u8)> = None;
    for &p in &p_set {
        if let Some(ns) = by_beta.get(keys.beta_key[p as usize].as_slice()) {
            for &v in ns {
                if dist[v as usize][1] == usize::MAX {
                    dist[v as usize][1] = 1;
                    parent[v as usize][1] = p | (1 << 31);
                    if v as usize == x2 && found.is_none() {
                        found = Some((v as usize, 1));
                    }
                    frontier.push((v, 1));
                }
            }
        }
    }
    frontier.sort_unstable();
    // terms allowed: p + chain of length pos ≤ max_len − 1
    let max_pos = max_len - 1;
    'bfs: while !frontier.is_empty() && found.is_none() {
        let mut next = Vec::new();
        for &(e, p) in &frontier {
            let pos = dist[e as usize][p as usize];
            if pos >= max_pos {
                continue;
            }
            // edge j_pos -> j_pos+1 uses (x,z,z) when pos is odd
            let (neighbors, key) = if pos % 2 == 1 {
                (by_gamma.get(keys.gamma_key[e as usize].as_slice()), 0u8)
            } else {
                (by_beta.get(keys.beta_key[e as usize].as_slice()), 1u8)
            };
            if let Some(ns) = neighbors {
                for &v in ns {
                    let q = key as usize;
                    if dist[v as usize][q] == usize::MAX {
                        dist[v as usize][q] = pos + 1;
                        parent[v as usize][q] = e | ((p as u32) << 31);
                        if v as usize == x2 {
                            found = Some((v as usize, key));
                            break 'bfs;
                        }
                        next.push((v, key));
                    }
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    Ok(found.map(|(e, pr)| {
        let mut path = vec![e];
        let (mut e, mut pr) = (e, pr as usize);
        while dist[e][pr] > 1 {
            let enc = parent[e][pr];
            let pe = (enc & 0x7fff_ffff) as usize;
            let pp = (enc >> 31) as usize;
            path.push(pe);
            e = pe;
            pr = pp;
        }
        // prepend the matched p
        let enc = parent[e][pr];
        path.push((enc & 0x7fff_ffff) as usize);
        path.reverse();
        path
    }))
}

/// Re-verifies a chain's defining identities on the bases.
pub fn verify_chain(bases: &[FiniteAlgebra], scheme: TermScheme, terms: &[Term]) -> Result<()> {
    let fail = |what: String| Err(Error::Internal(format!("extracted chain fails {what}")));
    let x = Term::Var(0);
    let z = Term::Var(2);
    let to_x = |t: &Term| t.rename_vars(&|v| if v == 2 { 0 } else { v }); // (x,y,x)
    let xx = |t: &Term| t.rename_vars(&|v| if v == 1 { 0 } else { v }); // (x,x,z)
    let zz = |t: &Term| t.rename_vars(&|v| if v == 1 { 2 } else { v }); // (x,z,z)
    match scheme {
        TermScheme::Jonsson | TermScheme::DirectedJonsson => {
            if !holds_identity(bases, &x, &terms[0])? {
                return fail("(J1)".into());
            }
            for (i, t) in terms.iter().enumerate() {
                if !holds_identity(bases, &x, &to_x(t))? {
                    return fail(format!("(J2) at j{i}"));
                }
            }
            if !holds_identity(bases, terms.last().unwrap(), &z)? {
                return fail("(J4)".into());
            }
            for i in 0..terms.len() - 1 {
                let ok = if scheme == TermScheme::Jonsson {
                    if i % 2 == 0 {
                        holds_identity(bases, &xx(&terms[i]), &xx(&terms[i + 1]))?
                    } else {
                        holds_identity(bases, &zz(&terms[i]), &zz(&terms[i + 1]))?
                    }
                } else {
                    holds_identity(bases, &zz(&terms[i]), &xx(&terms[i + 1]))?
                };
                if !ok {
                    return fail(format!("link {i}"));
                }
            }
        }
        TermScheme::Gumm | TermScheme::PJ => {
            let p = &terms[0];
            if !holds_identity(bases, &x, &zz(p))? {
                return fail("(P) x = p(x,z,z)".into());
            }
            if !holds_identity(bases, &xx(p), &xx(&terms[1]))? {
                return fail("(P) p(x,x,z) = j1(x,x,z)".into());
            }
            for (i, t) in terms.iter().enumerate().skip(1) {
                if !holds_identity(bases, &x, &to_x(t))? {
                    return fail(format!("(J2) at j{i}"));
                }
            }
            if !holds_identity(bases, terms.last().unwrap(), &z)? {
                return fail("(J4)".into());
            }
            for i in 1..terms.len() - 1 {
                let ok = if i % 2 == 1 {
                    holds_identity(bases, &zz(&terms[i]), &zz(&terms[i + 1]))?
                } else {
                    holds_identity(bases, &xx(&terms[i]), &xx(&terms[i + 1]))?
                };
                if !ok {
                    return fail(format!("(J3) between j{i} and j{}", i + 1));
                }
            }
        }
    }
    Ok(())
}
