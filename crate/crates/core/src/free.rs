//! Free algebras of finitely generated varieties, realized as the closure
//! of the projection tuples inside the product of function powers of the
//! base algebras.
//!
//! An element is the vector of its values over all assignments of the
//! generators into each base (restricted to a chosen set of assignment
//! positions, full by default). For bases of size ≤ 2 the vector packs into
//! bits and operations run bit-parallel on whole words; otherwise values are
//! kept as bytes. Closure order is deterministic: seeds in generator order,
//! then frontier by frontier, operations in signature order, operand tuples
//! in row-major order over discovery indices.

use std::collections::HashMap;

use crate::hash::{FxHashMap, FxHashSet};

use crate::algebra::{FiniteAlgebra, Provenance, Signature, Term};
use crate::error::{Error, Result};

/// Size limits for free-algebra construction. `max_applications` bounds the
/// total operation applications a closure may perform, which bounds wall
/// time even when the element count stays low.
#[derive(Clone, Copy, Debug)]
pub struct FreeCap {
    pub max_elements: usize,
    pub max_width: usize,
    pub max_applications: u64,
}

impl Default for FreeCap {
    fn default() -> Self {
        FreeCap { max_elements: 200_000, max_width: 1 << 20, max_applications: 100_000_000 }
    }
}

impl FreeCap {
    /// A cap with a larger application budget for deep searches.
    pub fn with_applications(mut self, apps: u64) -> Self {
        self.max_applications = apps;
        self
    }
}

/// Bitmap keyed directly by packed tuple value; used when tuples fit well
/// under the addressable range.
const DIRECT_BITMAP_MAX_WIDTH: usize = 26;

enum Store {
    /// All bases size ≤ 2, total width ≤ 64: one word per element.
    Bits1 {
        words: Vec<u64>,
        combos: Vec<Vec<(u64, Vec<u8>)>>, // per op, per base: (segment mask, one-combos)
        seen_bitmap: Option<Vec<u64>>,
        seen_set: FxHashSet<u64>,
    },
    /// All bases size ≤ 2, any width: `wpe` words per element.
    BitsN {
        wpe: usize,
        data: Vec<u64>,
        combos: Vec<Vec<(Vec<u64>, Vec<u8>)>>, // per op, per base: (segment mask words, one-combos)
        seen: FxHashMap<Vec<u64>, u32>,
        n: usize,
    },
    /// General: one byte per position.
    Bytes {
        width: usize,
        data: Vec<u8>,
        seen: FxHashMap<Vec<u8>, u32>,
        n: usize,
    },
}

/// The free algebra F_V(n) for V = HSP(bases), with term provenance.
pub struct FreeAlgebra {
    bases: Vec<FiniteAlgebra>,
    gens: usize,
    /// Per base: sorted assignment codes included in the tuples.
    positions: Vec<Vec<u32>>,
    /// Per base: first position offset within a tuple.
    seg_start: Vec<usize>,
    store: Store,
    provenance: Vec<Provenance>,
    gen_elem: Vec<usize>,
    apps: u64,
    complete: bool,
    scratch_bytes: Vec<u8>,
    scratch_words: Vec<u64>,
}

fn digit(code: u32, gen: usize, gens: usize, size: usize) -> usize {
    (code as usize / size.pow((gens - 1 - gen) as u32)) % size
}

impl Store {
    fn n_elements(&self) -> usize {
        match self {
            Store::Bits1 { words, .. } => words.len(),
            Store::BitsN { n, .. } => *n,
            Store::Bytes { n, .. } => *n,
        }
    }
}

impl FreeAlgebra {
    /// Free algebra over the full assignment space.
    pub fn build(bases: &[FiniteAlgebra], gens: usize, cap: &FreeCap) -> Result<FreeAlgebra> {
        let mut positions = Vec::with_capacity(bases.len());
        let mut total: u64 = 0;
        for a in bases {
            let space = (a.size() as u64)
                .checked_pow(gens as u32)
                .filter(|&s| s <= u32::MAX as u64)
                .ok_or_else(|| {
                    Error::FreeCap(format!(
                        "assignment space {}^{gens} is unrepresentable",
                        a.size()
                    ))
                })?;
            total += space;
            if total > cap.max_width as u64 {
                return Err(Error::FreeCap(format!(
                    "tuple width {total}+ exceeds cap {}",
                    cap.max_width
                )));
            }
            positions.push((0..space as u32).collect());
        }
        Self::build_restricted(bases, gens, positions, cap)
    }

    /// Free algebra restricted to the given assignment positions per base.
    /// The restriction map is a homomorphic image of the full construction,
    /// so closure and restriction commute; reachability questions whose
    /// congruence patterns only mention included positions have the same
    /// answer here as in the full algebra.
    pub fn build_restricted(
        bases: &[FiniteAlgebra],
        gens: usize,
        positions: Vec<Vec<u32>>,
        cap: &FreeCap,
    ) -> Result<FreeAlgebra> {
        Self::build_inner(bases, gens, positions, cap, |_| Ok(false), false)
    }

    /// Like [`FreeAlgebra::build_restricted`], but calls `probe` after
    /// seeding and at a bounded application cadence (large frontiers are
    /// split, which only refines the deterministic discovery order); a
    /// `true` from the probe stops the closure early, leaving a partial but
    /// genuine subset of the free algebra. Monotone reachability queries
    /// answered positively on the partial set are valid for the full
    /// algebra.
    pub fn build_probed(
        bases: &[FiniteAlgebra],
        gens: usize,
        positions: Vec<Vec<u32>>,
        cap: &FreeCap,
        probe: impl FnMut(&FreeAlgebra) -> Result<bool>,
    ) -> Result<FreeAlgebra> {
        Self::build_inner(bases, gens, positions, cap, probe, true)
    }

    fn build_inner(
        bases: &[FiniteAlgebra],
        gens: usize,
        mut positions: Vec<Vec<u32>>,
        cap: &FreeCap,
        mut probe: impl FnMut(&FreeAlgebra) -> Result<bool>,
        chunked: bool,
    ) -> Result<FreeAlgebra> {
        if bases.is_empty() {
            return Err(Error::Signature("free algebra needs at least one base".into()));
        }
        if gens == 0 {
            return Err(Error::Signature("free algebra needs at least one generator".into()));
        }
        let sig = bases[0].signature().clone();
        for b in &bases[1..] {
            if b.signature() != &sig {
                return Err(Error::Signature(format!(
                    "bases `{}` and `{}` have different signatures",
                    bases[0].name(),
                    b.name()
                )));
            }
        }
        for (b, pos) in bases.iter().zip(positions.iter_mut()) {
            pos.sort_unstable();
            pos.dedup();
            let space = (b.size() as u64)
                .checked_pow(gens as u32)
                .unwrap_or(u64::MAX);
            if pos.iter().any(|&c| (c as u64) >= space) {
                return Err(Error::Internal(format!(
                    "assignment code out of range for `{}`",
                    b.name()
                )));
            }
        }
        let width: usize = positions.iter().map(|p| p.len()).sum();
        if width > cap.max_width {
            return Err(Error::FreeCap(format!(
                "tuple width {width} exceeds cap {}",
                cap.max_width
            )));
        }
        let mut seg_start = Vec::with_capacity(bases.len());
        let mut acc = 0usize;
        for p in &positions {
            seg_start.push(acc);
            acc += p.len();
        }

        let all_small = bases.iter().all(|b| b.size() <= 2);
        let store = if all_small && width <= 64 {
            let combos = bits_combos_1(&sig, bases, &positions, &seg_start);
            let seen_bitmap = if width <= DIRECT_BITMAP_MAX_WIDTH {
                Some(vec![0u64; (1usize << width).div_ceil(64)])
            } else {
                None
            };
            Store::Bits1 { words: Vec::new(), combos, seen_bitmap, seen_set: Default::default() }
        } else if all_small {
            let wpe = width.div_ceil(64);
            let combos = bits_combos_n(&sig, bases, &positions, &seg_start, wpe);
            Store::BitsN { wpe, data: Vec::new(), combos, seen: Default::default(), n: 0 }
        } else {
            Store::Bytes { width, data: Vec::new(), seen: Default::default(), n: 0 }
        };

        let mut f = FreeAlgebra {
            bases: bases.to_vec(),
            gens,
            positions,
            seg_start,
            store,
            provenance: Vec::new(),
            gen_elem: Vec::new(),
            apps: 0,
            complete: false,
            scratch_bytes: Vec::new(),
            scratch_words: Vec::new(),
        };
        f.close(cap, &mut probe, chunked)?;
        Ok(f)
    }

    /// Operation applications the closure performed.
    pub fn applications(&self) -> u64 {
        self.apps
    }

    /// False when a probe stopped the closure before convergence.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    #[allow(clippy::needless_range_loop)]
    fn close(
        &mut self,
        cap: &FreeCap,
        probe: &mut impl FnMut(&FreeAlgebra) -> Result<bool>,
        chunked: bool,
    ) -> Result<()> {
        // seeds
        for g in 0..self.gens {
            let key = self.seed_tuple(g);
            let (idx, new) = self.insert(key);
            if new {
                self.provenance.push(Provenance::Seed(g));
            }
            self.gen_elem.push(idx);
        }
        if probe(self)? {
            return Ok(());
        }
        let sig = self.bases[0].signature().clone();
        let symmetric: Vec<bool> = (0..sig.len())
            .map(|op| self.bases.iter().all(|b| b.op_is_symmetric(op)))
            .collect();
        let absorbing: Vec<bool> = (0..sig.len())
            .map(|op| self.bases.iter().all(|b| b.op_absorbs_repeats(op)))
            .collect();

        // `processed`..`limit` is the frontier of this (sub-)round: every
        // tuple over [0, limit) with at least one operand ≥ processed gets
        // enumerated, in row-major order. Unchunked, limit is always the
        // full element count: plain frontier-by-frontier BFS. Chunked,
        // large frontiers are split so the probe runs at a bounded
        // application cadence, tighter while the set is still small.
        let mut processed = 0usize;
        let mut first_round = true;
        loop {
            let count = self.store.n_elements();
            if processed == count {
                self.complete = true;
                break;
            }
            let limit = if chunked {
                let chunk = (self.apps / 4).clamp(1 << 18, 1 << 24);
                self.choose_limit(&sig, &symmetric, processed, count, chunk)
            } else {
                count
            };
            for op in 0..sig.len() {
                let arity = sig.arity(op);
                if arity == 0 {
                    if first_round {
                        let key = self.apply_raw(op, &[]);
                        let (idx, new) = self.insert(key);
                        if new {
                            self.provenance.push(Provenance::Derived { op, args: Vec::new() });
                            debug_assert_eq!(idx, self.provenance.len() - 1);
                        }
                    }
                    continue;
                }
                self.enumerate_op(op, arity, symmetric[op], absorbing[op], processed, limit, cap)?;
            }
            first_round = false;
            processed = limit;
            if probe(self)? {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Largest prefix bound whose sub-round stays within the application
    /// chunk; the full count when even one new element would overshoot.
    #[allow(clippy::needless_range_loop)]
    fn choose_limit(
        &self,
        sig: &Signature,
        symmetric: &[bool],
        processed: usize,
        count: usize,
        chunk: u64,
    ) -> usize {
        let estimate = |l: usize| -> u64 {
            let mut total: u64 = 0;
            for op in 0..sig.len() {
                let a = sig.arity(op) as u32;
                if a == 0 {
                    continue;
                }
                let full = (l as u64).saturating_pow(a);
                let done = (processed as u64).saturating_pow(a);
                let mut t = full.saturating_sub(done);
                if symmetric[op] {
                    t /= (1..=a as u64).product::<u64>();
                }
                total = total.saturating_add(t);
            }
            total
        };
        if estimate(count) <= chunk {
            return count;
        }
        let (mut lo, mut hi) = (processed + 1, count);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if estimate(mid) <= chunk {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    #[inline]
    fn handle(&mut self, op: usize, tuple: &[usize], cap: &FreeCap) -> Result<()> {
        self.apps += 1;
        if self.apps > cap.max_applications {
            return Err(Error::FreeCap(format!(
                "application budget {} exhausted ({} elements discovered so far)",
                cap.max_applications,
                self.store.n_elements()
            )));
        }
        let FreeAlgebra {
            bases, positions, seg_start, store, scratch_bytes, scratch_words, ..
        } = self;
        let new = match store {
            Store::Bits1 { words, combos, seen_bitmap, seen_set } => {
                let mut word = 0u64;
                for (mask, ones) in &combos[op] {
                    let mut seg = 0u64;
                    for &c in ones {
                        let mut t = !0u64;
                        for (j, &e) in tuple.iter().enumerate() {
                            let w = words[e];
                            t &= if (c >> (tuple.len() - 1 - j)) & 1 == 1 { w } else { !w };
                        }
                        seg |= t;
                    }
                    word |= seg & mask;
                }
                let new = match seen_bitmap {
                    Some(bm) => {
                        let (w, b) = ((word / 64) as usize, (word % 64) as u32);
                        let hit = bm[w] >> b & 1 == 1;
                        if !hit {
                            bm[w] |= 1u64 << b;
                        }
                        !hit
                    }
                    None => seen_set.insert(word),
                };
                if new {
                    words.push(word);
                }
                new
            }
            Store::Bytes { width, data, seen, n } => {
                scratch_bytes.clear();
                scratch_bytes.resize(*width, 0);
                let w = *width;
                for (b, base) in bases.iter().enumerate() {
                    let table = base.table(op);
                    let sz = base.size();
                    let start = seg_start[b];
                    let len = positions[b].len();
                    let out = &mut scratch_bytes[start..start + len];
                    match *tuple {
                        [e] => {
                            let r = &data[e * w + start..e * w + start + len];
                            for (o, &v) in out.iter_mut().zip(r) {
                                *o = table[v as usize] as u8;
                            }
                        }
                        [e1, e2] => {
                            let r1 = &data[e1 * w + start..e1 * w + start + len];
                            let r2 = &data[e2 * w + start..e2 * w + start + len];
                            for ((o, &v1), &v2) in out.iter_mut().zip(r1).zip(r2) {
                                *o = table[v1 as usize * sz + v2 as usize] as u8;
                            }
                        }
                        [e1, e2, e3] => {
                            let r1 = &data[e1 * w + start..e1 * w + start + len];
                            let r2 = &data[e2 * w + start..e2 * w + start + len];
                            let r3 = &data[e3 * w + start..e3 * w + start + len];
                            for (((o, &v1), &v2), &v3) in
                                out.iter_mut().zip(r1).zip(r2).zip(r3)
                            {
                                *o = table
                                    [(v1 as usize * sz + v2 as usize) * sz + v3 as usize]
                                    as u8;
                            }
                        }
                        _ => {
                            for (p, o) in out.iter_mut().enumerate() {
                                let mut idx = 0usize;
                                for &e in tuple {
                                    idx = idx * sz + data[e * w + start + p] as usize;
                                }
                                *o = table[idx] as u8;
                            }
                        }
                    }
                }
                if seen.contains_key(scratch_bytes.as_slice()) {
                    false
                } else {
                    seen.insert(scratch_bytes.clone(), *n as u32);
                    data.extend_from_slice(scratch_bytes);
                    *n += 1;
                    true
                }
            }
            Store::BitsN { wpe, data, combos, seen, n } => {
                scratch_words.clear();
                scratch_words.resize(*wpe, 0);
                for (mask, ones) in &combos[op] {
                    for (w, out) in scratch_words.iter_mut().enumerate() {
                        let mut seg = 0u64;
                        for &c in ones {
                            let mut t = !0u64;
                            for (j, &e) in tuple.iter().enumerate() {
                                let word = data[e * *wpe + w];
                                t &= if (c >> (tuple.len() - 1 - j)) & 1 == 1 { word } else { !word };
                            }
                            seg |= t;
                        }
                        *out |= seg & mask[w];
                    }
                }
                if seen.contains_key(scratch_words.as_slice()) {
                    false
                } else {
                    seen.insert(scratch_words.clone(), *n as u32);
                    data.extend_from_slice(scratch_words);
                    *n += 1;
                    true
                }
            }
        };
        if new {
            self.provenance.push(Provenance::Derived { op, args: tuple.to_vec() });
            if self.store.n_elements() > cap.max_elements {
                return Err(self.cap_error(cap));
            }
        }
        Ok(())
    }

    fn cap_error(&self, cap: &FreeCap) -> Error {
        let width: usize = self.positions.iter().map(|p| p.len()).sum();
        Error::FreeCap(format!(
            "element count exceeded {} (width {width}, {} elements discovered so far)",
            cap.max_elements,
            self.store.n_elements()
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_op(
        &mut self,
        op: usize,
        arity: usize,
        symmetric: bool,
        absorbing: bool,
        old: usize,
        cur: usize,
        cap: &FreeCap,
    ) -> Result<()> {
        // Symmetric operations only need sorted tuples, and sorted tuples are
        // encountered in the same relative order as the full row-major sweep,
        // so the discovery order is unchanged. When repeated arguments are
        // provably absorbed the strictly increasing tuples suffice.
        match (symmetric, absorbing, arity) {
            (true, true, 2) => {
                for i in 0..cur {
                    for j in (i + 1).max(old)..cur {
                        self.handle(op, &[i, j], cap)?;
                    }
                }
            }
            (true, false, 2) => {
                for i in 0..cur {
                    for j in i.max(old)..cur {
                        self.handle(op, &[i, j], cap)?;
                    }
                }
            }
            (true, true, 3) => {
                for i in 0..cur {
                    for j in i + 1..cur {
                        for k in (j + 1).max(old)..cur {
                            self.handle(op, &[i, j, k], cap)?;
                        }
                    }
                }
            }
            (true, false, 3) => {
                for i in 0..cur {
                    for j in i..cur {
                        for k in j.max(old)..cur {
                            self.handle(op, &[i, j, k], cap)?;
                        }
                    }
                }
            }
            (false, _, 1) => {
                for i in old..cur {
                    self.handle(op, &[i], cap)?;
                }
            }
            (false, abs, 2) => {
                for i in 0..cur {
                    let lo = if i >= old { 0 } else { old };
                    for j in lo..cur {
                        if !(abs && i == j) {
                            self.handle(op, &[i, j], cap)?;
                        }
                    }
                }
            }
            (false, abs, 3) => {
                for i in 0..cur {
                    for j in 0..cur {
                        let lo = if i >= old || j >= old { 0 } else { old };
                        for k in lo..cur {
                            if !(abs && (i == j || i == k || j == k)) {
                                self.handle(op, &[i, j, k], cap)?;
                            }
                        }
                    }
                }
            }
            _ => {
                let mut tuple = vec![0usize; arity];
                'tuples: loop {
                    if tuple.iter().any(|&t| t >= old) && !(absorbing && has_repeat(&tuple)) {
                        self.handle(op, &tuple, cap)?;
                    }
                    let mut i = arity;
                    loop {
                        if i == 0 {
                            break 'tuples;
                        }
                        i -= 1;
                        tuple[i] += 1;
                        if tuple[i] < cur {
                            break;
                        }
                        tuple[i] = 0;
                    }
                }
            }
        }
        Ok(())
    }

    /// Packed tuple for generator `g`.
    fn seed_tuple(&self, g: usize) -> Vec<u64> {
        match &self.store {
            Store::Bits1 { .. } | Store::BitsN { .. } => {
                let width: usize = self.positions.iter().map(|p| p.len()).sum();
                let mut words = vec![0u64; width.div_ceil(64).max(1)];
                for (b, base) in self.bases.iter().enumerate() {
                    for (k, &code) in self.positions[b].iter().enumerate() {
                        let v = digit(code, g, self.gens, base.size());
                        if v == 1 {
                            let off = self.seg_start[b] + k;
                            words[off / 64] |= 1u64 << (off % 64);
                        }
                    }
                }
                words
            }
            Store::Bytes { width, .. } => {
                let mut bytes = vec![0u8; *width];
                for (b, base) in self.bases.iter().enumerate() {
                    for (k, &code) in self.positions[b].iter().enumerate() {
                        bytes[self.seg_start[b] + k] = digit(code, g, self.gens, base.size()) as u8;
                    }
                }
                pack_bytes(&bytes)
            }
        }
    }

    /// Applies `op` to existing elements, returning the packed result
    /// without inserting it. Cold path.
    fn apply_raw(&self, op: usize, tuple: &[usize]) -> Vec<u64> {
        match &self.store {
            Store::Bits1 { words, combos, .. } => {
                let mut word = 0u64;
                for (mask, ones) in &combos[op] {
                    let mut seg = 0u64;
                    for &c in ones {
                        let mut t = !0u64;
                        for (j, &e) in tuple.iter().enumerate() {
                            let w = words[e];
                            t &= if (c >> (tuple.len() - 1 - j)) & 1 == 1 { w } else { !w };
                        }
                        seg |= t;
                    }
                    word |= seg & mask;
                }
                vec![word]
            }
            Store::BitsN { wpe, data, combos, .. } => {
                let mut out = vec![0u64; *wpe];
                for (mask, ones) in &combos[op] {
                    for w in 0..*wpe {
                        let mut seg = 0u64;
                        for &c in ones {
                            let mut t = !0u64;
                            for (j, &e) in tuple.iter().enumerate() {
                                let word = data[e * wpe + w];
                                t &= if (c >> (tuple.len() - 1 - j)) & 1 == 1 { word } else { !word };
                            }
                            seg |= t;
                        }
                        out[w] |= seg & mask[w];
                    }
                }
                out
            }
            Store::Bytes { width, data, .. } => {
                let mut bytes = vec![0u8; *width];
                for (b, base) in self.bases.iter().enumerate() {
                    let start = self.seg_start[b];
                    for k in 0..self.positions[b].len() {
                        let mut idx = 0usize;
                        for &e in tuple {
                            idx = idx * base.size() + byte_at(data, *width, e, start + k) as usize;
                        }
                        bytes[start + k] = base.table(op)[idx] as u8;
                    }
                }
                pack_bytes(&bytes)
            }
        }
    }

    /// Inserts a packed tuple, returning (index, was_new).
    fn insert(&mut self, key: Vec<u64>) -> (usize, bool) {
        match &mut self.store {
            Store::Bits1 { words, seen_bitmap, seen_set, .. } => {
                let word = key[0];
                let new = match seen_bitmap {
                    Some(bm) => {
                        let (w, b) = ((word / 64) as usize, (word % 64) as u32);
                        let hit = bm[w] >> b & 1 == 1;
                        if !hit {
                            bm[w] |= 1u64 << b;
                        }
                        !hit
                    }
                    None => seen_set.insert(word),
                };
                if new {
                    words.push(word);
                    (words.len() - 1, true)
                } else {
                    // cold path: duplicate seeds and nullary constants only
                    (words.iter().position(|&w| w == word).unwrap(), false)
                }
            }
            Store::BitsN { data, seen, n, .. } => match seen.get(&key) {
                Some(&idx) => (idx as usize, false),
                None => {
                    seen.insert(key.clone(), *n as u32);
                    data.extend_from_slice(&key);
                    *n += 1;
                    (*n - 1, true)
                }
            },
            Store::Bytes { width, data, seen, n } => {
                let bytes = unpack_bytes(&key, *width);
                match seen.get(&bytes) {
                    Some(&idx) => (idx as usize, false),
                    None => {
                        seen.insert(bytes.clone(), *n as u32);
                        data.extend_from_slice(&bytes);
                        *n += 1;
                        (*n - 1, true)
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.store.n_elements()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn bases(&self) -> &[FiniteAlgebra] {
        &self.bases
    }

    pub fn positions(&self) -> &[Vec<u32>] {
        &self.positions
    }

    pub fn generator_element(&self, g: usize) -> usize {
        self.gen_elem[g]
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Value of element `e` at stored position offset `k` of `base`.
    pub fn value(&self, e: usize, base: usize, k: usize) -> u8 {
        let off = self.seg_start[base] + k;
        match &self.store {
            Store::Bits1 { words, .. } => (words[e] >> off & 1) as u8,
            Store::BitsN { wpe, data, .. } => (data[e * wpe + off / 64] >> (off % 64) & 1) as u8,
            Store::Bytes { width, data, .. } => byte_at(data, *width, e, off),
        }
    }

    /// Term reconstructing element `e` from its provenance.
    pub fn element_term(&self, e: usize) -> Term {
        match &self.provenance[e] {
            Provenance::Seed(g) => Term::Var(*g),
            Provenance::Derived { op, args } => Term::Op(
                self.bases[0].signature().symbol(*op).to_string(),
                args.iter().map(|&a| self.element_term(a)).collect(),
            ),
        }
    }

    /// Resolves raw assignment codes to stored offsets; errors if a code is
    /// not among the stored positions.
    pub fn resolve_positions(&self, codes: &[Vec<u32>]) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(self.bases.len());
        for (b, base_codes) in codes.iter().enumerate() {
            let mut offs = Vec::with_capacity(base_codes.len());
            for &c in base_codes {
                match self.positions[b].binary_search(&c) {
                    Ok(k) => offs.push(k),
                    Err(_) => {
                        return Err(Error::Internal(format!(
                            "assignment code {c} not stored for base {b}"
                        )))
                    }
                }
            }
            out.push(offs);
        }
        Ok(out)
    }

    /// Packed restriction of element `e` to the resolved offsets.
    pub fn restriction_key(&self, e: usize, offsets: &[Vec<usize>]) -> Vec<u64> {
        match &self.store {
            Store::Bits1 { .. } | Store::BitsN { .. } => {
                let total: usize = offsets.iter().map(|o| o.len()).sum();
                let mut out = vec![0u64; total.div_ceil(64).max(1)];
                let mut bit = 0usize;
                for (b, offs) in offsets.iter().enumerate() {
                    for &k in offs {
                        if self.value(e, b, k) == 1 {
                            out[bit / 64] |= 1u64 << (bit % 64);
                        }
                        bit += 1;
                    }
                }
                out
            }
            Store::Bytes { .. } => {
                let mut bytes = Vec::new();
                for (b, offs) in offsets.iter().enumerate() {
                    for &k in offs {
                        bytes.push(self.value(e, b, k));
                    }
                }
                pack_bytes(&bytes)
            }
        }
    }

    /// Bulk single-word restriction keys for every element, when the subset
    /// fits one word; avoids per-element allocation on hot paths.
    pub fn restriction_words(&self, offsets: &[Vec<usize>]) -> Option<Vec<u64>> {
        let total: usize = offsets.iter().map(|o| o.len()).sum();
        let per_bit = match &self.store {
            Store::Bits1 { .. } | Store::BitsN { .. } => 1,
            Store::Bytes { .. } => 8,
        };
        if total * per_bit > 64 {
            return None;
        }
        let n = self.len();
        let mut out = vec![0u64; n];
        let mut bit = 0usize;
        for (b, offs) in offsets.iter().enumerate() {
            for &k in offs {
                for (e, w) in out.iter_mut().enumerate() {
                    *w |= (self.value(e, b, k) as u64) << bit;
                }
                bit += per_bit;
            }
        }
        Some(out)
    }

    /// Groups all elements by restriction key; class ids in order of least
    /// element.
    pub fn group_by(&self, offsets: &[Vec<usize>]) -> Grouping {
        let mut map: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut class_of = Vec::with_capacity(self.len());
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for e in 0..self.len() {
            let key = self.restriction_key(e, offsets);
            let id = *map.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                (classes.len() - 1) as u32
            });
            class_of.push(id);
            classes[id as usize].push(e as u32);
        }
        Grouping { class_of, classes }
    }

    /// Evaluates a term to its packed tuple over the stored positions.
    pub fn eval_term_key(&self, t: &Term) -> Result<Vec<u64>> {
        match t {
            Term::Var(g) => {
                if *g >= self.gens {
                    return Err(Error::Eval(format!("variable x{g} out of range")));
                }
                Ok(self.seed_tuple(*g))
            }
            Term::Op(sym, children) => {
                // evaluate children to elements if possible, else evaluate
                // structurally over positions
                let sig = self.bases[0].signature();
                let op = sig
                    .index_of(sym)
                    .ok_or_else(|| Error::Eval(format!("unknown operation `{sym}`")))?;
                let mut idxs = Vec::with_capacity(children.len());
                for c in children {
                    let key = self.eval_term_key(c)?;
                    match self.find_by_key(&key) {
                        Some(i) => idxs.push(i),
                        None => {
                            return Err(Error::Internal(
                                "term evaluates outside the closed set".into(),
                            ))
                        }
                    }
                }
                Ok(self.apply_raw(op, &idxs))
            }
        }
    }

    /// Index of the element with the given packed tuple, linear scan.
    pub fn find_by_key(&self, key: &[u64]) -> Option<usize> {
        (0..self.len()).find(|&e| self.full_key(e) == key)
    }

    /// Packed full tuple of element `e`.
    pub fn full_key(&self, e: usize) -> Vec<u64> {
        match &self.store {
            Store::Bits1 { words, .. } => vec![words[e]],
            Store::BitsN { wpe, data, .. } => data[e * wpe..(e + 1) * wpe].to_vec(),
            Store::Bytes { width, data, .. } => pack_bytes(&data[e * width..(e + 1) * width]),
        }
    }

    /// Materializes the free algebra as a finite algebra over element
    /// indices. Guarded by a table-entry cap.
    pub fn to_finite_algebra(&self, name: &str, max_entries: usize) -> Result<FiniteAlgebra> {
        let sig = self.bases[0].signature().clone();
        let n = self.len();
        let total: usize = (0..sig.len())
            .map(|op| n.checked_pow(sig.arity(op) as u32).unwrap_or(usize::MAX))
            .sum();
        if total > max_entries {
            return Err(Error::Cap(format!(
                "materializing tables needs {total} entries, cap is {max_entries}"
            )));
        }
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        for e in 0..n {
            index.insert(self.full_key(e), e);
        }
        let mut tables = Vec::with_capacity(sig.len());
        for op in 0..sig.len() {
            let arity = sig.arity(op);
            let len = n.pow(arity as u32);
            let mut table = Vec::with_capacity(len);
            let mut tuple = vec![0usize; arity];
            for flat in 0..len {
                let mut rest = flat;
                for i in (0..arity).rev() {
                    tuple[i] = rest % n;
                    rest /= n;
                }
                let key = self.apply_raw(op, &tuple);
                let target = *index.get(&key).ok_or_else(|| {
                    Error::Internal("closure not closed under operation".into())
                })?;
                table.push(target);
            }
            tables.push(table);
        }
        FiniteAlgebra::new(name, n, sig, tables)
    }
}

/// Element classes induced by a restriction key.
pub struct Grouping {
    pub class_of: Vec<u32>,
    pub classes: Vec<Vec<u32>>,
}

fn has_repeat(tuple: &[usize]) -> bool {
    for i in 0..tuple.len() {
        for j in 0..i {
            if tuple[i] == tuple[j] {
                return true;
            }
        }
    }
    false
}

fn pack_bytes(bytes: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; bytes.len().div_ceil(8).max(1)];
    for (i, &b) in bytes.iter().enumerate() {
        out[i / 8] |= (b as u64) << ((i % 8) * 8);
    }
    out
}

fn unpack_bytes(words: &[u64], width: usize) -> Vec<u8> {
    (0..width).map(|i| (words[i / 8] >> ((i % 8) * 8)) as u8).collect()
}

fn byte_at(data: &[u8], width: usize, e: usize, off: usize) -> u8 {
    data[e * width + off]
}

fn bits_combos_1(
    sig: &Signature,
    bases: &[FiniteAlgebra],
    positions: &[Vec<u32>],
    seg_start: &[usize],
) -> Vec<Vec<(u64, Vec<u8>)>> {
    (0..sig.len())
        .map(|op| {
            let arity = sig.arity(op);
            bases
                .iter()
                .enumerate()
                .map(|(b, base)| {
                    let mut mask = 0u64;
                    for k in 0..positions[b].len() {
                        mask |= 1u64 << (seg_start[b] + k);
                    }
                    let ones: Vec<u8> = if base.size() == 1 {
                        Vec::new()
                    } else {
                        (0..1u16 << arity)
                            .filter(|&c| base.table(op)[c as usize] == 1)
                            .map(|c| c as u8)
                            .collect()
                    };
                    (mask, ones)
                })
                .collect()
        })
        .collect()
}

fn bits_combos_n(
    sig: &Signature,
    bases: &[FiniteAlgebra],
    positions: &[Vec<u32>],
    seg_start: &[usize],
    wpe: usize,
) -> Vec<Vec<(Vec<u64>, Vec<u8>)>> {
    (0..sig.len())
        .map(|op| {
            let arity = sig.arity(op);
            bases
                .iter()
                .enumerate()
                .map(|(b, base)| {
                    let mut mask = vec![0u64; wpe];
                    for k in 0..positions[b].len() {
                        let off = seg_start[b] + k;
                        mask[off / 64] |= 1u64 << (off % 64);
                    }
                    let ones: Vec<u8> = if base.size() == 1 {
                        Vec::new()
                    } else {
                        (0..1u16 << arity)
                            .filter(|&c| base.table(op)[c as usize] == 1)
                            .map(|c| c as u8)
                            .collect()
                    };
                    (mask, ones)
                })
                .collect()
        })
        .collect()
}
