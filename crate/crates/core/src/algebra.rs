//! Finite algebras: operation tables, the `.alg` text format, terms,
//! identity checking and product constructions.
//!
//! Tables are flat, row-major with the *first* argument most significant,
//! so `f(x1,…,xa)` lives at index `((x1*n + x2)*n + …)*n + xa`.

use std::fmt;

use crate::error::{Error, Result};

/// Element of a finite algebra, always in `0..size`.
pub type Elem = usize;

/// An ordered list of operation symbols with arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(ops: Vec<(String, usize)>) -> Result<Self> {
        for (i, (s, _)) in ops.iter().enumerate() {
            if ops[..i].iter().any(|(t, _)| t == s) {
                return Err(Error::Signature(format!("duplicate operation symbol `{s}`")));
            }
        }
        Ok(Signature { ops })
    }

    pub fn empty() -> Self {
        Signature { ops: Vec::new() }
    }

    pub fn ops(&self) -> &[(String, usize)] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].1
    }

    pub fn symbol(&self, op: usize) -> &str {
        &self.ops[op].0
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|(s, _)| s == symbol)
    }

    pub fn is_disjoint(&self, other: &Signature) -> bool {
        self.ops.iter().all(|(s, _)| other.index_of(s).is_none())
    }
}

/// A finite algebra on universe `{0, …, size-1}` with one flat table per
/// operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    signature: Signature,
    tables: Vec<Vec<Elem>>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        size: usize,
        signature: Signature,
        tables: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::Signature(format!("algebra `{name}`: size must be positive")));
        }
        if tables.len() != signature.len() {
            return Err(Error::Signature(format!(
                "algebra `{name}`: {} tables for {} operations",
                tables.len(),
                signature.len()
            )));
        }
        for (op, table) in tables.iter().enumerate() {
            let want = size.pow(signature.arity(op) as u32);
            if table.len() != want {
                return Err(Error::Signature(format!(
                    "algebra `{name}`: table for `{}` has {} entries, expected {}",
                    signature.symbol(op),
                    table.len(),
                    want
                )));
            }
            if let Some(&e) = table.iter().find(|&&e| e >= size) {
                return Err(Error::Signature(format!(
                    "algebra `{name}`: table for `{}` contains element {e} out of range",
                    signature.symbol(op)
                )));
            }
        }
        Ok(FiniteAlgebra { name, size, signature, tables })
    }

    /// One-element algebra over the given signature (all tables constant 0).
    pub fn trivial(name: impl Into<String>, signature: Signature) -> Self {
        let tables = signature.ops().iter().map(|_| vec![0]).collect();
        FiniteAlgebra { name: name.into(), size: 1, signature, tables }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn table(&self, op: usize) -> &[Elem] {
        &self.tables[op]
    }

    /// Applies operation `op` to `args` (row-major table lookup).
    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.signature.arity(op));
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        self.tables[op][idx]
    }

    /// True when permuting the arguments of `op` never changes its value.
    pub fn op_is_symmetric(&self, op: usize) -> bool {
        let a = self.signature.arity(op);
        if a < 2 {
            return true;
        }
        let mut args = vec![0usize; a];
        loop {
            let v = self.apply(op, &args);
            let mut sorted = args.clone();
            sorted.sort_unstable();
            if self.apply(op, &sorted) != v {
                return false;
            }
            // odometer
            let mut i = a;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                args[i] += 1;
                if args[i] < self.size {
                    break;
                }
                args[i] = 0;
            }
        }
    }

    /// True when every application with a repeated argument is a projection
    /// onto one of its arguments; such applications can never leave a set
    /// that contains the arguments.
    pub fn op_absorbs_repeats(&self, op: usize) -> bool {
        let a = self.signature.arity(op);
        if a < 2 {
            return true;
        }
        if a > 3 {
            return false; // not worth detecting
        }
        let patterns: &[&[usize]] = if a == 2 {
            &[&[0, 0]]
        } else {
            &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]
        };
        'patterns: for pat in patterns {
            let nvars = pat.iter().max().unwrap() + 1;
            'candidates: for p in 0..nvars {
                let mut vals = vec![0usize; nvars];
                loop {
                    let args: Vec<usize> = pat.iter().map(|&v| vals[v]).collect();
                    if self.apply(op, &args) != vals[p] {
                        continue 'candidates;
                    }
                    let mut i = nvars;
                    loop {
                        if i == 0 {
                            continue 'patterns; // projection onto p verified
                        }
                        i -= 1;
                        vals[i] += 1;
                        if vals[i] < self.size {
                            break;
                        }
                        vals[i] = 0;
                    }
                }
            }
            return false;
        }
        true
    }

    /// Renames every operation symbol through `f`; useful before a
    /// non-indexed product when signatures overlap.
    pub fn renamed_ops(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        let ops = self
            .signature
            .ops()
            .iter()
            .map(|(s, a)| (f(s), *a))
            .collect();
        Ok(FiniteAlgebra {
            name: self.name.clone(),
            size: self.size,
            signature: Signature::new(ops)?,
            tables: self.tables.clone(),
        })
    }
}

/// Parses the `.alg` text format.
///
/// `#` starts a comment, blank lines are ignored. Layout:
/// `algebra <name>`, `size <n>`, then per operation `op <symbol> <arity>`
/// followed by `n^arity` whitespace-separated entries.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    struct Tok<'a> {
        word: &'a str,
        line: usize,
    }
    struct Cursor<'a> {
        toks: Vec<Tok<'a>>,
        pos: usize,
    }
    impl<'a> Cursor<'a> {
        fn next(&mut self, expect: &str) -> Result<&Tok<'a>> {
            match self.toks.get(self.pos) {
                Some(t) => {
                    self.pos += 1;
                    Ok(t)
                }
                None => Err(Error::Parse {
                    line: self.toks.last().map_or(1, |t| t.line),
                    msg: format!("unexpected end of input, expected {expect}"),
                }),
            }
        }
        fn done(&self) -> bool {
            self.pos >= self.toks.len()
        }
    }
    let mut toks: Vec<Tok> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        for word in line.split_whitespace() {
            toks.push(Tok { word, line: i + 1 });
        }
    }
    let mut cur = Cursor { toks, pos: 0 };

    let t = cur.next("`algebra`")?;
    if t.word != "algebra" {
        return Err(Error::Parse { line: t.line, msg: format!("expected `algebra`, found `{}`", t.word) });
    }
    let name = cur.next("algebra name")?.word.to_string();
    let t = cur.next("`size`")?;
    if t.word != "size" {
        return Err(Error::Parse { line: t.line, msg: format!("expected `size`, found `{}`", t.word) });
    }
    let t = cur.next("size value")?;
    let size: usize = t.word.parse().map_err(|_| Error::Parse {
        line: t.line,
        msg: format!("invalid size `{}`", t.word),
    })?;
    if size == 0 {
        return Err(Error::Parse { line: t.line, msg: "size must be positive".into() });
    }

    let mut ops: Vec<(String, usize)> = Vec::new();
    let mut tables: Vec<Vec<Elem>> = Vec::new();
    while !cur.done() {
        let t = cur.next("`op`")?;
        if t.word != "op" {
            return Err(Error::Parse { line: t.line, msg: format!("expected `op`, found `{}`", t.word) });
        }
        let sym = cur.next("operation symbol")?.word.to_string();
        let t = cur.next("arity")?;
        let arity: usize = t.word.parse().map_err(|_| Error::Parse {
            line: t.line,
            msg: format!("invalid arity `{}`", t.word),
        })?;
        let want = size.pow(arity as u32);
        let mut table = Vec::with_capacity(want);
        for _ in 0..want {
            let t = cur.next("table entry")?;
            let e: usize = t.word.parse().map_err(|_| Error::Parse {
                line: t.line,
                msg: format!("invalid table entry `{}`", t.word),
            })?;
            if e >= size {
                Err(Error::Parse {
                    line: t.line,
                    msg: format!("element {e} out of range for size {size}"),
                })?;
            }
            table.push(e);
        }
        ops.push((sym, arity));
        tables.push(table);
    }
    let signature = Signature::new(ops).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    FiniteAlgebra::new(name, size, signature, tables)
}

/// Canonical `.alg` rendering; `parse_algebra` of the output reproduces the
/// algebra, and serializing again is byte-identical.
pub fn serialize_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    out.push_str(&format!("algebra {}\nsize {}\n", a.name, a.size));
    for (op, (sym, arity)) in a.signature.ops().iter().enumerate() {
        out.push_str(&format!("op {sym} {arity}\n"));
        let table = a.table(op);
        if *arity == 0 {
            out.push_str(&format!("{}\n", table[0]));
            continue;
        }
        let row = a.size;
        for chunk in table.chunks(row) {
            let words: Vec<String> = chunk.iter().map(|e| e.to_string()).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Operation tree over a signature; variables are indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Op(String, Vec<Term>),
}

impl Term {
    pub fn op(symbol: impl Into<String>, children: Vec<Term>) -> Term {
        Term::Op(symbol.into(), children)
    }

    /// Largest variable index plus one, 0 for variable-free terms.
    pub fn var_count(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Op(_, cs) => cs.iter().map(|c| c.var_count()).max().unwrap_or(0),
        }
    }

    /// Replaces each `Var(i)` by `Var(f(i))`.
    pub fn rename_vars(&self, f: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(i) => Term::Var(f(*i)),
            Term::Op(s, cs) => Term::Op(s.clone(), cs.iter().map(|c| c.rename_vars(f)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Op(s, cs) => {
                write!(f, "({s}")?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Bottom-up evaluation of `t` in `a` under `assignment`.
pub fn eval_term(a: &FiniteAlgebra, t: &Term, assignment: &[Elem]) -> Result<Elem> {
    match t {
        Term::Var(i) => assignment
            .get(*i)
            .copied()
            .ok_or_else(|| Error::Eval(format!("unbound variable x{i}"))),
        Term::Op(sym, children) => {
            let op = a
                .signature()
                .index_of(sym)
                .ok_or_else(|| Error::Eval(format!("unknown operation `{sym}`")))?;
            if children.len() != a.signature().arity(op) {
                return Err(Error::Eval(format!(
                    "operation `{sym}` expects {} arguments, got {}",
                    a.signature().arity(op),
                    children.len()
                )));
            }
            let mut args = Vec::with_capacity(children.len());
            for c in children {
                args.push(eval_term(a, c, assignment)?);
            }
            Ok(a.apply(op, &args))
        }
    }
}

/// True iff `lhs = rhs` holds under every assignment in every listed
/// algebra. Identities hold in HSP(generators) iff they hold in each
/// generator, so this decides the identity for the generated variety.
pub fn holds_identity(algebras: &[FiniteAlgebra], lhs: &Term, rhs: &Term) -> Result<bool> {
    if algebras.is_empty() {
        return Err(Error::Signature("no algebras given".into()));
    }
    let sig = algebras[0].signature();
    for a in &algebras[1..] {
        if a.signature() != sig {
            return Err(Error::Signature(format!(
                "algebras `{}` and `{}` have different signatures",
                algebras[0].name(),
                a.name()
            )));
        }
    }
    let nvars = lhs.var_count().max(rhs.var_count());
    for a in algebras {
        let mut assignment = vec![0usize; nvars];
        'assignments: loop {
            if eval_term(a, lhs, &assignment)? != eval_term(a, rhs, &assignment)? {
                return Ok(false);
            }
            let mut i = nvars;
            loop {
                if i == 0 {
                    break 'assignments;
                }
                i -= 1;
                assignment[i] += 1;
                if assignment[i] < a.size() {
                    break;
                }
                assignment[i] = 0;
            }
        }
    }
    Ok(true)
}

/// Direct product: universe `|A|*|B|`, pair `(a,b)` encoded as `a*|B| + b`,
/// operations acting coordinatewise.
pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    if a.signature() != b.signature() {
        return Err(Error::Signature(format!(
            "direct product of `{}` and `{}`: signatures differ",
            a.name(),
            b.name()
        )));
    }
    let n = a.size() * b.size();
    let mut tables = Vec::with_capacity(a.signature().len());
    for (op, (_, arity)) in a.signature().ops().iter().enumerate() {
        let len = n.pow(*arity as u32);
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0usize; *arity];
        for flat in 0..len {
            // decode row-major product arguments
            let mut rest = flat;
            for i in (0..*arity).rev() {
                args[i] = rest % n;
                rest /= n;
            }
            let xs: Vec<Elem> = args.iter().map(|&p| p / b.size()).collect();
            let ys: Vec<Elem> = args.iter().map(|&p| p % b.size()).collect();
            table.push(a.apply(op, &xs) * b.size() + b.apply(op, &ys));
        }
        tables.push(table);
    }
    FiniteAlgebra::new(
        format!("{}_x_{}", a.name(), b.name()),
        n,
        a.signature().clone(),
        tables,
    )
}

/// Non-indexed product on `A × B` over the disjoint union of signatures:
/// an operation of `A` acts on first coordinates and as first-argument
/// projection on second coordinates, and symmetrically for `B`.
pub fn nonindexed_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    if !a.signature().is_disjoint(b.signature()) {
        return Err(Error::Signature(format!(
            "non-indexed product of `{}` and `{}`: overlapping operation symbols (rename first)",
            a.name(),
            b.name()
        )));
    }
    for (own, other) in [(a, b), (b, a)] {
        if own.signature().ops().iter().any(|(_, ar)| *ar == 0) && other.size() > 1 {
            return Err(Error::Signature(format!(
                "non-indexed product: nullary operation in `{}` has no first argument to project",
                own.name()
            )));
        }
    }
    let n = a.size() * b.size();
    let mut ops = Vec::new();
    let mut tables = Vec::new();
    let enc = |x: Elem, y: Elem| x * b.size() + y;
    for (side, alg) in [(0usize, a), (1usize, b)] {
        for (op, (sym, arity)) in alg.signature().ops().iter().enumerate() {
            let len = n.pow(*arity as u32);
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0usize; *arity];
            for flat in 0..len {
                let mut rest = flat;
                for i in (0..*arity).rev() {
                    args[i] = rest % n;
                    rest /= n;
                }
                let xs: Vec<Elem> = args.iter().map(|&p| p / b.size()).collect();
                let ys: Vec<Elem> = args.iter().map(|&p| p % b.size()).collect();
                let value = if side == 0 {
                    enc(alg.apply(op, &xs), *ys.first().unwrap_or(&0))
                } else {
                    enc(*xs.first().unwrap_or(&0), alg.apply(op, &ys))
                };
                table.push(value);
            }
            ops.push((sym.clone(), *arity));
            tables.push(table);
        }
    }
    FiniteAlgebra::new(
        format!("{}_nip_{}", a.name(), b.name()),
        n,
        Signature::new(ops)?,
        tables,
    )
}

/// How an element of a generated set was first reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Seed(usize),
    Derived { op: usize, args: Vec<usize> },
}

/// A generated subuniverse together with how each element was discovered.
/// Indices in `Provenance::Derived` refer to discovery order.
#[derive(Clone, Debug)]
pub struct Generated {
    pub elements: Vec<Elem>,
    pub provenance: Vec<Provenance>,
}

/// Least subuniverse of `a` containing `seeds`, discovered deterministically:
/// seeds in order, then frontier by frontier; within a round operations in
/// signature order and operand tuples in row-major order over discovery
/// indices.
pub fn subalgebra_generate(a: &FiniteAlgebra, seeds: &[Elem]) -> Generated {
    let mut elements: Vec<Elem> = Vec::new();
    let mut provenance: Vec<Provenance> = Vec::new();
    let mut index: Vec<Option<usize>> = vec![None; a.size()];
    for (g, &s) in seeds.iter().enumerate() {
        assert!(s < a.size(), "seed out of range");
        if index[s].is_none() {
            index[s] = Some(elements.len());
            elements.push(s);
            provenance.push(Provenance::Seed(g));
        }
    }
    let mut old = 0usize;
    loop {
        let cur = elements.len();
        for op in 0..a.signature().len() {
            let arity = a.signature().arity(op);
            if arity == 0 {
                if old == 0 {
                    let v = a.apply(op, &[]);
                    if index[v].is_none() {
                        index[v] = Some(elements.len());
                        elements.push(v);
                        provenance.push(Provenance::Derived { op, args: Vec::new() });
                    }
                }
                continue;
            }
            if cur == 0 {
                continue;
            }
            let mut tuple = vec![0usize; arity];
            let mut args = vec![0usize; arity];
            'tuples: loop {
                // skip tuples whose operands were all available last round
                if tuple.iter().any(|&t| t >= old) {
                    for (i, &t) in tuple.iter().enumerate() {
                        args[i] = elements[t];
                    }
                    let v = a.apply(op, &args);
                    if index[v].is_none() {
                        index[v] = Some(elements.len());
                        elements.push(v);
                        provenance.push(Provenance::Derived { op, args: tuple.clone() });
                    }
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
        if elements.len() == cur {
            break;
        }
        old = cur;
    }
    Generated { elements, provenance }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice2() -> FiniteAlgebra {
        parse_algebra("algebra lattice2\nsize 2\nop meet 2\n0 0\n0 1\nop join 2\n0 1\n1 1\n")
            .unwrap()
    }

    fn implication2() -> FiniteAlgebra {
        parse_algebra("algebra implication2\nsize 2\nop imp 2\n1 1\n0 1\n").unwrap()
    }

    #[test]
    fn parse_lattice() {
        let a = lattice2();
        assert_eq!(a.size(), 2);
        assert_eq!(a.signature().len(), 2);
        // row-major, first argument most significant: meet(1,0) = 0
        assert_eq!(a.apply(0, &[1, 0]), 0);
        assert_eq!(a.apply(1, &[1, 0]), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_algebra("algebra a\nsize 2\nop f 1\n0 2\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_algebra("").is_err());
        assert!(parse_algebra("algebra a\nsize 2\nop f 2\n0 0 0\n").is_err());
        assert!(parse_algebra("algebra a\nsize 0\n").is_err());
    }

    #[test]
    fn serialize_round_trip() {
        let a = lattice2();
        let text = serialize_algebra(&a);
        let b = parse_algebra(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize_algebra(&b), text);
    }

    #[test]
    fn eval_and_unbound() {
        let a = lattice2();
        assert_eq!(eval_term(&a, &Term::Var(0), &[1]).unwrap(), 1);
        let t = Term::op("meet", vec![Term::Var(0), Term::op("join", vec![Term::Var(1), Term::Var(2)])]);
        assert_eq!(eval_term(&a, &t, &[1, 0, 1]).unwrap(), 1);
        assert!(eval_term(&a, &Term::Var(3), &[0, 1]).is_err());
        assert!(eval_term(&a, &Term::op("nope", vec![]), &[]).is_err());
    }

    #[test]
    fn identities() {
        let a = lattice2();
        let median = |x, y, z| {
            Term::op(
                "join",
                vec![
                    Term::op("meet", vec![Term::Var(x), Term::Var(y)]),
                    Term::op(
                        "join",
                        vec![
                            Term::op("meet", vec![Term::Var(x), Term::Var(z)]),
                            Term::op("meet", vec![Term::Var(y), Term::Var(z)]),
                        ],
                    ),
                ],
            )
        };
        assert!(holds_identity(std::slice::from_ref(&a), &median(0, 1, 2), &median(1, 0, 2)).unwrap());
        let meet = Term::op("meet", vec![Term::Var(0), Term::Var(1)]);
        let join = Term::op("join", vec![Term::Var(0), Term::Var(1)]);
        assert!(!holds_identity(std::slice::from_ref(&a), &meet, &join).unwrap());
        let i = implication2();
        let xx = Term::op("imp", vec![Term::Var(0), Term::Var(0)]);
        let yy = Term::op("imp", vec![Term::Var(1), Term::Var(1)]);
        assert!(holds_identity(std::slice::from_ref(&i), &xx, &yy).unwrap());
    }

    #[test]
    fn products() {
        let a = lattice2();
        let p = direct_product(&a, &a).unwrap();
        assert_eq!(p.size(), 4);
        // meet((1,0),(0,1)) = (0,0): encodings 2, 1 -> 0
        assert_eq!(p.apply(0, &[2, 1]), 0);
        let t = FiniteAlgebra::trivial("t1", a.signature().clone());
        let q = direct_product(&a, &t).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.table(0), a.table(0));
        assert_eq!(q.table(1), a.table(1));
        assert!(direct_product(&a, &implication2()).is_err());
    }

    #[test]
    fn nonindexed() {
        let a = lattice2();
        let b = implication2();
        let p = nonindexed_product(&a, &b).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.signature().len(), 3);
        // meet acts on first coordinates, projects the first argument's second
        // meet((1,0),(0,1)): enc(1,0)=2, enc(0,1)=1 -> (1*0, 0) = (0,0) = 0
        let meet = p.signature().index_of("meet").unwrap();
        assert_eq!(p.apply(meet, &[2, 1]), 0);
        let imp = p.signature().index_of("imp").unwrap();
        // imp((1,0),(0,1)) = (1, 0->1) = (1,1) = 3
        assert_eq!(p.apply(imp, &[2, 1]), 3);
        assert!(nonindexed_product(&a, &a).is_err());
    }

    #[test]
    fn nonindexed_restriction_recovers_factor() {
        // restricting to one signature part and projecting the universe is
        // the corresponding factor
        let a = lattice2();
        let b = implication2();
        let p = nonindexed_product(&a, &b).unwrap();
        for (op_a, (sym, arity)) in a.signature().ops().iter().enumerate() {
            let op_p = p.signature().index_of(sym).unwrap();
            let bs = b.size();
            let mut args = vec![0usize; *arity];
            let total = p.size().pow(*arity as u32);
            for flat in 0..total {
                let mut rest = flat;
                for i in (0..*arity).rev() {
                    args[i] = rest % p.size();
                    rest /= p.size();
                }
                let first: Vec<usize> = args.iter().map(|&x| x / bs).collect();
                assert_eq!(p.apply(op_p, &args) / bs, a.apply(op_a, &first));
            }
        }
        // and symmetrically for the other factor
        let op_b = p.signature().index_of("imp").unwrap();
        for x in 0..p.size() {
            for y in 0..p.size() {
                assert_eq!(p.apply(op_b, &[x, y]) % b.size(), b.apply(0, &[x % 2, y % 2]));
            }
        }
    }

    #[test]
    fn nonindexed_rejects_nullary_ops() {
        let a = lattice2();
        let sig = Signature::new(vec![("bot".into(), 0)]).unwrap();
        let c = FiniteAlgebra::new("pointed", 2, sig, vec![vec![0]]).unwrap();
        assert!(nonindexed_product(&a, &c).is_err());
        // against a trivial factor the projection is harmless
        let t = FiniteAlgebra::trivial("t", Signature::empty());
        assert!(nonindexed_product(&c, &t).is_ok());
    }

    #[test]
    fn subalgebra_closure() {
        let a = lattice2();
        let g = subalgebra_generate(&a, &[0]);
        assert_eq!(g.elements, vec![0]);
        let g = subalgebra_generate(&a, &[0, 1]);
        assert_eq!(g.elements, vec![0, 1]);
        let p = direct_product(&a, &a).unwrap();
        // seeds (0,1) and (1,0): meet and join fill in (0,0) and (1,1)
        let g = subalgebra_generate(&p, &[1, 2]);
        assert_eq!(g.elements.len(), 4);
        assert_eq!(g.provenance[0], Provenance::Seed(0));
        // idempotent: generating from the output returns the same set
        let again = subalgebra_generate(&p, &g.elements);
        assert_eq!(again.elements.len(), g.elements.len());
    }

    #[test]
    fn op_classification() {
        let a = lattice2();
        assert!(a.op_is_symmetric(0) && a.op_is_symmetric(1));
        assert!(a.op_absorbs_repeats(0) && a.op_absorbs_repeats(1));
        let i = implication2();
        assert!(!i.op_is_symmetric(0));
        assert!(!i.op_absorbs_repeats(0)); // imp(x,x) = 1 is not a projection
        let baker = parse_algebra("algebra b\nsize 2\nop f 3\n0 0\n0 0\n0 1\n1 1\n").unwrap();
        assert!(!baker.op_is_symmetric(0));
        assert!(!baker.op_absorbs_repeats(0)); // f(y,x,x) = y /\ x
        let mm = parse_algebra(
            "algebra m\nsize 2\nop maj 3\n0 0\n0 1\n0 1\n1 1\nop min 3\n0 1\n1 0\n1 0\n0 1\n",
        )
        .unwrap();
        assert!(mm.op_is_symmetric(0) && mm.op_is_symmetric(1));
        assert!(mm.op_absorbs_repeats(0) && mm.op_absorbs_repeats(1));
    }
}
