//! Independent oracles for the derived fixtures: plain set-based
//! implementations with no shared code paths, checked against the library
//! before the values are trusted anywhere else.

use std::collections::BTreeSet;

use cdspec::{all_congruences, enumerate_reflexive_admissible, parse_algebra, FiniteAlgebra};
use cdspec::{FreeAlgebra, FreeCap};

fn corpus(name: &str) -> FiniteAlgebra {
    let path = format!("{}/../../corpus/{name}.alg", env!("CARGO_MANIFEST_DIR"));
    parse_algebra(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Closure of the projections in the space of n-ary operations on a single
/// base, done the slow way: functions as value vectors in a BTreeSet,
/// re-scanning all argument tuples until nothing new appears.
fn brute_free_count(a: &FiniteAlgebra, n: usize) -> usize {
    let space = a.size().pow(n as u32);
    let assignments: Vec<Vec<usize>> = (0..space)
        .map(|code| {
            let mut v = vec![0usize; n];
            let mut rest = code;
            for i in (0..n).rev() {
                v[i] = rest % a.size();
                rest /= a.size();
            }
            v
        })
        .collect();
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in 0..n {
        set.insert(assignments.iter().map(|asg| asg[g]).collect());
    }
    loop {
        let snapshot: Vec<Vec<usize>> = set.iter().cloned().collect();
        let before = set.len();
        for op in 0..a.signature().len() {
            let arity = a.signature().arity(op);
            let mut idx = vec![0usize; arity];
            'tuples: loop {
                let value: Vec<usize> = (0..space)
                    .map(|p| {
                        let args: Vec<usize> = idx.iter().map(|&t| snapshot[t][p]).collect();
                        a.apply(op, &args)
                    })
                    .collect();
                set.insert(value);
                let mut i = arity;
                loop {
                    if i == 0 {
                        break 'tuples;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < snapshot.len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
        if set.len() == before {
            return set.len();
        }
    }
}

#[test]
fn free_algebra_counts_against_brute_closure() {
    let cap = FreeCap::default();
    for (name, n, expect) in [
        ("lattice2", 2, 4),
        ("lattice2", 3, 18),
        ("majmin2", 3, 8),
        ("implication2", 2, 6),
        ("implication2", 3, 38),
        ("baker2", 3, 10),
        ("trivial1", 3, 1),
    ] {
        let a = corpus(name);
        let brute = brute_free_count(&a, n);
        assert_eq!(brute, expect, "oracle count for {name} F({n})");
        let f = FreeAlgebra::build(std::slice::from_ref(&a), n, &cap).unwrap();
        assert_eq!(f.len(), brute, "library vs oracle for {name} F({n})");
    }
}

/// All partitions of {0..n-1} by restricted growth strings.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(labels: &mut Vec<usize>, i: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(labels, i + 1, max.max(l), out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    labels[0] = 0;
    rec(&mut labels, 1, 0, &mut out);
    if out.is_empty() {
        out.push(labels);
    }
    out
}

/// A partition respects the operations iff applying any operation to
/// blockwise-related tuples lands in one block.
fn respects(a: &FiniteAlgebra, labels: &[usize]) -> bool {
    for op in 0..a.signature().len() {
        let arity = a.signature().arity(op);
        let n = a.size();
        let mut xs = vec![0usize; arity];
        let mut ys = vec![0usize; arity];
        let total = n.pow(arity as u32);
        for cx in 0..total {
            let mut rest = cx;
            for i in (0..arity).rev() {
                xs[i] = rest % n;
                rest /= n;
            }
            for cy in 0..total {
                let mut rest = cy;
                for i in (0..arity).rev() {
                    ys[i] = rest % n;
                    rest /= n;
                }
                if xs.iter().zip(&ys).all(|(x, y)| labels[*x] == labels[*y])
                    && labels[a.apply(op, &xs)] != labels[a.apply(op, &ys)]
                {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn congruence_counts_against_partition_filter() {
    let lat = corpus("lattice2");
    let square = cdspec::direct_product(&lat, &lat).unwrap();
    for (alg, expect) in [(&lat, 2usize), (&square, 4)] {
        let brute = all_partitions(alg.size())
            .into_iter()
            .filter(|l| respects(alg, l))
            .count();
        assert_eq!(brute, expect, "partition filter on {}", alg.name());
        assert_eq!(all_congruences(alg, 64).unwrap().len(), brute);
    }
    // the implication square too, for the th3d member checks
    let imp = corpus("implication2");
    let isq = cdspec::direct_product(&imp, &imp).unwrap();
    let brute = all_partitions(4).into_iter().filter(|l| respects(&isq, l)).count();
    assert_eq!(all_congruences(&isq, 64).unwrap().len(), brute);
}

#[test]
fn reflexive_admissible_against_mask_filter() {
    for name in ["lattice2", "implication2", "majmin2", "baker2"] {
        let a = corpus(name);
        let n = a.size();
        let offdiag: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        let mut brute = 0usize;
        for mask in 0u32..(1 << offdiag.len()) {
            let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
            for (i, &p) in offdiag.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    pairs.push(p);
                }
            }
            // closed under ops applied coordinatewise?
            let rel = |x: usize, y: usize| pairs.contains(&(x, y));
            let mut ok = true;
            'ops: for op in 0..a.signature().len() {
                let arity = a.signature().arity(op);
                let k = pairs.len();
                let mut idx = vec![0usize; arity];
                loop {
                    let xs: Vec<usize> = idx.iter().map(|&t| pairs[t].0).collect();
                    let ys: Vec<usize> = idx.iter().map(|&t| pairs[t].1).collect();
                    if !rel(a.apply(op, &xs), a.apply(op, &ys)) {
                        ok = false;
                        break 'ops;
                    }
                    let mut i = arity;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        idx[i] += 1;
                        if idx[i] < k {
                            break;
                        }
                        idx[i] = 0;
                    }
                    if idx.iter().all(|&t| t == 0) {
                        break;
                    }
                }
            }
            if ok {
                brute += 1;
            }
        }
        let lib = enumerate_reflexive_admissible(&a, 0, 4).len();
        assert_eq!(lib, brute, "reflexive admissible count on {name}");
    }
}

#[test]
fn two_lattice_has_four_reflexive_admissible() {
    let a = corpus("lattice2");
    assert_eq!(enumerate_reflexive_admissible(&a, 0, 4).len(), 4);
}
