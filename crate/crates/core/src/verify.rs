//! Executable theorem harness: each named result becomes a property check
//! over concrete finite algebras, with machine-checkable counterexamples on
//! failure. Reports carry their inputs, caps and budgets, and render to
//! deterministic JSON (no timings).

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{direct_product, nonindexed_product, FiniteAlgebra, Term};
use crate::conditions::spectrum::{AlphaKind, RelBudget};
use crate::conditions::terms::verify_chain;
use crate::conditions::{
    check_identity_generic, day_level, find_terms, jonsson_level, DistVariant, InclusionScheme,
    RelAst, TermScheme,
};
use crate::error::{Error, Result};
use crate::free::FreeCap;
use crate::rel::{all_congruences, enumerate_reflexive_admissible, enumerate_tolerances, BinRel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    BudgetExceeded,
}

/// One theorem check over concrete inputs.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub inputs: BTreeMap<String, Value>,
    pub status: Status,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl TheoremReport {
    fn new(theorem: &str) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            inputs: BTreeMap::new(),
            status: Status::Pass,
            details: Vec::new(),
            counterexample: None,
        }
    }

    fn input(&mut self, key: &str, v: Value) {
        self.inputs.insert(key.into(), v);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn fail(&mut self, counterexample: Value) {
        self.status = Status::Fail;
        self.counterexample = Some(counterexample);
    }
}

fn names(bases: &[FiniteAlgebra]) -> Value {
    json!(bases.iter().map(|a| a.name()).collect::<Vec<_>>())
}

fn caps_value(cap: &FreeCap, budget: Option<&RelBudget>) -> Value {
    let mut v = json!({
        "max_elements": cap.max_elements,
        "max_width": cap.max_width,
        "max_applications": cap.max_applications,
    });
    if let Some(b) = budget {
        v["budget_pairs"] = json!(b.max_pairs);
        v["exhaustive_max_n"] = json!(b.exhaustive_max_n);
    }
    v
}

/// Corollary: J(m) = k implies J(mℓ) ≤ kℓ.
pub fn verify_corollary_ell(
    bases: &[FiniteAlgebra],
    m: usize,
    ell: usize,
    k_max: usize,
    cap: &FreeCap,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("corollary-ell");
    rep.input("algebras", names(bases));
    rep.input("m", json!(m));
    rep.input("l", json!(ell));
    rep.input("k_max", json!(k_max));
    rep.input("caps", caps_value(cap, None));
    let jm = jonsson_level(bases, m, k_max, DistVariant::Standard, cap)?;
    let Some(k) = jm.value.level() else {
        rep.status = Status::Skipped;
        rep.note(format!("J({m}) exceeded k_max {k_max}; hypothesis not established"));
        return Ok(rep);
    };
    rep.note(format!("J({m}) = {k}"));
    match jonsson_level(bases, m * ell, k_max.max(k * ell), DistVariant::Standard, cap) {
        Ok(jml) => match jml.value.level() {
            Some(v) if v <= k * ell => {
                rep.note(format!("J({}) = {v} ≤ {}", m * ell, k * ell));
            }
            Some(v) => {
                rep.fail(json!({"J_m": k, "J_ml": v, "bound": k * ell}));
            }
            None => {
                rep.fail(json!({"J_m": k, "J_ml": format!("exceeded"), "bound": k * ell}));
            }
        },
        Err(e) if e.is_cap() => {
            rep.status = Status::BudgetExceeded;
            rep.note(format!("J({}) out of cap: {e}", m * ell));
        }
        Err(e) => return Err(e),
    }
    Ok(rep)
}

fn congruence_rels(a: &FiniteAlgebra, cap: usize) -> Result<Vec<BinRel>> {
    Ok(all_congruences(a, cap)?
        .into_iter()
        .map(|c| c.as_binrel())
        .collect())
}

fn rel_lines(r: &BinRel) -> Vec<String> {
    r.to_string().lines().map(|s| s.to_string()).collect()
}

/// Members on which the "all congruence triples" checks run: the
/// algebra itself and its square, when the square fits the cap.
fn with_square(a: &FiniteAlgebra, con_cap: usize) -> Result<Vec<FiniteAlgebra>> {
    let mut out = vec![a.clone()];
    if a.size() * a.size() <= con_cap {
        out.push(direct_product(a, a)?);
    }
    Ok(out)
}

/// Theorem: if α(β∘γ) ⊆ α(γ∘β)∘αγ holds (equivalently the variety has 3
/// Gumm terms), then (4a), (4b), (4c) hold; plus the claim (ru).
pub fn verify_theorem_4gt(
    bases: &[FiniteAlgebra],
    m_max: usize,
    budget: &RelBudget,
    cap: &FreeCap,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("theorem-4gt");
    rep.input("algebras", names(bases));
    rep.input("m_max", json!(m_max));
    rep.input("caps", caps_value(cap, Some(budget)));
    let pj = find_terms(bases, TermScheme::PJ, 3, cap)?;
    if pj.chain.is_none() {
        rep.status = Status::Skipped;
        rep.note("hypothesis not established (no 3 Gumm terms), skipped");
        return Ok(rep);
    }
    rep.note(format!(
        "hypothesis: 3 Gumm terms {}",
        pj.rendered.as_ref().unwrap().join(", ")
    ));

    for a in bases {
        for member in with_square(a, budget.con_cap)? {
            let cons = congruence_rels(&member, budget.con_cap)?;
            for (ia, alpha) in cons.iter().enumerate() {
                for (ib, beta) in cons.iter().enumerate() {
                    for (ig, gamma) in cons.iter().enumerate() {
                        let ab = alpha.meet(beta)?;
                        let ag = alpha.meet(gamma)?;
                        let a_bg = alpha.meet(&beta.compose(gamma)?)?;
                        let a_gb = alpha.meet(&gamma.compose(beta)?)?;
                        // (4a)
                        let lhs = a_bg.compose(&ab)?;
                        let rhs = ab.compose(&a_gb)?;
                        if lhs != rhs {
                            rep.fail(json!({
                                "identity": "4a", "algebra": member.name(),
                                "triple": [ia, ib, ig],
                            }));
                            return Ok(rep);
                        }
                        // (4b)
                        let bgb = beta.compose(gamma)?.compose(beta)?;
                        let lhs = alpha.meet(&bgb)?.compose(&ag)?;
                        let rhs = a_bg.compose(&ab)?.compose(&ag)?;
                        if lhs != rhs {
                            rep.fail(json!({
                                "identity": "4b", "algebra": member.name(),
                                "triple": [ia, ib, ig],
                            }));
                            return Ok(rep);
                        }
                        // (4c) for 2 ≤ mm ≤ m_max
                        for mm in 2..=m_max {
                            let lhs = alpha.meet(&BinRel::compose_alt(beta, gamma, mm + 2)?)?;
                            let rhs = a_bg.compose(&BinRel::compose_alt(&ab, &ag, mm)?)?;
                            if lhs != rhs {
                                rep.fail(json!({
                                    "identity": "4c", "m": mm, "algebra": member.name(),
                                    "triple": [ia, ib, ig],
                                }));
                                return Ok(rep);
                            }
                        }
                    }
                }
            }
            rep.note(format!(
                "(4a),(4b),(4c m≤{m_max}) hold over all {}³ congruence triples of {}",
                cons.len(),
                member.name()
            ));
        }
    }

    // claim (ru): α(T∘T⌣∘R∘S) = α(T∘T⌣)∘αR∘αS for R ⊆ T, S ⊆ T⌣
    for a in bases {
        let rels = enumerate_reflexive_admissible(a, budget.max_pairs, budget.exhaustive_max_n);
        let alphas = congruence_rels(a, budget.con_cap)?;
        let mut checked = 0usize;
        for t in &rels {
            let tconv = t.converse();
            for r in rels.iter().filter(|r| r.is_subset(t).unwrap_or(false)) {
                for s in rels.iter().filter(|s| s.is_subset(&tconv).unwrap_or(false)) {
                    for alpha in &alphas {
                        checked += 1;
                        let lhs = alpha.meet(&t.compose(&tconv)?.compose(r)?.compose(s)?)?;
                        let rhs = alpha
                            .meet(&t.compose(&tconv)?)?
                            .compose(&alpha.meet(r)?)?
                            .compose(&alpha.meet(s)?)?;
                        if lhs != rhs {
                            rep.fail(json!({
                                "identity": "ru", "algebra": a.name(),
                                "T": rel_lines(t), "R": rel_lines(r), "S": rel_lines(s),
                                "alpha": rel_lines(alpha),
                            }));
                            return Ok(rep);
                        }
                    }
                }
            }
        }
        rep.note(format!("claim (ru): {checked} combinations hold on {}", a.name()));
    }
    Ok(rep)
}

/// Corollary: if J(1) = 2 then J(n) ≤ n for n ≥ 3, and
/// α(β∘γ∘β)∘αγ = αβ∘αγ∘αβ∘αγ.
pub fn verify_corollary_th3d(
    bases: &[FiniteAlgebra],
    n_max: usize,
    budget: &RelBudget,
    cap: &FreeCap,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("corollary-th3d");
    rep.input("algebras", names(bases));
    rep.input("n_max", json!(n_max));
    rep.input("caps", caps_value(cap, Some(budget)));
    let j1 = jonsson_level(bases, 1, 8, DistVariant::Standard, cap)?;
    if j1.value.level() != Some(2) {
        rep.status = Status::Skipped;
        rep.note(format!("precondition J(1) = 2 fails (J(1) = {})", j1.value));
        return Ok(rep);
    }
    for a in bases {
        for member in with_square(a, budget.con_cap)? {
            let cons = congruence_rels(&member, budget.con_cap)?;
            for (ia, alpha) in cons.iter().enumerate() {
                for (ib, beta) in cons.iter().enumerate() {
                    for (ig, gamma) in cons.iter().enumerate() {
                        let ab = alpha.meet(beta)?;
                        let ag = alpha.meet(gamma)?;
                        let bgb = beta.compose(gamma)?.compose(beta)?;
                        let lhs = alpha.meet(&bgb)?.compose(&ag)?;
                        let rhs = ab.compose(&ag)?.compose(&ab)?.compose(&ag)?;
                        if lhs != rhs {
                            rep.fail(json!({
                                "identity": "th3d-displayed", "algebra": member.name(),
                                "triple": [ia, ib, ig],
                            }));
                            return Ok(rep);
                        }
                    }
                }
            }
            rep.note(format!(
                "displayed equality holds over all {}³ congruence triples of {}",
                cons.len(),
                member.name()
            ));
        }
    }
    for n in 3..=n_max {
        match jonsson_level(bases, n, n, DistVariant::Standard, cap) {
            Ok(jn) => match jn.value.level() {
                Some(v) if v <= n => rep.note(format!("J({n}) = {v} ≤ {n} (free-algebra route)")),
                _ => {
                    rep.fail(json!({"n": n, "J_n": jn.value.to_string(), "bound": n}));
                    return Ok(rep);
                }
            },
            Err(e) if e.is_cap() => {
                rep.note(format!("n = {n}: free-algebra route out of cap, member-check only"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

/// Proposition: k+1 directed Jónsson terms give
/// α(S₁∘…∘S_ℓ) ⊆ (αS₁∘…∘αS_ℓ)^{k-1}, with the (arss) and odd-ℓ variants.
pub fn verify_prop_kk(
    a: &FiniteAlgebra,
    chain: &[Term],
    ell: usize,
    alpha_kind: AlphaKind,
    budget: &RelBudget,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("proposition-kk");
    rep.input("algebra", json!(a.name()));
    rep.input("l", json!(ell));
    rep.input("alpha_kind", json!(format!("{alpha_kind:?}")));
    rep.input("chain", json!(chain.iter().map(|t| t.to_string()).collect::<Vec<_>>()));
    rep.input("budget", json!({"pairs": budget.max_pairs, "exhaustive_max_n": budget.exhaustive_max_n}));
    if let Err(e) = verify_chain(std::slice::from_ref(a), TermScheme::DirectedJonsson, chain) {
        rep.status = Status::Skipped;
        rep.note(format!("precondition: chain is not a directed Jónsson chain ({e})"));
        return Ok(rep);
    }
    let k = chain.len() - 1;
    if k < 1 {
        rep.status = Status::Skipped;
        rep.note("chain too short");
        return Ok(rep);
    }
    let rels = enumerate_reflexive_admissible(a, budget.max_pairs, budget.exhaustive_max_n);
    let alphas = match alpha_kind {
        AlphaKind::Congruence => congruence_rels(a, budget.con_cap)?,
        AlphaKind::Tolerance => enumerate_tolerances(a, budget.max_pairs, budget.exhaustive_max_n),
    };
    // main inclusion over all ℓ-tuples of relations
    let mut idx = vec![0usize; ell];
    let mut checked = 0usize;
    'tuples: loop {
        let ss: Vec<&BinRel> = idx.iter().map(|&i| &rels[i]).collect();
        let mut comp = ss[0].clone();
        for s in &ss[1..] {
            comp = comp.compose(s)?;
        }
        for alpha in &alphas {
            checked += 1;
            let lhs = alpha.meet(&comp)?;
            let mut block = alpha.meet(ss[0])?;
            for s in &ss[1..] {
                block = block.compose(&alpha.meet(s)?)?;
            }
            let mut rhs = BinRel::diagonal(a.size());
            for _ in 0..k - 1 {
                rhs = rhs.compose(&block)?;
            }
            if !lhs.is_subset(&rhs)? {
                rep.fail(json!({
                    "identity": "kk-main",
                    "relations": ss.iter().map(|s| rel_lines(s)).collect::<Vec<_>>(),
                    "alpha": rel_lines(alpha),
                }));
                return Ok(rep);
            }
        }
        let mut i = ell;
        loop {
            if i == 0 {
                break 'tuples;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < rels.len() {
                break;
            }
            idx[i] = 0;
        }
    }
    rep.note(format!("main inclusion: {checked} combinations with k = {k}"));

    if ell.is_multiple_of(2) {
        // (arss): α(S ∘_ℓ T) ⊆ αS ∘_{ℓ(k-1)} αT
        for s in &rels {
            for t in &rels {
                for alpha in &alphas {
                    let lhs = alpha.meet(&BinRel::compose_alt(s, t, ell)?)?;
                    let rhs =
                        BinRel::compose_alt(&alpha.meet(s)?, &alpha.meet(t)?, ell * (k - 1))?;
                    if !lhs.is_subset(&rhs)? {
                        rep.fail(json!({
                            "identity": "arss",
                            "S": rel_lines(s), "T": rel_lines(t), "alpha": rel_lines(alpha),
                        }));
                        return Ok(rep);
                    }
                }
            }
        }
        rep.note(format!("(arss) holds with {} factors", ell * (k - 1)));
    } else {
        // odd ℓ: β a congruence, k' = ℓ(k-1) - k + 2; the reordering keeps
        // the intermediate value nonnegative (ℓ(k-1) + 2 ≥ k for ℓ, k ≥ 1)
        let kp = ell * (k - 1) + 2 - k;
        let betas = congruence_rels(a, budget.con_cap)?;
        for beta in &betas {
            for t in &rels {
                for alpha in &alphas {
                    let lhs = alpha.meet(&BinRel::compose_alt(beta, t, ell)?)?;
                    let rhs = BinRel::compose_alt(&alpha.meet(beta)?, &alpha.meet(t)?, kp)?;
                    if !lhs.is_subset(&rhs)? {
                        rep.fail(json!({
                            "identity": "kk-odd",
                            "beta": rel_lines(beta), "T": rel_lines(t), "alpha": rel_lines(alpha),
                        }));
                        return Ok(rep);
                    }
                }
            }
        }
        rep.note(format!("odd-l refinement holds with k' = {kp}"));
    }
    Ok(rep)
}

/// Lemma: k+2 Gumm terms give α(β∘γ∘β) ⊆ α(γ∘β)∘(αγ ∘_{2k} αβ); theorem:
/// J(2) ≤ J⌣(1) + 2k and J⌣(2) ≤ J(1) + 2k, improvable by 1 on the stated
/// parities. Also checks the Gumm count against the m²−m+1 bound from the
/// Day level.
pub fn verify_lemma_gt_and_jgt(
    bases: &[FiniteAlgebra],
    k_max: usize,
    budget: &RelBudget,
    cap: &FreeCap,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("lemma-gt-theorem-jgt");
    rep.input("algebras", names(bases));
    rep.input("k_max", json!(k_max));
    rep.input("caps", caps_value(cap, Some(budget)));
    let gumm = find_terms(bases, TermScheme::Gumm, k_max + 2, cap)?;
    let Some(chain) = &gumm.chain else {
        rep.status = Status::Skipped;
        rep.note("no Gumm terms within bound; not applicable");
        return Ok(rep);
    };
    let k = chain.len() - 2;
    rep.note(format!("minimal Gumm chain: {} terms (k = {k})", chain.len()));

    // (i) member-level Lemma identity over congruence triples
    for a in bases {
        for member in with_square(a, budget.con_cap)? {
            let cons = congruence_rels(&member, budget.con_cap)?;
            for alpha in &cons {
                for beta in &cons {
                    for gamma in &cons {
                        let lhs = alpha.meet(&beta.compose(gamma)?.compose(beta)?)?;
                        let first = alpha.meet(&gamma.compose(beta)?)?;
                        let tail =
                            BinRel::compose_alt(&alpha.meet(gamma)?, &alpha.meet(beta)?, 2 * k)?;
                        if !lhs.is_subset(&first.compose(&tail)?)? {
                            rep.fail(json!({
                                "identity": "lemma-gt", "algebra": member.name(),
                            }));
                            return Ok(rep);
                        }
                    }
                }
            }
        }
    }
    rep.note("lemma identity holds over member congruence triples");

    // (i') free-algebra route
    let chain_sets = vec![
        std::collections::BTreeSet::from(['b']),
        std::collections::BTreeSet::from(['g']),
        std::collections::BTreeSet::from(['b']),
    ];
    let prefix = RelAst::Meet(vec![
        RelAst::Var('a'),
        RelAst::Compose(vec![RelAst::Var('g'), RelAst::Var('b')]),
    ]);
    let mut factors = vec![prefix];
    if let RelAst::Compose(fs) =
        RelAst::alternating(RelAst::meet_of(&['a', 'g']), RelAst::meet_of(&['a', 'b']), 2 * k)
    {
        factors.extend(fs);
    }
    let scheme = InclusionScheme::new(Some('a'), chain_sets, RelAst::Compose(factors))?;
    let free_check = check_identity_generic(bases, &scheme, cap)?;
    if !free_check.holds {
        rep.fail(json!({"identity": "lemma-gt-free", "scheme": scheme.to_string()}));
        return Ok(rep);
    }
    rep.note(format!(
        "lemma identity verified on F(4) ({} elements)",
        free_check.free_elements
    ));

    // (ii) the spectrum inequalities
    let j1 = jonsson_level(bases, 1, k_max, DistVariant::Standard, cap)?;
    let j2 = jonsson_level(bases, 2, k_max, DistVariant::Standard, cap)?;
    let j1c = jonsson_level(bases, 1, k_max, DistVariant::Converse, cap)?;
    let j2c = jonsson_level(bases, 2, k_max, DistVariant::Converse, cap)?;
    let (Some(j1), Some(j2), Some(j1c), Some(j2c)) =
        (j1.value.level(), j2.value.level(), j1c.value.level(), j2c.value.level())
    else {
        rep.status = Status::Skipped;
        rep.note("a spectrum value exceeded k_max; not applicable");
        return Ok(rep);
    };
    rep.note(format!("J(1)={j1} J(2)={j2} Jconv(1)={j1c} Jconv(2)={j2c}"));
    let mut bound1 = j1c + 2 * k;
    if k >= 1 && j1c % 2 == 1 {
        bound1 -= 1;
    }
    let mut bound2 = j1 + 2 * k;
    if k >= 1 && j1 % 2 == 0 {
        bound2 -= 1;
    }
    if j2 > bound1 {
        rep.fail(json!({"inequality": "J(2) <= Jconv(1)+2k", "J2": j2, "bound": bound1}));
        return Ok(rep);
    }
    if j2c > bound2 {
        rep.fail(json!({"inequality": "Jconv(2) <= J(1)+2k", "J2conv": j2c, "bound": bound2}));
        return Ok(rep);
    }
    rep.note(format!("jgt(2): J(2)={j2} ≤ {bound1}, Jconv(2)={j2c} ≤ {bound2}"));

    // Gumm count against the Day-level bound
    match day_level(bases, k_max, cap) {
        Ok(d) => {
            if let Some(m) = d.value.level() {
                if m >= 2 {
                    let bound = m * m - m + 1;
                    if chain.len() > bound {
                        rep.fail(json!({
                            "inequality": "gumm_terms <= m^2-m+1",
                            "gumm_terms": chain.len(), "day_level": m, "bound": bound,
                        }));
                        return Ok(rep);
                    }
                    rep.note(format!(
                        "{}-modular: {} Gumm terms ≤ {} = m²-m+1",
                        m,
                        chain.len(),
                        bound
                    ));
                }
            }
        }
        Err(e) if e.is_cap() => rep.note(format!("day level out of cap: {e}")),
        Err(e) => return Err(e),
    }
    Ok(rep)
}

/// Proposition: the non-indexed product's J is the pointwise maximum.
pub fn verify_prop_nip(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    m_list: &[usize],
    k_max: usize,
    cap: &FreeCap,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("proposition-nip");
    rep.input("algebras", json!([a.name(), b.name()]));
    rep.input("m_list", json!(m_list));
    rep.input("k_max", json!(k_max));
    rep.input("caps", caps_value(cap, None));
    let product = nonindexed_product(a, b)?;
    for &m in m_list {
        let ja = jonsson_level(std::slice::from_ref(a), m, k_max, DistVariant::Standard, cap)?;
        let jb = jonsson_level(std::slice::from_ref(b), m, k_max, DistVariant::Standard, cap)?;
        let jp =
            jonsson_level(std::slice::from_ref(&product), m, k_max, DistVariant::Standard, cap)?;
        match (ja.value.level(), jb.value.level(), jp.value.level()) {
            (Some(x), Some(y), Some(p)) => {
                if p != x.max(y) {
                    rep.fail(json!({
                        "m": m, "J_a": x, "J_b": y, "J_product": p, "expected": x.max(y),
                    }));
                    return Ok(rep);
                }
                rep.note(format!("m={m}: J(product)={p} = max({x},{y})"));
            }
            _ => {
                rep.status = Status::BudgetExceeded;
                rep.note(format!("m={m}: some spectrum exceeded k_max"));
                return Ok(rep);
            }
        }
    }
    Ok(rep)
}

/// Configuration for the full battery.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub cap: FreeCap,
    pub budget: RelBudget,
    pub k_max: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { cap: FreeCap::default(), budget: RelBudget::default(), k_max: 6 }
    }
}

/// The deterministic battery over a list of algebras: per-variety theorems
/// for each algebra, the Baker-style directed-chain proposition where a
/// directed chain exists, and the non-indexed product proposition for each
/// disjoint-signature pair.
pub fn verify_all(algebras: &[FiniteAlgebra], config: &VerifyConfig) -> Result<Vec<TheoremReport>> {
    let mut out = Vec::new();
    let cap = &config.cap;
    let budget = &config.budget;
    for a in algebras {
        let bases = std::slice::from_ref(a);
        for (m, ell) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            out.push(verify_corollary_ell(bases, m, ell, config.k_max, cap)?);
        }
        out.push(verify_theorem_4gt(bases, 4, budget, cap)?);
        out.push(verify_corollary_th3d(bases, 3, budget, cap)?);
        out.push(verify_lemma_gt_and_jgt(bases, config.k_max, budget, cap)?);
        let directed = find_terms(bases, TermScheme::DirectedJonsson, config.k_max + 2, cap)?;
        if let Some(chain) = &directed.chain {
            for ell in [1usize, 2] {
                for kind in [AlphaKind::Congruence, AlphaKind::Tolerance] {
                    out.push(verify_prop_kk(a, chain, ell, kind, budget)?);
                }
            }
        }
    }
    for i in 0..algebras.len() {
        for j in i + 1..algebras.len() {
            let (a, b) = (&algebras[i], &algebras[j]);
            if a.signature().is_disjoint(b.signature()) {
                out.push(verify_prop_nip(a, b, &[1], config.k_max, cap)?);
            }
        }
    }
    Ok(out)
}

/// Renders reports as a deterministic JSON array.
pub fn reports_to_json(reports: &[TheoremReport]) -> String {
    serde_json::to_string_pretty(reports).expect("serializable reports")
}

/// One line per report for the human-readable summary.
pub fn summary_table(reports: &[TheoremReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let inputs: Vec<String> = r
            .inputs
            .iter()
            .filter(|(k, _)| *k != "caps" && *k != "budget" && *k != "chain")
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!(
            "{:<24} {:<16} {}\n",
            r.theorem,
            format!("{:?}", r.status),
            inputs.join(" ")
        ));
    }
    out
}

/// Validation error for malformed verify requests from the CLI.
pub fn unknown_theorem(id: &str) -> Error {
    Error::Scheme(format!(
        "unknown theorem id `{id}`; known: corollary-ell, theorem-4gt, corollary-th3d, \
         proposition-kk, lemma-gt-theorem-jgt, proposition-nip, all"
    ))
}
