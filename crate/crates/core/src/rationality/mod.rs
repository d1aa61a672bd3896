//! Retract-rationality verdicts from a forward-chained rule base.

mod field;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{builtin_field, FieldModel, FieldSpec, Tri};

use crate::constructors::{g_plus, sl2, ConstructError};
use crate::frobenius::{find_frobenius_structures, FrobeniusError, FrobeniusStructure};
use crate::group::{Group, GroupError, Subgroup};
use crate::gz_classify::{is_gz_group, is_z_group, GzError};

const MAX_DEPTH: usize = 3;
const COMPLEMENT_BUDGET: usize = 100_000;

#[derive(Debug, Error)]
pub enum RationalityError {
    #[error("bad field spec: {0}")]
    BadSpec(String),
    #[error("retract rationality needs an infinite ground field, got {0}")]
    FieldNotInfinite(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Gz(#[from] GzError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct RuleInfo {
    pub id: String,
    pub citation: String,
    pub statement: String,
}

pub fn rules() -> &'static [RuleInfo] {
    static RULES: OnceLock<Vec<RuleInfo>> = OnceLock::new();
    RULES.get_or_init(|| serde_json::from_str(include_str!("../../data/rules.json")).expect("rule table parses"))
}

pub fn rule(id: &str) -> &'static RuleInfo {
    rules().iter().find(|r| r.id == id).expect("known rule id")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    RetractRational,
    NotRetractRational,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: String,
    pub citation: String,
    pub subject: String,
    pub bindings: BTreeMap<String, String>,
}

impl TraceStep {
    fn new(id: &str, subject: &str, bindings: &[(&str, String)]) -> Self {
        TraceStep {
            rule: id.to_string(),
            citation: rule(id).citation.clone(),
            subject: subject.to_string(),
            bindings: bindings.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub rule: String,
    pub failed_premise: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corollary {
    pub rule: String,
    pub citation: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub field: String,
    pub group_order: usize,
    pub outcome: Outcome,
    pub trace: Vec<TraceStep>,
    pub corollaries: Vec<Corollary>,
    pub attempts: Vec<Attempt>,
}

fn v_p(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// A complement to the normal subgroup `n`, if one turns up within the search budget.
fn find_complement(h: &Group, n: &Subgroup) -> Result<Option<Subgroup>, GroupError> {
    let idx = h.order() / n.order();
    let forbidden: Vec<bool> = (0..h.order()).map(|x| x != 0 && n.contains(x)).collect();
    let q = h.quotient(n)?;
    let qgens = q.group.small_generating_set();
    let lifts: Vec<Vec<usize>> = qgens
        .iter()
        .map(|&y| (0..h.order()).filter(|&x| q.projection[x] == y).collect())
        .collect();
    let total = lifts.iter().map(Vec::len).try_fold(1usize, |a, b| a.checked_mul(b));
    if total.is_none_or(|t| t > COMPLEMENT_BUDGET) {
        return Ok(None);
    }
    let mut choice = vec![0usize; lifts.len()];
    'outer: loop {
        let gens: Vec<usize> = choice.iter().zip(&lifts).map(|(&i, l)| l[i]).collect();
        if let Some(k) = h.closure_bounded(&gens, idx, Some(&forbidden)) {
            if k.order() == idx {
                return Ok(Some(k));
            }
        }
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < lifts[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        return Ok(None);
    }
}

struct Facts {
    group: Group,
    /// element indices of this group inside the root group
    map: Vec<usize>,
    r: u32,
    l: u32,
    frobenius: Option<Vec<FrobeniusStructure>>,
}

impl Facts {
    fn new(group: Group, map: Vec<usize>) -> Self {
        let e = group.exponent();
        Facts {
            r: v_p(e, 2),
            l: v_p(e, 3),
            group,
            map,
            frobenius: None,
        }
    }

    fn frobenius(&mut self) -> Result<&[FrobeniusStructure], RationalityError> {
        if self.frobenius.is_none() {
            self.frobenius = Some(find_frobenius_structures(&self.group)?);
        }
        Ok(self.frobenius.as_deref().unwrap_or_default())
    }

    fn lift(&self, s: &Subgroup) -> Vec<usize> {
        let mut v: Vec<usize> = s.elements().iter().map(|&x| self.map[x]).collect();
        v.sort_unstable();
        v
    }
}

struct Engine<'a> {
    root: &'a Group,
    k: &'a FieldModel,
    negative_memo: HashMap<Vec<usize>, Option<Vec<TraceStep>>>,
    positive_memo: HashMap<Vec<usize>, Option<Vec<TraceStep>>>,
    attempts: Vec<Attempt>,
}

fn subject(depth: usize, order: usize) -> String {
    if depth == 0 {
        "G".to_string()
    } else {
        format!("subgroup of order {order}")
    }
}

fn is_sl2_f5(g: &Group) -> Result<bool, RationalityError> {
    static REF: OnceLock<Group> = OnceLock::new();
    if g.order() != 120 || !g.is_perfect() {
        return Ok(false);
    }
    let r = match REF.get() {
        Some(r) => r,
        None => {
            let _ = REF.set(sl2(5)?);
            REF.get().expect("just set")
        }
    };
    Ok(g.is_isomorphic(r).is_some())
}

fn is_s5_hat(g: &Group) -> Result<bool, RationalityError> {
    static REF: OnceLock<Group> = OnceLock::new();
    if g.order() != 240 || g.is_solvable() {
        return Ok(false);
    }
    let r = match REF.get() {
        Some(r) => r,
        None => {
            let _ = REF.set(g_plus(25)?.group().clone());
            REF.get().expect("just set")
        }
    };
    if g.order_statistics() != r.order_statistics() {
        return Ok(false);
    }
    Ok(g.is_isomorphic(r).is_some())
}

/// `H ≅ G1 × SL2(F5)` with `G1` a Z-group.
fn is_z_times_sl2_f5(h: &Group) -> Result<bool, RationalityError> {
    if !h.order().is_multiple_of(120) {
        return Ok(false);
    }
    let mut l = h.whole();
    loop {
        let (lg, map) = l.to_group(h);
        let d = lg.derived_subgroup();
        if d.order() == lg.order() {
            break;
        }
        let elems: Vec<usize> = d.elements().iter().map(|&x| map[x]).collect();
        l = h.subgroup_from_set(&{
            let mut e = elems;
            e.sort_unstable();
            e
        });
    }
    if l.order() != 120 || !is_sl2_f5(&l.to_group(h).0)? {
        return Ok(false);
    }
    let m = (h.order() / 120) as i64;
    let c = h.centralizer(l.elements());
    let mut g1: Vec<usize> = c.elements().iter().copied().filter(|&x| h.pow(x, m) == 0).collect();
    g1.sort_unstable();
    if g1.len() as i64 != m || !h.is_subgroup_set(&g1) {
        return Ok(false);
    }
    let g1 = h.subgroup_from_set(&g1);
    if g1.intersection(&l).len() != 1 {
        return Ok(false);
    }
    Ok(is_z_group(&g1.to_group(h).0)?)
}

type RuleResult = Result<Result<Vec<TraceStep>, String>, RationalityError>;

impl<'a> Engine<'a> {
    fn facts(&self, elems: &[usize]) -> Facts {
        let s = self.root.subgroup_from_set(elems);
        let (g, map) = s.to_group(self.root);
        Facts::new(g, map)
    }

    fn char_not_2_and(&self, t: Tri) -> bool {
        self.k.characteristic != 2 && t == Tri::No
    }

    fn cyclic_or_char2(&self, r: u32) -> bool {
        self.k.characteristic == 2 || self.k.cyclic_cyclotomic_ext(r) == Tri::Yes
    }

    fn zeta_conditions(&self, f: &Facts) -> Result<Vec<(&'static str, String)>, String> {
        let c = self.k.characteristic;
        if c == 2 || c == 3 {
            return Err(format!("char k = {c}"));
        }
        let u = f.r.max(3);
        if self.k.contains_zeta(1 << u) != Tri::Yes {
            return Err(format!("zeta_{} not known to lie in k", 1u64 << u));
        }
        let t = 3u64.pow(f.l);
        if self.k.contains_zeta(t) != Tri::Yes {
            return Err(format!("zeta_{t} not known to lie in k"));
        }
        Ok(vec![
            ("exponent", f.group.exponent().to_string()),
            ("u'", u.to_string()),
            ("l", f.l.to_string()),
        ])
    }

    fn record(&mut self, depth: usize, id: &str, r: &Result<Vec<TraceStep>, String>) {
        if depth == 0 {
            if let Err(why) = r {
                self.attempts.push(Attempt {
                    rule: id.to_string(),
                    failed_premise: why.clone(),
                });
            }
        }
    }

    /// Semidirect decompositions `N ⋊ H0` in root coordinates.
    fn decompositions(&self, f: &Facts) -> Result<Vec<(Vec<usize>, Vec<usize>)>, RationalityError> {
        let mut out = Vec::new();
        for n in f.group.normal_subgroups() {
            if n.is_trivial() || n.order() == f.group.order() {
                continue;
            }
            if let Some(c) = find_complement(&f.group, &n)? {
                out.push((f.lift(&n), f.lift(&c)));
            }
        }
        Ok(out)
    }

    fn negative(&mut self, elems: &[usize], depth: usize) -> Result<Option<Vec<TraceStep>>, RationalityError> {
        if let Some(v) = self.negative_memo.get(elems) {
            return Ok(v.clone());
        }
        let f = self.facts(elems);
        let subj = subject(depth, f.group.order());
        let result = self.negative_inner(&f, &subj, depth)?;
        self.negative_memo.insert(elems.to_vec(), result.clone());
        Ok(result)
    }

    fn negative_inner(&mut self, f: &Facts, subj: &str, depth: usize) -> Result<Option<Vec<TraceStep>>, RationalityError> {
        let g = &f.group;
        let ab = if !g.is_abelian() {
            Err(format!("{subj} is not abelian"))
        } else if self.char_not_2_and(self.k.cyclic_cyclotomic_ext(f.r)) {
            Ok(vec![TraceStep::new(
                "N-AB",
                subj,
                &[
                    ("exponent", g.exponent().to_string()),
                    ("r", f.r.to_string()),
                    ("field", self.k.name.clone()),
                    ("cyclic_cyclotomic_ext", "no".to_string()),
                ],
            )])
        } else {
            Err(format!("k(zeta_{})/k is not known to be non-cyclic", 1u64 << f.r))
        };
        self.record(depth, "N-AB", &ab);
        if let Ok(t) = ab {
            return Ok(Some(t));
        }
        let serre = if self.k.spec != FieldSpec::Q {
            Err("k is not Q".to_string())
        } else if g.order() == 16 && g.is_generalized_quaternion() {
            Ok(vec![TraceStep::new("N-SERRE", subj, &[("isomorphic_to", "Q16".to_string())])])
        } else if is_s5_hat(g)? {
            Ok(vec![TraceStep::new("N-SERRE", subj, &[("isomorphic_to", "hat-S5".to_string())])])
        } else {
            Err(format!("{subj} is neither Q16 nor hat-S5"))
        };
        self.record(depth, "N-SERRE", &serre);
        if let Ok(t) = serre {
            return Ok(Some(t));
        }
        if depth >= MAX_DEPTH {
            return Ok(None);
        }
        let mut desc = Err("no complement is known to be non-retract-rational".to_string());
        for (n, c) in self.decompositions(f)? {
            if let Some(mut t) = self.negative(&c, depth + 1)? {
                t.push(TraceStep::new(
                    "N-DESC",
                    subj,
                    &[
                        ("normal_subgroup_order", n.len().to_string()),
                        ("complement_order", c.len().to_string()),
                    ],
                ));
                desc = Ok(t);
                break;
            }
        }
        self.record(depth, "N-DESC", &desc);
        Ok(desc.ok())
    }

    fn positive(&mut self, elems: &[usize], depth: usize) -> Result<Option<Vec<TraceStep>>, RationalityError> {
        if let Some(v) = self.positive_memo.get(elems) {
            return Ok(v.clone());
        }
        let mut f = self.facts(elems);
        let subj = subject(depth, f.group.order());
        let result = self.positive_inner(&mut f, &subj, depth)?;
        self.positive_memo.insert(elems.to_vec(), result.clone());
        Ok(result)
    }

    fn rule_ab(&self, f: &Facts, subj: &str) -> Result<Vec<TraceStep>, String> {
        if !f.group.is_abelian() {
            return Err(format!("{subj} is not abelian"));
        }
        if !self.cyclic_or_char2(f.r) {
            return Err(format!("char k != 2 and k(zeta_{})/k not known cyclic", 1u64 << f.r));
        }
        Ok(vec![TraceStep::new(
            "R-AB",
            subj,
            &[("exponent", f.group.exponent().to_string()), ("r", f.r.to_string())],
        )])
    }

    fn rule_zk(&self, f: &mut Facts, subj: &str) -> RuleResult {
        if !self.cyclic_or_char2(f.r) {
            return Ok(Err(format!("char k != 2 and k(zeta_{})/k not known cyclic", 1u64 << f.r)));
        }
        let r = f.r;
        let g = f.group.clone();
        let fs = f.frobenius()?;
        if fs.is_empty() {
            return Ok(Err(format!("{subj} is not a Frobenius group")));
        }
        for s in fs {
            let kernel = s.kernel.to_group(&g).0;
            let complement = s.complement.to_group(&g).0;
            if kernel.is_abelian() && is_z_group(&complement)? {
                return Ok(Ok(vec![TraceStep::new(
                    "R-ZK",
                    subj,
                    &[
                        ("kernel_order", kernel.order().to_string()),
                        ("complement_order", complement.order().to_string()),
                        ("r", r.to_string()),
                    ],
                )]));
            }
        }
        Ok(Err("no Frobenius structure with abelian kernel and Z-group complement".to_string()))
    }

    fn rule_solv(&self, f: &mut Facts, subj: &str) -> RuleResult {
        if !f.group.is_solvable() {
            return Ok(Err(format!("{subj} is not solvable")));
        }
        let b = match self.zeta_conditions(f) {
            Ok(b) => b,
            Err(e) => return Ok(Err(e)),
        };
        let g = f.group.clone();
        let fs = f.frobenius()?;
        if fs.is_empty() {
            return Ok(Err(format!("{subj} is not a Frobenius group")));
        }
        for s in fs {
            if s.kernel.to_group(&g).0.is_abelian() {
                let mut b = b.clone();
                b.push(("kernel_order", s.kernel.order().to_string()));
                return Ok(Ok(vec![TraceStep::new("R-SOLV", subj, &b)]));
            }
        }
        Ok(Err("Frobenius kernel is not abelian".to_string()))
    }

    fn rule_nsolv(&self, f: &mut Facts, subj: &str) -> RuleResult {
        if f.group.is_solvable() {
            return Ok(Err(format!("{subj} is solvable")));
        }
        let c = self.k.characteristic;
        if c != 0 && c != 2 {
            return Ok(Err(format!("char k = {c}")));
        }
        if self.k.cyclic_cyclotomic_ext(3) != Tri::Yes {
            return Ok(Err("k(zeta_8)/k not known cyclic".to_string()));
        }
        let fs = f.frobenius()?;
        match fs.first() {
            None => Ok(Err(format!("{subj} is not a Frobenius group"))),
            Some(s) => Ok(Ok(vec![TraceStep::new(
                "R-NSOLV",
                subj,
                &[
                    ("kernel_order", s.kernel.order().to_string()),
                    ("complement_order", s.complement.order().to_string()),
                    ("characteristic", c.to_string()),
                ],
            )])),
        }
    }

    fn rule_sl25(&self, f: &mut Facts, subj: &str) -> RuleResult {
        if self.k.characteristic != 0 {
            return Ok(Err("char k != 0".to_string()));
        }
        if !f.group.order().is_multiple_of(120) || f.group.is_solvable() {
            return Ok(Err(format!("{subj} has no SL2(F5) section")));
        }
        let g = f.group.clone();
        let fs = f.frobenius()?;
        if fs.is_empty() {
            return Ok(Err(format!("{subj} is not a Frobenius group")));
        }
        for s in fs {
            let complement = s.complement.to_group(&g).0;
            if is_z_times_sl2_f5(&complement)? {
                return Ok(Ok(vec![TraceStep::new(
                    "R-SL25",
                    subj,
                    &[
                        ("kernel_order", s.kernel.order().to_string()),
                        ("complement", format!("Z-group of order {} x SL2(F5)", complement.order() / 120)),
                    ],
                )]));
            }
        }
        Ok(Err("complement is not a Z-group times SL2(F5)".to_string()))
    }

    fn rule_gz(&self, f: &Facts, subj: &str) -> RuleResult {
        if !f.group.is_solvable() {
            return Ok(Err(format!("{subj} is not solvable")));
        }
        if !is_gz_group(&f.group)? {
            return Ok(Err(format!("{subj} is not a GZ-group")));
        }
        Ok(self
            .zeta_conditions(f)
            .map(|b| vec![TraceStep::new("R-GZ", subj, &b)]))
    }

    fn rule_prod(&mut self, f: &Facts, subj: &str, depth: usize) -> RuleResult {
        if depth >= MAX_DEPTH {
            return Ok(Err("depth limit".to_string()));
        }
        let normals = f.group.normal_subgroups();
        let o = f.group.order();
        for (i, a) in normals.iter().enumerate() {
            for b in &normals[i + 1..] {
                if a.is_trivial() || b.is_trivial() || a.order() * b.order() != o || a.intersection(b).len() != 1 {
                    continue;
                }
                let (la, lb) = (f.lift(a), f.lift(b));
                let Some(ta) = self.positive(&la, depth + 1)? else { continue };
                let Some(tb) = self.positive(&lb, depth + 1)? else { continue };
                let mut t = ta;
                t.extend(tb);
                t.push(TraceStep::new(
                    "R-PROD",
                    subj,
                    &[("factor_orders", format!("{} x {}", a.order(), b.order()))],
                ));
                return Ok(Ok(t));
            }
        }
        Ok(Err("no direct decomposition into certified factors".to_string()))
    }

    fn rule_semi(&mut self, f: &Facts, subj: &str, depth: usize) -> RuleResult {
        if depth >= MAX_DEPTH {
            return Ok(Err("depth limit".to_string()));
        }
        for (n, c) in self.decompositions(f)? {
            if num_integer::gcd(n.len(), c.len()) != 1 {
                continue;
            }
            let ng = self.root.subgroup_from_set(&n).to_group(self.root).0;
            if !ng.is_abelian() {
                continue;
            }
            let Some(tn) = self.positive(&n, depth + 1)? else { continue };
            let Some(tc) = self.positive(&c, depth + 1)? else { continue };
            let mut t = tn;
            t.extend(tc);
            t.push(TraceStep::new(
                "R-SEMI",
                subj,
                &[
                    ("normal_subgroup_order", n.len().to_string()),
                    ("complement_order", c.len().to_string()),
                ],
            ));
            return Ok(Ok(t));
        }
        Ok(Err("no coprime abelian-by-certified decomposition".to_string()))
    }

    fn positive_inner(&mut self, f: &mut Facts, subj: &str, depth: usize) -> Result<Option<Vec<TraceStep>>, RationalityError> {
        let r = self.rule_ab(f, subj);
        self.record(depth, "R-AB", &r);
        if let Ok(t) = r {
            return Ok(Some(t));
        }
        if !f.group.is_abelian() {
            for id in ["R-ZK", "R-SOLV", "R-NSOLV", "R-SL25", "R-GZ", "R-PROD", "R-SEMI"] {
                let r = match id {
                    "R-ZK" => self.rule_zk(f, subj)?,
                    "R-SOLV" => self.rule_solv(f, subj)?,
                    "R-NSOLV" => self.rule_nsolv(f, subj)?,
                    "R-SL25" => self.rule_sl25(f, subj)?,
                    "R-GZ" => self.rule_gz(f, subj)?,
                    "R-PROD" => self.rule_prod(f, subj, depth)?,
                    _ => self.rule_semi(f, subj, depth)?,
                };
                self.record(depth, id, &r);
                if let Ok(t) = r {
                    return Ok(Some(t));
                }
            }
        }
        Ok(None)
    }
}

fn corollary(id: &str, note: String) -> Corollary {
    Corollary {
        rule: id.to_string(),
        citation: rule(id).citation.clone(),
        note,
    }
}

/// Forward-chains the rule base for `k(G)`: negative rules first, then positive ones.
pub fn certify(g: &Group, k: &FieldModel) -> Result<Verdict, RationalityError> {
    if !k.is_infinite {
        return Err(RationalityError::FieldNotInfinite(k.name.clone()));
    }
    let mut e = Engine {
        root: g,
        k,
        negative_memo: HashMap::new(),
        positive_memo: HashMap::new(),
        attempts: Vec::new(),
    };
    let all: Vec<usize> = (0..g.order()).collect();
    let mut verdict = Verdict {
        field: k.name.clone(),
        group_order: g.order(),
        outcome: Outcome::Unknown,
        trace: Vec::new(),
        corollaries: Vec::new(),
        attempts: Vec::new(),
    };
    if let Some(t) = e.negative(&all, 0)? {
        verdict.outcome = Outcome::NotRetractRational;
        verdict.trace = t;
    } else if let Some(t) = e.positive(&all, 0)? {
        verdict.outcome = Outcome::RetractRational;
        if k.is_number_field {
            verdict.corollaries.push(corollary(
                "C-IGP",
                format!("there is a Galois extension of {} with group G", k.name),
            ));
            if t.iter().any(|s| s.rule == "R-NSOLV" && s.subject == "G") {
                verdict.corollaries.push(corollary(
                    "C-NSOLV-IGP",
                    format!("G is realizable over {} since k(zeta_8)/k is cyclic", k.name),
                ));
            }
            if t.iter().any(|s| s.rule == "R-SL25" && s.subject == "G") {
                verdict.corollaries.push(corollary(
                    "C-SL25-IGP",
                    format!("G is realizable over the number field {}", k.name),
                ));
            }
        }
        verdict.trace = t;
    }
    verdict.attempts = e.attempts;
    Ok(verdict)
}

/// Text rendering of a verdict with citations, bindings and corollaries.
pub fn explain(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group of order {} over {}: {:?}", v.group_order, v.field, v.outcome);
    for (i, t) in v.trace.iter().enumerate() {
        let b: Vec<String> = t.bindings.iter().map(|(k, x)| format!("{k} = {x}")).collect();
        let _ = writeln!(s, "  {}. [{}] {} on {} ({})", i + 1, t.rule, t.citation, t.subject, b.join(", "));
    }
    for c in &v.corollaries {
        let _ = writeln!(s, "  note [{}] {}: {}", c.rule, c.citation, c.note);
    }
    if v.outcome == Outcome::Unknown {
        let _ = writeln!(s, "  attempted:");
        for a in &v.attempts {
            let _ = writeln!(s, "    [{}] {}: {}", a.rule, rule(&a.rule).citation, a.failed_premise);
        }
    }
    s
}
