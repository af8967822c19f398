//! The three charge checks, a per-slot explanation of a single ring and a
//! comparison of the two readings of `4`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charge::{Charge, ChargeBreakdown, ElementId, Transfer};
use crate::classes::{MatchOptions, Semantics};
use crate::datasets::ConfigSet;
use crate::local::consistency::{consistency_check, Violation};
use crate::local::rings::{fold_rings, Exclusions};
use crate::local::star::{
    enumerate_profiles, enumerate_three_stars, worst_outflow_by_profile, DegreeProfile, StarError, StarHypotheses,
};
use crate::local::triangle::{all_cores, TriangleModel};
use crate::pattern::FaceKind;
use crate::report::{Check, Parameters, VerificationReport, Versions, ViolationEntry};
use crate::ring::{CompiledPattern, DescriptorError, RingDescriptor};
use crate::rules::{AmbiguousRule, PvWindow, RuleEngine, TWindow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Ambiguous(#[from] AmbiguousRule),
    #[error("face size must be 5 or 6, got {0}")]
    Size(usize),
    #[error("dmax must be at least 6, got {0}")]
    Dmax(u32),
    #[error(transparent)]
    Star(#[from] StarError),
}

/// Every transfer touching the face, with its net change of charge.
pub fn net_charge_of_face(engine: &RuleEngine, ring: &RingDescriptor) -> Result<ChargeBreakdown, AmbiguousRule> {
    Ok(ChargeBreakdown::for_element(ElementId::Face, &engine.apply_rules(ring)?))
}

/// Largest net outflow a `d`-face may have.
pub fn face_budget(d: usize) -> Charge {
    Charge::units(d as i64 - 4)
}

#[derive(Default)]
struct FaceAcc {
    checked: u64,
    bad: u64,
    listed: Vec<RingDescriptor>,
    error: Option<AmbiguousRule>,
}

/// Checks that no admissible `d`-face sends out more than `d - 4` units net.
/// Violations are listed in canonical order, at most `max_violations`.
pub fn verify_faces(
    d: usize,
    engine: &RuleEngine,
    configs: &ConfigSet,
    max_violations: usize,
) -> Result<VerificationReport, VerifyError> {
    let kind = FaceKind::from_size(d).ok_or(VerifyError::Size(d))?;
    let options = engine.options();
    let budget = face_budget(d);
    let ex = Exclusions::from_configs(kind, configs, options);
    let parts = fold_rings(&ex, options, FaceAcc::default, |acc, ring| {
        if acc.error.is_some() {
            return;
        }
        acc.checked += 1;
        match engine.net_outflow(ring) {
            Ok(out) if out > budget => {
                acc.bad += 1;
                if acc.listed.len() < max_violations {
                    acc.listed.push(*ring);
                }
            }
            Ok(_) => {}
            Err(e) => acc.error = Some(e),
        }
    });
    let mut report = VerificationReport::new("faces", face_parameters(d, options, configs, max_violations), Versions::of(engine.table(), configs));
    for part in parts {
        if let Some(e) = part.error {
            return Err(e.into());
        }
        report.checked_count += part.checked;
        report.violation_count += part.bad;
        for ring in part.listed {
            if report.violations.len() < max_violations {
                let b = net_charge_of_face(engine, &ring)?;
                report.violations.push(ViolationEntry {
                    descriptor: ring.encode(),
                    net: b.net,
                    required: -budget,
                    transfers: engine.apply_rules(&ring)?,
                });
            }
        }
    }
    Ok(report)
}

fn face_parameters(d: usize, options: MatchOptions, configs: &ConfigSet, max: usize) -> Parameters {
    let mut p = Parameters::new(options, configs, max);
    p.size = Some(d);
    p
}

/// The exclusions assumed around a 3-face by default.
pub fn default_triangle_exclusions() -> ConfigSet {
    ConfigSet::parse("H:o3o\nH:3T4T\nH:o34Q").expect("valid patterns")
}

/// Checks that every admissible 3-face receives at least one unit. The
/// violation count is exact; one least-receiving context is listed per
/// corner combination that has violations.
pub fn verify_triangles(
    engine: &RuleEngine,
    exclusions: &ConfigSet,
    max_violations: usize,
) -> Result<VerificationReport, VerifyError> {
    let model = TriangleModel::new(engine, exclusions);
    let analyses: Vec<_> = all_cores()
        .into_par_iter()
        .map(|core| model.analyze_core(&core))
        .collect::<Result<_, _>>()?;
    let mut report = VerificationReport::new(
        "triangles",
        Parameters::new(engine.options(), exclusions, max_violations),
        Versions::of(engine.table(), exclusions),
    );
    for a in &analyses {
        report.checked_count += a.count();
        let below = a.count_below(Charge::UNIT);
        report.violation_count += below;
        if below > 0 && report.violations.len() < max_violations {
            let (net, ctx) = a.least().expect("violating cores have contexts");
            report.violations.push(ViolationEntry {
                descriptor: ctx.encode(),
                net,
                required: Charge::UNIT,
                transfers: model.transfers(&ctx)?,
            });
        }
    }
    Ok(report)
}

/// Checks every vertex: 3-vertices receive at least one unit from their
/// 5- and 6-faces; a 5-vertex pays at most `12(t + q + p)` ≤ 60; a vertex of
/// degree `d` in `6..=dmax` pays at most `28t + 12q + 12p` ≤ `60(d - 4)`; and
/// the closed form holds for every profile with `t <= p` and every `d >= 6`.
pub fn verify_vertices(engine: &RuleEngine, dmax: u32, max_violations: usize) -> Result<VerificationReport, VerifyError> {
    if dmax < 6 {
        return Err(VerifyError::Dmax(dmax));
    }
    let configs = ConfigSet::empty();
    let mut params = Parameters::new(engine.options(), &configs, max_violations);
    params.dmax = Some(dmax);
    let mut report = VerificationReport::new("vertices", params, Versions::of(engine.table(), &configs));

    let mut found: Vec<(usize, ViolationEntry)> = Vec::new();
    let mut checks = Vec::new();

    // 3-vertices
    let stars = enumerate_three_stars(StarHypotheses::default());
    let mut bad = 0;
    for s in &stars {
        let transfers = s.transfers(engine)?;
        let net = s.received(engine)?;
        if net < Charge::UNIT {
            bad += 1;
            found.push((0, ViolationEntry { descriptor: s.encode(), net, required: Charge::UNIT, transfers }));
        }
    }
    checks.push(Check { name: "degree-3".into(), checked_count: stars.len() as u64, violation_count: bad });

    // degree 5, then 6..=dmax, from the realizable face-size sequences
    for (name, range) in [("degree-5", 5..=5), ("degree-6-plus", 6..=dmax)] {
        let mut checked = 0;
        let mut bad = 0;
        for d in range {
            for (p, worst) in worst_outflow_by_profile(engine, d)? {
                checked += 1;
                let allowed = p.bound().min(p.budget());
                if worst > allowed {
                    bad += 1;
                    found.push((1, profile_violation(&p, worst, allowed)));
                }
            }
        }
        checks.push(Check { name: name.into(), checked_count: checked, violation_count: bad });
    }

    // closed form over all integer profiles, then beyond dmax
    let mut checked = 0;
    let mut bad = 0;
    for d in 6..=dmax {
        for p in enumerate_profiles(d)? {
            checked += 1;
            if p.bound() > p.budget() {
                bad += 1;
                found.push((2, profile_violation(&p, p.bound(), p.budget())));
            }
        }
    }
    checked += 1;
    if !closed_form_tail_holds(dmax) {
        bad += 1;
        found.push((
            2,
            ViolationEntry {
                descriptor: format!("V:d>{dmax}"),
                net: Charge::ZERO,
                required: Charge::ZERO,
                transfers: Vec::new(),
            },
        ));
    }
    checks.push(Check { name: "closed-form".into(), checked_count: checked, violation_count: bad });

    found.sort_by(|a, b| (a.0, &a.1.descriptor).cmp(&(b.0, &b.1.descriptor)));
    report.checked_count = checks.iter().map(|c| c.checked_count).sum();
    report.violation_count = checks.iter().map(|c| c.violation_count).sum();
    report.violations = found.into_iter().take(max_violations).map(|(_, v)| v).collect();
    report.checks = checks;
    Ok(report)
}

fn profile_violation(p: &DegreeProfile, paid: Charge, allowed: Charge) -> ViolationEntry {
    ViolationEntry {
        descriptor: format!("V:d{} t{} q{} p{}", p.d, p.t, p.q, p.p),
        net: -paid,
        required: -allowed,
        transfers: Vec::new(),
    }
}

/// `28t + 12q + 12p <= 60(d - 4)` for all `d > dmax`, `t <= p`: with `t <= p`
/// the left side is at most `20t + 12q + 20p <= 20d`, and `20d <= 60(d - 4)`
/// once it holds at `dmax + 1`, since the right side grows faster.
pub fn closed_form_tail_holds(dmax: u32) -> bool {
    let (ct, cq, cp) = (28i64, 12i64, 12i64);
    // moving t onto p: ct - m <= cp + m with m = (ct - cp) / 2
    let m = (ct - cp) / 2;
    let per_face = (ct - m).max(cq).max(cp + m);
    let d = dmax as i64 + 1;
    per_face <= 60 && per_face * d <= 60 * (d - 4)
}

/// One slot of a ring and the rule (if any) that fires there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotTrace {
    pub slot: String,
    pub window: String,
    pub rule: Option<String>,
    pub amount: Charge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub descriptor: String,
    pub canonical: String,
    pub budget: Charge,
    pub breakdown: ChargeBreakdown,
    pub slots: Vec<SlotTrace>,
    /// Configurations (as listed) that match the ring.
    pub matched: Vec<String>,
}

impl Explanation {
    pub fn within_budget(&self) -> bool {
        -self.breakdown.net <= self.budget
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}  (canonical {})\n", self.descriptor, self.canonical);
        for t in &self.slots {
            match &t.rule {
                Some(r) => s.push_str(&format!("  {:<3} {}  {}  {}\n", t.slot, t.window, r, t.amount)),
                None => s.push_str(&format!("  {:<3} {}  -\n", t.slot, t.window)),
            }
        }
        s.push_str(&format!(
            "in {}  out {}  net {}  (may send at most {})\n",
            self.breakdown.total_in(),
            self.breakdown.total_out(),
            self.breakdown.net,
            self.budget
        ));
        if self.matched.is_empty() {
            s.push_str("matched configurations: none\n");
        } else {
            s.push_str(&format!("matched configurations: {}\n", self.matched.join(" ")));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("descriptor violates {} at vertex {}", .0.constraint, .0.position)]
    Inconsistent(Violation),
    #[error(transparent)]
    Ambiguous(#[from] AmbiguousRule),
}

/// Rule firings at every slot of a ring, its charge breakdown and the
/// configurations matching it.
pub fn explain(descriptor: &str, engine: &RuleEngine, configs: &ConfigSet) -> Result<Explanation, ExplainError> {
    let ring = RingDescriptor::parse(descriptor)?;
    consistency_check(&ring).map_err(ExplainError::Inconsistent)?;
    let options = engine.options();
    let letter = ring.kind.prefix().as_bytes()[0] as char;
    let mut slots = Vec::new();
    for i in 0..ring.size() {
        let w = PvWindow::around_vertex(&ring, i);
        let hit = engine.pv_window(ring.kind, &w)?;
        slots.push(SlotTrace {
            slot: format!("v{i}"),
            window: w.encode(letter),
            rule: hit.map(|h| engine.rule(h.rule).render()),
            amount: hit.map_or(Charge::ZERO, |h| h.amount),
        });
        if ring.kind == FaceKind::Hexagon && ring.faces[i].is_triangle() {
            let w = TWindow::around_edge(&ring, i);
            let hit = engine.t_window(&w)?;
            slots.push(SlotTrace {
                slot: format!("e{i}"),
                window: w.encode('T'),
                rule: hit.map(|h| engine.rule(h.rule).render()),
                amount: hit.map_or(Charge::ZERO, |h| h.amount),
            });
        }
    }
    let slot_ring = ring.slots();
    let matched = configs
        .entries()
        .iter()
        .filter(|e| {
            crate::pattern::closure_expand(&e.pattern)
                .iter()
                .any(|p| CompiledPattern::compile(p, options.semantics).matches(&slot_ring, options.reflection))
        })
        .map(|e| e.pattern.render_short())
        .collect();
    Ok(Explanation {
        descriptor: ring.encode(),
        canonical: ring.canonical(options.reflection).encode(),
        budget: face_budget(ring.size()),
        breakdown: net_charge_of_face(engine, &ring)?,
        slots,
        matched,
    })
}

/// A ring handled differently by the two readings of `4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemanticsChange {
    pub descriptor: String,
    pub inclusive_net: Charge,
    pub strict_net: Charge,
    pub inclusive_excluded: bool,
    pub strict_excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemanticsDiff {
    pub size: usize,
    pub reflection: bool,
    pub checked_count: u64,
    pub changed_count: u64,
    pub inclusive_violations: u64,
    pub strict_violations: u64,
    pub changes: Vec<SemanticsChange>,
}

impl SemanticsDiff {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "size {}: {} rings, {} handled differently; violations inclusive4 {} / strict4 {}\n",
            self.size, self.checked_count, self.changed_count, self.inclusive_violations, self.strict_violations
        );
        for c in &self.changes {
            s.push_str(&format!(
                "  {}  net {} / {}{}{}\n",
                c.descriptor,
                c.inclusive_net,
                c.strict_net,
                if c.inclusive_excluded { "  excluded(inclusive4)" } else { "" },
                if c.strict_excluded { "  excluded(strict4)" } else { "" },
            ));
        }
        s
    }
}

#[derive(Default)]
struct DiffAcc {
    checked: u64,
    changed: u64,
    bad: [u64; 2],
    listed: Vec<SemanticsChange>,
    error: Option<AmbiguousRule>,
}

/// Runs the face check under both readings of `4` over every consistent
/// ring and lists the rings whose net outflow or exclusion status differs.
pub fn diff_semantics(
    d: usize,
    table: &crate::rules::RuleTable,
    configs: &ConfigSet,
    reflection: bool,
    max_listed: usize,
) -> Result<SemanticsDiff, VerifyError> {
    let kind = FaceKind::from_size(d).ok_or(VerifyError::Size(d))?;
    let opts = [Semantics::Inclusive4, Semantics::Strict4].map(|semantics| MatchOptions { semantics, reflection });
    let engines = opts.map(|o| RuleEngine::new(table.clone(), o));
    let compiled = opts.map(|o| configs.compiled(o.semantics));
    let budget = face_budget(d);
    let all = Exclusions::none(kind);
    let parts = fold_rings(&all, opts[0], DiffAcc::default, |acc, ring| {
        if acc.error.is_some() {
            return;
        }
        acc.checked += 1;
        let slots = ring.slots();
        let mut net = [Charge::ZERO; 2];
        let mut excluded = [false; 2];
        for k in 0..2 {
            match engines[k].net_outflow(ring) {
                Ok(n) => net[k] = n,
                Err(e) => {
                    acc.error = Some(e);
                    return;
                }
            }
            excluded[k] = compiled[k].iter().any(|p| p.matches(&slots, reflection));
            if !excluded[k] && net[k] > budget {
                acc.bad[k] += 1;
            }
        }
        if net[0] != net[1] || excluded[0] != excluded[1] {
            acc.changed += 1;
            if acc.listed.len() < max_listed {
                acc.listed.push(SemanticsChange {
                    descriptor: ring.encode(),
                    inclusive_net: -net[0],
                    strict_net: -net[1],
                    inclusive_excluded: excluded[0],
                    strict_excluded: excluded[1],
                });
            }
        }
    });
    let mut out = SemanticsDiff {
        size: d,
        reflection,
        checked_count: 0,
        changed_count: 0,
        inclusive_violations: 0,
        strict_violations: 0,
        changes: Vec::new(),
    };
    for p in parts {
        if let Some(e) = p.error {
            return Err(e.into());
        }
        out.checked_count += p.checked;
        out.changed_count += p.changed;
        out.inclusive_violations += p.bad[0];
        out.strict_violations += p.bad[1];
        for c in p.listed {
            if out.changes.len() < max_listed {
                out.changes.push(c);
            }
        }
    }
    Ok(out)
}

/// Sum of all ledger postings of a set of transfers; zero when every debit
/// has a matching credit.
pub fn ledger_balance(transfers: &[Transfer]) -> Charge {
    transfers.iter().flat_map(|t| t.postings()).map(|(_, c)| c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::RuleTable;

    fn engine() -> RuleEngine {
        RuleEngine::new(RuleTable::embedded(), MatchOptions::default())
    }

    #[test]
    fn flanked_six_vertex_pays_the_face() {
        let e = engine();
        let b = net_charge_of_face(&e, &RingDescriptor::parse("H:4t6x4H4H4H4H").unwrap()).unwrap();
        assert!(b.inflow.iter().any(|t| t.rule == "H:*T6T*" && t.amount == Charge(40)));
    }

    #[test]
    fn quiet_ring_nets_zero() {
        let b = net_charge_of_face(&engine(), &RingDescriptor::parse("H:4Q4Q4Q4Q4Q4Q").unwrap()).unwrap();
        assert_eq!(b.net, Charge::ZERO);
        assert!(b.inflow.is_empty() && b.outflow.is_empty());
    }

    #[test]
    fn explain_lists_matching_configuration() {
        let e = engine();
        let x = explain("H:oOoH6H6H6H6H", &e, &ConfigSet::shipped());
        let x = x.unwrap();
        assert!(x.matched.contains(&"H:o3o".to_string()));
        let total: Charge = x.slots.iter().map(|s| s.amount).sum();
        assert_eq!(-total, x.breakdown.net);
    }

    #[test]
    fn explain_rejects_bad_input() {
        let e = engine();
        assert!(matches!(explain("H:4Q", &e, &ConfigSet::empty()), Err(ExplainError::Descriptor(_))));
        assert!(matches!(explain("P:4x4H4H4H4H", &e, &ConfigSet::empty()), Err(ExplainError::Inconsistent(_))));
    }

    #[test]
    fn vertices_verified() {
        let r = verify_vertices(&engine(), 12, 10).unwrap();
        assert!(r.verified(), "{}", r.to_text());
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn tail_needs_degree_six() {
        assert!(closed_form_tail_holds(5));
        assert!(closed_form_tail_holds(20));
        assert!(!closed_form_tail_holds(4));
    }

    #[test]
    fn dmax_below_six_rejected() {
        assert_eq!(verify_vertices(&engine(), 5, 1).unwrap_err(), VerifyError::Dmax(5));
    }
}
