//! Enumeration, matching and rule application checked against the naive
//! reference implementations in `common`.

mod common;

use std::collections::{BTreeSet, HashSet};

use discharge_core::local::consistency::consistency_check;
use discharge_core::local::rings::{count_rings, enumerate_rings};
use discharge_core::verify::net_charge_of_face;
use discharge_core::{
    canonical_form, match_ring, ConfigSet, ElementId, FaceClass, FacePattern, MatchOptions, RingDescriptor,
    RuleEngine, RuleTable, Semantics, VertexClass,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn all_options() -> [MatchOptions; 4] {
    let mut out = [MatchOptions::default(); 4];
    let mut n = 0;
    for semantics in [Semantics::Inclusive4, Semantics::Strict4] {
        for reflection in [true, false] {
            out[n] = MatchOptions { semantics, reflection };
            n += 1;
        }
    }
    out
}

/// Every pentagon description, filtered by the constraints and the
/// exclusions, then reduced to canonical forms.
fn brute_force_pentagons(configs: &ConfigSet, options: MatchOptions) -> BTreeSet<String> {
    let faces = [FaceClass::Quad, FaceClass::Pent, FaceClass::Hex];
    let patterns: Vec<String> = configs.expanded().map(|p| p.render()).collect();
    let mut out = BTreeSet::new();
    for vi in 0..8usize.pow(5) {
        let vs: Vec<VertexClass> = (0..5).map(|i| VertexClass::ALL[(vi / 8usize.pow(i)) % 8]).collect();
        for fi in 0..3usize.pow(5) {
            let fs: Vec<FaceClass> = (0..5).map(|i| faces[(fi / 3usize.pow(i)) % 3]).collect();
            let ring = RingDescriptor::new(&vs, &fs);
            if consistency_check(&ring).is_err() {
                continue;
            }
            if patterns.iter().any(|p| naive_match(p, &ring, options)) {
                continue;
            }
            let least = images(&ring, options.reflection)
                .into_iter()
                .map(|(v, f)| format!("P:{}", body(&v, &f)))
                .min()
                .unwrap();
            out.insert(least);
        }
    }
    out
}

#[test]
fn pentagons_with_a_triangle_are_inconsistent() {
    for f in FaceClass::TRIANGLES {
        let r = RingDescriptor::new(&[VertexClass::P6; 5], &[f, FaceClass::Hex, FaceClass::Hex, FaceClass::Hex, FaceClass::Hex]);
        assert!(consistency_check(&r).is_err());
    }
}

#[test]
fn pentagon_stream_equals_brute_force() {
    for (cfg, options) in [
        (ConfigSet::empty(), MatchOptions::default()),
        (ConfigSet::shipped(), MatchOptions::default()),
        (
            ConfigSet::shipped(),
            MatchOptions {
                semantics: Semantics::Strict4,
                reflection: false,
            },
        ),
    ] {
        let expected = brute_force_pentagons(&cfg, options);
        let got: Vec<String> = enumerate_rings(5, &cfg, options).iter().map(|r| r.encode()).collect();
        assert_eq!(got.len(), expected.len());
        assert_eq!(got, expected.into_iter().collect::<Vec<_>>());
        assert_eq!(count_rings(5, &cfg, options), got.len() as u64);
    }
}

#[test]
fn hexagon_sample_is_canonical_and_complete() {
    // every random consistent hexagon's canonical form is enumerated
    let options = MatchOptions::default();
    let all: HashSet<RingDescriptor> = enumerate_rings(6, &ConfigSet::empty(), options).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..2000 {
        let r = random_consistent_ring(&mut rng, 6);
        assert!(all.contains(&r.canonical(true)), "{r}");
    }
}

#[test]
fn match_ring_agrees_with_image_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut matched = 0;
    for n in 0..10_000 {
        let k = if n % 2 == 0 { 5 } else { 6 };
        let ring = random_ring(&mut rng, k);
        let text = random_pattern(&mut rng, &ring);
        let pattern = FacePattern::parse(&text).unwrap();
        for options in all_options() {
            let want = naive_match(&text, &ring, options);
            assert_eq!(match_ring(&pattern, &ring, options), want, "{text} {ring} {options:?}");
            matched += want as usize;
        }
    }
    assert!(matched > 1000);
}

#[test]
fn canonical_classes_agree_with_pairwise_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // few distinct base rings, many images of each, so classes collide
    let bases: Vec<RingDescriptor> = (0..40).map(|i| random_ring(&mut rng, 5 + i % 2)).collect();
    let mut rings = Vec::new();
    for n in 0..1000 {
        let b = &bases[n % bases.len()];
        let imgs = images(b, true);
        let (v, f) = &imgs[(n / bases.len()) % imgs.len()];
        rings.push(RingDescriptor::new(v, f));
    }
    let image_sets: Vec<HashSet<String>> = rings
        .iter()
        .map(|r| images(r, true).into_iter().map(|(v, f)| body(&v, &f)).collect())
        .collect();
    let forms: Vec<String> = rings.iter().map(canonical_form).collect();
    for i in 0..rings.len() {
        for j in 0..rings.len() {
            let same = rings[i].size() == rings[j].size() && image_sets[i].contains(&body(&rings[j].vertices[..rings[j].size()], &rings[j].faces[..rings[j].size()]));
            assert_eq!(forms[i] == forms[j], same, "{} {}", rings[i], rings[j]);
        }
    }
}

#[test]
fn rule_application_agrees_with_naive_scan() {
    let table = RuleTable::embedded();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for options in all_options() {
        let engine = RuleEngine::new(table.clone(), options);
        for n in 0..2000 {
            let ring = random_consistent_ring(&mut rng, 5 + n % 2);
            let naive = naive_rule_scan(&table, &ring, options);
            let transfers = engine.apply_rules(&ring).unwrap();
            let mut got = Vec::new();
            for t in &transfers {
                match (t.payer, t.payee) {
                    (ElementId::Face, ElementId::Across(i)) => got.push(NaiveHit::Edge(i, t.rule.clone(), t.amount)),
                    (ElementId::Vertex(i), ElementId::Face) => got.push(NaiveHit::Vertex(i, t.rule.clone(), -t.amount)),
                    (ElementId::Face, ElementId::Vertex(i)) => got.push(NaiveHit::Vertex(i, t.rule.clone(), t.amount)),
                    (ElementId::Face, ElementId::OffTriangle(i)) => {
                        assert_eq!(t.relay, Some(ElementId::Vertex(i)));
                        assert!(matches!(ring.vertices[i], VertexClass::U | VertexClass::V | VertexClass::W));
                        got.push(NaiveHit::Vertex(i, t.rule.clone(), t.amount))
                    }
                    other => panic!("unexpected transfer {other:?}"),
                }
            }
            let mut want = naive;
            want.sort();
            got.sort();
            assert_eq!(got, want, "{ring} {options:?}");
            let b = net_charge_of_face(&engine, &ring).unwrap();
            assert_eq!(-b.net, naive_net_outflow(&table, &ring, options));
            assert_eq!(engine.net_outflow(&ring).unwrap(), -b.net);
        }
    }
}
