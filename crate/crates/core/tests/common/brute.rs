//! Exhaustive branching: every reduced label up to a length bound is
//! walked backwards with the adjoints `t_i^*`, applied as polynomials.

use std::collections::{BTreeMap, HashMap};

use cuntz_core::morphisms::Morphism;
use cuntz_core::reps::{act, Component, Fingerprint, Label, PermRep, Vector};
use cuntz_core::{CuntzPoly, Phase, Word};

/// `(i, y, c)` with `t_i y = e^{2πic} v`, found by trying every `t_i^*`.
fn predecessor(adjoints: &[CuntzPoly], rep: &PermRep, v: &Label) -> (u8, Label, Phase) {
    let mut hits = Vec::new();
    for (i, t) in adjoints.iter().enumerate() {
        let out = act(t, &Vector::basis(v.clone()), rep).expect("same alphabet");
        if out.is_zero() {
            continue;
        }
        let terms: Vec<_> = out.terms().collect();
        assert_eq!(terms.len(), 1, "t_{}^* {v} is not a basis vector", i + 1);
        let (y, p, c) = terms[0];
        let sign = if c.is_one() {
            Phase::zero()
        } else {
            assert!((-c.clone()).is_one(), "coefficient {c}");
            Phase::half()
        };
        hits.push((i as u8 + 1, y.clone(), -(*p + sign)));
    }
    assert_eq!(hits.len(), 1, "{v} has {} predecessors", hits.len());
    hits.pop().unwrap()
}

/// All cycles of the predecessor map reached from labels with free word
/// length at most `bound`. Only cycle bases are supported.
pub fn brute_fingerprint(rep: &PermRep, m: &Morphism, bound: usize) -> Fingerprint {
    assert!(matches!(rep, PermRep::Cycle { .. }));
    let adjoints: Vec<CuntzPoly> = m.images().iter().map(CuntzPoly::adjoint).collect();
    let mut memo: HashMap<Label, (u8, Label, Phase)> = HashMap::new();
    let mut cycles: BTreeMap<Label, (Word, Phase)> = BTreeMap::new();
    for seed in rep.labels_up_to(bound, 0) {
        let mut order: Vec<Label> = Vec::new();
        let mut pos: HashMap<Label, usize> = HashMap::new();
        let mut cur = seed;
        loop {
            if let Some(&start) = pos.get(&cur) {
                let cyc = &order[start..];
                let min = cyc.iter().min().unwrap().clone();
                cycles.entry(min).or_insert_with(|| {
                    let mut letters = Vec::new();
                    let mut phase = Phase::zero();
                    for l in cyc {
                        let (i, _, c) = &memo[l];
                        letters.push(*i);
                        phase = phase + *c;
                    }
                    (Word::new(letters), phase)
                });
                break;
            }
            pos.insert(cur.clone(), order.len());
            order.push(cur.clone());
            assert!(order.len() < 100_000, "walk does not close");
            let step = memo
                .entry(cur.clone())
                .or_insert_with(|| predecessor(&adjoints, rep, &cur))
                .clone();
            cur = step.1;
        }
    }
    Fingerprint::from_components(cycles.values().map(|(w, p)| Component::cycle(w, *p)))
}
