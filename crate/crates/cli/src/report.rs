//! JSON and text reports for each subcommand.

use std::fmt::Write;

use plsol::dynamics::{classify_pair, NiceViolation};
use plsol::mdp::{Letter, Membership};
use plsol::orbitals::{end_slopes, factor_signed_orbitals};
use plsol::ssrp::TraceEvent;
use plsol::{PLMap, SignedOrbital, Verdict};
use serde_json::{json, Value};

pub fn solve(generators: &[PLMap], verdict: &Verdict, trace: Option<&[TraceEvent]>) -> Value {
    let mut v = json!({
        "generators": generators,
        "verdict": if verdict.is_soluble() { "soluble" } else { "not-soluble" },
    });
    match verdict {
        Verdict::Soluble {
            derived_length,
            certificate,
        } => {
            v["derived_length"] = json!(derived_length);
            v["certificate"] = json!(certificate);
        }
        Verdict::NotSoluble { step, witness } => {
            v["step"] = json!(step);
            v["witness"] = json!(witness);
        }
    }
    if let Some(t) = trace {
        v["trace"] = json!(t);
    }
    v
}

pub fn solve_text(verdict: &Verdict, trace: Option<&[TraceEvent]>) -> String {
    let mut s = String::new();
    if let Some(t) = trace {
        for e in t {
            let _ = writeln!(s, "{}", serde_json::to_string(e).unwrap_or_default());
        }
    }
    let _ = writeln!(s, "{verdict}");
    match verdict {
        Verdict::Soluble { certificate, .. } => {
            for r in certificate {
                let _ = writeln!(
                    s,
                    "  {} controlled by [{}] at {}",
                    r.orbital, r.controller, r.witness
                );
            }
        }
        Verdict::NotSoluble { witness, .. } => {
            let _ = writeln!(
                s,
                "  {}",
                serde_json::to_string(witness).unwrap_or_default()
            );
        }
    }
    s
}

/// `z0^2 z1^-1` style rendering of a word over the nice set.
pub fn word_string(word: &[Letter]) -> String {
    if word.is_empty() {
        return "id".to_string();
    }
    word.iter()
        .map(|l| match l.exponent {
            1 => format!("z{}", l.generator),
            e => format!("z{}^{}", l.generator, e),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn member(m: &Membership) -> Value {
    let mut v = json!({ "member": m.member });
    if let Some(w) = &m.witness_word {
        v["witness_word"] = json!(w);
        v["word"] = json!(word_string(w));
    }
    if let Some(r) = &m.reason {
        v["reason"] = json!(r);
    }
    if !m.inverted.is_empty() {
        v["inverted"] = json!(m.inverted);
    }
    v
}

pub fn member_text(m: &Membership) -> String {
    match (&m.witness_word, &m.reason) {
        (Some(w), _) => format!("member: {}\n", word_string(w)),
        (None, Some(r)) => format!(
            "not a member: {}\n",
            serde_json::to_string(r).unwrap_or_default()
        ),
        (None, None) => "not a member\n".to_string(),
    }
}

pub fn violation(e: &NiceViolation) -> Value {
    json!({ "error": "invalid-nice-set", "violation": e })
}

fn factor_json(s: &SignedOrbital) -> Value {
    let (l, r) = end_slopes(s);
    json!({
        "orbital": s.orbital,
        "direction": if s.moves_right() { "right" } else { "left" },
        "end_slopes": [l, r],
        "signature": s.signature,
    })
}

pub fn inspect(f: &PLMap) -> Value {
    let factors = factor_signed_orbitals(f);
    json!({
        "element": f,
        "breakpoints": f.breakpoints().iter().collect::<Vec<_>>(),
        "orbitals": factors.iter().map(|s| &s.orbital).collect::<Vec<_>>(),
        "factors": factors.iter().map(factor_json).collect::<Vec<_>>(),
    })
}

pub fn inspect_text(f: &PLMap) -> String {
    let mut s = format!("element {f}\n");
    let bps: Vec<String> = f.breakpoints().iter().map(|b| b.to_string()).collect();
    let _ = writeln!(s, "breakpoints {}", bps.join(" "));
    for so in factor_signed_orbitals(f) {
        let (l, r) = end_slopes(&so);
        let dir = if so.moves_right() { "right" } else { "left" };
        let _ = writeln!(
            s,
            "orbital {} moves {dir}, end slopes {l} {r}, factor {}",
            so.orbital, so.signature
        );
    }
    s
}

pub fn probe(
    radius: usize,
    ball_size: usize,
    found: Option<&(SignedOrbital, SignedOrbital)>,
) -> Value {
    json!({
        "radius": radius,
        "ball_size": ball_size,
        "bad_overlap": found.map(|(a, b)| json!({
            "class": classify_pair(&a.orbital, &b.orbital).to_string(),
            "first": a,
            "second": b,
        })),
    })
}

pub fn probe_text(
    radius: usize,
    ball_size: usize,
    found: Option<&(SignedOrbital, SignedOrbital)>,
) -> String {
    match found {
        Some((a, b)) => format!(
            "ball of radius {radius} ({ball_size} elements): {} between {} and {}\n",
            classify_pair(&a.orbital, &b.orbital),
            a.orbital,
            b.orbital
        ),
        None => format!("ball of radius {radius} ({ball_size} elements): no bad overlap\n"),
    }
}
