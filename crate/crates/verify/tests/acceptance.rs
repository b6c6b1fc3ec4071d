//! Acceptance criteria 1 to 11. Each criterion is one test that prints a
//! single PASS/FAIL line and fails when any check fails.

use std::io::{self, Write};
use std::sync::OnceLock;

use slimlat::explore::{
    cross_check, enumerate, realize, realize_in, sweep_bounds, Enumeration, Verdict,
};
use slimlat::lamps::{lamp_poset, lamps, rho_circr, rho_foot, usage_stats, verify_lamp_con_iso};
use slimlat::multifork::{decompose, ProvenancedLattice};
use slimlat::order::{
    congruence_lattice, is_isomorphic, named_poset, poset_double, poset_iso, FiniteLattice,
};
use slimlat::reducer::{
    bound, fork_elements, is_meet_closed, remove_neighboring, remove_sandwiched, Reduction,
};

fn enumeration() -> &'static Enumeration {
    static E: OnceLock<Enumeration> = OnceLock::new();
    E.get_or_init(|| enumerate(6, false).expect("enumeration up to length 6"))
}

fn up_to(len: usize) -> Vec<&'static ProvenancedLattice> {
    (2..=len)
        .flat_map(|l| enumeration().level(l))
        .map(|e| &e.lattice)
        .collect()
}

fn name(pl: &ProvenancedLattice) -> String {
    pl.sequence().to_string().trim_end().replace('\n', " / ")
}

/// Writes through the stdout handle so the line shows up even when the test
/// harness captures `println!` output of passing tests.
fn report(id: u32, title: &str, checked: usize, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut text = format!(
        "criterion {id:>2} {verdict}: {title} ({checked} checked, {} failed)\n",
        failures.len()
    );
    for f in failures.iter().take(5) {
        text.push_str(&format!("    {f}\n"));
    }
    let _ = io::stdout().lock().write_all(text.as_bytes());
    assert!(
        failures.is_empty(),
        "criterion {id} failed: {}",
        failures.join("; ")
    );
}

#[test]
fn criterion_01_lamp_poset_is_jir_con() {
    let lattices = up_to(5);
    let failures: Vec<String> = lattices
        .iter()
        .filter_map(|pl| {
            let r = verify_lamp_con_iso(pl).expect("lamp report");
            (!r.passed()).then(|| format!("{}: {}", name(pl), r.failures.join(", ")))
        })
        .collect();
    report(
        1,
        "lamp poset isomorphic to Jir(Con L), length <= 5",
        lattices.len(),
        &failures,
    );
}

#[test]
fn criterion_02_rho_foot_equals_rho_circr() {
    let lattices = up_to(5);
    let failures: Vec<String> = lattices
        .iter()
        .filter_map(|pl| {
            let mut a = rho_foot(pl);
            let mut b = rho_circr(pl);
            a.sort_unstable();
            b.sort_unstable();
            (a != b).then(|| format!("{}: {a:?} vs {b:?}", name(pl)))
        })
        .collect();
    report(
        2,
        "rho_foot = rho_circr, length <= 5",
        lattices.len(),
        &failures,
    );
}

fn check_reduction(pl: &ProvenancedLattice, lamp: usize, r: &Reduction) -> Vec<String> {
    let mut out = Vec::new();
    let new = &r.lattice;
    if !new.diagram().is_slim_rectangular() {
        out.push("not slim rectangular".to_string());
    }
    let before = congruence_lattice(pl.diagram().lattice());
    let after = congruence_lattice(new.diagram().lattice());
    if !is_isomorphic(&before.order, &after.order) {
        out.push("congruence lattices differ".to_string());
    }
    if new.size() >= pl.size() {
        out.push(format!("size {} not below {}", new.size(), pl.size()));
    }
    if new.antube() + 1 != pl.antube() {
        out.push(format!("ANTube {} after {}", new.antube(), pl.antube()));
    }
    let old_lamps = lamps(pl);
    let new_lamps = lamps(new);
    for (i, l) in old_lamps.iter().enumerate() {
        let expected = l.tubes.len() - usize::from(i == lamp);
        let got = new_lamps[r.lamp_map[i]].tubes.len();
        if got != expected {
            out.push(format!("lamp {i}: {got} tubes, expected {expected}"));
        }
    }
    out
}

#[test]
fn criterion_03_reductions() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for pl in up_to(6) {
        let ls = lamps(pl);
        for usage in usage_stats(pl).internal {
            let tubes = &ls[usage.lamp].tubes;
            let pat = usage.pattern.as_bytes();
            for i in 0..pat.len() {
                let attempt = if pat[i..].starts_with(b"00") {
                    Some(("00", remove_neighboring(pl, tubes[i], tubes[i + 1])))
                } else if pat[i..].starts_with(b"0u0") {
                    Some(("0u0", remove_sandwiched(pl, tubes[i + 1])))
                } else {
                    None
                };
                let Some((rule, result)) = attempt else {
                    continue;
                };
                checked += 1;
                match result {
                    Ok(r) => {
                        for f in check_reduction(pl, usage.lamp, &r) {
                            failures.push(format!(
                                "{} {rule} at lamp {} pos {i}: {f}",
                                name(pl),
                                usage.lamp
                            ));
                        }
                    }
                    Err(e) => failures.push(format!(
                        "{} {rule} at lamp {} pos {i}: {e}",
                        name(pl),
                        usage.lamp
                    )),
                }
            }
        }
    }
    assert!(checked > 0);
    report(
        3,
        "00 and 0u0 removals keep Con and drop one tube, length <= 6",
        checked,
        &failures,
    );
}

#[test]
fn criterion_04_meet_closure() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for pl in up_to(5) {
        let l = pl.diagram().lattice();
        for t in pl.tubes() {
            checked += 1;
            if !is_meet_closed(l, &fork_elements(pl, t.edge)) {
                failures.push(format!(
                    "{}: tube {}-{}",
                    name(pl),
                    t.edge.foot,
                    t.edge.peak
                ));
            }
        }
    }
    report(
        4,
        "L minus F(p) is meet-closed for every neon tube, length <= 5",
        checked,
        &failures,
    );
}

#[test]
fn criterion_05_length_and_size_bounds() {
    let r = sweep_bounds(enumeration()).expect("sweep");
    let mut failures = Vec::new();
    for f in &r.length_lower {
        failures.push(format!(
            "(i) {}: {}",
            f.sequence.to_string().trim_end().replace('\n', " / "),
            f.message
        ));
    }
    if r.fixpoints == 0 {
        failures.push("(ii) no fixpoint with internal lamps".to_string());
    }
    for f in &r.length_upper {
        failures.push(format!(
            "(ii) {}: {}",
            f.sequence.to_string().trim_end().replace('\n', " / "),
            f.message
        ));
    }
    for f in &r.size_bound {
        failures.push(format!(
            "(iii) |L| <= 1+(len-1)^2 fails for {}: {}",
            f.sequence.to_string().trim_end().replace('\n', " / "),
            f.message
        ));
    }
    report(
        5,
        "len >= n, fixpoint len <= 2n^2-10n+15, |L| <= 1+(len-1)^2, length <= 6",
        r.lattices,
        &failures,
    );
}

#[test]
fn criterion_06_y_poset() {
    let mut failures = Vec::new();
    if bound(4) != 7 {
        failures.push(format!("bound(4) = {}", bound(4)));
    }
    let y = named_poset("y", 4).unwrap();
    let a = realize(&y, 7, false).expect("realize");
    match &a.verdict {
        Verdict::Found { length: 5, .. } => {}
        other => failures.push(format!("Y poset: {other:?}")),
    }
    report(
        6,
        "Y poset has minimal length 5 and the n = 4 bound is 7",
        2,
        &failures,
    );
}

#[test]
fn criterion_07_q_and_p_families() {
    let mut e = Enumeration::new();
    let mut failures = Vec::new();
    for n in 3..=5 {
        let p = named_poset("q", n).unwrap();
        match realize_in(&mut e, &p, 7, false).expect("realize").verdict {
            Verdict::Found { length, .. } if length == n => {}
            other => failures.push(format!("Q_{n}: {other:?}")),
        }
    }
    for n in 4..=5 {
        let p = named_poset("p", n).unwrap();
        match realize_in(&mut e, &p, 7, false).expect("realize").verdict {
            Verdict::Found { length, witness } if length == n + 1 => {
                let pl = ProvenancedLattice::build(&witness).unwrap();
                let lp = lamp_poset(&pl).unwrap();
                let map = poset_iso(&lp.order, &p).expect("witness lamp poset");
                let u = map.iter().position(|&x| x == n - 3).unwrap();
                let ntube = lp.lamps[u].tubes.len();
                if ntube != 2 {
                    failures.push(format!("P_{n}: NTube(U) = {ntube}"));
                }
            }
            other => failures.push(format!("P_{n}: {other:?}")),
        }
    }
    report(
        7,
        "Q_n at length n (n = 3,4,5), P_n at length n+1 with NTube(U) = 2 (n = 4,5)",
        5,
        &failures,
    );
}

#[test]
fn criterion_08_doubling() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for pl in up_to(4) {
        let seq = pl.sequence();
        let con = congruence_lattice(pl.diagram().lattice());
        let iso = verify_lamp_con_iso(pl).unwrap();
        let ls = lamps(pl);
        for t in 1..=seq.steps.len() {
            checked += 1;
            let what = format!("{} t={t}", name(pl));
            let r = match slimlat::doubling::verify_double(seq, t) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{what}: {e}"));
                    continue;
                }
            };
            if !r.passed() {
                failures.push(format!("{what}: {r:?}"));
            }
            let doubled =
                ProvenancedLattice::build(&slimlat::doubling::double(seq, t).unwrap()).unwrap();
            let lamp = ls.iter().position(|l| l.step == t).unwrap();
            let j = iso.map[lamp].unwrap();
            let expected = poset_double(&con.order, j);
            if !is_isomorphic(
                &congruence_lattice(doubled.diagram().lattice()).order,
                &expected,
            ) {
                failures.push(format!(
                    "{what}: Jir(Con) of the double is not the doubled poset"
                ));
            }
        }
    }
    assert!(checked > 0);
    report(8, "doubling every step, length <= 4", checked, &failures);
}

#[test]
fn criterion_09_decompose_round_trip() {
    let lattices = up_to(5);
    let failures: Vec<String> = lattices
        .iter()
        .filter_map(|pl| {
            let d = pl.diagram();
            let rebuilt = decompose(d).and_then(|s| ProvenancedLattice::build(&s));
            match rebuilt {
                Ok(r) if r.diagram().canonical_code() == d.canonical_code() => None,
                Ok(_) => Some(format!("{}: code differs", name(pl))),
                Err(e) => Some(format!("{}: {e}", name(pl))),
            }
        })
        .collect();
    report(
        9,
        "build(decompose(L)) has the canonical code of L, length <= 5",
        lattices.len(),
        &failures,
    );
}

fn is_boolean_4(l: &FiniteLattice) -> bool {
    let c = congruence_lattice(l);
    c.full_size == 4 && c.order.len() == 2 && c.order.is_antichain()
}

#[test]
fn criterion_10_trivial_cases() {
    let mut failures = Vec::new();
    let chain3 = FiniteLattice::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
    let b2 = FiniteLattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    if !is_boolean_4(&chain3) {
        failures.push("Con of the 3-chain is not the 4-element Boolean lattice".to_string());
    }
    if !is_boolean_4(&b2) {
        failures.push("Con of B_2 is not the 4-element Boolean lattice".to_string());
    }
    for n in 0..=1usize {
        let covers: Vec<_> = (1..=n).map(|i| (i - 1, i)).collect();
        let chain = FiniteLattice::from_covers(n + 1, &covers).unwrap();
        let c = congruence_lattice(&chain);
        if c.order.len() != n || c.full_size != n as u128 + 1 {
            failures.push(format!(
                "Con of the {}-chain has {} join-irreducibles",
                n + 1,
                c.order.len()
            ));
        }
        let p = named_poset("chain", n).unwrap();
        if realize(&p, 7, false).unwrap().verdict != (Verdict::Chain { length: n }) {
            failures.push(format!("{n}-element poset not realized by a chain"));
        }
    }
    report(
        10,
        "Con(3-chain) and Con(B_2) are Boolean, chains realize n <= 1",
        6,
        &failures,
    );
}

#[test]
fn criterion_11_counts() {
    let e = enumeration();
    let counts: Vec<usize> = (2..=6).map(|l| e.level(l).len()).collect();
    let mut failures = Vec::new();
    if counts != [1, 2, 6, 19, 78] {
        failures.push(format!("counts for lengths 2..=6: {counts:?}"));
    }
    for len in 2..=4 {
        let c = cross_check(e, len).unwrap();
        if !c.consistent {
            failures.push(format!("length {len}: {c:?}"));
        }
    }
    report(
        11,
        &format!("counts {counts:?} for lengths 2..=6, codes match isomorphism up to length 4"),
        8,
        &failures,
    );
}
