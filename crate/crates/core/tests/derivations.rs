use dawk::error::Error;
use dawk::presentations::{eval_word, weyl_assignment};
use dawk::rewriting::{
    prove_shipped_chains, replay_shipped_traces, verify_derivation, Chain, DerivationTrace,
    LemmaLibrary, SHIPPED_CHAINS, SHIPPED_TRACES,
};
use dawk::root_system::load_catalog;
use dawk::weyl::DoubleAffineWeyl;

#[test]
fn every_shipped_trace_replays() {
    let (lib, _) = prove_shipped_chains().unwrap();
    let results = replay_shipped_traces(&lib);
    assert_eq!(results.len(), SHIPPED_CHAINS.len());
    for (name, r) in results {
        assert_eq!(r, Ok(true), "{name}");
    }
}

#[test]
fn the_expected_fixtures_are_shipped() {
    let names: Vec<&str> = SHIPPED_TRACES.iter().map(|(n, _)| *n).collect();
    for n in [
        "trick-forward",
        "trick-backward",
        "trick-furthermore",
        "ee",
        "braid02-single",
        "braid02-double",
        "ellbraidautom",
        "magic1",
        "reducel2",
        "lemma2-double",
        "lemma2-single",
    ] {
        assert!(names.contains(&n), "{n}");
    }
}

#[test]
fn checked_in_traces_equal_fresh_compilation() {
    let (_, proved) = prove_shipped_chains().unwrap();
    for pc in proved {
        let shipped = SHIPPED_TRACES
            .iter()
            .find(|(n, _)| *n == pc.chain.name)
            .unwrap()
            .1;
        assert_eq!(pc.lemma.trace.to_json_lines(), shipped, "{}", pc.chain.name);
    }
}

#[test]
fn chain_endpoints_agree_in_the_weyl_group() {
    let (_, proved) = prove_shipped_chains().unwrap();
    let mut checked = 0;
    for pc in proved {
        let p = &pc.chain.presentation;
        let Some(t) = &p.type_id else { continue };
        let g = DoubleAffineWeyl::new(load_catalog(t).unwrap());
        let a = weyl_assignment(&g, p).unwrap();
        assert_eq!(
            eval_word(&g, &a, &pc.lemma.lhs).unwrap(),
            eval_word(&g, &a, &pc.lemma.rhs).unwrap(),
            "{}",
            pc.chain.name
        );
        checked += 1;
    }
    assert!(checked >= 7);
}

#[test]
fn tampered_trace_is_rejected_at_the_right_step() {
    let (lib, proved) = prove_shipped_chains().unwrap();
    let pc = proved.iter().find(|p| p.chain.name == "magic1").unwrap();
    let mut trace = pc.lemma.trace.clone();
    // the first step rewrites the one-letter start word, so any shift is out of range
    trace.steps[0].position += 1;
    match verify_derivation(&pc.chain.presentation, &trace, &lib) {
        Err(Error::BadStep { index, .. }) => assert_eq!(index, 0),
        other => panic!("expected BadStep, got {other:?}"),
    }
    let mut trace = pc.lemma.trace.clone();
    trace.steps[0].rule_id = "no-such-relation".into();
    assert!(matches!(
        verify_derivation(&pc.chain.presentation, &trace, &lib),
        Err(Error::BadStep { index: 0, .. })
    ));
}

#[test]
fn wrong_endpoint_is_rejected() {
    let (lib, proved) = prove_shipped_chains().unwrap();
    let pc = proved.iter().find(|p| p.chain.name == "ee").unwrap();
    let text = pc.lemma.trace.to_json_lines().replacen(
        &format!("\"end\":\"{}\"", pc.lemma.rhs),
        "\"end\":\"T1\"",
        1,
    );
    let trace = DerivationTrace::from_json_lines(&text).unwrap();
    assert!(!matches!(
        verify_derivation(&pc.chain.presentation, &trace, &lib),
        Ok(true)
    ));
}

#[test]
fn lemma_use_must_be_declared() {
    let text = "name: bad\npresentation: triple A4~2 0\nstart: T1 T01 T02 T1 T02\n= T02 T1 T01 T02 T1 by lemma:ee\n";
    let chain = Chain::parse(text).unwrap();
    let (lib, _) = prove_shipped_chains().unwrap();
    assert!(matches!(
        chain.compile(&lib),
        Err(Error::BadStep { index: 0, .. })
    ));
    assert!(chain.compile(&LemmaLibrary::new()).is_err());
}
