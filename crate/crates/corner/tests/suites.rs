use corner::suites::{run, Params, Status, Suite, SuiteError};

#[test]
fn every_suite_runs_at_three_one() {
    for s in Suite::ALL {
        let r = run(s, &Params::new(3, 1)).unwrap();
        assert!(!r.checks.is_empty(), "{s}");
        assert_eq!(r.deterministic_json(), run(s, &Params::new(3, 1)).unwrap().deterministic_json(), "{s}");
    }
}

#[test]
fn passing_suites_at_three_one() {
    for s in [Suite::Fox, Suite::Heisenberg, Suite::BraidRelations, Suite::Jordan, Suite::UBasis, Suite::Separation] {
        let r = run(s, &Params::new(3, 1)).unwrap();
        let failed: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
        assert!(failed.is_empty(), "{s}: {failed:?}");
    }
}

#[test]
fn out_of_hypothesis_is_skipped() {
    let r = run(Suite::MainTheorem, &Params::new(3, 1)).unwrap();
    assert_eq!(r.check("corner-full").unwrap().status, Status::SkippedOutOfHypothesis);
    assert_eq!(r.values["corner_dim"], 6);
    let s = run(Suite::SpectralOperators, &Params::new(3, 2)).unwrap();
    assert!(s.checks.iter().any(|c| c.status == Status::SkippedOutOfHypothesis));
}

#[test]
fn known_failures_are_reported() {
    let r = run(Suite::MatrixUnits, &Params::new(3, 1)).unwrap();
    assert_eq!(r.check("unit-products-unnormalized").unwrap().status, Status::Fail);
    assert_eq!(r.check("unit-products").unwrap().status, Status::Pass);
    let a = run(Suite::ActionFormulas, &Params::new(3, 1)).unwrap();
    assert_eq!(a.check("semisimple-odd-as-displayed").unwrap().status, Status::Fail);
    assert_eq!(a.check("semisimple-odd-completed").unwrap().status, Status::Pass);
}

#[test]
fn json_shape() {
    let r = run(Suite::Heisenberg, &Params::new(3, 1)).unwrap();
    let v = r.to_json();
    assert_eq!(v["suite"], "heisenberg");
    assert!(v["timing"]["wall_time_ms"].is_u64());
    assert_eq!(v["checks"][0]["status"], "pass");
    assert!(v["checks"][0]["statement"].is_string());
    assert!(!r.deterministic_json().contains("timing"));
}

#[test]
fn guards_and_bad_input() {
    assert!(matches!(run(Suite::Fox, &Params::new(5, 2)), Err(SuiteError::TooLarge { size: 3125, .. })));
    assert!(run(Suite::Fox, &Params::new(4, 1)).is_err());
    assert!(run(Suite::Fox, &Params::new(3, 0)).is_err());
    assert!("main".parse::<Suite>().is_err());
}
