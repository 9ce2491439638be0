use jka::report::{Format, Report, RunConfig};
use jka::runner::run;
use jka::{AlgebraSpec, Family};
use proptest::prelude::*;

fn config(seed: u64, suites: &[&str]) -> RunConfig {
    RunConfig {
        algebras: vec![AlgebraSpec::new(Family::Gamma, 2), AlgebraSpec::new(Family::HermR, 3)],
        suites: suites.iter().map(|s| s.to_string()).collect(),
        seed,
        points: 4,
        ..RunConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reports_are_byte_identical_per_seed(seed in any::<u64>()) {
        let cfg = config(seed, &["constants", "dims", "projector", "vector_fields"]);
        let a = run(&cfg).unwrap().to_json().unwrap();
        let b = run(&cfg).unwrap().to_json().unwrap();
        prop_assert_eq!(&a, &b);
        let back = Report::from_json(&a).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), a);
    }
}

#[test]
fn every_check_carries_an_anchor() {
    let cfg = config(1, &["constants", "dims", "tkk_hidden", "appendixB", "spectrum", "laguerre", "harmonics"]);
    let report = run(&cfg).unwrap();
    assert!(report.pass());
    for c in &report.checks {
        assert!(!c.anchor.is_empty(), "{}", c.id);
    }
}

#[test]
fn csv_has_one_row_per_check() {
    let report = run(&config(2, &["constants", "dims"])).unwrap();
    let text = report.render(Format::Csv).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.records().count(), report.checks.len());
}

#[test]
fn foreign_schema_is_rejected() {
    let report = run(&config(3, &["constants"])).unwrap();
    let json = report.to_json().unwrap().replace("jka/1", "other/9");
    assert!(Report::from_json(&json).is_err());
}
