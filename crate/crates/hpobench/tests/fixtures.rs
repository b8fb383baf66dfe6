use std::path::PathBuf;

use hpobench::spacedoc::{parse_space, serialize_space};
use hpobench_core::rng::stream;
use hpobench_core::{budget_for, SearchSpace};

fn load(name: &str) -> SearchSpace {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", &format!("{name}.json")].iter().collect();
    parse_space(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn scenario_dimensions() {
    let dims = [
        ("iaml_glmnet", 2),
        ("iaml_rpart", 4),
        ("iaml_ranger", 8),
        ("rbv2_glmnet", 3),
        ("rbv2_rpart", 5),
        ("rbv2_svm", 6),
        ("rbv2_aknn", 6),
        ("rbv2_ranger", 8),
        ("rbv2_xgboost", 14),
        ("rbv2_super", 38),
        ("lcbench", 7),
        ("nb301", 34),
    ];
    for (name, d) in dims {
        let s = load(name);
        assert_eq!(s.dim(), d, "{name}");
        assert!(s.budget_param().is_some(), "{name} has a fidelity parameter");
    }
    assert_eq!(budget_for(&load("iaml_glmnet")), 77);
    assert_eq!(budget_for(&load("rbv2_super")), 267);
}

#[test]
fn svm_kernel_conditions() {
    let s = load("rbv2_svm");
    assert_eq!(s.conditional_count(), 2);
    let kernel = s.index_of("kernel").unwrap();
    assert_eq!(s.parent_of(s.index_of("gamma").unwrap()), Some(kernel));
    assert_eq!(s.parent_of(s.index_of("degree").unwrap()), Some(kernel));
    let (radial, v) = s
        .configure()
        .set("kernel", "radial")
        .set("cost", 1.0)
        .set("gamma", 0.1)
        .set("tolerance", 0.01)
        .set("trainsize", 1.0)
        .set("imputation", "impute.mean")
        .build();
    assert!(v.is_empty(), "{v:?}");
    assert!(s.is_active(s.index_of("gamma").unwrap(), &radial));
    assert!(!s.is_active(s.index_of("degree").unwrap(), &radial));
}

#[test]
fn fixtures_survive_serialization() {
    let mut rng = stream(2);
    for entry in std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures")).unwrap() {
        let path = entry.unwrap().path();
        let s = parse_space(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = parse_space(&serialize_space(&s)).unwrap();
        assert_eq!(again, s, "{}", path.display());
        for c in s.sample(&mut rng, 100) {
            assert!(s.validate(&c).is_empty(), "{}", path.display());
        }
    }
}
