use bbp_core::digit_extract::extract_digits_guarded;
use bbp_core::transforms::{align, rewrite_instance};
use bbp_core::{
    combine, eval_p, extract_digits, instantiate, list_families, run_suite, verify_instance, FormulaInstance,
    PFormula, Rational,
};

#[test]
fn full_suite_passes() {
    let reports = run_suite(256, 25);
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).map(|r| (r.subject.clone(), r.n)).collect();
    assert!(failed.is_empty(), "{failed:?}");
    let family_reports = reports.iter().filter(|r| list_families().iter().any(|d| d.id == r.subject)).count();
    assert!(family_reports >= 22 * 20);
    for prefix in ["crosscheck.", "summary.", "rewrite.", "combine.", "generator."] {
        assert!(reports.iter().any(|r| r.subject.starts_with(prefix)), "{prefix}");
    }
}

#[test]
fn suite_is_deterministic() {
    let a: Vec<String> = run_suite(128, 6).iter().map(|r| r.to_json()).collect();
    let b: Vec<String> = run_suite(128, 6).iter().map(|r| r.to_json()).collect();
    assert_eq!(a, b);
}

#[test]
fn suite_order_follows_registry() {
    let reports = run_suite(96, 3);
    let ids: Vec<&str> = list_families().iter().map(|d| d.id).collect();
    let mut seen: Vec<&str> = Vec::new();
    for r in reports.iter().filter(|r| ids.contains(&r.subject.as_str())) {
        if seen.last() != Some(&r.subject.as_str()) {
            seen.push(ids.iter().find(|&&i| i == r.subject).unwrap());
        }
    }
    assert_eq!(seen, ids);
}

#[test]
fn instance_json_feeds_combine_and_rewrite() {
    let a = FormulaInstance::from_json(&instantiate("A8", 3).unwrap().to_json()).unwrap();
    let b = FormulaInstance::from_json(&instantiate("A9", 3).unwrap().to_json()).unwrap();
    let c = combine(&a, &b, &1.into(), &1.into()).unwrap();
    let again = FormulaInstance::from_json(&c.to_json()).unwrap();
    assert_eq!(again, c);
    assert!(verify_instance(&again, 192).unwrap().pass);

    let r = rewrite_instance(&a, 2).unwrap();
    assert!(verify_instance(&FormulaInstance::from_json(&r.to_json()).unwrap(), 192).unwrap().pass);
}

#[test]
fn subtraction_closure() {
    for n in 1..=6 {
        let c = combine(&instantiate("A8", n).unwrap(), &instantiate("A9", n).unwrap(), &1.into(), &(-1).into()).unwrap();
        assert!(verify_instance(&c, 192).unwrap().pass, "n={n}");
    }
}

#[test]
fn aligned_combination_verifies() {
    let (x, y) = align(&instantiate("A1", 5).unwrap(), &instantiate("A2", 5).unwrap()).unwrap();
    let c = combine(&x, &y, &Rational::new(2, 3), &Rational::new(-1, 7)).unwrap();
    assert!(verify_instance(&c, 192).unwrap().pass);
}

#[test]
fn eval_is_deterministic_and_parallel_safe() {
    // large enough that the head sum is split across workers
    let f = list_families()[0].formula(2);
    let a = eval_p(&f, 20_000).unwrap();
    let b = eval_p(&f, 20_000).unwrap();
    assert_eq!(a, b);
}

#[test]
fn digit_overlap_far_out() {
    let f = PFormula::from_i64(1, 16, &[8, 8, 4, 0, -2, -2, -1, 0]).unwrap();
    let x = extract_digits(&f, 100_000, 8).unwrap();
    let y = extract_digits(&f, 100_001, 7).unwrap();
    assert_eq!(x.digits[1..], y.digits);
    // more guard digits never change a certified result
    assert_eq!(extract_digits_guarded(&f, 100_000, 8, 24).unwrap().digits, x.digits);
}
