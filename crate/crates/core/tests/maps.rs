use specpoint::{BlackBox, Error, ExtendedReal, MapSpec};

#[test]
fn builtin_values() {
    let f = MapSpec::from_name("sqrt_abs", &[]).unwrap();
    assert_eq!(f.eval1(4.0).unwrap(), 2.0);
    let g = MapSpec::from_name("abs_re_plus_i_im", &[]).unwrap();
    assert_eq!(g.eval(&[-3.0, 5.0]).unwrap(), vec![3.0, 5.0]);
    let h = MapSpec::from_name("cardioid_map", &[]).unwrap();
    assert_eq!(h.eval(&[0.0, 1.0]).unwrap(), vec![1.0, 1.0]);
}

#[test]
fn translation_examples() {
    let sq = MapSpec::black_box(BlackBox::new("square", 1, |x| vec![x[0] * x[0]]));
    let g = sq.translate_to_origin(&[1.0]).unwrap();
    assert_eq!(g.eval1(0.0).unwrap(), 0.0);
    for x in [-0.5, 0.25, 3.0] {
        assert!((g.eval1(x).unwrap() - (2.0 * x + x * x)).abs() < 1e-14);
    }
    let f = MapSpec::from_name("abs_re_plus_i_im", &[]).unwrap();
    let g = f.translate_to_origin(&[0.0, 0.0]).unwrap();
    for x in [[0.3, -1.0], [-2.0, 0.5]] {
        assert_eq!(g.eval(&x).unwrap(), f.eval(&x).unwrap());
    }
}

#[test]
fn domain_and_evaluation_errors() {
    let log = MapSpec::black_box(BlackBox::new("log", 1, |x| vec![x[0].ln()]).with_domain(|x| x[0] > 0.0));
    assert!(matches!(log.translate_to_origin(&[-1.0]), Err(Error::Domain { .. })));
    assert!(matches!(log.eval1(0.0), Err(Error::Domain { .. })));
    let inv = MapSpec::black_box(BlackBox::new("inv", 1, |x| vec![1.0 / x[0]]));
    assert!(matches!(inv.eval1(0.0), Err(Error::Evaluation { .. })));
}

#[test]
fn extended_real_conventions() {
    assert_eq!(ExtendedReal::inf_of([]), ExtendedReal::PosInf);
    assert_eq!(ExtendedReal::sup_of([]), ExtendedReal::NegInf);
    assert_eq!(
        serde_json::to_string(&[ExtendedReal::PosInf, ExtendedReal::NegInf, ExtendedReal::new(1.5)]).unwrap(),
        r#"["inf","-inf",1.5]"#
    );
}
