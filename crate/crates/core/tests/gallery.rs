use regulus::asymptotics::{regpowgeo_crosscheck, Status};
use regulus::cohomology::{cd_irrelevant, fiber_module, origin, support_containment, top_base_change, tor_base, AValue};
use regulus::parse::parse_polynomial;
use regulus::resolution::{BaseMode, Resolution};
use regulus::sampling::{random_form, stream};
use regulus::{Field, MonomialOrder, Polynomial, Ring, RingRef, Submodule};

fn ideal(r: &RingRef, s: &[&str]) -> Submodule {
    let ps: Vec<Polynomial> = s.iter().map(|x| parse_polynomial(r, x).unwrap()).collect();
    Submodule::ideal(r, &ps).unwrap()
}

fn local_ring(names: &[&str], nbase: usize) -> RingRef {
    let weights = (0..names.len()).map(|i| if i < nbase { 0 } else { 1 }).collect();
    Ring::new(Field::Prime(32003), names.iter().map(|s| s.to_string()).collect(), weights, MonomialOrder::Grevlex, true).unwrap()
}

#[test]
fn special_fiber_regularity() {
    let r = Ring::standard(Field::Prime(32003), &["X1", "X2", "X3", "X4"]).unwrap();
    let i = ideal(&r, &["X1^2*X2 - X3^2*X4", "X2^3", "X4^3"]);
    let res = Resolution::of_quotient(&i, BaseMode::Field).unwrap();
    assert_eq!(res.betti().regularity(), Some(7));
    assert_eq!(res.euler_series().unwrap(), i.quotient_series().unwrap());
}

#[test]
fn random_cubic_complete_intersection() {
    let r = Ring::standard(Field::Prime(32003), &["X1", "X2", "X3", "X4"]).unwrap();
    let mut rng = stream(11, 0);
    let fs: Vec<Polynomial> = (0..3).map(|_| random_form(&r, 3, &mut rng)).collect();
    let i = Submodule::ideal(&r, &fs).unwrap();
    let res = Resolution::of_quotient(&i, BaseMode::Field).unwrap();
    assert_eq!(res.betti().regularity(), Some(6));
}

#[test]
fn degenerating_family() {
    let r = local_ring(&["u", "v", "X1", "X2", "X3", "X4"], 2);
    let f = ideal(&r, &["X1^2*X2 - X3^2*X4", "X2^3 + u*X1^3", "X4^3 + v*X3^3"]);
    let res = Resolution::of_quotient(&f, BaseMode::Local).unwrap();
    assert_eq!(res.betti().regularity(), Some(6));
    let tor1 = tor_base(&f, 1).unwrap();
    assert_eq!(cd_irrelevant(&tor1).unwrap(), 2);
    let fib = fiber_module(&f, &origin(&r)).unwrap();
    let fres = Resolution::of_quotient(&fib, BaseMode::Field).unwrap();
    assert_eq!(fres.betti().regularity(), Some(7));
    let tb = top_base_change(&f).unwrap();
    assert!(tb.agrees(), "{tb:?}");
    assert!(support_containment(&f, 1, 10).unwrap().iter().all(|e| e.is_some()));
}

#[test]
fn two_squares_crosscheck() {
    let r = Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap();
    let c = regpowgeo_crosscheck(&ideal(&r, &["x^2", "y^2"]), 6, 10, 5, &[], None).unwrap();
    let st: Vec<(String, Status)> = c.clauses.iter().map(|v| (v.clause.clone(), v.status.clone())).collect();
    eprintln!("{st:?} {}", serde_json::to_string(&c.clauses).unwrap());
    assert_eq!(c.reg_limit, serde_json::json!(1));
    assert_eq!(c.rees.freg, AValue(Some(1)));
    assert_eq!(c.clauses[4].status, Status::Verified);
    assert!(c.trichotomy.agrees && c.trichotomy.finite);
}

#[test]
fn veronese_crosscheck() {
    let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
    let c = regpowgeo_crosscheck(&ideal(&r, &["x^3", "x^2*y", "x*y^2", "y^3"]), 6, 10, 5, &[], None).unwrap();
    eprintln!("{}", serde_json::to_string(&c.clauses).unwrap());
    assert_eq!(c.clauses[3].status, Status::Verified);
    assert_eq!(c.rees.freg, AValue(Some(0)));
    assert!(c.trichotomy.agrees && !c.trichotomy.finite);
}

#[test]
fn fiber_against_stalk_regularity() {
    let dvr = ideal(&local_ring(&["p", "X"], 1), &["p*X^5"]);
    let family = ideal(
        &local_ring(&["u", "v", "X1", "X2", "X3", "X4"], 2),
        &["X1^2*X2 - X3^2*X4", "X2^3 + u*X1^3", "X4^3 + v*X3^3"],
    );
    let regs = |f: &Submodule| {
        let stalk = Resolution::of_quotient(f, BaseMode::Local).unwrap().betti().regularity().unwrap();
        let fib = fiber_module(f, &origin(f.ring())).unwrap();
        let fiber = Resolution::of_quotient(&fib, BaseMode::Field).unwrap().betti().regularity().unwrap();
        let cd = cd_irrelevant(&tor_base(f, 1).unwrap()).unwrap();
        (fiber, stalk, cd)
    };
    // With cd Tor_1 <= 1 the fiber is bounded by the stalk.
    assert_eq!(regs(&dvr), (0, 4, 1));
    // With cd Tor_1 = 2 the bound fails.
    assert_eq!(regs(&family), (7, 6, 2));
}
