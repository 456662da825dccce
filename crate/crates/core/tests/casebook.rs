mod common;

use common::{election_oracle, TOL};
use lowprob::casebook::{
    linspace, prisoners_curve_points, treatment_events, treatment_model, ElectionModel,
    PrisonersModel,
};
use lowprob::transforms::{is_k_monotone, mobius};
use lowprob::updating::{condition, Rule};
use lowprob::{Error, Exec};

#[test]
fn prisoners_grid_matches_the_hand_formulas() {
    let pts = prisoners_curve_points(101, Exec::Parallel).unwrap();
    assert_eq!(pts.len(), 101);
    for p in pts {
        let d = p.delta_b;
        assert!((p.x - d / (1.0 + d)).abs() <= TOL);
        assert!((p.y - (1.0 - d) / (2.0 - d)).abs() <= TOL);
        let m = PrisonersModel::new(Some(d)).unwrap();
        let c = m.capacity();
        let given_c = condition(&c, m.a_lives(), m.says_c(), Rule::GeneralizedBayes)
            .unwrap()
            .interval;
        assert!(given_c.width() <= TOL && (given_c.lo - p.y).abs() <= TOL);
    }
}

#[test]
fn election_grid_matches_the_oracle() {
    for eps in linspace(-0.025, 0.1, 101).unwrap() {
        let m = ElectionModel::new(eps).unwrap();
        for rule in Rule::ALL {
            let got = condition(&m.capacity(), m.clinton(), m.dem(), rule);
            // "Rep" is symmetric to "Dem"
            let rep = condition(&m.capacity(), m.clinton(), m.rep(), rule);
            if let (Ok(a), Ok(b)) = (&got, &rep) {
                assert!(a.interval.distance(&b.interval) <= TOL);
            }
            match (election_oracle(eps, rule.short_name()), got) {
                (Some((lo, hi)), Ok(r)) => {
                    assert!((r.interval.lo - lo).abs() <= TOL, "{eps} {rule}");
                    assert!((r.interval.hi - hi).abs() <= TOL, "{eps} {rule}");
                }
                (None, Err(Error::GeometricUndefined)) => {}
                (o, g) => panic!("ε={eps} {rule}: oracle {o:?}, engine {g:?}"),
            }
        }
    }
}

#[test]
fn treatment_capacity_is_not_a_belief_function() {
    let c = treatment_model();
    assert!(matches!(mobius(&c), Err(Error::NotABeliefFunction { .. })));
    // two fair margins, nothing said about their dependence
    let (a, b) = treatment_events(&c);
    assert_eq!((c.lower(a), c.upper(a)), (0.5, 0.5));
    assert_eq!((c.lower(b), c.upper(b)), (0.5, 0.5));
    assert!(!is_k_monotone(&c, 2).unwrap().holds);
    let r = condition(&c, a, b, Rule::GeneralizedBayes).unwrap();
    assert!((r.interval.lo - 0.0).abs() <= TOL && (r.interval.hi - 1.0).abs() <= TOL);
}
