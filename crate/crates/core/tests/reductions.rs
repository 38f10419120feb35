//! Integration tests for the model transformations.

use paramark::io::{parse_dimacs, parse_model, parse_poly_system, print_model};
use paramark::model::{instantiate, ModelBuilder, ModelKind, ParametricModel};
use paramark::oracle::random_simple_model;
use paramark::polyalg::{rat, Rational, Valuation};
use paramark::quantitative::mc_reach_exact;
use paramark::reductions::{
    bcon4ineq_to_pmdp, gp_gadget, pmdp_exists_to_pmc, sat3_to_pmc, sat3_valuation,
    strategy_valuation, ReductionError, Sat3Variant,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chain_value(model: &ParametricModel, val: &Valuation) -> Rational {
    mc_reach_exact(&instantiate(model, val).unwrap()).unwrap()
}

fn three_way_choice() -> ParametricModel {
    let mut b = ModelBuilder::new(ModelKind::Pmdp);
    b.transition("s", "rock", "goal", "x")
        .transition("s", "rock", "sink", "1 - x")
        .transition("s", "paper", "goal", "1/3")
        .transition("s", "paper", "sink", "2/3")
        .transition("s", "scissors", "goal", "1 - x")
        .transition("s", "scissors", "s", "x")
        .transition("goal", "stay", "goal", "1")
        .transition("sink", "stay", "sink", "1")
        .init("s")
        .target("goal");
    b.build().unwrap()
}

#[test]
fn coin_tree_reproduces_every_strategy() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut models: Vec<ParametricModel> = (0..15)
        .map(|_| random_simple_model(&mut rng, ModelKind::Pmdp, 5, 2))
        .collect();
    models.push(three_way_choice());
    for model in models {
        let tree = pmdp_exists_to_pmc(&model).unwrap();
        assert_eq!(tree.pmc.kind, ModelKind::Pmc);
        let base = model.uniform_valuation(&rat(1, 3));
        for sigma in model.enumerate_strategies() {
            let induced = model.induced_pmc(&sigma).unwrap();
            let via_coins = strategy_valuation(&model, &tree, &sigma, &base);
            assert_eq!(
                chain_value(&tree.pmc, &via_coins),
                chain_value(&induced, &base),
                "{sigma:?}"
            );
        }
    }
}

#[test]
fn coin_tree_of_three_actions_uses_two_coins() {
    let tree = pmdp_exists_to_pmc(&three_way_choice()).unwrap();
    assert_eq!(tree.coins.len(), 2);
    assert_eq!(tree.pmc.params.len(), 3);
}

#[test]
fn strict_system_solutions_show_up_as_strategy_values() {
    let system = parse_poly_system("@vars x y\nx - 1/2\ny - x\n-x*y - 1\n", Some(4)).unwrap();
    let pmdp = bcon4ineq_to_pmdp(&system).unwrap();
    assert_eq!(pmdp.choices[pmdp.init].len(), 3);
    for (a, b) in [(1, 4), (1, 3), (3, 4), (1, 2), (1, 1)] {
        for (c, d) in [(1, 5), (2, 5), (1, 2), (3, 4)] {
            let val: Valuation = [("x".to_string(), rat(a, b)), ("y".to_string(), rat(c, d))]
                .into_iter()
                .collect();
            for (i, sigma) in pmdp
                .enumerate_strategies()
                .filter(|s| {
                    let init_choice = s.0[pmdp.init];
                    s.0.iter()
                        .enumerate()
                        .all(|(st, &c)| st == pmdp.init || c == 0)
                        && init_choice < 3
                })
                .enumerate()
            {
                let value = chain_value(&pmdp.induced_pmc(&sigma).unwrap(), &val);
                let f = system.polys[i].eval(&val).unwrap();
                assert_eq!(value < rat(1, 2), f < rat(0, 1), "f{i} at {val:?}");
                assert_eq!(value == rat(1, 2), f == rat(0, 1), "f{i} at {val:?}");
            }
        }
    }
}

#[test]
fn empty_system_is_rejected() {
    let system = parse_poly_system("@vars x\n", None).unwrap();
    assert!(matches!(
        bcon4ineq_to_pmdp(&system),
        Err(ReductionError::EmptySystem)
    ));
}

#[test]
fn satisfying_assignments_reach_the_goal() {
    let cnf = parse_dimacs("p cnf 3 3\n1 -2 3 0\n-1 2 0\n2 3 -3 0\n").unwrap();
    let assignment = cnf.satisfying_assignment().unwrap();
    let val = sat3_valuation(&cnf, &assignment);
    assert!(chain_value(&sat3_to_pmc(&cnf, Sat3Variant::Positive), &val) > rat(0, 1));
    assert_eq!(
        chain_value(&sat3_to_pmc(&cnf, Sat3Variant::AlmostSure), &val),
        rat(1, 1)
    );
}

#[test]
fn unsatisfiable_formula_never_reaches_the_goal_on_boolean_points() {
    let cnf = parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n").unwrap();
    let model = sat3_to_pmc(&cnf, Sat3Variant::Positive);
    for bits in [false, true] {
        let val = sat3_valuation(&cnf, &[bits]);
        assert_eq!(chain_value(&model, &val), rat(0, 1));
    }
}

#[test]
fn gp_gadget_leaves_parameter_free_models_alone() {
    let text = "@type pmc\n@states a b c\n@init a\n@targets b\na -> b : 1/3\na -> c : 2/3\nb -> b : 1\nc -> c : 1\n";
    let model = parse_model(text).unwrap();
    let gadget = gp_gadget(&model).unwrap();
    assert_eq!(print_model(&gadget), print_model(&model));
}
