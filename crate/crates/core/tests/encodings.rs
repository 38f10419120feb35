use paramark::etr::{
    canonical_assignment, encode, encode_gp, encode_pmc, encode_pmc_solution_function, encode_wd,
    Assignment, Cmp, EncodingRequest, Formula, Style,
};
use paramark::io::parse_model;
use paramark::model::{ModelKind, ParametricModel};
use paramark::oracle::{
    cross_check, cross_check_mirrored, random_simple_model, GridKind, GridSpec,
};
use paramark::polyalg::{rat, Polynomial, Valuation};
use paramark::types::{Domain, Quantifier, Relop};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> ParametricModel {
    let path = format!(
        "{}/tests/fixtures/{name}.pmodel",
        env!("CARGO_MANIFEST_DIR")
    );
    parse_model(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn grid_for(domain: Domain) -> GridSpec {
    match domain {
        Domain::Gp => GridSpec::new(5, GridKind::GpInterior),
        Domain::Wd => GridSpec::new(5, GridKind::WdClosed),
        Domain::Boolean => GridSpec::new(1, GridKind::Boolean),
    }
}

fn requests(kind: ModelKind) -> Vec<EncodingRequest> {
    let quantifiers: &[Quantifier] = match kind {
        ModelKind::Pmc => &[Quantifier::Exists],
        ModelKind::Pmdp => &[Quantifier::Exists, Quantifier::Forall],
    };
    let mut out = Vec::new();
    for &quantifier in quantifiers {
        for relop in Relop::ALL {
            for domain in [Domain::Gp, Domain::Wd, Domain::Boolean] {
                out.push(EncodingRequest {
                    quantifier,
                    relop,
                    domain,
                    style: Style::Equations,
                });
            }
        }
    }
    out
}

#[test]
fn random_encodings_agree_with_exact_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..60 {
        let kind = if i % 2 == 0 {
            ModelKind::Pmc
        } else {
            ModelKind::Pmdp
        };
        let model = random_simple_model(&mut rng, kind, 6, 2);
        for req in requests(kind) {
            let report = cross_check(&model, &req, &grid_for(req.domain)).unwrap();
            assert!(
                report.counterexamples.is_empty(),
                "{req:?} on\n{}\n{:?}",
                paramark::io::print_model(&model),
                report.counterexamples[0]
            );
        }
    }
}

#[test]
fn mirrored_encodings_are_caught() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut caught = 0;
    let total = 40;
    for i in 0..total {
        let kind = if i % 2 == 0 {
            ModelKind::Pmc
        } else {
            ModelKind::Pmdp
        };
        let model = random_simple_model(&mut rng, kind, 6, 2);
        let req = EncodingRequest {
            quantifier: Quantifier::Exists,
            relop: Relop::Ge,
            domain: Domain::Gp,
            style: Style::Equations,
        };
        let report = cross_check_mirrored(&model, &req, &grid_for(Domain::Gp)).unwrap();
        if !report.counterexamples.is_empty() {
            caught += 1;
        }
    }
    assert!(caught * 10 >= total * 9, "caught {caught} of {total}");
}

#[test]
fn solution_function_style_agrees_with_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let model = random_simple_model(&mut rng, ModelKind::Pmc, 6, 2);
        for relop in Relop::ALL {
            let eq = encode_pmc(&model, relop, Domain::Gp).unwrap();
            let sf = encode_pmc_solution_function(&model, relop).unwrap();
            let req = EncodingRequest {
                quantifier: Quantifier::Exists,
                relop,
                domain: Domain::Gp,
                style: Style::Equations,
            };
            for val in grid_for(Domain::Gp).valuations(&model.params) {
                let asg = canonical_assignment(&model, &val, &req).unwrap();
                let params_only = Assignment {
                    reals: val.clone(),
                    bools: Default::default(),
                };
                assert_eq!(eq.eval(&asg).unwrap(), sf.eval(&params_only).unwrap());
            }
        }
    }
}

#[test]
fn single_action_pmdp_collapses_to_chain_encoding() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let chain = random_simple_model(&mut rng, ModelKind::Pmc, 5, 2);
        let mut mdp = chain.clone();
        mdp.kind = ModelKind::Pmdp;
        for relop in Relop::ALL {
            for quantifier in [Quantifier::Exists, Quantifier::Forall] {
                let req = EncodingRequest {
                    quantifier,
                    relop,
                    domain: Domain::Wd,
                    style: Style::Equations,
                };
                let a = encode(&chain, &req).unwrap();
                let b = encode(&mdp, &req).unwrap();
                for val in grid_for(Domain::Wd).valuations(&chain.params) {
                    let asg_a = canonical_assignment(&chain, &val, &req).unwrap();
                    let asg_b = canonical_assignment(&mdp, &val, &req).unwrap();
                    assert_eq!(a.eval(&asg_a).unwrap(), b.eval(&asg_b).unwrap());
                }
            }
        }
    }
}

fn assignment(reals: &[(&str, Rational)], bools: &[(&str, bool)]) -> Assignment {
    Assignment {
        reals: reals
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
        bools: bools.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

use paramark::polyalg::Rational;

/// Two states that may bounce between each other forever, next to an
/// action that reaches the target with probability 1/10.
const BOUNCE: &str = "\
@type pmdp
@params
@states s1 s2 goal sink
@init s1
@targets goal
s1 [alpha] -> s2 : 1
s1 [beta] -> goal : 1/10
s1 [beta] -> sink : 9/10
s2 [alpha] -> s1 : 1
goal [alpha] -> goal : 1
sink [alpha] -> sink : 1
";

#[test]
fn lower_bound_encoding_rejects_end_component_values() {
    let model = parse_model(BOUNCE).unwrap();
    let p = |s: &str| Polynomial::var(&format!("p_{s}"));
    let r = |s: &str| Polynomial::var(&format!("r_{s}"));
    let q = |s: &str| Formula::boolean(format!("q_{s}"));
    let eq = |a: Polynomial, b: Polynomial| Formula::atom(a, Cmp::Eq, b);
    let gt = |a: Polynomial, b: Polynomial| Formula::atom(a, Cmp::Gt, b);
    let c = |n: i64, d: i64| Polynomial::constant(rat(n, d));
    // The lower-bound existential form with a plain disjunction over the
    // action equations.
    let unrepaired = Formula::and([
        q("goal"),
        eq(p("goal"), c(1, 1)),
        Formula::iff(
            q("s1"),
            Formula::or([
                Formula::and([q("s2"), gt(r("s1"), r("s2"))]),
                Formula::and([q("goal"), gt(r("s1"), r("goal"))]),
                Formula::and([q("sink"), gt(r("s1"), r("sink"))]),
            ]),
        ),
        Formula::iff(q("s2"), Formula::and([q("s1"), gt(r("s2"), r("s1"))])),
        Formula::iff(
            q("sink"),
            Formula::and([q("sink"), gt(r("sink"), r("sink"))]),
        ),
        Formula::implies(Formula::not(q("sink")), eq(p("sink"), c(0, 1))),
        Formula::implies(
            q("s1"),
            Formula::or([
                eq(p("s1"), p("s2")),
                eq(p("s1"), &c(1, 10) * &p("goal") + &c(9, 10) * &p("sink")),
            ]),
        ),
        Formula::implies(q("s2"), eq(p("s2"), p("s1"))),
        Formula::atom(p("s1"), Cmp::Ge, c(1, 2)),
    ]);
    let spurious = assignment(
        &[
            ("p_s1", rat(1, 1)),
            ("p_s2", rat(1, 1)),
            ("p_goal", rat(1, 1)),
            ("p_sink", rat(0, 1)),
            ("r_goal", rat(0, 1)),
            ("r_s1", rat(1, 1)),
            ("r_s2", rat(2, 1)),
            ("r_sink", rat(5, 1)),
        ],
        &[
            ("q_s1", true),
            ("q_s2", true),
            ("q_goal", true),
            ("q_sink", false),
        ],
    );
    assert!(unrepaired.eval(&spurious).unwrap());

    let req = EncodingRequest {
        quantifier: Quantifier::Exists,
        relop: Relop::Ge,
        domain: Domain::Wd,
        style: Style::Equations,
    };
    let repaired = encode(&model, &req).unwrap();
    // No rank order makes the bouncing values acceptable.
    for (r1, r2) in [(1, 2), (2, 1), (1, 1), (3, 2)] {
        let mut asg = spurious.clone();
        asg.reals.insert("r_s1".into(), rat(r1, 1));
        asg.reals.insert("r_s2".into(), rat(r2, 1));
        assert!(!repaired.eval(&asg).unwrap());
    }
    let truth = canonical_assignment(&model, &Valuation::new(), &req).unwrap();
    assert_eq!(truth.reals["p_s1"], rat(1, 10));
    assert!(!repaired.eval(&truth).unwrap());
}

#[test]
fn positivity_flags_cannot_undershoot() {
    // A single step into the target: without the closure conjunct, q_s0
    // could be false with a large target rank, forcing p_s0 = 0.
    let model = parse_model(
        "@type pmc\n@params\n@states s0 t\n@init s0\n@targets t\ns0 -> t : 1\nt -> t : 1\n",
    )
    .unwrap();
    let f = encode_pmc(&model, Relop::Le, Domain::Wd).unwrap();
    let asg = assignment(
        &[
            ("p_s0", rat(0, 1)),
            ("p_t", rat(1, 1)),
            ("r_s0", rat(0, 1)),
            ("r_t", rat(5, 1)),
        ],
        &[("q_s0", false), ("q_t", true)],
    );
    assert!(!f.eval(&asg).unwrap());
}

#[test]
fn well_definedness_of_knuth_yao_die() {
    let model = fixture("knuth_yao_die");
    let wd = encode_wd(&model);
    let gp = encode_gp(&model);
    for (x, y, in_wd, in_gp) in [
        (rat(0, 1), rat(1, 2), true, false),
        (rat(1, 3), rat(1, 1), true, false),
        (rat(1, 3), rat(2, 3), true, true),
        (rat(-1, 3), rat(1, 2), false, false),
        (rat(1, 2), rat(3, 2), false, false),
    ] {
        let asg = assignment(&[("x", x), ("y", y)], &[]);
        assert_eq!(wd.eval(&asg).unwrap(), in_wd);
        assert_eq!(gp.eval(&asg).unwrap(), in_gp);
    }
    // Only bounds on the parameters survive simplification.
    let (reals, bools) = wd.variables();
    assert_eq!(reals.into_iter().collect::<Vec<_>>(), ["x", "y"]);
    assert!(bools.is_empty());
}

#[test]
fn rock_paper_scissors_well_definedness() {
    let model = fixture("rock_paper_scissors");
    let wd = encode_wd(&model);
    let third = rat(1, 3);
    let mut reals: Vec<(&str, Rational)> = ["x_R", "x_P", "x_S", "x_R'", "x_P'", "x_S'"]
        .iter()
        .map(|p| (*p, third.clone()))
        .collect();
    assert!(wd.eval(&assignment(&reals, &[])).unwrap());
    reals[0].1 = rat(1, 2);
    assert!(!wd.eval(&assignment(&reals, &[])).unwrap());
    // Each player's three values must sum to one: one equation per player.
    let sums = wd
        .conjuncts()
        .into_iter()
        .filter(|c| matches!(c, Formula::Atom(a) if a.cmp == Cmp::Eq))
        .count();
    assert_eq!(sums, 2);
}

#[test]
fn unrealisable_chain_has_unsatisfiable_gp_formula() {
    let model = fixture("negative_label");
    let gp = encode_gp(&model);
    for x in [rat(-1, 1), rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)] {
        assert!(!gp.eval(&assignment(&[("x", x)], &[])).unwrap());
    }
}
