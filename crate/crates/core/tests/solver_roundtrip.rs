use std::path::PathBuf;
use std::time::Duration;

use paramark::etr::{
    check_witness, encode, in_domain, parse_solver_model, to_smt_script_with, EncodingRequest,
    SolverStatus, Style,
};
use paramark::model::ModelKind;
use paramark::oracle::{random_simple_model, GridKind, GridSpec};
use paramark::polyalg::rat;
use paramark::solver::{configured_solver, run_solver};
use paramark::types::{Domain, Quantifier, Relop};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solver() -> Option<PathBuf> {
    configured_solver(None).or_else(|| {
        let default = PathBuf::from("/usr/local/bin/z3");
        default.exists().then_some(default)
    })
}

/// Every solver answer is checked: a satisfying witness must pass exact
/// verification, and an unsatisfiable answer must not contradict a grid
/// witness.
#[test]
fn solver_answers_agree_with_exact_evaluation() {
    let Some(z3) = solver() else {
        eprintln!("no solver available; skipping");
        return;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..24 {
        let kind = if i % 3 == 0 {
            ModelKind::Pmc
        } else {
            ModelKind::Pmdp
        };
        let model = random_simple_model(&mut rng, kind, 5, 2);
        for quantifier in [Quantifier::Exists, Quantifier::Forall] {
            for relop in Relop::ALL {
                for domain in [Domain::Gp, Domain::Wd] {
                    let req = EncodingRequest {
                        quantifier,
                        relop,
                        domain,
                        style: Style::Equations,
                    };
                    let f = encode(&model, &req).unwrap();
                    let script = to_smt_script_with(&f, &model.params);
                    let out = run_solver(&z3, &script, Duration::from_secs(30)).unwrap();
                    let verdict = parse_solver_model(&out, &model.params).unwrap();
                    match verdict.status {
                        SolverStatus::Sat => {
                            sat += 1;
                            if let Some(w) = verdict.witness {
                                assert!(
                                    in_domain(&model, &w, domain).unwrap()
                                        && check_witness(&model, quantifier, relop, &rat(1, 2), &w)
                                            .unwrap(),
                                    "{req:?}\n{}\n{w:?}",
                                    paramark::io::print_model(&model)
                                );
                            }
                        }
                        SolverStatus::Unsat => {
                            unsat += 1;
                            let kind = if domain == Domain::Gp {
                                GridKind::GpInterior
                            } else {
                                GridKind::WdClosed
                            };
                            for val in GridSpec::new(6, kind).valuations(&model.params) {
                                if in_domain(&model, &val, domain).unwrap() {
                                    assert!(
                                        !check_witness(&model, quantifier, relop, &rat(1, 2), &val)
                                            .unwrap(),
                                        "{req:?}\n{}\n{val:?}",
                                        paramark::io::print_model(&model)
                                    );
                                }
                            }
                        }
                        other => panic!("solver answered {other:?}"),
                    }
                }
            }
        }
    }
    eprintln!("sat {sat}, unsat {unsat}");
    assert!(sat > 0 && unsat > 0);
}
