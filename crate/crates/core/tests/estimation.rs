use qmarginal::marginal::build_qmarginal;
use qmarginal::qmci::{
    classical_mc_estimate, convergence_study, exact_amplitude, mlae_estimate, GroverEngine, Method,
    OutcomePredicate,
};
use qmarginal::reversible::compile;
use qmarginal::sampler::{make_builtin, random_network, Builtin, RandomNetworkParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn estimates_land_within_five_rmse_at_the_largest_budget() {
    let net = make_builtin(Builtin::Popcount { m: 3 }).unwrap();
    let pred = OutcomePredicate::AtLeast(2);
    let study = convergence_study(&net, &pred, &[1024, 16384], 50, 11).unwrap();
    let a = study.true_value;
    assert_eq!(a, 0.5);

    let classical = study.rows_for(Method::Classical).last().unwrap().clone();
    let mlae = study.rows_for(Method::Mlae).last().unwrap().clone();
    let circuit = build_qmarginal(&compile(&net));
    for seed in 0..20 {
        let c = classical_mc_estimate(&net, &pred, classical.queries, seed).unwrap();
        assert!((c.estimate - a).abs() <= 5.0 * classical.rmse, "classical seed {seed}: {}", c.estimate);
        let q = mlae_estimate(&circuit, &pred, &mlae.schedule, mlae.shots_per_k, seed).unwrap();
        assert_eq!(q.queries, mlae.queries);
        assert!((q.estimate - a).abs() <= 5.0 * mlae.rmse, "mlae seed {seed}: {}", q.estimate);
    }
}

#[test]
fn grover_law_on_random_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let params = RandomNetworkParams { max_width: Some(16), ..Default::default() };
    let mut tested = 0;
    while tested < 25 {
        let net = random_network(&mut rng, &params);
        let n = net.num_outputs();
        let set: Vec<usize> = (0..1usize << n).filter(|_| rng.random_bool(0.5)).collect();
        let pred = OutcomePredicate::Set(set);
        let Ok(a) = exact_amplitude(&net, &pred) else { continue };
        if a <= 0.0 || a >= 1.0 {
            continue;
        }
        let circuit = build_qmarginal(&compile(&net));
        let engine = GroverEngine::new(&circuit, &pred).unwrap();
        let theta = a.sqrt().asin();
        for (k, p) in engine.probabilities(&(0..=8).collect::<Vec<_>>()).unwrap().into_iter().enumerate() {
            let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
            assert!((p - want).abs() <= 1e-9, "k={k}: {p} vs {want}");
        }
        tested += 1;
    }
}

#[test]
fn studies_are_reproducible() {
    let net = make_builtin(Builtin::Popcount { m: 2 }).unwrap();
    let pred = OutcomePredicate::Set(vec![0]);
    let run = || convergence_study(&net, &pred, &[64, 256, 1024], 8, 3).unwrap().to_csv();
    assert_eq!(run(), run());
}
