// SPDX-License-Identifier: Apache-2.0

mod common;

use editpath_model::optim::Adam;
use editpath_model::params::Dims;
use editpath_model::{
    load_checkpoint, read_checkpoint, save_checkpoint, train, write_checkpoint, Model, ModelConfig,
    ModelError, Optimizer, OptimizerRegistry, StopReason, TrainConfig,
};

fn small(max_steps: usize) -> TrainConfig {
    TrainConfig {
        dims: Dims { d: 16, h: 24 },
        batch_size: 8,
        max_steps,
        eval_every: 10,
        patience: 1000,
        ..TrainConfig::default()
    }
}

#[test]
fn memorizes_one_example() {
    let ex = common::examples(101, 1);
    let cfg = TrainConfig {
        max_steps: 300,
        eval_every: 25,
        patience: 1000,
        ..TrainConfig::default()
    };
    let (m, report) = train(&ex, &ex, &cfg, &mut |_| {}).unwrap();
    assert_eq!(report.stopped, StopReason::MaxSteps);
    let (prep, f) = m.featurize(&ex[0]).unwrap();
    let loss = m.loss(&f);
    assert!(loss < 0.01, "{loss}");
    let pred = m.predict(&f);
    assert!(pred.ended);
    assert_eq!(pred.ops(&prep), prep.gold_ops);
}

#[test]
fn same_seed_same_log_and_params() {
    let ex = common::examples(102, 12);
    let (tr, va) = ex.split_at(9);
    let cfg = small(40);
    let mut lines_a = Vec::new();
    let (ma, ra) = train(tr, va, &cfg, &mut |l| lines_a.push(l.to_string())).unwrap();
    let mut lines_b = Vec::new();
    let (mb, rb) = train(tr, va, &cfg, &mut |l| lines_b.push(l.to_string())).unwrap();
    assert_eq!(lines_a.len(), 40);
    assert_eq!(lines_a, lines_b);
    assert_eq!(ra.log, rb.log);
    assert!(ma
        .params
        .data
        .iter()
        .zip(&mb.params.data)
        .all(|(a, b)| a.to_bits() == b.to_bits()));

    let other = TrainConfig { seed: 1, ..cfg };
    let (_, rc) = train(tr, va, &other, &mut |_| {}).unwrap();
    assert_ne!(ra.log, rc.log);
}

#[test]
fn metrics_line_format() {
    let ex = common::examples(103, 4);
    let mut lines = Vec::new();
    train(&ex[..3], &ex[3..], &small(3), &mut |l| {
        lines.push(l.to_string())
    })
    .unwrap();
    assert_eq!(lines.len(), 3);
    for (i, l) in lines.iter().enumerate() {
        let parts: Vec<&str> = l.split(' ').collect();
        assert_eq!(parts.len(), 3, "{l}");
        assert_eq!(parts[0], format!("step={}", i + 1));
        assert!(parts[1]
            .strip_prefix("loss=")
            .unwrap()
            .parse::<f64>()
            .is_ok());
        assert!(parts[2]
            .strip_prefix("val_acc=")
            .unwrap()
            .parse::<f64>()
            .is_ok());
    }
}

#[test]
fn zero_learning_rate_leaves_parameters_unchanged() {
    let ex = common::examples(104, 6);
    let cfg = TrainConfig {
        learning_rate: 0.0,
        ..small(15)
    };
    let (m, _) = train(&ex[..4], &ex[4..], &cfg, &mut |_| {}).unwrap();
    let fresh = Model::new(m.config, m.vocab.clone(), cfg.seed);
    assert_eq!(m.params, fresh.params);

    let mut p = fresh.params.clone();
    let mut g = fresh.params.clone();
    g.fill(0.3);
    let mut adam = Adam::new(0.0, &p.layout);
    adam.step(&mut p, &g);
    assert_eq!(p, fresh.params);
}

#[test]
fn early_stops_on_target_and_patience() {
    let ex = common::examples(105, 6);
    let target = TrainConfig {
        target_accuracy: Some(0.0),
        ..small(50)
    };
    let (_, r) = train(&ex[..4], &ex[4..], &target, &mut |_| {}).unwrap();
    assert_eq!((r.stopped, r.steps), (StopReason::Target, 0));

    let patient = TrainConfig {
        learning_rate: 0.0,
        eval_every: 5,
        patience: 2,
        ..small(50)
    };
    let (_, r) = train(&ex[..4], &ex[4..], &patient, &mut |_| {}).unwrap();
    assert_eq!((r.stopped, r.steps), (StopReason::Patience, 10));
}

#[test]
fn huge_learning_rate_reports_divergence() {
    let ex = common::examples(106, 4);
    let cfg = TrainConfig {
        learning_rate: 1e300,
        ..small(20)
    };
    match train(&ex[..3], &ex[3..], &cfg, &mut |_| {}) {
        Err(ModelError::Divergence { step, .. }) => assert!(step <= 20),
        other => panic!("{:?}", other.map(|(_, r)| r.stopped)),
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let ex = common::examples(107, 2);
    for cfg in [
        TrainConfig {
            dropout: 1.0,
            ..small(1)
        },
        TrainConfig {
            dropout: -0.1,
            ..small(1)
        },
        TrainConfig {
            learning_rate: -1.0,
            ..small(1)
        },
        TrainConfig {
            batch_size: 0,
            ..small(1)
        },
        TrainConfig {
            teacher_forcing: false,
            ..small(1)
        },
        TrainConfig {
            optimizer: "lbfgs".into(),
            ..small(1)
        },
    ] {
        assert!(matches!(
            train(&ex[..1], &ex[1..], &cfg, &mut |_| {}),
            Err(ModelError::Invalid(_))
        ));
    }
    assert!(train(&ex, &[], &small(1), &mut |_| {}).is_err());
}

#[test]
fn optimizers_are_looked_up_by_name() {
    let reg = OptimizerRegistry::default();
    assert_eq!(reg.names(), vec!["adam", "sgd"]);
    let ex = common::examples(108, 1);
    let m = Model::new(
        ModelConfig::default(),
        editpath_model::build_vocab(&ex, 1).unwrap(),
        0,
    );
    let mut p = m.params.clone();
    let mut g = m.params.clone();
    g.fill(1.0);
    let mut sgd = reg.build("sgd", 0.5, &p.layout).unwrap();
    assert_eq!(sgd.name(), "sgd");
    sgd.step(&mut p, &g);
    assert!(p
        .data
        .iter()
        .zip(&m.params.data)
        .all(|(a, b)| *a == b - 0.5));
    assert!(reg.build("rmsprop", 0.1, &p.layout).is_none());
}

#[test]
fn checkpoint_round_trips_bitwise() {
    let ex = common::examples(109, 5);
    let (m, _) = train(&ex[..4], &ex[4..], &small(5), &mut |_| {}).unwrap();
    let bytes = write_checkpoint(&m);
    let back = read_checkpoint(&bytes).unwrap();
    assert_eq!(back, m);
    assert_eq!(write_checkpoint(&back), bytes);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.ckpt");
    save_checkpoint(&m, &path).unwrap();
    let loaded = load_checkpoint(&path).unwrap();
    assert!(loaded
        .params
        .data
        .iter()
        .zip(&m.params.data)
        .all(|(a, b)| a.to_bits() == b.to_bits()));
    let (_, f) = m.featurize(&ex[4]).unwrap();
    assert_eq!(loaded.predict(&f), m.predict(&f));
}

#[test]
fn corrupt_checkpoints_are_rejected() {
    let ex = common::examples(110, 1);
    let m = Model::new(
        ModelConfig::default(),
        editpath_model::build_vocab(&ex, 1).unwrap(),
        0,
    );
    let bytes = write_checkpoint(&m);
    assert!(read_checkpoint(&bytes[..bytes.len() - 8]).is_err());
    assert!(read_checkpoint(b"NOPE").is_err());
    let mut wrong_version = bytes.clone();
    wrong_version[4] = 9;
    assert!(read_checkpoint(&wrong_version).is_err());
    let mut extra = bytes;
    extra.extend_from_slice(&[0; 8]);
    assert!(matches!(
        read_checkpoint(&extra),
        Err(ModelError::Checkpoint(_))
    ));
}
