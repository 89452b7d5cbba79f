use arrhenius_lab::config::{GridPoint, Mode, SolverChoice, SweepConfig};
use arrhenius_lab::experiments::{aggregate, verify_bounds, BoundStatus, SweepResult};
use arrhenius_lab::run_sweep;

fn point(sigma_b: f64) -> GridPoint {
    GridPoint {
        graph: "hypercube:10".parse().unwrap(),
        mode: Mode::Iid,
        sigma_w: 1.0,
        sigma_b,
        sigma_f: 0.0,
        lambda: None,
        separable: None,
    }
}

#[test]
fn low_mean_fails_bound() {
    let cfg = SweepConfig {
        graphs: vec!["hypercube:10".parse().unwrap()],
        mode: Mode::Iid,
        sigma_w: vec![1.0],
        sigma_b: vec![0.1],
        sigma_f: vec![0.0],
        lambda: vec![],
        separable: None,
        trials: 3,
        master_seed: 1,
        solver: SolverChoice::Auto,
        workers: 1,
        output: Default::default(),
    };
    let mut result: SweepResult = run_sweep(&cfg).unwrap();
    assert!(verify_bounds(&result).all_pass);
    // Pretend the trials came out far below the bound.
    for r in &mut result.records {
        r.rho = Some(0.5 + 1e-3 * r.trial as f64);
    }
    result.aggregates = vec![aggregate(&point(0.1), &result.records)];
    let rep = verify_bounds(&result);
    assert_eq!(rep.entries[0].status, BoundStatus::Fail);
    assert!(!rep.all_pass);
}

#[test]
fn rem_bound_points() {
    let cfg = SweepConfig {
        graphs: vec!["hypercube:8".parse().unwrap()],
        mode: Mode::Rem,
        sigma_w: vec![1.0],
        sigma_b: vec![0.0],
        sigma_f: vec![0.0],
        lambda: vec![0.0, 0.95, 1.0],
        separable: None,
        trials: 4,
        master_seed: 3,
        solver: SolverChoice::Auto,
        workers: 2,
        output: Default::default(),
    };
    let result = run_sweep(&cfg).unwrap();
    let rep = verify_bounds(&result);
    assert_eq!(rep.entries[0].status, BoundStatus::NotBinding);
    assert_eq!(rep.entries[1].status, BoundStatus::Pass);
    assert_eq!(rep.entries[2].status, BoundStatus::Pass);
    assert_eq!(rep.entries[2].bound, Some(1.0));
    assert!(result.records_for(2).iter().all(|r| r.rho == Some(1.0)));
}

#[test]
fn shipped_configs_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = SweepConfig::from_path(&path).unwrap();
        cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 4);
}
