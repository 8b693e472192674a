use std::time::Instant;
use flashsnn_core::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let theta0: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(20.0);
    let theta_plus: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(4.0);
    let tau_h: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(500.0);
    let n_post: usize = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(20);
    let case: LtdCase = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(LtdCase::Case3);
    let homeo: bool = args.get(6).map(|s| s.parse().unwrap()).unwrap_or(true);

    let dir = flashsnn_testdata::dataset_dir();
    let t0 = Instant::now();
    let train_set = Dataset::from_idx_files(&dir.join("train-images-idx3-ubyte"), &dir.join("train-labels-idx1-ubyte"), 128).unwrap();
    let test_set = Dataset::from_idx_files(&dir.join("t10k-images-idx3-ubyte"), &dir.join("t10k-labels-idx1-ubyte"), 128).unwrap();
    eprintln!("load: {:?} train={} test={}", t0.elapsed(), train_set.len(), test_set.len());
    let mean_ink: f64 = train_set.images().iter().take(1000).map(|x| x.count_ones() as f64).sum::<f64>() / 1000.0;
    eprintln!("mean active pixels: {mean_ink:.1}");

    let mut cfg = RunConfig {
        n_post,
        seed: 42,
        neuron: NeuronParams { theta_0: theta0, theta_plus, tau_h },
        device: DeviceParams { ltd_case: case, ..DeviceParams::default() },
        ..RunConfig::default()
    };
    if !homeo { cfg = cfg.homeostasis_off(); }

    let t0 = Instant::now();
    let (outcome, metrics) = run_experiment(&train_set, &test_set, &cfg).unwrap();
    println!(
        "n_post={n_post} case={case} homeo={homeo} theta0={theta0} theta+={theta_plus} tau={tau_h} -> rate={:.4} active={}/{} assigned={} time={:?}",
        metrics.recognition_rate,
        metrics.active_neurons(),
        n_post,
        outcome.assignment.assigned_count(),
        t0.elapsed()
    );
    let unc: u64 = metrics.unclassified.iter().sum();
    println!("unclassified: {unc}");
}
