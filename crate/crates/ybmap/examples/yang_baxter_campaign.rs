//! Seeded verification campaigns: the parameter-dependent Yang-Baxter
//! relation and reversibility for all three map families.
//!
//! Run with `cargo run --release --example yang_baxter_campaign`.

use ybmap::verify::{
    check_reversibility, check_yang_baxter, CampaignConfig, GrassmannianFamily, MapFamily,
    ProjectorFamily, VectorFamily, VerificationReport,
};
use ybmap::Tolerances;

fn show(report: &VerificationReport) {
    println!(
        "  {:<14} {:<13} max deviation {:.3e} (tol {:.0e})  certificate {:.3e}  failures {}",
        report.family,
        report.check,
        report.max_deviation,
        report.tol,
        report.max_certificate_residual,
        report.failures.len()
    );
}

fn campaign<F: MapFamily>(family: &F, trials: u64, seed: u64, tols: &Tolerances) {
    let yb = check_yang_baxter(family, &CampaignConfig::new(trials, seed, 1e-9), tols);
    let reversibility =
        check_reversibility(family, &CampaignConfig::new(trials, seed, 1e-10), tols);
    show(&yb);
    show(&reversibility);
}

fn main() {
    let tols = Tolerances::default();
    let trials = 1000;
    let seed = 0;
    println!("{trials} trials per campaign, seed {seed}:");
    campaign(&VectorFamily::default(), trials, seed, &tols);
    campaign(&ProjectorFamily::default(), trials, seed, &tols);
    campaign(&GrassmannianFamily::default(), trials, seed, &tols);
    println!("\nreports are deterministic: rerun with the same seed for byte-identical JSON");
}
