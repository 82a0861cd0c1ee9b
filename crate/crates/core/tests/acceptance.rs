use posetsat::suite::{run_criterion, Scale};

fn main() {
    let mut failed = 0;
    for id in 1..=11 {
        let row = run_criterion(id, Scale::Full);
        let status = if row.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} [{} ms] {}: {}", row.id, row.millis, row.title, row.measured);
        if !row.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
