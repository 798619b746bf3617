fn main() {
    let args: Vec<String> = std::env::args().collect();
    let ids: Vec<usize> = if args.len() > 1 {
        args[1..].iter().map(|a| a.parse().unwrap()).collect()
    } else {
        (1..=11).collect()
    };
    for id in ids {
        let r = exwb_core::suite::run_criterion(id);
        println!(
            "[{}] criterion {:2} {:34} {:7.2}s  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id, r.name, r.seconds, r.details
        );
    }
}
