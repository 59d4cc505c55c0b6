use isoterm::suite::*;
fn main() {
    let cfg = SuiteConfig::default();
    for name in SUITE_NAMES { let r = run_suite(name, &cfg).unwrap(); println!("{r}"); }
}
