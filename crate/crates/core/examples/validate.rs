//! Run every reproduction check and print one line per criterion.

fn main() {
    let results = donorqc::validation::run_all();
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
}
